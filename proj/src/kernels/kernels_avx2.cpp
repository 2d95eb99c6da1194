// AVX2/FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be entered after the CPUID check in the
// dispatcher (see kernels.cpp).

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "shg/kernels.hpp"
#include "bessel_scheme.hpp"

namespace shg::kernels::avx2 {

namespace {

// --------------------------------------------------------------------------
// Vector sin/cos: Cody-Waite reduction by pi/2 (fdlibm split constants) and
// the fdlibm kernel polynomials on [-pi/4, pi/4]. Good to a few ulp for
// |x| up to ~1e6, which covers every caller (phases and Hankel arguments).
// --------------------------------------------------------------------------

const __m256d INV_PIO2 = _mm256_set1_pd(6.36619772367581382433e-01);
const __m256d PIO2_1 = _mm256_set1_pd(1.57079632673412561417e+00);
const __m256d PIO2_1T = _mm256_set1_pd(6.07710050650619224932e-11);
const __m256d SIGN_MASK = _mm256_castsi256_pd(_mm256_set1_epi64x(0x8000000000000000LL));

const __m256d S1 = _mm256_set1_pd(-1.66666666666666324348e-01);
const __m256d S2 = _mm256_set1_pd(8.33333333332248946124e-03);
const __m256d S3 = _mm256_set1_pd(-1.98412698298579493134e-04);
const __m256d S4 = _mm256_set1_pd(2.75573137070700676789e-06);
const __m256d S5 = _mm256_set1_pd(-2.50507602534068634195e-08);
const __m256d S6 = _mm256_set1_pd(1.58969099521155010221e-10);

const __m256d C1 = _mm256_set1_pd(4.16666666666666019037e-02);
const __m256d C2 = _mm256_set1_pd(-1.38888888888741095749e-03);
const __m256d C3 = _mm256_set1_pd(2.48015872894767294178e-05);
const __m256d C4 = _mm256_set1_pd(-2.75573143513906633035e-07);
const __m256d C5 = _mm256_set1_pd(2.08757232129817482790e-09);
const __m256d C6 = _mm256_set1_pd(-1.13596475577881948265e-11);

inline void sincos4(__m256d x, __m256d& s_out, __m256d& c_out) {
    const __m256d fn = _mm256_round_pd(_mm256_mul_pd(x, INV_PIO2),
                                       _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    // r = (x - n*pio2_1) - n*pio2_1t
    __m256d r = _mm256_fnmadd_pd(fn, PIO2_1, x);
    r = _mm256_fnmadd_pd(fn, PIO2_1T, r);

    const __m256d y = _mm256_mul_pd(r, r);

    // sin kernel: r + r^3 * S(y)
    __m256d sp = S6;
    sp = _mm256_fmadd_pd(sp, y, S5);
    sp = _mm256_fmadd_pd(sp, y, S4);
    sp = _mm256_fmadd_pd(sp, y, S3);
    sp = _mm256_fmadd_pd(sp, y, S2);
    sp = _mm256_fmadd_pd(sp, y, S1);
    const __m256d sr = _mm256_fmadd_pd(_mm256_mul_pd(y, r), sp, r);

    // cos kernel: 1 - y/2 + y^2 * C(y)
    __m256d cp = C6;
    cp = _mm256_fmadd_pd(cp, y, C5);
    cp = _mm256_fmadd_pd(cp, y, C4);
    cp = _mm256_fmadd_pd(cp, y, C3);
    cp = _mm256_fmadd_pd(cp, y, C2);
    cp = _mm256_fmadd_pd(cp, y, C1);
    __m256d cr = _mm256_fmadd_pd(_mm256_mul_pd(y, y), cp,
                                 _mm256_fnmadd_pd(y, _mm256_set1_pd(0.5), _mm256_set1_pd(1.0)));

    // Quadrant fixup from n mod 4.
    const __m128i n32 = _mm256_cvtpd_epi32(fn);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256d swap_mask = _mm256_castsi256_pd(_mm256_slli_epi64(n64, 63));
    const __m256d sin_sign =
        _mm256_and_pd(_mm256_castsi256_pd(_mm256_slli_epi64(n64, 62)), SIGN_MASK);
    const __m256i n64p1 = _mm256_add_epi64(n64, _mm256_set1_epi64x(1));
    const __m256d cos_sign =
        _mm256_and_pd(_mm256_castsi256_pd(_mm256_slli_epi64(n64p1, 62)), SIGN_MASK);

    __m256d s = _mm256_blendv_pd(sr, cr, swap_mask);
    __m256d c = _mm256_blendv_pd(cr, sr, swap_mask);
    s_out = _mm256_xor_pd(s, sin_sign);
    c_out = _mm256_xor_pd(c, cos_sign);
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Even/odd lane sums of an accumulator register.
inline void hsum_pairs(__m256d v, double& even, double& odd) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    even = lanes[0] + lanes[2];
    odd = lanes[1] + lanes[3];
}

}  // namespace

void accumulate_cos_affine(double* dst, std::size_t n, double a, double b, double amp) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    const __m256d vamp = _mm256_set1_pd(amp);
    __m256d vi = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    const __m256d four = _mm256_set1_pd(4.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d arg = _mm256_fmadd_pd(vi, vb, va);
        __m256d s, c;
        sincos4(arg, s, c);
        const __m256d cur = _mm256_loadu_pd(dst + i);
        _mm256_storeu_pd(dst + i, _mm256_fmadd_pd(vamp, c, cur));
        vi = _mm256_add_pd(vi, four);
    }
    for (; i < n; ++i) dst[i] += amp * std::cos(a + b * double(i));
}

namespace {

using namespace bessel_scheme;

struct HankelCoef {
    double c[ASYMP_TERMS + 1];
};

constexpr HankelCoef hankel_coefs() {
    HankelCoef t{};
    t.c[0] = 1.0;
    for (int k = 1; k <= ASYMP_TERMS; ++k)
        t.c[k] = t.c[k - 1] * (-double(2 * k - 1) * double(2 * k - 1)) / (8.0 * double(k));
    return t;
}

constexpr HankelCoef HANKEL = hankel_coefs();

}  // namespace

void bessel_j0y0(const double* z, double* j0, double* y0, std::size_t n) {
    const __m256d split = _mm256_set1_pd(SPLIT_Z);
    const __m256d two_over_pi = _mm256_set1_pd(2.0 / PI);
    const __m256d egamma = _mm256_set1_pd(EULER_GAMMA);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vz = _mm256_loadu_pd(z + i);
        const __m256d series_mask = _mm256_cmp_pd(vz, split, _CMP_LE_OQ);

        // ---- power series branch (arguments clamped to the series range) ----
        const __m256d zs = _mm256_min_pd(vz, split);
        const __m256d q = _mm256_mul_pd(_mm256_set1_pd(0.25), _mm256_mul_pd(zs, zs));
        __m256d term = _mm256_set1_pd(1.0);
        __m256d js = _mm256_set1_pd(1.0);
        __m256d hs = _mm256_setzero_pd();
        double harmonic = 0.0;
        for (int m = 1; m <= SERIES_TERMS; ++m) {
            const double inv_m2 = -1.0 / (double(m) * double(m));
            term = _mm256_mul_pd(term, _mm256_mul_pd(q, _mm256_set1_pd(inv_m2)));
            js = _mm256_add_pd(js, term);
            harmonic += 1.0 / double(m);
            hs = _mm256_fnmadd_pd(term, _mm256_set1_pd(harmonic), hs);
        }
        alignas(32) double zl[4], lg[4];
        _mm256_store_pd(zl, zs);
        for (int l = 0; l < 4; ++l) lg[l] = std::log(0.5 * zl[l]);
        const __m256d lnz = _mm256_load_pd(lg);
        const __m256d ys = _mm256_mul_pd(
            two_over_pi, _mm256_fmadd_pd(_mm256_add_pd(lnz, egamma), js, hs));

        // ---- Hankel asymptotic branch ----
        const __m256d za = _mm256_max_pd(vz, split);
        const __m256d rz = _mm256_div_pd(_mm256_set1_pd(1.0), za);
        __m256d p = _mm256_set1_pd(1.0);
        __m256d qq = _mm256_setzero_pd();
        __m256d zk = _mm256_set1_pd(1.0);
        for (int k = 1; k <= ASYMP_TERMS; ++k) {
            zk = _mm256_mul_pd(zk, rz);
            const __m256d r = _mm256_mul_pd(zk, _mm256_set1_pd(HANKEL.c[k]));
            switch (k & 3) {
                case 0: p = _mm256_add_pd(p, r); break;
                case 1: qq = _mm256_add_pd(qq, r); break;
                case 2: p = _mm256_sub_pd(p, r); break;
                default: qq = _mm256_sub_pd(qq, r); break;
            }
        }
        const __m256d chi = _mm256_sub_pd(za, _mm256_set1_pd(0.25 * PI));
        __m256d sc, cc;
        sincos4(chi, sc, cc);
        const __m256d amp = _mm256_sqrt_pd(_mm256_mul_pd(two_over_pi, rz));
        const __m256d ja = _mm256_mul_pd(amp, _mm256_fmsub_pd(p, cc, _mm256_mul_pd(qq, sc)));
        const __m256d ya = _mm256_mul_pd(amp, _mm256_fmadd_pd(p, sc, _mm256_mul_pd(qq, cc)));

        _mm256_storeu_pd(j0 + i, _mm256_blendv_pd(ja, js, series_mask));
        _mm256_storeu_pd(y0 + i, _mm256_blendv_pd(ya, ys, series_mask));
    }
    if (i < n) {
        // Pad the tail to one full vector.
        alignas(32) double zt[4] = {1.0, 1.0, 1.0, 1.0};
        alignas(32) double jt[4], yt[4];
        const std::size_t rem = n - i;
        for (std::size_t l = 0; l < rem; ++l) zt[l] = z[i + l];
        bessel_j0y0(zt, jt, yt, 4);
        for (std::size_t l = 0; l < rem; ++l) {
            j0[i + l] = jt[l];
            y0[i + l] = yt[l];
        }
    }
}

void cmatvec(const cplx* d, std::size_t ns, std::size_t nq, const cplx* f, cplx* out) {
    double* o = reinterpret_cast<double*>(out);
    for (std::size_t q = 0; q < nq; ++q) {
        const double fr = f[q].real();
        const double fi = f[q].imag();
        const __m256d vfr = _mm256_set1_pd(fr);
        const __m256d vfi = _mm256_set1_pd(fi);
        const double* col = reinterpret_cast<const double*>(d + ns * q);
        std::size_t s = 0;
        for (; s + 2 <= ns; s += 2) {
            const __m256d vd = _mm256_loadu_pd(col + 2 * s);
            const __m256d vds = _mm256_permute_pd(vd, 0x5);  // [di, dr] pairs
            const __m256d t = _mm256_mul_pd(vds, vfi);
            const __m256d prod = _mm256_fmaddsub_pd(vd, vfr, t);
            _mm256_storeu_pd(o + 2 * s, _mm256_add_pd(_mm256_loadu_pd(o + 2 * s), prod));
        }
        for (; s < ns; ++s) out[s] += d[ns * q + s] * f[q];
    }
}

namespace {

// Shared accumulation for the complex dot products: acc1 += a*b lanewise,
// acc2 += a*swap(b) lanewise; the final recombination differs per product.
inline void cdot_accumulate(const cplx* a, const cplx* b, std::size_t n,
                            double& e1, double& o1, double& e2, double& o2,
                            std::size_t& done) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        const __m256d vbs = _mm256_permute_pd(vb, 0x5);
        acc1 = _mm256_fmadd_pd(va, vb, acc1);
        acc2 = _mm256_fmadd_pd(va, vbs, acc2);
    }
    hsum_pairs(acc1, e1, o1);
    hsum_pairs(acc2, e2, o2);
    done = i;
}

}  // namespace

cplx cdotu(const cplx* a, const cplx* b, std::size_t n) {
    double e1, o1, e2, o2;
    std::size_t i;
    cdot_accumulate(a, b, n, e1, o1, e2, o2, i);
    cplx acc(e1 - o1, e2 + o2);
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

cplx cdotc(const cplx* a, const cplx* b, std::size_t n) {
    double e1, o1, e2, o2;
    std::size_t i;
    cdot_accumulate(a, b, n, e1, o1, e2, o2, i);
    cplx acc(e1 + o1, o2 - e2);
    for (; i < n; ++i) acc += a[i] * std::conj(b[i]);
    return acc;
}

cplx rdotc(const double* w, const cplx* b, std::size_t n) {
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m128d w0 = _mm_loaddup_pd(w + i);
        const __m128d w1 = _mm_loaddup_pd(w + i + 1);
        const __m256d vw = _mm256_insertf128_pd(_mm256_castpd128_pd256(w0), w1, 1);
        acc = _mm256_fmadd_pd(vw, _mm256_loadu_pd(pb + 2 * i), acc);
    }
    double e, o;
    hsum_pairs(acc, e, o);
    cplx out(e, o);
    for (; i < n; ++i) out += w[i] * b[i];
    return out;
}

}  // namespace shg::kernels::avx2

#endif  // x86_64
