#include <cmath>
#include <cstddef>

#include "shg/kernels.hpp"
#include "bessel_scheme.hpp"

// Reference kernels. Plain loops, no intrinsics; these define the semantics
// the SIMD variants are tested against.

namespace shg::kernels::scalar {

void accumulate_cos_affine(double* dst, std::size_t n, double a, double b, double amp) {
    for (std::size_t i = 0; i < n; ++i)
        dst[i] += amp * std::cos(a + b * double(i));
}

namespace {

using namespace bessel_scheme;

void j0y0_one(double z, double& j0, double& y0) {
    if (z <= SPLIT_Z) {
        const double q = 0.25 * z * z;
        // J0 = sum (-1)^m q^m / (m!)^2
        double term = 1.0;
        double j = 1.0;
        // Y0 companion sum: sum_{m>=1} (-1)^{m+1} H_m q^m / (m!)^2
        double hsum = 0.0;
        double harmonic = 0.0;
        for (int m = 1; m <= SERIES_TERMS; ++m) {
            term *= -q / (double(m) * double(m));
            j += term;
            harmonic += 1.0 / double(m);
            hsum -= term * harmonic;  // -term carries the (-1)^{m+1} sign
        }
        j0 = j;
        y0 = (2.0 / PI) * ((std::log(0.5 * z) + EULER_GAMMA) * j + hsum);
    } else {
        // Hankel symbols (0,k) = (0,k-1) * -(2k-1)^2 / (8k); the amplitude
        // series is A(z) = sum_k (0,k) (i/z)^k = P + iQ.
        double p = 1.0, qq = 0.0;
        double c = 1.0;
        double zk = 1.0;
        for (int k = 1; k <= ASYMP_TERMS; ++k) {
            c *= -double(2 * k - 1) * double(2 * k - 1) / (8.0 * double(k));
            zk /= z;
            const double r = c * zk;
            switch (k & 3) {
                case 0: p += r; break;
                case 1: qq += r; break;
                case 2: p -= r; break;
                default: qq -= r; break;
            }
        }
        const double chi = z - 0.25 * PI;
        const double amp = std::sqrt(2.0 / (PI * z));
        const double cc = std::cos(chi), ss = std::sin(chi);
        j0 = amp * (p * cc - qq * ss);
        y0 = amp * (p * ss + qq * cc);
    }
}

}  // namespace

void bessel_j0y0(const double* z, double* j0, double* y0, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) j0y0_one(z[i], j0[i], y0[i]);
}

void cmatvec(const cplx* d, std::size_t ns, std::size_t nq, const cplx* f, cplx* out) {
    for (std::size_t q = 0; q < nq; ++q) {
        const cplx fq = f[q];
        const cplx* col = d + ns * q;
        for (std::size_t s = 0; s < ns; ++s) out[s] += col[s] * fq;
    }
}

cplx cdotu(const cplx* a, const cplx* b, std::size_t n) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

cplx cdotc(const cplx* a, const cplx* b, std::size_t n) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * std::conj(b[i]);
    return acc;
}

cplx rdotc(const double* w, const cplx* b, std::size_t n) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * b[i];
    return acc;
}

}  // namespace shg::kernels::scalar
