#include "shg/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace shg::kernels {

namespace scalar {
void accumulate_cos_affine(double*, std::size_t, double, double, double);
void bessel_j0y0(const double*, double*, double*, std::size_t);
void cmatvec(const cplx*, std::size_t, std::size_t, const cplx*, cplx*);
cplx cdotu(const cplx*, const cplx*, std::size_t);
cplx cdotc(const cplx*, const cplx*, std::size_t);
cplx rdotc(const double*, const cplx*, std::size_t);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void accumulate_cos_affine(double*, std::size_t, double, double, double);
void bessel_j0y0(const double*, double*, double*, std::size_t);
void cmatvec(const cplx*, std::size_t, std::size_t, const cplx*, cplx*);
cplx cdotu(const cplx*, const cplx*, std::size_t);
cplx cdotc(const cplx*, const cplx*, std::size_t);
cplx rdotc(const double*, const cplx*, std::size_t);
}  // namespace avx2
#endif

namespace {

const KernelTable SCALAR_TABLE = {
    &scalar::accumulate_cos_affine, &scalar::bessel_j0y0, &scalar::cmatvec,
    &scalar::cdotu, &scalar::cdotc, &scalar::rdotc,
};

#if defined(__x86_64__) || defined(_M_X64)
const KernelTable AVX2_TABLE = {
    &avx2::accumulate_cos_affine, &avx2::bessel_j0y0, &avx2::cmatvec,
    &avx2::cdotu, &avx2::cdotc, &avx2::rdotc,
};
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect_isa() {
    if (const char* env = std::getenv("SHG_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Isa::avx2;
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<const KernelTable*> g_active{nullptr};
std::atomic<Isa> g_isa{Isa::scalar};

const KernelTable* active() {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (!t) {
        const Isa isa = detect_isa();
        g_isa.store(isa);
        t = &table(isa);
        g_active.store(t, std::memory_order_release);
    }
    return t;
}

}  // namespace

const KernelTable& table(Isa isa) {
#if defined(__x86_64__) || defined(_M_X64)
    if (isa == Isa::avx2) return AVX2_TABLE;
#endif
    (void)isa;
    return SCALAR_TABLE;
}

bool isa_available(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

Isa active_isa() {
    active();
    return g_isa.load();
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) {
    if (!isa_available(isa)) isa = Isa::scalar;
    g_isa.store(isa);
    g_active.store(&table(isa), std::memory_order_release);
}

void accumulate_cos_affine(double* dst, std::size_t n, double a, double b, double amp) {
    active()->accumulate_cos_affine(dst, n, a, b, amp);
}
void bessel_j0y0(const double* z, double* j0, double* y0, std::size_t n) {
    active()->bessel_j0y0(z, j0, y0, n);
}
void cmatvec(const cplx* d, std::size_t ns, std::size_t nq, const cplx* f, cplx* out) {
    active()->cmatvec(d, ns, nq, f, out);
}
cplx cdotu(const cplx* a, const cplx* b, std::size_t n) { return active()->cdotu(a, b, n); }
cplx cdotc(const cplx* a, const cplx* b, std::size_t n) { return active()->cdotc(a, b, n); }
cplx rdotc(const double* w, const cplx* b, std::size_t n) { return active()->rdotc(w, b, n); }

}  // namespace shg::kernels
