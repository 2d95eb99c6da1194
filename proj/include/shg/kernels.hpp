#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Arithmetic inner loops shared by the field synthesis, Green's function
// evaluation and image formation. Every kernel exists in a scalar reference
// form and (on x86-64) an AVX2 form; the active variant is chosen once at
// startup from CPUID and can be overridden with the SHG_KERNELS environment
// variable ("scalar" or "avx2"). The variants are equivalence-tested against
// each other in tests/unit/test_kernels.cpp.

namespace shg::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

/// Variant selected at startup (CPUID + SHG_KERNELS override).
Isa active_isa();
const char* isa_name(Isa isa);

/// Force a variant at runtime (used by the equivalence tests).
void force_isa(Isa isa);

// ---------------------------------------------------------------------------
// Kernel entry points (dispatch to the active variant)
// ---------------------------------------------------------------------------

/// dst[i] += amp * cos(a + b*i) for i in [0, n).
/// Inner loop of the random Fourier mode synthesis.
void accumulate_cos_affine(double* dst, std::size_t n, double a, double b, double amp);

/// Bessel J0 and Y0 of the first/second kind for a batch of arguments z > 0.
/// Power series below z = 9.5, Hankel large-argument phase form above.
/// Relative accuracy is better than 1e-9 over [1e-3, 1e4].
void bessel_j0y0(const double* z, double* j0, double* y0, std::size_t n);

/// out[s] += sum_q d[s + ns*q] * f[q]  (column-major ns x nq matrix times vector).
void cmatvec(const cplx* d, std::size_t ns, std::size_t nq, const cplx* f, cplx* out);

/// sum_i a[i] * b[i]  (unconjugated complex dot product).
cplx cdotu(const cplx* a, const cplx* b, std::size_t n);

/// sum_i a[i] * conj(b[i]).
cplx cdotc(const cplx* a, const cplx* b, std::size_t n);

/// sum_i w[i] * b[i] with real weights.
cplx rdotc(const double* w, const cplx* b, std::size_t n);

// ---------------------------------------------------------------------------
// Per-variant tables (exposed for the equivalence tests)
// ---------------------------------------------------------------------------

struct KernelTable {
    void (*accumulate_cos_affine)(double*, std::size_t, double, double, double);
    void (*bessel_j0y0)(const double*, double*, double*, std::size_t);
    void (*cmatvec)(const cplx*, std::size_t, std::size_t, const cplx*, cplx*);
    cplx (*cdotu)(const cplx*, const cplx*, std::size_t);
    cplx (*cdotc)(const cplx*, const cplx*, std::size_t);
    cplx (*rdotc)(const double*, const cplx*, std::size_t);
};

const KernelTable& table(Isa isa);
bool isa_available(Isa isa);

}  // namespace shg::kernels
