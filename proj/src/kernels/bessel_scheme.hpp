#pragma once

// Shared constants of the J0/Y0 evaluation scheme: power series below
// SPLIT_Z, Hankel modulus/phase asymptotics above. Both the scalar and the
// AVX2 variants follow this scheme so they agree to rounding error.

namespace shg::kernels::bessel_scheme {

inline constexpr double SPLIT_Z = 9.5;
inline constexpr int SERIES_TERMS = 40;  // converged for z <= SPLIT_Z
inline constexpr int ASYMP_TERMS = 12;   // truncation error ~1e-9 at z = SPLIT_Z
inline constexpr double EULER_GAMMA = 0.57721566490153286060651209008240243;
inline constexpr double PI = 3.14159265358979323846264338327950288;

}  // namespace shg::kernels::bessel_scheme
