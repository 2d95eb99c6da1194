#pragma once

#include "shg/geometry.hpp"

namespace shg {

/// Wavenumber of harmonic j: the effective wavenumber is j*k.
struct Wavenumber {
    double k = TWO_PI;  // omega/c0; lengths are expressed in wavelengths
    int harmonic = 1;   // j in {1, 2}

    double jk() const { return harmonic * k; }
};

inline Wavenumber fundamental(double wavelength = 1.0) { return {TWO_PI / wavelength, 1}; }
inline Wavenumber second_harmonic(double wavelength = 1.0) { return {TWO_PI / wavelength, 2}; }

/// Bessel J0/Y0/J1 (single argument convenience over the batch kernel).
double bessel_j0(double z);
double bessel_y0(double z);
double bessel_j1(double z);

/// Outgoing 2D Green's function i*pi*H0^(1)(jk|x-y|).
/// Throws std::invalid_argument for coincident points.
cplx g0_2d(Point2 x, Point2 y, Wavenumber w);

/// Outgoing 3D Green's function exp(i jk r)/r evaluated at the planar
/// distance |x-y| (kept for the geometrical-optics theory hooks).
cplx g0_3d(Point2 x, Point2 y, Wavenumber w);

/// Paraxial approximation (1/L) exp(i jk (y_par + |x_perp - y_perp|^2/(2L))).
/// x_perp/ys_perp are transverse coordinates (along the array), ys_par the
/// range coordinate of the search point, L the nominal propagation distance.
/// When check_regime is set, throws if the ordering a << (lambda L^3)^(1/4)
/// fails for the given transverse offset.
cplx g0_paraxial(double x_perp, double ys_perp, double ys_par, Wavenumber w, double L,
                 bool check_regime = true);

/// Unit-amplitude plane wave exp(i k theta . x) sampled on a grid.
ComplexField incident_plane_wave(const Grid2D& grid, Point2 theta, double k);

/// Plane wave at a single point.
inline cplx plane_wave_at(Point2 p, Point2 theta, double k) {
    const double phase = k * dot(theta, p);
    return {std::cos(phase), std::sin(phase)};
}

}  // namespace shg
