#include "shg/waves.hpp"

#include <cmath>
#include <stdexcept>

#include "shg/kernels.hpp"

namespace shg {

double bessel_j0(double z) {
    double j, y;
    kernels::bessel_j0y0(&z, &j, &y, 1);
    return j;
}

double bessel_y0(double z) {
    double j, y;
    kernels::bessel_j0y0(&z, &j, &y, 1);
    return y;
}

double bessel_j1(double z) {
    // Same scheme as the J0 kernel: power series below 9.5, Hankel form above.
    if (z < 0) return -bessel_j1(-z);
    if (z <= 9.5) {
        const double q = 0.25 * z * z;
        double term = 0.5 * z;
        double sum = term;
        for (int m = 1; m <= 40; ++m) {
            term *= -q / (double(m) * double(m + 1));
            sum += term;
        }
        return sum;
    }
    // Hankel symbols for nu = 1: (1,k) = (1,k-1) * (4 - (2k-1)^2) / (8k).
    double p = 1.0, q = 0.0, c = 1.0, zk = 1.0;
    for (int k = 1; k <= 12; ++k) {
        c *= (4.0 - double(2 * k - 1) * double(2 * k - 1)) / (8.0 * double(k));
        zk /= z;
        const double r = c * zk;
        switch (k & 3) {
            case 0: p += r; break;
            case 1: q += r; break;
            case 2: p -= r; break;
            default: q -= r; break;
        }
    }
    const double chi = z - 0.75 * PI;
    return std::sqrt(2.0 / (PI * z)) * (p * std::cos(chi) - q * std::sin(chi));
}

cplx g0_2d(Point2 x, Point2 y, Wavenumber w) {
    const double r = norm(x - y);
    if (r <= 0.0)
        throw std::invalid_argument("g0_2d: coincident source and evaluation points");
    const double z = w.jk() * r;
    double j0, y0;
    kernels::bessel_j0y0(&z, &j0, &y0, 1);
    // i*pi*(J0 + i Y0)
    return {-PI * y0, PI * j0};
}

cplx g0_3d(Point2 x, Point2 y, Wavenumber w) {
    const double r = norm(x - y);
    if (r <= 0.0)
        throw std::invalid_argument("g0_3d: coincident source and evaluation points");
    const double phase = w.jk() * r;
    return cplx{std::cos(phase), std::sin(phase)} / r;
}

cplx g0_paraxial(double x_perp, double ys_perp, double ys_par, Wavenumber w, double L,
                 bool check_regime) {
    if (L <= 0.0) throw std::invalid_argument("g0_paraxial: nonpositive range");
    if (check_regime) {
        const double lambda = TWO_PI / w.k;
        const double fresnel = std::pow(lambda * L * L * L, 0.25);
        if (std::abs(x_perp - ys_perp) > 0.5 * fresnel)
            throw std::domain_error("g0_paraxial: transverse offset outside paraxial regime");
    }
    const double d = x_perp - ys_perp;
    const double phase = w.jk() * (ys_par + d * d / (2.0 * L));
    return cplx{std::cos(phase), std::sin(phase)} / L;
}

ComplexField incident_plane_wave(const Grid2D& grid, Point2 theta, double k) {
    ComplexField f(grid);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            f.at(i, j) = plane_wave_at(grid.node(i, j), theta, k);
    return f;
}

}  // namespace shg
