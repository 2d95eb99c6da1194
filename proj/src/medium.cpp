#include "shg/medium.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "shg/kernels.hpp"
#include "shg/rng.hpp"
#include "shg/threading.hpp"

namespace shg {

MediumRealization gen_random_medium(const Grid2D& grid, const MediumParams& params) {
    const double ell = params.correlation_length;
    if (ell <= 0.0) throw std::invalid_argument("gen_random_medium: correlation length must be > 0");
    if (params.sigma < 0.0) throw std::invalid_argument("gen_random_medium: sigma must be >= 0");
    if (params.mode_count < 1) throw std::invalid_argument("gen_random_medium: mode count must be >= 1");
    if (grid.nx < 1 || grid.ny < 1) throw std::invalid_argument("gen_random_medium: empty grid");
    if (grid.h > ell / 4.0 + 1e-12)
        throw std::invalid_argument("gen_random_medium: grid step must resolve ell (h <= ell/4)");

    MediumRealization real;
    real.grid = grid;
    real.params = params;
    real.eta.assign(grid.size(), 0.0);
    if (params.sigma == 0.0) return real;

    const int M = params.mode_count;

    // Wavevectors from the spectral measure of exp(-|h|^2/2): standard 2D
    // Gaussians, scaled by 1/ell in physical coordinates. Phases uniform.
    std::vector<double> kx(M), ky(M), phi(M);
    Rng rng(params.seed);
    for (int m = 0; m < M; ++m) {
        kx[m] = rng.gaussian() / ell;
        ky[m] = rng.gaussian() / ell;
        phi[m] = rng.uniform(0.0, TWO_PI);
    }

    // 4*pi*eta = sigma * sqrt(2/M) * sum_m cos(k_m . x + phi_m). Row-wise the
    // argument is affine in the node index, which is what the kernel wants.
    const double amp = params.sigma * std::sqrt(2.0 / M) / (4.0 * PI);
    parallel_for(std::size_t(grid.ny), [&](std::size_t jlo, std::size_t jhi) {
        for (std::size_t j = jlo; j < jhi; ++j) {
            double* row = real.eta.data() + grid.idx(0, int(j));
            const double y = grid.y(int(j));
            for (int m = 0; m < M; ++m) {
                const double a = kx[m] * grid.x0 + ky[m] * y + phi[m];
                kernels::accumulate_cos_affine(row, std::size_t(grid.nx), a, kx[m] * grid.h, amp);
            }
        }
    });

    double worst = 0.0;
    for (const double e : real.eta) worst = std::min(worst, 1.0 + 4.0 * PI * e);
    if (worst <= 0.0)
        throw std::runtime_error("gen_random_medium: 1 + 4*pi*eta <= 0 (min value " +
                                 std::to_string(worst) + "); reduce sigma");
    return real;
}

std::pair<RealField, RealField> rasterize_scatterers(const Grid2D& grid,
                                                     const ScattererSet& scatterers) {
    RealField f1(grid), f2(grid);
    for (const auto& s : scatterers) {
        if (s.radius <= 0.0) throw std::invalid_argument("rasterize_scatterers: radius must be > 0");
        if (s.pos.x + s.radius < grid.x0 || s.pos.x - s.radius > grid.xmax() ||
            s.pos.y + s.radius < grid.y0 || s.pos.y - s.radius > grid.ymax())
            throw std::invalid_argument("rasterize_scatterers: disk entirely off-grid");

        const int ilo = std::max(0, int(std::floor((s.pos.x - s.radius - grid.x0) / grid.h)));
        const int ihi = std::min(grid.nx - 1, int(std::ceil((s.pos.x + s.radius - grid.x0) / grid.h)));
        const int jlo = std::max(0, int(std::floor((s.pos.y - s.radius - grid.y0) / grid.h)));
        const int jhi = std::min(grid.ny - 1, int(std::ceil((s.pos.y + s.radius - grid.y0) / grid.h)));
        const double r2 = s.radius * s.radius;
        int covered = 0;
        for (int j = jlo; j <= jhi; ++j) {
            for (int i = ilo; i <= ihi; ++i) {
                const Point2 d = grid.node(i, j) - s.pos;
                if (d.x * d.x + d.y * d.y <= r2) {
                    f1.at(i, j) += s.eta1;
                    f2.at(i, j) += s.eta2;
                    ++covered;
                }
            }
        }
        if (covered == 0)
            throw std::invalid_argument("rasterize_scatterers: disk covers no grid node");
    }
    return {std::move(f1), std::move(f2)};
}

}  // namespace shg
