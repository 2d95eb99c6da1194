#pragma once

#include <cstdint>
#include <vector>

#include "shg/geometry.hpp"

namespace shg {

/// Parameters of the stationary Gaussian-correlated susceptibility field.
/// sigma is the standard deviation of 4*pi*eta; correlation_length is ell in
/// units of the wavelength.
struct MediumParams {
    double correlation_length = 0.3;
    double sigma = 0.04 * PI;  // 0.01 * 4pi, the reference value
    int mode_count = 4096;
    std::uint64_t seed = 1;
};

/// One sampled realization of eta(x). Deterministic in (params, grid).
struct MediumRealization {
    Grid2D grid;
    std::vector<double> eta;  // eta(x) per node; 4*pi*eta = sigma * mu(x/ell)
    MediumParams params;

    double four_pi_eta(int i, int j) const { return 4.0 * PI * eta[grid.idx(i, j)]; }
};

struct Scatterer {
    Point2 pos;
    double radius = 0.1;
    double eta1 = 1.0;
    double eta2 = 0.01;
};

using ScattererSet = std::vector<Scatterer>;

/// Net susceptibility <eta_j> of a disk scatterer (amplitude times area).
inline double net_eta1(const Scatterer& s) { return s.eta1 * PI * s.radius * s.radius; }
inline double net_eta2(const Scatterer& s) { return s.eta2 * PI * s.radius * s.radius; }

/// Synthesize a random medium: 4*pi*eta(x) = sigma * mu(x/ell) with mu a sum
/// of mode_count random-wavevector cosines whose spectral measure matches the
/// Gaussian autocorrelation exp(-|h|^2/2).
/// Throws std::invalid_argument for bad parameters or an under-resolving grid
/// and std::runtime_error (reporting the worst violation) if the sampled
/// field breaks 1 + 4*pi*eta > 0.
MediumRealization gen_random_medium(const Grid2D& grid, const MediumParams& params);

/// Node-center-in-disk rasterization of the scatterer susceptibilities.
/// Returns (eta1_field, eta2_field) on the grid. Throws if a disk lies
/// entirely off-grid or covers no node.
std::pair<RealField, RealField> rasterize_scatterers(const Grid2D& grid,
                                                     const ScattererSet& scatterers);

}  // namespace shg
