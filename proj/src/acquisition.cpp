#include "shg/acquisition.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "shg/rng.hpp"
#include "shg/threading.hpp"

namespace shg {

AcquisitionGeometry make_bottom_array(const Grid2D& grid, int n_sensors, double aperture,
                                      int n_angles, double cone_half_angle, double wavelength) {
    if (n_sensors < 1 || n_angles < 1)
        throw std::invalid_argument("make_bottom_array: need at least one sensor and one angle");
    AcquisitionGeometry geom;
    geom.wavelength = wavelength;
    geom.aperture = aperture;
    geom.cone_axis = {1.0, 0.0};

    const double xc = 0.5 * (grid.x0 + grid.xmax());
    for (int s = 0; s < n_sensors; ++s) {
        const double t = n_sensors == 1 ? 0.5 : double(s) / double(n_sensors - 1);
        Point2 p{xc - 0.5 * aperture + t * aperture, grid.y0};
        int i, j;
        grid.nearest(p, i, j);  // snap to the nearest node
        geom.sensors.push_back(grid.node(i, j));
    }
    for (int q = 0; q < n_angles; ++q) {
        const double t = n_angles == 1 ? 0.5 : double(q) / double(n_angles - 1);
        geom.angles.push_back(-cone_half_angle + 2.0 * cone_half_angle * t);
    }
    return geom;
}

ArrayData simulate_experiment(const MediumRealization& medium, const ScattererSet& scatterers,
                              const AcquisitionGeometry& geometry, const SolverConfig& config,
                              std::vector<AngleDiagnostics>* diagnostics) {
    const Grid2D& g = medium.grid;
    auto [eta1, eta2] = rasterize_scatterers(g, scatterers);

    const Wavenumber w1 = fundamental(geometry.wavelength);
    const Wavenumber w2 = second_harmonic(geometry.wavelength);
    const LinearSolveHandle hk = factorize(assemble(medium, eta1, w1, config.pml));
    const LinearSolveHandle h2k = factorize(assemble(medium, eta1, w2, config.pml));
    const Grid2D& padded = hk.op().pad.padded;

    const int nx = geometry.n_sensors();
    const int nth = geometry.n_angles();
    ArrayData data;
    data.geometry = geometry;
    data.seed = medium.params.seed;
    data.d1.resize(nx, nth);
    data.d2.resize(nx, nth);

    // Sensor nodes on the interior grid.
    std::vector<std::pair<int, int>> nodes(nx);
    for (int s = 0; s < nx; ++s) {
        int i, j;
        g.nearest(geometry.sensors[s], i, j);
        nodes[s] = {i, j};
    }

    std::vector<AngleDiagnostics> diag(nth);
    std::vector<std::string> failures(nth);
    parallel_for(std::size_t(nth), [&](std::size_t qlo, std::size_t qhi) {
        for (std::size_t q = qlo; q < qhi; ++q) {
            const ComplexField ui = incident_plane_wave(padded, geometry.direction(int(q)), w1.k);
            const FieldSolution sol =
                fixed_point_shg(hk, h2k, medium, eta1, eta2, ui, config.tol, config.max_iter);
            diag[q] = {sol.iterations, sol.final_residual};
            if (!sol.converged) {
                failures[q] = sol.diverged ? "diverged" : "hit max_iter";
                continue;
            }
            for (int s = 0; s < nx; ++s) {
                data.d1(s, int(q)) = sol.u.at(nodes[s].first, nodes[s].second);
                data.d2(s, int(q)) = sol.v.at(nodes[s].first, nodes[s].second);
            }
        }
    });
    for (int q = 0; q < nth; ++q)
        if (!failures[q].empty())
            throw std::runtime_error("simulate_experiment: solver " + failures[q] +
                                     " for incident angle index " + std::to_string(q));
    if (diagnostics) *diagnostics = std::move(diag);
    return data;
}

ArrayData add_noise(const ArrayData& data, double snr_db, std::uint64_t seed) {
    ArrayData out = data;
    if (std::isinf(snr_db) && snr_db > 0) return out;

    Rng rng(seed);
    auto corrupt = [&](Eigen::MatrixXcd& m) {
        const double signal_power = m.squaredNorm() / double(m.size());
        const double noise_power = signal_power / std::pow(10.0, snr_db / 10.0);
        const double s = std::sqrt(0.5 * noise_power);
        for (long c = 0; c < m.cols(); ++c)
            for (long r = 0; r < m.rows(); ++r)
                m(r, c) += cplx{s * rng.gaussian(), s * rng.gaussian()};
    };
    corrupt(out.d1);
    corrupt(out.d2);
    return out;
}

}  // namespace shg
