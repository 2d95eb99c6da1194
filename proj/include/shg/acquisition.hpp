#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "shg/medium.hpp"
#include "shg/solver.hpp"
#include "shg/waves.hpp"

namespace shg {

/// Array of sensors on one side of the domain plus the cone of incident
/// plane-wave directions. Angles are measured from the cone axis.
struct AcquisitionGeometry {
    std::vector<Point2> sensors;
    std::vector<double> angles;     // phi_q in radians, |phi_q| <= cone half-angle
    Point2 cone_axis{1.0, 0.0};     // vartheta, unit vector
    double wavelength = 1.0;
    double aperture = 0.0;          // a

    int n_sensors() const { return int(sensors.size()); }
    int n_angles() const { return int(angles.size()); }

    /// Unit direction of incidence number q (axis rotated by phi_q).
    Point2 direction(int q) const {
        const double c = std::cos(angles[q]), s = std::sin(angles[q]);
        return {c * cone_axis.x - s * cone_axis.y, s * cone_axis.x + c * cone_axis.y};
    }
};

/// Sensors evenly spread over [x0-a/2, x0+a/2] on the bottom side of the
/// domain, snapped to grid nodes; angles evenly spread over the cone.
AcquisitionGeometry make_bottom_array(const Grid2D& grid, int n_sensors, double aperture,
                                      int n_angles, double cone_half_angle,
                                      double wavelength = 1.0);

/// Array data for one realization: d1 = scattered fundamental, d2 = second
/// harmonic, both N_x x N_theta (sensor index fastest).
struct ArrayData {
    Eigen::MatrixXcd d1;
    Eigen::MatrixXcd d2;
    AcquisitionGeometry geometry;
    std::uint64_t seed = 0;
};

struct SolverConfig {
    PmlParams pml;
    double tol = 1e-8;
    int max_iter = 50;
};

struct AngleDiagnostics {
    int iterations = 0;
    double residual = 0.0;
};

/// Full experiment: assemble + factorize the two operators once, then solve
/// the coupled system for every incident direction and sample the fields at
/// the sensors. Throws on any per-angle non-convergence (partial data is an
/// error). Per-angle iteration counts are reported through diagnostics.
ArrayData simulate_experiment(const MediumRealization& medium, const ScattererSet& scatterers,
                              const AcquisitionGeometry& geometry, const SolverConfig& config,
                              std::vector<AngleDiagnostics>* diagnostics = nullptr);

/// Adds circular complex Gaussian noise scaled so that each matrix has the
/// requested SNR in dB. +infinity leaves the data untouched.
ArrayData add_noise(const ArrayData& data, double snr_db, std::uint64_t seed);

}  // namespace shg
