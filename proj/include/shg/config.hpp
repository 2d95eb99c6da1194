#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shg/acquisition.hpp"
#include "shg/gomodel.hpp"
#include "shg/imaging.hpp"
#include "shg/medium.hpp"

namespace shg {

/// Thrown for malformed configuration (unknown keys, bad types, violated
/// invariants); the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Whole-experiment configuration. All lengths in units of the wavelength.
/// Defaults reproduce the reference setup: a 20-lambda square domain at
/// h = lambda/20, two disks of radius 0.1 with eta1 = 1 and eta2 = 0.01,
/// 81 sensors across the full bottom side and 20 incident angles in a
/// +-pi/4 cone, ell = 0.3, sigma = 0.01*4pi.
struct ExperimentConfig {
    double wavelength = 1.0;

    struct Domain {
        double size = 20.0;      // side of the square V
        double grid_step = 0.05; // h
    } domain;

    MediumParams medium;  // correlation_length=0.3, sigma=0.04*pi, modes=4096, seed=1

    ScattererSet scatterers = {{{-2.0, 10.0}, 0.1, 1.0, 0.01}, {{2.0, 12.0}, 0.1, 1.0, 0.01}};

    struct Geometry {
        int sensors = 81;
        int angles = 20;
        double cone_half_angle = PI / 4.0;
        double aperture = 20.0;
    } geometry;

    struct Solver {
        double pml_width = 1.5;
        double pml_strength = 1.79;
        double tol = 1e-8;
        int max_iter = 50;
    } solver;

    struct Search {
        Point2 origin{-4.0, 7.0};
        double width = 8.0;
        double height = 6.0;
        double step = 0.1;
    } search;

    struct Cint {
        double X1 = 7.0;   // threshold for the fundamental
        double X2 = 3.5;   // threshold for the second harmonic
        double Theta = PI / 5.0;
        double cutoff = 3.0;
        std::string window = "gaussian";
    } cint;

    struct Ensemble {
        int count = 5;
        std::vector<std::uint64_t> seeds;  // empty -> 1..count
        std::string source = "pde";        // "pde" | "go"
    } ensemble;

    /// Geometry/medium used when the data source is the phase-screen model.
    struct Go {
        double L = 2500.0;
        double ell = 25.0;
        double sigma = 5.8e-3;
        double aperture = 200.0;
        double cone_half_angle = 0.04;
        int sensors = 101;
        int angles = 41;
        int modes = 256;
        double X1 = 6.0;
        double X2 = 3.0;
        double Theta = 2.4e-3;
    } go;

    double noise_snr_db = std::numeric_limits<double>::infinity();
    std::string output = "out";

    // Derived helpers ------------------------------------------------------

    Grid2D domain_grid() const;
    AcquisitionGeometry pde_geometry() const;
    SolverConfig solver_config() const;
    SearchGrid search_grid(int harmonic) const;
    CintParams cint_params(int harmonic) const;

    Grid2D go_grid() const;            // strip covering all GO rays
    AcquisitionGeometry go_geometry() const;
    Point2 go_scatterer() const { return {0.0, go.L}; }
    MediumParams go_medium_params(std::uint64_t seed) const;
    GoRegimeParams go_regime() const;
    CintParams go_cint_params(int harmonic) const;

    /// Seed list for ensembles (explicit list, or 1..count).
    std::vector<std::uint64_t> seed_list() const;
};

/// Parse a JSON configuration; missing keys keep their defaults, unknown
/// keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);

/// Resolved configuration as JSON (round-trips through parse_config).
std::string dump_config(const ExperimentConfig& cfg);

}  // namespace shg
