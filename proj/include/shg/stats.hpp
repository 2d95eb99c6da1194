#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "shg/imaging.hpp"

namespace shg {

struct EnsembleSpec {
    enum class Source { pde, go };

    int count = 2;
    std::vector<std::uint64_t> seeds;  // distinct, one per realization
    Source source = Source::pde;
};

struct ImagingMethod {
    std::string name;  // "migration" | "cint"
    int harmonic = 1;
    CintParams cint;   // used when name == "cint"
};

/// Aggregated stability statistics for one imaging method over an ensemble.
/// Image statistics are on pre-normalization (raw) values.
struct MethodStability {
    std::string method;
    int harmonic = 1;
    std::vector<double> mean_image;
    std::vector<double> std_image;
    std::vector<double> truth_values;      // raw image value at the truth node, per seed
    double snr_at_truth = 0.0;             // mean/std of truth_values
    double snr_bootstrap_err = 0.0;        // bootstrap (200 resamples) standard error
    double mean_pairwise_correlation = 0.0;  // Pearson over a 4-lambda window at the truth
};

struct StabilityReport {
    Grid2D search_grid;
    std::vector<std::uint64_t> seeds;
    std::vector<MethodStability> methods;
};

/// Runs make_data for every seed, images each realization with every method
/// over the search grid, and aggregates. Any realization failure aborts with
/// the failing seed in the exception message.
StabilityReport run_ensemble(const EnsembleSpec& spec,
                             const std::function<ArrayData(std::uint64_t)>& make_data,
                             const std::vector<ImagingMethod>& methods,
                             const SearchGrid& search, Point2 truth);

/// Near-array artifact metric: peak of the image within 3 lambda of the
/// array line over the peak within 1 lambda of a true scatterer.
struct ArtifactScan {
    bool defined = false;  // false when the image has no peak at all
    double near_array_max = 0.0;
    double near_truth_max = 0.0;
    double ratio = 0.0;
};

ArtifactScan artifact_scan(const ImageGrid& image, const AcquisitionGeometry& geometry,
                           const ScattererSet& truth);

}  // namespace shg
