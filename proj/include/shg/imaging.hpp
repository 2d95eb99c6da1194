#pragma once

#include <string>
#include <vector>

#include "shg/acquisition.hpp"
#include "shg/geometry.hpp"
#include "shg/medium.hpp"

namespace shg {

/// Rectangular search region; harmonic selects d1/d2 and the wavenumber jk.
struct SearchGrid {
    Grid2D grid;
    int harmonic = 1;
};

SearchGrid make_search_grid(Point2 origin, double width, double height, double step,
                            int harmonic);

struct CintParams {
    enum class Window { gaussian, hard };

    double X = 7.0;               // sensor-offset threshold (units of lambda)
    double Theta = PI / 5.0;      // direction-offset threshold (radians)
    Window window = Window::gaussian;
    double cutoff = 3.0;          // offsets enumerated out to cutoff*X, cutoff*Theta
};

struct ImageProvenance {
    std::string method;       // "migration" | "cint"
    int harmonic = 1;
    double raw_max = 0.0;     // image maximum before normalization to 1
    double wavelength = 1.0;
    double cint_imag_ratio = 0.0;  // max |Im| / max Re of the accumulated sum
    double cint_X = 0.0;
    double cint_Theta = 0.0;
    double cint_cutoff = 0.0;
    std::string cint_window;
    std::uint64_t seed = 0;
};

/// Real-valued image over a search grid, normalized to max = 1 (raw maximum
/// kept in the provenance).
struct ImageGrid {
    Grid2D grid;
    std::vector<double> values;
    ImageProvenance prov;

    double at(int i, int j) const { return values[grid.idx(i, j)]; }
};

/// Complex migration sum sum_s sum_q G0*(yR, x_s; j om) e^{-i jk theta_q . yR} d_j
/// before taking the modulus (exposed for the linearity property).
Field<cplx> migrate_complex(const ArrayData& data, const AcquisitionGeometry& geometry,
                            const SearchGrid& search);

/// Migration image: modulus of migrate_complex, normalized.
ImageGrid migrate(const ArrayData& data, const AcquisitionGeometry& geometry,
                  const SearchGrid& search);

/// CINT image: windowed sum over nearby sensor pairs and nearby direction
/// pairs of b_j b_j^*, real part, normalized. Offsets are enumerated with a
/// sliding window over the sorted sensors/angles out to cutoff*X, cutoff*Theta.
ImageGrid cint(const ArrayData& data, const AcquisitionGeometry& geometry,
               const SearchGrid& search, const CintParams& params);

struct ScattererMetrics {
    double localization_error = 0.0;  // distance from truth to the nearest image peak
    double fwhm_x = 0.0;              // full width at half of the peak value
    double fwhm_y = 0.0;
};

struct PeakMetrics {
    std::vector<ScattererMetrics> per_scatterer;
    double peak_to_background = 0.0;  // global peak over median of far-field values
    bool has_peak = false;            // false for an identically zero image
};

PeakMetrics peak_metrics(const ImageGrid& image, const ScattererSet& truth);

}  // namespace shg
