#include "shg/stats.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "shg/rng.hpp"

namespace shg {

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= double(n);
    mb /= double(n);
    double saa = 0, sbb = 0, sab = 0;
    for (std::size_t i = 0; i < n; ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    if (saa == 0.0 && sbb == 0.0) return 1.0;  // two constant images are identical up to offset
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

StabilityReport run_ensemble(const EnsembleSpec& spec,
                             const std::function<ArrayData(std::uint64_t)>& make_data,
                             const std::vector<ImagingMethod>& methods,
                             const SearchGrid& search, Point2 truth) {
    if (spec.count < 2 || int(spec.seeds.size()) < spec.count)
        throw std::invalid_argument("run_ensemble: need at least 2 seeds");
    if (std::set<std::uint64_t>(spec.seeds.begin(), spec.seeds.end()).size() != spec.seeds.size())
        throw std::invalid_argument("run_ensemble: seeds must be distinct");

    StabilityReport rep;
    rep.search_grid = search.grid;
    rep.seeds.assign(spec.seeds.begin(), spec.seeds.begin() + spec.count);

    // Raw (pre-normalization) images: methods x seeds.
    const std::size_t npix = search.grid.size();
    std::vector<std::vector<std::vector<double>>> raw(methods.size());

    for (std::uint64_t seed : rep.seeds) {
        ArrayData data;
        try {
            data = make_data(seed);
        } catch (const std::exception& e) {
            throw std::runtime_error("run_ensemble: realization with seed " +
                                     std::to_string(seed) + " failed: " + e.what());
        }
        for (std::size_t m = 0; m < methods.size(); ++m) {
            SearchGrid sg = search;
            sg.harmonic = methods[m].harmonic;
            const ImageGrid img = methods[m].name == "cint"
                                      ? cint(data, data.geometry, sg, methods[m].cint)
                                      : migrate(data, data.geometry, sg);
            std::vector<double> values(npix);
            for (std::size_t n = 0; n < npix; ++n)
                values[n] = img.values[n] * img.prov.raw_max;
            raw[m].push_back(std::move(values));
        }
    }

    int ti, tj;
    search.grid.nearest(truth, ti, tj);
    const std::size_t truth_node = search.grid.idx(ti, tj);
    const double lambda = 1.0;  // grids are expressed in wavelengths
    const double half_window = 2.0 * lambda;

    std::vector<std::size_t> window;
    for (int j = 0; j < search.grid.ny; ++j)
        for (int i = 0; i < search.grid.nx; ++i) {
            const Point2 p = search.grid.node(i, j);
            if (std::abs(p.x - truth.x) <= half_window && std::abs(p.y - truth.y) <= half_window)
                window.push_back(search.grid.idx(i, j));
        }

    const std::size_t nseeds = rep.seeds.size();
    for (std::size_t m = 0; m < methods.size(); ++m) {
        MethodStability ms;
        ms.method = methods[m].name;
        ms.harmonic = methods[m].harmonic;
        ms.mean_image.assign(npix, 0.0);
        ms.std_image.assign(npix, 0.0);
        for (const auto& img : raw[m])
            for (std::size_t n = 0; n < npix; ++n) ms.mean_image[n] += img[n];
        for (double& v : ms.mean_image) v /= double(nseeds);
        for (const auto& img : raw[m])
            for (std::size_t n = 0; n < npix; ++n) {
                const double d = img[n] - ms.mean_image[n];
                ms.std_image[n] += d * d;
            }
        for (double& v : ms.std_image) v = std::sqrt(v / double(nseeds - 1));

        for (const auto& img : raw[m]) ms.truth_values.push_back(img[truth_node]);
        const double mean_t = ms.mean_image[truth_node];
        const double std_t = ms.std_image[truth_node];
        ms.snr_at_truth = std_t > 0.0 ? mean_t / std_t
                                      : std::numeric_limits<double>::infinity();

        // Bootstrap error bar on the SNR (resampling seeds, 200 resamples).
        Rng rng(0x5eedf00dULL ^ rep.seeds.front());
        std::vector<double> boot;
        for (int rs = 0; rs < 200; ++rs) {
            double sm = 0, sq = 0;
            for (std::size_t i = 0; i < nseeds; ++i) {
                const double v = ms.truth_values[std::size_t(rng.uniform() * nseeds)];
                sm += v;
                sq += v * v;
            }
            sm /= double(nseeds);
            const double var = std::max(0.0, sq / double(nseeds) - sm * sm) * double(nseeds) /
                               double(nseeds - 1);
            if (var > 0.0) boot.push_back(sm / std::sqrt(var));
        }
        if (boot.size() > 1) {
            double bm = 0;
            for (double b : boot) bm += b;
            bm /= double(boot.size());
            double bv = 0;
            for (double b : boot) bv += (b - bm) * (b - bm);
            ms.snr_bootstrap_err = std::sqrt(bv / double(boot.size() - 1));
        }

        // Mean pairwise Pearson correlation over the truth window.
        std::vector<std::vector<double>> win(nseeds, std::vector<double>(window.size()));
        for (std::size_t r = 0; r < nseeds; ++r)
            for (std::size_t wn = 0; wn < window.size(); ++wn)
                win[r][wn] = raw[m][r][window[wn]];
        double corr_sum = 0.0;
        int pairs = 0;
        for (std::size_t r = 0; r < nseeds; ++r)
            for (std::size_t r2 = r + 1; r2 < nseeds; ++r2) {
                corr_sum += pearson(win[r], win[r2]);
                ++pairs;
            }
        ms.mean_pairwise_correlation = pairs > 0 ? corr_sum / pairs : 1.0;

        rep.methods.push_back(std::move(ms));
    }
    return rep;
}

ArtifactScan artifact_scan(const ImageGrid& image, const AcquisitionGeometry& geometry,
                           const ScattererSet& truth) {
    ArtifactScan scan;
    const double lambda = image.prov.wavelength;
    // The array line: through the first sensor, along the sensor direction.
    const Point2 origin = geometry.sensors.front();
    Point2 dir = geometry.sensors.back() - geometry.sensors.front();
    const double len = norm(dir);
    dir = len > 0 ? (1.0 / len) * dir : Point2{1.0, 0.0};

    double near_array = 0.0, near_truth = 0.0, global = 0.0;
    const Grid2D& g = image.grid;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double v = image.at(i, j);
            global = std::max(global, v);
            const Point2 p = g.node(i, j);
            const Point2 rel = p - origin;
            const double perp = std::abs(rel.x * dir.y - rel.y * dir.x);
            if (perp <= 3.0 * lambda) near_array = std::max(near_array, v);
            for (const auto& sc : truth) {
                if (norm(p - sc.pos) <= 1.0 * lambda) {
                    near_truth = std::max(near_truth, v);
                    break;
                }
            }
        }
    }
    if (global <= 0.0) {
        scan.defined = false;  // explicit no-peak marker
        return scan;
    }
    scan.defined = near_truth > 0.0;
    scan.near_array_max = near_array;
    scan.near_truth_max = near_truth;
    scan.ratio = scan.defined ? near_array / near_truth
                              : std::numeric_limits<double>::quiet_NaN();
    return scan;
}

}  // namespace shg
