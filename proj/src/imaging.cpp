#include "shg/imaging.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "shg/kernels.hpp"
#include "shg/threading.hpp"
#include "shg/waves.hpp"

namespace shg {

namespace {

double window_value(CintParams::Window w, double z) {
    if (w == CintParams::Window::gaussian) return std::exp(-0.5 * z * z);
    return std::abs(z) <= 1.0 ? 1.0 : 0.0;
}

// Sensor coordinates along the array line (sensors are collinear).
std::vector<double> array_coordinates(const AcquisitionGeometry& g) {
    std::vector<double> t(g.sensors.size(), 0.0);
    if (g.sensors.size() < 2) return t;
    Point2 dir = g.sensors.back() - g.sensors.front();
    const double len = norm(dir);
    if (len > 0) dir = (1.0 / len) * dir;
    for (std::size_t s = 0; s < g.sensors.size(); ++s)
        t[s] = dot(g.sensors[s] - g.sensors.front(), dir);
    return t;
}

std::vector<int> sorted_order(const std::vector<double>& v) {
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    return idx;
}

// Backpropagation factors shared by migration and CINT: conj(G0) per sensor
// and the direction phase per angle, for one search point.
void backprop_factors(const AcquisitionGeometry& geom, const SearchGrid& search, Point2 yr,
                      std::vector<cplx>& gs, std::vector<cplx>& fq,
                      std::vector<double>& scratch_r, std::vector<double>& scratch_j0,
                      std::vector<double>& scratch_y0) {
    const int nx = geom.n_sensors();
    const int nth = geom.n_angles();
    const double jk = search.harmonic * TWO_PI / geom.wavelength;

    scratch_r.resize(nx);
    scratch_j0.resize(nx);
    scratch_y0.resize(nx);
    for (int s = 0; s < nx; ++s) {
        const double r = norm(yr - geom.sensors[s]);
        if (r <= 1e-12)
            throw std::invalid_argument("imaging: search point coincides with a sensor");
        scratch_r[s] = jk * r;
    }
    kernels::bessel_j0y0(scratch_r.data(), scratch_j0.data(), scratch_y0.data(), std::size_t(nx));
    gs.resize(nx);
    for (int s = 0; s < nx; ++s)
        gs[s] = cplx{-PI * scratch_y0[s], -PI * scratch_j0[s]};  // conj(i pi H0)

    fq.resize(nth);
    for (int q = 0; q < nth; ++q) {
        const double phase = -jk * dot(geom.direction(q), yr);
        fq[q] = cplx{std::cos(phase), std::sin(phase)};
    }
}

ImageGrid finalize(const Grid2D& g, std::vector<double> values, ImageProvenance prov) {
    double mx = 0.0;
    for (double v : values) mx = std::max(mx, std::abs(v));
    prov.raw_max = mx;
    if (mx > 0.0)
        for (double& v : values) v /= mx;
    ImageGrid img;
    img.grid = g;
    img.values = std::move(values);
    img.prov = std::move(prov);
    return img;
}

}  // namespace

SearchGrid make_search_grid(Point2 origin, double width, double height, double step,
                            int harmonic) {
    if (step <= 0.0 || width < 0.0 || height < 0.0)
        throw std::invalid_argument("make_search_grid: bad extents");
    SearchGrid s;
    s.harmonic = harmonic;
    s.grid = Grid2D{origin.x, origin.y, step, int(std::lround(width / step)) + 1,
                    int(std::lround(height / step)) + 1};
    return s;
}

Field<cplx> migrate_complex(const ArrayData& data, const AcquisitionGeometry& geometry,
                            const SearchGrid& search) {
    if (search.harmonic != 1 && search.harmonic != 2)
        throw std::invalid_argument("migrate: harmonic must be 1 or 2");
    const Eigen::MatrixXcd& d = search.harmonic == 1 ? data.d1 : data.d2;
    const int nx = geometry.n_sensors();
    const int nth = geometry.n_angles();
    if (d.rows() != nx || d.cols() != nth)
        throw std::invalid_argument("migrate: data dimensions do not match the geometry");

    Field<cplx> out(search.grid);
    parallel_for(std::size_t(search.grid.ny), [&](std::size_t jlo, std::size_t jhi) {
        std::vector<cplx> gs, fq, ms(nx);
        std::vector<double> r, j0, y0;
        for (std::size_t j = jlo; j < jhi; ++j) {
            for (int i = 0; i < search.grid.nx; ++i) {
                const Point2 yr = search.grid.node(i, int(j));
                backprop_factors(geometry, search, yr, gs, fq, r, j0, y0);
                std::fill(ms.begin(), ms.end(), cplx{0.0, 0.0});
                kernels::cmatvec(d.data(), std::size_t(nx), std::size_t(nth), fq.data(), ms.data());
                out.at(i, int(j)) = kernels::cdotu(gs.data(), ms.data(), std::size_t(nx));
            }
        }
    });
    return out;
}

ImageGrid migrate(const ArrayData& data, const AcquisitionGeometry& geometry,
                  const SearchGrid& search) {
    const Field<cplx> c = migrate_complex(data, geometry, search);
    std::vector<double> vals(c.v.size());
    for (std::size_t n = 0; n < c.v.size(); ++n) vals[n] = std::abs(c.v[n]);
    ImageProvenance prov;
    prov.method = "migration";
    prov.harmonic = search.harmonic;
    prov.wavelength = geometry.wavelength;
    prov.seed = data.seed;
    return finalize(search.grid, std::move(vals), std::move(prov));
}

ImageGrid cint(const ArrayData& data, const AcquisitionGeometry& geometry,
               const SearchGrid& search, const CintParams& params) {
    if (params.X <= 0.0 || params.Theta <= 0.0)
        throw std::invalid_argument("cint: thresholds must be positive");
    if (params.cutoff < 1.0)
        throw std::invalid_argument("cint: cutoff multiple must be >= 1");
    const Eigen::MatrixXcd& d = search.harmonic == 1 ? data.d1 : data.d2;
    const int nx = geometry.n_sensors();
    const int nth = geometry.n_angles();
    if (d.rows() != nx || d.cols() != nth)
        throw std::invalid_argument("cint: data dimensions do not match the geometry");

    // Sorted views of the sensors (by position along the array) and angles.
    const std::vector<double> tpos = array_coordinates(geometry);
    const std::vector<int> sidx = sorted_order(tpos);
    const std::vector<int> qidx = sorted_order(geometry.angles);
    std::vector<double> ts(nx), phis(nth);
    for (int s = 0; s < nx; ++s) ts[s] = tpos[sidx[s]];
    for (int q = 0; q < nth; ++q) phis[q] = geometry.angles[qidx[q]];

    // Direction-offset window band: for each sorted angle the contiguous
    // range of partners within cutoff*Theta and their window weights.
    std::vector<int> qlo(nth), qhi(nth);
    std::vector<std::vector<double>> wth(nth);
    for (int q = 0; q < nth; ++q) {
        int lo = q, hi = q;
        while (lo > 0 && phis[q] - phis[lo - 1] <= params.cutoff * params.Theta) --lo;
        while (hi + 1 < nth && phis[hi + 1] - phis[q] <= params.cutoff * params.Theta) ++hi;
        qlo[q] = lo;
        qhi[q] = hi;
        wth[q].resize(hi - lo + 1);
        for (int p = lo; p <= hi; ++p)
            wth[q][p - lo] = window_value(params.window, (phis[q] - phis[p]) / params.Theta);
    }
    // Sensor-offset band boundaries.
    std::vector<int> slo(nx), shi(nx);
    for (int s = 0; s < nx; ++s) {
        int lo = s, hi = s;
        while (lo > 0 && ts[s] - ts[lo - 1] <= params.cutoff * params.X) --lo;
        while (hi + 1 < nx && ts[hi + 1] - ts[s] <= params.cutoff * params.X) ++hi;
        slo[s] = lo;
        shi[s] = hi;
    }

    std::vector<double> values(search.grid.size(), 0.0);
    std::atomic<double> worst_imag{0.0};
    parallel_for(std::size_t(search.grid.ny), [&](std::size_t jlo_row, std::size_t jhi_row) {
        std::vector<cplx> gs, fq;
        std::vector<double> r, j0, y0;
        std::vector<cplx> b(std::size_t(nx) * nth);   // row-major: b[s*nth + q]
        std::vector<cplx> T(std::size_t(nx) * nth);
        double local_worst = 0.0;
        for (std::size_t j = jlo_row; j < jhi_row; ++j) {
            for (int i = 0; i < search.grid.nx; ++i) {
                const Point2 yr = search.grid.node(i, int(j));
                backprop_factors(geometry, search, yr, gs, fq, r, j0, y0);
                for (int s = 0; s < nx; ++s) {
                    const cplx gsv = gs[sidx[s]];
                    cplx* row = b.data() + std::size_t(s) * nth;
                    for (int q = 0; q < nth; ++q)
                        row[q] = d(sidx[s], qidx[q]) * gsv * fq[qidx[q]];
                }
                for (int s = 0; s < nx; ++s) {
                    const cplx* row = b.data() + std::size_t(s) * nth;
                    cplx* trow = T.data() + std::size_t(s) * nth;
                    for (int q = 0; q < nth; ++q)
                        trow[q] = kernels::rdotc(wth[q].data(), row + qlo[q],
                                                 std::size_t(qhi[q] - qlo[q] + 1));
                }
                cplx acc{0.0, 0.0};
                for (int s = 0; s < nx; ++s) {
                    const cplx* brow = b.data() + std::size_t(s) * nth;
                    for (int p = slo[s]; p <= shi[s]; ++p) {
                        const double wx = window_value(params.window, (ts[s] - ts[p]) / params.X);
                        if (wx == 0.0) continue;
                        acc += wx * kernels::cdotc(brow, T.data() + std::size_t(p) * nth,
                                                   std::size_t(nth));
                    }
                }
                values[search.grid.idx(i, int(j))] = acc.real();
                local_worst = std::max(local_worst, std::abs(acc.imag()));
            }
        }
        double seen = worst_imag.load();
        while (local_worst > seen && !worst_imag.compare_exchange_weak(seen, local_worst)) {
        }
    });

    ImageProvenance prov;
    prov.method = "cint";
    prov.harmonic = search.harmonic;
    prov.wavelength = geometry.wavelength;
    prov.seed = data.seed;
    prov.cint_X = params.X;
    prov.cint_Theta = params.Theta;
    prov.cint_cutoff = params.cutoff;
    prov.cint_window = params.window == CintParams::Window::gaussian ? "gaussian" : "hard";
    double max_re = 0.0;
    for (double v : values) max_re = std::max(max_re, std::abs(v));
    prov.cint_imag_ratio = max_re > 0.0 ? worst_imag.load() / max_re : 0.0;
    return finalize(search.grid, std::move(values), std::move(prov));
}

namespace {

// Strict-ish local maxima over the 8-neighborhood, at or above a floor.
std::vector<std::pair<int, int>> local_maxima(const ImageGrid& img, double floor) {
    std::vector<std::pair<int, int>> peaks;
    const Grid2D& g = img.grid;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double v = img.at(i, j);
            if (v < floor) continue;
            bool is_peak = true;
            bool strictly_above = false;
            for (int dj = -1; dj <= 1 && is_peak; ++dj) {
                for (int di = -1; di <= 1; ++di) {
                    if (di == 0 && dj == 0) continue;
                    const int ni = i + di, nj = j + dj;
                    if (ni < 0 || nj < 0 || ni >= g.nx || nj >= g.ny) continue;
                    const double w = img.at(ni, nj);
                    if (w > v) {
                        is_peak = false;
                        break;
                    }
                    if (w < v) strictly_above = true;
                }
            }
            if (is_peak && strictly_above) peaks.emplace_back(i, j);
        }
    }
    return peaks;
}

// Half-width from a peak node along +/- one axis, linearly interpolated at
// the half-level crossing; clamped at the grid edge.
double half_width(const ImageGrid& img, int pi, int pj, int di, int dj, double level) {
    const Grid2D& g = img.grid;
    double prev = img.at(pi, pj);
    int steps = 0;
    int i = pi, j = pj;
    while (true) {
        i += di;
        j += dj;
        if (i < 0 || j < 0 || i >= g.nx || j >= g.ny) return steps * g.h;
        const double cur = img.at(i, j);
        ++steps;
        if (cur < level) {
            const double frac = (prev - level) / (prev - cur);
            return (steps - 1 + frac) * g.h;
        }
        prev = cur;
    }
}

}  // namespace

PeakMetrics peak_metrics(const ImageGrid& image, const ScattererSet& truth) {
    PeakMetrics m;
    const Grid2D& g = image.grid;
    double gmax = 0.0;
    std::size_t gmax_n = 0;
    for (std::size_t n = 0; n < image.values.size(); ++n) {
        if (image.values[n] > gmax) {
            gmax = image.values[n];
            gmax_n = n;
        }
    }
    if (gmax <= 0.0) {
        m.has_peak = false;
        return m;
    }
    m.has_peak = true;

    auto peaks = local_maxima(image, 0.2 * gmax);
    if (peaks.empty())
        peaks.emplace_back(int(gmax_n % std::size_t(g.nx)), int(gmax_n / std::size_t(g.nx)));

    for (const auto& sc : truth) {
        ScattererMetrics sm;
        double best = std::numeric_limits<double>::infinity();
        std::pair<int, int> best_peak = peaks.front();
        for (const auto& [pi, pj] : peaks) {
            const double dist = norm(g.node(pi, pj) - sc.pos);
            if (dist < best) {
                best = dist;
                best_peak = {pi, pj};
            }
        }
        sm.localization_error = best;
        const double level = 0.5 * image.at(best_peak.first, best_peak.second);
        sm.fwhm_x = half_width(image, best_peak.first, best_peak.second, -1, 0, level) +
                    half_width(image, best_peak.first, best_peak.second, +1, 0, level);
        sm.fwhm_y = half_width(image, best_peak.first, best_peak.second, 0, -1, level) +
                    half_width(image, best_peak.first, best_peak.second, 0, +1, level);
        m.per_scatterer.push_back(sm);
    }

    // Background: median over nodes more than 3 lambda from every scatterer.
    const double lambda = image.prov.wavelength;
    std::vector<double> far;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            bool is_far = true;
            for (const auto& sc : truth) {
                if (norm(g.node(i, j) - sc.pos) <= 3.0 * lambda) {
                    is_far = false;
                    break;
                }
            }
            if (is_far) far.push_back(image.at(i, j));
        }
    }
    if (far.empty()) {
        m.peak_to_background = std::numeric_limits<double>::quiet_NaN();
    } else {
        std::nth_element(far.begin(), far.begin() + far.size() / 2, far.end());
        const double med = far[far.size() / 2];
        m.peak_to_background = med > 0.0 ? gmax / med : std::numeric_limits<double>::infinity();
    }
    return m;
}

}  // namespace shg
