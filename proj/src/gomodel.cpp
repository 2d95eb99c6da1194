#include "shg/gomodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "shg/threading.hpp"
#include "shg/waves.hpp"

namespace shg {

TheoryPrediction theory_predict(const GoRegimeParams& p) {
    if (p.wavelength <= 0 || p.ell <= 0 || p.sigma <= 0 || p.L <= 0 || p.aperture <= 0 ||
        p.cone_half_angle <= 0)
        throw std::invalid_argument("theory_predict: all scales must be positive");

    TheoryPrediction t;
    t.k = TWO_PI / p.wavelength;
    t.L = p.L;
    const double sqrt2pi = std::sqrt(TWO_PI);
    t.ell_s1 = 8.0 / (sqrt2pi * p.sigma * p.sigma * t.k * t.k * p.ell);
    t.ell_s2 = t.ell_s1 / 4.0;
    t.X_d1 = p.ell * std::sqrt(3.0 * t.ell_s1 / (2.0 * p.L));
    t.X_d2 = p.ell * std::sqrt(3.0 * t.ell_s2 / (2.0 * p.L));
    t.Theta_d = t.X_d1 / p.L;

    // Each ratio should be << 1 in the asymptotic regime; >= 0.5 is flagged.
    const double la = p.wavelength, ell = p.ell, L = p.L, a = p.aperture;
    auto add = [&](const char* name, double v) { t.regime.push_back({name, v, v >= 0.5}); };
    add("lambda / sqrt(lambda L)", la / std::sqrt(la * L));
    add("sqrt(lambda L) / ell", std::sqrt(la * L) / ell);
    add("ell / (lambda L^2)^(1/3)", ell / std::cbrt(la * L * L));
    add("(lambda L^2)^(1/3) / a", std::cbrt(la * L * L) / a);
    add("a / (lambda L^3)^(1/4)", a / std::pow(la * L * L * L, 0.25));
    add("(lambda L^3)^(1/4) / L", std::pow(la * L * L * L, 0.25) / L);
    add("lambda / (sigma sqrt(ell L))", la / (p.sigma * std::sqrt(ell * L)));
    add("sigma L / sqrt(lambda ell)", p.sigma * L / std::sqrt(la * ell));
    return t;
}

double effective_X(const TheoryPrediction& p, double X, int harmonic) {
    const double xd = harmonic == 2 ? p.X_d2 : p.X_d1;
    return 1.0 / std::sqrt(1.0 / (X * X) + 1.0 / (xd * xd));
}

double effective_Theta(const TheoryPrediction& p, double Theta, int harmonic) {
    const double j2 = harmonic == 2 ? 4.0 : 1.0;
    return 1.0 / std::sqrt(1.0 / (Theta * Theta) + j2 / (p.Theta_d * p.Theta_d));
}

std::vector<double> predicted_cint_profile(const TheoryPrediction& p, double X, double Theta,
                                           int harmonic, std::span<const Point2> offsets) {
    const double jk = harmonic * p.k;
    const double xe = effective_X(p, X, harmonic);
    const double te = effective_Theta(p, Theta, harmonic);
    std::vector<double> out;
    out.reserve(offsets.size());
    for (const Point2& dy : offsets) {
        const double a = jk * xe * dy.x / p.L;  // offset along the array
        const double b = jk * te * dy.y;        // offset transverse to the cone axis
        out.push_back(std::exp(-0.5 * a * a - 0.5 * b * b));
    }
    return out;
}

double phase_along_ray(const MediumRealization& mu_field, Point2 from, Point2 to) {
    const double len = norm(to - from);
    if (len == 0.0) return 0.0;
    const double ell = mu_field.params.correlation_length;
    const int n = std::max(1, int(std::ceil(len / (ell / 8.0))));

    // nu = (|to-from|/2) * integral of sigma*mu = (len/2) * mean of 4*pi*eta,
    // composite midpoint rule.
    const Point2 step = (1.0 / n) * (to - from);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const Point2 p = from + (i + 0.5) * step;
        sum += bilinear(mu_field.grid, mu_field.eta, p);
    }
    return 0.5 * len * (4.0 * PI) * sum / n;
}

Point2 ray_entry_point(const Grid2D& box, Point2 p, Point2 theta) {
    // Largest t >= 0 with p - t*theta still inside the box.
    double tmax = std::numeric_limits<double>::infinity();
    auto clip = [&](double pos, double dir, double lo, double hi) {
        if (dir > 1e-300) {
            tmax = std::min(tmax, (pos - lo) / dir);
        } else if (dir < -1e-300) {
            tmax = std::min(tmax, (pos - hi) / dir);
        }
    };
    clip(p.x, theta.x, box.x0, box.xmax());
    clip(p.y, theta.y, box.y0, box.ymax());
    if (!std::isfinite(tmax)) return p;
    return p - std::max(0.0, tmax) * theta;
}

ArrayData synth_data_go(const MediumRealization& mu_field, Point2 scatterer,
                        const AcquisitionGeometry& geometry, double net_eta1,
                        double net_eta2) {
    const Grid2D& box = mu_field.grid;
    if (!box.contains(scatterer))
        throw std::invalid_argument("synth_data_go: scatterer outside the sampled field");

    const int nx = geometry.n_sensors();
    const int nth = geometry.n_angles();
    const double k = TWO_PI / geometry.wavelength;
    const Wavenumber w1 = fundamental(geometry.wavelength);
    const Wavenumber w2 = second_harmonic(geometry.wavelength);

    ArrayData data;
    data.geometry = geometry;
    data.seed = mu_field.params.seed;
    data.d1.resize(nx, nth);
    data.d2.resize(nx, nth);

    // Phases that do not depend on the (sensor, angle) pair jointly.
    std::vector<double> nu(nx);       // nu(x_s, y)
    std::vector<double> gamma_y(nth); // gamma(y, theta_q)
    for (int s = 0; s < nx; ++s) nu[s] = phase_along_ray(mu_field, geometry.sensors[s], scatterer);
    for (int q = 0; q < nth; ++q)
        gamma_y[q] =
            phase_along_ray(mu_field, scatterer, ray_entry_point(box, scatterer, geometry.direction(q)));

    auto phasor = [](double phase) { return cplx{std::cos(phase), std::sin(phase)}; };

    parallel_for(std::size_t(nth), [&](std::size_t qlo, std::size_t qhi) {
        for (std::size_t q = qlo; q < qhi; ++q) {
            const Point2 th = geometry.direction(int(q));
            const cplx inc_y1 = phasor(k * dot(th, scatterer) + k * gamma_y[q]);
            const cplx inc_y2 = phasor(2.0 * k * dot(th, scatterer) + 2.0 * k * gamma_y[q]);
            for (int s = 0; s < nx; ++s) {
                const Point2 xs = geometry.sensors[s];
                const double gd =
                    phase_along_ray(mu_field, xs, ray_entry_point(box, xs, th));
                const cplx direct = phasor(k * dot(th, xs)) * (phasor(k * gd) - cplx{1.0, 0.0});
                const cplx g1 = g0_2d(xs, scatterer, w1) * phasor(k * nu[s]);
                const cplx g2 = g0_2d(xs, scatterer, w2) * phasor(2.0 * k * nu[s]);
                data.d1(s, int(q)) = direct + k * k * net_eta1 * g1 * inc_y1;
                data.d2(s, int(q)) = 4.0 * k * k * net_eta2 * g2 * inc_y2;
            }
        }
    });
    return data;
}

namespace {

// Least-squares fit of c ~ exp(-r/ells): slope of ln(c) against r.
double fit_exp_decay(std::span<const double> r, std::span<const double> c) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(c[i] > 0.05)) continue;  // below the Monte-Carlo noise floor
        const double y = std::log(c[i]);
        sx += r[i];
        sy += y;
        sxx += r[i] * r[i];
        sxy += r[i] * y;
        ++n;
    }
    if (n < 2) return 0.0;
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return slope < 0.0 ? -1.0 / slope : 0.0;
}

// Least-squares fit of c ~ exp(-x^2/(2 s^2)): regress -ln(c) on x^2.
double fit_gaussian_scale(std::span<const double> x, std::span<const double> c) {
    double sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(c[i] > 0.05) || !(c[i] < 0.999999)) continue;
        const double u = x[i] * x[i];
        const double y = -std::log(c[i]);
        sxx += u * u;
        sxy += u * y;
        ++n;
    }
    if (n < 1 || sxy <= 0.0) return 0.0;
    const double m = sxy / sxx;  // through-origin regression
    return 1.0 / std::sqrt(2.0 * m);
}

}  // namespace

MomentReport moment_check(const std::vector<MediumRealization>& ensemble,
                          const AcquisitionGeometry& geometry, Point2 scatterer,
                          std::span<const double> probe_ranges, const GoRegimeParams& params) {
    if (ensemble.size() < 2) throw std::invalid_argument("moment_check: need an ensemble");
    const int nx = geometry.n_sensors();
    const int nth = geometry.n_angles();
    const double k = TWO_PI / geometry.wavelength;
    const std::size_t N = ensemble.size();

    // Reference sensor: nearest to the array center; reference angle: middle.
    int sref = 0;
    double best = std::numeric_limits<double>::infinity();
    Point2 center{0.0, 0.0};
    for (const auto& s : geometry.sensors) center = center + (1.0 / nx) * s;
    for (int s = 0; s < nx; ++s) {
        const double dc = norm(geometry.sensors[s] - center);
        if (dc < best) {
            best = dc;
            sref = s;
        }
    }
    const int qref = nth / 2;

    // Direction toward the array center for the decay probes.
    Point2 down = center - scatterer;
    down = (1.0 / norm(down)) * down;

    std::vector<double> nu_ref(N);
    std::vector<cplx> decay_acc(probe_ranges.size(), cplx{0, 0});
    std::vector<cplx> coh1_acc(nx, cplx{0, 0}), coh2_acc(nx, cplx{0, 0});
    std::vector<cplx> dir_acc(nth, cplx{0, 0});
    std::mutex merge_mutex;

    parallel_for(N, [&](std::size_t lo, std::size_t hi) {
        std::vector<cplx> dloc(probe_ranges.size(), cplx{0, 0});
        std::vector<cplx> c1(nx, cplx{0, 0}), c2(nx, cplx{0, 0}), dr(nth, cplx{0, 0});
        auto phasor = [](double p) { return cplx{std::cos(p), std::sin(p)}; };
        for (std::size_t r = lo; r < hi; ++r) {
            const MediumRealization& mu = ensemble[r];
            std::vector<double> nus(nx);
            for (int s = 0; s < nx; ++s)
                nus[s] = phase_along_ray(mu, geometry.sensors[s], scatterer);
            nu_ref[r] = nus[sref];
            for (std::size_t p = 0; p < probe_ranges.size(); ++p) {
                const Point2 probe = scatterer + probe_ranges[p] * down;
                dloc[p] += phasor(k * phase_along_ray(mu, probe, scatterer));
            }
            for (int s = 0; s < nx; ++s) {
                c1[s] += phasor(k * (nus[s] - nus[sref]));
                c2[s] += phasor(2.0 * k * (nus[s] - nus[sref]));
            }
            const double gref = phase_along_ray(
                mu, scatterer, ray_entry_point(mu.grid, scatterer, geometry.direction(qref)));
            for (int q = 0; q < nth; ++q) {
                const double gq = phase_along_ray(
                    mu, scatterer, ray_entry_point(mu.grid, scatterer, geometry.direction(q)));
                dr[q] += phasor(k * (gq - gref));
            }
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t p = 0; p < dloc.size(); ++p) decay_acc[p] += dloc[p];
        for (int s = 0; s < nx; ++s) {
            coh1_acc[s] += c1[s];
            coh2_acc[s] += c2[s];
        }
        for (int q = 0; q < nth; ++q) dir_acc[q] += dr[q];
    });

    MomentReport rep;
    rep.theory = theory_predict(params);

    double mean = 0.0, var = 0.0;
    for (double v : nu_ref) mean += v;
    mean /= double(N);
    for (double v : nu_ref) var += (v - mean) * (v - mean);
    var /= double(N - 1);
    rep.var_nu_mc = var;
    rep.var_nu_theory = std::sqrt(TWO_PI) * params.sigma * params.sigma * params.ell *
                        norm(geometry.sensors[sref] - scatterer) / 4.0;

    rep.decay_r.assign(probe_ranges.begin(), probe_ranges.end());
    for (const cplx& a : decay_acc) rep.decay_mc.push_back(std::abs(a) / double(N));
    rep.ell_s1_fit = fit_exp_decay(rep.decay_r, rep.decay_mc);

    std::vector<double> t(nx);
    for (int s = 0; s < nx; ++s)
        t[s] = norm(geometry.sensors[s] - geometry.sensors[sref]);
    rep.offsets = t;
    for (int s = 0; s < nx; ++s) {
        rep.coh_j1.push_back(std::abs(coh1_acc[s]) / double(N));
        rep.coh_j2.push_back(std::abs(coh2_acc[s]) / double(N));
    }
    rep.X_d1_fit = fit_gaussian_scale(rep.offsets, rep.coh_j1);
    rep.X_d2_fit = fit_gaussian_scale(rep.offsets, rep.coh_j2);

    for (int q = 0; q < nth; ++q) {
        // transverse direction offset |P_vartheta (theta_q - theta_ref)|
        const Point2 dthe = geometry.direction(q) - geometry.direction(qref);
        const Point2 ax = geometry.cone_axis;
        const double along = dot(dthe, ax);
        rep.dir_offsets.push_back(norm(dthe - along * ax));
        rep.dir_coh.push_back(std::abs(dir_acc[q]) / double(N));
    }
    rep.Theta_d_fit = fit_gaussian_scale(rep.dir_offsets, rep.dir_coh);
    return rep;
}

}  // namespace shg
