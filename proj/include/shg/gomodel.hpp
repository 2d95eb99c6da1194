#pragma once

#include <span>
#include <vector>

#include "shg/acquisition.hpp"
#include "shg/medium.hpp"

namespace shg {

/// Scales of the geometrical-optics regime. Lengths in wavelengths; L is the
/// propagation distance from the scatterer to the array (and, along the cone
/// axis, to the illuminated boundary).
struct GoRegimeParams {
    double wavelength = 1.0;
    double ell = 25.0;
    double sigma = 5.8e-3;
    double L = 2500.0;
    double aperture = 200.0;
    double cone_half_angle = 0.04;
};

struct RegimeRatio {
    const char* name;
    double value;   // should be << 1 in the asymptotic regime
    bool flagged;   // value >= 0.5
};

/// Closed-form predictions: scattering lengths, decoherence scales and the
/// effective CINT resolution scales.
struct TheoryPrediction {
    double ell_s1 = 0.0;   // scattering length, fundamental
    double ell_s2 = 0.0;   // = ell_s1 / 4
    double X_d1 = 0.0;     // decoherence length, fundamental
    double X_d2 = 0.0;     // = X_d1 / 2
    double Theta_d = 0.0;  // decoherence angle
    double L = 0.0;
    double k = 0.0;
    std::vector<RegimeRatio> regime;
};

TheoryPrediction theory_predict(const GoRegimeParams& params);

/// Effective scales once thresholds X, Theta are applied (harmonic j):
///   1/X_e^2 = 1/X^2 + 1/X_dj^2,   1/Theta_e^2 = 1/Theta^2 + j^2/Theta_d^2.
double effective_X(const TheoryPrediction& p, double X, int harmonic);
double effective_Theta(const TheoryPrediction& p, double Theta, int harmonic);

/// Predicted CINT point-spread profile exp(-(jk X_e dy_perp / L)^2/2
/// - (jk Theta_e dy_axis)^2/2) over the requested offsets; dy_perp is the
/// offset along the array, dy_axis the offset transverse to the cone axis.
std::vector<double> predicted_cint_profile(const TheoryPrediction& p, double X, double Theta,
                                           int harmonic, std::span<const Point2> offsets);

/// Travel-time phase nu = (|to-from|/2) * integral of 4*pi*eta along the
/// segment (composite midpoint rule, step <= ell/8, bilinear field lookup).
/// Throws if the segment leaves the sampled field.
double phase_along_ray(const MediumRealization& mu_field, Point2 from, Point2 to);

/// Exit point of the backward ray from p in direction -theta through the
/// box of the sampled field (the "incident point" of the ray).
Point2 ray_entry_point(const Grid2D& box, Point2 p, Point2 theta);

/// Phase-screen synthesis of the array data for a single point scatterer:
///   d1 = e^{ik x.theta}(e^{ik gamma(x,theta)} - 1)
///        + k^2 <eta1> G(x,y;om) e^{ik theta.y + ik gamma(y,theta)}
///   d2 = 4 k^2 <eta2> G(x,y;2om) e^{i 2k theta.y + i 2k gamma(y,theta)}
/// with G(x,y;j om) = G0 e^{i jk nu(x,y)}.
ArrayData synth_data_go(const MediumRealization& mu_field, Point2 scatterer,
                        const AcquisitionGeometry& geometry, double net_eta1,
                        double net_eta2);

/// Monte-Carlo moment estimates against the closed forms.
struct MomentReport {
    // Var(nu) at the reference sensor vs sqrt(2 pi) sigma^2 ell r / 4.
    double var_nu_mc = 0.0;
    double var_nu_theory = 0.0;

    // |E[G/G0]| versus distance, with the fitted exponential decay length.
    std::vector<double> decay_r;
    std::vector<double> decay_mc;
    double ell_s1_fit = 0.0;

    // |E[e^{i jk (nu - nu')}]| versus sensor offset and fitted Gaussian scales.
    std::vector<double> offsets;
    std::vector<double> coh_j1, coh_j2;
    double X_d1_fit = 0.0;
    double X_d2_fit = 0.0;

    // |E[u_i u_i'^*]| at the scatterer versus direction offset.
    std::vector<double> dir_offsets;
    std::vector<double> dir_coh;
    double Theta_d_fit = 0.0;

    TheoryPrediction theory;
};

/// Runs the moment estimates over an ensemble of realizations. probe_ranges
/// selects the distances for the mean-Green decay fit; sensors/angles come
/// from the geometry; the scatterer sits at distance L above the array center.
MomentReport moment_check(const std::vector<MediumRealization>& ensemble,
                          const AcquisitionGeometry& geometry, Point2 scatterer,
                          std::span<const double> probe_ranges,
                          const GoRegimeParams& params);

}  // namespace shg
