#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mfbs/moments.hpp"

// Closed-form method-of-moments estimators for (H, gamma^2, sigma^2) from the
// panel moment summary, plus per-subject drift and random-effect recovery.
//
// estimate_global inverts the moment limits exactly as written:
//   Hhat      = 1/2 log2+((zeta_bar - 4 h^2 V) / (eta_bar - h^2 V))
//   gamma2hat = (eta_bar - h^2 V) / (h^{2Hhat} (2^{2Hhat-1} - 1))
//   sigma2hat = (xi_bar - h^2 V - gamma2hat h^{2Hhat}) / h
// with V = v_bar. At finite n the plug-in V overshoots E[theta^2] by exactly
// Var(theta_hat) = sigma^2/(nh) + gamma^2 (nh)^{2H-2}, which pushes Hhat down
// and sigma2hat strongly negative at panel sizes of practical interest.
// estimate_global_corrected removes that inflation by a fixed-point update of
// V and then subtracts the second-order (delta-method) curvature bias of the
// moment map, using the cross-subject scatter of the per-subject statistics.

namespace mfbs {

struct GlobalEstimate {
  double hurst_hat = 0.0;     // reported in [0,1]
  double gamma_sq_hat = 0.0;  // may be negative; see diagnostics
  double sigma_sq_hat = 0.0;  // may be negative; see diagnostics
  struct Diagnostics {
    double ratio_numerator = 0.0;   // zeta_bar - 4 h^2 V
    double ratio_denominator = 0.0; // eta_bar - h^2 V
    bool clamped = false;           // Hhat left [0.01, 0.99] before powers
    bool negative_variance = false; // gamma_sq_hat or sigma_sq_hat < 0
  } diagnostics;
};

struct SubjectEstimate {
  double theta_hat = 0.0;  // drift per unit time
  double phi_hat = 0.0;    // theta_hat + sigma_sq_hat/2
  std::size_t subject_index = 0;
};

// Thrown when a moment denominator is numerically degenerate. Carries the
// diagnostics gathered up to the failure point.
struct DegenerateDenominator : std::runtime_error {
  DegenerateDenominator(const std::string& msg,
                        GlobalEstimate::Diagnostics diag)
      : std::runtime_error(msg), diagnostics(diag) {}
  GlobalEstimate::Diagnostics diagnostics;
};

struct CorrectedEstimate {
  GlobalEstimate estimate;      // final debiased values
  double v_bar_corrected = 0.0; // v_bar after drift-variance removal
  int iterations = 0;           // fixed-point steps taken
  bool converged = false;
};

// Drift per unit time: (1/(nh)) sum_{k<n} dY_k.
double estimate_theta(const double* row, std::size_t available, std::size_t n,
                      double h);
double estimate_theta(const std::vector<double>& row, std::size_t n, double h);

// Plain moment inversion as printed above (V = summary.v_bar).
GlobalEstimate estimate_global(const MomentSummary& summary);

// Finite-n corrected inversion; the production default for data analysis.
CorrectedEstimate estimate_global_corrected(const MomentSummary& summary);

// Per-subject random effects phi_hat_i = theta_hat_i + sigma_sq_hat/2.
std::vector<SubjectEstimate> estimate_effects(const Panel& panel, std::size_t n,
                                              const GlobalEstimate& global);

// Sampling variance of sqrt(n)(theta_hat - theta):
//   v_theta^2 = (sigma^2 + gamma^2 h^{2H-1}) / h.
// Exact when H = 1/2 or gamma^2 = 0; for H != 1/2 with gamma^2 > 0 the exact
// finite-n variance is sigma^2/(nh) + gamma^2 (nh)^{2H-2} per replicate,
// which this formula matches only at those boundary cases.
double asymptotic_variance_theta(const ModelParams& params);

namespace detail {

// Total moment map (no throws): log2+ then clamp of the power exponent to
// [0.01, 0.99]. Returns {hurst_raw, hurst_pow, gamma_sq, sigma_sq}.
struct GmmPoint {
  double hurst_raw;
  double hurst_pow;
  double gamma_sq;
  double sigma_sq;
};
GmmPoint gmm_map(double xi, double eta, double zeta, double v, double h);

}  // namespace detail

}  // namespace mfbs
