#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfbs/fgn.hpp"

// Panels of the log-price model
//   Y_t = theta_i * t + sigma * B_t + gamma * B^H_t,   theta_i = phi_i - sigma^2/2,
// observed through discrete increments dY_k = Y_{(k+1)h} - Y_{kh}. Each panel
// row carries n+4 increments: the lag-3 look-ahead in the zeta statistic needs
// indices up to n+2, and one spare column keeps the window arithmetic simple.

namespace mfbs {

inline constexpr std::size_t kExtraIncrements = 4;

struct ModelParams {
  double hurst = 0.7;     // H in (0,1)
  double gamma_sq = 0.25; // variance scale of the fractional component
  double sigma_sq = 0.04; // variance scale of the Brownian component
  double step = 1.0;      // sampling interval h

  void validate() const {
    if (!(hurst > 0.0 && hurst < 1.0))
      throw std::invalid_argument("ModelParams: hurst must lie in (0,1)");
    if (gamma_sq < 0.0 || sigma_sq < 0.0)
      throw std::invalid_argument("ModelParams: variances must be >= 0");
    if (gamma_sq == 0.0 && sigma_sq == 0.0)
      throw std::invalid_argument("ModelParams: need sigma_sq or gamma_sq > 0");
    if (!(step > 0.0)) throw std::invalid_argument("ModelParams: step must be > 0");
  }
};

struct InvalidDistributionParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Random-effects distribution for phi_i.
struct EffectsDistribution {
  enum class Kind { beta, gamma, gaussian, gaussian_mixture };
  Kind kind = Kind::beta;
  // beta: {alpha, beta}; gamma: {shape, scale}; gaussian: {mean, variance};
  // gaussian_mixture: {weight, mean1, var1, mean2, var2}
  std::vector<double> params{2.0, 2.0};

  static EffectsDistribution Beta(double a, double b);
  static EffectsDistribution Gamma(double shape, double scale);
  static EffectsDistribution Gaussian(double mean, double variance);
  static EffectsDistribution Mixture(double w, double mean1, double var1,
                                     double mean2, double var2);

  void validate() const;
  double mean() const;  // E[phi], used by experiment summaries
};

struct Panel {
  std::size_t subjects = 0;
  std::size_t columns = 0;  // increments per subject, n + kExtraIncrements
  std::vector<double> increments;  // row-major subjects x columns
  double step = 1.0;
  std::uint64_t seed = 0;
  std::optional<std::vector<double>> true_effects;  // phi_i when simulated
  std::optional<ModelParams> params_truth;

  const double* row(std::size_t i) const { return increments.data() + i * columns; }
  double* row(std::size_t i) { return increments.data() + i * columns; }
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// N iid draws of phi, deterministic per seed.
std::vector<double> sample_effects(const EffectsDistribution& dist,
                                   std::size_t count, std::uint64_t seed);

// Simulate a panel of N subjects with n usable increments each (rows store
// n + kExtraIncrements). Subjects use derived per-row noise streams, so the
// result does not depend on generation order or thread count.
// `backend` selects the fGn synthesis (automatic: Cholesky up to 4096).
Panel simulate_panel(const ModelParams& params, const EffectsDistribution& dist,
                     std::size_t subjects, std::size_t n, std::uint64_t seed,
                     NoiseBackend backend = NoiseBackend::automatic);

// Same, but reuses a prebuilt sampler (replication loops build it once).
// sampler.spec() must match {params.hurst, params.step, n + kExtraIncrements}.
Panel simulate_panel(const ModelParams& params, const EffectsDistribution& dist,
                     std::size_t subjects, std::size_t n, std::uint64_t seed,
                     const FgnSampler& sampler);

// Price paths X_t = exp(Y_t) with X_0 = 1; one more column than increments.
std::vector<std::vector<double>> panel_to_prices(const Panel& panel);

// CSV persistence. Schema: header "subject,k,dy", one row per increment,
// 17-significant-digit decimals (lossless double round trip).
void save_panel(const Panel& panel, const std::string& path);

// The CSV schema does not carry h; pass the configured step (defaults to 1).
Panel load_panel(const std::string& path, const std::string& format = "csv",
                 double step = 1.0);

}  // namespace mfbs
