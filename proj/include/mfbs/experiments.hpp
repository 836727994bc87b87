#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mfbs/cdf.hpp"
#include "mfbs/estimators.hpp"
#include "mfbs/model.hpp"

// Monte Carlo harness: replicated panel simulation -> moment estimation ->
// effect recovery -> CDF fitting, with deterministic per-replication seeds
// and fixed-order aggregation (reports are byte-stable across thread counts).

namespace mfbs {

enum class BandwidthRule { silverman, rate_only };
enum class EstimatorKind { corrected, printed };

struct ExperimentConfig {
  ModelParams params_truth;
  EffectsDistribution dist;
  std::size_t subjects = 100;  // N
  std::size_t n = 250;         // usable increments per subject
  std::size_t replications = 50;
  std::uint64_t seed = 0;
  std::vector<std::size_t> m_grid = default_m_grid();
  BandwidthRule kernel_bandwidth_rule = BandwidthRule::silverman;
  EstimatorKind estimator = EstimatorKind::corrected;
  std::size_t cv_folds = 5;
  NoiseBackend backend = NoiseBackend::automatic;

  static std::vector<std::size_t> default_m_grid();  // {2,...,30}
  void validate() const;
};

struct ParameterStats {
  double mean = 0.0;
  double sdev = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  ParameterStats hurst, gamma_sq, sigma_sq;
  struct Effects {
    double mean_true = 0.0;  // replication average of mean(phi_i)
    double mean_hat = 0.0;   // replication average of mean(phi_hat_i)
    double sdev = 0.0;       // replication sd of mean(phi_hat) - mean(phi)
  } effects;
  std::optional<double> ise_lagrange;  // set by run_cdf_comparison
  std::optional<double> ise_kernel;
  std::optional<double> m_opt_mean;
  std::size_t failures = 0;            // replications dropped (degenerate fit)
  std::optional<double> runtime_s;     // callers that time the run fill this
};

// Integrated squared error over [-1,1] by composite Simpson on 1025 points.
double ise(const std::function<double(double)>& estimate,
           const std::function<double(double)>& truth);

// True distribution function of the effects; Gaussian/mixture via erfc,
// Beta and Gamma via regularized incomplete beta/gamma (|error| < 1e-10).
// Accepts +/-infinity.
double effects_cdf(const EffectsDistribution& dist, double z);

// Support transform matched to the distribution's support: Beta -> affine
// onto [0,1], Gamma -> positive half-line, Gaussian/mixture -> real line.
SupportTransform default_transform(const EffectsDistribution& dist);

// Kernel bandwidth for a transformed sample of size N with sd s:
// silverman = 1.06 s N^{-1/5}; rate_only = N^{-1/5}.
double kernel_bandwidth(BandwidthRule rule, double sdev, std::size_t count);

// Replication loop: simulate -> summarize -> global estimate -> effects.
// Aggregates parameter means/sds and the effect summary.
ExperimentReport run_recovery_experiment(const ExperimentConfig& config);

// Same pipeline, then per replication: CV-select m, fit the Lagrange and
// kernel CDF estimators on the transformed effects, integrate squared error
// against the true transformed CDF.
ExperimentReport run_cdf_comparison(const ExperimentConfig& config);

struct NormalityDiagnostics {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double ks_statistic = 0.0;  // sup-distance to the standard normal CDF
};

// Shape diagnostics for standardized errors; needs >= 100 samples.
NormalityDiagnostics normality_diagnostics(const std::vector<double>& samples);

}  // namespace mfbs
