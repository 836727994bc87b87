#include "mfbs/json_io.hpp"

#include <stdexcept>

namespace mfbs {

std::string to_string(BandwidthRule rule) {
  return rule == BandwidthRule::silverman ? "silverman" : "rate_only";
}

std::string to_string(EstimatorKind kind) {
  return kind == EstimatorKind::corrected ? "corrected" : "printed";
}

std::string to_string(NoiseBackend backend) {
  switch (backend) {
    case NoiseBackend::automatic: return "automatic";
    case NoiseBackend::cholesky: return "cholesky";
    case NoiseBackend::circulant: return "circulant";
  }
  return "automatic";
}

std::string to_string(EffectsDistribution::Kind kind) {
  using Kind = EffectsDistribution::Kind;
  switch (kind) {
    case Kind::beta: return "beta";
    case Kind::gamma: return "gamma";
    case Kind::gaussian: return "gaussian";
    case Kind::gaussian_mixture: return "gaussian_mixture";
  }
  return "beta";
}

std::string to_string(SupportTransform::Kind kind) {
  using Kind = SupportTransform::Kind;
  switch (kind) {
    case Kind::identity: return "identity";
    case Kind::affine: return "affine";
    case Kind::positive_half_line: return "positive_half_line";
    case Kind::real_line: return "real_line";
  }
  return "identity";
}

namespace {

[[noreturn]] void bad_value(const char* what, const std::string& s) {
  throw std::invalid_argument(std::string(what) + ": unknown value '" + s + "'");
}

}  // namespace

BandwidthRule bandwidth_rule_from_string(const std::string& s) {
  if (s == "silverman") return BandwidthRule::silverman;
  if (s == "rate_only") return BandwidthRule::rate_only;
  bad_value("bandwidth_rule", s);
}

EstimatorKind estimator_kind_from_string(const std::string& s) {
  if (s == "corrected") return EstimatorKind::corrected;
  if (s == "printed") return EstimatorKind::printed;
  bad_value("estimator", s);
}

NoiseBackend noise_backend_from_string(const std::string& s) {
  if (s == "automatic") return NoiseBackend::automatic;
  if (s == "cholesky") return NoiseBackend::cholesky;
  if (s == "circulant") return NoiseBackend::circulant;
  bad_value("backend", s);
}

EffectsDistribution::Kind effects_kind_from_string(const std::string& s) {
  using Kind = EffectsDistribution::Kind;
  if (s == "beta") return Kind::beta;
  if (s == "gamma") return Kind::gamma;
  if (s == "gaussian") return Kind::gaussian;
  if (s == "gaussian_mixture") return Kind::gaussian_mixture;
  bad_value("effects.kind", s);
}

Json config_to_json(const ExperimentConfig& config) {
  Json j;
  j["model"] = {{"hurst", config.params_truth.hurst},
                {"gamma_sq", config.params_truth.gamma_sq},
                {"sigma_sq", config.params_truth.sigma_sq},
                {"step", config.params_truth.step}};
  j["effects"] = {{"kind", to_string(config.dist.kind)},
                  {"params", config.dist.params}};
  j["subjects"] = config.subjects;
  j["n"] = config.n;
  j["replications"] = config.replications;
  j["seed"] = config.seed;
  j["m_grid"] = config.m_grid;
  j["kernel_bandwidth_rule"] = to_string(config.kernel_bandwidth_rule);
  j["estimator"] = to_string(config.estimator);
  j["cv_folds"] = config.cv_folds;
  j["backend"] = to_string(config.backend);
  return j;
}

Json report_to_json(const ExperimentReport& report) {
  Json j;
  j["config"] = config_to_json(report.config);
  j["per_parameter"] = {
      {"hurst", {{"mean", report.hurst.mean}, {"sdev", report.hurst.sdev}}},
      {"gamma_sq",
       {{"mean", report.gamma_sq.mean}, {"sdev", report.gamma_sq.sdev}}},
      {"sigma_sq",
       {{"mean", report.sigma_sq.mean}, {"sdev", report.sigma_sq.sdev}}}};
  j["effects"] = {{"mean_true", report.effects.mean_true},
                  {"mean_hat", report.effects.mean_hat},
                  {"sdev", report.effects.sdev}};
  if (report.ise_lagrange && report.ise_kernel)
    j["ise"] = {{"lagrange", *report.ise_lagrange},
                {"kernel", *report.ise_kernel}};
  else
    j["ise"] = nullptr;
  if (report.m_opt_mean)
    j["m_opt_mean"] = *report.m_opt_mean;
  else
    j["m_opt_mean"] = nullptr;
  j["failures"] = report.failures;
  if (report.runtime_s)
    j["runtime_s"] = *report.runtime_s;
  else
    j["runtime_s"] = nullptr;
  return j;
}

}  // namespace mfbs
