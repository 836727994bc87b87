#include "mfbs/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace mfbs {

namespace detail {

GmmPoint gmm_map(double xi, double eta, double zeta, double v, double h) {
  const double h2 = h * h;
  const double num = zeta - 4.0 * h2 * v;
  const double den = eta - h2 * v;
  double hurst_raw = 0.0;
  if (den != 0.0) {
    const double ratio = num / den;
    if (ratio > 0.0) hurst_raw = 0.5 * std::log2(ratio);
  }
  const double hurst_pow = std::clamp(hurst_raw, 0.01, 0.99);
  const double h_pow = std::pow(h, 2.0 * hurst_pow);
  const double denom2 = std::pow(2.0, 2.0 * hurst_pow - 1.0) - 1.0;
  const double gamma_sq = den == 0.0 ? 0.0 : den / (h_pow * denom2);
  const double sigma_sq = (xi - h2 * v - gamma_sq * h_pow) / h;
  return {hurst_raw, hurst_pow, gamma_sq, sigma_sq};
}

}  // namespace detail

namespace {

double degeneracy_tol(const MomentSummary& s) {
  return 1e-12 * std::max({1.0, std::abs(s.zeta_bar), std::abs(s.eta_bar)});
}

// Shared core: evaluate the moment map at a given V with degeneracy checks.
detail::GmmPoint map_checked(const MomentSummary& s, double v,
                             GlobalEstimate::Diagnostics& diag) {
  const double h2 = s.h * s.h;
  diag.ratio_numerator = s.zeta_bar - 4.0 * h2 * v;
  diag.ratio_denominator = s.eta_bar - h2 * v;
  const double tol = degeneracy_tol(s);
  if (std::abs(diag.ratio_denominator) <= tol)
    throw DegenerateDenominator(
        "estimate_global: |eta_bar - h^2 V| below tolerance", diag);
  auto p = detail::gmm_map(s.xi_bar, s.eta_bar, s.zeta_bar, v, s.h);
  diag.clamped = p.hurst_pow != p.hurst_raw;
  if (std::abs(std::pow(2.0, 2.0 * p.hurst_pow - 1.0) - 1.0) <= tol)
    throw DegenerateDenominator(
        "estimate_global: |2^(2H-1) - 1| below tolerance (H near 1/2)", diag);
  return p;
}

GlobalEstimate finish(const detail::GmmPoint& p,
                      GlobalEstimate::Diagnostics diag) {
  GlobalEstimate est;
  est.hurst_hat = std::clamp(p.hurst_raw, 0.0, 1.0);
  est.gamma_sq_hat = p.gamma_sq;
  est.sigma_sq_hat = p.sigma_sq;
  diag.negative_variance = p.gamma_sq < 0.0 || p.sigma_sq < 0.0;
  est.diagnostics = diag;
  return est;
}

}  // namespace

double estimate_theta(const double* row, std::size_t available, std::size_t n,
                      double h) {
  if (n == 0) throw InsufficientData("estimate_theta: n must be >= 1");
  if (available < n)
    throw InsufficientData("estimate_theta: need " + std::to_string(n) +
                           " increments, have " + std::to_string(available));
  if (!(h > 0.0)) throw std::invalid_argument("estimate_theta: h must be > 0");
  detail::KahanSum acc;
  for (std::size_t k = 0; k < n; ++k) acc.add(row[k]);
  return acc.value() / (static_cast<double>(n) * h);
}

double estimate_theta(const std::vector<double>& row, std::size_t n, double h) {
  return estimate_theta(row.data(), row.size(), n, h);
}

GlobalEstimate estimate_global(const MomentSummary& summary) {
  GlobalEstimate::Diagnostics diag;
  auto p = map_checked(summary, summary.v_bar, diag);
  return finish(p, diag);
}

CorrectedEstimate estimate_global_corrected(const MomentSummary& summary) {
  const double h = summary.h;
  const double nh = static_cast<double>(summary.n_used) * h;
  const double v_raw = summary.v_bar;

  // Stage 1: remove the drift-estimation variance from V by fixed point.
  // Var(theta_hat) = sigma^2/(nh) + gamma^2 (nh)^{2H-2}; the update is a
  // contraction (|slope| ~ 1/3 at panel scales), so plain iteration settles
  // in a few tens of steps.
  auto drift_var = [&](const detail::GmmPoint& p) {
    return std::max(p.sigma_sq, 0.0) / nh +
           std::max(p.gamma_sq, 0.0) * std::pow(nh, 2.0 * p.hurst_pow - 2.0);
  };

  GlobalEstimate::Diagnostics diag;
  double v = v_raw;
  auto p = map_checked(summary, v, diag);
  CorrectedEstimate out;
  for (int it = 0; it < 30; ++it) {
    const double vn = std::max(v_raw - drift_var(p), 0.0);
    ++out.iterations;
    if (std::abs(vn - v) <= 1e-13 * std::max(1.0, v)) {
      v = vn;
      out.converged = true;
      break;
    }
    v = vn;
    p = map_checked(summary, v, diag);
  }
  out.v_bar_corrected = v;

  // Stage 2: subtract the second-order (curvature) bias of the map. With
  // mu = (xi_bar, eta_bar, zeta_bar, v_bar_raw) and f the moment map holding
  // the stage-1 variance correction fixed, E[f(mu)] - f(E[mu]) is
  // approximately 1/2 tr(Hess f . Cov(mu)); Cov(mu) is estimated from the
  // cross-subject scatter of the per-subject statistics.
  const double c_frozen = drift_var(p);
  const std::array<double, 4> mu{summary.xi_bar, summary.eta_bar,
                                 summary.zeta_bar, v_raw};
  auto f = [&](const std::array<double, 4>& m) -> std::array<double, 3> {
    auto q = detail::gmm_map(m[0], m[1], m[2], std::max(m[3] - c_frozen, 0.0),
                             h);
    return {q.hurst_pow, q.gamma_sq, q.sigma_sq};
  };

  // Covariance of the four panel averages, from per-subject rows.
  const auto N = summary.subjects;
  std::array<std::array<double, 4>, 4> cov{};
  if (N >= 2) {
    std::array<double, 4> mean{};
    for (std::size_t i = 0; i < N; ++i)
      for (int j = 0; j < 4; ++j) mean[j] += summary.subject_row(i)[j];
    for (int j = 0; j < 4; ++j) mean[j] /= static_cast<double>(N);
    for (std::size_t i = 0; i < N; ++i) {
      const double* r = summary.subject_row(i);
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          cov[j][k] += (r[j] - mean[j]) * (r[k] - mean[k]);
    }
    const double scale = 1.0 / (static_cast<double>(N - 1) *
                                static_cast<double>(N));  // cov of the mean
    for (auto& rowc : cov)
      for (auto& c : rowc) c *= scale;
  }

  std::array<double, 4> steps{};
  for (int j = 0; j < 4; ++j)
    steps[j] = 1e-5 * std::max(std::abs(mu[j]), 1e-3);

  const auto f0 = f(mu);
  std::array<double, 3> bias{};
  for (int j = 0; j < 4; ++j) {
    for (int k = j; k < 4; ++k) {
      std::array<double, 3> hjk{};
      if (j == k) {
        auto mp = mu, mm = mu;
        mp[j] += steps[j];
        mm[j] -= steps[j];
        const auto fp = f(mp), fm = f(mm);
        for (int c = 0; c < 3; ++c)
          hjk[c] = (fp[c] - 2.0 * f0[c] + fm[c]) / (steps[j] * steps[j]);
      } else {
        auto mpp = mu, mpm = mu, mmp = mu, mmm = mu;
        mpp[j] += steps[j]; mpp[k] += steps[k];
        mpm[j] += steps[j]; mpm[k] -= steps[k];
        mmp[j] -= steps[j]; mmp[k] += steps[k];
        mmm[j] -= steps[j]; mmm[k] -= steps[k];
        const auto fpp = f(mpp), fpm = f(mpm), fmp = f(mmp), fmm = f(mmm);
        for (int c = 0; c < 3; ++c)
          hjk[c] = (fpp[c] - fpm[c] - fmp[c] + fmm[c]) /
                   (4.0 * steps[j] * steps[k]);
      }
      const double w = cov[j][k] * (j == k ? 1.0 : 2.0);
      if (std::isfinite(hjk[0]) && std::isfinite(hjk[1]) &&
          std::isfinite(hjk[2]))
        for (int c = 0; c < 3; ++c) bias[c] += 0.5 * hjk[c] * w;
    }
  }

  detail::GmmPoint debiased = p;
  debiased.hurst_raw = p.hurst_pow - bias[0];
  debiased.hurst_pow = std::clamp(debiased.hurst_raw, 0.01, 0.99);
  debiased.gamma_sq = p.gamma_sq - bias[1];
  debiased.sigma_sq = p.sigma_sq - bias[2];
  out.estimate = finish(debiased, diag);
  return out;
}

std::vector<SubjectEstimate> estimate_effects(const Panel& panel,
                                              std::size_t n,
                                              const GlobalEstimate& global) {
  if (panel.columns < n)
    throw InsufficientData("estimate_effects: panel rows shorter than n");
  std::vector<SubjectEstimate> out(panel.subjects);
  const double half_s2 = global.sigma_sq_hat / 2.0;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(panel.subjects);
       ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double th = estimate_theta(panel.row(idx), panel.columns, n,
                                     panel.step);
    out[idx] = SubjectEstimate{th, th + half_s2, idx};
  }
  return out;
}

double asymptotic_variance_theta(const ModelParams& params) {
  params.validate();
  return (params.sigma_sq +
          params.gamma_sq * std::pow(params.step, 2.0 * params.hurst - 1.0)) /
         params.step;
}

}  // namespace mfbs
