#include "mfbs/moments.hpp"

#include <cmath>

namespace mfbs {

namespace {

void require(std::size_t available, std::size_t needed, const char* what) {
  if (available < needed)
    throw InsufficientData(std::string(what) + ": need " +
                           std::to_string(needed) + " increments, have " +
                           std::to_string(available));
}

}  // namespace

double subject_xi(const double* row, std::size_t available, std::size_t n,
                  [[maybe_unused]] double h) {
  if (n == 0) throw InsufficientData("subject_xi: n must be >= 1");
  require(available, n, "subject_xi");
  detail::KahanSum acc;
  for (std::size_t k = 0; k < n; ++k) acc.add(row[k] * row[k]);
  return acc.value() / static_cast<double>(n);
}

double subject_eta(const double* row, std::size_t available, std::size_t n,
                   [[maybe_unused]] double h) {
  if (n == 0) throw InsufficientData("subject_eta: n must be >= 1");
  require(available, n + 1, "subject_eta");
  detail::KahanSum acc;
  for (std::size_t k = 0; k < n; ++k) acc.add(row[k] * row[k + 1]);
  return acc.value() / static_cast<double>(n);
}

double subject_zeta(const double* row, std::size_t available, std::size_t n,
                    [[maybe_unused]] double h) {
  if (n == 0) throw InsufficientData("subject_zeta: n must be >= 1");
  require(available, n + 3, "subject_zeta");
  detail::KahanSum acc;
  for (std::size_t k = 0; k < n; ++k)
    acc.add((row[k] + row[k + 1]) * (row[k + 2] + row[k + 3]));
  return acc.value() / static_cast<double>(n);
}

double subject_xi(const std::vector<double>& row, std::size_t n, double h) {
  return subject_xi(row.data(), row.size(), n, h);
}
double subject_eta(const std::vector<double>& row, std::size_t n, double h) {
  return subject_eta(row.data(), row.size(), n, h);
}
double subject_zeta(const std::vector<double>& row, std::size_t n, double h) {
  return subject_zeta(row.data(), row.size(), n, h);
}

MomentSummary summarize(const Panel& panel, std::size_t n) {
  if (panel.subjects == 0) throw InsufficientData("summarize: empty panel");
  if (n == 0) throw InsufficientData("summarize: n must be >= 1");
  require(panel.columns, n + 3, "summarize");

  MomentSummary s;
  s.subjects = panel.subjects;
  s.n_used = n;
  s.h = panel.step;
  s.per_subject.assign(panel.subjects * 4, 0.0);

  const double inv_nh = 1.0 / (static_cast<double>(n) * panel.step);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(panel.subjects);
       ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double* row = panel.row(idx);
    detail::KahanSum drift;
    for (std::size_t k = 0; k < n; ++k) drift.add(row[k]);
    const double theta_hat = drift.value() * inv_nh;
    double* out = s.per_subject.data() + 4 * idx;
    out[0] = subject_xi(row, panel.columns, n, panel.step);
    out[1] = subject_eta(row, panel.columns, n, panel.step);
    out[2] = subject_zeta(row, panel.columns, n, panel.step);
    out[3] = theta_hat * theta_hat;
  }

  detail::KahanSum col[4];
  for (std::size_t i = 0; i < panel.subjects; ++i)
    for (int j = 0; j < 4; ++j) col[j].add(s.per_subject[4 * i + j]);
  const double inv_n = 1.0 / static_cast<double>(panel.subjects);
  s.xi_bar = col[0].value() * inv_n;
  s.eta_bar = col[1].value() * inv_n;
  s.zeta_bar = col[2].value() * inv_n;
  s.v_bar = col[3].value() * inv_n;
  return s;
}

TheoreticalMoments theoretical_moments(const ModelParams& params,
                                       double second_moment_theta) {
  params.validate();
  if (second_moment_theta < 0.0)
    throw std::invalid_argument("theoretical_moments: E[theta^2] must be >= 0");
  const double h = params.step;
  const double h2H = std::pow(h, 2.0 * params.hurst);
  const double drift2 = second_moment_theta * h * h;
  const double pow_term = std::pow(2.0, 2.0 * params.hurst - 1.0) - 1.0;
  TheoreticalMoments t;
  t.xi_inf = drift2 + params.sigma_sq * h + params.gamma_sq * h2H;
  t.eta_inf = drift2 + params.gamma_sq * h2H * pow_term;
  t.zeta_inf = 4.0 * drift2 + params.gamma_sq * h2H *
                                  std::pow(2.0, 2.0 * params.hurst) * pow_term;
  return t;
}

}  // namespace mfbs
