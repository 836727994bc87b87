#include "mfbs/reference.hpp"

#include <cmath>
#include <random>

#include "mfbs/seeding.hpp"

namespace mfbs::reference {

Panel simulate_panel(const ModelParams& params, const EffectsDistribution& dist,
                     std::size_t subjects, std::size_t n, std::uint64_t seed,
                     const FgnSampler& sampler) {
  params.validate();
  dist.validate();
  if (subjects == 0 || n == 0)
    throw std::invalid_argument("simulate_panel: need subjects >= 1, n >= 1");
  const std::size_t cols = n + kExtraIncrements;
  if (sampler.spec().length != cols || sampler.spec().hurst != params.hurst ||
      sampler.spec().step != params.step)
    throw std::invalid_argument("simulate_panel: sampler spec mismatch");

  Panel panel;
  panel.subjects = subjects;
  panel.columns = cols;
  panel.step = params.step;
  panel.seed = seed;
  panel.params_truth = params;
  panel.increments.assign(subjects * cols, 0.0);

  const std::vector<double> phi = sample_effects(dist, subjects, seed);
  panel.true_effects = phi;

  const double h = params.step;
  const double sigma = std::sqrt(params.sigma_sq);
  const double gamma = std::sqrt(params.gamma_sq);
  const double bm_scale = sigma * std::sqrt(h);
  std::vector<double> fgn(cols, 0.0), bm(cols, 0.0);

  for (std::size_t i = 0; i < subjects; ++i) {
    const double drift = (phi[i] - params.sigma_sq / 2.0) * h;
    if (gamma > 0.0) {
      auto eng = make_engine(seed, StreamTag::fgn, i);
      sampler.sample(eng, fgn.data());
    }
    if (sigma > 0.0) {
      auto eng = make_engine(seed, StreamTag::brownian, i);
      std::normal_distribution<double> nd(0.0, 1.0);
      for (auto& v : bm) v = nd(eng);
    }
    double* row = panel.row(i);
    for (std::size_t k = 0; k < cols; ++k)
      row[k] = drift + bm_scale * bm[k] + gamma * fgn[k];
  }
  return panel;
}

Panel simulate_panel(const ModelParams& params, const EffectsDistribution& dist,
                     std::size_t subjects, std::size_t n, std::uint64_t seed,
                     NoiseBackend backend) {
  params.validate();
  if (n == 0) throw std::invalid_argument("simulate_panel: need n >= 1");
  FgnSpec spec{params.hurst, params.step, n + kExtraIncrements};
  FgnSampler sampler(spec, backend);
  return reference::simulate_panel(params, dist, subjects, n, seed, sampler);
}

MomentSummary summarize(const Panel& panel, std::size_t n) {
  if (panel.subjects == 0) throw InsufficientData("summarize: empty panel");
  if (n == 0) throw InsufficientData("summarize: n must be >= 1");
  if (panel.columns < n + 3)
    throw InsufficientData("summarize: need n+3 increments per subject");

  MomentSummary s;
  s.subjects = panel.subjects;
  s.n_used = n;
  s.h = panel.step;
  s.per_subject.assign(panel.subjects * 4, 0.0);

  const double inv_nh = 1.0 / (static_cast<double>(n) * panel.step);
  for (std::size_t i = 0; i < panel.subjects; ++i) {
    const double* row = panel.row(i);
    mfbs::detail::KahanSum drift;
    for (std::size_t k = 0; k < n; ++k) drift.add(row[k]);
    const double theta_hat = drift.value() * inv_nh;
    double* out = s.per_subject.data() + 4 * i;
    out[0] = subject_xi(row, panel.columns, n, panel.step);
    out[1] = subject_eta(row, panel.columns, n, panel.step);
    out[2] = subject_zeta(row, panel.columns, n, panel.step);
    out[3] = theta_hat * theta_hat;
  }

  mfbs::detail::KahanSum col[4];
  for (std::size_t i = 0; i < panel.subjects; ++i)
    for (int j = 0; j < 4; ++j) col[j].add(s.per_subject[4 * i + j]);
  const double inv_n = 1.0 / static_cast<double>(panel.subjects);
  s.xi_bar = col[0].value() * inv_n;
  s.eta_bar = col[1].value() * inv_n;
  s.zeta_bar = col[2].value() * inv_n;
  s.v_bar = col[3].value() * inv_n;
  return s;
}

}  // namespace mfbs::reference
