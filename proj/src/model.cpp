#include "mfbs/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "mfbs/seeding.hpp"

namespace mfbs {

EffectsDistribution EffectsDistribution::Beta(double a, double b) {
  EffectsDistribution d;
  d.kind = Kind::beta;
  d.params = {a, b};
  d.validate();
  return d;
}

EffectsDistribution EffectsDistribution::Gamma(double shape, double scale) {
  EffectsDistribution d;
  d.kind = Kind::gamma;
  d.params = {shape, scale};
  d.validate();
  return d;
}

EffectsDistribution EffectsDistribution::Gaussian(double mean, double variance) {
  EffectsDistribution d;
  d.kind = Kind::gaussian;
  d.params = {mean, variance};
  d.validate();
  return d;
}

EffectsDistribution EffectsDistribution::Mixture(double w, double mean1,
                                                 double var1, double mean2,
                                                 double var2) {
  EffectsDistribution d;
  d.kind = Kind::gaussian_mixture;
  d.params = {w, mean1, var1, mean2, var2};
  d.validate();
  return d;
}

void EffectsDistribution::validate() const {
  auto need = [&](std::size_t n, const char* what) {
    if (params.size() != n)
      throw InvalidDistributionParams(std::string("EffectsDistribution: ") +
                                      what + " takes " + std::to_string(n) +
                                      " parameters, got " +
                                      std::to_string(params.size()));
  };
  switch (kind) {
    case Kind::beta:
      need(2, "beta");
      if (!(params[0] > 0.0) || !(params[1] > 0.0))
        throw InvalidDistributionParams("beta: shapes must be > 0");
      break;
    case Kind::gamma:
      need(2, "gamma");
      if (!(params[0] > 0.0) || !(params[1] > 0.0))
        throw InvalidDistributionParams("gamma: shape and scale must be > 0");
      break;
    case Kind::gaussian:
      need(2, "gaussian");
      if (!(params[1] >= 0.0))
        throw InvalidDistributionParams("gaussian: variance must be >= 0");
      break;
    case Kind::gaussian_mixture:
      need(5, "gaussian_mixture");
      if (!(params[0] >= 0.0 && params[0] <= 1.0))
        throw InvalidDistributionParams("mixture: weight must lie in [0,1]");
      if (!(params[2] >= 0.0) || !(params[4] >= 0.0))
        throw InvalidDistributionParams("mixture: variances must be >= 0");
      break;
  }
}

double EffectsDistribution::mean() const {
  validate();
  switch (kind) {
    case Kind::beta:
      return params[0] / (params[0] + params[1]);
    case Kind::gamma:
      return params[0] * params[1];
    case Kind::gaussian:
      return params[0];
    case Kind::gaussian_mixture:
      return params[0] * params[1] + (1.0 - params[0]) * params[3];
  }
  throw InvalidDistributionParams("EffectsDistribution: unknown kind");
}

std::vector<double> sample_effects(const EffectsDistribution& dist,
                                   std::size_t count, std::uint64_t seed) {
  dist.validate();
  std::vector<double> out(count);
  auto eng = make_engine(seed, StreamTag::effects, 0);
  switch (dist.kind) {
    case EffectsDistribution::Kind::beta: {
      // Beta(a,b) = Ga/(Ga+Gb) with unit-scale gammas.
      std::gamma_distribution<double> ga(dist.params[0], 1.0);
      std::gamma_distribution<double> gb(dist.params[1], 1.0);
      for (auto& v : out) {
        double x = ga(eng);
        double y = gb(eng);
        v = x / (x + y);
      }
      break;
    }
    case EffectsDistribution::Kind::gamma: {
      std::gamma_distribution<double> g(dist.params[0], dist.params[1]);
      for (auto& v : out) v = g(eng);
      break;
    }
    case EffectsDistribution::Kind::gaussian: {
      std::normal_distribution<double> nd(dist.params[0],
                                          std::sqrt(dist.params[1]));
      for (auto& v : out) v = nd(eng);
      break;
    }
    case EffectsDistribution::Kind::gaussian_mixture: {
      std::bernoulli_distribution pick(dist.params[0]);
      std::normal_distribution<double> n1(dist.params[1],
                                          std::sqrt(dist.params[2]));
      std::normal_distribution<double> n2(dist.params[3],
                                          std::sqrt(dist.params[4]));
      for (auto& v : out) {
        // Reset per draw so each phi consumes a fixed variate pattern.
        n1.reset();
        n2.reset();
        v = pick(eng) ? n1(eng) : n2(eng);
      }
      break;
    }
  }
  return out;
}

namespace {

void fill_subject_row(const ModelParams& params, const FgnSampler& sampler,
                      double theta, std::uint64_t seed, std::size_t subject,
                      double* row, std::size_t cols, std::vector<double>& fgn,
                      std::vector<double>& bm) {
  const double h = params.step;
  const double sigma = std::sqrt(params.sigma_sq);
  const double gamma = std::sqrt(params.gamma_sq);
  const double drift = theta * h;
  const double bm_scale = sigma * std::sqrt(h);

  if (gamma > 0.0) {
    auto eng = make_engine(seed, StreamTag::fgn, subject);
    sampler.sample(eng, fgn.data());
  } else {
    std::fill(fgn.begin(), fgn.end(), 0.0);
  }
  if (sigma > 0.0) {
    auto eng = make_engine(seed, StreamTag::brownian, subject);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (auto& v : bm) v = nd(eng);
  } else {
    std::fill(bm.begin(), bm.end(), 0.0);
  }
  for (std::size_t k = 0; k < cols; ++k)
    row[k] = drift + bm_scale * bm[k] + gamma * fgn[k];
}

}  // namespace

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

  // One serial pass for the effects keeps them independent of thread count.
  std::vector<double> phi = sample_effects(dist, subjects, seed);
  panel.true_effects = phi;

  const double theta_shift = params.sigma_sq / 2.0;

#pragma omp parallel
  {
    std::vector<double> fgn(cols), bm(cols);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(subjects); ++i) {
      const auto s = static_cast<std::size_t>(i);
      fill_subject_row(params, sampler, phi[s] - theta_shift, seed, s,
                       panel.row(s), cols, fgn, bm);
    }
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
  return simulate_panel(params, dist, subjects, n, seed, sampler);
}

std::vector<std::vector<double>> panel_to_prices(const Panel& panel) {
  std::vector<std::vector<double>> prices(panel.subjects);
  for (std::size_t i = 0; i < panel.subjects; ++i) {
    auto& path = prices[i];
    path.resize(panel.columns + 1);
    path[0] = 1.0;
    double y = 0.0;
    const double* dy = panel.row(i);
    for (std::size_t k = 0; k < panel.columns; ++k) {
      y += dy[k];
      path[k + 1] = std::exp(y);
    }
  }
  return prices;
}

void save_panel(const Panel& panel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_panel: cannot open " + path);
  out << "subject,k,dy\n";
  char buf[64];
  for (std::size_t i = 0; i < panel.subjects; ++i) {
    const double* dy = panel.row(i);
    for (std::size_t k = 0; k < panel.columns; ++k) {
      std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g", i, k, dy[k]);
      out << buf << '\n';
    }
  }
  if (!out) throw std::runtime_error("save_panel: write failed for " + path);
}

Panel load_panel(const std::string& path, const std::string& format,
                 double step) {
  if (format != "csv")
    throw std::invalid_argument("load_panel: unsupported format " + format);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_panel: cannot open " + path);

  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line))
    throw ParseError("load_panel: " + path + " is empty");
  ++lineno;
  // Tolerate a UTF-8 BOM and trailing CR from foreign writers.
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "subject,k,dy")
    throw ParseError("load_panel: line 1: expected header 'subject,k,dy', got '" +
                     line + "'");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t c1 = line.find(',');
    std::size_t c2 = (c1 == std::string::npos) ? std::string::npos
                                               : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw ParseError("load_panel: line " + std::to_string(lineno) +
                       ": expected 3 comma-separated fields");
    auto parse_field = [&](const std::string& text, std::size_t col,
                           bool integer) -> double {
      try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing junk");
        if (integer && (v < 0.0 || v != std::floor(v)))
          throw std::invalid_argument("not a non-negative integer");
        return v;
      } catch (const std::exception&) {
        throw ParseError("load_panel: line " + std::to_string(lineno) +
                         ", column " + std::to_string(col) +
                         ": cannot parse '" + text + "'");
      }
    };
    double subj_d = parse_field(line.substr(0, c1), 1, true);
    double k_d = parse_field(line.substr(c1 + 1, c2 - c1 - 1), 2, true);
    double dy = parse_field(line.substr(c2 + 1), 3, false);

    auto subj = static_cast<std::size_t>(subj_d);
    auto k = static_cast<std::size_t>(k_d);
    if (subj >= rows.size()) {
      if (subj != rows.size())
        throw DimensionMismatch("load_panel: line " + std::to_string(lineno) +
                                ": subject ids must be contiguous from 0 (got " +
                                std::to_string(subj) + ")");
      rows.emplace_back();
    }
    if (k != rows[subj].size())
      throw DimensionMismatch("load_panel: line " + std::to_string(lineno) +
                              ": increment indices for subject " +
                              std::to_string(subj) +
                              " must be contiguous from 0 (got " +
                              std::to_string(k) + ")");
    rows[subj].push_back(dy);
  }
  if (rows.empty()) throw ParseError("load_panel: " + path + " has no data rows");

  const std::size_t cols = rows[0].size();
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].size() != cols)
      throw DimensionMismatch("load_panel: subject " + std::to_string(i) +
                              " has " + std::to_string(rows[i].size()) +
                              " increments, expected " + std::to_string(cols));
  if (cols <= kExtraIncrements)
    throw DimensionMismatch("load_panel: need more than " +
                            std::to_string(kExtraIncrements) +
                            " increments per subject, got " +
                            std::to_string(cols));
  if (!(step > 0.0)) throw std::invalid_argument("load_panel: step must be > 0");

  Panel panel;
  panel.subjects = rows.size();
  panel.columns = cols;
  panel.step = step;
  panel.increments.reserve(panel.subjects * cols);
  for (const auto& r : rows)
    panel.increments.insert(panel.increments.end(), r.begin(), r.end());
  return panel;
}

}  // namespace mfbs
