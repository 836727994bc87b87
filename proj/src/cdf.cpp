#include "mfbs/cdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "mfbs/moments.hpp"
#include "mfbs/seeding.hpp"

namespace mfbs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNodeSnap = 1e-14;  // treat |x - node| below this as a hit

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

// Barycentric weights for the Chebyshev-Gauss nodes (common factor dropped).
std::vector<double> barycentric_weights(std::size_t m) {
  std::vector<double> w(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double s = std::sin((2.0 * j + 1.0) * kPi / (2.0 * m));
    w[j] = (j % 2 == 0) ? s : -s;
  }
  return w;
}

void check_unit_interval(double x, const char* what) {
  if (!(x >= -1.0 - 1e-9 && x <= 1.0 + 1e-9))
    throw DomainError(std::string(what) + ": x = " + std::to_string(x) +
                      " outside [-1,1]");
}

}  // namespace

SupportTransform SupportTransform::Affine(double a, double b) {
  if (!(b > a))
    throw std::invalid_argument("SupportTransform::Affine: need a < b");
  return {Kind::affine, a, b};
}

double apply_transform(const SupportTransform& t, double z) {
  switch (t.kind) {
    case SupportTransform::Kind::identity:
      return z;
    case SupportTransform::Kind::affine:
      return (z - 0.5 * (t.a + t.b)) / (0.5 * (t.b - t.a));
    case SupportTransform::Kind::positive_half_line:
      if (!(z > -1.0))
        throw DomainError("apply_transform: positive-half-line needs z > -1, got " +
                          std::to_string(z));
      return 2.0 * z / (1.0 + z) - 1.0;
    case SupportTransform::Kind::real_line:
      return (2.0 / kPi) * std::atan(z);
  }
  throw DomainError("apply_transform: unknown transform kind");
}

double invert_transform(const SupportTransform& t, double u) {
  switch (t.kind) {
    case SupportTransform::Kind::identity:
      return u;
    case SupportTransform::Kind::affine:
      return 0.5 * (t.a + t.b) + u * 0.5 * (t.b - t.a);
    case SupportTransform::Kind::positive_half_line:
      if (u > 1.0)
        throw DomainError("invert_transform: positive-half-line needs u <= 1");
      if (u == 1.0) return std::numeric_limits<double>::infinity();
      return (1.0 + u) / (1.0 - u);
    case SupportTransform::Kind::real_line:
      if (u < -1.0 || u > 1.0)
        throw DomainError("invert_transform: real-line needs u in [-1,1]");
      if (u == 1.0) return std::numeric_limits<double>::infinity();
      if (u == -1.0) return -std::numeric_limits<double>::infinity();
      return std::tan(kPi * u / 2.0);
  }
  throw DomainError("invert_transform: unknown transform kind");
}

ChebyshevGrid chebyshev_nodes(std::size_t m) {
  if (m < 1) throw InvalidOrder("chebyshev_nodes: m must be >= 1");
  ChebyshevGrid g;
  g.order = m;
  g.nodes.resize(m);
  for (std::size_t j = 0; j < m; ++j)
    g.nodes[j] = std::cos((2.0 * j + 1.0) * kPi / (2.0 * m));
  return g;
}

double chebyshev_T(std::size_t m, double x) {
  check_unit_interval(x, "chebyshev_T");
  x = std::clamp(x, -1.0, 1.0);
  if (m == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (std::size_t k = 1; k < m; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> lagrange_basis_eval(const ChebyshevGrid& grid, double x) {
  check_unit_interval(x, "lagrange_basis_eval");
  const std::size_t m = grid.order;
  std::vector<double> out(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (std::abs(x - grid.nodes[j]) < kNodeSnap) {
      out[j] = 1.0;
      return out;
    }
  }
  const auto w = barycentric_weights(m);
  double denom = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    out[j] = w[j] / (x - grid.nodes[j]);
    denom += out[j];
  }
  for (auto& v : out) v /= denom;
  return out;
}

double empirical_cdf(const std::vector<double>& samples, double y) {
  if (samples.empty()) throw EmptySample("empirical_cdf: empty sample");
  std::size_t count = 0;
  for (double s : samples) count += (s <= y) ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(samples.size());
}

double CdfEstimate::operator()(double x) const {
  const auto basis = lagrange_basis_eval(grid, x);
  double v = 0.0;
  for (std::size_t j = 0; j < grid.order; ++j) v += basis[j] * node_values[j];
  if (clip) v = std::clamp(v, 0.0, 1.0);
  return v;
}

double CdfEstimate::evaluate_original(double z) const {
  return (*this)(std::clamp(apply_transform(transform, z), -1.0, 1.0));
}

CdfEstimate CdfEstimate::from_node_values(std::vector<double> values,
                                          const SupportTransform& transform,
                                          bool clip) {
  CdfEstimate est;
  est.grid = chebyshev_nodes(values.size());
  est.node_values = std::move(values);
  est.transform = transform;
  est.clip = clip;
  return est;
}

CdfEstimate fit_lagrange_cdf(const std::vector<double>& effect_estimates,
                             std::size_t m, const SupportTransform& transform,
                             bool clip) {
  if (effect_estimates.empty())
    throw EmptySample("fit_lagrange_cdf: empty sample");
  if (m < 1) throw InvalidOrder("fit_lagrange_cdf: m must be >= 1");
  CdfEstimate est;
  est.grid = chebyshev_nodes(m);
  est.transform = transform;
  est.clip = clip;
  est.node_values.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double z = invert_transform(transform, est.grid.nodes[j]);
    est.node_values[j] = empirical_cdf(effect_estimates, z);
  }
  return est;
}

double KernelCdf::operator()(double x) const {
  double acc = 0.0;
  for (double u : sample) acc += normal_cdf((x - u) / bandwidth);
  return acc / static_cast<double>(sample.size());
}

KernelCdf fit_kernel_cdf(const std::vector<double>& transformed_estimates,
                         double bandwidth) {
  if (transformed_estimates.empty())
    throw EmptySample("fit_kernel_cdf: empty sample");
  if (!(bandwidth > 0.0))
    throw InvalidBandwidth("fit_kernel_cdf: bandwidth must be > 0");
  return KernelCdf{transformed_estimates, bandwidth};
}

std::size_t select_m_cv(const std::vector<double>& effect_estimates,
                        const std::vector<std::size_t>& m_grid,
                        std::size_t folds, std::uint64_t seed,
                        const SupportTransform& transform) {
  if (m_grid.empty())
    throw std::invalid_argument("select_m_cv: m_grid must be nonempty");
  if (folds < 2) throw InsufficientData("select_m_cv: need folds >= 2");
  const std::size_t n = effect_estimates.size();
  if (n < folds)
    throw InsufficientData("select_m_cv: need at least one sample per fold (" +
                           std::to_string(n) + " samples, " +
                           std::to_string(folds) + " folds)");

  // Seeded permutation split into K consecutive chunks; the first n % K
  // folds take the extra element.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  auto eng = make_engine(seed, StreamTag::cv_folds, 0);
  std::shuffle(perm.begin(), perm.end(), eng);

  constexpr std::size_t kGrid = 512;
  std::vector<double> xs(kGrid), zq(kGrid);
  for (std::size_t i = 0; i < kGrid; ++i) {
    xs[i] = -1.0 + 2.0 * static_cast<double>(i) / (kGrid - 1);
    zq[i] = invert_transform(transform, xs[i]);
  }

  std::vector<double> scores(m_grid.size(), 0.0);
  const std::size_t base = n / folds, extra = n % folds;
  std::size_t offset = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    std::vector<double> hold, train;
    hold.reserve(size);
    train.reserve(n - size);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = effect_estimates[perm[i]];
      if (i >= offset && i < offset + size)
        hold.push_back(v);
      else
        train.push_back(v);
    }
    offset += size;
    std::sort(hold.begin(), hold.end());
    std::sort(train.begin(), train.end());

    auto ecdf_sorted = [](const std::vector<double>& s, double y) {
      // +inf / -inf bounds from singular transform endpoints compare fine.
      const auto it = std::upper_bound(s.begin(), s.end(), y);
      return static_cast<double>(it - s.begin()) / static_cast<double>(s.size());
    };

    std::vector<double> ho(kGrid);
    for (std::size_t i = 0; i < kGrid; ++i) ho[i] = ecdf_sorted(hold, zq[i]);

    for (std::size_t mi = 0; mi < m_grid.size(); ++mi) {
      const std::size_t m = m_grid[mi];
      const auto grid = chebyshev_nodes(m);
      std::vector<double> nv(m);
      for (std::size_t j = 0; j < m; ++j)
        nv[j] = ecdf_sorted(train, invert_transform(transform, grid.nodes[j]));
      double acc = 0.0;
      for (std::size_t i = 0; i < kGrid; ++i) {
        const auto basis = lagrange_basis_eval(grid, xs[i]);
        double fit = 0.0;
        for (std::size_t j = 0; j < m; ++j) fit += basis[j] * nv[j];
        const double d = fit - ho[i];
        acc += d * d;
      }
      scores[mi] += acc / static_cast<double>(kGrid);
    }
  }

  std::size_t best = m_grid[0];
  double best_score = std::numeric_limits<double>::infinity();
  // Walk candidates in ascending m so ties resolve to the smaller order.
  std::vector<std::size_t> order(m_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return m_grid[a] < m_grid[b];
                   });
  for (std::size_t oi : order) {
    const double score = scores[oi] / static_cast<double>(folds);
    if (score < best_score - 1e-15) {
      best_score = score;
      best = m_grid[oi];
    }
  }
  return best;
}

double lebesgue_constant(std::size_t m) {
  if (m < 1) throw InvalidOrder("lebesgue_constant: m must be >= 1");
  const auto grid = chebyshev_nodes(m);
  constexpr std::size_t kGrid = 4096;
  double worst = 0.0;
  for (std::size_t i = 0; i < kGrid; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / (kGrid - 1);
    const auto basis = lagrange_basis_eval(grid, x);
    double s = 0.0;
    for (double b : basis) s += std::abs(b);
    worst = std::max(worst, s);
  }
  return worst;
}

}  // namespace mfbs
