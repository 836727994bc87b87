#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

// Distribution-function estimation for the recovered random effects:
// Lagrange interpolation of the empirical CDF at Chebyshev-Gauss nodes
// (evaluated in the numerically stable barycentric form), a Gaussian-kernel
// CDF baseline, support transforms onto [-1,1], and K-fold cross-validation
// for the interpolation order m.

namespace mfbs {

struct InvalidOrder : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct EmptySample : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidBandwidth : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ChebyshevGrid {
  std::size_t order = 0;
  std::vector<double> nodes;  // cos((2j+1)pi/(2m)), j=0..m-1, descending
};

// Monotone maps from the effects' support onto [-1,1]:
//   affine(a,b):        u = (z - (a+b)/2) / ((b-a)/2)
//   positive_half_line: u = 2z/(1+z) - 1          (z > -1; domain proper is z >= 0)
//   real_line:          u = (2/pi) arctan(z)
//   identity:           u = z
// positive_half_line accepts z in (-1,0) as the monotone continuation so that
// slightly-out-of-support estimates do not abort a fit; z <= -1 is an error.
struct SupportTransform {
  enum class Kind { identity, affine, positive_half_line, real_line };
  Kind kind = Kind::identity;
  double a = -1.0;  // affine lower bound
  double b = 1.0;   // affine upper bound

  static SupportTransform Identity() { return {}; }
  static SupportTransform Affine(double a, double b);
  static SupportTransform PositiveHalfLine() {
    return {Kind::positive_half_line, 0.0, 0.0};
  }
  static SupportTransform RealLine() { return {Kind::real_line, 0.0, 0.0}; }
};

double apply_transform(const SupportTransform& t, double z);
// Total on [-1,1]; singular endpoints map to +/-infinity (so that counting
// comparisons against them behave as limits).
double invert_transform(const SupportTransform& t, double u);

ChebyshevGrid chebyshev_nodes(std::size_t m);

// T_m by the three-term recurrence (tests cross-check against cos(m acos x)).
double chebyshev_T(std::size_t m, double x);

// Basis values L_j(x) via the barycentric formula with the closed-form
// Chebyshev-Gauss weights w_j = (-1)^j sin((2j+1)pi/(2m)).
std::vector<double> lagrange_basis_eval(const ChebyshevGrid& grid, double x);

// (1/N) #{i : samples[i] <= y}; inclusive comparison.
double empirical_cdf(const std::vector<double>& samples, double y);

struct CdfEstimate {
  ChebyshevGrid grid;
  std::vector<double> node_values;  // empirical CDF at the nodes, in [0,1]
  SupportTransform transform;
  bool clip = false;  // optional clamp of evaluations to [0,1]; default off

  // Interpolant on [-1,1] (the transformed scale).
  double operator()(double x) const;
  // Convenience: evaluate at an original-scale point z.
  double evaluate_original(double z) const;

  static CdfEstimate from_node_values(std::vector<double> values,
                                      const SupportTransform& transform,
                                      bool clip = false);
};

// Interpolates the empirical CDF of the effect estimates: node_values[j] =
// (1/N) #{i : estimate_i <= invert_transform(x_j)}. Counting happens on the
// original scale, so estimates outside the transform's proper domain are
// still ranked correctly.
CdfEstimate fit_lagrange_cdf(const std::vector<double>& effect_estimates,
                             std::size_t m, const SupportTransform& transform,
                             bool clip = false);

// Gaussian-kernel CDF baseline on the transformed sample:
//   F(x) = (1/N) sum Phi((x - u_i)/bandwidth).
struct KernelCdf {
  std::vector<double> sample;  // already transformed
  double bandwidth = 0.0;
  double operator()(double x) const;
};
KernelCdf fit_kernel_cdf(const std::vector<double>& transformed_estimates,
                         double bandwidth);

// K-fold cross-validation for m: for each candidate, average over folds the
// mean squared distance on a fixed 512-point grid between the fold-trained
// interpolant and the held-out empirical CDF. Ties prefer the smaller m.
// Fold assignment is a seeded permutation split into K consecutive chunks.
std::size_t select_m_cv(const std::vector<double>& effect_estimates,
                        const std::vector<std::size_t>& m_grid,
                        std::size_t folds, std::uint64_t seed,
                        const SupportTransform& transform =
                            SupportTransform::Identity());

// max over a 4096-point uniform grid of sum_j |L_j(x)|.
double lebesgue_constant(std::size_t m);

}  // namespace mfbs
