#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mfbs/model.hpp"

// Per-subject quadratic statistics of the increment rows and their panel
// averages. These are the raw inputs to the closed-form moment estimators:
//   xi    = (1/n) sum_{k<n} dY_k^2
//   eta   = (1/n) sum_{k<n} dY_k dY_{k+1}
//   zeta  = (1/n) sum_{k<n} (dY_k + dY_{k+1})(dY_{k+2} + dY_{k+3})
//   theta = (1/(nh)) sum_{k<n} dY_k
// eta needs n+1 increments and zeta needs n+3, hence the panel's spare
// columns. All reductions use compensated summation so that n ~ 1e6 rows
// keep full double accuracy.

namespace mfbs {

struct InsufficientData : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

// Kahan–Neumaier compensated accumulator.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

struct MomentSummary {
  double xi_bar = 0.0;
  double eta_bar = 0.0;
  double zeta_bar = 0.0;
  double v_bar = 0.0;  // mean of theta_hat^2 across subjects
  // Row-major subjects x 4: (xi, eta, zeta, theta_hat^2).
  std::vector<double> per_subject;
  std::size_t subjects = 0;
  std::size_t n_used = 0;
  double h = 1.0;

  const double* subject_row(std::size_t i) const {
    return per_subject.data() + 4 * i;
  }
};

struct TheoreticalMoments {
  double xi_inf = 0.0;
  double eta_inf = 0.0;
  double zeta_inf = 0.0;
};

double subject_xi(const double* row, std::size_t available, std::size_t n,
                  double h);
double subject_eta(const double* row, std::size_t available, std::size_t n,
                   double h);
double subject_zeta(const double* row, std::size_t available, std::size_t n,
                    double h);

// Convenience overloads on whole vectors.
double subject_xi(const std::vector<double>& row, std::size_t n, double h);
double subject_eta(const std::vector<double>& row, std::size_t n, double h);
double subject_zeta(const std::vector<double>& row, std::size_t n, double h);

// Panel averages of the per-subject statistics over the first n increments.
// Per-subject work is independent (parallelized over subjects); the final
// averages are fixed-order compensated sums, so results are bit-stable
// across thread counts.
MomentSummary summarize(const Panel& panel, std::size_t n);

// Almost-sure limits of (xi_bar, eta_bar, zeta_bar) given E[theta^2]:
//   xi_inf   = E[theta^2] h^2 + sigma^2 h + gamma^2 h^{2H}
//   eta_inf  = E[theta^2] h^2 + gamma^2 h^{2H} (2^{2H-1} - 1)
//   zeta_inf = 4 E[theta^2] h^2 + gamma^2 h^{2H} 2^{2H} (2^{2H-1} - 1)
TheoreticalMoments theoretical_moments(const ModelParams& params,
                                       double second_moment_theta);

}  // namespace mfbs
