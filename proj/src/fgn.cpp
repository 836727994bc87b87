#include "mfbs/fgn.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <random>

namespace mfbs {

double fgn_autocovariance(const FgnSpec& spec, std::size_t lag) {
  spec.validate();
  const double H2 = 2.0 * spec.hurst;
  const double k = static_cast<double>(lag);
  // Exact zero for Brownian increments: the closed form below returns an
  // O(eps) residue at H=1/2 which the estimators would happily divide by.
  if (spec.hurst == 0.5 && lag >= 1) return 0.0;
  const double core =
      0.5 * (std::pow(k + 1.0, H2) + std::pow(std::abs(k - 1.0), H2) -
             2.0 * std::pow(k, H2));
  return std::pow(spec.step, H2) * core;
}

double mixed_increment_autocovariance(double sigma_sq, double gamma_sq,
                                      const FgnSpec& spec, std::size_t lag) {
  if (sigma_sq < 0.0 || gamma_sq < 0.0)
    throw std::invalid_argument("mixed covariance: variances must be >= 0");
  const double brownian = (lag == 0) ? sigma_sq * spec.step : 0.0;
  return brownian + gamma_sq * fgn_autocovariance(spec, lag);
}

CovarianceToeplitz fgn_covariance(const FgnSpec& spec) {
  spec.validate();
  CovarianceToeplitz cov;
  cov.first_row.resize(spec.length);
  for (std::size_t k = 0; k < spec.length; ++k)
    cov.first_row[k] = fgn_autocovariance(spec, k);
  return cov;
}

LowerTriangularFactor cholesky_toeplitz(const CovarianceToeplitz& cov) {
  const std::size_t n = cov.first_row.size();
  if (n == 0) throw std::invalid_argument("cholesky_toeplitz: empty row");
  if (!(cov.first_row[0] > 0.0))
    throw NotPositiveDefinite("cholesky_toeplitz: first_row[0] must be > 0");

  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = cov.first_row[i - j];
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }

  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite(
        "cholesky_toeplitz: covariance is not positive definite");

  LowerTriangularFactor f;
  f.dim = n;
  f.elems.assign(n * n, 0.0);
  Eigen::MatrixXd L = llt.matrixL();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      f.elems[i * n + j] =
          L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return f;
}

namespace detail {

void fft_pow2(std::vector<double>& re, std::vector<double>& im, bool inverse) {
  const std::size_t n = re.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft_pow2: size must be a power of two");
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
    const double wr = std::cos(ang), wi = std::sin(ang);
    for (std::size_t i = 0; i < n; i += len) {
      double cr = 1.0, ci = 0.0;
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::size_t a = i + k, b = i + k + len / 2;
        const double tr = re[b] * cr - im[b] * ci;
        const double ti = re[b] * ci + im[b] * cr;
        re[b] = re[a] - tr;
        im[b] = im[a] - ti;
        re[a] += tr;
        im[a] += ti;
        const double ncr = cr * wr - ci * wi;
        ci = cr * wi + ci * wr;
        cr = ncr;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      re[i] *= inv;
      im[i] *= inv;
    }
  }
}

std::vector<double> circulant_eigenvalues(const std::vector<double>& row_half,
                                          std::size_t embed_size) {
  // first row of the circulant: c_j = rho(min(j, M-j)), needs rho up to M/2
  if (row_half.size() < embed_size / 2 + 1)
    throw std::invalid_argument("circulant_eigenvalues: need lags 0..M/2");
  std::vector<double> re(embed_size), im(embed_size, 0.0);
  for (std::size_t j = 0; j < embed_size; ++j)
    re[j] = row_half[std::min(j, embed_size - j)];
  fft_pow2(re, im, /*inverse=*/false);
  return re;  // symmetric input: spectrum is real
}

}  // namespace detail

FgnSampler::FgnSampler(const FgnSpec& spec, NoiseBackend backend) : spec_(spec) {
  spec_.validate();
  constexpr std::size_t kCholeskyMax = 4096;  // O(n^2) memory beyond this hurts
  active_ = backend;
  if (active_ == NoiseBackend::automatic)
    active_ = spec_.length <= kCholeskyMax ? NoiseBackend::cholesky
                                           : NoiseBackend::circulant;

  if (active_ == NoiseBackend::circulant) {
    std::size_t M = 1;
    while (M < 2 * spec_.length) M <<= 1;
    std::vector<double> lags(M / 2 + 1);
    for (std::size_t k = 0; k <= M / 2; ++k)
      lags[k] = fgn_autocovariance(spec_, k);
    std::vector<double> eig = detail::circulant_eigenvalues(lags, M);
    double min_e = eig[0], max_e = eig[0];
    for (double e : eig) {
      min_e = std::min(min_e, e);
      max_e = std::max(max_e, e);
    }
    if (min_e < -1e-10 * std::max(1.0, max_e)) {
      // Not expected for genuine fGn rows (verified over a wide (H,n) grid),
      // but the covariance could be degenerate at extreme parameters.
      fallback_ = true;
      active_ = NoiseBackend::cholesky;
    } else {
      embed_size_ = M;
      spectrum_scale_.resize(M);
      const double invM = 1.0 / static_cast<double>(M);
      for (std::size_t j = 0; j < M; ++j)
        spectrum_scale_[j] = std::sqrt(std::max(eig[j], 0.0) * invM);
    }
  }
  if (active_ == NoiseBackend::cholesky)
    factor_ = cholesky_toeplitz(fgn_covariance(spec_));
}

void FgnSampler::sample(std::mt19937_64& engine, double* out) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t n = spec_.length;
  if (active_ == NoiseBackend::cholesky) {
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = normal(engine);
    // lower-triangular matvec against the cached factor
    const double* L = factor_.elems.data();
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      const double* row = L + i * n;
      for (std::size_t j = 0; j <= i; ++j) acc += row[j] * z[j];
      out[i] = acc;
    }
    return;
  }
  // circulant embedding (Davies–Harte): one Hermitian-symmetric spectral draw
  const std::size_t M = embed_size_;
  std::vector<double> re(M, 0.0), im(M, 0.0);
  // Fixed consumption order: 2 variates per frequency 0..M/2 (the imaginary
  // parts at DC/Nyquist are discarded, keeping the draw count spec-only).
  for (std::size_t j = 0; j <= M / 2; ++j) {
    const double a = normal(engine);
    const double b = normal(engine);
    if (j == 0 || j == M / 2) {
      re[j] = spectrum_scale_[j] * a;
      im[j] = 0.0;
      (void)b;
    } else {
      const double s = spectrum_scale_[j] / std::sqrt(2.0);
      re[j] = s * a;
      im[j] = s * b;
      re[M - j] = re[j];
      im[M - j] = -im[j];
    }
  }
  detail::fft_pow2(re, im, /*inverse=*/false);
  for (std::size_t i = 0; i < n; ++i) out[i] = re[i];
}

std::vector<double> sample_fgn(const FgnSpec& spec, std::uint64_t seed,
                               NoiseBackend backend) {
  FgnSampler sampler(spec, backend);
  std::mt19937_64 engine(seed);
  return sampler.sample(engine);
}

}  // namespace mfbs
