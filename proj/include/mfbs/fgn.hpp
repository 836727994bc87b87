#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

// Exact synthesis of fractional Gaussian noise (fGn) — the stationary
// increment sequence of fractional Brownian motion — plus the covariance
// oracles the rest of the toolkit builds on.
//
// Two synthesis backends:
//  * dense Toeplitz Cholesky (exact, O(n^2) memory; default up to n = 4096),
//  * circulant embedding (exact in distribution, O(n log n); default beyond).
// Both must produce noise with the same covariance; tests hold them to the
// same statistical checks.

namespace mfbs {

struct FgnSpec {
  double hurst = 0.5;   // H in (0,1)
  double step = 1.0;    // sampling interval h > 0
  std::size_t length = 1;  // number of increments

  void validate() const {
    if (!(hurst > 0.0 && hurst < 1.0))
      throw std::invalid_argument("FgnSpec: hurst must lie in (0,1)");
    if (!(step > 0.0)) throw std::invalid_argument("FgnSpec: step must be > 0");
    if (length < 1) throw std::invalid_argument("FgnSpec: length must be >= 1");
  }
};

// First row of a symmetric positive (semi)definite Toeplitz covariance.
struct CovarianceToeplitz {
  std::vector<double> first_row;
};

// Lower-triangular Cholesky factor, dense row-major storage.
struct LowerTriangularFactor {
  std::size_t dim = 0;
  std::vector<double> elems;  // dim*dim, upper part zero

  double at(std::size_t i, std::size_t j) const { return elems[i * dim + j]; }
};

struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Autocovariance of fGn at integer lag k (variance units):
//   rho_H(k) = h^{2H} * ((|k+1|^{2H} + |k-1|^{2H} - 2|k|^{2H}) / 2.
// Carries the h^{2H} factor so rho_H(0) = Var(increment).
double fgn_autocovariance(const FgnSpec& spec, std::size_t lag);

// Autocovariance of the mixed increment sigma*dB + gamma*dB^H:
//   sigma_sq*h*[lag==0] + gamma_sq*rho_H(lag).
double mixed_increment_autocovariance(double sigma_sq, double gamma_sq,
                                      const FgnSpec& spec, std::size_t lag);

// Toeplitz covariance of `length` consecutive fGn increments.
CovarianceToeplitz fgn_covariance(const FgnSpec& spec);

// Dense Cholesky factorization; throws NotPositiveDefinite when the matrix
// is numerically not PD (invalid H/h combination or degenerate length).
LowerTriangularFactor cholesky_toeplitz(const CovarianceToeplitz& cov);

enum class NoiseBackend { automatic, cholesky, circulant };

// Reusable sampler: factors (or spectrally decomposes) the covariance once,
// then draws any number of independent vectors. Immutable after construction;
// safe to share across threads (sample() takes the caller's engine).
class FgnSampler {
 public:
  FgnSampler(const FgnSpec& spec, NoiseBackend backend = NoiseBackend::automatic);

  const FgnSpec& spec() const { return spec_; }
  // Backend actually in use (automatic resolves by length; circulant falls
  // back to cholesky when the embedding is not nonnegative).
  NoiseBackend active_backend() const { return active_; }
  bool fallback_occurred() const { return fallback_; }

  // Fills `out` (length spec().length) with one fGn draw. The number of
  // engine variates consumed is a fixed function of the spec, so derived
  // per-subject streams stay aligned.
  void sample(std::mt19937_64& engine, double* out) const;

  std::vector<double> sample(std::mt19937_64& engine) const {
    std::vector<double> v(spec_.length);
    sample(engine, v.data());
    return v;
  }

 private:
  FgnSpec spec_;
  NoiseBackend active_;
  bool fallback_ = false;
  // cholesky backend
  LowerTriangularFactor factor_;
  // circulant backend: sqrt(eigenvalue/M) scale per frequency
  std::size_t embed_size_ = 0;
  std::vector<double> spectrum_scale_;
};

// One-shot draw (constructs a sampler internally).
std::vector<double> sample_fgn(const FgnSpec& spec, std::uint64_t seed,
                               NoiseBackend backend = NoiseBackend::automatic);

namespace detail {
// Iterative radix-2 complex FFT, in place, size must be a power of two.
// Enough for the circulant embedding, which always uses power-of-two sizes.
void fft_pow2(std::vector<double>& re, std::vector<double>& im, bool inverse);

// Eigenvalues of the circulant embedding of a Toeplitz row extended by
// `autocov(lag)` up to lag M/2, M = first power of two >= 2*length.
// Exposed for tests (the fallback path is hard to reach with genuine fGn).
std::vector<double> circulant_eigenvalues(const std::vector<double>& row_half,
                                          std::size_t embed_size);
}  // namespace detail

}  // namespace mfbs
