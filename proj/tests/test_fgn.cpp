#include "doctest.h"
#include "mfbs/fgn.hpp"
#include "mfbs/seeding.hpp"

#include <cmath>
#include <vector>

using namespace mfbs;

namespace {
FgnSpec spec(double H, double h, std::size_t n) { return FgnSpec{H, h, n}; }
}  // namespace

TEST_CASE("autocovariance closed form") {
  // frozen reference values (30-digit arithmetic), H = 0.7, h = 1
  CHECK(fgn_autocovariance(spec(0.7, 1.0, 8), 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fgn_autocovariance(spec(0.7, 1.0, 8), 1) ==
        doctest::Approx(0.31950791077289426).epsilon(1e-15));
  CHECK(fgn_autocovariance(spec(0.7, 1.0, 8), 2) ==
        doctest::Approx(0.18875253932725099).epsilon(1e-15));
  CHECK(fgn_autocovariance(spec(0.7, 1.0, 8), 3) ==
        doctest::Approx(0.14617344221131179).epsilon(1e-15));

  // H = 1/2 is white noise: every nonzero lag vanishes exactly
  for (std::size_t k = 1; k < 20; ++k)
    CHECK(fgn_autocovariance(spec(0.5, 1.0, 32), k) == 0.0);

  // step scaling: rho(h) = h^{2H} rho(1)
  for (std::size_t k = 0; k < 6; ++k)
    CHECK(fgn_autocovariance(spec(0.7, 0.25, 8), k) ==
          doctest::Approx(std::pow(0.25, 1.4) *
                          fgn_autocovariance(spec(0.7, 1.0, 8), k))
              .epsilon(1e-14));

  // long-lag decay rho(k) ~ h^{2H} H(2H-1) k^{2H-2}
  const double lag = 1e4;
  const double scaled = fgn_autocovariance(spec(0.7, 1.0, 8), 10000) *
                        std::pow(lag, 2.0 - 1.4);
  CHECK(scaled == doctest::Approx(0.7 * 0.4).epsilon(0.01));
}

TEST_CASE("mixed increment autocovariance") {
  const auto s = spec(0.7, 0.5, 8);
  const double g2 = 0.25, s2 = 0.04;
  CHECK(mixed_increment_autocovariance(s2, g2, s, 0) ==
        doctest::Approx(s2 * 0.5 + g2 * std::pow(0.5, 1.4)).epsilon(1e-15));
  for (std::size_t k = 1; k < 5; ++k)
    CHECK(mixed_increment_autocovariance(s2, g2, s, k) ==
          doctest::Approx(g2 * fgn_autocovariance(s, k)).epsilon(1e-15));
}

TEST_CASE("cholesky of the 2x2 covariance matches hand values") {
  auto L = cholesky_toeplitz(fgn_covariance(spec(0.7, 1.0, 2)));
  REQUIRE(L.dim == 2);
  CHECK(L.at(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(L.at(1, 0) == doctest::Approx(0.31950791077289426).epsilon(1e-15));
  CHECK(L.at(1, 1) == doctest::Approx(0.94758360842383731).epsilon(1e-14));
  CHECK(L.at(0, 1) == 0.0);
}

TEST_CASE("cholesky reconstructs the covariance to 1e-10 relative") {
  for (double H : {0.05, 0.3, 0.5, 0.7, 0.95}) {
    for (double h : {0.01, 0.1, 1.0}) {
      const std::size_t n = 64;
      auto cov = fgn_covariance(spec(H, h, n));
      auto L = cholesky_toeplitz(cov);
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          double dot = 0.0;
          for (std::size_t k = 0; k <= j; ++k) dot += L.at(i, k) * L.at(j, k);
          const std::size_t lag = i - j;
          const double want = cov.first_row[lag];
          worst = std::max(worst,
                           std::abs(dot - want) / std::max(1e-300, std::abs(cov.first_row[0])));
        }
      }
      CAPTURE(H);
      CAPTURE(h);
      CHECK(worst <= 1e-10);
    }
  }
}

TEST_CASE("cholesky rejects a non positive definite row") {
  CovarianceToeplitz bad;
  bad.first_row = {1.0, 2.0, 0.0};  // |corr| > 1 at lag 1
  CHECK_THROWS_AS(cholesky_toeplitz(bad), NotPositiveDefinite);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(FgnSpec({0.0, 1.0, 4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(FgnSpec({1.0, 1.0, 4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(FgnSpec({0.5, 0.0, 4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(FgnSpec({0.5, 1.0, 0}).validate(), std::invalid_argument);
  CHECK_NOTHROW(FgnSpec({0.5, 1.0, 4}).validate());
}

TEST_CASE("sampler determinism and backend resolution") {
  const auto s = spec(0.7, 1.0, 128);
  FgnSampler autod(s), chol(s, NoiseBackend::cholesky), circ(s, NoiseBackend::circulant);
  CHECK(autod.active_backend() == NoiseBackend::cholesky);  // small length
  CHECK(chol.active_backend() == NoiseBackend::cholesky);
  CHECK(circ.active_backend() == NoiseBackend::circulant);
  CHECK_FALSE(circ.fallback_occurred());

  auto e1 = make_engine(5, StreamTag::fgn, 0);
  auto e2 = make_engine(5, StreamTag::fgn, 0);
  auto a = autod.sample(e1);
  auto b = chol.sample(e2);
  REQUIRE(a.size() == 128);
  CHECK(a == b);  // automatic == cholesky byte-for-byte here

  FgnSampler big(spec(0.7, 1.0, 5000));
  CHECK(big.active_backend() == NoiseBackend::circulant);
}

TEST_CASE("one-shot sample variance within 3 se of h^{2H}, length 1e5") {
  const double H = 0.7, h = 1.0;
  const std::size_t n = 100000;
  auto x = sample_fgn(spec(H, h, n), 20240513);
  REQUIRE(x.size() == n);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);

  // se of the sample variance for correlated Gaussian data:
  // Var(s^2) ~ (2/n) sum_k rho(k)^2 over all lags
  double sumsq = 0.0;
  for (std::size_t k = 1; k <= 2000; ++k) {
    const double r = fgn_autocovariance(spec(H, h, 4), k);
    sumsq += r * r;
  }
  const double se = std::sqrt(2.0 / n * (1.0 + 2.0 * sumsq));
  CHECK(std::abs(var - std::pow(h, 2 * H)) <= 3.0 * se);
}

TEST_CASE("both backends reproduce the covariance statistically") {
  const auto s = spec(0.8, 1.0, 256);
  for (auto backend : {NoiseBackend::cholesky, NoiseBackend::circulant}) {
    FgnSampler sampler(s, backend);
    auto eng = make_engine(99, StreamTag::fgn, 1);
    const int reps = 3000;
    double var = 0.0, lag1 = 0.0, lag2 = 0.0;
    std::vector<double> buf(s.length);
    for (int r = 0; r < reps; ++r) {
      sampler.sample(eng, buf.data());
      for (std::size_t k = 0; k < s.length; ++k) var += buf[k] * buf[k];
      for (std::size_t k = 0; k + 1 < s.length; ++k) lag1 += buf[k] * buf[k + 1];
      for (std::size_t k = 0; k + 2 < s.length; ++k) lag2 += buf[k] * buf[k + 2];
    }
    var /= double(reps) * double(s.length);
    lag1 /= double(reps) * double(s.length - 1);
    lag2 /= double(reps) * double(s.length - 2);
    // each average pools reps*length terms; se ~ sqrt(2/(reps*len)) is ~0.2%,
    // but neighbors correlate, so test at a conservative 1% band
    CAPTURE(static_cast<int>(backend));
    CHECK(var == doctest::Approx(fgn_autocovariance(s, 0)).epsilon(0.01));
    CHECK(std::abs(lag1 - fgn_autocovariance(s, 1)) < 0.01);
    CHECK(std::abs(lag2 - fgn_autocovariance(s, 2)) < 0.01);
  }
}

TEST_CASE("circulant eigenvalue probe: fGn embeds, crafted row does not") {
  // genuine fGn rows give nonnegative spectra
  for (double H : {0.1, 0.5, 0.9}) {
    const std::size_t n = 300, M = 1024;
    std::vector<double> half(M / 2 + 1);
    for (std::size_t k = 0; k <= M / 2; ++k)
      half[k] = fgn_autocovariance(spec(H, 1.0, n), k);
    auto eig = detail::circulant_eigenvalues(half, M);
    double mn = eig[0];
    for (double e : eig) mn = std::min(mn, e);
    CAPTURE(H);
    CHECK(mn >= -1e-10 * 1.0);
  }
  // a row that is not embeddable: c = [1, .9, 0, .9] has eigenvalue -0.8
  auto eig = detail::circulant_eigenvalues({1.0, 0.9, 0.0}, 4);
  double mn = eig[0];
  for (double e : eig) mn = std::min(mn, e);
  CHECK(mn < -0.5);
}

TEST_CASE("fft roundtrip on a power-of-two block") {
  std::vector<double> re{1, 2, 3, 4, 0, -1, 0.5, 2.5}, im(8, 0.0);
  auto re0 = re;
  detail::fft_pow2(re, im, false);
  detail::fft_pow2(re, im, true);
  for (int i = 0; i < 8; ++i) {
    CHECK(re[i] == doctest::Approx(re0[i]).epsilon(1e-14));
    CHECK(std::abs(im[i]) < 1e-14);
  }
}
