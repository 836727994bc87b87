#include "doctest.h"
#include "mfbs/model.hpp"
#include "mfbs/moments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace mfbs;
namespace fs = std::filesystem;

namespace {

fs::path tmp_file(const char* name) {
  auto dir = fs::temp_directory_path() / "mfbs_model_tests";
  fs::create_directories(dir);
  return dir / name;
}

ModelParams params(double H = 0.7, double g2 = 0.25, double s2 = 0.04,
                   double h = 1.0) {
  ModelParams p;
  p.hurst = H;
  p.gamma_sq = g2;
  p.sigma_sq = s2;
  p.step = h;
  return p;
}

}  // namespace

TEST_CASE("distribution validation and means") {
  CHECK(EffectsDistribution::Beta(2, 2).mean() == doctest::Approx(0.5));
  CHECK(EffectsDistribution::Gamma(2, 1).mean() == doctest::Approx(2.0));
  CHECK(EffectsDistribution::Gaussian(0.5, 0.25).mean() == doctest::Approx(0.5));
  CHECK(EffectsDistribution::Mixture(0.5, -2, 1, 3, 0.5).mean() ==
        doctest::Approx(0.5));

  CHECK_THROWS_AS(EffectsDistribution::Beta(0, 2).validate(),
                  InvalidDistributionParams);
  CHECK_THROWS_AS(EffectsDistribution::Gamma(2, -1).validate(),
                  InvalidDistributionParams);
  CHECK_THROWS_AS(EffectsDistribution::Gaussian(0, -0.1).validate(),
                  InvalidDistributionParams);
  CHECK_THROWS_AS(EffectsDistribution::Mixture(1.5, 0, 1, 0, 1).validate(),
                  InvalidDistributionParams);
  EffectsDistribution malformed;
  malformed.params = {1.0};  // beta needs two parameters
  CHECK_THROWS_AS(malformed.validate(), InvalidDistributionParams);
}

TEST_CASE("sample_effects: support, mean, determinism") {
  const std::size_t N = 20000;
  auto beta = sample_effects(EffectsDistribution::Beta(2, 2), N, 7);
  REQUIRE(beta.size() == N);
  double mean = 0.0;
  for (double v : beta) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    mean += v;
  }
  mean /= double(N);
  // Beta(2,2): sd = sqrt(1/20); |mean - 1/2| <= 4 se
  CHECK(std::abs(mean - 0.5) <= 4.0 * std::sqrt(0.05 / double(N)));

  auto again = sample_effects(EffectsDistribution::Beta(2, 2), N, 7);
  CHECK(beta == again);

  auto gam = sample_effects(EffectsDistribution::Gamma(2, 1), 5000, 11);
  double gmean = 0.0;
  for (double v : gam) {
    CHECK(v > 0.0);
    gmean += v;
  }
  gmean /= 5000.0;
  // Gamma(2,1): var = 2
  CHECK(std::abs(gmean - 2.0) <= 4.0 * std::sqrt(2.0 / 5000.0));

  // drawing more keeps the shared prefix (order-invariance across panel sizes)
  auto first = sample_effects(EffectsDistribution::Mixture(0.5, -2, 1, 3, 0.5), 10, 3);
  auto longer = sample_effects(EffectsDistribution::Mixture(0.5, -2, 1, 3, 0.5), 50, 3);
  for (int i = 0; i < 10; ++i) CHECK(first[i] == longer[i]);
}

TEST_CASE("simulate_panel shape, determinism, and row prefix stability") {
  const auto p = params();
  const auto d = EffectsDistribution::Beta(2, 2);
  auto panel = simulate_panel(p, d, 8, 50, 1234);
  CHECK(panel.subjects == 8);
  CHECK(panel.columns == 50 + kExtraIncrements);
  CHECK(panel.increments.size() == 8 * (50 + kExtraIncrements));
  CHECK(panel.step == 1.0);
  REQUIRE(panel.true_effects.has_value());
  CHECK(panel.true_effects->size() == 8);
  REQUIRE(panel.params_truth.has_value());
  CHECK(panel.params_truth->hurst == 0.7);

  auto panel2 = simulate_panel(p, d, 8, 50, 1234);
  CHECK(panel.increments == panel2.increments);

  // a smaller panel with the same seed is a byte-exact prefix
  auto small = simulate_panel(p, d, 3, 50, 1234);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < panel.columns; ++k)
      CHECK(small.row(i)[k] == panel.row(i)[k]);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK((*small.true_effects)[i] == (*panel.true_effects)[i]);

  // prebuilt-sampler overload must agree byte-for-byte
  FgnSpec fspec{p.hurst, p.step, 50 + kExtraIncrements};
  FgnSampler sampler(fspec);
  auto viaSampler = simulate_panel(p, d, 8, 50, 1234, sampler);
  CHECK(viaSampler.increments == panel.increments);
}

TEST_CASE("row increment mean tracks theta_i h") {
  const auto p = params();
  const std::size_t n = 4000;
  auto panel = simulate_panel(p, EffectsDistribution::Beta(2, 2), 4, n, 99);
  const double var_inc = p.sigma_sq * p.step +
                         p.gamma_sq * std::pow(p.step, 2 * p.hurst);
  for (std::size_t i = 0; i < panel.subjects; ++i) {
    const double theta = (*panel.true_effects)[i] - p.sigma_sq / 2.0;
    double mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) mean += panel.row(i)[k];
    mean /= double(n);
    // fGn is positively correlated at H=0.7, widen the iid se accordingly:
    // Var(mean) = Var(M_T)/n^2 with Var(M_T) = sigma^2 T + gamma^2 T^{2H}
    const double T = double(n) * p.step;
    const double var_mean =
        (p.sigma_sq * T + p.gamma_sq * std::pow(T, 2 * p.hurst)) / (double(n) * double(n));
    CAPTURE(i);
    CHECK(std::abs(mean - theta * p.step) <= 4.0 * std::sqrt(var_mean));
    (void)var_inc;
  }
}

TEST_CASE("rows are uncorrelated across subjects") {
  const std::size_t n = 5000;
  auto panel = simulate_panel(params(), EffectsDistribution::Beta(2, 2), 2, n, 2024);
  double m0 = 0, m1 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    m0 += panel.row(0)[k];
    m1 += panel.row(1)[k];
  }
  m0 /= double(n);
  m1 /= double(n);
  double c01 = 0, v0 = 0, v1 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = panel.row(0)[k] - m0, b = panel.row(1)[k] - m1;
    c01 += a * b;
    v0 += a * a;
    v1 += b * b;
  }
  const double corr = c01 / std::sqrt(v0 * v1);
  CHECK(std::abs(corr) <= 4.0 / std::sqrt(double(n)));
}

TEST_CASE("panel_to_prices starts at 1 and exponentiates cumulative sums") {
  auto panel = simulate_panel(params(), EffectsDistribution::Beta(2, 2), 3, 20, 5);
  auto prices = panel_to_prices(panel);
  REQUIRE(prices.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(prices[i].size() == panel.columns + 1);
    CHECK(prices[i][0] == 1.0);
    double y = 0.0;
    for (std::size_t k = 0; k < panel.columns; ++k) {
      y += panel.row(i)[k];
      CHECK(prices[i][k + 1] == doctest::Approx(std::exp(y)).epsilon(1e-12));
      CHECK(prices[i][k + 1] > 0.0);
    }
  }
}

TEST_CASE("save/load round trip is lossless") {
  auto panel = simulate_panel(params(), EffectsDistribution::Beta(2, 2), 5, 30, 77);
  const auto path = tmp_file("roundtrip.csv");
  save_panel(panel, path.string());
  auto loaded = load_panel(path.string(), "csv", panel.step);
  CHECK(loaded.subjects == panel.subjects);
  CHECK(loaded.columns == panel.columns);
  CHECK(loaded.step == panel.step);
  CHECK(loaded.increments == panel.increments);  // 17 digits: exact

  auto p1 = panel_to_prices(panel);
  auto p2 = panel_to_prices(loaded);
  CHECK(p1 == p2);
  fs::remove(path);
}

TEST_CASE("load_panel rejects malformed input") {
  auto write = [&](const char* name, const std::string& body) {
    const auto path = tmp_file(name);
    std::ofstream out(path);
    out << body;
    out.close();
    return path;
  };

  // wrong header
  auto p1 = write("bad_header.csv", "a,b,c\n0,0,1.5\n");
  CHECK_THROWS_AS(load_panel(p1.string()), ParseError);

  // non-numeric field
  auto p2 = write("bad_value.csv", "subject,k,dy\n0,0,zap\n");
  CHECK_THROWS_AS(load_panel(p2.string()), ParseError);

  // missing field
  auto p3 = write("bad_fields.csv", "subject,k,dy\n0,0\n");
  CHECK_THROWS_AS(load_panel(p3.string()), ParseError);

  // subject ids must be contiguous from 0
  auto p4 = write("bad_subject.csv",
                  "subject,k,dy\n0,0,1\n0,1,1\n0,2,1\n0,3,1\n0,4,1\n"
                  "2,0,1\n2,1,1\n2,2,1\n2,3,1\n2,4,1\n");
  CHECK_THROWS_AS(load_panel(p4.string()), DimensionMismatch);

  // ragged rows
  auto p5 = write("bad_ragged.csv",
                  "subject,k,dy\n0,0,1\n0,1,1\n0,2,1\n0,3,1\n0,4,1\n"
                  "1,0,1\n1,1,1\n1,2,1\n1,3,1\n");
  CHECK_THROWS_AS(load_panel(p5.string()), DimensionMismatch);

  // too few increments to ever compute the statistics (needs > 4 columns)
  auto p6 = write("bad_short.csv",
                  "subject,k,dy\n0,0,1\n0,1,1\n0,2,1\n0,3,1\n");
  CHECK_THROWS_AS(load_panel(p6.string()), DimensionMismatch);

  // unknown format tag
  auto p7 = write("ok.csv", "subject,k,dy\n");
  CHECK_THROWS_AS(load_panel(p7.string(), "parquet"), std::invalid_argument);

  for (auto* f : {"bad_header.csv", "bad_value.csv", "bad_fields.csv",
                  "bad_subject.csv", "bad_ragged.csv", "bad_short.csv", "ok.csv"})
    fs::remove(tmp_file(f));
}

TEST_CASE("model parameter validation") {
  CHECK_NOTHROW(params().validate());
  CHECK_THROWS_AS(params(0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(params(0.7, -1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(params(0.7, 0, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(params(0.7, 0.25, 0.04, 0).validate(), std::invalid_argument);
  // one-sided degenerate cases are legitimate models
  CHECK_NOTHROW(params(0.7, 0, 0.04).validate());
  CHECK_NOTHROW(params(0.7, 0.25, 0).validate());
}
