#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dpaudit/density.hpp"
#include "dpaudit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace dpaudit;

namespace {

Sample continuous_sample(std::vector<double> values) {
  Sample s;
  s.space = Space::Continuous;
  s.reals = std::move(values);
  return s;
}

Sample discrete_sample(std::vector<std::int64_t> values) {
  Sample s;
  s.space = Space::Discrete;
  s.symbols = std::move(values);
  return s;
}

const Kernel kGauss{KernelShape::Gaussian, 1};

}  // namespace

TEST_CASE("tkde matches the hand-rolled sum on a tiny sample") {
  const std::vector<double> xs = {-0.4, 0.1, 0.1, 0.9};
  const double h = 0.3;
  const auto est = DensityEstimate::tkde(continuous_sample(xs), h, kGauss, 0.0);
  for (double t : {-1.0, -0.4, 0.0, 0.1, 0.35, 2.0}) {
    double acc = 0.0;
    for (double x : xs) {
      const double z = (t - x) / h;
      acc += std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    }
    acc /= static_cast<double>(xs.size()) * h;
    CHECK(est.at(t) == doctest::Approx(acc).epsilon(1e-12));
  }
}

TEST_CASE("tkde integrates to one") {
  Rng rng(11);
  std::vector<double> xs(5000);
  for (auto& x : xs) x = laplace_inverse_cdf(1.0, rng.uniform());
  const auto est = DensityEstimate::tkde(continuous_sample(xs), 0.1, kGauss, 0.0);
  double mass = 0.0;
  const double h = 0.01;
  for (double t = -15.0; t < 15.0; t += h) mass += est.raw_at(t + 0.5 * h) * h;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("floor semantics: estimate never drops below tau") {
  const auto est = DensityEstimate::tkde(continuous_sample({0.0}), 0.05, kGauss, 1e-3);
  CHECK(est.at(50.0) == 1e-3);        // far tail clamps to the floor
  CHECK(est.raw_at(50.0) < 1e-3);     // but the raw value is tiny
  CHECK(est.at(0.0) > 1e-3);          // near the atom the kernel dominates
  CHECK(est.at(0.0) == est.raw_at(0.0));
}

TEST_CASE("tkde is invariant under sample permutation") {
  Rng rng(5);
  std::vector<double> xs(2000);
  for (auto& x : xs) x = laplace_inverse_cdf(0.7, rng.uniform());
  auto shuffled = xs;
  std::mt19937_64 gen(3);
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  const auto a = DensityEstimate::tkde(continuous_sample(xs), 0.08, kGauss, 0.0);
  const auto b = DensityEstimate::tkde(continuous_sample(shuffled), 0.08, kGauss, 0.0);
  for (double t : {-2.0, -0.5, 0.0, 0.3, 1.9}) {
    CHECK(a.at(t) == b.at(t));  // bitwise: both sum in sorted order
  }
}

TEST_CASE("parallel profile equals the serial reference bitwise") {
  Rng rng(21);
  std::vector<double> xs(20000);
  for (auto& x : xs) x = laplace_inverse_cdf(1.0, rng.uniform());
  const auto est = DensityEstimate::tkde(continuous_sample(xs), 0.05, kGauss, 1e-3);
  std::vector<double> grid(501);
  for (std::size_t j = 0; j < grid.size(); ++j)
    grid[j] = -1.0 + 2.0 * static_cast<double>(j) / 500.0;
  const auto par = est.profile(grid);
  const auto ser = est.profile_serial(grid);
  REQUIRE(par.size() == ser.size());
  for (std::size_t j = 0; j < par.size(); ++j) {
    // The windowed parallel path drops kernel terms below ~5e-32; on a
    // dense interior sample both paths agree to full precision.
    CHECK(par[j] == doctest::Approx(ser[j]).epsilon(1e-13));
  }
}

TEST_CASE("tkde recovers a laplace density on a large sample") {
  Rng rng(33);
  const double scale = 1.0;
  std::vector<double> xs(200000);
  for (auto& x : xs) x = laplace_inverse_cdf(scale, rng.uniform());
  Sample s = continuous_sample(xs);
  const double h = default_bandwidth(s, BandwidthMode::Estimation);
  const auto est = DensityEstimate::tkde(s, h, kGauss, 0.0);
  for (double t : {-1.0, -0.3, 0.5, 1.5}) {
    const double truth = 0.5 / scale * std::exp(-std::fabs(t) / scale);
    CHECK(est.at(t) == doctest::Approx(truth).epsilon(0.05));
  }
}

TEST_CASE("tdde equals relative frequencies") {
  const auto est = DensityEstimate::tdde(discrete_sample({1, 1, 2, 3, 3, 3, 3, 5}), 0.0);
  CHECK(est.at(std::int64_t{1}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(est.at(std::int64_t{2}) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(est.at(std::int64_t{3}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(est.at(std::int64_t{4}) == 0.0);
  CHECK(est.raw_at(std::int64_t{4}) == 0.0);
}

TEST_CASE("tdde floor clamps unseen symbols") {
  const auto est = DensityEstimate::tdde(discrete_sample({0, 0, 1}), 1e-4);
  CHECK(est.at(std::int64_t{7}) == 1e-4);
  CHECK(est.raw_at(std::int64_t{7}) == 0.0);
  // probabilities over the observed alphabet sum to one before flooring
  CHECK(est.raw_at(std::int64_t{0}) + est.raw_at(std::int64_t{1}) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bandwidth schedule") {
  Sample s = continuous_sample(std::vector<double>(10000, 0.0));
  for (std::size_t i = 0; i < s.reals.size(); ++i)
    s.reals[i] = static_cast<double>(i) / 10000.0;  // sd ~ 0.2887
  const double sd = sample_std(s.reals);
  const double n = 10000.0;
  CHECK(default_bandwidth(s, BandwidthMode::Estimation) ==
        doctest::Approx(1.06 * sd * std::pow(n, -1.0 / 3.0)).epsilon(1e-12));
  CHECK(default_bandwidth(s, BandwidthMode::Inference, 1.0, 0.0, 0.02) ==
        doctest::Approx(1.06 * sd * std::pow(n, -(1.0 / 3.0 + 0.02))).epsilon(1e-12));
  // inference bandwidth undersmooths
  CHECK(default_bandwidth(s, BandwidthMode::Inference, 1.0, 0.0, 0.02) <
        default_bandwidth(s, BandwidthMode::Estimation));
  // gamma below the nu bound is rejected
  CHECK_THROWS_AS((void)default_bandwidth(s, BandwidthMode::Inference, 1.0, 0.5, 0.02),
                  std::invalid_argument);
}

TEST_CASE("floor schedule defaults") {
  CHECK(default_floor(20000, Space::Continuous, BandwidthMode::Estimation) == 1e-3);
  CHECK(default_floor(99999, Space::Discrete, BandwidthMode::Estimation) == 1e-3);
  CHECK(default_floor(100000, Space::Discrete, BandwidthMode::Estimation) == 1e-4);
  CHECK(default_floor(500000, Space::Continuous, BandwidthMode::Inference) == 0.0);
  // scheduled variant: anchored at n=2e4, decreasing in n
  const double f1 = default_floor(20000, Space::Continuous, BandwidthMode::Estimation, true);
  const double f2 = default_floor(200000, Space::Continuous, BandwidthMode::Estimation, true);
  CHECK(f1 == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(f2 < f1);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS((void)DensityEstimate::tkde(continuous_sample({}), 0.1, kGauss, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)DensityEstimate::tkde(continuous_sample({1.0}), 0.0, kGauss, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)DensityEstimate::tkde(continuous_sample({1.0}), 0.1, kGauss, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)DensityEstimate::tdde(discrete_sample({}), 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)DensityEstimate::tdde(continuous_sample({1.0}), 0.0),
                  std::invalid_argument);
  const auto cont = DensityEstimate::tkde(continuous_sample({1.0}), 0.1, kGauss, 0.0);
  CHECK_THROWS_AS((void)cont.at(std::int64_t{1}), std::invalid_argument);
  const auto disc = DensityEstimate::tdde(discrete_sample({1}), 0.0);
  CHECK_THROWS_AS((void)disc.at(0.5), std::invalid_argument);
}
