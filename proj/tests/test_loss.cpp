#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dpaudit/loss.hpp"

#include <cmath>
#include <sstream>
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

AdjacentPair stat_pair(double a, double b) {
  AdjacentPair p;
  p.id = "pair";
  p.x.stat = {a};
  p.x_prime.stat = {b};
  return p;
}

const Kernel kGauss{KernelShape::Gaussian, 1};

}  // namespace

TEST_CASE("grid construction") {
  const auto g = EvalGrid::continuous(-1.0, 1.0, 2001);
  const auto pts = g.continuous_points();
  REQUIRE(pts.size() == 2001);
  CHECK(pts.front() == -1.0);
  CHECK(pts.back() == 1.0);
  CHECK(pts[1000] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)EvalGrid::continuous(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)EvalGrid::discrete({}), std::invalid_argument);
}

TEST_CASE("loss is symmetric in the two densities") {
  const auto fx = DensityEstimate::tdde(discrete_sample({0, 0, 0, 1}), 1e-3);
  const auto fxp = DensityEstimate::tdde(discrete_sample({0, 1, 1, 1}), 1e-3);
  for (std::int64_t s : {0, 1, 2}) {
    CHECK(empirical_loss_at(fx, fxp, s) == empirical_loss_at(fxp, fx, s));
  }
  // known values: |ln(3/4) - ln(1/4)| = ln 3
  CHECK(empirical_loss_at(fx, fxp, std::int64_t{0}) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
  // unseen symbol floors on both sides: loss 0
  CHECK(empirical_loss_at(fx, fxp, std::int64_t{2}) == 0.0);
}

TEST_CASE("zero-density conventions") {
  const auto fx = DensityEstimate::tdde(discrete_sample({0, 1}), 0.0);
  const auto fxp = DensityEstimate::tdde(discrete_sample({0, 0}), 0.0);
  // one-sided zero -> infinite loss
  CHECK(std::isinf(empirical_loss_at(fx, fxp, std::int64_t{1})));
  // both zero -> 0 by convention
  CHECK(empirical_loss_at(fx, fxp, std::int64_t{5}) == 0.0);
}

TEST_CASE("profile argmax ties break toward the smallest grid point") {
  // identical flat losses: argmax must be index 0
  const auto fx = DensityEstimate::tdde(discrete_sample({0, 1}), 0.0);
  const auto fxp = DensityEstimate::tdde(discrete_sample({1, 0}), 0.0);
  const auto profile = loss_profile(fx, fxp, EvalGrid::discrete({0, 1}));
  CHECK(profile.argmax_index == 0);
  CHECK(profile.t_hat == 0.0);
  CHECK(profile.t_hat_symbol() == 0);
}

TEST_CASE("profile matches the analytic laplace loss") {
  // large samples from two shifted laplace distributions
  Rng rng(1);
  const double lambda = 1.5;
  std::vector<double> xs(200000), ys(200000);
  for (auto& v : xs) v = laplace_inverse_cdf(1.0 / lambda, rng.uniform());
  for (auto& v : ys) v = 1.0 + laplace_inverse_cdf(1.0 / lambda, rng.uniform());
  Sample sx = continuous_sample(xs), sy = continuous_sample(ys);
  const double hx = default_bandwidth(sx, BandwidthMode::Estimation);
  const double hy = default_bandwidth(sy, BandwidthMode::Estimation);
  const auto fx = DensityEstimate::tkde(sx, hx, kGauss, 1e-4);
  const auto fxp = DensityEstimate::tkde(sy, hy, kGauss, 1e-4);
  const auto profile = loss_profile(fx, fxp, EvalGrid::continuous(-1.0, 1.0, 401));
  // analytic loss lambda * ||t-1| - |t|| maximizes at 1.5 on t <= 0
  CHECK(profile.epsilon_hat == doctest::Approx(1.5).epsilon(0.06));
  CHECK(profile.t_hat <= 0.1);
  // pointwise agreement in the well-estimated interior
  const auto pts = profile.grid.continuous_points();
  for (std::size_t j = 0; j < pts.size(); j += 40) {
    const double truth = lambda * std::fabs(std::fabs(pts[j] - 1.0) - std::fabs(pts[j]));
    CHECK(profile.values[j] == doctest::Approx(truth).epsilon(0.15).scale(1.0));
  }
}

TEST_CASE("csv emission is stable") {
  const auto fx = DensityEstimate::tdde(discrete_sample({0, 0, 1}), 0.0);
  const auto fxp = DensityEstimate::tdde(discrete_sample({0, 1, 1}), 0.0);
  const auto profile = loss_profile(fx, fxp, EvalGrid::discrete({0, 1}));
  std::ostringstream a, b;
  profile.write_csv(a);
  profile.write_csv(b);
  CHECK(a.str() == b.str());
  CHECK(a.str().substr(0, 7) == "t,loss\n");
  CHECK(a.str().find("0.69314718055994") != std::string::npos);  // ln 2
}

TEST_CASE("dpl is deterministic in the seed and matches laplace truth") {
  const Mechanism mech = make_mechanism(MechKind::Laplace, 1.5);
  const auto pair = stat_pair(0.0, 1.0);
  const auto grid = EvalGrid::continuous(-1.0, 1.0, 2001);
  Rng r1(77), r2(77), r3(78);
  const auto a = dpl(mech, pair, 20000, grid, r1);
  const auto b = dpl(mech, pair, 20000, grid, r2);
  const auto c = dpl(mech, pair, 20000, grid, r3);
  CHECK(a.epsilon_hat == b.epsilon_hat);
  CHECK(a.t_hat == b.t_hat);
  CHECK(a.epsilon_hat != c.epsilon_hat);  // different seed, different draw
  CHECK(a.epsilon_hat == doctest::Approx(1.5).epsilon(0.1));
}

TEST_CASE("dpl on a discrete mechanism") {
  const Mechanism mech = make_mechanism(MechKind::RandomizedResponse, 1.2);
  AdjacentPair pair;
  pair.x.query = {0};
  pair.x_prime.query = {1};
  Rng rng(5);
  const auto r = dpl(mech, pair, 100000, EvalGrid::discrete({0, 1}), rng);
  CHECK(r.epsilon_hat == doctest::Approx(1.2).epsilon(0.05));
}

TEST_CASE("dpl validation") {
  const Mechanism mech = make_mechanism(MechKind::Laplace, 1.5);
  const auto pair = stat_pair(0.0, 1.0);
  Rng rng(1);
  CHECK_THROWS_AS((void)dpl(mech, pair, 10, EvalGrid::continuous(-1.0, 1.0), rng),
                  std::invalid_argument);
}
