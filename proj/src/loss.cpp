#include "dpaudit/loss.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace dpaudit {

namespace {

double log_ratio_loss(double fx, double fxp) {
  if (fx <= 0.0 && fxp <= 0.0) return 0.0;  // inf - inf := 0
  if (fx <= 0.0 || fxp <= 0.0) return std::numeric_limits<double>::infinity();
  return std::fabs(std::log(fx) - std::log(fxp));
}

}  // namespace

EvalGrid EvalGrid::continuous(double lo, double hi, std::size_t points) {
  if (!(lo < hi)) throw std::invalid_argument("EvalGrid: need lo < hi");
  if (points < 2) throw std::invalid_argument("EvalGrid: need at least 2 points");
  EvalGrid g;
  g.space = Space::Continuous;
  g.lo = lo;
  g.hi = hi;
  g.points = points;
  return g;
}

EvalGrid EvalGrid::discrete(std::vector<std::int64_t> symbols) {
  if (symbols.empty()) throw std::invalid_argument("EvalGrid: empty symbol list");
  EvalGrid g;
  g.space = Space::Discrete;
  g.symbols = std::move(symbols);
  return g;
}

std::vector<double> EvalGrid::continuous_points() const {
  std::vector<double> pts(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t j = 0; j < points; ++j) pts[j] = lo + step * static_cast<double>(j);
  pts.back() = hi;
  return pts;
}

double empirical_loss_at(const DensityEstimate& fx, const DensityEstimate& fxp, double t) {
  return log_ratio_loss(fx.at(t), fxp.at(t));
}

double empirical_loss_at(const DensityEstimate& fx, const DensityEstimate& fxp,
                         std::int64_t symbol) {
  return log_ratio_loss(fx.at(symbol), fxp.at(symbol));
}

LossProfile loss_profile(const DensityEstimate& fx, const DensityEstimate& fxp,
                         const EvalGrid& grid) {
  LossProfile p;
  p.grid = grid;
  if (grid.space == Space::Continuous) {
    if (fx.space() != Space::Continuous || fxp.space() != Space::Continuous)
      throw std::invalid_argument("loss_profile: grid/density space mismatch");
    const auto pts = grid.continuous_points();
    const auto vx = fx.profile(pts);
    const auto vxp = fxp.profile(pts);
    p.values.resize(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j)
      p.values[j] = log_ratio_loss(vx[j], vxp[j]);
    p.argmax_index = 0;
    for (std::size_t j = 1; j < p.values.size(); ++j)
      if (p.values[j] > p.values[p.argmax_index]) p.argmax_index = j;
    p.t_hat = pts[p.argmax_index];
  } else {
    if (fx.space() != Space::Discrete || fxp.space() != Space::Discrete)
      throw std::invalid_argument("loss_profile: grid/density space mismatch");
    p.values.resize(grid.symbols.size());
    for (std::size_t j = 0; j < grid.symbols.size(); ++j)
      p.values[j] = empirical_loss_at(fx, fxp, grid.symbols[j]);
    p.argmax_index = 0;
    for (std::size_t j = 1; j < p.values.size(); ++j)
      if (p.values[j] > p.values[p.argmax_index]) p.argmax_index = j;
    p.t_hat = static_cast<double>(grid.symbols[p.argmax_index]);
  }
  p.epsilon_hat = p.values[p.argmax_index];
  return p;
}

void LossProfile::write_csv(std::ostream& os) const {
  os << "t,loss\n";
  std::vector<double> pts;
  if (grid.space == Space::Continuous) {
    pts = grid.continuous_points();
  } else {
    pts.reserve(grid.symbols.size());
    for (std::int64_t s : grid.symbols) pts.push_back(static_cast<double>(s));
  }
  char buf[64];
  for (std::size_t j = 0; j < values.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", pts[j], values[j]);
    os << buf;
  }
}

DplResult dpl(const Mechanism& mech, const AdjacentPair& pair, std::size_t n,
              const EvalGrid& grid, Rng& rng, const DplOptions& opts) {
  if (n < 100) throw std::invalid_argument("dpl: n must be at least 100");
  Rng rng_x = rng.substream("dpl-x", {});
  Rng rng_y = rng.substream("dpl-y", {});
  const Sample sx = mech.draw(pair.x, n, rng_x);
  const Sample sy = mech.draw(pair.x_prime, n, rng_y);

  const double floor = opts.floor_override >= 0.0
                           ? opts.floor_override
                           : default_floor(n, mech.output_space(),
                                           BandwidthMode::Estimation, opts.scheduled_floor);
  DplResult r;
  if (mech.output_space() == Space::Continuous) {
    const Kernel kernel{KernelShape::Gaussian, 1};
    const double hx = default_bandwidth(sx, BandwidthMode::Estimation, opts.beta, 0.0,
                                        0.02, opts.bandwidth_scale);
    const double hy = default_bandwidth(sy, BandwidthMode::Estimation, opts.beta, 0.0,
                                        0.02, opts.bandwidth_scale);
    const auto fx = DensityEstimate::tkde(sx, hx, kernel, floor);
    const auto fxp = DensityEstimate::tkde(sy, hy, kernel, floor);
    r.profile = loss_profile(fx, fxp, grid);
  } else {
    const auto fx = DensityEstimate::tdde(sx, floor);
    const auto fxp = DensityEstimate::tdde(sy, floor);
    r.profile = loss_profile(fx, fxp, grid);
  }
  r.t_hat = r.profile.t_hat;
  r.epsilon_hat = r.profile.epsilon_hat;
  return r;
}

}  // namespace dpaudit
