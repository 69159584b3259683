#include "dpaudit/mpl.hpp"

#include "dpaudit/normal.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dpaudit {

double sigma_hat(double fx, double fxp, Space space, const Kernel& kernel) {
  if (!(fx > 0.0) || !(fxp > 0.0))
    throw std::invalid_argument("sigma_hat: density values must be positive");
  if (space == Space::Discrete) {
    if (fx > 1.0 || fxp > 1.0)
      throw std::invalid_argument("sigma_hat: discrete density values exceed 1");
    return 1.0 / fx + 1.0 / fxp - 2.0;
  }
  return kernel_l2_norm(kernel) * (1.0 / fx + 1.0 / fxp);
}

double c_norm(std::size_t n, double h, int dim, Space space) {
  if (n < 1) throw std::invalid_argument("c_norm: n must be positive");
  if (space == Space::Discrete) return std::sqrt(static_cast<double>(n));
  if (!(h > 0.0)) throw std::invalid_argument("c_norm: continuous case needs h > 0");
  return std::sqrt(static_cast<double>(n) * std::pow(h, dim));
}

double pointwise_ci(double fx, double fxp, double loss_at_t, std::size_t n,
                    double alpha, Space space, const Kernel& kernel, double h) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("pointwise_ci: alpha must lie in (0,1)");
  const double s2 = sigma_hat(fx, fxp, space, kernel);
  const double cn = c_norm(n, h, kernel.dim, space);
  return loss_at_t + std_normal_quantile(alpha) * std::sqrt(s2) / cn;
}

AuditReport mpl(const Mechanism& mech, const std::vector<AdjacentPair>& pairs,
                std::size_t n, std::size_t N, const EvalGrid& grid, double alpha,
                Rng& rng, const MplOptions& opts) {
  if (pairs.empty()) throw std::invalid_argument("mpl: need at least one pair");
  if (N <= n) throw std::invalid_argument("mpl: N must exceed n");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("mpl: alpha must lie in (0,1)");
  const auto t0 = std::chrono::steady_clock::now();
  const Space space = mech.output_space();

  const double nu = std::log(static_cast<double>(N) / static_cast<double>(n)) /
                    std::log(static_cast<double>(n));
  if (space == Space::Continuous && !(opts.gamma > nu / (6.0 * (1.0 + nu))))
    throw std::invalid_argument("mpl: gamma too small for the configured n, N");

  AuditReport report;
  report.alpha = alpha;
  report.mechanism = mech.name();

  // Stage 1: select the worst pair. Substreams are keyed by pair index, so
  // the pair loop can fan out without perturbing results.
  DplOptions dpl_opts;
  dpl_opts.beta = opts.beta;
  dpl_opts.bandwidth_scale = opts.bandwidth_scale;
  dpl_opts.scheduled_floor = opts.scheduled_floor;
  dpl_opts.floor_override = opts.floor_override;
  report.pairs.resize(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(pairs.size()); ++b) {
    Rng sub = rng.substream("mpl-stage1", {static_cast<std::uint64_t>(b)});
    const DplResult r = dpl(mech, pairs[static_cast<std::size_t>(b)], n, grid, sub, dpl_opts);
    auto& e = report.pairs[static_cast<std::size_t>(b)];
    e.pair_id = pairs[static_cast<std::size_t>(b)].id;
    e.epsilon_hat = r.epsilon_hat;
    e.t_hat = r.t_hat;
  }
  std::size_t best = 0;
  for (std::size_t b = 1; b < report.pairs.size(); ++b)
    if (report.pairs[b].epsilon_hat > report.pairs[best].epsilon_hat) best = b;
  report.selected_index = best;
  report.selected_pair_id = report.pairs[best].pair_id;
  report.t_hat_max = report.pairs[best].t_hat;

  // Stage 2: fresh samples, undersmoothed bandwidth, no floor.
  Rng rng_x = rng.substream("mpl-stage2-x", {});
  Rng rng_y = rng.substream("mpl-stage2-y", {});
  const AdjacentPair& sel = pairs[best];
  const Sample sx = mech.draw(sel.x, N, rng_x);
  const Sample sy = mech.draw(sel.x_prime, N, rng_y);

  const Kernel kernel{KernelShape::Gaussian, 1};
  double fx = 0.0, fxp = 0.0, h_max = 0.0;
  if (space == Space::Continuous) {
    // One common bandwidth for both densities, from the pooled spread.
    std::vector<double> pooled;
    pooled.reserve(2 * N);
    pooled.insert(pooled.end(), sx.reals.begin(), sx.reals.end());
    pooled.insert(pooled.end(), sy.reals.begin(), sy.reals.end());
    double sigma = sample_std(pooled);
    if (!(sigma > 0.0)) sigma = 1.0;
    h_max = opts.bandwidth_scale * sigma *
            std::pow(static_cast<double>(N), -(1.0 / (2.0 * opts.beta + 1.0) + opts.gamma));
    const auto dx = DensityEstimate::tkde(sx, h_max, kernel, 0.0);
    const auto dy = DensityEstimate::tkde(sy, h_max, kernel, 0.0);
    fx = dx.at(report.t_hat_max);
    fxp = dy.at(report.t_hat_max);
  } else {
    const auto dx = DensityEstimate::tdde(sx, 0.0);
    const auto dy = DensityEstimate::tdde(sy, 0.0);
    const auto sym = static_cast<std::int64_t>(report.t_hat_max);
    fx = dx.at(sym);
    fxp = dy.at(sym);
  }
  const double clamp = 1.0 / (2.0 * static_cast<double>(N));
  if (fx <= 0.0 || fxp <= 0.0) {
    report.unstable_location = true;
    fx = std::max(fx, clamp);
    fxp = std::max(fxp, clamp);
  }

  report.ell_star = std::fabs(std::log(fx) - std::log(fxp));
  report.sigma_n = std::sqrt(sigma_hat(fx, fxp, space, kernel));
  report.c_n = c_norm(N, h_max, 1, space);
  report.lb = report.ell_star + std_normal_quantile(alpha) * report.sigma_n / report.c_n;

  report.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string AuditReport::to_json() const {
  nlohmann::json j;
  j["mechanism"] = mechanism;
  j["alpha"] = alpha;
  j["seed"] = seed;
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : pairs)
    j["pairs"].push_back({{"id", p.pair_id}, {"epsilon_hat", p.epsilon_hat}, {"t_hat", p.t_hat}});
  j["selected_index"] = selected_index;
  j["selected_pair"] = selected_pair_id;
  j["t_hat_max"] = t_hat_max;
  j["ell_star"] = ell_star;
  j["sigma_n"] = sigma_n;
  j["c_n"] = c_n;
  j["lb"] = lb;
  j["unstable_location"] = unstable_location;
  if (!config_snapshot.empty())
    j["config"] = nlohmann::json::parse(config_snapshot, nullptr, false);
  return j.dump(2);
}

std::string AuditReport::csv_header() {
  return "pair_id,epsilon_hat_max,t_hat,lb,alpha,seed";
}

// runtime_ms stays out of both serializations: identical seeds must give
// byte-identical output files.
std::string AuditReport::to_csv_row() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%llu",
                selected_pair_id.c_str(), pairs[selected_index].epsilon_hat, t_hat_max,
                lb, alpha, static_cast<unsigned long long>(seed));
  return buf;
}

}  // namespace dpaudit
