#pragma once

#include "dpaudit/loss.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dpaudit {

// Asymptotic variance of the empirical loss at one point; returns sigma^2.
// Discrete: 1/fx + 1/fx' - 2. Continuous: int K^2 * (1/fx + 1/fx').
double sigma_hat(double fx, double fxp, Space space, const Kernel& kernel);

// Normalizing rate: sqrt(N) (discrete) or sqrt(N h^d) (continuous, h > 0).
double c_norm(std::size_t n, double h, int dim, Space space);

// Lower end of the one-sided interval [lb, inf) for the pointwise loss.
double pointwise_ci(double fx, double fxp, double loss_at_t, std::size_t n,
                    double alpha, Space space, const Kernel& kernel, double h = 0.0);

struct MplOptions {
  double beta = 1.0;
  double gamma = 0.02;
  double bandwidth_scale = 1.06;
  bool scheduled_floor = false;
  double floor_override = -1.0;  // stage-1 floor; stage 2 always uses 0
};

struct PairEstimate {
  std::string pair_id;
  double epsilon_hat = 0.0;
  double t_hat = 0.0;
};

struct AuditReport {
  std::vector<PairEstimate> pairs;
  std::size_t selected_index = 0;
  std::string selected_pair_id;
  double t_hat_max = 0.0;
  double ell_star = 0.0;      // second-stage loss at t_hat_max
  double sigma_n = 0.0;       // sqrt of the estimated variance
  double c_n = 0.0;
  double alpha = 0.05;
  double lb = 0.0;
  std::uint64_t seed = 0;
  double runtime_ms = 0.0;
  bool unstable_location = false;  // a stage-2 density hit 0 and was clamped
  std::string mechanism;
  std::string config_snapshot;     // filled by the harness

  [[nodiscard]] std::string to_json() const;
  // One CSV row: pair id, eps_hat_max, t_hat, lb, alpha, seed, runtime_ms.
  [[nodiscard]] std::string to_csv_row() const;
  static std::string csv_header();
};

// Two-stage audit: stage 1 selects the worst pair via per-pair dpl runs,
// stage 2 re-estimates the loss at the selected location from fresh size-N
// samples with an undersmoothed bandwidth and no floor, then forms
// lb = ell_star + quantile(alpha) * sigma / c_n.
AuditReport mpl(const Mechanism& mech, const std::vector<AdjacentPair>& pairs,
                std::size_t n, std::size_t N, const EvalGrid& grid, double alpha,
                Rng& rng, const MplOptions& opts = {});

}  // namespace dpaudit
