#pragma once

#include "dpaudit/density.hpp"
#include "dpaudit/mechanisms.hpp"
#include "dpaudit/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace dpaudit {

// Maximization region C: a closed interval discretized into a uniform grid
// (continuous, d=1), or an explicit symbol list (discrete).
struct EvalGrid {
  Space space = Space::Continuous;
  double lo = -1.0;
  double hi = 1.0;
  std::size_t points = 2001;
  std::vector<std::int64_t> symbols;

  static EvalGrid continuous(double lo, double hi, std::size_t points = 2001);
  static EvalGrid discrete(std::vector<std::int64_t> symbols);

  [[nodiscard]] std::size_t size() const {
    return space == Space::Continuous ? points : symbols.size();
  }
  [[nodiscard]] std::vector<double> continuous_points() const;
};

// Empirical loss tabulated over the grid, with its argmax. Infinite entries
// mark one-sided zero densities (possible only with floor 0).
struct LossProfile {
  EvalGrid grid;
  std::vector<double> values;
  std::size_t argmax_index = 0;
  double t_hat = 0.0;            // symbol value cast to double in the discrete case
  double epsilon_hat = 0.0;

  [[nodiscard]] std::int64_t t_hat_symbol() const {
    return grid.symbols.at(argmax_index);
  }
  // CSV with header "t,loss".
  void write_csv(std::ostream& os) const;
};

// |ln fx(t) - ln fx'(t)| with the "inf - inf := 0" convention; one-sided
// zeros yield +infinity.
double empirical_loss_at(const DensityEstimate& fx, const DensityEstimate& fxp, double t);
double empirical_loss_at(const DensityEstimate& fx, const DensityEstimate& fxp,
                         std::int64_t symbol);

// Tabulates the loss over the grid. Argmax ties break toward the smallest
// grid point (discrete: first symbol in list order).
LossProfile loss_profile(const DensityEstimate& fx, const DensityEstimate& fxp,
                         const EvalGrid& grid);

struct DplOptions {
  double beta = 1.0;
  double bandwidth_scale = 1.06;
  bool scheduled_floor = false;
  double floor_override = -1.0;  // >= 0 replaces the default_floor schedule
};

struct DplResult {
  LossProfile profile;
  double t_hat = 0.0;
  double epsilon_hat = 0.0;
};

// Algorithm: draw two fresh size-n samples from A(x) and A(x'), build
// estimation-mode densities and maximize the empirical loss over the grid.
DplResult dpl(const Mechanism& mech, const AdjacentPair& pair, std::size_t n,
              const EvalGrid& grid, Rng& rng, const DplOptions& opts = {});

}  // namespace dpaudit
