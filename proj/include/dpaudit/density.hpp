#pragma once

#include "dpaudit/kernel.hpp"

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace dpaudit {

enum class Space { Discrete, Continuous };

// One mechanism output sample; values share the space tag.
struct Sample {
  Space space = Space::Continuous;
  int dim = 1;
  std::vector<double> reals;     // continuous outputs (d=1 throughout the zoo)
  std::vector<std::int64_t> symbols;  // discrete outputs

  [[nodiscard]] std::size_t size() const {
    return space == Space::Continuous ? reals.size() : symbols.size();
  }
};

enum class BandwidthMode { Estimation, Inference };

// Floor-truncated density estimate, built once and then evaluated anywhere.
// Continuous estimates (TKDE) keep a sorted copy of the data; discrete ones
// (TDDE) a frequency table. Evaluation is pure and safe to call concurrently.
class DensityEstimate {
 public:
  static DensityEstimate tkde(const Sample& sample, double bandwidth,
                              const Kernel& kernel, double floor);
  static DensityEstimate tdde(const Sample& sample, double floor);

  // Floored density value at a continuous point (TKDE only).
  [[nodiscard]] double at(double t) const;
  // Floored density value at a symbol (TDDE only).
  [[nodiscard]] double at(std::int64_t symbol) const;
  // Unfloored value, used by normalization checks.
  [[nodiscard]] double raw_at(double t) const;
  [[nodiscard]] double raw_at(std::int64_t symbol) const;

  // Evaluates the floored estimate at every grid point. The OpenMP variant
  // splits over grid points with a fixed inner summation order, so results
  // agree bitwise with single-threaded runs.
  [[nodiscard]] std::vector<double> profile(std::span<const double> grid) const;
  // Plain nested-loop reference used by tests and the benchmark.
  [[nodiscard]] std::vector<double> profile_serial(std::span<const double> grid) const;

  [[nodiscard]] Space space() const { return space_; }
  [[nodiscard]] std::size_t sample_size() const { return n_; }
  [[nodiscard]] double bandwidth() const { return h_; }
  [[nodiscard]] double floor() const { return floor_; }
  [[nodiscard]] const Kernel& kernel() const { return kernel_; }

 private:
  DensityEstimate() = default;

  Space space_ = Space::Continuous;
  std::size_t n_ = 0;
  double h_ = 0.0;
  double floor_ = 0.0;
  Kernel kernel_{};
  std::vector<double> sorted_;  // TKDE data, ascending
  std::unordered_map<std::int64_t, double> freq_;  // TDDE frequencies
};

// Sample standard deviation (denominator n-1).
double sample_std(std::span<const double> values);

// Silverman-style bandwidth schedule. Estimation mode: c_h * n^(-1/(2b+d));
// inference mode undersmooths with an extra exponent gamma, which must
// exceed nu/(6(1+nu)).
double default_bandwidth(const Sample& sample, BandwidthMode mode,
                         double beta = 1.0, double nu = 0.0, double gamma = 0.02,
                         double c_scale = 1.06);

// Floor schedule. Estimation mode returns the fixed defaults (1e-3, dropping
// to 1e-4 from n = 1e5); inference mode returns 0. With scheduled=true the
// ln(n)/sqrt(n) rate is used instead, scaled to match the default at n=2e4.
double default_floor(std::size_t n, Space space, BandwidthMode mode,
                     bool scheduled = false);

}  // namespace dpaudit
