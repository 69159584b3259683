#pragma once

#include "dpaudit/density.hpp"
#include "dpaudit/rng.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dpaudit {

// Algorithm input: a continuous statistic or an integer query vector,
// depending on the mechanism's input convention.
struct Input {
  std::vector<double> stat;
  std::vector<std::int64_t> query;
};

enum class AdjacencyKind { HammingDatabase, QueryVector, StatisticPair };

struct AdjacentPair {
  std::string id;
  Input x;
  Input x_prime;
  AdjacencyKind kind = AdjacencyKind::StatisticPair;
};

enum class MechKind {
  Laplace,
  ReportNoisyMax,
  ContinuousNoisyMax,
  Exponential,
  Svt2,
  Svt4,
  Svt5,
  Svt6,
  RandomizedResponse,
  Gaussian,
};

// A zoo mechanism under audit: a black-box sampler with declared output
// space plus analytic oracles where the privacy level is known in closed form.
struct Mechanism {
  MechKind kind = MechKind::Laplace;
  double lambda = 1.0;    // Laplace / continuous Noisy Max / Exponential
  double epsilon0 = 1.0;  // Report Noisy Max / SVT budget / Randomized Response
  double sigma = 1.0;     // Gaussian
  double threshold = 1.0; // SVT T
  int max_positives = 1;  // SVT M
  int k = 3;              // continuous Noisy Max vector length
  int d = 6;              // query vector length (Report Noisy Max / SVT)

  [[nodiscard]] std::string name() const;
  [[nodiscard]] Space output_space() const;
  // Declared symbol alphabet (discrete mechanisms only).
  [[nodiscard]] std::vector<std::int64_t> alphabet() const;

  [[nodiscard]] double sample_real(const Input& in, Rng& rng) const;
  [[nodiscard]] std::int64_t sample_symbol(const Input& in, Rng& rng) const;
  [[nodiscard]] Sample draw(const Input& in, std::size_t n, Rng& rng) const;
};

// Parse "laplace", "svt5", ... ; throws std::invalid_argument on unknown names.
MechKind mech_kind_from_name(const std::string& name);

// Builds a zoo mechanism targeting privacy level epsilon0 (tunes lambda for
// the continuous mechanisms, including the Exponential closed-form inversion).
Mechanism make_mechanism(MechKind kind, double epsilon0, int k = 3, int d = -1);

// Standalone samplers mirroring the mechanism definitions.
double laplace_mech(double s, double lambda, Rng& rng);
std::int64_t report_noisy_max(std::span<const std::int64_t> q, double epsilon0, Rng& rng);
double continuous_noisy_max(std::span<const double> s, double lambda, Rng& rng);
double exponential_mech(double s, double lambda, Rng& rng);
std::int64_t svt(MechKind variant, std::span<const std::int64_t> q, double threshold,
                 int max_positives, double epsilon0, Rng& rng);
std::int64_t randomized_response(std::int64_t bit, double epsilon0, Rng& rng);
double gaussian_mech(double s, double sigma, Rng& rng);

// Analytic global epsilon where a closed form exists; +infinity for the
// non-private members; nullopt when unknown.
std::optional<double> true_epsilon(const Mechanism& mech);

// Exponential mechanism: epsilon as a function of lambda, and its inverse.
double exponential_mech_epsilon(double lambda);
double exponential_mech_lambda_for_epsilon(double epsilon);

// Analytic pointwise loss ell_{x,x'}(t), where known in closed form.
std::optional<double> analytic_loss(const Mechanism& mech, const AdjacentPair& pair,
                                    double t);

// Analytic densities used as test oracles.
double laplace_density(double center, double scale, double t);
// Density of max_i(s_i + Lap(1/lambda)).
double continuous_noisy_max_density(std::span<const double> s, double lambda, double t);
double exponential_mech_density(double s, double lambda, double t);
double exponential_mech_cdf(double s, double lambda, double t);

}  // namespace dpaudit
