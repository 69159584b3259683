#include "dpaudit/mechanisms.hpp"

#include "dpaudit/normal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpaudit {

namespace {

double laplace_cdf(double center, double scale, double t) {
  const double z = (t - center) / scale;
  return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

// Normalizing constant of exp(-lambda|s-t|) restricted to t >= 0.
double exp_mech_norm(double s, double lambda) {
  return (2.0 - std::exp(-lambda * s)) / lambda;
}

bool svt_halts(MechKind variant) {
  return variant == MechKind::Svt2 || variant == MechKind::Svt4;
}

// Canonical integer code for a top/bottom answer sequence. Halting variants
// with M=1 emit the first-top position (0 = all bottom); otherwise the
// sequence is packed base-2 with a length prefix.
std::int64_t encode_svt_output(std::uint64_t bits, int len, int d, int max_positives,
                               bool halting) {
  if (halting && max_positives == 1) {
    if (bits == 0) return 0;
    for (int i = 0; i < len; ++i)
      if (bits & (std::uint64_t{1} << i)) return i + 1;
    return 0;
  }
  return (static_cast<std::int64_t>(len) << d) | static_cast<std::int64_t>(bits);
}

}  // namespace

double laplace_mech(double s, double lambda, Rng& rng) {
  if (!(lambda > 0.0)) throw std::invalid_argument("laplace_mech: lambda must be positive");
  return s + sample_laplace(1.0 / lambda, rng);
}

std::int64_t report_noisy_max(std::span<const std::int64_t> q, double epsilon0, Rng& rng) {
  if (q.size() < 2) throw std::invalid_argument("report_noisy_max: need at least 2 queries");
  if (!(epsilon0 > 0.0)) throw std::invalid_argument("report_noisy_max: epsilon0 must be positive");
  const double scale = 2.0 / epsilon0;
  std::int64_t best = 1;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double v = static_cast<double>(q[i]) + sample_laplace(scale, rng);
    if (v > best_v) {  // strict: ties break toward the smallest index
      best_v = v;
      best = static_cast<std::int64_t>(i) + 1;
    }
  }
  return best;
}

double continuous_noisy_max(std::span<const double> s, double lambda, Rng& rng) {
  if (s.empty()) throw std::invalid_argument("continuous_noisy_max: empty statistic");
  if (!(lambda > 0.0)) throw std::invalid_argument("continuous_noisy_max: lambda must be positive");
  double best = -std::numeric_limits<double>::infinity();
  for (double si : s) best = std::max(best, si + sample_laplace(1.0 / lambda, rng));
  return best;
}

double exponential_mech(double s, double lambda, Rng& rng) {
  if (!(s >= 1.0 && s <= 2.0)) throw std::invalid_argument("exponential_mech: s must lie in [1,2]");
  if (!(lambda > 0.0)) throw std::invalid_argument("exponential_mech: lambda must be positive");
  // Piecewise inverse CDF over the two exponential branches around s.
  const double es = std::exp(-lambda * s);
  const double u = rng.uniform() * (2.0 - es);
  if (u <= 1.0 - es) return s + std::log(u + es) / lambda;
  return s - std::log(2.0 - es - u) / lambda;
}

std::int64_t svt(MechKind variant, std::span<const std::int64_t> q, double threshold,
                 int max_positives, double epsilon0, Rng& rng) {
  if (q.empty()) throw std::invalid_argument("svt: empty query vector");
  if (max_positives < 1) throw std::invalid_argument("svt: M must be positive");
  if (!(epsilon0 > 0.0)) throw std::invalid_argument("svt: epsilon0 must be positive");

  double rho_scale = 0.0, nu_scale = 0.0;
  switch (variant) {
    case MechKind::Svt2:
      rho_scale = 1.0 / (epsilon0 / 2.0);
      nu_scale = 2.0 / (epsilon0 / 2.0);
      break;
    case MechKind::Svt4:
      rho_scale = 1.0 / (epsilon0 / 4.0);
      nu_scale = 2.0 / (3.0 * epsilon0 / 4.0);
      break;
    case MechKind::Svt5:
      rho_scale = 1.0 / epsilon0;
      break;
    case MechKind::Svt6:
      rho_scale = 1.0 / (epsilon0 / 2.0);
      nu_scale = 1.0 / (epsilon0 / 2.0);
      break;
    default:
      throw std::invalid_argument("svt: unknown variant");
  }

  const bool halting = svt_halts(variant);
  const int d = static_cast<int>(q.size());
  double rho = sample_laplace(rho_scale, rng);
  std::uint64_t bits = 0;
  int len = 0, count = 0;
  for (int i = 0; i < d; ++i) {
    const double nu = nu_scale > 0.0 ? sample_laplace(nu_scale, rng) : 0.0;
    const bool top = static_cast<double>(q[i]) + nu >= threshold + rho;
    ++len;
    if (top) {
      bits |= std::uint64_t{1} << i;
      if (halting) {
        ++count;
        if (count == max_positives) break;
        if (variant == MechKind::Svt2) rho = sample_laplace(rho_scale, rng);
      }
    }
  }
  return encode_svt_output(bits, len, d, max_positives, halting);
}

std::int64_t randomized_response(std::int64_t bit, double epsilon0, Rng& rng) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("randomized_response: bit must be 0/1");
  if (!(epsilon0 > 0.0)) throw std::invalid_argument("randomized_response: epsilon0 must be positive");
  const double p_truth = std::exp(epsilon0) / (1.0 + std::exp(epsilon0));
  return rng.uniform() < p_truth ? bit : 1 - bit;
}

double gaussian_mech(double s, double sigma, Rng& rng) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_mech: sigma must be positive");
  return s + sigma * std_normal_quantile(rng.uniform());
}

std::string Mechanism::name() const {
  switch (kind) {
    case MechKind::Laplace: return "laplace";
    case MechKind::ReportNoisyMax: return "report-noisy-max";
    case MechKind::ContinuousNoisyMax: return "continuous-noisy-max";
    case MechKind::Exponential: return "exponential";
    case MechKind::Svt2: return "svt2";
    case MechKind::Svt4: return "svt4";
    case MechKind::Svt5: return "svt5";
    case MechKind::Svt6: return "svt6";
    case MechKind::RandomizedResponse: return "randomized-response";
    case MechKind::Gaussian: return "gaussian";
  }
  return "unknown";
}

Space Mechanism::output_space() const {
  switch (kind) {
    case MechKind::Laplace:
    case MechKind::ContinuousNoisyMax:
    case MechKind::Exponential:
    case MechKind::Gaussian:
      return Space::Continuous;
    default:
      return Space::Discrete;
  }
}

std::vector<std::int64_t> Mechanism::alphabet() const {
  std::vector<std::int64_t> out;
  switch (kind) {
    case MechKind::ReportNoisyMax:
      for (int i = 1; i <= d; ++i) out.push_back(i);
      break;
    case MechKind::RandomizedResponse:
      out = {0, 1};
      break;
    case MechKind::Svt2:
    case MechKind::Svt4:
      if (max_positives == 1)
        for (int i = 0; i <= d; ++i) out.push_back(i);
      // M>1 alphabets are discovered from samples
      break;
    case MechKind::Svt5:
    case MechKind::Svt6:
      for (std::int64_t b = 0; b < (std::int64_t{1} << d); ++b)
        out.push_back((static_cast<std::int64_t>(d) << d) | b);
      break;
    default:
      break;
  }
  return out;
}

double Mechanism::sample_real(const Input& in, Rng& rng) const {
  switch (kind) {
    case MechKind::Laplace:
      return laplace_mech(in.stat.at(0), lambda, rng);
    case MechKind::ContinuousNoisyMax:
      return continuous_noisy_max(in.stat, lambda, rng);
    case MechKind::Exponential:
      return exponential_mech(in.stat.at(0), lambda, rng);
    case MechKind::Gaussian:
      return gaussian_mech(in.stat.at(0), sigma, rng);
    default:
      throw std::invalid_argument("sample_real: mechanism output is discrete");
  }
}

std::int64_t Mechanism::sample_symbol(const Input& in, Rng& rng) const {
  switch (kind) {
    case MechKind::ReportNoisyMax:
      return report_noisy_max(in.query, epsilon0, rng);
    case MechKind::Svt2:
    case MechKind::Svt4:
    case MechKind::Svt5:
    case MechKind::Svt6:
      return svt(kind, in.query, threshold, max_positives, epsilon0, rng);
    case MechKind::RandomizedResponse:
      return randomized_response(in.query.at(0), epsilon0, rng);
    default:
      throw std::invalid_argument("sample_symbol: mechanism output is continuous");
  }
}

Sample Mechanism::draw(const Input& in, std::size_t n, Rng& rng) const {
  Sample s;
  s.space = output_space();
  if (s.space == Space::Continuous) {
    s.reals.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.reals.push_back(sample_real(in, rng));
  } else {
    s.symbols.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.symbols.push_back(sample_symbol(in, rng));
  }
  return s;
}

MechKind mech_kind_from_name(const std::string& name) {
  if (name == "laplace") return MechKind::Laplace;
  if (name == "report-noisy-max" || name == "noisy-max") return MechKind::ReportNoisyMax;
  if (name == "continuous-noisy-max") return MechKind::ContinuousNoisyMax;
  if (name == "exponential") return MechKind::Exponential;
  if (name == "svt2") return MechKind::Svt2;
  if (name == "svt4") return MechKind::Svt4;
  if (name == "svt5") return MechKind::Svt5;
  if (name == "svt6") return MechKind::Svt6;
  if (name == "randomized-response") return MechKind::RandomizedResponse;
  if (name == "gaussian") return MechKind::Gaussian;
  throw std::invalid_argument("unknown mechanism: " + name);
}

double exponential_mech_epsilon(double lambda) {
  return lambda + std::log(2.0 - std::exp(-2.0 * lambda)) -
         std::log(2.0 - std::exp(-lambda));
}

double exponential_mech_lambda_for_epsilon(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  double lo = 1e-12, hi = 1.0;
  while (exponential_mech_epsilon(hi) < epsilon) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (exponential_mech_epsilon(mid) < epsilon ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Mechanism make_mechanism(MechKind kind, double epsilon0, int k, int d) {
  Mechanism m;
  m.kind = kind;
  m.epsilon0 = epsilon0;
  m.k = k;
  switch (kind) {
    case MechKind::Laplace:
      m.lambda = epsilon0;
      break;
    case MechKind::ContinuousNoisyMax:
      m.lambda = epsilon0 / static_cast<double>(k);
      break;
    case MechKind::Exponential:
      m.lambda = exponential_mech_lambda_for_epsilon(epsilon0);
      break;
    case MechKind::ReportNoisyMax:
      m.d = d > 0 ? d : 6;
      break;
    case MechKind::Svt2:
    case MechKind::Svt4:
    case MechKind::Svt5:
    case MechKind::Svt6:
      m.d = d > 0 ? d : 10;
      m.threshold = 1.0;
      m.max_positives = 1;
      break;
    default:
      break;
  }
  if (d > 0) m.d = d;
  return m;
}

std::optional<double> true_epsilon(const Mechanism& mech) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (mech.kind) {
    case MechKind::Laplace:
      return mech.lambda;  // sup of lambda*||t-s'|-|t-s|| over |s-s'| <= 1
    case MechKind::ContinuousNoisyMax:
      return static_cast<double>(mech.k) * mech.lambda;
    case MechKind::Exponential:
      return exponential_mech_epsilon(mech.lambda);
    case MechKind::ReportNoisyMax:
    case MechKind::Svt2:
    case MechKind::Svt4:
    case MechKind::RandomizedResponse:
      return mech.epsilon0;
    case MechKind::Svt5:
    case MechKind::Svt6:
    case MechKind::Gaussian:
      return inf;
  }
  return std::nullopt;
}

double laplace_density(double center, double scale, double t) {
  return 0.5 / scale * std::exp(-std::fabs(t - center) / scale);
}

double continuous_noisy_max_density(std::span<const double> s, double lambda, double t) {
  const double scale = 1.0 / lambda;
  double prod = 1.0, ratio_sum = 0.0;
  for (double si : s) {
    const double Fi = laplace_cdf(si, scale, t);
    prod *= Fi;
    ratio_sum += laplace_density(si, scale, t) / Fi;
  }
  return ratio_sum * prod;
}

double exponential_mech_density(double s, double lambda, double t) {
  if (t < 0.0) return 0.0;
  return std::exp(-lambda * std::fabs(s - t)) / exp_mech_norm(s, lambda);
}

double exponential_mech_cdf(double s, double lambda, double t) {
  if (t <= 0.0) return 0.0;
  const double es = std::exp(-lambda * s);
  const double z = 2.0 - es;
  if (t <= s) return (std::exp(-lambda * (s - t)) - es) / z;
  return (1.0 - es + 1.0 - std::exp(-lambda * (t - s))) / z;
}

std::optional<double> analytic_loss(const Mechanism& mech, const AdjacentPair& pair,
                                    double t) {
  switch (mech.kind) {
    case MechKind::Laplace: {
      const double s = pair.x.stat.at(0), sp = pair.x_prime.stat.at(0);
      return mech.lambda * std::fabs(std::fabs(t - sp) - std::fabs(t - s));
    }
    case MechKind::Gaussian: {
      const double s = pair.x.stat.at(0), sp = pair.x_prime.stat.at(0);
      return std::fabs((t - s) * (t - s) - (t - sp) * (t - sp)) / (2.0 * mech.sigma * mech.sigma);
    }
    case MechKind::ContinuousNoisyMax: {
      const double fx = continuous_noisy_max_density(pair.x.stat, mech.lambda, t);
      const double fxp = continuous_noisy_max_density(pair.x_prime.stat, mech.lambda, t);
      if (fx <= 0.0 && fxp <= 0.0) return 0.0;
      if (fx <= 0.0 || fxp <= 0.0) return std::numeric_limits<double>::infinity();
      return std::fabs(std::log(fx) - std::log(fxp));
    }
    case MechKind::Exponential: {
      if (t < 0.0) return 0.0;
      const double s = pair.x.stat.at(0), sp = pair.x_prime.stat.at(0);
      return std::fabs(mech.lambda * (std::fabs(sp - t) - std::fabs(s - t)) +
                       std::log(exp_mech_norm(sp, mech.lambda)) -
                       std::log(exp_mech_norm(s, mech.lambda)));
    }
    case MechKind::RandomizedResponse:
      // both symbols carry the full ln-odds loss when the bits differ
      return pair.x.query.at(0) == pair.x_prime.query.at(0) ? 0.0 : mech.epsilon0;
    default:
      return std::nullopt;
  }
}

}  // namespace dpaudit
