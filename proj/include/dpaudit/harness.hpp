#pragma once

#include "dpaudit/mpl.hpp"
#include "dpaudit/patterns.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dpaudit {

enum class RunMode { Audit, Cdf, Mse, DataCentric, LossProfile };

RunMode run_mode_from_name(const std::string& name);
std::string run_mode_name(RunMode mode);

// One experiment description: mechanism, pair source, sample sizes, grid,
// seed and fan-out. Loaded from a flat JSON document; unset keys take the
// per-mechanism defaults (continuous: n=2e4, N=5e4; discrete: n=1e5, N=5e5).
struct AuditConfig {
  RunMode mode = RunMode::Audit;
  std::string mechanism;
  double epsilon0 = 1.5;
  int k = 3;               // continuous Noisy Max vector length
  int d = 6;               // query vector length
  std::string pair_preset; // "table1", "laplace", "noisy-max", "exponential",
                           // "binary-neighborhood", "cube-grid", "rr"
  std::vector<AdjacentPair> pairs;  // explicit pairs override the preset
  std::size_t n = 0;       // 0 -> per-mechanism default
  std::size_t N = 0;
  double tau = -1.0;       // stage-1 floor; -1 -> built-in schedule
  double alpha = 0.05;
  double gamma = 0.02;
  // Smoothness order driving the bandwidth exponent n^(-1/(2*beta+1)).
  // The experiment drivers default to 2, matching the rule-of-thumb
  // selection the reference experiments used; the zoo densities are smooth
  // away from finitely many kinks, and the Lipschitz-order exponent (beta=1)
  // leaves the grid maximization visibly noise-biased.
  double beta = 2.0;
  bool grid_set = false;   // explicit C below, else per-mechanism default
  double grid_lo = -1.0;
  double grid_hi = 1.0;
  std::size_t grid_points = 2001;
  std::uint64_t seed = 1;
  std::size_t repetitions = 1;
  std::vector<std::size_t> n_list;  // mse mode sweep
  std::string output_path;
  int workers = 0;         // >0 pins the OpenMP thread count
  std::string raw_json;    // verbatim config document, kept for provenance

  [[nodiscard]] Mechanism make_mech() const;
  [[nodiscard]] std::vector<AdjacentPair> resolve_pairs() const;
  [[nodiscard]] EvalGrid resolve_grid() const;
};

// Parse + validate a config document / file. Validation failures throw
// std::invalid_argument naming the offending field.
AuditConfig config_from_json(const std::string& text);
AuditConfig load_config(const std::string& path);

// Sorted lower bounds with empirical CDF levels i/R.
struct CdfTable {
  std::vector<double> lbs;  // ascending
  double epsilon0 = 0.0;
  std::optional<double> true_eps;
  double alpha = 0.05;

  // Fraction of runs with LB <= x.
  [[nodiscard]] double cdf_at(double x) const;
  [[nodiscard]] double median() const;
  // Header comment with epsilon0/alpha, then "lb,cdf_level" rows.
  void write_csv(std::ostream& os) const;
};

struct MseRow {
  std::size_t n = 0;
  double mse = 0.0;
  double true_epsilon = 0.0;
};

// Single MPL run (mode=audit). Writes the JSON report to output_path if set.
AuditReport run_audit(const AuditConfig& config);

// R independent MPL runs fanned out over repetitions (mode=cdf).
CdfTable run_cdf(const AuditConfig& config);

// DPL-only MSE sweep over n_list against the analytic loss maximized on the
// same grid (mode=mse). Requires a mechanism with a closed-form loss.
std::vector<MseRow> run_mse(const AuditConfig& config);
void write_mse_csv(const std::vector<MseRow>& rows, std::ostream& os);

// MPL over a full neighborhood of a fixed input (mode=data-centric).
CdfTable run_data_centric(const AuditConfig& config);

// One DPL profile as "t,loss,analytic" rows; the analytic column is empty
// when no closed form exists (mode=loss-profile).
void emit_loss_profile(const AuditConfig& config, std::ostream& os);

// Analytic loss maximized over the grid; nullopt if no closed form.
std::optional<double> true_pair_epsilon(const Mechanism& mech, const AdjacentPair& pair,
                                        const EvalGrid& grid);

}  // namespace dpaudit
