#include "dpaudit/harness.hpp"

#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dpaudit {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "mode",       "mechanism", "epsilon0",  "k",          "d",
      "pair_preset", "pairs",    "n",         "N",          "tau",
      "alpha",      "gamma",     "beta",      "grid_lo",    "grid_hi",    "grid_points",
      "seed",       "repetitions", "n_list",  "output_path", "workers",
  };
  return keys;
}

void apply_workers(const AuditConfig& cfg) {
#ifdef _OPENMP
  if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
#else
  (void)cfg;
#endif
}

MplOptions mpl_options(const AuditConfig& cfg) {
  MplOptions o;
  o.beta = cfg.beta;
  o.gamma = cfg.gamma;
  o.floor_override = cfg.tau;
  return o;
}

DplOptions dpl_options(const AuditConfig& cfg) {
  DplOptions o;
  o.beta = cfg.beta;
  o.floor_override = cfg.tau;
  return o;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// R repetitions of MPL over a fixed pair list; shared by cdf and
// data-centric runs. Each repetition owns a substream keyed by its index,
// so the fan-out order cannot change the result.
CdfTable repeated_mpl(const AuditConfig& cfg, const std::vector<AdjacentPair>& pairs) {
  const Mechanism mech = cfg.make_mech();
  const EvalGrid grid = cfg.resolve_grid();
  const Rng master(cfg.seed);
  const std::string label = run_mode_name(cfg.mode);
  const std::size_t R = cfg.repetitions;
  apply_workers(cfg);

  std::vector<double> lbs(R);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(R); ++r) {
    try {
      Rng rep = master.substream(label, {static_cast<std::uint64_t>(r)});
      lbs[static_cast<std::size_t>(r)] =
          mpl(mech, pairs, cfg.n, cfg.N, grid, cfg.alpha, rep, mpl_options(cfg)).lb;
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(lbs.begin(), lbs.end());
  CdfTable table;
  table.lbs = std::move(lbs);
  table.epsilon0 = cfg.epsilon0;
  table.true_eps = true_epsilon(mech);
  if (table.true_eps && !std::isfinite(*table.true_eps)) table.true_eps.reset();
  table.alpha = cfg.alpha;
  return table;
}

}  // namespace

RunMode run_mode_from_name(const std::string& name) {
  if (name == "audit") return RunMode::Audit;
  if (name == "cdf") return RunMode::Cdf;
  if (name == "mse") return RunMode::Mse;
  if (name == "data-centric") return RunMode::DataCentric;
  if (name == "loss-profile") return RunMode::LossProfile;
  throw std::invalid_argument("mode: unknown value '" + name + "'");
}

std::string run_mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::Audit: return "audit";
    case RunMode::Cdf: return "cdf";
    case RunMode::Mse: return "mse";
    case RunMode::DataCentric: return "data-centric";
    case RunMode::LossProfile: return "loss-profile";
  }
  return "audit";
}

Mechanism AuditConfig::make_mech() const {
  return make_mechanism(mech_kind_from_name(mechanism), epsilon0, k, d);
}

std::vector<AdjacentPair> AuditConfig::resolve_pairs() const {
  if (!pairs.empty()) return pairs;
  std::string preset = pair_preset;
  if (preset.empty()) {
    switch (mech_kind_from_name(mechanism)) {
      case MechKind::Laplace:
      case MechKind::Gaussian: preset = "laplace"; break;
      case MechKind::ContinuousNoisyMax: preset = "noisy-max"; break;
      case MechKind::Exponential: preset = "exponential"; break;
      case MechKind::RandomizedResponse: preset = "rr"; break;
      default: preset = "table1"; break;
    }
  }
  if (preset == "table1") return table1_pairs(d).pairs;
  if (preset == "binary-neighborhood") return binary_neighborhood(d);
  if (preset == "cube-grid") return cube_grid_neighborhood(k);
  if (preset == "rr") {
    AdjacentPair p;
    p.id = "rr-0-1";
    p.x.query = {0};
    p.x_prime.query = {1};
    p.kind = AdjacencyKind::QueryVector;
    return {p};
  }
  return statistic_pairs(preset);
}

EvalGrid AuditConfig::resolve_grid() const {
  const Mechanism mech = make_mech();
  if (mech.output_space() == Space::Discrete) return EvalGrid::discrete(mech.alphabet());
  if (grid_set) return EvalGrid::continuous(grid_lo, grid_hi, grid_points);
  if (mech.kind == MechKind::Exponential) return EvalGrid::continuous(0.0, 2.0, grid_points);
  return EvalGrid::continuous(-1.0, 1.0, grid_points);
}

AuditConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known_keys().count(key))
      throw std::invalid_argument("config: unknown key '" + key + "'");
  }

  AuditConfig cfg;
  cfg.raw_json = j.dump();
  if (!j.contains("mechanism") || !j["mechanism"].is_string())
    throw std::invalid_argument("mechanism: required string field");
  cfg.mechanism = j["mechanism"].get<std::string>();
  const MechKind kind = mech_kind_from_name(cfg.mechanism);  // validates the name

  if (j.contains("mode")) cfg.mode = run_mode_from_name(j["mode"].get<std::string>());
  if (j.contains("epsilon0")) cfg.epsilon0 = j["epsilon0"].get<double>();
  if (!(cfg.epsilon0 > 0.0)) throw std::invalid_argument("epsilon0: must be positive");
  if (j.contains("k")) cfg.k = j["k"].get<int>();
  if (cfg.k < 1) throw std::invalid_argument("k: must be at least 1");
  if (j.contains("d")) {
    cfg.d = j["d"].get<int>();
  } else if (kind == MechKind::Svt2 || kind == MechKind::Svt4 || kind == MechKind::Svt5 ||
             kind == MechKind::Svt6) {
    cfg.d = 10;  // the SVT experiments answer ten queries
  }
  if (cfg.d < 1) throw std::invalid_argument("d: must be at least 1");
  if (j.contains("pair_preset")) cfg.pair_preset = j["pair_preset"].get<std::string>();
  if (j.contains("pairs")) cfg.pairs = pairs_from_json(j["pairs"].dump());
  if (j.contains("tau")) cfg.tau = j["tau"].get<double>();
  if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("alpha: must lie in (0,1)");
  if (j.contains("gamma")) cfg.gamma = j["gamma"].get<double>();
  if (j.contains("beta")) cfg.beta = j["beta"].get<double>();
  if (!(cfg.beta > 0.0)) throw std::invalid_argument("beta: must be positive");
  if (j.contains("grid_lo") || j.contains("grid_hi") || j.contains("grid_points")) {
    cfg.grid_set = true;
    if (j.contains("grid_lo")) cfg.grid_lo = j["grid_lo"].get<double>();
    if (j.contains("grid_hi")) cfg.grid_hi = j["grid_hi"].get<double>();
    if (j.contains("grid_points")) cfg.grid_points = j["grid_points"].get<std::size_t>();
    if (!(cfg.grid_lo < cfg.grid_hi))
      throw std::invalid_argument("grid_lo/grid_hi: need grid_lo < grid_hi");
    if (cfg.grid_points < 2) throw std::invalid_argument("grid_points: must be at least 2");
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("repetitions")) cfg.repetitions = j["repetitions"].get<std::size_t>();
  if (cfg.repetitions < 1) throw std::invalid_argument("repetitions: must be at least 1");
  if (j.contains("n_list")) cfg.n_list = j["n_list"].get<std::vector<std::size_t>>();
  if (j.contains("output_path")) cfg.output_path = j["output_path"].get<std::string>();
  if (j.contains("workers")) cfg.workers = j["workers"].get<int>();

  // Per-mechanism sample-size defaults: continuous mechanisms use the small
  // preset, discrete ones the large preset.
  const bool discrete = make_mechanism(kind, cfg.epsilon0, cfg.k, cfg.d).output_space() ==
                        Space::Discrete;
  if (cfg.n == 0 && j.contains("n")) cfg.n = j["n"].get<std::size_t>();
  if (cfg.N == 0 && j.contains("N")) cfg.N = j["N"].get<std::size_t>();
  if (cfg.n == 0) cfg.n = discrete ? 100000 : 20000;
  if (cfg.N == 0) cfg.N = discrete ? 500000 : 50000;
  const bool uses_mpl = cfg.mode == RunMode::Audit || cfg.mode == RunMode::Cdf ||
                        cfg.mode == RunMode::DataCentric;
  if (uses_mpl && cfg.N <= cfg.n) throw std::invalid_argument("N: must exceed n");
  if (cfg.mode == RunMode::Mse && cfg.n_list.empty()) cfg.n_list = {cfg.n};
  return cfg;
}

AuditConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

double CdfTable::cdf_at(double x) const {
  const auto it = std::upper_bound(lbs.begin(), lbs.end(), x);
  return static_cast<double>(it - lbs.begin()) / static_cast<double>(lbs.size());
}

double CdfTable::median() const {
  const std::size_t R = lbs.size();
  if (R == 0) throw std::invalid_argument("CdfTable: empty");
  return R % 2 == 1 ? lbs[R / 2] : 0.5 * (lbs[R / 2 - 1] + lbs[R / 2]);
}

void CdfTable::write_csv(std::ostream& os) const {
  os << "# epsilon0=" << fmt(epsilon0) << ",alpha=" << fmt(alpha);
  if (true_eps) os << ",true_epsilon=" << fmt(*true_eps);
  os << "\nlb,cdf_level\n";
  const auto R = static_cast<double>(lbs.size());
  for (std::size_t i = 0; i < lbs.size(); ++i)
    os << fmt(lbs[i]) << "," << fmt(static_cast<double>(i + 1) / R) << "\n";
}

std::optional<double> true_pair_epsilon(const Mechanism& mech, const AdjacentPair& pair,
                                        const EvalGrid& grid) {
  double best = 0.0;
  if (grid.space == Space::Continuous) {
    for (double t : grid.continuous_points()) {
      const auto v = analytic_loss(mech, pair, t);
      if (!v) return std::nullopt;
      best = std::max(best, *v);
    }
  } else {
    for (std::int64_t s : grid.symbols) {
      const auto v = analytic_loss(mech, pair, static_cast<double>(s));
      if (!v) return std::nullopt;
      best = std::max(best, *v);
    }
  }
  return best;
}

AuditReport run_audit(const AuditConfig& config) {
  if (config.mode != RunMode::Audit)
    throw std::invalid_argument("run_audit: config mode is not 'audit'");
  apply_workers(config);
  const Mechanism mech = config.make_mech();
  const auto pairs = config.resolve_pairs();
  const EvalGrid grid = config.resolve_grid();
  const Rng master(config.seed);
  Rng rep = master.substream("audit", {0});
  AuditReport report =
      mpl(mech, pairs, config.n, config.N, grid, config.alpha, rep, mpl_options(config));
  report.seed = config.seed;
  report.config_snapshot = config.raw_json;
  if (!config.output_path.empty()) {
    std::ofstream out(config.output_path);
    if (!out) throw std::runtime_error("cannot open output path: " + config.output_path);
    out << report.to_json() << "\n";
  }
  return report;
}

CdfTable run_cdf(const AuditConfig& config) {
  if (config.mode != RunMode::Cdf)
    throw std::invalid_argument("run_cdf: config mode is not 'cdf'");
  return repeated_mpl(config, config.resolve_pairs());
}

CdfTable run_data_centric(const AuditConfig& config) {
  if (config.mode != RunMode::DataCentric)
    throw std::invalid_argument("run_data_centric: config mode is not 'data-centric'");
  const auto& preset = config.pair_preset;
  if (preset != "binary-neighborhood" && preset != "cube-grid")
    throw std::invalid_argument(
        "pair_preset: data-centric mode needs 'binary-neighborhood' or 'cube-grid'");
  return repeated_mpl(config, config.resolve_pairs());
}

std::vector<MseRow> run_mse(const AuditConfig& config) {
  if (config.mode != RunMode::Mse)
    throw std::invalid_argument("run_mse: config mode is not 'mse'");
  const Mechanism mech = config.make_mech();
  const auto pairs = config.resolve_pairs();
  if (pairs.empty()) throw std::invalid_argument("run_mse: no pairs configured");
  const AdjacentPair& pair = pairs.front();
  const EvalGrid grid = config.resolve_grid();
  const auto truth = true_pair_epsilon(mech, pair, grid);
  if (!truth)
    throw std::invalid_argument("run_mse: mechanism has no closed-form loss for this pair");
  apply_workers(config);

  const Rng master(config.seed);
  const std::size_t R = config.repetitions;
  std::vector<MseRow> rows;
  const DplOptions opts = dpl_options(config);
  for (std::size_t ni = 0; ni < config.n_list.size(); ++ni) {
    const std::size_t n = config.n_list[ni];
    std::vector<double> errs(R);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(R); ++r) {
      try {
        Rng rep = master.substream("mse", {static_cast<std::uint64_t>(ni),
                                           static_cast<std::uint64_t>(r)});
        const double eps_hat = dpl(mech, pair, n, grid, rep, opts).epsilon_hat;
        errs[static_cast<std::size_t>(r)] = (eps_hat - *truth) * (eps_hat - *truth);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    double acc = 0.0;
    for (double e : errs) acc += e;
    rows.push_back({n, acc / static_cast<double>(R), *truth});
  }
  return rows;
}

void write_mse_csv(const std::vector<MseRow>& rows, std::ostream& os) {
  os << "n,mse,true_epsilon\n";
  for (const auto& row : rows)
    os << row.n << "," << fmt(row.mse) << "," << fmt(row.true_epsilon) << "\n";
}

void emit_loss_profile(const AuditConfig& config, std::ostream& os) {
  if (config.mode != RunMode::LossProfile)
    throw std::invalid_argument("emit_loss_profile: config mode is not 'loss-profile'");
  const Mechanism mech = config.make_mech();
  const auto pairs = config.resolve_pairs();
  if (pairs.empty()) throw std::invalid_argument("emit_loss_profile: no pairs configured");
  const AdjacentPair& pair = pairs.front();
  const EvalGrid grid = config.resolve_grid();
  apply_workers(config);
  const Rng master(config.seed);
  Rng rep = master.substream("loss-profile", {0});
  const DplOptions opts = dpl_options(config);
  const DplResult r = dpl(mech, pair, config.n, grid, rep, opts);

  std::vector<double> pts;
  if (grid.space == Space::Continuous) {
    pts = grid.continuous_points();
  } else {
    pts.reserve(grid.symbols.size());
    for (std::int64_t s : grid.symbols) pts.push_back(static_cast<double>(s));
  }
  os << "t,loss,analytic\n";
  for (std::size_t j = 0; j < pts.size(); ++j) {
    os << fmt(pts[j]) << "," << fmt(r.profile.values[j]) << ",";
    if (const auto a = analytic_loss(mech, pair, pts[j])) os << fmt(*a);
    os << "\n";
  }
}

}  // namespace dpaudit
