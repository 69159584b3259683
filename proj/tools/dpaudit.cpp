#include "dpaudit/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using dpaudit::AuditConfig;

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> mechanism;
  std::optional<double> epsilon0;
  std::optional<std::string> pair_preset;
  std::optional<std::size_t> n;
  std::optional<std::size_t> N;
  std::optional<double> tau;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> repetitions;
  std::optional<std::vector<std::size_t>> n_list;
  std::optional<std::string> output_path;
  std::optional<int> workers;
  std::optional<double> grid_lo, grid_hi;
  std::optional<std::size_t> grid_points;
  std::optional<int> k, d;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("-c,--config", f.config_path, "JSON config file");
  cmd->add_option("--mechanism", f.mechanism, "mechanism name");
  cmd->add_option("--epsilon0", f.epsilon0, "target privacy budget");
  cmd->add_option("--pair_preset", f.pair_preset, "pair preset name");
  cmd->add_option("--n", f.n, "stage-1 sample size");
  cmd->add_option("--N", f.N, "stage-2 sample size");
  cmd->add_option("--tau", f.tau, "stage-1 density floor");
  cmd->add_option("--alpha", f.alpha, "CI level");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--repetitions", f.repetitions, "repetition count R");
  cmd->add_option("--n_list", f.n_list, "sample sizes for the mse sweep");
  cmd->add_option("--output_path", f.output_path, "output file (default stdout)");
  cmd->add_option("--workers", f.workers, "worker pool size");
  cmd->add_option("--grid_lo", f.grid_lo, "grid lower bound");
  cmd->add_option("--grid_hi", f.grid_hi, "grid upper bound");
  cmd->add_option("--grid_points", f.grid_points, "grid resolution");
  cmd->add_option("--k", f.k, "noisy-max vector length");
  cmd->add_option("--d", f.d, "query vector length");
}

// Merge: config file (if any) < CLI flags < DPAUDIT_WORKERS env var.
AuditConfig build_config(const CommonFlags& f, const std::string& mode) {
  nlohmann::json j = nlohmann::json::object();
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw std::invalid_argument("config file not found: " + f.config_path);
    j = nlohmann::json::parse(in);
  }
  j["mode"] = mode;
  if (f.mechanism) j["mechanism"] = *f.mechanism;
  if (f.epsilon0) j["epsilon0"] = *f.epsilon0;
  if (f.pair_preset) j["pair_preset"] = *f.pair_preset;
  if (f.n) j["n"] = *f.n;
  if (f.N) j["N"] = *f.N;
  if (f.tau) j["tau"] = *f.tau;
  if (f.alpha) j["alpha"] = *f.alpha;
  if (f.seed) j["seed"] = *f.seed;
  if (f.repetitions) j["repetitions"] = *f.repetitions;
  if (f.n_list) j["n_list"] = *f.n_list;
  if (f.output_path) j["output_path"] = *f.output_path;
  if (f.workers) j["workers"] = *f.workers;
  if (f.grid_lo) j["grid_lo"] = *f.grid_lo;
  if (f.grid_hi) j["grid_hi"] = *f.grid_hi;
  if (f.grid_points) j["grid_points"] = *f.grid_points;
  if (f.k) j["k"] = *f.k;
  if (f.d) j["d"] = *f.d;
  if (const char* env = std::getenv("DPAUDIT_WORKERS"))
    j["workers"] = std::atoi(env);
  return dpaudit::config_from_json(j.dump());
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output path: " + path);
  return out;
}

void write_text(const AuditConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text;
  } else {
    auto out = open_output(cfg.output_path);
    out << text;
  }
}

int run(const std::string& mode, const CommonFlags& flags) {
  AuditConfig cfg;
  try {
    cfg = build_config(flags, mode);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    if (mode == "audit") {
      // run_audit writes the report itself when output_path is set.
      const auto report = dpaudit::run_audit(cfg);
      if (cfg.output_path.empty()) std::cout << report.to_json() << "\n";
      return 0;
    }
    std::ostringstream body;
    if (mode == "cdf") {
      dpaudit::run_cdf(cfg).write_csv(body);
    } else if (mode == "data-centric") {
      dpaudit::run_data_centric(cfg).write_csv(body);
    } else if (mode == "mse") {
      dpaudit::write_mse_csv(dpaudit::run_mse(cfg), body);
    } else {
      dpaudit::emit_loss_profile(cfg, body);
    }
    write_text(cfg, body.str());
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

int list_mechanisms() {
  using dpaudit::MechKind;
  static const MechKind kinds[] = {
      MechKind::Laplace,      MechKind::ReportNoisyMax, MechKind::ContinuousNoisyMax,
      MechKind::Exponential,  MechKind::Svt2,           MechKind::Svt4,
      MechKind::Svt5,         MechKind::Svt6,           MechKind::RandomizedResponse,
      MechKind::Gaussian,
  };
  for (MechKind kind : kinds) {
    const auto mech = dpaudit::make_mechanism(kind, 1.5);
    const auto eps = dpaudit::true_epsilon(mech);
    std::string eps_str = "unknown";
    if (eps) {
      if (std::isfinite(*eps)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", *eps);
        eps_str = buf;
      } else {
        eps_str = "inf";
      }
    }
    std::printf("%-12s %-10s true_epsilon(at budget 1.5)=%s\n", mech.name().c_str(),
                mech.output_space() == dpaudit::Space::Discrete ? "discrete" : "continuous",
                eps_str.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"black-box differential-privacy auditor"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string chosen;
  for (const char* mode : {"audit", "cdf", "mse", "data-centric", "loss-profile"}) {
    auto* cmd = app.add_subcommand(mode);
    add_common_flags(cmd, flags);
    cmd->callback([&chosen, mode] { chosen = mode; });
  }
  auto* mechs = app.add_subcommand("mechanisms", "describe the mechanism zoo");
  bool list = false;
  mechs->add_subcommand("list")->callback([&list] { list = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (list) return list_mechanisms();
  if (chosen.empty()) {
    std::cerr << "config error: no action selected\n";
    return 2;
  }
  return run(chosen, flags);
}
