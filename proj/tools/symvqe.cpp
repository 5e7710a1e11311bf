#include <CLI11.hpp>
#include <fmt/core.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "symvqe/errors.hpp"
#include "symvqe/experiment.hpp"
#include "symvqe/gates.hpp"

using namespace symvqe;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "Config file (key = value lines)")->required();
  sub->add_option("--set", c.overrides, "Override one key, key=value (repeatable)");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = load_config(c.config_path);
  for (const std::string& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

struct RunArgs {
  Common common;
  std::optional<int> seeds;
  std::optional<std::string> out;
  std::optional<int> parallelism;
  bool dump_circuit = false;
  bool dump_config = false;
  int log_every = 50;
};

int cmd_run(const RunArgs& a) {
  ExperimentConfig cfg = resolve(a.common);
  if (a.seeds) cfg.set("n_seeds", std::to_string(*a.seeds));
  if (a.out) cfg.set("out_dir", *a.out);
  if (a.parallelism) cfg.set("parallelism", std::to_string(*a.parallelism));
  cfg.validate();

  if (a.dump_config) {
    fmt::print("{}", cfg.to_text());
    if (!a.dump_circuit) return 0;
  }
  if (a.dump_circuit) {
    // The circuit at the first seed's initial parameters.
    const LadderLattice lat(cfg.lx, cfg.ly);
    const AnsatzCircuit ac = cfg.ansatz == AnsatzKind::EfSwap
                                 ? build_efswap_ansatz(lat, cfg.labeling, cfg.depth)
                                 : build_hva(lat, cfg.labeling, cfg.depth, cfg.t, cfg.u_hubbard);
    const auto theta = random_parameters(ac.n_params, cfg.init_seed, cfg.init_range);
    fmt::print("{}", format_circuit(ac.full_circuit(theta)));
    return 0;
  }

  spdlog::info("building model {}x{} U={} with {} projector", cfg.lx, cfg.ly, cfg.u_hubbard,
               cfg.project_spatial || cfg.project_spin || cfg.project_eta ? "symmetry" : "no");
  const ExperimentContext ctx(cfg);
  if (const auto e = ctx.exact_energy()) spdlog::info("exact energy {:.10f}", *e);

  const int every = a.log_every;
  const CampaignResult r = run_campaign(ctx, [every](int seed, const IterationRecord& rec) {
    if (every > 0 && rec.x % every == 0)
      spdlog::info("seed {} x {} E0 {:.10f} F {:.8f} |g| {:.3e}", seed, rec.x, rec.e0,
                   rec.fidelity, rec.grad_norm);
  });
  for (const SeedResult& s : r.seeds)
    if (!s.ok()) spdlog::warn("seed {} failed: {}", s.seed, s.error);

  emit_results(r, cfg.out_dir);
  if (r.best_seed >= 0) {
    const auto& best = r.seeds[static_cast<std::size_t>(r.best_seed)].history.back();
    fmt::print("best seed {}: E0 = {:.10f}, fidelity = {:.8f}\n", r.best_seed, best.e0,
               best.fidelity);
  }
  if (!r.mean.empty())
    fmt::print("mean over {} seeds: E0 = {:.10f}, fidelity = {:.8f}\n",
               r.seeds.size() - static_cast<std::size_t>(r.n_failed()), r.mean.back().e0,
               r.mean.back().fidelity);
  fmt::print("results written to {}\n", cfg.out_dir);
  return 0;
}

int cmd_exact(const Common& c) {
  ExperimentConfig cfg = resolve(c);
  cfg.validate();
  fmt::print("{:.10f}\n", exact_energy(cfg));
  return 0;
}

std::vector<int> parse_depths(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
    std::size_t used = 0;
    int d = 0;
    try {
      d = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || d < 1)
      throw ConfigError("--depths expects positive integers separated by commas, got '" + s + "'");
    out.push_back(d);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

int cmd_variance(const Common& c, const std::string& depths_text, int draws,
                 const std::optional<std::string>& out) {
  ExperimentConfig cfg = resolve(c);
  if (out) cfg.set("out_dir", *out);
  if (draws < 1) throw ConfigError("--r must be positive");
  const std::vector<int> depths = parse_depths(depths_text);
  cfg.compute_exact = false;
  cfg.validate();
  const ExperimentContext ctx(cfg);
  const auto rows = run_variance_diagnostics(ctx, depths, draws);
  fmt::print("{:>5} {:>5} {:>14} {:>14} {:>12} {:>12}\n", "D", "R", "sigma2_NG", "sigma2_G",
             "stderr_NG", "stderr_G");
  for (const auto& v : rows)
    fmt::print("{:>5} {:>5} {:>14.6e} {:>14.6e} {:>12.3e} {:>12.3e}\n", v.depth, v.draws,
               v.sigma2_ng, v.sigma2_g, v.stderr_ng, v.stderr_g);
  std::filesystem::create_directories(cfg.out_dir);
  const std::string path = (std::filesystem::path(cfg.out_dir) / "variance.csv").string();
  write_variance_csv(rows, path);
  fmt::print("table written to {}\n", path);
  return 0;
}

int cmd_gatecount(const Common& c) {
  ExperimentConfig cfg = resolve(c);
  cfg.validate();
  const LadderLattice lat(cfg.lx, cfg.ly);
  fmt::print("{:<28} {:<12} {:>8} {:>8}\n", "operation", "gate", "count", "JW CZ");
  for (const GateCountRow& row : gate_count_report(lat, cfg.labeling))
    fmt::print("{:<28} {:<12} {:>8} {:>8}\n", row.operation, row.gate, row.gate_count,
               row.jw_cz_count);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("symvqe"));
  spdlog::set_pattern("[%H:%M:%S] %^%l%$ %v");

  CLI::App app{"Krylov-extended symmetry-adapted VQE for the Fermi-Hubbard ladder"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Optimize a multi-seed campaign and write CSV results");
  add_common(run_cmd, run.common);
  run_cmd->add_option("--seeds", run.seeds, "Number of seeds")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--parallelism", run.parallelism, "Worker threads")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("--dump-circuit", run.dump_circuit, "Print the ansatz circuit and exit");
  run_cmd->add_flag("--dump-config", run.dump_config, "Print the resolved config and exit");
  run_cmd->add_option("--log-every", run.log_every, "Progress line every N iterations (0 = off)")
      ->capture_default_str();

  Common exact;
  auto* exact_cmd = app.add_subcommand("exact", "Lanczos ground-state energy");
  add_common(exact_cmd, exact);

  Common var;
  std::string depths = "1,2,4";
  int draws = 16;
  std::optional<std::string> var_out;
  auto* var_cmd = app.add_subcommand("variance", "Gradient variance over random parameters");
  add_common(var_cmd, var);
  var_cmd->add_option("--depths", depths, "Comma-separated ansatz depths")->capture_default_str();
  var_cmd->add_option("--r", draws, "Random draws per depth")->capture_default_str();
  var_cmd->add_option("--out", var_out, "Output directory");

  Common gc;
  auto* gc_cmd = app.add_subcommand("gatecount", "Two-qubit gate counts per operation");
  add_common(gc_cmd, gc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*exact_cmd) return cmd_exact(exact);
    if (*var_cmd) return cmd_variance(var, depths, draws, var_out);
    if (*gc_cmd) return cmd_gatecount(gc);
  } catch (const ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kExitConfig;
  } catch (const NumericalError& e) {
    spdlog::error("numerical failure: {}", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 1;
}
