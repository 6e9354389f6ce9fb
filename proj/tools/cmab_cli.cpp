// Command-line front end: run, sweep, fixtures, bounds.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmab/cmab.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kInvariant = 2, kIo = 3 };

int exit_code(cmab::Errc e) {
  switch (e) {
    case cmab::Errc::InvariantViolation: return kInvariant;
    case cmab::Errc::IoError: return kIo;
    default: return kConfig;
  }
}

struct Overrides {
  std::optional<cmab::Round> horizon;
  std::optional<std::size_t> repetitions;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<cmab::Round> stride;
  std::optional<std::string> strategy;
  std::optional<std::string> out;
  bool debug = false;

  void add_to(CLI::App* app) {
    app->add_option("--horizon", horizon, "Override the horizon T");
    app->add_option("--repetitions", repetitions, "Override the repetition count");
    app->add_option("--seed", seed, "Override the base seed");
    app->add_option("--threads", threads, "Worker threads (0: all cores)");
    app->add_option("--stride", stride, "Recording stride in rounds");
    app->add_option("--strategy", strategy, "Override attack.strategy");
    app->add_option("--out", out, "Output directory");
    app->add_flag("--debug-invariants", debug, "Check attack post-conditions every round");
  }

  void apply(cmab::ExperimentConfig& cfg) const {
    if (horizon) cfg.horizon = *horizon;
    if (repetitions) cfg.repetitions = *repetitions;
    if (seed) cfg.base_seed = *seed;
    if (threads) cfg.threads = *threads;
    if (stride) cfg.stride = *stride;
    if (strategy) cfg.attack.strategy = cmab::parse_strategy(*strategy);
    if (out) cfg.output = *out;
    if (debug) cfg.debug_invariants = true;
  }
};

void print_summary(const std::vector<cmab::RunResult>& results) {
  std::printf("%-6s %-20s %14s %14s %10s %8s\n", "run", "seed", "R(T)", "C(T)",
              "target%", "|D0|");
  for (const auto& r : results)
    std::printf("%-6zu %-20llu %14.2f %14.4f %10.4f %8zu\n", r.run_id,
                static_cast<unsigned long long>(r.seed), r.final_regret, r.final_cost,
                100.0 * r.target_fraction, r.affected_count.back());
}

int cmd_run(const std::string& config_path, const Overrides& ov) {
  auto cfg = cmab::load_config(config_path);
  ov.apply(cfg);
  const auto results = cmab::run_experiment(cfg);
  const auto path = std::filesystem::path(cfg.output) / "results.csv";
  cmab::export_csv(results, path);
  print_summary(results);
  std::printf("wrote %s\n", path.string().c_str());
  return kOk;
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::vector<double>& values, const Overrides& ov) {
  auto cfg = cmab::load_config(config_path);
  ov.apply(cfg);
  const auto rows = cmab::sweep(cfg, axis, values);
  const auto path = std::filesystem::path(cfg.output) / ("sweep_" + axis + ".csv");
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cmab::Error(cmab::Errc::IoError, "cannot write " + path.string());
  cmab::write_sweep_csv(out, axis, rows);
  cmab::write_sweep_csv(std::cout, axis, rows);
  std::printf("wrote %s\n", path.string().c_str());
  return kOk;
}

int cmd_fixtures() {
  for (auto name : cmab::kFixtureNames) {
    const auto inst = cmab::fixture(name);
    std::printf("%-9s K=%-3zu M=%-3zu %s sigma=%g b=%g\n", std::string(name).c_str(),
                inst.num_arms(), inst.num_agents(),
                inst.homogeneous() ? "homogeneous  " : "heterogeneous", inst.sigma(),
                inst.bound());
  }
  return kOk;
}

int cmd_bounds(const std::string& config_path, const Overrides& ov) {
  auto cfg = cmab::load_config(config_path);
  ov.apply(cfg);
  cmab::validate(cfg);
  const auto inst = cmab::make_instance(cfg, cfg.base_seed);
  const auto kind = cmab::bound_kind(cfg, inst);
  if (!kind) {
    std::printf("strategy %s has no closed-form guarantee\n",
                std::string(cmab::to_string(cfg.attack.strategy)).c_str());
    return kOk;
  }
  auto params = cmab::bound_params(cfg, inst, *kind);
  params.horizon = static_cast<double>(cfg.horizon);
  const auto v = cmab::theoretical_cost_bound(*kind, params);
  static constexpr const char* names[] = {"homo_coucb", "oracle_attack", "lta", "homo_tcom", "homo_dpe2"};
  std::printf("kind        %s\n", names[static_cast<int>(*kind)]);
  std::printf("T           %llu\n", static_cast<unsigned long long>(cfg.horizon));
  std::printf("regret_lb   %.6f\n", v.regret_lb);
  std::printf("cost_ub     %.6f\n", v.cost_ub);
  std::printf("pulls_bound %.6f\n", v.pulls_bound);
  if (params.t0) std::printf("T0          %.0f\n", *params.t0);
  if (*kind == cmab::BoundKind::Lta)
    std::printf("L           %llu\n",
                static_cast<unsigned long long>(cmab::lta_threshold_L(
                    inst.num_arms(), cfg.attack.delta, cfg.attack.delta_min)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reward-poisoning attacks on cooperative multi-agent bandits"};
  app.require_subcommand(1);

  std::string config;
  Overrides ov;

  auto* run = app.add_subcommand("run", "Run all repetitions and export CSV");
  run->add_option("--config", config, "JSON config file")->required();
  ov.add_to(run);

  std::string axis;
  std::vector<double> values;
  auto* sw = app.add_subcommand("sweep", "Repeat a run over values of one numeric field");
  sw->add_option("--config", config, "JSON config file")->required();
  sw->add_option("--axis", axis, "Numeric field to vary")->required();
  sw->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  ov.add_to(sw);

  bool list = false;
  auto* fx = app.add_subcommand("fixtures", "Describe the canonical instances");
  fx->add_flag("--list", list, "List fixtures");

  auto* bd = app.add_subcommand("bounds", "Print the closed-form guarantees for a config");
  bd->add_option("--config", config, "JSON config file")->required();
  ov.add_to(bd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(config, ov);
    if (*sw) return cmd_sweep(config, axis, values, ov);
    if (*fx) return cmd_fixtures();
    if (*bd) return cmd_bounds(config, ov);
  } catch (const cmab::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  }
  return kOk;
}
