#pragma once

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cmab/algo.hpp"
#include "cmab/attack/attackers.hpp"
#include "cmab/attack/bounds.hpp"
#include "cmab/attack/config.hpp"
#include "cmab/attack/planning.hpp"
#include "cmab/env.hpp"
#include "cmab/ledger.hpp"
#include "cmab/metrics.hpp"

namespace cmab {

enum class Algorithm { CoUcb, Tcom, Dpe2 };

constexpr std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::CoUcb: return "coucb";
    case Algorithm::Tcom: return "tcom";
    case Algorithm::Dpe2: return "dpe2";
  }
  return "coucb";
}

inline Algorithm parse_algorithm(std::string_view s) {
  for (auto a : {Algorithm::CoUcb, Algorithm::Tcom, Algorithm::Dpe2})
    if (to_string(a) == s) return a;
  throw Error(Errc::ConfigError, "unknown algorithm '" + std::string(s) + "'");
}

struct FixtureSource {
  std::string name;
};
struct RandomSource {
  RandomInstanceParams params;
  std::uint64_t seed = kFixtureSeed;
  /// Draw a fresh instance from every repetition's seed instead.
  bool resample = false;
};
struct ExplicitSource {
  std::vector<double> means;
  double sigma = 0.1;
  double b = 1.0;
  std::vector<std::vector<ArmId>> arm_sets;  // 0-based internally
};
using InstanceSource = std::variant<FixtureSource, RandomSource, ExplicitSource>;

struct ExperimentConfig {
  InstanceSource instance = FixtureSource{"homo20"};
  Algorithm algorithm = Algorithm::CoUcb;
  double alpha = 4.0;
  double beta_phase = 2.0;
  AttackConfig attack;
  Round horizon = 100000;
  std::size_t repetitions = 10;
  std::uint64_t base_seed = 1;
  Round stride = 100;
  std::size_t threads = 0;  // 0: hardware concurrency
  bool bounds = true;
  bool debug_invariants = false;
  std::string output = "out";
};

// ---------------------------------------------------------------- config IO

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& j, std::initializer_list<std::string_view> keys,
                           std::string_view where) {
  require(j.is_object(), Errc::ConfigError, std::string(where) + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (auto key : keys) ok = ok || key == k;
    require(ok, Errc::ConfigError,
            "unknown field '" + k + "' in " + std::string(where));
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigError, std::string("field '") + key + "': " + e.what());
  }
}

/// 1-based arm id in files, 0-based in memory.
inline ArmId read_arm(const json& j, const char* key) {
  long long v = 0;
  read(j, key, v);
  require(v >= 1, Errc::ConfigError, std::string(key) + " is a 1-based arm id");
  return static_cast<ArmId>(v - 1);
}

inline json preset_json(std::string_view name) {
  if (name == "paper-s5-hetero")
    return json{{"instance", {{"fixture", "hetero20"}}},
                {"algorithm", {{"name", "coucb"}, {"alpha", 10.0}}},
                {"attack",
                 {{"strategy", "oracle_attack"}, {"delta0", 0.05}, {"delta", 0.1},
                  {"delta_min", 0.1}}},
                {"horizon", 100000},
                {"repetitions", 10}};
  if (name == "paper-appendix-homo")
    return json{{"instance", {{"fixture", "homo20"}}},
                {"algorithm", {{"name", "coucb"}, {"alpha", 4.0}}},
                {"attack", {{"strategy", "homo_coucb"}, {"delta0", 0.1}, {"delta", 0.1}}},
                {"horizon", 100000},
                {"repetitions", 10}};
  throw Error(Errc::ConfigError, "unknown preset '" + std::string(name) + "'");
}

inline InstanceSource parse_instance(const json& j) {
  reject_unknown(j, {"fixture", "random", "explicit"}, "instance");
  require(j.size() == 1, Errc::ConfigError,
          "instance needs exactly one of fixture, random, explicit");
  if (j.contains("fixture")) {
    FixtureSource f;
    read(j, "fixture", f.name);
    fixture(f.name);  // validates the name
    return f;
  }
  if (j.contains("random")) {
    const auto& r = j.at("random");
    reject_unknown(r,
                   {"num_arms", "num_agents", "set_size", "mean_low", "mean_high", "min_gap",
                    "b", "sigma", "seed", "resample"},
                   "instance.random");
    RandomSource s;
    read(r, "num_arms", s.params.num_arms);
    read(r, "num_agents", s.params.num_agents);
    read(r, "set_size", s.params.set_size);
    read(r, "mean_low", s.params.mean_low);
    read(r, "mean_high", s.params.mean_high);
    read(r, "min_gap", s.params.min_gap);
    read(r, "b", s.params.b);
    read(r, "sigma", s.params.sigma);
    read(r, "seed", s.seed);
    read(r, "resample", s.resample);
    return s;
  }
  const auto& e = j.at("explicit");
  reject_unknown(e, {"means", "sigma", "b", "arm_sets"}, "instance.explicit");
  ExplicitSource s;
  read(e, "means", s.means);
  read(e, "sigma", s.sigma);
  read(e, "b", s.b);
  std::vector<std::vector<long long>> sets;
  read(e, "arm_sets", sets);
  require(!sets.empty(), Errc::ConfigError, "instance.explicit needs arm_sets");
  for (const auto& set : sets) {
    std::vector<ArmId> out;
    for (long long a : set) {
      require(a >= 1, Errc::ConfigError, "arm ids in arm_sets are 1-based");
      out.push_back(static_cast<ArmId>(a - 1));
    }
    s.arm_sets.push_back(std::move(out));
  }
  return s;
}

inline void apply_json(const json& j, ExperimentConfig& cfg) {
  reject_unknown(j,
                 {"preset", "instance", "algorithm", "attack", "horizon", "repetitions",
                  "base_seed", "stride", "threads", "bounds", "debug_invariants", "output"},
                 "config");
  if (j.contains("instance")) cfg.instance = parse_instance(j.at("instance"));
  if (j.contains("algorithm")) {
    const auto& a = j.at("algorithm");
    reject_unknown(a, {"name", "alpha", "beta_phase"}, "algorithm");
    std::string name = std::string(to_string(cfg.algorithm));
    read(a, "name", name);
    cfg.algorithm = parse_algorithm(name);
    read(a, "alpha", cfg.alpha);
    read(a, "beta_phase", cfg.beta_phase);
  }
  if (j.contains("attack")) {
    const auto& a = j.at("attack");
    reject_unknown(a,
                   {"strategy", "target_arm", "delta0", "delta", "delta_min", "margin",
                    "scope", "attacked_agent", "use_aas"},
                   "attack");
    std::string s = std::string(to_string(cfg.attack.strategy));
    read(a, "strategy", s);
    cfg.attack.strategy = parse_strategy(s);
    if (a.contains("target_arm")) cfg.attack.target_arm = read_arm(a, "target_arm");
    read(a, "delta0", cfg.attack.delta0);
    read(a, "delta", cfg.attack.delta);
    read(a, "delta_min", cfg.attack.delta_min);
    if (a.contains("margin")) {
      double m = 0.0;
      read(a, "margin", m);
      cfg.attack.margin = m;
    }
    if (a.contains("scope")) {
      std::string scope;
      read(a, "scope", scope);
      require(scope == "single" || scope == "all", Errc::ConfigError,
              "attack.scope must be 'single' or 'all'");
      cfg.attack.scope = scope == "all" ? AttackScope::All : AttackScope::Single;
    }
    if (a.contains("attacked_agent")) {
      long long m = 0;
      read(a, "attacked_agent", m);
      require(m >= 1, Errc::ConfigError, "attacked_agent is a 1-based agent id");
      cfg.attack.attacked_agent = static_cast<AgentId>(m - 1);
    }
    read(a, "use_aas", cfg.attack.use_aas);
  }
  read(j, "horizon", cfg.horizon);
  read(j, "repetitions", cfg.repetitions);
  read(j, "base_seed", cfg.base_seed);
  read(j, "stride", cfg.stride);
  read(j, "threads", cfg.threads);
  read(j, "bounds", cfg.bounds);
  read(j, "debug_invariants", cfg.debug_invariants);
  read(j, "output", cfg.output);
}

}  // namespace detail

/// Builds the instance a repetition runs on.
inline BanditInstance make_instance(const ExperimentConfig& cfg, std::uint64_t run_seed) {
  return std::visit(
      [&](const auto& src) -> BanditInstance {
        using S = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<S, FixtureSource>) {
          return fixture(src.name);
        } else if constexpr (std::is_same_v<S, RandomSource>) {
          RngStream rng(src.resample ? run_seed : src.seed, src.resample ? 7 : 0);
          return random_instance(src.params, rng);
        } else {
          return build_instance(src.means, src.sigma, src.b, src.arm_sets);
        }
      },
      cfg.instance);
}

inline bool instance_resampled(const ExperimentConfig& cfg) {
  const auto* r = std::get_if<RandomSource>(&cfg.instance);
  return r && r->resample;
}

/// Field-level and cross-field checks. Throws ConfigError.
inline void validate(const ExperimentConfig& cfg) {
  require(cfg.horizon >= 1, Errc::ConfigError, "horizon must be at least 1");
  require(cfg.repetitions >= 1, Errc::ConfigError, "repetitions must be at least 1");
  require(cfg.stride >= 1, Errc::ConfigError, "stride must be at least 1");
  require(cfg.alpha > 0.0, Errc::ConfigError, "alpha must be positive");
  require(cfg.beta_phase > 1.0, Errc::ConfigError, "beta_phase must exceed 1");
  try {
    cfg.attack.validate();
  } catch (const Error& e) {
    throw Error(Errc::ConfigError, e.what());
  }

  BanditInstance inst = [&] {
    try {
      return make_instance(cfg, cfg.base_seed);
    } catch (const Error& e) {
      throw Error(Errc::ConfigError, std::string("instance: ") + e.what());
    }
  }();
  const auto s = cfg.attack.strategy;
  const auto K = inst.num_arms();
  if (cfg.attack.target_arm)
    require(*cfg.attack.target_arm < K, Errc::ConfigError, "target_arm out of range");
  require(cfg.attack.attacked_agent < inst.num_agents(), Errc::ConfigError,
          "attacked_agent out of range");
  switch (cfg.algorithm) {
    case Algorithm::Tcom:
      require(inst.homogeneous() && !instance_resampled(cfg), Errc::ConfigError,
              "tcom requires a homogeneous instance");
      require(s == Strategy::None || s == Strategy::HomoTcom, Errc::ConfigError,
              "tcom supports strategies none and homo_tcom");
      break;
    case Algorithm::Dpe2:
      require(inst.homogeneous() && !instance_resampled(cfg), Errc::ConfigError,
              "dpe2 requires a homogeneous instance");
      require(s == Strategy::None || s == Strategy::HomoDpe2, Errc::ConfigError,
              "dpe2 supports strategies none and homo_dpe2");
      break;
    case Algorithm::CoUcb:
      require(s != Strategy::HomoTcom && s != Strategy::HomoDpe2, Errc::ConfigError,
              std::string(to_string(s)) + " requires its own victim algorithm");
      break;
  }
  if (s == Strategy::OracleAttack || s == Strategy::Lta)
    require(!inst.homogeneous(), Errc::ConfigError,
            std::string(to_string(s)) + " requires a heterogeneous instance");
  if (s == Strategy::Lta) {
    const auto agents = all_agents(inst.num_agents());
    require(accessibility_rate(inst, agents) > 0.0, Errc::ConfigError,
            "lta needs every arm to be reachable (accessibility rate c > 0)");
  }
  if (s == Strategy::OracleAttack || s == Strategy::Lta)
    require(cfg.alpha > 2.0 || !cfg.bounds, Errc::ConfigError,
            "the oracle-attack bound assumes alpha > 2 (set bounds=false to skip)");
}

/// Parses a JSON config. A "preset" key is expanded first; the remaining
/// keys are merged over it.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  nlohmann::json merged = nlohmann::json::object();
  if (j.is_object() && j.contains("preset")) {
    require(j.at("preset").is_string(), Errc::ConfigError, "preset must be a string");
    merged = detail::preset_json(j.at("preset").get<std::string>());
  }
  merged.merge_patch(j);
  merged.erase("preset");
  detail::apply_json(merged, cfg);
  return cfg;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, std::string("malformed config: ") + e.what());
  }
  return parse_config(j);
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::IoError, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Sets a numeric field by name (used by sweeps and CLI overrides).
inline void set_numeric_field(ExperimentConfig& cfg, std::string_view field, double v) {
  auto as_count = [&](const char* name) {
    require(v >= 0.0 && std::floor(v) == v, Errc::ConfigError,
            std::string(name) + " must be a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  };
  if (field == "horizon" || field == "T") cfg.horizon = as_count("horizon");
  else if (field == "repetitions") cfg.repetitions = as_count("repetitions");
  else if (field == "base_seed") cfg.base_seed = as_count("base_seed");
  else if (field == "stride") cfg.stride = as_count("stride");
  else if (field == "alpha") cfg.alpha = v;
  else if (field == "beta_phase") cfg.beta_phase = v;
  else if (field == "delta0") cfg.attack.delta0 = v;
  else if (field == "delta") cfg.attack.delta = v;
  else if (field == "delta_min") cfg.attack.delta_min = v;
  else if (field == "margin") cfg.attack.margin = v;
  else if (field == "target_arm") {
    require(v >= 1.0, Errc::ConfigError, "target_arm is 1-based");
    cfg.attack.target_arm = as_count("target_arm") - 1;
  } else {
    throw Error(Errc::ConfigError, "field '" + std::string(field) + "' is not sweepable");
  }
}

// --------------------------------------------------------------- simulation

inline ArmId configured_target(const ExperimentConfig& cfg, const BanditInstance& inst) {
  return cfg.attack.target_arm.value_or(inst.worst_arm());
}

/// Bound kind attached to a run, if any.
inline std::optional<BoundKind> bound_kind(const ExperimentConfig& cfg,
                                           const BanditInstance& inst) {
  switch (cfg.attack.strategy) {
    case Strategy::HomoCoUcb:
      if (inst.homogeneous()) return BoundKind::HomoCoUcb;
      return std::nullopt;
    case Strategy::HomoTcom: return BoundKind::HomoTcom;
    case Strategy::HomoDpe2: return BoundKind::HomoDpe2;
    case Strategy::OracleAttack: return BoundKind::OracleAttack;
    case Strategy::Lta: return BoundKind::Lta;
    case Strategy::None: return std::nullopt;
  }
  return std::nullopt;
}

/// Horizon-independent inputs of the closed-form bound for this config. The
/// heterogeneous bounds use the plan built from the true means.
inline BoundParams bound_params(const ExperimentConfig& cfg, const BanditInstance& inst,
                                BoundKind kind) {
  BoundParams p;
  const std::size_t K = inst.num_arms();
  p.num_arms = K;
  p.num_agents = inst.num_agents();
  p.alpha = cfg.alpha;
  p.delta0 = cfg.attack.delta0;
  p.delta = cfg.attack.delta;
  p.sigma = inst.sigma();
  p.b = inst.bound();
  p.beta_phase = cfg.beta_phase;
  p.delta_min = inst.min_gap();
  if (kind == BoundKind::OracleAttack || kind == BoundKind::Lta) {
    const auto plan = make_plan(ArmView(inst), cfg.attack.use_aas);
    std::vector<double> gaps;
    std::vector<double> sizes;
    for (ArmId k : plan.attacked_arms) {
      gaps.push_back(inst.gap(k, inst.worst_arm()));
      std::size_t n = 0;
      for (AgentId m : plan.affected) n += local_optimal(inst, m) == k ? 1 : 0;
      sizes.push_back(static_cast<double>(n));
    }
    p.gaps = gaps;
    p.group_sizes = sizes;
    p.t0 = static_cast<double>(compute_T0(inst, plan, cfg.alpha, cfg.attack.delta0));
    p.access_rate = accessibility_rate(inst, all_agents(inst.num_agents()));
    p.gap_best_worst = inst.gap(0, inst.worst_arm());
  } else {
    const ArmId target = configured_target(cfg, inst);
    std::vector<double> gaps;
    for (ArmId k = 0; k < K; ++k)
      if (k != target) gaps.push_back(inst.gap(k, target));
    p.gaps = gaps;
    p.gap_best_worst = inst.gap(0, target);
  }
  return p;
}

namespace detail {

inline std::uint64_t run_seed(const ExperimentConfig& cfg, std::size_t i) {
  return cfg.base_seed ^ static_cast<std::uint64_t>(i);
}

}  // namespace detail

/// One sealed, single-threaded repetition.
inline RunResult simulate(const ExperimentConfig& cfg, std::size_t run_id) {
  const std::uint64_t seed = detail::run_seed(cfg, run_id);
  const BanditInstance inst = make_instance(cfg, seed);
  const std::size_t K = inst.num_arms();
  const std::size_t M = inst.num_agents();
  const ArmId target = configured_target(cfg, inst);
  const RegretMode mode =
      inst.homogeneous() ? RegretMode::Homogeneous : RegretMode::Heterogeneous;

  RunResult out;
  out.run_id = run_id;
  out.seed = seed;
  RunRecorder recorder(inst, mode, target, time_grid(cfg.horizon, cfg.stride));
  AttackLedger ledger(K, M);
  RngStream rng(seed, 1);
  const bool dbg = cfg.debug_invariants;
  const auto strategy = cfg.attack.strategy;

  auto finish_round = [&](const RoundRecord& rec, std::size_t affected) {
    ledger.record(rec);
    recorder.record(rec, affected, out);
  };

  if (cfg.algorithm == Algorithm::CoUcb) {
    SharedStats stats(K);
    auto loop = [&](auto& hook, auto&& verify, auto&& affected) {
      for (Round t = 1; t <= cfg.horizon; ++t) {
        const RoundRecord rec = coucb_round(stats, inst, cfg.alpha, hook, rng);
        if (dbg)
          if (auto v = verify(stats, rec)) throw Error(Errc::InvariantViolation, *v);
        finish_round(rec, affected());
      }
    };
    auto none = [](const SharedStats&, const RoundRecord&) -> std::optional<std::string> {
      return std::nullopt;
    };
    switch (strategy) {
      case Strategy::None: {
        NoAttack hook;
        loop(hook, none, [] { return std::size_t{0}; });
        break;
      }
      case Strategy::HomoCoUcb: {
        HomoCoUcbAttacker hook(cfg.attack, K);
        loop(
            hook, [&](const SharedStats& s, const RoundRecord& r) { return hook.verify(s, r); },
            [&] { return M; });
        out.diag.affected = all_agents(M);
        break;
      }
      case Strategy::OracleAttack: {
        OracleAttacker hook(make_plan(ArmView(inst), cfg.attack.use_aas), cfg.attack);
        const std::size_t d0 = hook.plan().affected.size();
        loop(
            hook, [&](const SharedStats& s, const RoundRecord& r) { return hook.verify(s, r); },
            [&] { return d0; });
        out.diag.affected = hook.plan().affected;
        out.diag.attacked_arms = hook.plan().attacked_arms;
        out.diag.target_agents = hook.plan().target_agents;
        if (cfg.alpha > 2.0)
          out.diag.t0 = compute_T0(inst, hook.plan(), cfg.alpha, cfg.attack.delta0);
        break;
      }
      case Strategy::Lta: {
        LtaAttacker hook(inst, cfg.attack, cfg.alpha);
        hook.enable_checks(dbg);
        loop(
            hook, [&](const SharedStats& s, const RoundRecord& r) { return hook.verify(s, r); },
            [&] { return hook.oracle() ? hook.oracle()->plan().affected.size() : 0; });
        if (hook.oracle()) {
          const auto& plan = hook.oracle()->plan();
          out.diag.affected = plan.affected;
          out.diag.attacked_arms = plan.attacked_arms;
          out.diag.target_agents = plan.target_agents;
          out.diag.learning_rounds = hook.state().learning_rounds;
          out.diag.learned_ranking = hook.state().learned_ranking;
        }
        out.diag.access_rate = accessibility_rate(inst, all_agents(M));
        if (cfg.alpha > 2.0)
          out.diag.t0 = compute_T0(inst, make_plan(ArmView(inst), cfg.attack.use_aas),
                                   cfg.alpha, cfg.attack.delta0);
        break;
      }
      default:
        throw Error(Errc::ConfigError, "strategy not supported by coucb");
    }
  } else if (cfg.algorithm == Algorithm::Tcom) {
    TcomState st(inst, cfg.beta_phase);
    TcomAttacker attacker(cfg.attack, K);
    const bool attack = strategy == Strategy::HomoTcom;
    for (Round t = 1; t <= cfg.horizon; ++t) {
      RoundRecord rec = attack ? tcom_round(st, inst, attacker, rng)
                               : tcom_round(st, inst, NoAttack{}, rng);
      if (dbg && attack)
        if (auto v = attacker.verify(st, rec)) throw Error(Errc::InvariantViolation, *v);
      finish_round(rec, attack ? M : 0);
    }
    if (attack) out.diag.affected = all_agents(M);
    out.diag.phases = st.phases_completed;
  } else {
    Dpe2State st(inst, cfg.alpha);
    Dpe2Attacker attacker(cfg.attack, K);
    const bool attack = strategy == Strategy::HomoDpe2;
    for (Round t = 1; t <= cfg.horizon; ++t) {
      RoundRecord rec = attack ? dpe2_round(st, inst, attacker, rng)
                               : dpe2_round(st, inst, NoAttack{}, rng);
      if (dbg && attack)
        if (auto v = attacker.verify(st, rec)) throw Error(Errc::InvariantViolation, *v);
      finish_round(rec, attack ? M : 0);
    }
    if (attack) out.diag.affected = all_agents(M);
    out.diag.phases = st.updates;
  }

  recorder.finish(out);
  out.diag.per_arm_cost = ledger.per_arm_cost();
  out.diag.ledger_agents = ledger.attacked_agents();
  if (dbg)
    require(std::abs(ledger.total_cost() - out.final_cost) <=
                1e-9 * std::max(1.0, out.final_cost),
            Errc::InvariantViolation, "ledger cost differs from recorded cost");

  const auto kind = cfg.bounds ? bound_kind(cfg, inst) : std::nullopt;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::pair<BoundKind, BoundParams>> bound;
  if (kind) bound.emplace(*kind, bound_params(cfg, inst, *kind));
  for (Round t : out.grid) {
    if (!bound) {
      out.bound_regret_lb.push_back(nan);
      out.bound_cost_ub.push_back(nan);
      continue;
    }
    bound->second.horizon = static_cast<double>(t);
    const auto v = theoretical_cost_bound(bound->first, bound->second);
    out.bound_regret_lb.push_back(v.regret_lb);
    out.bound_cost_ub.push_back(v.cost_ub);
  }
  return out;
}

/// Runs every repetition, in parallel when threads != 1. Results are ordered
/// by repetition index regardless of scheduling.
inline std::vector<RunResult> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<RunResult> results(cfg.repetitions);
  std::size_t n_threads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  n_threads = std::max<std::size_t>(1, std::min(n_threads, cfg.repetitions));
  if (n_threads == 1) {
    for (std::size_t i = 0; i < cfg.repetitions; ++i) results[i] = simulate(cfg, i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < n_threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cfg.repetitions; i = next++) {
        try {
          results[i] = simulate(cfg, i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

// ---------------------------------------------------------------------- CSV

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline constexpr std::string_view kCsvHeader =
    "run_id,seed,t,regret,cost,target_pulls,affected_agent_count,"
    "per_agent_optimal_fraction,bound_regret_lb,bound_cost_ub";

inline void write_csv(std::ostream& os, const std::vector<RunResult>& results) {
  os << kCsvHeader << '\n';
  for (const auto& r : results)
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      os << r.run_id << ',' << r.seed << ',' << r.grid[i] << ','
         << format_double(r.regret[i]) << ',' << format_double(r.cost[i]) << ','
         << r.target_pulls[i] << ',' << r.affected_count[i] << ',';
      for (std::size_t m = 0; m < r.optimal_fraction[i].size(); ++m)
        os << (m ? ";" : "") << format_double(r.optimal_fraction[i][m]);
      os << ',' << format_double(r.bound_regret_lb[i]) << ','
         << format_double(r.bound_cost_ub[i]) << '\n';
    }
}

inline void export_csv(const std::vector<RunResult>& results,
                       const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), Errc::IoError, "cannot write " + path.string());
  write_csv(out, results);
  out.flush();
  require(static_cast<bool>(out), Errc::IoError, "write failed for " + path.string());
}

// -------------------------------------------------------------------- sweep

struct SweepRow {
  double value = 0.0;
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  Round horizon = 0;
  double regret = 0.0;
  double cost = 0.0;
  double target_fraction = 0.0;
  std::size_t affected = 0;
};

inline std::vector<SweepRow> sweep(const ExperimentConfig& base, std::string_view axis,
                                   const std::vector<double>& values) {
  std::vector<SweepRow> rows;
  for (double v : values) {
    ExperimentConfig cfg = base;
    set_numeric_field(cfg, axis, v);
    for (const auto& r : run_experiment(cfg))
      rows.push_back({v, r.run_id, r.seed, r.grid.back(), r.final_regret, r.final_cost,
                      r.target_fraction, r.affected_count.back()});
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& os, std::string_view axis,
                            const std::vector<SweepRow>& rows) {
  os << axis << ",run_id,seed,T,regret,cost,cost_per_round,target_fraction,"
                "affected_agent_count\n";
  for (const auto& r : rows)
    os << format_double(r.value) << ',' << r.run_id << ',' << r.seed << ',' << r.horizon
       << ',' << format_double(r.regret) << ',' << format_double(r.cost) << ','
       << format_double(r.cost / static_cast<double>(r.horizon)) << ','
       << format_double(r.target_fraction) << ',' << r.affected << '\n';
}

}  // namespace cmab
