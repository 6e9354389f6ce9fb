// Full-scale acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. An optional argument names a directory that
// receives the CSVs of the homogeneous and heterogeneous attack runs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cmab/cmab.hpp"

using namespace cmab;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig config(const std::string& text) {
  auto cfg = parse_config_text(text);
  cfg.threads = 0;
  return cfg;
}

std::size_t grid_index(const RunResult& r, Round t) {
  const auto it = std::find(r.grid.begin(), r.grid.end(), t);
  require(it != r.grid.end(), Errc::InvalidArgument, "grid lacks t=" + std::to_string(t));
  return static_cast<std::size_t>(it - r.grid.begin());
}

double mean_cost_rate(const std::vector<RunResult>& rs, Round t) {
  double s = 0.0;
  for (const auto& r : rs) s += r.cost[grid_index(r, t)] / static_cast<double>(t);
  return s / static_cast<double>(rs.size());
}

bool strictly_decreasing_rate(const std::vector<RunResult>& rs, std::string& detail) {
  const double a = mean_cost_rate(rs, 25000), b = mean_cost_rate(rs, 50000),
               c = mean_cost_rate(rs, 100000);
  detail = fmt("C/t = %.4f, %.4f, %.4f at t = 25k, 50k, 100k", a, b, c);
  return a > b && b > c;
}

double bound_at_horizon(const ExperimentConfig& cfg, const BanditInstance& inst,
                        BoundValues* out = nullptr) {
  auto p = bound_params(cfg, inst, *bound_kind(cfg, inst));
  p.horizon = static_cast<double>(cfg.horizon);
  const auto v = theoretical_cost_bound(*bound_kind(cfg, inst), p);
  if (out) *out = v;
  return v.cost_ub;
}

std::string csv_of(const std::vector<RunResult>& rs) {
  std::ostringstream os;
  write_csv(os, rs);
  return os.str();
}

const char* kHomo = R"({"preset": "paper-appendix-homo"})";
const char* kHetero = R"({"preset": "paper-s5-hetero"})";

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out_dir = argc > 1 ? argv[1] : "";

  // 1 and 2: homogeneous CO-UCB attack.
  const auto homo_cfg = config(kHomo);
  const auto homo_inst = make_instance(homo_cfg, homo_cfg.base_seed);
  const auto homo = run_experiment(homo_cfg);
  {
    BoundValues v;
    bound_at_horizon(homo_cfg, homo_inst, &v);
    const double MT = static_cast<double>(homo_inst.num_agents() * homo_cfg.horizon);
    const double need_pulls = MT - v.pulls_bound;
    int pulls_ok = 0, cost_ok = 0;
    double worst_pulls = MT, worst_cost = 0.0;
    for (const auto& r : homo) {
      const double pulls = static_cast<double>(r.target_pulls.back());
      pulls_ok += pulls >= need_pulls;
      cost_ok += r.final_cost <= v.cost_ub;
      worst_pulls = std::min(worst_pulls, pulls);
      worst_cost = std::max(worst_cost, r.final_cost);
    }
    report(1, pulls_ok >= 9 && cost_ok >= 9,
           fmt("target pulls >= %.0f in %d/10 (min %.0f); C(T) <= %.1f in %d/10 (max %.1f)",
               need_pulls, pulls_ok, worst_pulls, v.cost_ub, cost_ok, worst_cost));
    std::string detail;
    report(2, strictly_decreasing_rate(homo, detail), detail);
  }

  // 3: no-attack baseline on the same instance.
  {
    const auto cfg = config(R"({"preset": "paper-appendix-homo", "attack": {"strategy": "none"}})");
    const auto rs = run_experiment(cfg);
    const ArmId worst = homo_inst.worst_arm();
    double max_share = 0.0;
    int ok = 0;
    for (const auto& r : rs) {
      const double share = static_cast<double>(r.arm_pulls[worst]) /
                           static_cast<double>(homo_inst.num_agents() * cfg.horizon);
      max_share = std::max(max_share, share);
      ok += share <= 0.01;
    }
    report(3, ok == static_cast<int>(rs.size()),
           fmt("worst-arm share <= 1%% in %d/%zu runs (max %.5f%%)", ok, rs.size(),
               100.0 * max_share));
  }

  // 4: non-vanishing per-round cost on the two-agent illustrations.
  {
    bool ok = true;
    std::string detail;
    for (const char* name : {"fig1a", "fig1b"}) {
      const auto cfg = config(std::string(R"({"instance": {"fixture": ")") + name +
                              R"("}, "algorithm": {"alpha": 4.0},
          "attack": {"strategy": "homo_coucb", "target_arm": 3, "scope": "all"}})");
      const auto rs = run_experiment(cfg);
      const double early = mean_cost_rate(rs, 10000);
      const double late = mean_cost_rate(rs, 100000);
      ok = ok && late >= 0.5 * early;
      detail += fmt("%s C/t %.3f -> %.3f; ", name, early, late);
    }
    report(4, ok, detail + "required ratio >= 0.5");
  }

  // 5: AAS approximation ratio and conflict freedom on small random instances.
  {
    const double ratio = 1.0 - 1.0 / std::exp(1.0);
    int approx_ok = 0, conflict_ok = 0;
    std::string first_miss;
    for (std::uint64_t i = 0; i < 200; ++i) {
      RngStream rng(0xAA5 + i, 11);
      RandomInstanceParams p;
      p.num_arms = 3 + i % 4;
      p.num_agents = 2 + (i / 4) % 7;
      p.set_size = 2 + (i / 28) % (p.num_arms - 2);
      const auto inst = random_instance(p, rng);
      const auto sel = aas(inst);
      const auto best = brute_force_max_group(inst);
      if (static_cast<double>(sel.affected.size()) >= ratio * static_cast<double>(best))
        ++approx_ok;
      else if (first_miss.empty())
        first_miss = fmt(" (instance %llu: |D0|=%zu, optimum %zu)",
                         static_cast<unsigned long long>(i), sel.affected.size(), best);
      bool free = true;
      for (std::size_t a = 0; a < sel.affected.size(); ++a)
        for (std::size_t b = a + 1; b < sel.affected.size(); ++b)
          free = free && !is_conflict(inst, sel.affected[a], sel.affected[b]);
      conflict_ok += free;
    }
    report(5, approx_ok == 200 && conflict_ok == 200,
           fmt("ratio held in %d/200, conflict-free in %d/200", approx_ok, conflict_ok) +
               first_miss);
  }

  // 6: Oracle Attack.
  const auto het_cfg = config(kHetero);
  const auto het_inst = make_instance(het_cfg, het_cfg.base_seed);
  const auto het = run_experiment(het_cfg);
  {
    BoundValues v;
    bound_at_horizon(het_cfg, het_inst, &v);
    int pulls_ok = 0, cost_ok = 0, outside_ok = 0;
    double max_pulls = 0.0, max_cost = 0.0;
    for (const auto& r : het) {
      bool all = true;
      for (AgentId m : r.diag.affected) {
        const double n = static_cast<double>(r.agent_optimal_pulls[m]);
        max_pulls = std::max(max_pulls, n);
        all = all && n <= v.pulls_bound;
      }
      pulls_ok += all;
      cost_ok += r.final_cost <= v.cost_ub;
      max_cost = std::max(max_cost, r.final_cost);
      bool zero = true;
      for (ArmId k = 0; k < het_inst.num_arms(); ++k)
        if (!std::binary_search(r.diag.attacked_arms.begin(), r.diag.attacked_arms.end(), k))
          zero = zero && r.diag.per_arm_cost[k] == 0.0;
      outside_ok += zero;
    }
    report(6, pulls_ok >= 9 && cost_ok == 10 && outside_ok == 10,
           fmt("|D0|=%zu, T0=%llu; local-optimal pulls <= %.0f in %d/10 (max %.0f); "
               "C(T) <= %.1f in %d/10 (max %.1f); zero cost outside K0 in %d/10",
               het.front().diag.affected.size(),
               static_cast<unsigned long long>(het.front().diag.t0.value_or(0)),
               v.pulls_bound, pulls_ok, max_pulls, v.cost_ub, cost_ok, max_cost, outside_ok));
  }

  // 7: AAS ablation.
  {
    const auto cfg = config(R"({"preset": "paper-s5-hetero", "attack": {"use_aas": false}})");
    const auto rs = run_experiment(cfg);
    auto mean_regret = [](const std::vector<RunResult>& v) {
      double s = 0.0;
      for (const auto& r : v) s += r.final_regret;
      return s / static_cast<double>(v.size());
    };
    const double with = mean_regret(het), without = mean_regret(rs);
    report(7, with >= without,
           fmt("mean R(T) with AAS %.1f, without AAS %.1f", with, without));
  }

  // 8: Learning-Then-Attack.
  {
    const auto cfg = config(R"({"preset": "paper-s5-hetero", "attack": {"strategy": "lta"}})");
    const auto rs = run_experiment(cfg);
    const auto inst = make_instance(cfg, cfg.base_seed);
    BoundValues v;
    bound_at_horizon(cfg, inst, &v);
    const Count L = lta_threshold_L(inst.num_arms(), cfg.attack.delta, cfg.attack.delta_min);
    std::vector<ArmId> truth(inst.num_arms());
    std::iota(truth.begin(), truth.end(), ArmId{0});
    int stage_ok = 0, rank_ok = 0, bound_ok = 0;
    Round max_rounds = 0;
    double c = 0.0, limit = 0.0, max_cost = 0.0;
    for (const auto& r : rs) {
      c = r.diag.access_rate.value_or(0.0);
      limit = std::ceil(static_cast<double>(inst.num_arms() * L) /
                        (c * static_cast<double>(inst.num_agents())));
      const Round rounds = r.diag.learning_rounds.value_or(cfg.horizon + 1);
      max_rounds = std::max(max_rounds, rounds);
      stage_ok += r.diag.learning_rounds && static_cast<double>(rounds) <= limit;
      rank_ok += r.diag.learned_ranking == truth;
      bool ok = r.final_cost <= v.cost_ub;
      for (AgentId m : r.diag.affected)
        ok = ok && static_cast<double>(r.agent_optimal_pulls[m]) <=
                       static_cast<double>(rounds) + v.pulls_bound;
      bound_ok += ok;
      max_cost = std::max(max_cost, r.final_cost);
    }
    report(8, stage_ok == 10 && rank_ok >= 8 && bound_ok >= 8,
           fmt("L=%llu, c=%.2f; stage 1 <= %.0f rounds in %d/10 (max %llu); ranking exact "
               "in %d/10; pulls and C(T) <= %.1f in %d/10 (max C %.1f)",
               static_cast<unsigned long long>(L), c, limit, stage_ok,
               static_cast<unsigned long long>(max_rounds), rank_ok, v.cost_ub, bound_ok,
               max_cost));
  }

  // 9: phase-based and leader-follower victims.
  {
    const auto tcfg = config(R"({"preset": "paper-appendix-homo", "algorithm": {"name": "tcom"},
                                 "attack": {"strategy": "homo_tcom"}})");
    const auto trs = run_experiment(tcfg);
    BoundValues tv;
    bound_at_horizon(tcfg, homo_inst, &tv);
    const double MT = static_cast<double>(homo_inst.num_agents() * tcfg.horizon);
    int t_ok = 0;
    for (const auto& r : trs) t_ok += static_cast<double>(r.target_pulls.back()) >= MT - tv.pulls_bound;
    std::string rate;
    const bool t_rate = strictly_decreasing_rate(trs, rate);

    const auto dcfg = config(R"({"preset": "paper-appendix-homo", "algorithm": {"name": "dpe2"},
                                 "attack": {"strategy": "homo_dpe2"}})");
    const auto drs = run_experiment(dcfg);
    BoundValues dv;
    bound_at_horizon(dcfg, homo_inst, &dv);
    int d_ok = 0, leader_ok = 0;
    for (const auto& r : drs) {
      d_ok += static_cast<double>(r.target_pulls.back()) >= MT - dv.pulls_bound;
      leader_ok += r.diag.ledger_agents == std::vector<AgentId>{0};
    }
    report(9, t_ok >= 9 && t_rate && d_ok >= 9 && leader_ok == 10,
           fmt("TCOM target pulls >= %.0f in %d/10, ", MT - tv.pulls_bound, t_ok) + rate +
               fmt("; DPE2 target pulls >= %.0f in %d/10, leader-only ledger in %d/10",
                   MT - dv.pulls_bound, d_ok, leader_ok));
  }

  // 10: determinism across reruns and thread counts.
  {
    auto cfg = het_cfg;
    cfg.threads = 1;
    const auto a = csv_of(run_experiment(cfg));
    cfg.threads = 4;
    const auto b = csv_of(run_experiment(cfg));
    const auto c = csv_of(het);
    report(10, a == b && a == c && !a.empty(),
           fmt("%zu-byte CSV identical across 1-thread, 4-thread and default runs", a.size()));
  }

  // 11: numeric oracles.
  {
    SharedStats homo_before(2);
    homo_before.add(0, 1.0);
    homo_before.add(1, 0.5);
    AttackConfig two;
    two.target_arm = 1;
    const double homo_gamma = homo_coucb_gamma(homo_before, 0, 1.0, 1, two, 2);

    SharedStats oa_before(3);
    oa_before.merge(0, 2, 1.8);
    oa_before.merge(1, 4, 3.2);
    oa_before.merge(2, 4, 2.4);
    AttackPlan plan;
    plan.attacked_arms = {0};
    plan.target_agents = {0};
    const double oa = oa_gamma(oa_before, 0, 0, 0.7, 1, plan, AttackConfig{});

    const double beta1 = confidence_radius(1, 2, 0.1);
    const Count L = lta_threshold_L(20, 0.1, 0.1);
    const Round t0 = t0_scan(100.0);
    const bool ok = std::abs(beta1 - 1.44682) <= 1e-5 && L == 1199 &&
                    std::abs(homo_gamma - 6.98728) <= 1e-4 && std::abs(oa - 6.75682) <= 1e-4 &&
                    t0 == 648;
    report(11, ok,
           fmt("beta(1)=%.6f, L=%llu, homo gamma=%.5f, OA gamma=%.5f, T0 scan(100)=%llu",
               beta1, static_cast<unsigned long long>(L), homo_gamma, oa,
               static_cast<unsigned long long>(t0)));
  }

  if (!out_dir.empty()) {
    export_csv(homo, out_dir / "homo_coucb.csv");
    export_csv(het, out_dir / "hetero_oa.csv");
  }
  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
