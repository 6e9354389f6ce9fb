#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "cmab/algo.hpp"
#include "cmab/core.hpp"
#include "cmab/env.hpp"
#include "cmab/ledger.hpp"

namespace cmab {

enum class RegretMode { Homogeneous, Heterogeneous };

/// Arms pulled per round, one entry per agent.
using PullHistory = std::vector<std::vector<ArmId>>;

/// Per-round benchmark reward: M mu(1), or the sum of local optima.
inline double benchmark_reward(const BanditInstance& inst, RegretMode mode) {
  require(mode == RegretMode::Heterogeneous || inst.homogeneous(), Errc::ModeMismatch,
          "a heterogeneous instance needs the heterogeneous benchmark");
  double v = 0.0;
  for (AgentId m = 0; m < inst.num_agents(); ++m)
    v += mode == RegretMode::Homogeneous ? inst.mean(0) : inst.mean(local_optimal(inst, m));
  return v;
}

inline double round_regret(const BanditInstance& inst, std::span<const ArmId> arms,
                           RegretMode mode) {
  double got = 0.0;
  for (ArmId k : arms) got += inst.mean(k);
  return benchmark_reward(inst, mode) - got;
}

/// Cumulative expected regret R(1..T).
inline std::vector<double> regret(const BanditInstance& inst, const PullHistory& history,
                                  RegretMode mode) {
  std::vector<double> out;
  out.reserve(history.size());
  double acc = 0.0;
  for (const auto& arms : history) {
    require(arms.size() == inst.num_agents(), Errc::InvalidArgument,
            "history round has the wrong number of agents");
    acc += round_regret(inst, arms, mode);
    out.push_back(acc);
  }
  return out;
}

inline double per_agent_optimal_fraction(const BanditInstance& inst,
                                         const PullHistory& history, AgentId agent) {
  require(agent < inst.num_agents(), Errc::AgentOutOfRange, "agent out of range");
  if (history.empty()) return 0.0;
  const ArmId best = local_optimal(inst, agent);
  std::size_t hits = 0;
  for (const auto& arms : history) hits += arms.at(agent) == best ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(history.size());
}

/// Running sum of |gamma|.
inline std::vector<double> cumulative_cost(std::span<const double> gammas) {
  std::vector<double> out;
  out.reserve(gammas.size());
  double acc = 0.0;
  for (double g : gammas) out.push_back(acc += std::abs(g));
  return out;
}

/// Per-round cumulative cost over rounds 1..horizon.
inline std::vector<double> cumulative_cost(const AttackLedger& ledger, Round horizon) {
  std::vector<double> per_round(horizon, 0.0);
  for (const auto& e : ledger.entries()) {
    require(e.t >= 1 && e.t <= horizon, Errc::InvalidArgument, "ledger entry past horizon");
    per_round[e.t - 1] += std::abs(e.gamma);
  }
  double acc = 0.0;
  for (double& v : per_round) v = acc += v;
  return per_round;
}

/// Sampling grid: round 1, every multiple of `stride`, and the horizon.
inline std::vector<Round> time_grid(Round horizon, Round stride) {
  require(horizon >= 1 && stride >= 1, Errc::InvalidArgument, "bad grid parameters");
  std::vector<Round> g{1};
  for (Round t = stride; t <= horizon; t += stride)
    if (t > 1) g.push_back(t);
  if (g.back() != horizon) g.push_back(horizon);
  return g;
}

struct RunDiagnostics {
  std::vector<AgentId> affected;        // D0 (or all agents for homogeneous attacks)
  std::vector<ArmId> attacked_arms;     // K0
  std::vector<AgentId> target_agents;   // G0
  std::vector<double> per_arm_cost;
  std::vector<AgentId> ledger_agents;   // agents with any nonzero entry
  std::optional<Round> learning_rounds;
  std::vector<ArmId> learned_ranking;
  std::optional<Round> t0;
  std::optional<double> access_rate;
  std::size_t phases = 0;  // TCOM phases or DPE2 updates
};

/// Series and finals of one seeded simulation.
struct RunResult {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  std::vector<Round> grid;
  std::vector<double> regret;
  std::vector<double> cost;
  std::vector<Count> target_pulls;
  std::vector<std::size_t> affected_count;
  std::vector<std::vector<double>> optimal_fraction;  // [grid point][agent]
  std::vector<double> bound_regret_lb;
  std::vector<double> bound_cost_ub;

  std::vector<Count> arm_pulls;
  std::vector<Count> agent_optimal_pulls;
  std::vector<Count> agent_target_pulls;
  double final_regret = 0.0;
  double final_cost = 0.0;
  double target_fraction = 0.0;
  RunDiagnostics diag;
};

/// Streaming accumulator that samples the series on a grid.
class RunRecorder {
 public:
  RunRecorder(const BanditInstance& inst, RegretMode mode, ArmId target,
              std::vector<Round> grid)
      : inst_(&inst),
        target_(target),
        benchmark_(benchmark_reward(inst, mode)),
        grid_(std::move(grid)),
        arm_pulls_(inst.num_arms(), 0),
        opt_(inst.num_agents(), 0),
        tgt_(inst.num_agents(), 0) {
    for (AgentId m = 0; m < inst.num_agents(); ++m) local_opt_.push_back(local_optimal(inst, m));
  }

  /// Feed one round; `affected` is the current affected-agent count.
  void record(const RoundRecord& rec, std::size_t affected, RunResult& out) {
    ++t_;
    double got = 0.0;
    for (AgentId m = 0; m < rec.arms.size(); ++m) {
      const ArmId k = rec.arms[m];
      got += inst_->mean(k);
      ++arm_pulls_[k];
      if (k == local_opt_[m]) ++opt_[m];
      if (k == target_) ++tgt_[m];
      cost_ += std::abs(rec.gamma[m]);
    }
    regret_ += benchmark_ - got;
    if (next_ < grid_.size() && grid_[next_] == t_) {
      out.grid.push_back(t_);
      out.regret.push_back(regret_);
      out.cost.push_back(cost_);
      out.target_pulls.push_back(arm_pulls_[target_]);
      out.affected_count.push_back(affected);
      std::vector<double> frac(opt_.size());
      for (std::size_t m = 0; m < opt_.size(); ++m)
        frac[m] = static_cast<double>(opt_[m]) / static_cast<double>(t_);
      out.optimal_fraction.push_back(std::move(frac));
      ++next_;
    }
  }

  void finish(RunResult& out) const {
    out.arm_pulls = arm_pulls_;
    out.agent_optimal_pulls = opt_;
    out.agent_target_pulls = tgt_;
    out.final_regret = regret_;
    out.final_cost = cost_;
    const double total = static_cast<double>(t_) * static_cast<double>(opt_.size());
    out.target_fraction = total > 0 ? static_cast<double>(arm_pulls_[target_]) / total : 0.0;
  }

 private:
  const BanditInstance* inst_;
  ArmId target_;
  double benchmark_;
  std::vector<Round> grid_;
  std::size_t next_ = 0;
  Round t_ = 0;
  double regret_ = 0.0;
  double cost_ = 0.0;
  std::vector<Count> arm_pulls_;
  std::vector<ArmId> local_opt_;
  std::vector<Count> opt_;
  std::vector<Count> tgt_;
};

}  // namespace cmab
