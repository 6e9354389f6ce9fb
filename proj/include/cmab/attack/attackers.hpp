#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmab/algo.hpp"
#include "cmab/attack/config.hpp"
#include "cmab/attack/gamma.hpp"
#include "cmab/attack/lta.hpp"
#include "cmab/attack/planning.hpp"

// Attack hooks plugged into the victim round functions. Each hook fills
// rec.gamma; verify() re-checks the post-condition of its closed form after
// the round has been merged and returns a description of any violation.

namespace cmab {

namespace detail {

/// Tolerance for post-condition checks on running sums.
inline bool leq_tol(double lhs, double rhs) {
  return lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs));
}

struct RoundArmTotals {
  std::vector<double> sum;
  std::vector<Count> pulls;
};

inline RoundArmTotals round_totals(const RoundRecord& rec, std::size_t num_arms) {
  RoundArmTotals out{std::vector<double>(num_arms, 0.0), std::vector<Count>(num_arms, 0)};
  for (std::size_t m = 0; m < rec.arms.size(); ++m) {
    out.sum[rec.arms[m]] += rec.pre[m];
    ++out.pulls[rec.arms[m]];
  }
  return out;
}

}  // namespace detail

/// Attack on CO-UCB in homogeneous settings.
class HomoCoUcbAttacker {
 public:
  HomoCoUcbAttacker(const AttackConfig& cfg, std::size_t num_arms)
      : cfg_(cfg), num_arms_(num_arms), target_(cfg.target_arm.value_or(num_arms - 1)) {}

  [[nodiscard]] ArmId target() const { return target_; }

  void operator()(const SharedStats& before, const BanditInstance& inst, RoundRecord& rec) {
    const auto tot = detail::round_totals(rec, num_arms_);
    checks_.clear();
    for (ArmId k = 0; k < num_arms_; ++k) {
      if (k == target_ || tot.pulls[k] == 0) continue;
      const auto agent = attacker_on(rec, inst, k);
      if (!agent) continue;
      rec.gamma[*agent] = homo_coucb_gamma(before, k, tot.sum[k], tot.pulls[k], cfg_,
                                           num_arms_, tot.sum[target_], tot.pulls[target_]);
      checks_.push_back(k);
    }
  }

  [[nodiscard]] std::optional<std::string> verify(const SharedStats& after,
                                                  const RoundRecord&) const {
    const auto bound = target_bound(after.sum(target_), after.count(target_), cfg_, num_arms_);
    if (!bound) return std::nullopt;
    for (ArmId k : checks_)
      if (!detail::leq_tol(*after.mean(k), *bound))
        return "attack inequality violated on arm " + std::to_string(k);
    return std::nullopt;
  }

 private:
  /// Lowest-id manipulable agent that pulled k this round.
  std::optional<AgentId> attacker_on(const RoundRecord& rec, const BanditInstance& inst,
                                     ArmId k) const {
    if (cfg_.scope == AttackScope::Single) {
      const AgentId a = cfg_.attacked_agent;
      if (a < inst.num_agents() && rec.arms[a] == k) return a;
      return std::nullopt;
    }
    for (AgentId m = 0; m < rec.arms.size(); ++m)
      if (rec.arms[m] == k) return m;
    return std::nullopt;
  }

  AttackConfig cfg_;
  std::size_t num_arms_;
  ArmId target_;
  std::vector<ArmId> checks_;
};

/// Oracle Attack: agents of G0 manipulate their samples of K0 arms.
class OracleAttacker {
 public:
  OracleAttacker(AttackPlan plan, const AttackConfig& cfg)
      : plan_(std::move(plan)), cfg_(cfg) {}

  [[nodiscard]] const AttackPlan& plan() const { return plan_; }

  void operator()(const SharedStats& before, const BanditInstance& inst, RoundRecord& rec) {
    const auto tot = detail::round_totals(rec, inst.num_arms());
    checks_.clear();
    for (ArmId k : plan_.attacked_arms) {
      std::optional<AgentId> agent;
      for (AgentId m : plan_.target_agents)
        if (rec.arms[m] == k) {
          agent = m;
          break;
        }
      if (!agent) continue;
      rec.gamma[*agent] = oa_gamma(before, *agent, k, tot.sum[k], tot.pulls[k], plan_, cfg_);
      if (const auto bound = oracle_bound(before, plan_, cfg_)) checks_.emplace_back(k, *bound);
    }
  }

  [[nodiscard]] std::optional<std::string> verify(const SharedStats& after,
                                                  const RoundRecord& rec) const {
    for (const auto& [k, bound] : checks_)
      if (!detail::leq_tol(*after.mean(k), bound))
        return "oracle attack inequality violated on arm " + std::to_string(k);
    for (std::size_t m = 0; m < rec.gamma.size(); ++m)
      if (rec.gamma[m] != 0.0 && !plan_.is_attacked(rec.arms[m]))
        return "arm outside K0 was attacked";
    return std::nullopt;
  }

 private:
  AttackPlan plan_;
  AttackConfig cfg_;
  std::vector<std::pair<ArmId, double>> checks_;
};

/// Learning-Then-Attack. Stage 1 inflates under-sampled arms of every agent
/// until each arm has L samples, then recovers them; stage 2 runs the Oracle
/// Attack on the plan derived from the learned ranking.
class LtaAttacker {
 public:
  LtaAttacker(const BanditInstance& inst, const AttackConfig& cfg, double alpha)
      : cfg_(cfg),
        alpha_(alpha),
        b_(inst.bound()),
        arm_sets_(inst.arm_sets()),
        state_(inst.num_arms(), lta_threshold_L(inst.num_arms(), cfg.delta, cfg.delta_min)) {}

  [[nodiscard]] const LtaState& state() const { return state_; }
  [[nodiscard]] const std::optional<OracleAttacker>& oracle() const { return oracle_; }

  void operator()(const SharedStats& before, const BanditInstance& inst, RoundRecord& rec) {
    if (state_.stage == LtaStage::Attacking) {
      (*oracle_)(before, inst, rec);
      return;
    }
    SharedStats running = before;
    for (AgentId m = 0; m < rec.arms.size(); ++m) {
      const ArmId k = rec.arms[m];
      const Count n = running.count(k) + 1;
      double g = 0.0;
      if (n < state_.threshold) {
        g = lta_learning_gamma(running, k, rec.pre[m], state_, cfg_, alpha_, b_);
        if (check_) check_incentive(running, k, rec.pre[m] - g, m);
      } else if (n == state_.threshold) {
        g = lta_recovery_gamma(state_, k, n);
      }
      rec.gamma[m] = g;
      running.add(k, rec.pre[m] - g);
      state_.raw_sum[k] += rec.pre[m];
      ++state_.raw_count[k];
    }
    if (running.min_count() >= state_.threshold) finish_learning(rec.t);
  }

  [[nodiscard]] std::optional<std::string> verify(const SharedStats& after,
                                                  const RoundRecord& rec) {
    if (violation_) return std::exchange(violation_, std::nullopt);
    if (oracle_ && state_.learning_rounds < rec.t) return oracle_->verify(after, rec);
    if (state_.stage == LtaStage::Attacking && state_.learning_rounds == rec.t) {
      for (ArmId k = 0; k < after.num_arms(); ++k)
        if (std::abs(after.sum(k) - state_.raw_sum[k]) >
            1e-9 * std::max(1.0, std::abs(state_.raw_sum[k])))
          return "arm " + std::to_string(k) + " not recovered at the end of learning";
    }
    return std::nullopt;
  }

  void enable_checks(bool on) { check_ = on; }

 private:
  void check_incentive(const SharedStats& running, ArmId k, double post, AgentId m) {
    SharedStats s = running;
    s.add(k, post);
    const Round t = running.round() + 1;
    auto index = [&](ArmId a) {
      return ucb_index(s.count(a) ? *s.mean(a) : 0.0, s.count(a), t, alpha_, b_);
    };
    const double own = index(k);
    for (ArmId k2 = 0; k2 < s.num_arms(); ++k2)
      if (k2 != k && own < index(k2) - 1e-9) {
        violation_ = "incentive condition failed for agent " + std::to_string(m);
        return;
      }
  }

  void finish_learning(Round t) {
    state_.stage = LtaStage::Attacking;
    state_.learning_rounds = t;
    const auto means = state_.raw_means();
    std::vector<ArmId> order(means.size());
    std::iota(order.begin(), order.end(), ArmId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](ArmId a, ArmId b) { return means[a] > means[b]; });
    state_.learned_ranking = order;
    const ArmView view(arm_sets_, means);
    oracle_.emplace(make_plan(view, cfg_.use_aas), cfg_);
  }

  AttackConfig cfg_;
  double alpha_;
  double b_;
  std::vector<std::vector<ArmId>> arm_sets_;
  LtaState state_;
  std::optional<OracleAttacker> oracle_;
  bool check_ = false;
  std::optional<std::string> violation_;
};

/// Attack on the phase-based algorithm; one agent absorbs the whole value.
class TcomAttacker {
 public:
  TcomAttacker(const AttackConfig& cfg, std::size_t num_arms)
      : cfg_(cfg), num_arms_(num_arms), target_(cfg.target_arm.value_or(num_arms - 1)) {}

  void operator()(const TcomState& st, const BanditInstance& inst, RoundRecord& rec) {
    const ArmId k = rec.arms.front();
    if (k == target_) return;
    const double round_sum = std::accumulate(rec.pre.begin(), rec.pre.end(), 0.0);
    const AgentId a = cfg_.scope == AttackScope::Single ? cfg_.attacked_agent : 0;
    require(a < inst.num_agents(), Errc::AgentOutOfRange, "attacked agent out of range");
    rec.gamma[a] = tcom_gamma(st, k, st.phase_pre_sum + round_sum, st.phase_gamma_sum,
                              cfg_, num_arms_);
  }

  /// Checked at phase ends, when the agent-visible snapshot changes.
  [[nodiscard]] std::optional<std::string> verify(const TcomState& after,
                                                  const RoundRecord& rec) const {
    const ArmId k = rec.arms.front();
    if (after.phase_arm || k == target_) return std::nullopt;
    const auto bound = target_bound(after.visible.sum(target_), after.visible.count(target_),
                                    cfg_, num_arms_);
    if (bound && !detail::leq_tol(*after.visible.mean(k), *bound))
      return "phase-end condition violated on arm " + std::to_string(k);
    return std::nullopt;
  }

 private:
  AttackConfig cfg_;
  std::size_t num_arms_;
  ArmId target_;
};

/// Attack on the DPE2 leader only.
class Dpe2Attacker {
 public:
  Dpe2Attacker(const AttackConfig& cfg, std::size_t num_arms)
      : cfg_(cfg), num_arms_(num_arms), target_(cfg.target_arm.value_or(num_arms - 1)) {}

  void operator()(const Dpe2State& st, const BanditInstance&, RoundRecord& rec) {
    const ArmId k = rec.arms.front();
    if (k == target_) return;
    rec.gamma[0] = dpe2_gamma(st, k, rec.pre[0], cfg_, num_arms_);
    if (const auto bound = target_bound(st.leader.sum(target_), st.leader.count(target_),
                                        cfg_, num_arms_))
      pending_.emplace_back(k, *bound);
  }

  /// Checked on update rounds: every arm attacked during the phase ends
  /// below the bound taken from the phase-start snapshot.
  [[nodiscard]] std::optional<std::string> verify(const Dpe2State& after, const RoundRecord&) {
    if (after.updates == updates_seen_) return std::nullopt;
    updates_seen_ = after.updates;
    const auto checks = std::exchange(pending_, {});
    for (const auto& [k, bound] : checks)
      if (!detail::leq_tol(*after.leader.mean(k), bound))
        return "leader condition violated on arm " + std::to_string(k);
    return std::nullopt;
  }

 private:
  AttackConfig cfg_;
  std::size_t num_arms_;
  ArmId target_;
  std::vector<std::pair<ArmId, double>> pending_;
  std::size_t updates_seen_ = 0;
};

}  // namespace cmab
