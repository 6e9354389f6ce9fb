#pragma once

#include <algorithm>
#include <limits>
#include <optional>

#include "cmab/algo.hpp"
#include "cmab/attack/config.hpp"
#include "cmab/attack/planning.hpp"

namespace cmab {

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

/// Attack value that brings the post-attack mean of an arm down to `bound`
/// after `count_after` samples whose unattacked total is `total_before_gamma`.
inline double gamma_to_bound(double total_before_gamma, Count count_after,
                             double bound) {
  return positive_part(total_before_gamma - static_cast<double>(count_after) * bound);
}

/// mu_hat(target) - 2 beta(n_hat(target)) - delta0, or nothing while the
/// target is unsampled.
inline std::optional<double> target_bound(double target_sum, Count target_count,
                                          const AttackConfig& cfg,
                                          std::size_t num_arms) {
  if (target_count == 0) return std::nullopt;
  return target_sum / static_cast<double>(target_count) -
         2.0 * confidence_radius(target_count, num_arms, cfg.delta) - cfg.delta0;
}

/// Attack on CO-UCB: the value that makes mu_t(pulled) <= mu_t(target) -
/// 2 beta(n_t(target)) - delta0 after this round's merge. `before` holds the
/// stats of round t-1; the round_* arguments describe this round's raw
/// samples on the pulled arm and on the target. Returns 0 while the target
/// is unsampled.
inline double homo_coucb_gamma(const SharedStats& before, ArmId pulled,
                               double round_reward_sum, Count pulls_this_round,
                               const AttackConfig& cfg, std::size_t num_arms,
                               double round_target_sum = 0.0,
                               Count round_target_pulls = 0) {
  const ArmId target = cfg.target_arm.value_or(num_arms - 1);
  require(pulled != target, Errc::TargetArmPulled, "the target arm is never attacked");
  const auto bound = target_bound(before.sum(target) + round_target_sum,
                                  before.count(target) + round_target_pulls, cfg,
                                  num_arms);
  if (!bound) return 0.0;
  return gamma_to_bound(before.sum(pulled) + round_reward_sum,
                        before.count(pulled) + pulls_this_round, *bound);
}

/// Attack on the phase-based algorithm. The last phase aggregate of the
/// pulled arm is the agent-visible snapshot; raw samples of the current phase
/// (including this round) and earlier attack values of the phase are passed
/// separately. The target is read from the delayed snapshot.
inline double tcom_gamma(const TcomState& st, ArmId pulled,
                         double within_phase_reward_sum,
                         double within_phase_gamma_sum, const AttackConfig& cfg,
                         std::size_t num_arms) {
  const ArmId target = cfg.target_arm.value_or(num_arms - 1);
  require(pulled != target, Errc::TargetArmPulled, "the target arm is never attacked");
  const auto bound = target_bound(st.visible.sum(target), st.visible.count(target),
                                  cfg, num_arms);
  if (!bound) return 0.0;
  const Count rounds_in_phase = st.phase_rounds + 1;
  const Count count_after =
      st.visible.count(pulled) + rounds_in_phase * static_cast<Count>(st.num_agents);
  return gamma_to_bound(
      st.visible.sum(pulled) + within_phase_reward_sum - within_phase_gamma_sum,
      count_after, *bound);
}

/// Attack on the DPE2 leader: keeps V_r(pulled) <= V_s(target) -
/// 2 beta(N_s(target)) - delta0 at the next update, with s the snapshot the
/// leader currently holds.
inline double dpe2_gamma(const Dpe2State& st, ArmId pulled, double leader_reward,
                         const AttackConfig& cfg, std::size_t num_arms) {
  const ArmId target = cfg.target_arm.value_or(num_arms - 1);
  require(pulled != target, Errc::TargetArmPulled, "the target arm is never attacked");
  const auto bound = target_bound(st.leader.sum(target), st.leader.count(target),
                                  cfg, num_arms);
  if (!bound) return 0.0;
  return gamma_to_bound(
      st.leader.sum(pulled) + st.pending_sum[pulled] + leader_reward,
      st.leader.count(pulled) + st.pending_count[pulled] + 1, *bound);
}

/// min over k' outside K0 of mu_{t-1}(k') - 2 beta(n_{t-1}(k')) - delta0,
/// skipping unsampled arms. Empty when no such arm has been sampled.
inline std::optional<double> oracle_bound(const SharedStats& before,
                                          const AttackPlan& plan,
                                          const AttackConfig& cfg) {
  std::optional<double> best;
  const std::size_t K = before.num_arms();
  for (ArmId k = 0; k < K; ++k) {
    if (plan.is_attacked(k) || before.count(k) == 0) continue;
    const double v = *before.mean(k) -
                     2.0 * confidence_radius(before.count(k), K, cfg.delta) -
                     cfg.delta0;
    if (!best || v < *best) best = v;
  }
  return best;
}

/// Oracle Attack value for a target agent that pulled an arm of K0.
inline double oa_gamma(const SharedStats& before, AgentId agent, ArmId pulled,
                       double round_reward_sum, Count pulls_this_round,
                       const AttackPlan& plan, const AttackConfig& cfg) {
  require(plan.is_target(agent), Errc::NotTargetAgent,
          "agent " + std::to_string(agent) + " is not in G0");
  require(plan.is_attacked(pulled), Errc::ArmNotAttacked,
          "arm " + std::to_string(pulled) + " is not in K0");
  const auto bound = oracle_bound(before, plan, cfg);
  if (!bound) return 0.0;
  return gamma_to_bound(before.sum(pulled) + round_reward_sum,
                        before.count(pulled) + pulls_this_round, *bound);
}

}  // namespace cmab
