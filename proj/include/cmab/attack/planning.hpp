#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmab/core.hpp"
#include "cmab/env.hpp"

namespace cmab {

/// Arm sets plus an arm ordering. The planners only compare scores, so an
/// attacker that has merely learned the ranking can plan with estimates.
struct ArmView {
  std::span<const std::vector<ArmId>> arm_sets;
  std::span<const double> scores;  // higher is better

  explicit ArmView(const BanditInstance& inst)
      : arm_sets(inst.arm_sets()), scores(inst.means()) {}
  ArmView(std::span<const std::vector<ArmId>> sets, std::span<const double> s)
      : arm_sets(sets), scores(s) {}

  [[nodiscard]] std::size_t num_agents() const { return arm_sets.size(); }
  [[nodiscard]] std::size_t num_arms() const { return scores.size(); }

  /// Best arm of `arms` under the scores; ties to the lowest id.
  template <class Range>
  [[nodiscard]] ArmId best_of(const Range& arms) const {
    ArmId best = *std::begin(arms);
    for (ArmId k : arms)
      if (scores[k] > scores[best] || (scores[k] == scores[best] && k < best))
        best = k;
    return best;
  }
  [[nodiscard]] ArmId local_optimal(AgentId m) const { return best_of(arm_sets[m]); }
};

/// Output of AAS + TAS.
struct AttackPlan {
  std::vector<AgentId> affected;       // D0
  std::vector<ArmId> attacked_arms;    // K0
  std::vector<AgentId> target_agents;  // G0
  std::map<ArmId, AgentId> responsible;   // g(k) for k in K0
  std::map<AgentId, ArmId> fallback_arm;  // k0^(m) for m in D0

  [[nodiscard]] bool is_attacked(ArmId k) const {
    return std::binary_search(attacked_arms.begin(), attacked_arms.end(), k);
  }
  [[nodiscard]] bool is_target(AgentId m) const {
    return std::binary_search(target_agents.begin(), target_agents.end(), m);
  }
  [[nodiscard]] bool is_affected(AgentId m) const {
    return std::binary_search(affected.begin(), affected.end(), m);
  }
};

/// Agents m, m2 conflict when either arm set has nothing left after removing
/// both local optima.
inline bool is_conflict(const BanditInstance& inst, AgentId m, AgentId m2) {
  require(m < inst.num_agents() && m2 < inst.num_agents(), Errc::AgentOutOfRange,
          "agent out of range");
  require(m != m2, Errc::InvalidArgument, "conflict needs two distinct agents");
  const ArmId a = local_optimal(inst, m);
  const ArmId b = local_optimal(inst, m2);
  auto residual_empty = [&](AgentId x) {
    return std::all_of(inst.arm_set(x).begin(), inst.arm_set(x).end(),
                       [&](ArmId k) { return k == a || k == b; });
  };
  return residual_empty(m) || residual_empty(m2);
}

namespace detail {

/// Nonempty local-optimum groups M_*(k), largest first, ties to lower arm id.
inline std::vector<std::pair<ArmId, std::vector<AgentId>>> optimum_groups(
    const ArmView& view) {
  std::vector<std::vector<AgentId>> by_arm(view.num_arms());
  for (AgentId m = 0; m < view.num_agents(); ++m)
    by_arm[view.local_optimal(m)].push_back(m);
  std::vector<std::pair<ArmId, std::vector<AgentId>>> groups;
  for (ArmId k = 0; k < by_arm.size(); ++k)
    if (!by_arm[k].empty()) groups.emplace_back(k, std::move(by_arm[k]));
  std::stable_sort(groups.begin(), groups.end(), [](const auto& x, const auto& y) {
    return x.second.size() > y.second.size();
  });
  return groups;
}

/// Every agent keeps at least one arm outside `excluded` (sorted).
inline bool residuals_nonempty(const ArmView& view, std::span<const AgentId> agents,
                               std::span<const ArmId> excluded) {
  for (AgentId m : agents) {
    const auto& set = view.arm_sets[m];
    const bool any = std::any_of(set.begin(), set.end(), [&](ArmId k) {
      return !std::binary_search(excluded.begin(), excluded.end(), k);
    });
    if (!any) return false;
  }
  return true;
}

}  // namespace detail

struct AffectedSelection {
  std::vector<AgentId> affected;     // D0
  std::vector<ArmId> attacked_arms;  // K0
};

/// Affected Agents Selection: greedy over local-optimum groups in decreasing
/// size. A group is admitted when every agent of D0 and of the group still
/// has an arm outside K0 and the group's arm.
inline AffectedSelection aas(const ArmView& view) {
  AffectedSelection out;
  for (auto& [arm, group] : detail::optimum_groups(view)) {
    std::vector<ArmId> arms = out.attacked_arms;
    arms.insert(std::upper_bound(arms.begin(), arms.end(), arm), arm);
    std::vector<AgentId> agents = out.affected;
    agents.insert(agents.end(), group.begin(), group.end());
    if (!detail::residuals_nonempty(view, agents, arms)) continue;
    std::sort(agents.begin(), agents.end());
    out.affected = std::move(agents);
    out.attacked_arms = std::move(arms);
  }
  return out;
}

inline AffectedSelection aas(const BanditInstance& inst) { return aas(ArmView(inst)); }

/// The largest single local-optimum group (ties to the lower arm id), used as
/// the no-AAS baseline.
inline AffectedSelection largest_group(const ArmView& view) {
  const auto groups = detail::optimum_groups(view);
  AffectedSelection out;
  if (groups.empty()) return out;
  out.affected = groups.front().second;
  out.attacked_arms = {groups.front().first};
  require(detail::residuals_nonempty(view, out.affected, out.attacked_arms),
          Errc::EmptyResidualArmSet, "largest group has a singleton arm set");
  return out;
}

/// Exhaustive maximum over unions of local-optimum groups that jointly pass
/// the AAS admission test. Exponential in the number of groups.
inline std::size_t brute_force_max_group(const ArmView& view) {
  require(view.num_agents() <= 20, Errc::TooLarge,
          "brute force supports at most 20 agents");
  const auto groups = detail::optimum_groups(view);
  const std::size_t g = groups.size();
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << g); ++mask) {
    std::vector<ArmId> arms;
    std::vector<AgentId> agents;
    for (std::size_t i = 0; i < g; ++i) {
      if (!(mask & (1u << i))) continue;
      arms.push_back(groups[i].first);
      agents.insert(agents.end(), groups[i].second.begin(), groups[i].second.end());
    }
    if (agents.size() <= best) continue;
    std::sort(arms.begin(), arms.end());
    if (detail::residuals_nonempty(view, agents, arms)) best = agents.size();
  }
  return best;
}

inline std::size_t brute_force_max_group(const BanditInstance& inst) {
  return brute_force_max_group(ArmView(inst));
}

/// Target Agents Selection. For each m in D0, k0^(m) is its best arm outside
/// K0; for each k in K0 the responsible agent g(k) is the one in D0 with
/// local optimum k whose k0 has the lowest score (ties to the lower id).
inline AttackPlan tas(const ArmView& view, const AffectedSelection& sel) {
  AttackPlan plan;
  plan.affected = sel.affected;
  plan.attacked_arms = sel.attacked_arms;
  for (AgentId m : sel.affected) {
    std::vector<ArmId> residual;
    for (ArmId k : view.arm_sets[m])
      if (!plan.is_attacked(k)) residual.push_back(k);
    require(!residual.empty(), Errc::EmptyResidualArmSet,
            "agent " + std::to_string(m) + " has no arm outside K0");
    plan.fallback_arm[m] = view.best_of(residual);
  }
  for (ArmId k : sel.attacked_arms) {
    std::optional<AgentId> g;
    for (AgentId m : sel.affected) {
      if (view.local_optimal(m) != k) continue;
      if (!g || view.scores[plan.fallback_arm[m]] < view.scores[plan.fallback_arm[*g]])
        g = m;
    }
    require(g.has_value(), Errc::EmptyResidualArmSet,
            "no affected agent has local optimum " + std::to_string(k));
    plan.responsible[k] = *g;
    plan.target_agents.push_back(*g);
  }
  std::sort(plan.target_agents.begin(), plan.target_agents.end());
  plan.target_agents.erase(
      std::unique(plan.target_agents.begin(), plan.target_agents.end()),
      plan.target_agents.end());
  return plan;
}

inline AttackPlan tas(const BanditInstance& inst, const AffectedSelection& sel) {
  return tas(ArmView(inst), sel);
}

/// AAS (or the largest-group baseline) followed by TAS.
inline AttackPlan make_plan(const ArmView& view, bool use_aas) {
  return tas(view, use_aas ? aas(view) : largest_group(view));
}

/// Condition-2 accessibility rate: min over arms of the share (relative to M)
/// of agents in `subset` that can pull the arm.
inline double accessibility_rate(const BanditInstance& inst,
                                 std::span<const AgentId> subset) {
  require(!subset.empty(), Errc::InvalidArgument, "S0 must be nonempty");
  double worst = 1.0;
  for (ArmId k = 0; k < inst.num_arms(); ++k) {
    std::size_t n = 0;
    for (AgentId m : subset) n += inst.has_arm(m, k) ? 1 : 0;
    worst = std::min(worst, static_cast<double>(n) /
                                static_cast<double>(inst.num_agents()));
  }
  return worst;
}

inline std::vector<AgentId> all_agents(std::size_t num_agents) {
  std::vector<AgentId> out(num_agents);
  for (AgentId m = 0; m < num_agents; ++m) out[m] = m;
  return out;
}

}  // namespace cmab
