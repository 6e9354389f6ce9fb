#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cmab/algo.hpp"
#include "cmab/attack/config.hpp"

namespace cmab {

/// L = ceil( 2 log(2K / delta) / delta_min^2 ).
inline Count lta_threshold_L(std::size_t num_arms, double delta, double delta_min) {
  require(delta_min > 0.0, Errc::ZeroGap, "delta_min must be positive");
  require(delta > 0.0 && delta < 1.0, Errc::InvalidArgument, "delta must lie in (0, 1)");
  const double v = 2.0 * std::log(2.0 * static_cast<double>(num_arms) / delta) /
                   (delta_min * delta_min);
  return static_cast<Count>(std::ceil(v));
}

enum class LtaStage { Learning, Attacking };

struct LtaState {
  LtaStage stage = LtaStage::Learning;
  Count threshold = 0;               // L
  std::vector<double> inflation;     // sum of (negative) gammas per arm
  std::vector<double> raw_sum;       // attacker-side pre-attack totals
  std::vector<Count> raw_count;
  std::vector<ArmId> learned_ranking;
  Round learning_rounds = 0;

  LtaState() = default;
  LtaState(std::size_t num_arms, Count L)
      : threshold(L),
        inflation(num_arms, 0.0),
        raw_sum(num_arms, 0.0),
        raw_count(num_arms, 0) {}

  [[nodiscard]] std::vector<double> raw_means() const {
    std::vector<double> out(raw_sum.size(), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k)
      if (raw_count[k]) out[k] = raw_sum[k] / static_cast<double>(raw_count[k]);
    return out;
  }
};

/// Incentive attack of the learning stage. `stats` are the running shared
/// stats before this observation is merged. The returned gamma is <= 0: it
/// raises the pulled arm's mean until its index exceeds every other index by
/// the margin, and 0 when it already strictly leads. Indices live in [0, b],
/// so when a rival already sits at b the pulled arm is lifted to b and the
/// tie goes to the lower arm id.
inline double lta_learning_gamma(const SharedStats& stats, ArmId pulled,
                                 double observation, LtaState& state,
                                 const AttackConfig& cfg, double alpha, double b) {
  require(state.stage == LtaStage::Learning, Errc::WrongStage,
          "incentive attacks only run in the learning stage");
  const Count n = stats.count(pulled) + 1;
  require(n < state.threshold, Errc::InvalidArgument,
          "incentive attack requires n_hat(pulled) < L");
  // Indices as the agents will compute them next round.
  const Round t = stats.round() + 1;
  double others = 0.0;
  for (ArmId k = 0; k < stats.num_arms(); ++k)
    if (k != pulled)
      others = std::max(others, ucb_index(stats.count(k) ? *stats.mean(k) : 0.0,
                                          stats.count(k), t, alpha, b));

  const double total = stats.sum(pulled) + observation;
  const double bonus = ucb_bonus(n, t, alpha);
  const double own = total / static_cast<double>(n) + bonus;
  const double wanted = std::min(others + cfg.incentive_margin(), b);
  if (own > others || own >= wanted) return 0.0;
  const double gamma = total - static_cast<double>(n) * (wanted - bonus);
  state.inflation[pulled] += gamma;
  return gamma;
}

/// Removes every earlier inflation of `arm` in one correction, applied on the
/// observation that brings n_hat(arm) to exactly L.
inline double lta_recovery_gamma(LtaState& state, ArmId arm, Count count_with_this) {
  require(count_with_this == state.threshold, Errc::NotAtThreshold,
          "recovery happens exactly when n_hat reaches L");
  const double gamma = -state.inflation.at(arm);
  state.inflation[arm] = 0.0;
  return gamma;
}

}  // namespace cmab
