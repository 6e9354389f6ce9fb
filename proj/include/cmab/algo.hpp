#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cmab/core.hpp"
#include "cmab/env.hpp"
#include "cmab/rng.hpp"

namespace cmab {

/// beta(N) = sqrt( log(pi^2 K N^2 / (3 delta)) / (2N) ).
inline double confidence_radius(Count n, std::size_t num_arms, double delta) {
  require(n >= 1, Errc::ZeroCount, "confidence radius needs N >= 1");
  require(delta > 0.0 && delta < 1.0, Errc::InvalidArgument,
          "delta must lie in (0, 1)");
  const double nn = static_cast<double>(n);
  const double arg = std::numbers::pi * std::numbers::pi *
                     static_cast<double>(num_arms) * nn * nn / (3.0 * delta);
  return std::sqrt(std::log(arg) / (2.0 * nn));
}

/// Unclamped exploration bonus sqrt(alpha log t / (2 n)).
inline double ucb_bonus(Count count, Round t, double alpha) {
  return std::sqrt(alpha * std::log(static_cast<double>(std::max<Round>(t, 1))) /
                   (2.0 * static_cast<double>(count)));
}

/// CO-UCB index, clamped to [0, b]; unsampled arms sit at b.
inline double ucb_index(double mean, Count count, Round t, double alpha,
                        double b) {
  if (count == 0) return b;
  return std::clamp(mean + ucb_bonus(count, t, alpha), 0.0, b);
}

/// Global post-attack pull counts and reward sums, shared by all agents.
class SharedStats {
 public:
  SharedStats() = default;
  explicit SharedStats(std::size_t num_arms)
      : counts_(num_arms, 0), sums_(num_arms, 0.0) {}

  [[nodiscard]] std::size_t num_arms() const { return counts_.size(); }
  [[nodiscard]] Count count(ArmId k) const { return counts_.at(k); }
  [[nodiscard]] double sum(ArmId k) const { return sums_.at(k); }
  /// Empirical mean; empty while the arm is unsampled.
  [[nodiscard]] std::optional<double> mean(ArmId k) const {
    if (counts_.at(k) == 0) return std::nullopt;
    return sums_[k] / static_cast<double>(counts_[k]);
  }
  [[nodiscard]] Round round() const { return round_; }
  [[nodiscard]] Count total_pulls() const { return total_; }
  [[nodiscard]] Count min_count() const {
    return *std::min_element(counts_.begin(), counts_.end());
  }

  void add(ArmId k, double value) {
    ++counts_.at(k);
    sums_[k] += value;
    ++total_;
  }
  /// Merge a block of n observations with the given total.
  void merge(ArmId k, Count n, double total) {
    counts_.at(k) += n;
    sums_[k] += total;
    total_ += n;
  }
  void advance() { ++round_; }

 private:
  std::vector<Count> counts_;
  std::vector<double> sums_;
  Count total_ = 0;
  Round round_ = 0;
};

/// One round of play. post[m] == pre[m] - gamma[m] for every agent.
struct RoundRecord {
  Round t = 0;
  std::vector<ArmId> arms;
  std::vector<double> pre;
  std::vector<double> post;
  std::vector<double> gamma;

  explicit RoundRecord(std::size_t num_agents = 0)
      : arms(num_agents, 0),
        pre(num_agents, 0.0),
        post(num_agents, 0.0),
        gamma(num_agents, 0.0) {}
};

/// Attack hook that never touches observations.
struct NoAttack {
  template <class... Args>
  void operator()(Args&&...) const noexcept {}
};

namespace detail {

inline void apply_gamma(RoundRecord& rec) {
  for (std::size_t m = 0; m < rec.pre.size(); ++m)
    rec.post[m] = rec.pre[m] - rec.gamma[m];
}

}  // namespace detail

/// Per-round CO-UCB indices for every arm, computed from the stats of the
/// previous round.
inline std::vector<double> coucb_indices(const SharedStats& stats, double alpha,
                                         double b) {
  std::vector<double> idx(stats.num_arms());
  for (ArmId k = 0; k < idx.size(); ++k)
    idx[k] = ucb_index(stats.count(k) ? stats.sum(k) / static_cast<double>(stats.count(k)) : 0.0,
                       stats.count(k), stats.round(), alpha, b);
  return idx;
}

/// Argmax of `idx` restricted to `arms`; ties go to the lowest arm id.
inline ArmId argmax_over(std::span<const double> idx, std::span<const ArmId> arms) {
  ArmId best = arms.front();
  for (ArmId k : arms)
    if (idx[k] > idx[best]) best = k;
  return best;
}

/// One CO-UCB round. Every agent pulls the highest index in its own arm set,
/// the hook may rewrite gamma for any agent, and all post-attack observations
/// are merged into the shared stats at the end of the round.
///
/// Hook signature: void(const SharedStats& before, const BanditInstance&,
/// RoundRecord&) with arms and pre filled in.
template <class Hook>
RoundRecord coucb_round(SharedStats& stats, const BanditInstance& inst,
                        double alpha, Hook&& hook, RngStream& rng) {
  const std::size_t M = inst.num_agents();
  RoundRecord rec(M);
  rec.t = stats.round() + 1;
  const auto idx = coucb_indices(stats, alpha, inst.bound());
  for (AgentId m = 0; m < M; ++m) {
    rec.arms[m] = argmax_over(idx, inst.arm_set(m));
    rec.pre[m] = sample_reward(inst, rec.arms[m], rng);
  }
  hook(std::as_const(stats), inst, rec);
  detail::apply_gamma(rec);
  for (AgentId m = 0; m < M; ++m) stats.add(rec.arms[m], rec.post[m]);
  stats.advance();
  return rec;
}

/// Phase-based homogeneous algorithm with delayed statistics. All agents
/// commit to one arm per phase; the agent-visible snapshot is refreshed only
/// when the live count of the phase arm reaches ceil(beta_phase * n_s).
struct TcomState {
  std::size_t num_agents = 0;
  double beta_phase = 2.0;
  SharedStats visible;
  SharedStats live;
  std::optional<ArmId> phase_arm;
  Round phase_start = 0;        // s: rounds completed when the phase began
  Count phase_start_count = 0;  // n_s of the phase arm
  Count phase_threshold = 0;
  Round phase_rounds = 0;          // rounds already played in the phase
  double phase_pre_sum = 0.0;      // raw rewards on the phase arm this phase
  double phase_gamma_sum = 0.0;    // attack values applied this phase
  std::size_t phases_completed = 0;

  TcomState() = default;
  TcomState(const BanditInstance& inst, double beta)
      : num_agents(inst.num_agents()),
        beta_phase(beta),
        visible(inst.num_arms()),
        live(inst.num_arms()) {
    require(beta > 1.0, Errc::InvalidArgument, "beta_phase must exceed 1");
  }
};

/// Delayed index used at a phase start: unsampled arms first, then
/// mu_s(k) + sqrt(2 log s / n_s(k)); ties to the lowest id.
inline ArmId tcom_select(const SharedStats& snapshot, Round s) {
  const std::size_t K = snapshot.num_arms();
  for (ArmId k = 0; k < K; ++k)
    if (snapshot.count(k) == 0) return k;
  const double logs = std::log(static_cast<double>(std::max<Round>(s, 1)));
  ArmId best = 0;
  double best_idx = -std::numeric_limits<double>::infinity();
  for (ArmId k = 0; k < K; ++k) {
    const double n = static_cast<double>(snapshot.count(k));
    const double v = snapshot.sum(k) / n + std::sqrt(2.0 * logs / n);
    if (v > best_idx) {
      best_idx = v;
      best = k;
    }
  }
  return best;
}

/// Hook signature: void(const TcomState& before, const BanditInstance&,
/// RoundRecord&).
template <class Hook>
RoundRecord tcom_round(TcomState& st, const BanditInstance& inst, Hook&& hook,
                       RngStream& rng) {
  require(inst.homogeneous(), Errc::HeterogeneousNotSupported,
          "UCB-TCOM requires a homogeneous instance");
  if (!st.phase_arm) {
    st.phase_start = st.live.round();
    const ArmId k = tcom_select(st.visible, st.phase_start);
    st.phase_arm = k;
    st.phase_start_count = st.visible.count(k);
    st.phase_threshold = std::max<Count>(
        static_cast<Count>(std::ceil(st.beta_phase *
                                     static_cast<double>(st.phase_start_count))),
        st.phase_start_count + 1);
    st.phase_rounds = 0;
    st.phase_pre_sum = 0.0;
    st.phase_gamma_sum = 0.0;
  }
  const ArmId k = *st.phase_arm;
  const std::size_t M = inst.num_agents();
  RoundRecord rec(M);
  rec.t = st.live.round() + 1;
  for (AgentId m = 0; m < M; ++m) {
    rec.arms[m] = k;
    rec.pre[m] = sample_reward(inst, k, rng);
  }
  hook(std::as_const(st), inst, rec);
  detail::apply_gamma(rec);
  for (AgentId m = 0; m < M; ++m) {
    st.live.add(k, rec.post[m]);
    st.phase_pre_sum += rec.pre[m];
    st.phase_gamma_sum += rec.gamma[m];
  }
  st.live.advance();
  ++st.phase_rounds;
  if (st.live.count(k) >= st.phase_threshold) {
    st.visible = st.live;
    st.phase_arm.reset();
    ++st.phases_completed;
  }
  return rec;
}

/// Leader-follower algorithm with UCB1 indices. Agent 0 is the leader and
/// the only agent whose observations enter the statistics. Followers always
/// pull the leader's believed-best arm.
struct Dpe2State {
  std::size_t num_agents = 0;
  double alpha = 4.0;
  SharedStats leader;                 // N_hat, V_hat as of the last update
  std::vector<Count> pending_count;   // leader samples not yet merged
  std::vector<double> pending_sum;
  ArmId best = 0;
  std::deque<ArmId> explore;          // remaining arms of the current phase
  std::size_t updates = 0;

  Dpe2State() = default;
  Dpe2State(const BanditInstance& inst, double alpha_)
      : num_agents(inst.num_agents()),
        alpha(alpha_),
        leader(inst.num_arms()),
        pending_count(inst.num_arms(), 0),
        pending_sum(inst.num_arms(), 0.0) {
    // Initial sweep: every arm is unsampled, so every arm is explored once.
    for (ArmId k = 0; k < inst.num_arms(); ++k) explore.push_back(k);
  }

  [[nodiscard]] bool in_phase() const { return !explore.empty(); }

  /// D_t(k) = V_hat(k) + sqrt(alpha log t / (2 N_hat(k))); +inf if unsampled.
  [[nodiscard]] double index(ArmId k, Round t) const {
    if (leader.count(k) == 0) return std::numeric_limits<double>::infinity();
    return *leader.mean(k) + ucb_bonus(leader.count(k), t, alpha);
  }
};

namespace detail {

inline void dpe2_update(Dpe2State& st, Round t) {
  const std::size_t K = st.leader.num_arms();
  for (ArmId k = 0; k < K; ++k) {
    if (st.pending_count[k] == 0) continue;
    st.leader.merge(k, st.pending_count[k], st.pending_sum[k]);
    st.pending_count[k] = 0;
    st.pending_sum[k] = 0.0;
  }
  st.leader.advance();
  ArmId best = 0;
  bool found = false;
  for (ArmId k = 0; k < K; ++k) {
    if (st.leader.count(k) == 0) continue;
    if (!found || *st.leader.mean(k) > *st.leader.mean(best)) {
      best = k;
      found = true;
    }
  }
  st.best = best;
  const double best_mean = found ? *st.leader.mean(best) : 0.0;
  st.explore.clear();
  for (ArmId k = 0; k < K; ++k)
    if (k != best && st.index(k, t) > best_mean) st.explore.push_back(k);
  ++st.updates;
}

}  // namespace detail

/// Hook signature: void(const Dpe2State& before, const BanditInstance&,
/// RoundRecord&). Only gamma[0] (the leader) may be nonzero.
template <class Hook>
RoundRecord dpe2_round(Dpe2State& st, const BanditInstance& inst, Hook&& hook,
                       RngStream& rng) {
  require(inst.homogeneous(), Errc::HeterogeneousNotSupported,
          "DPE2 requires a homogeneous instance");
  const std::size_t M = inst.num_agents();
  RoundRecord rec(M);
  rec.t = st.leader.round() + 1;
  ArmId leader_arm = st.best;
  if (!st.explore.empty()) {
    leader_arm = st.explore.front();
    st.explore.pop_front();
  }
  rec.arms[0] = leader_arm;
  for (AgentId m = 1; m < M; ++m) rec.arms[m] = st.best;
  for (AgentId m = 0; m < M; ++m) rec.pre[m] = sample_reward(inst, rec.arms[m], rng);

  // The hook sees the state before this round's bookkeeping, with the
  // leader's arm already removed from the exploration list.
  hook(std::as_const(st), inst, rec);
  for (AgentId m = 1; m < M; ++m)
    require(rec.gamma[m] == 0.0, Errc::InvariantViolation,
            "DPE2 followers cannot be attacked");
  detail::apply_gamma(rec);

  st.pending_count[leader_arm] += 1;
  st.pending_sum[leader_arm] += rec.post[0];
  if (st.explore.empty()) {
    detail::dpe2_update(st, rec.t);
  } else {
    st.leader.advance();
  }
  return rec;
}

}  // namespace cmab
