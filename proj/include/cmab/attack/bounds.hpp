#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cmab/algo.hpp"
#include "cmab/attack/planning.hpp"

namespace cmab {

/// Smallest integer t >= 3 with t / log t >= c. t / log t is increasing for
/// t >= 3, so an upward scan finds it.
inline Round t0_scan(double c) {
  Round t = 3;
  while (static_cast<double>(t) / std::log(static_cast<double>(t)) < c) ++t;
  return t;
}

struct T0Constants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  [[nodiscard]] double total() const { return c1 + c2 + c3; }
};

/// Per-arm constants c_{k,1..3} of the Oracle Attack warm-up threshold.
inline std::map<ArmId, T0Constants> t0_constants(const BanditInstance& inst,
                                                 const AttackPlan& plan,
                                                 double alpha, double delta0) {
  auto sq_gap = [&](ArmId a, ArmId b) {
    const double g = inst.gap(a, b);
    require(g != 0.0, Errc::DegenerateGap, "zero gap in T0 constants");
    return g * g;
  };
  std::map<ArmId, T0Constants> out;
  for (ArmId k : plan.attacked_arms) {
    const AgentId g = plan.responsible.at(k);
    const ArmId k0g = plan.fallback_arm.at(g);
    T0Constants c;
    for (ArmId k2 : inst.arm_set(g))
      if (!plan.is_attacked(k2) && k2 != k0g) c.c1 += alpha / (2.0 * sq_gap(k0g, k2));

    std::optional<double> min_sq;
    for (AgentId m : plan.affected) {
      if (local_optimal(inst, m) != k) continue;
      const ArmId k0m = plan.fallback_arm.at(m);
      if (k0m == k0g) continue;
      const double v = sq_gap(k0m, k0g);
      if (!min_sq || v < *min_sq) min_sq = v;
    }
    if (min_sq) c.c2 = alpha / (2.0 * *min_sq);

    std::size_t shared = 0;
    for (ArmId k2 : inst.arm_set(g)) shared += plan.is_attacked(k2) ? 1 : 0;
    c.c3 = static_cast<double>(shared) * alpha / (delta0 * delta0);
    out[k] = c;
  }
  return out;
}

inline Round compute_T0(const BanditInstance& inst, const AttackPlan& plan,
                        double alpha, double delta0) {
  require(alpha > 2.0, Errc::InvalidArgument, "T0 analysis assumes alpha > 2");
  double worst = 0.0;
  for (const auto& [k, c] : t0_constants(inst, plan, alpha, delta0))
    worst = std::max(worst, c.total());
  return t0_scan(worst);
}

enum class BoundKind { HomoCoUcb, OracleAttack, Lta, HomoTcom, HomoDpe2 };

/// Inputs for the closed-form guarantees. `gaps` holds Delta(k, K) for every
/// non-target arm (homogeneous kinds) or for every arm of K0 (OA, LTA); `group_sizes`
/// holds M_*(k) for the arms of K0 in the same order.
struct BoundParams {
  std::optional<double> horizon;
  std::optional<std::size_t> num_arms;
  std::optional<std::size_t> num_agents;
  std::optional<double> alpha;
  std::optional<double> delta0;
  std::optional<double> delta;
  std::optional<double> sigma;
  std::optional<std::vector<double>> gaps;
  std::optional<double> gap_best_worst;  // Delta(1, K)
  std::optional<std::vector<double>> group_sizes;
  std::optional<double> delta_min;
  std::optional<double> t0;
  std::optional<double> access_rate;  // c
  std::optional<double> b;
  std::optional<double> beta_phase;
};

struct BoundValues {
  double regret_lb = 0.0;
  double cost_ub = 0.0;
  /// Homogeneous kinds: non-target global pulls. OA, LTA: local-optimal pulls of each
  /// affected agent.
  double pulls_bound = 0.0;
};

namespace detail {

template <class T>
const T& need(const std::optional<T>& v, const char* name) {
  require(v.has_value(), Errc::MissingParam, name);
  return *v;
}

/// log that vanishes below 1, keeping the bounds finite at tiny horizons.
inline double log_floor(double x) { return x > 1.0 ? std::log(x) : 0.0; }

}  // namespace detail

inline BoundValues theoretical_cost_bound(BoundKind kind, const BoundParams& p) {
  using detail::need;
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  const double T = need(p.horizon, "horizon");
  const double K = static_cast<double>(need(p.num_arms, "num_arms"));
  const double d0 = need(p.delta0, "delta0");
  const double delta = need(p.delta, "delta");
  const double sigma = need(p.sigma, "sigma");
  const auto& gaps = need(p.gaps, "gaps");
  const double logT = detail::log_floor(T);
  const double d0sq = d0 * d0;
  const double gap_sum = std::accumulate(gaps.begin(), gaps.end(), 0.0,
                                         [&](double acc, double g) { return acc + g + d0; });

  BoundValues v;
  switch (kind) {
    case BoundKind::HomoCoUcb: {
      const double alpha = need(p.alpha, "alpha");
      const double M = static_cast<double>(need(p.num_agents, "num_agents"));
      const double per_arm = alpha / (2.0 * d0sq) * logT;
      v.pulls_bound = (K - 1.0) * per_arm;
      v.cost_ub = per_arm * gap_sum +
                  4.0 * (K - 1.0) * sigma / d0 *
                      std::sqrt(alpha * logT *
                                detail::log_floor(K * pi2 * alpha * alpha * logT * logT /
                                                  (12.0 * delta * d0sq * d0sq)));
      v.regret_lb = std::max(0.0, M * T - v.pulls_bound) *
                    need(p.gap_best_worst, "gap_best_worst");
      break;
    }
    case BoundKind::HomoTcom: {
      const double beta = need(p.beta_phase, "beta_phase");
      const double M = static_cast<double>(need(p.num_agents, "num_agents"));
      const double per_arm = 2.0 * beta / d0sq * logT;
      v.pulls_bound = (K - 1.0) * per_arm;
      v.cost_ub = per_arm * gap_sum +
                  8.0 * (K - 1.0) * sigma * sigma / d0sq *
                      std::sqrt(beta * logT *
                                detail::log_floor(4.0 * K * beta * beta * pi2 * logT * logT /
                                                  (3.0 * delta * d0sq * d0sq)));
      v.regret_lb = std::max(0.0, M * T - v.pulls_bound) *
                    need(p.gap_best_worst, "gap_best_worst");
      break;
    }
    case BoundKind::HomoDpe2: {
      const double alpha = need(p.alpha, "alpha");
      const double M = static_cast<double>(need(p.num_agents, "num_agents"));
      const double per_arm = alpha / (2.0 * d0sq) * logT + 1.0;
      const double target_lb = M * (T - K) - (K - 1.0) * per_arm;
      v.pulls_bound = M * T - target_lb;
      v.cost_ub = per_arm * gap_sum +
                  4.0 * (K - 1.0) * sigma *
                      std::sqrt(2.0 * per_arm *
                                detail::log_floor(K * pi2 / (3.0 * delta) * per_arm * per_arm));
      v.regret_lb = std::max(0.0, target_lb) * need(p.gap_best_worst, "gap_best_worst");
      break;
    }
    case BoundKind::OracleAttack:
    case BoundKind::Lta: {
      const double alpha = need(p.alpha, "alpha");
      const double dmin = need(p.delta_min, "delta_min");
      const double t0 = need(p.t0, "t0");
      const auto& sizes = need(p.group_sizes, "group_sizes");
      require(sizes.size() == gaps.size(), Errc::InvalidArgument,
              "group_sizes and gaps must align");
      v.pulls_bound = 2.0 * alpha * logT / d0sq;
      const double noise =
          4.0 * sigma / d0 *
          std::sqrt(alpha * logT *
                    detail::log_floor(K * pi2 * alpha * alpha * logT * logT /
                                      (12.0 * delta * d0sq * d0sq)));
      for (std::size_t i = 0; i < gaps.size(); ++i) {
        v.regret_lb += dmin * (sizes[i] * T - v.pulls_bound);
        v.cost_ub += alpha * logT / (2.0 * d0sq) * (gaps[i] + d0) + t0 + noise;
      }
      if (kind == BoundKind::Lta) {
        const double c = need(p.access_rate, "access_rate");
        require(c > 0.0, Errc::InvalidArgument, "accessibility rate must be positive");
        const double beta1 = confidence_radius(1, static_cast<std::size_t>(K), delta);
        v.cost_ub += 4.0 * K * logT / (c * dmin * dmin) *
                     (need(p.gap_best_worst, "gap_best_worst") + beta1 + need(p.b, "b"));
      }
      break;
    }
  }
  return v;
}

}  // namespace cmab
