#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmab/core.hpp"
#include "cmab/rng.hpp"

namespace cmab {

/// Ground-truth environment: K arms with strictly decreasing means in [0, b],
/// Gaussian noise with standard deviation sigma, and one arm set per agent.
/// Only constructible through build_instance(), which enforces the invariants.
class BanditInstance {
 public:
  [[nodiscard]] std::size_t num_arms() const { return means_.size(); }
  [[nodiscard]] std::size_t num_agents() const { return arm_sets_.size(); }
  [[nodiscard]] double mean(ArmId k) const { return means_.at(k); }
  [[nodiscard]] std::span<const double> means() const { return means_; }
  [[nodiscard]] double sigma() const { return sigma_; }
  [[nodiscard]] double bound() const { return bound_; }
  [[nodiscard]] std::span<const ArmId> arm_set(AgentId m) const {
    return arm_sets_.at(m);
  }
  [[nodiscard]] const std::vector<std::vector<ArmId>>& arm_sets() const {
    return arm_sets_;
  }
  [[nodiscard]] bool has_arm(AgentId m, ArmId k) const {
    const auto& set = arm_sets_.at(m);
    return std::binary_search(set.begin(), set.end(), k);
  }
  [[nodiscard]] bool homogeneous() const { return homogeneous_; }
  /// Worst arm, the default attack target.
  [[nodiscard]] ArmId worst_arm() const { return means_.size() - 1; }

  /// Delta(k, k') = mu(k) - mu(k').
  [[nodiscard]] double gap(ArmId k, ArmId k2) const {
    return means_.at(k) - means_.at(k2);
  }
  [[nodiscard]] double min_gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < means_.size(); ++k)
      g = std::min(g, means_[k] - means_[k + 1]);
    return g;
  }

 private:
  friend BanditInstance build_instance(std::vector<double>, double, double,
                                       std::vector<std::vector<ArmId>>);
  BanditInstance() = default;

  std::vector<double> means_;
  double sigma_ = 0.0;
  double bound_ = 1.0;
  std::vector<std::vector<ArmId>> arm_sets_;
  bool homogeneous_ = true;
};

inline BanditInstance build_instance(std::vector<double> means, double sigma,
                                     double b,
                                     std::vector<std::vector<ArmId>> arm_sets) {
  require(!means.empty(), Errc::InvalidArgument, "at least one arm required");
  require(!arm_sets.empty(), Errc::InvalidArgument, "at least one agent required");
  require(std::isfinite(sigma) && sigma >= 0.0, Errc::InvalidArgument,
          "sigma must be finite and nonnegative");
  require(std::isfinite(b) && b > 0.0, Errc::InvalidArgument,
          "mean bound b must be finite and positive");
  for (std::size_t k = 0; k < means.size(); ++k) {
    require(std::isfinite(means[k]), Errc::InvalidArgument, "non-finite mean");
    require(means[k] >= 0.0 && means[k] <= b, Errc::MeanOutOfRange,
            "mean of arm " + std::to_string(k) + " outside [0, b]");
    if (k > 0)
      require(means[k - 1] > means[k], Errc::NonDecreasingMeans,
              "means must be strictly decreasing at arm " + std::to_string(k));
  }

  const std::size_t num_arms = means.size();
  bool homogeneous = true;
  for (std::size_t m = 0; m < arm_sets.size(); ++m) {
    auto& set = arm_sets[m];
    require(!set.empty(), Errc::EmptyArmSet,
            "agent " + std::to_string(m) + " has an empty arm set");
    for (ArmId k : set)
      require(k < num_arms, Errc::ArmOutOfRange,
              "agent " + std::to_string(m) + " references arm " + std::to_string(k));
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (set.size() != num_arms) homogeneous = false;
  }
  if (!homogeneous) {
    for (std::size_t m = 0; m < arm_sets.size(); ++m)
      require(arm_sets[m].size() > 1, Errc::SingletonArmSet,
              "agent " + std::to_string(m) + " has a single arm");
  }

  BanditInstance inst;
  inst.means_ = std::move(means);
  inst.sigma_ = sigma;
  inst.bound_ = b;
  inst.arm_sets_ = std::move(arm_sets);
  inst.homogeneous_ = homogeneous;
  return inst;
}

inline std::vector<std::vector<ArmId>> full_arm_sets(std::size_t num_arms,
                                                     std::size_t num_agents) {
  std::vector<ArmId> all(num_arms);
  std::iota(all.begin(), all.end(), ArmId{0});
  return std::vector<std::vector<ArmId>>(num_agents, all);
}

struct RandomInstanceParams {
  std::size_t num_arms = 20;
  std::size_t num_agents = 20;
  std::size_t set_size = 5;
  double mean_low = 0.0;
  double mean_high = 5.0;
  double min_gap = 0.1;
  double b = 5.0;
  double sigma = 0.1;
};

/// Means are K draws from (mean_low, mean_high) with every adjacent gap at
/// least min_gap; each agent receives a uniform set_size-subset of arms.
/// Arm-set draws are repeated until every arm is reachable by some agent
/// (whenever M * set_size >= K makes that possible).
inline BanditInstance random_instance(const RandomInstanceParams& p,
                                      RngStream& rng) {
  const std::size_t K = p.num_arms;
  require(K >= 1 && p.num_agents >= 1, Errc::InvalidArgument,
          "need at least one arm and one agent");
  require(p.mean_high > p.mean_low, Errc::InvalidArgument, "empty mean range");
  require(p.min_gap >= 0.0, Errc::InvalidArgument, "min_gap must be nonnegative");
  require(static_cast<double>(K) * p.min_gap < p.mean_high - p.mean_low,
          Errc::InfeasibleGapBudget, "K * min_gap exceeds the mean range");
  require(p.set_size > 1 && p.set_size <= K, Errc::InvalidArgument,
          "set_size must satisfy 1 < set_size <= K");

  // Sorted uniforms on the shrunken interval, then re-inflated by i * min_gap.
  const double slack =
      (p.mean_high - p.mean_low) - static_cast<double>(K - 1) * p.min_gap;
  std::vector<double> u(K);
  for (auto& x : u) {
    do {
      x = rng.uniform() * slack;
    } while (x <= 0.0);
  }
  std::sort(u.begin(), u.end());
  std::vector<double> means(K);
  for (std::size_t i = 0; i < K; ++i)
    means[K - 1 - i] = p.mean_low + u[i] + static_cast<double>(i) * p.min_gap;

  const bool need_cover = p.num_agents * p.set_size >= K;
  std::vector<std::vector<ArmId>> sets;
  for (int attempt = 0;; ++attempt) {
    require(attempt < 100000, Errc::InvalidArgument,
            "could not draw arm sets covering every arm");
    sets.assign(p.num_agents, {});
    std::vector<bool> covered(K, false);
    std::vector<ArmId> pool(K);
    for (auto& set : sets) {
      std::iota(pool.begin(), pool.end(), ArmId{0});
      for (std::size_t i = 0; i < p.set_size; ++i) {
        const auto j = i + static_cast<std::size_t>(rng() % (K - i));
        std::swap(pool[i], pool[j]);
        set.push_back(pool[i]);
        covered[pool[i]] = true;
      }
      std::sort(set.begin(), set.end());
    }
    if (!need_cover || std::all_of(covered.begin(), covered.end(),
                                   [](bool c) { return c; }))
      break;
  }
  return build_instance(std::move(means), p.sigma, p.b, std::move(sets));
}

/// One Gaussian draw N(mu(arm), sigma).
inline double sample_reward(const BanditInstance& inst, ArmId arm,
                            RngStream& rng) {
  require(arm < inst.num_arms(), Errc::ArmOutOfRange,
          "arm " + std::to_string(arm) + " out of range");
  return inst.mean(arm) + inst.sigma() * rng.gaussian();
}

/// k*^(m): the best arm in agent m's set. Arm sets are sorted and arm ids
/// follow decreasing means, so this is the first element.
inline ArmId local_optimal(const BanditInstance& inst, AgentId m) {
  require(m < inst.num_agents(), Errc::AgentOutOfRange,
          "agent " + std::to_string(m) + " out of range");
  return inst.arm_set(m).front();
}

inline constexpr std::uint64_t kFixtureSeed = 2024;

inline RandomInstanceParams fixture_params(bool heterogeneous) {
  RandomInstanceParams p;
  p.set_size = heterogeneous ? 5 : p.num_arms;
  return p;
}

inline constexpr std::string_view kFixtureNames[] = {"fig1a", "fig1b", "homo20",
                                                     "hetero20"};

/// Canonical instances. fig1a / fig1b are the two-agent illustrations with
/// means (9, 8, 3); homo20 / hetero20 are the 20-arm, 20-agent experiment
/// settings drawn from kFixtureSeed.
inline BanditInstance fixture(std::string_view name) {
  if (name == "fig1a")
    return build_instance({9.0, 8.0, 3.0}, 0.5, 10.0, {{0, 1, 2}, {0, 1}});
  if (name == "fig1b")
    return build_instance({9.0, 8.0, 3.0}, 0.5, 10.0, {{0, 1}, {1, 2}});
  if (name == "homo20" || name == "hetero20") {
    RngStream rng(kFixtureSeed);
    return random_instance(fixture_params(name == "hetero20"), rng);
  }
  throw Error(Errc::UnknownFixture, std::string(name));
}

}  // namespace cmab
