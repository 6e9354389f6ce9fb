#pragma once

#include <cmath>
#include <vector>

#include "cmab/algo.hpp"
#include "cmab/core.hpp"

namespace cmab {

struct LedgerEntry {
  Round t;
  AgentId agent;
  ArmId arm;
  double gamma;
};

/// Record of every nonzero manipulation. Cost is sum |gamma| over attacked
/// agents and rounds.
class AttackLedger {
 public:
  AttackLedger() = default;
  AttackLedger(std::size_t num_arms, std::size_t num_agents)
      : per_arm_(num_arms, 0.0),
        per_agent_(num_agents, 0.0),
        attacked_(num_agents, false) {}

  void record(const RoundRecord& rec) {
    for (AgentId m = 0; m < rec.gamma.size(); ++m) {
      const double g = rec.gamma[m];
      if (g == 0.0) continue;
      entries_.push_back({rec.t, m, rec.arms[m], g});
      const double a = std::abs(g);
      total_ += a;
      per_arm_.at(rec.arms[m]) += a;
      per_agent_.at(m) += a;
      attacked_[m] = true;
    }
  }

  [[nodiscard]] double total_cost() const { return total_; }
  [[nodiscard]] const std::vector<LedgerEntry>& entries() const { return entries_; }
  [[nodiscard]] const std::vector<double>& per_arm_cost() const { return per_arm_; }
  [[nodiscard]] const std::vector<double>& per_agent_cost() const { return per_agent_; }
  /// The set D of agents whose observations were ever changed.
  [[nodiscard]] std::vector<AgentId> attacked_agents() const {
    std::vector<AgentId> out;
    for (AgentId m = 0; m < attacked_.size(); ++m)
      if (attacked_[m]) out.push_back(m);
    return out;
  }

 private:
  std::vector<LedgerEntry> entries_;
  std::vector<double> per_arm_;
  std::vector<double> per_agent_;
  std::vector<bool> attacked_;
  double total_ = 0.0;
};

}  // namespace cmab
