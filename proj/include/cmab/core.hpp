#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cmab {

/// Arms and agents are numbered from 0. Arm 0 carries the largest mean.
using ArmId = std::size_t;
using AgentId = std::size_t;
using Round = std::uint64_t;
using Count = std::uint64_t;

enum class Errc {
  NonDecreasingMeans,
  MeanOutOfRange,
  EmptyArmSet,
  SingletonArmSet,
  InfeasibleGapBudget,
  ArmOutOfRange,
  AgentOutOfRange,
  UnknownFixture,
  InvalidArgument,
  ZeroCount,
  HeterogeneousNotSupported,
  TargetArmPulled,
  TooLarge,
  EmptyResidualArmSet,
  NotTargetAgent,
  ArmNotAttacked,
  ZeroGap,
  WrongStage,
  NotAtThreshold,
  DegenerateGap,
  MissingParam,
  ModeMismatch,
  ConfigError,
  InvariantViolation,
  IoError,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NonDecreasingMeans: return "NonDecreasingMeans";
    case Errc::MeanOutOfRange: return "MeanOutOfRange";
    case Errc::EmptyArmSet: return "EmptyArmSet";
    case Errc::SingletonArmSet: return "SingletonArmSet";
    case Errc::InfeasibleGapBudget: return "InfeasibleGapBudget";
    case Errc::ArmOutOfRange: return "ArmOutOfRange";
    case Errc::AgentOutOfRange: return "AgentOutOfRange";
    case Errc::UnknownFixture: return "UnknownFixture";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ZeroCount: return "ZeroCount";
    case Errc::HeterogeneousNotSupported: return "HeterogeneousNotSupported";
    case Errc::TargetArmPulled: return "TargetArmPulled";
    case Errc::TooLarge: return "TooLarge";
    case Errc::EmptyResidualArmSet: return "EmptyResidualArmSet";
    case Errc::NotTargetAgent: return "NotTargetAgent";
    case Errc::ArmNotAttacked: return "ArmNotAttacked";
    case Errc::ZeroGap: return "ZeroGap";
    case Errc::WrongStage: return "WrongStage";
    case Errc::NotAtThreshold: return "NotAtThreshold";
    case Errc::DegenerateGap: return "DegenerateGap";
    case Errc::MissingParam: return "MissingParam";
    case Errc::ModeMismatch: return "ModeMismatch";
    case Errc::ConfigError: return "ConfigError";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace cmab
