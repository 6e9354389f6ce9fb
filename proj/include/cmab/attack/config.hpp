#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cmab/core.hpp"

namespace cmab {

enum class Strategy { None, HomoCoUcb, HomoTcom, HomoDpe2, OracleAttack, Lta };

/// Which agents a homogeneous-style attack may manipulate.
enum class AttackScope { Single, All };

constexpr std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::None: return "none";
    case Strategy::HomoCoUcb: return "homo_coucb";
    case Strategy::HomoTcom: return "homo_tcom";
    case Strategy::HomoDpe2: return "homo_dpe2";
    case Strategy::OracleAttack: return "oracle_attack";
    case Strategy::Lta: return "lta";
  }
  return "none";
}

inline Strategy parse_strategy(std::string_view s) {
  for (auto v : {Strategy::None, Strategy::HomoCoUcb, Strategy::HomoTcom,
                 Strategy::HomoDpe2, Strategy::OracleAttack, Strategy::Lta})
    if (to_string(v) == s) return v;
  throw Error(Errc::ConfigError, "unknown attack strategy '" + std::string(s) + "'");
}

struct AttackConfig {
  Strategy strategy = Strategy::None;
  /// Target arm for the homogeneous strategies; the worst arm when unset.
  std::optional<ArmId> target_arm;
  double delta0 = 0.1;
  double delta = 0.1;
  /// Minimum mean gap assumed by the learning stage of LTA.
  double delta_min = 0.1;
  /// Strict slack for the LTA incentive condition; defaults to delta0.
  std::optional<double> margin;
  AttackScope scope = AttackScope::Single;
  AgentId attacked_agent = 0;
  /// OA/LTA: false selects the single largest group instead of AAS.
  bool use_aas = true;

  [[nodiscard]] double incentive_margin() const { return margin.value_or(delta0); }

  void validate() const {
    require(delta0 > 0.0, Errc::ConfigError, "delta0 must be positive");
    require(delta > 0.0 && delta < 0.5, Errc::ConfigError,
            "delta must lie in (0, 1/2)");
    require(delta_min > 0.0, Errc::ConfigError, "delta_min must be positive");
    require(incentive_margin() > 0.0, Errc::ConfigError, "margin must be positive");
  }
};

}  // namespace cmab
