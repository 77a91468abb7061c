#pragma once

#include <numbers>
#include <string>
#include <string_view>

namespace pokesim {

namespace constants {
// Exact SI values (2019 redefinition).
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kReducedFluxQuantum = kPlanck / (2.0 * kElementaryCharge) / (2.0 * kPi);  // Phi0 / 2pi
}  // namespace constants

/// Energy unit used for every energy carried by the library.
///
/// An energy E expressed in this unit corresponds to the physical energy
/// E * h * hz. Internally hbar = 1, so an angular frequency and an energy
/// are the same number; `angular()` converts one internal unit to rad/s and
/// `time_unit()` gives the duration (s) of one internal time unit.
struct EnergyUnit {
  std::string label = "GHz";
  double hz = 1e9;

  double angular() const { return 2.0 * constants::kPi * hz; }
  double time_unit() const { return 1.0 / angular(); }

  /// Recognises GHz, MHz, kHz and Hz (energy quoted as E/h).
  static EnergyUnit from_label(std::string_view label);
};

bool operator==(const EnergyUnit& a, const EnergyUnit& b);

}  // namespace pokesim
