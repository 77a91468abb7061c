#include "pokesim/units.hpp"

#include "pokesim/errors.hpp"

namespace pokesim {

EnergyUnit EnergyUnit::from_label(std::string_view label) {
  if (label == "GHz") return {"GHz", 1e9};
  if (label == "MHz") return {"MHz", 1e6};
  if (label == "kHz") return {"kHz", 1e3};
  if (label == "Hz") return {"Hz", 1.0};
  throw DomainError("unknown energy unit '" + std::string(label) + "' (expected GHz, MHz, kHz or Hz)");
}

bool operator==(const EnergyUnit& a, const EnergyUnit& b) { return a.label == b.label && a.hz == b.hz; }

}  // namespace pokesim
