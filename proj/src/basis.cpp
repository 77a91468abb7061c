#include "pokesim/basis.hpp"

#include <fmt/format.h>

#include "pokesim/errors.hpp"

namespace pokesim {

double PhiGrid::period() const {
  switch (kind) {
    case PhiPeriodicity::Period2Pi: return 2.0 * constants::kPi;
    case PhiPeriodicity::Period4Pi: return 4.0 * constants::kPi;
    case PhiPeriodicity::Line: break;
  }
  return 2.0 * phi_max;
}

double PhiGrid::spacing() const {
  return periodic() ? period() / n_phi : 2.0 * phi_max / (n_phi + 1);
}

std::vector<double> PhiGrid::points() const {
  std::vector<double> out(static_cast<std::size_t>(n_phi));
  const double h = spacing();
  for (int j = 0; j < n_phi; ++j) {
    out[static_cast<std::size_t>(j)] = periodic() ? j * h : -phi_max + (j + 1) * h;
  }
  return out;
}

std::size_t BasisConfig::dimension() const {
  return static_cast<std::size_t>(phi.n_phi) * static_cast<std::size_t>(chi_states()) *
         static_cast<std::size_t>(theta_states());
}

std::size_t BasisConfig::index(int phi_point, int chi_label, int theta_label) const {
  const auto c = static_cast<std::size_t>(chi_label + chi_levels);
  const auto t = static_cast<std::size_t>(theta_label + n_theta_max);
  return (static_cast<std::size_t>(phi_point) * static_cast<std::size_t>(chi_states()) + c) *
             static_cast<std::size_t>(theta_states()) +
         t;
}

void validate(const BasisConfig& basis) {
  if (basis.n_theta_max < 1) throw DomainError(fmt::format("n_theta_max must be >= 1 (got {})", basis.n_theta_max));
  if (basis.chi_levels < 0) throw DomainError(fmt::format("chi_levels must be >= 0 (got {})", basis.chi_levels));
  if (basis.stencil_order != 2 && basis.stencil_order != 4 && basis.stencil_order != 6) {
    throw DomainError(fmt::format("stencil_order must be 2, 4 or 6 (got {})", basis.stencil_order));
  }
  if (basis.phi.n_phi < 16) throw DomainError(fmt::format("n_phi must be >= 16 (got {})", basis.phi.n_phi));
  if (basis.phi.periodic() && basis.phi.n_phi % 2 != 0) {
    throw DomainError(fmt::format("n_phi must be even on periodic grids (got {})", basis.phi.n_phi));
  }
  if (!basis.phi.periodic() && !(basis.phi.phi_max > 0.0)) {
    throw DomainError(fmt::format("phi_max must be positive (got {})", basis.phi.phi_max));
  }
}

BasisConfig default_basis(PhiPeriodicity periodicity) {
  BasisConfig b;
  b.phi.kind = periodicity;
  if (periodicity != PhiPeriodicity::Line) b.phi.n_phi = periodicity == PhiPeriodicity::Period4Pi ? 256 : 128;
  return b;
}

}  // namespace pokesim
