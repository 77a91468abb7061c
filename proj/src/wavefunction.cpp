#include "pokesim/wavefunction.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <fmt/os.h>

#include "pokesim/errors.hpp"

namespace pokesim {

using constants::kPi;

double WavefunctionGrid::norm() const {
  if (theta.empty() || phi.size() < 2) return 0.0;
  const double dtheta = 2.0 * kPi / static_cast<double>(theta.size());
  const double dphi = phi[1] - phi[0];
  double s = 0;
  for (double v : psi2) s += v;
  return s * dtheta * dphi;
}

double potential(const DerivedEnergies& e, double theta, double phi, double f) {
  double v = 0;
  switch (e.periodicity) {
    case PhiPeriodicity::Line: v = e.E_L * phi * phi; break;
    case PhiPeriodicity::Period2Pi: v = e.E_J_eff * (1.0 - std::cos(phi)); break;
    case PhiPeriodicity::Period4Pi: v = e.E_J_eff * (1.0 - std::cos(0.5 * phi)); break;
  }
  return 2.0 * e.E_J - 2.0 * e.E_J * std::cos(theta) * std::cos(phi - kPi * f) + v;
}

WavefunctionGrid wavefunction_grid(const DerivedEnergies& e, const BasisConfig& b, double f,
                                   std::span<const double> vector, std::size_t state, double eigenvalue,
                                   int n_theta_grid) {
  if (vector.size() != b.dimension()) throw DomainError("eigenvector dimension does not match the basis");
  if (n_theta_grid < b.theta_states()) throw DomainError("theta grid is coarser than the charge basis");
  WavefunctionGrid g;
  g.state = state;
  g.eigenvalue = eigenvalue;
  g.phi = b.phi.points();
  const auto nt = static_cast<std::size_t>(n_theta_grid);
  const std::size_t np = g.phi.size();
  g.theta.resize(nt);
  for (std::size_t i = 0; i < nt; ++i) g.theta[i] = -kPi + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(nt);
  g.psi2.assign(nt * np, 0.0);
  g.potential.resize(nt * np);
  const double scale = 1.0 / (2.0 * kPi * b.phi.spacing());

  // Real Fourier basis: label 0 constant, +n sqrt(2) cos(n theta), -n sqrt(2) sin(n theta).
  const auto labels = static_cast<std::size_t>(b.theta_states());
  std::vector<double> modes(labels * nt);
  for (std::size_t i = 0; i < nt; ++i) {
    for (int n = -b.n_theta_max; n <= b.n_theta_max; ++n) {
      const double x = std::abs(n) * g.theta[i];
      const double m = n == 0 ? 1.0 : std::sqrt(2.0) * (n > 0 ? std::cos(x) : std::sin(x));
      modes[static_cast<std::size_t>(n + b.n_theta_max) * nt + i] = m;
    }
  }
  for (std::size_t j = 0; j < np; ++j) {
    for (int chi = -b.chi_levels; chi <= b.chi_levels; ++chi) {
      for (std::size_t i = 0; i < nt; ++i) {
        double amp = 0;
        for (int n = -b.n_theta_max; n <= b.n_theta_max; ++n) {
          amp += vector[b.index(static_cast<int>(j), chi, n)] * modes[static_cast<std::size_t>(n + b.n_theta_max) * nt + i];
        }
        g.psi2[i * np + j] += amp * amp * scale;
      }
    }
    for (std::size_t i = 0; i < nt; ++i) g.potential[i * np + j] = potential(e, g.theta[i], g.phi[j], f);
  }
  return g;
}

void write_wavefunction_csv(const WavefunctionGrid& g, const std::filesystem::path& path) {
  auto out = fmt::output_file(path.string());
  out.print("theta,phi,psi2,U\n");
  for (std::size_t i = 0; i < g.theta.size(); ++i) {
    for (std::size_t j = 0; j < g.phi.size(); ++j) {
      out.print("{:.17g},{:.17g},{:.17g},{:.17g}\n", g.theta[i], g.phi[j], g.psi2[i * g.phi.size() + j],
                g.potential[i * g.phi.size() + j]);
    }
  }
}

}  // namespace pokesim
