#include "pokesim/analytic.hpp"

#include <cmath>
#include <fmt/format.h>

#include "pokesim/errors.hpp"

namespace pokesim::analytic {

namespace {

using constants::kPi;

void check_positive(std::initializer_list<std::pair<const char*, double>> values) {
  for (const auto& [name, v] : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(fmt::format("{} must be positive (got {})", name, v));
  }
}

}  // namespace

GaussianAnsatz gaussian_ansatz(double E_J, double E_L, double E_ctheta, double E_cphi) {
  check_positive({{"E_J", E_J}, {"E_L", E_L}, {"E_ctheta", E_ctheta}, {"E_cphi", E_cphi}});
  GaussianAnsatz g;
  g.alpha_theta_sq = 0.5 * std::sqrt(E_J / E_ctheta);
  g.alpha_phi_sq = 0.5 * std::sqrt((E_J + E_L) / E_cphi);
  g.center1_theta = kPi;
  g.center1_phi = kPi * E_J / (E_J + E_L);
  return g;
}

double epsilon10(double E_J, double E_L) {
  check_positive({{"E_J", E_J}, {"E_L", E_L}});
  return E_J * E_L * kPi * kPi / (E_J + E_L);
}

double a_f(double E_J, double E_L, double E_ctheta, double E_cphi) {
  check_positive({{"E_J", E_J}, {"E_L", E_L}, {"E_ctheta", E_ctheta}, {"E_cphi", E_cphi}});
  return 2.0 * kPi * E_J * std::sin(E_L * kPi / (E_J + E_L)) *
         std::exp(-0.5 * (std::sqrt(E_ctheta / E_J) + std::sqrt(E_cphi / (E_J + E_L))));
}

double gamma(double E_J, double E_L, double E_ctheta, double E_cphi) {
  check_positive({{"E_J", E_J}, {"E_L", E_L}, {"E_ctheta", E_ctheta}, {"E_cphi", E_cphi}});
  const double r = E_J / (E_J + E_L);
  return kPi * kPi / 8.0 * (std::sqrt(E_J / E_ctheta) + r * r * std::sqrt((E_J + E_L) / E_cphi));
}

BFactors b_factors(double E_J, double E_L, double E_ctheta, double E_cphi) {
  const double damp = std::exp(-gamma(E_J, E_L, E_ctheta, E_cphi));
  return {2.0 * kPi * std::sqrt(E_ctheta * E_J) * damp, 2.0 * kPi * std::sqrt(E_cphi * (E_J + E_L)) * damp};
}

PairEnergy effective_ej_pair(double E_Jprime, double E_cchi) {
  check_positive({{"E_Jprime", E_Jprime}, {"E_cchi", E_cchi}});
  PairEnergy p;
  const double eta = 0.5 * std::sqrt(E_cchi / E_Jprime);
  p.E_J1 = 2.0 * E_Jprime * std::exp(-eta);
  p.omega_chi = 4.0 * std::sqrt(E_Jprime * E_cchi);
  p.epsilon10 = 2.0 * p.E_J1;
  p.regime_warning = E_cchi >= E_Jprime;
  return p;
}

TwoPairEnergy effective_ej_two_pairs(double E_Jprime, double E_cxi) {
  check_positive({{"E_Jprime", E_Jprime}, {"E_cxi", E_cxi}});
  TwoPairEnergy p;
  const double eta = 0.5 * std::sqrt(E_cxi / E_Jprime);
  const double eta2 = 0.5 * eta * std::exp(0.5 * eta);
  p.E_J2 = 4.0 * E_Jprime * std::exp(-(eta + eta2));
  p.epsilon10 = p.E_J2;
  p.regime_warning = E_cxi >= E_Jprime;
  return p;
}

std::vector<double> gaussian_ansatz_vector(const DerivedEnergies& e, const BasisConfig& b, int which) {
  if (b.phi.periodic()) throw DomainError("the Gaussian ansatz is defined on a line phi grid");
  if (which != 0 && which != 1) throw DomainError("which must be 0 or 1");
  if (b.chi_levels != 0) throw DomainError("the Gaussian ansatz has no chi mode");
  const auto g = gaussian_ansatz(e.E_J, e.E_L, e.E_ctheta, e.E_cphi);
  const double ct = which == 0 ? g.center0_theta : g.center1_theta;
  const double cp = which == 0 ? g.center0_phi : g.center1_phi;

  // Real Fourier coefficients of exp(-alpha^2 (theta - c)^2 / 2) on the circle.
  std::vector<double> theta(static_cast<std::size_t>(b.theta_states()));
  double tn = 0;
  for (int n = 0; n <= b.n_theta_max; ++n) {
    const double w = std::exp(-0.5 * n * n / g.alpha_theta_sq);
    const double c = n == 0 ? w : std::sqrt(2.0) * w * std::cos(n * ct);
    const double s = n == 0 ? 0.0 : std::sqrt(2.0) * w * std::sin(n * ct);
    theta[static_cast<std::size_t>(n + b.n_theta_max)] = c;
    if (n > 0) theta[static_cast<std::size_t>(b.n_theta_max - n)] = s;
    tn += c * c + s * s;
  }
  const auto points = b.phi.points();
  std::vector<double> phi(points.size());
  double pn = 0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double d = points[j] - cp;
    phi[j] = std::exp(-0.5 * g.alpha_phi_sq * d * d) * std::sqrt(b.phi.spacing());
    pn += phi[j] * phi[j];
  }
  std::vector<double> out(b.dimension());
  const double scale = 1.0 / std::sqrt(tn * pn);
  for (int j = 0; j < b.phi.n_phi; ++j) {
    for (int n = -b.n_theta_max; n <= b.n_theta_max; ++n) {
      out[b.index(j, 0, n)] = scale * phi[static_cast<std::size_t>(j)] * theta[static_cast<std::size_t>(n + b.n_theta_max)];
    }
  }
  return out;
}

}  // namespace pokesim::analytic
