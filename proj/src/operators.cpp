#include "pokesim/operators.hpp"

#include <cmath>
#include <fmt/format.h>

#include "pokesim/errors.hpp"

namespace pokesim {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
using constants::kPi;

SparseMatrix from_triplets(std::size_t dim, const Triplets& triplets) {
  SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

int wrap(int j, int n) { return ((j % n) + n) % n; }

// Couples phi points j and j +- m with coefficient c[m] / h^p, copying the
// coupling onto every (chi, theta) pair. Walls truncate Line grids.
void add_phi_stencil(Triplets& t, const BasisConfig& b, const std::vector<double>& c, double scale,
                     bool antisymmetric) {
  const int n = b.phi.n_phi;
  const bool periodic = b.phi.periodic();
  for (int j = 0; j < n; ++j) {
    for (std::size_t m = 0; m < c.size(); ++m) {
      if (c[m] == 0.0) continue;
      const int offsets[2] = {static_cast<int>(m), -static_cast<int>(m)};
      for (int side = 0; side < (m == 0 ? 1 : 2); ++side) {
        int k = j + offsets[side];
        if (periodic) {
          k = wrap(k, n);
        } else if (k < 0 || k >= n) {
          continue;
        }
        const double sign = antisymmetric && side == 1 ? -1.0 : 1.0;
        const double value = scale * sign * c[m];
        for (int chi = -b.chi_levels; chi <= b.chi_levels; ++chi) {
          for (int th = -b.n_theta_max; th <= b.n_theta_max; ++th) {
            t.emplace_back(static_cast<Eigen::Index>(b.index(j, chi, th)),
                           static_cast<Eigen::Index>(b.index(k, chi, th)), value);
          }
        }
      }
    }
  }
}

// Real Fourier basis of a periodic mode with cutoff m: label 0 is the
// constant, +n is sqrt(2) cos(n x), -n is sqrt(2) sin(n x) (up to 1/sqrt(2 pi)).
// cos(x) couples 0 <-> +1 with 1/sqrt(2), and +-n <-> +-(n+1) with 1/2.
template <class Emit>
void for_each_cos_pair(int m, Emit emit) {
  if (m >= 1) emit(0, 1, 1.0 / std::sqrt(2.0));
  for (int n = 1; n < m; ++n) {
    emit(n, n + 1, 0.5);
    emit(-n, -(n + 1), 0.5);
  }
}

// Charge operator -i d/dx in the same basis, stored as the real
// antisymmetric part A of i A: A(sin_n, cos_n) = n.
template <class Emit>
void for_each_charge_pair(int m, Emit emit) {
  for (int n = 1; n <= m; ++n) emit(-n, n, static_cast<double>(n));
}

// Diagonal in phi and chi, cos(theta) in theta, weighted by w(phi_j).
template <class W>
void add_cos_theta(Triplets& t, const BasisConfig& b, W weight) {
  const auto phi = b.phi.points();
  for (int j = 0; j < b.phi.n_phi; ++j) {
    const double w = weight(phi[static_cast<std::size_t>(j)]);
    if (w == 0.0) continue;
    for (int chi = -b.chi_levels; chi <= b.chi_levels; ++chi) {
      for_each_cos_pair(b.n_theta_max, [&](int p, int q, double c) {
        const auto a = static_cast<Eigen::Index>(b.index(j, chi, p));
        const auto d = static_cast<Eigen::Index>(b.index(j, chi, q));
        t.emplace_back(a, d, w * c);
        t.emplace_back(d, a, w * c);
      });
    }
  }
}

template <class D>
void add_diagonal(Triplets& t, const BasisConfig& b, D value) {
  const auto phi = b.phi.points();
  for (int j = 0; j < b.phi.n_phi; ++j) {
    for (int chi = -b.chi_levels; chi <= b.chi_levels; ++chi) {
      for (int th = -b.n_theta_max; th <= b.n_theta_max; ++th) {
        const double v = value(phi[static_cast<std::size_t>(j)], chi, th);
        if (v != 0.0) {
          const auto i = static_cast<Eigen::Index>(b.index(j, chi, th));
          t.emplace_back(i, i, v);
        }
      }
    }
  }
}

// cos(chi) in the real Fourier basis of chi, weighted by w(phi_j).
template <class W>
void add_cos_chi(Triplets& t, const BasisConfig& b, W weight) {
  const auto phi = b.phi.points();
  for (int j = 0; j < b.phi.n_phi; ++j) {
    const double w = weight(phi[static_cast<std::size_t>(j)]);
    if (w == 0.0) continue;
    for_each_cos_pair(b.chi_levels, [&](int p, int q, double c) {
      for (int th = -b.n_theta_max; th <= b.n_theta_max; ++th) {
        const auto a = static_cast<Eigen::Index>(b.index(j, p, th));
        const auto d = static_cast<Eigen::Index>(b.index(j, q, th));
        t.emplace_back(a, d, w * c);
        t.emplace_back(d, a, w * c);
      }
    });
  }
}

// 4 E_ct N_theta^2 + 4 E_cp N_phi^2 + 2 E_J - 2 E_J cos(theta) cos(phi - pi f)
void add_two_mode_core(Triplets& t, const DerivedEnergies& e, const BasisConfig& b, double f) {
  const double h = b.phi.spacing();
  add_phi_stencil(t, b, central_stencil(2, b.stencil_order), -4.0 * e.E_cphi / (h * h), false);
  add_diagonal(t, b, [&](double, int, int th) { return 4.0 * e.E_ctheta * th * th + 2.0 * e.E_J; });
  add_cos_theta(t, b, [&](double phi) { return -2.0 * e.E_J * std::cos(phi - kPi * f); });
}

}  // namespace

std::vector<double> central_stencil(int derivative, int order) {
  if (derivative == 2) {
    switch (order) {
      case 2: return {-2.0, 1.0};
      case 4: return {-5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};
      case 6: return {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
      default: break;
    }
  } else if (derivative == 1) {
    switch (order) {
      case 2: return {0.0, 1.0 / 2.0};
      case 4: return {0.0, 2.0 / 3.0, -1.0 / 12.0};
      case 6: return {0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
      default: break;
    }
  }
  throw DomainError(fmt::format("no central stencil for derivative {} at order {}", derivative, order));
}

OperatorMatrix assemble_hamiltonian(const DerivedEnergies& e, const BasisConfig& b, double f) {
  validate(b);
  if (b.phi.kind != e.periodicity) {
    throw DomainError(fmt::format("variant {} needs a {} phi grid, got {}", to_string(e.variant),
                                  to_string(e.periodicity), to_string(b.phi.kind)));
  }
  if (b.chi_levels != 0) throw DomainError("the reduced Hamiltonian does not use a chi mode (set chi_levels = 0)");

  Triplets t;
  t.reserve(b.dimension() * static_cast<std::size_t>(b.stencil_order + 4));
  add_two_mode_core(t, e, b, f);
  add_diagonal(t, b, [&](double phi, int, int) {
    switch (e.periodicity) {
      case PhiPeriodicity::Line: return e.E_L * phi * phi;
      case PhiPeriodicity::Period2Pi: return e.E_J_eff * (1.0 - std::cos(phi));
      case PhiPeriodicity::Period4Pi: return e.E_J_eff * (1.0 - std::cos(0.5 * phi));
    }
    return 0.0;
  });
  return {from_triplets(b.dimension(), t), false, b};
}

OperatorMatrix assemble_jj_pair_full(const DerivedEnergies& e, const BasisConfig& b, double f) {
  validate(b);
  if (e.variant != Variant::PokemonJJPair || !e.E_Jprime || !e.E_cchi) {
    throw DomainError("the three-mode model needs pokemon_jj_pair energies");
  }
  if (b.phi.kind != PhiPeriodicity::Period2Pi) throw DomainError("the three-mode model needs a periodic_2pi phi grid");
  if (b.chi_levels < 4) throw DomainError(fmt::format("chi_levels must be >= 4 (got {})", b.chi_levels));

  const double ejp = *e.E_Jprime;
  const double ecc = *e.E_cchi;
  Triplets t;
  t.reserve(b.dimension() * static_cast<std::size_t>(b.stencil_order + 8));
  add_two_mode_core(t, e, b, f);
  add_diagonal(t, b, [&](double, int chi, int) { return 4.0 * ecc * chi * chi + 2.0 * ejp; });
  add_cos_chi(t, b, [&](double phi) { return 2.0 * ejp * (1.0 - std::cos(phi)) - 2.0 * ejp; });
  return {from_triplets(b.dimension(), t), false, b};
}

OperatorMatrix assemble_observable(Observable kind, const BasisConfig& b, double f) {
  validate(b);
  Triplets t;
  bool imaginary = false;
  const double shift = kPi * f;
  switch (kind) {
    case Observable::Ntheta:
      for (int j = 0; j < b.phi.n_phi; ++j) {
        for (int chi = -b.chi_levels; chi <= b.chi_levels; ++chi) {
          for_each_charge_pair(b.n_theta_max, [&](int s, int c, double n) {
            const auto a = static_cast<Eigen::Index>(b.index(j, chi, s));
            const auto d = static_cast<Eigen::Index>(b.index(j, chi, c));
            t.emplace_back(a, d, n);
            t.emplace_back(d, a, -n);
          });
        }
      }
      imaginary = true;
      break;
    case Observable::Nchi:
      if (b.chi_levels == 0) throw DomainError("N_chi needs chi_levels > 0");
      for (int j = 0; j < b.phi.n_phi; ++j) {
        for_each_charge_pair(b.chi_levels, [&](int s, int c, double n) {
          for (int th = -b.n_theta_max; th <= b.n_theta_max; ++th) {
            const auto a = static_cast<Eigen::Index>(b.index(j, s, th));
            const auto d = static_cast<Eigen::Index>(b.index(j, c, th));
            t.emplace_back(a, d, n);
            t.emplace_back(d, a, -n);
          }
        });
      }
      imaginary = true;
      break;
    case Observable::Nphi:
      // -i d/dphi stored as i * (-D1)
      add_phi_stencil(t, b, central_stencil(1, b.stencil_order), -1.0 / b.phi.spacing(), true);
      imaginary = true;
      break;
    case Observable::CosTheta:
      add_cos_theta(t, b, [](double) { return 1.0; });
      break;
    case Observable::CosThetaSinPhi:
      add_cos_theta(t, b, [&](double phi) { return std::sin(phi - shift); });
      break;
    case Observable::CosThetaCosPhi:
      add_cos_theta(t, b, [&](double phi) { return std::cos(phi - shift); });
      break;
    case Observable::Phi:
      add_diagonal(t, b, [](double phi, int, int) { return phi; });
      break;
    case Observable::PhiSquared:
      add_diagonal(t, b, [](double phi, int, int) { return phi * phi; });
      break;
    case Observable::SinPhi:
      add_diagonal(t, b, [](double phi, int, int) { return std::sin(phi); });
      break;
    case Observable::CosPhi:
      add_diagonal(t, b, [](double phi, int, int) { return std::cos(phi); });
      break;
    case Observable::CosChi:
      if (b.chi_levels == 0) throw DomainError("cos(chi) needs chi_levels > 0");
      add_cos_chi(t, b, [](double) { return 1.0; });
      break;
  }
  return {from_triplets(b.dimension(), t), imaginary, b};
}

std::complex<double> matrix_element(const OperatorMatrix& op, std::span<const double> bra,
                                    std::span<const double> ket) {
  const auto n = op.dimension();
  if (static_cast<Eigen::Index>(bra.size()) != n || static_cast<Eigen::Index>(ket.size()) != n) {
    throw DomainError("state dimension does not match the operator");
  }
  const Eigen::Map<const Eigen::VectorXd> b(bra.data(), n);
  const Eigen::Map<const Eigen::VectorXd> k(ket.data(), n);
  const double value = b.dot(op.values * k);
  return op.imaginary ? std::complex<double>(0.0, value) : std::complex<double>(value, 0.0);
}

double expectation(const OperatorMatrix& op, std::span<const double> v) {
  if (op.imaginary) throw DomainError("expectation() needs a real operator");
  return matrix_element(op, v, v).real();
}

}  // namespace pokesim
