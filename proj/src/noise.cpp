#include "pokesim/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "pokesim/errors.hpp"
#include "pokesim/quadrature.hpp"

namespace pokesim {

namespace {

using constants::kPi;
using Eigen::VectorXd;

// Upper end of the numerically integrated range in u = omega t.
constexpr double kTailStart = 100.0;
// Upper end of the search range for T_phi, in internal time units.
constexpr double kMaxTime = 1e12;

VectorXd as_vector(std::span<const double> v) { return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())); }

std::span<const double> as_span(const std::vector<double>& v) { return {v.data(), v.size()}; }

// int_U^inf 4 sin^2(u/2) / u^3 du for U >= 20.
double one_over_f_tail(double U) {
  return 1.0 / (U * U) - std::cos(U) / (U * U) + std::sin(U) / U - quadrature::cosine_integral_asymptotic(U);
}

// int_U^inf S(w) 4 sin^2(wt/2) / w^2 dw with S continued as S(W) W / w and sin^2 averaged.
double tabulated_tail(const NoiseSpectrum& s, double omega) { return s(omega) / omega; }

// a^2 / (2 pi) with a = A_f / hbar in rad/s.
double eta_prefactor(double A_f, const EnergyUnit& unit) {
  const double a = A_f * unit.angular();
  return a * a / (2.0 * kPi);
}

template <class Integrate>
double eta_impl(double t, double A_f, const NoiseModel& noise, const EnergyUnit& unit, Integrate integrate) {
  if (!(t >= 0.0)) throw DomainError("dephasing time must be non-negative");
  if (t == 0.0 || A_f == 0.0) return 0.0;
  const double pre = eta_prefactor(A_f, unit);
  const double uc = noise.omega_c * t;
  const NoiseSpectrum& s = noise.flux;
  if (!s.tabulated()) {
    if (s.K == 0.0) return 0.0;
    double G;
    if (uc >= kTailStart) {
      G = one_over_f_tail(uc);
    } else {
      // s = ln u; integrand 4 sin^2(u/2)/u^3 * u
      G = integrate([](double x) {
            const double u = std::exp(x);
            const double h = std::sin(0.5 * u);
            return 4.0 * h * h / (u * u);
          },
                    std::log(uc), std::log(kTailStart)) +
          one_over_f_tail(kTailStart);
    }
    return pre * s.K * t * t * G;
  }
  // General spectrum: int S(w) 4 sin^2(wt/2)/w^2 dw in s = ln w.
  const double upper = std::max(kTailStart, uc) / t;
  double body = 0;
  if (uc < kTailStart) {
    body = integrate([&](double x) {
             const double w = std::exp(x);
             const double h = std::sin(0.5 * w * t);
             return s(w) * 4.0 * h * h / w;
           },
                     std::log(noise.omega_c), std::log(upper));
  }
  return pre * (body + tabulated_tail(s, upper));
}

}  // namespace

double NoiseSpectrum::operator()(double omega) const {
  const double w = std::abs(omega);
  if (!tabulated()) {
    if (w == 0.0) throw DomainError("1/f spectrum evaluated at zero frequency");
    return K / w;
  }
  if (table.size() == 1) return table.front().second;
  auto seg = std::lower_bound(table.begin(), table.end(), w,
                              [](const auto& p, double x) { return p.first < x; });
  if (seg == table.begin()) seg = table.begin() + 1;
  if (seg == table.end()) seg = table.end() - 1;
  const auto& [w0, s0] = *(seg - 1);
  const auto& [w1, s1] = *seg;
  const double slope = std::log(s1 / s0) / std::log(w1 / w0);
  return s0 * std::exp(slope * std::log(w / w0));
}

void validate(const NoiseModel& noise) {
  if (!(noise.omega_c > 0.0) || !std::isfinite(noise.omega_c)) throw DomainError("omega_c must be positive");
  const std::pair<const char*, const NoiseSpectrum*> all[] = {
      {"theta", &noise.theta}, {"phi", &noise.phi}, {"flux", &noise.flux}};
  for (const auto& [name, s] : all) {
    if (!(s->K >= 0.0) || !std::isfinite(s->K)) throw DomainError(fmt::format("K_{} must be non-negative", name));
    for (std::size_t i = 0; i < s->table.size(); ++i) {
      const auto& [w, v] = s->table[i];
      if (!(w > 0.0) || !(v > 0.0) || !std::isfinite(w) || !std::isfinite(v)) {
        throw DomainError(fmt::format("{} noise table entries must be positive", name));
      }
      if (i > 0 && !(w > s->table[i - 1].first)) {
        throw DomainError(fmt::format("{} noise table frequencies must increase", name));
      }
    }
  }
}

QubitStates identify_qubit_states(const Spectrum& spectrum, const OperatorMatrix& cos_theta,
                                  const OperatorMatrix* localizer, const IdentificationOptions& options) {
  const std::size_t n = spectrum.size();
  std::vector<double> loc(n);
  for (std::size_t i = 0; i < n; ++i) loc[i] = expectation(cos_theta, spectrum.vector(i));

  const auto find = [&](bool upper) -> std::size_t {
    for (std::size_t i = 0; i < n; ++i) {
      if (upper ? loc[i] > options.threshold : loc[i] < -options.threshold) return i;
    }
    throw IdentificationError(fmt::format(
        "no state with <cos theta> {} {} among the lowest {} levels; increase k", upper ? ">" : "<",
        upper ? options.threshold : -options.threshold, n));
  };

  const double tol = options.degeneracy_tol * options.energy_scale;
  const auto cluster_of = [&](std::size_t index) {
    std::vector<std::size_t> cluster;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(spectrum.eigenvalues[i] - spectrum.eigenvalues[index]) < tol) cluster.push_back(i);
    }
    return cluster;
  };
  const auto basis_of = [&](const std::vector<std::size_t>& cluster) {
    Eigen::MatrixXd Q(spectrum.eigenvectors.rows(), static_cast<Eigen::Index>(cluster.size()));
    for (std::size_t c = 0; c < cluster.size(); ++c) {
      Q.col(static_cast<Eigen::Index>(c)) = spectrum.eigenvectors.col(static_cast<Eigen::Index>(cluster[c]));
    }
    return Q;
  };
  const auto normalized = [](VectorXd x) {
    Eigen::Index arg;
    x.cwiseAbs().maxCoeff(&arg);
    if (x[arg] < 0) x = -x;
    return std::vector<double>(x.data(), x.data() + x.size());
  };

  QubitStates q;
  const bool found0 = std::any_of(loc.begin(), loc.end(), [&](double x) { return x > options.threshold; });
  const bool found1 = std::any_of(loc.begin(), loc.end(), [&](double x) { return x < -options.threshold; });
  if (!found0 || !found1) {
    // Degenerate clusters can mix both wells; resolve them in the cos theta eigenbasis.
    std::optional<std::size_t> i0, i1;
    for (std::size_t start = 0; start < n && !(i0 && i1);) {
      const auto cluster = cluster_of(start);
      if (cluster.size() > 1) {
        const Eigen::MatrixXd Q = basis_of(cluster);
        const Eigen::MatrixXd P = Q.transpose() * (cos_theta.values * Q);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (P + P.transpose()));
        const auto m = es.eigenvalues().size();
        if (!i0 && es.eigenvalues()[m - 1] > options.threshold) {
          i0 = cluster.front();
          q.state0 = normalized(Q * es.eigenvectors().col(m - 1));
          q.cluster0 = cluster.size();
        }
        if (!i1 && es.eigenvalues()[0] < -options.threshold) {
          i1 = cluster.front();
          q.state1 = normalized(Q * es.eigenvectors().col(0));
          q.cluster1 = cluster.size();
        }
      } else {
        if (!i0 && loc[start] > options.threshold) {
          i0 = start;
          q.state0 = normalized(spectrum.eigenvectors.col(static_cast<Eigen::Index>(start)));
        }
        if (!i1 && loc[start] < -options.threshold) {
          i1 = start;
          q.state1 = normalized(spectrum.eigenvectors.col(static_cast<Eigen::Index>(start)));
        }
      }
      start = cluster.back() + 1;
    }
    if (!i0) find(true);
    if (!i1) find(false);
    q.index0 = *i0;
    q.index1 = *i1;
    q.loc0 = expectation(cos_theta, as_span(q.state0));
    q.loc1 = expectation(cos_theta, as_span(q.state1));
    q.epsilon10 = spectrum.eigenvalues[q.index1] - spectrum.eigenvalues[q.index0];
    if (q.index0 == q.index1) q.epsilon10 = 0.0;
    q.omega10 = q.epsilon10;
    return q;
  }
  q.index0 = find(true);
  q.index1 = find(false);

  const auto pick = [&](std::size_t index, bool excited, std::size_t& cluster_size) {
    const auto cluster = cluster_of(index);
    cluster_size = cluster.size();
    const auto v = spectrum.vector(index);
    if (cluster.size() == 1 || localizer == nullptr) return std::vector<double>(v.begin(), v.end());
    const Eigen::MatrixXd Q = basis_of(cluster);
    Eigen::MatrixXd P = Q.transpose() * (localizer->values * Q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (P + P.transpose()));
    const Eigen::MatrixXd rotated = Q * es.eigenvectors();
    std::optional<Eigen::Index> choice;
    double best = 0;
    for (Eigen::Index c = 0; c < rotated.cols(); ++c) {
      const double cos_c = expectation(cos_theta, {rotated.col(c).data(), static_cast<std::size_t>(rotated.rows())});
      if (excited ? cos_c >= -options.threshold : cos_c <= options.threshold) continue;
      const double score = excited ? es.eigenvalues()[c] : -std::abs(es.eigenvalues()[c]);
      if (!choice || score > best) choice = c, best = score;
    }
    if (!choice) return std::vector<double>(v.begin(), v.end());
    return normalized(rotated.col(*choice));
  };
  if (localizer != nullptr && localizer->imaginary) throw DomainError("the localiser must be a real operator");

  q.state0 = pick(q.index0, false, q.cluster0);
  q.state1 = pick(q.index1, true, q.cluster1);
  q.loc0 = expectation(cos_theta, as_span(q.state0));
  q.loc1 = expectation(cos_theta, as_span(q.state1));
  q.epsilon10 = spectrum.eigenvalues[q.index1] - spectrum.eigenvalues[q.index0];
  if (cluster_of(q.index0) == cluster_of(q.index1)) q.epsilon10 = 0.0;
  q.omega10 = q.epsilon10;
  return q;
}

double dephasing_amplitude_numeric(const QubitStates& s, const OperatorMatrix& op, double E_J) {
  const double x1 = expectation(op, as_span(s.state1));
  const double x0 = expectation(op, as_span(s.state0));
  return -2.0 * kPi * E_J * (x1 - x0);
}

double diagonal_difference(const OperatorMatrix& op, const Eigen::VectorXcd& state1, const Eigen::VectorXcd& state0) {
  if (state1.size() != op.dimension() || state0.size() != op.dimension()) {
    throw DomainError("state dimension does not match the operator");
  }
  const Eigen::SparseMatrix<std::complex<double>> m =
      op.values.cast<std::complex<double>>() * (op.imaginary ? std::complex<double>(0, 1) : std::complex<double>(1, 0));
  const std::complex<double> d1 = state1.dot(m * state1);
  const std::complex<double> d0 = state0.dot(m * state0);
  return (d1 - d0).real();
}

ChargeDephasing charge_dephasing_check(const QubitStates& s, const OperatorMatrix& n_theta,
                                       const OperatorMatrix& n_phi, const DerivedEnergies& e) {
  if (!n_theta.imaginary || !n_phi.imaginary || n_theta.dimension() != n_phi.dimension()) {
    throw DomainError("charge_dephasing_check needs the N_theta and N_phi observables");
  }
  const auto diag = [&](const OperatorMatrix& op) {
    return (matrix_element(op, as_span(s.state1), as_span(s.state1)) -
            matrix_element(op, as_span(s.state0), as_span(s.state0)));
  };
  const double norm_diff = as_vector(as_span(s.state1)).squaredNorm() - as_vector(as_span(s.state0)).squaredNorm();
  ChargeDephasing c;
  c.first_theta = -8.0 * e.E_ctheta * diag(n_theta).real() + 0.0;
  c.first_phi = -8.0 * e.E_cphi * diag(n_phi).real() + 0.0;
  c.second_theta = 8.0 * e.E_ctheta * norm_diff;
  c.second_phi = 8.0 * e.E_cphi * norm_diff;
  return c;
}

FluxRelaxation flux_relaxation_check(const QubitStates& s, const OperatorMatrix& sin_op, const OperatorMatrix& cos_op,
                                     double E_J) {
  FluxRelaxation r;
  r.first = 2.0 * kPi * E_J * std::abs(matrix_element(sin_op, as_span(s.state0), as_span(s.state1)));
  r.second = 2.0 * kPi * E_J * std::abs(matrix_element(cos_op, as_span(s.state0), as_span(s.state1)));
  return r;
}

RelaxationElements relaxation_elements_numeric(const QubitStates& s, const OperatorMatrix& n_theta,
                                               const OperatorMatrix& n_phi, const DerivedEnergies& e) {
  RelaxationElements r;
  r.theta = 8.0 * e.E_ctheta * std::abs(matrix_element(n_theta, as_span(s.state0), as_span(s.state1)));
  r.phi = 8.0 * e.E_cphi * std::abs(matrix_element(n_phi, as_span(s.state0), as_span(s.state1)));
  return r;
}

double dephasing_eta(double t, double A_f, const NoiseModel& noise, const EnergyUnit& unit) {
  return eta_impl(t, A_f, noise, unit, [](const auto& f, double a, double b) {
    const auto r = quadrature::gauss_kronrod(f, a, b, 1e-12, 0.0, 4000);
    return r.value;
  });
}

double dephasing_eta_composite(double t, double A_f, const NoiseModel& noise, const EnergyUnit& unit, int panels) {
  return eta_impl(t, A_f, noise, unit, [panels](const auto& f, double a, double b) {
    return quadrature::gauss_legendre_composite(f, a, b, panels, 20);
  });
}

DephasingTime t_phi_solve(double A_f, const NoiseModel& noise, const EnergyUnit& unit) {
  validate(noise);
  DephasingTime d;
  const double t_max = kMaxTime * unit.time_unit();
  const auto eta = [&](double t) { return dephasing_eta(t, A_f, noise, unit); };
  const bool silent = A_f == 0.0 || (!noise.flux.tabulated() && noise.flux.K == 0.0);
  if (silent) {
    d.negligible = true;
    d.T_phi = t_max;
    return d;
  }
  double hi = 1e-6 * unit.time_unit();
  double lo = 0.0;
  while (eta(hi) < 1.0) {
    lo = hi;
    if (hi >= t_max) {
      d.negligible = true;
      d.T_phi = t_max;
      return d;
    }
    hi = std::min(2.0 * hi, t_max);
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
    (eta(mid) < 1.0 ? lo : hi) = mid;
  }
  d.T_phi = 0.5 * (lo + hi);
  d.Gamma_phi = 1.0 / d.T_phi;
  d.short_time_warning = noise.omega_c * d.T_phi >= 1.0;
  return d;
}

RelaxationRates relaxation_rates(double B_theta, double B_phi, double omega10, const NoiseModel& noise,
                                 const EnergyUnit& unit) {
  if (!(omega10 > 0.0)) throw DomainError(fmt::format("omega10 must be positive (got {})", omega10));
  validate(noise);
  const double w = omega10 * unit.angular();
  const double bt = B_theta * unit.angular();
  const double bp = B_phi * unit.angular();
  RelaxationRates r;
  r.Gamma1_theta = bt * bt * noise.theta(w);
  r.Gamma1_phi = bp * bp * noise.phi(w);
  r.Gamma1 = r.Gamma1_theta + r.Gamma1_phi;
  r.T1 = r.Gamma1 > 0.0 ? 1.0 / r.Gamma1 : std::numeric_limits<double>::infinity();
  return r;
}

double AnalyticNumeric::relative_deviation() const {
  if (analytic == 0.0) return numeric == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(numeric - analytic) / std::abs(analytic);
}

NoiseReport decoherence_summary(const RelaxationRates& rates, const DephasingTime& dephasing) {
  NoiseReport r;
  r.rates = rates;
  r.dephasing = dephasing;
  r.Gamma2 = 0.5 * rates.Gamma1 + dephasing.Gamma_phi;
  r.gamma_phi_significant = dephasing.Gamma_phi > 0.1 * rates.Gamma1;
  if (dephasing.short_time_warning) {
    r.warnings.push_back("omega_c T_phi >= 1: the short-time expansion behind T_phi is not valid");
  }
  if (dephasing.negligible) r.warnings.push_back("flux dephasing is negligible within the search window");
  return r;
}

}  // namespace pokesim
