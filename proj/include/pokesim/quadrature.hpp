#pragma once

#include <functional>
#include <vector>

namespace pokesim::quadrature {

struct Result {
  double value = 0;
  double error = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Globally adaptive 7/15-point Gauss-Kronrod: the interval with the largest
/// error estimate is bisected until sum(err) <= max(abs_tol, rel_tol |I|).
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                     double abs_tol = 0.0, int max_intervals = 4000);

struct Rule {
  std::vector<double> nodes;  // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule computed by Newton iteration on P_n.
Rule gauss_legendre_rule(int n);

/// Fixed composite Gauss-Legendre over `panels` equal sub-intervals.
double gauss_legendre_composite(const std::function<double(double)>& f, double a, double b, int panels,
                                int points = 20);

/// Cosine integral Ci(x) for x >= 20 from its asymptotic auxiliary series.
double cosine_integral_asymptotic(double x);

}  // namespace pokesim::quadrature
