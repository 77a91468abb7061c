#include "pokesim/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "pokesim/errors.hpp"

namespace pokesim::quadrature {

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {0.129484966168869693270611432679082,
                                                 0.279705391489276667901467771423780,
                                                 0.381830050505118944950369775488975,
                                                 0.417959183673469387755102040816327};

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

Interval kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = kKronrodWeights[7] * fc;
  double g = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double x = h * kKronrodNodes[static_cast<std::size_t>(i)];
    const double s = f(c - x) + f(c + x);
    k += kKronrodWeights[static_cast<std::size_t>(i)] * s;
    if (i % 2 == 1) g += kGaussWeights[static_cast<std::size_t>(i / 2)] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol,
                     int max_intervals) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integration limits must be finite");
  Result r;
  std::priority_queue<Interval> heap;
  heap.push(kronrod15(f, a, b));
  r.evaluations = 15;
  double value = heap.top().value;
  double error = heap.top().error;
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) && static_cast<int>(heap.size()) < max_intervals) {
    const Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Interval left = kronrod15(f, worst.a, mid);
    const Interval right = kronrod15(f, mid, worst.b);
    r.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to drop accumulated cancellation in the running totals.
  value = 0;
  error = 0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  r.value = value;
  r.error = error;
  r.converged = error <= std::max(abs_tol, rel_tol * std::abs(value));
  return r;
}

Rule gauss_legendre_rule(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs n >= 1");
  Rule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

double gauss_legendre_composite(const std::function<double(double)>& f, double a, double b, int panels, int points) {
  if (panels < 1) throw DomainError("composite rule needs at least one panel");
  const Rule rule = gauss_legendre_rule(points);
  const double width = (b - a) / panels;
  double sum = 0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * width;
    double panel = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) panel += rule.weights[i] * f(c + 0.5 * width * rule.nodes[i]);
    sum += 0.5 * width * panel;
  }
  return sum;
}

double cosine_integral_asymptotic(double x) {
  if (!(x >= 20.0)) throw DomainError("the asymptotic cosine integral needs x >= 20");
  // Ci(x) = f(x) sin x - g(x) cos x with
  // f ~ 1/x sum (-1)^k (2k)!/x^{2k}, g ~ 1/x^2 sum (-1)^k (2k+1)!/x^{2k}.
  double f = 0, g = 0;
  double tf = 1.0 / x, tg = 1.0 / (x * x);
  for (int k = 0; k < 40; ++k) {
    f += tf;
    g += tg;
    const double nf = -tf * (2.0 * k + 1) * (2.0 * k + 2) / (x * x);
    const double ng = -tg * (2.0 * k + 2) * (2.0 * k + 3) / (x * x);
    if (std::abs(nf) > std::abs(tf) || std::abs(ng) > std::abs(tg)) break;
    tf = nf;
    tg = ng;
    if (std::abs(tf) < 1e-18 * std::abs(f) && std::abs(tg) < 1e-18 * std::abs(g)) break;
  }
  return f * std::sin(x) - g * std::cos(x);
}

}  // namespace pokesim::quadrature
