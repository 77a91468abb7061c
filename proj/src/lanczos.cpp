#include "pokesim/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/CholmodSupport>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "pokesim/errors.hpp"

namespace pokesim {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Factor = Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower>;
using LinearMap = std::function<VectorXd(const VectorXd&)>;

VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
  }
  return v;
}

// Two passes of classical Gram-Schmidt against the first `cols` columns of Q.
void orthogonalize(VectorXd& w, const MatrixXd& Q, Eigen::Index cols) {
  if (cols == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const VectorXd c = Q.leftCols(cols).transpose() * w;
    w.noalias() -= Q.leftCols(cols) * c;
  }
}

SparseMatrix shifted_matrix(const SparseMatrix& H, double s) {
  SparseMatrix I(H.rows(), H.cols());
  I.setIdentity();
  return H - s * I;
}

// H - s I factorised as L L^T; success certifies that s lies below the spectrum.
struct Shifted {
  SparseMatrix matrix;
  Factor factor;
  bool ok = false;
  bool analyzed = false;

  Shifted() { factor.cholmod().print = 0; }
};

void factor_shifted(const SparseMatrix& H, double s, Shifted& out) {
  out.matrix = shifted_matrix(H, s);
  if (!out.analyzed) {
    out.factor.analyzePattern(out.matrix);
    out.analyzed = true;
  }
  out.factor.factorize(out.matrix);
  out.ok = out.factor.info() == Eigen::Success;
}

// Sylvester inertia of H - tau I from a simplicial L D L^T factorisation.
class Inertia {
 public:
  Inertia() {
    cholmod_start(&common_);
    common_.print = 0;
    common_.supernodal = CHOLMOD_SIMPLICIAL;
    common_.final_ll = 0;
  }
  ~Inertia() {
    if (factor_) cholmod_free_factor(&factor_, &common_);
    cholmod_finish(&common_);
  }
  Inertia(const Inertia&) = delete;
  Inertia& operator=(const Inertia&) = delete;

  // Number of negative pivots, or -1 when a pivot vanishes.
  int negative(const SparseMatrix& H, double tau) {
    SparseMatrix A = shifted_matrix(H, tau);
    A.makeCompressed();
    const SparseMatrix& lower = A;
    cholmod_sparse view = Eigen::viewAsCholmod(lower.selfadjointView<Eigen::Lower>());
    if (!factor_) factor_ = cholmod_analyze(&view, &common_);
    if (!factor_) throw SolverError("inertia analysis failed");
    cholmod_factorize(&view, factor_, &common_);
    if (factor_->is_ll || factor_->is_super || factor_->minor < factor_->n) return -1;
    const auto* p = static_cast<const int*>(factor_->p);
    const auto* x = static_cast<const double*>(factor_->x);
    int count = 0;
    for (std::size_t j = 0; j < factor_->n; ++j) {
      const double d = x[p[j]];
      if (!std::isfinite(d) || d == 0.0) return -1;
      if (d < 0.0) ++count;
    }
    return count;
  }

 private:
  cholmod_common common_{};
  cholmod_factor* factor_ = nullptr;
};

int count_below(const SparseMatrix& H, double tau, Inertia& inertia) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    const int count = inertia.negative(H, tau);
    if (count >= 0) return count;
    tau += 1e-9 * std::max(1.0, std::abs(tau));
  }
  throw SolverError(fmt::format("inertia count failed near {}", tau));
}

// Plain Lanczos estimate of the lowest eigenvalue and its residual bound.
std::pair<double, double> lowest_estimate(const SparseMatrix& H, std::mt19937_64& rng) {
  const Eigen::Index n = H.rows();
  const Eigen::Index m = std::min<Eigen::Index>(n, 60);
  MatrixXd V(n, m);
  VectorXd alpha(m), beta(m);
  VectorXd v = random_vector(n, rng);
  V.col(0) = v.normalized();
  Eigen::Index steps = m;
  for (Eigen::Index j = 0; j < m; ++j) {
    VectorXd w = H * V.col(j);
    alpha[j] = V.col(j).dot(w);
    orthogonalize(w, V, j + 1);
    beta[j] = w.norm();
    if (j + 1 == m || beta[j] < 1e-14 * std::abs(alpha[j]) + 1e-300) {
      steps = j + 1;
      break;
    }
    V.col(j + 1) = w / beta[j];
  }
  MatrixXd T = MatrixXd::Zero(steps, steps);
  for (Eigen::Index j = 0; j < steps; ++j) {
    T(j, j) = alpha[j];
    if (j + 1 < steps) T(j, j + 1) = T(j + 1, j) = beta[j];
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
  const double theta = es.eigenvalues()[0];
  const double r = std::abs(beta[steps - 1] * es.eigenvectors()(steps - 1, 0));
  return {theta, r};
}

struct Window {
  double top = 0;       // largest Ritz value of the transformed operator
  double kth = 0;       // k-th largest
  double residual = 0;  // ||H x - lambda x|| for the top Ritz vector
};

Window ritz_window(const LinearMap& apply, const SparseMatrix& H, Eigen::Index n, Eigen::Index m, int k,
                   std::mt19937_64& rng) {
  m = std::min(m, n);
  MatrixXd V(n, m);
  VectorXd alpha(m), beta(m);
  V.col(0) = random_vector(n, rng).normalized();
  Eigen::Index steps = m;
  for (Eigen::Index j = 0; j < m; ++j) {
    VectorXd w = apply(V.col(j));
    alpha[j] = V.col(j).dot(w);
    orthogonalize(w, V, j + 1);
    beta[j] = w.norm();
    if (j + 1 == m || beta[j] < 1e-13 * std::abs(alpha[j]) + 1e-300) {
      steps = j + 1;
      break;
    }
    V.col(j + 1) = w / beta[j];
  }
  MatrixXd T = MatrixXd::Zero(steps, steps);
  for (Eigen::Index j = 0; j < steps; ++j) {
    T(j, j) = alpha[j];
    if (j + 1 < steps) T(j, j + 1) = T(j + 1, j) = beta[j];
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
  Window w;
  w.top = es.eigenvalues()[steps - 1];
  w.kth = es.eigenvalues()[std::max<Eigen::Index>(0, steps - k)];
  const VectorXd x = (V.leftCols(steps) * es.eigenvectors().col(steps - 1)).normalized();
  const VectorXd hx = H * x;
  w.residual = (hx - x.dot(hx) * x).norm();
  return w;
}

}  // namespace

double one_norm(const SparseMatrix& H) {
  double best = 0;
  for (Eigen::Index j = 0; j < H.outerSize(); ++j) {
    double s = 0;
    for (SparseMatrix::InnerIterator it(H, j); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

Spectrum lowest_eigenpairs(const OperatorMatrix& op, const SolverOptions& options) {
  if (op.imaginary) throw DomainError("the eigensolver needs a real symmetric matrix");
  const SparseMatrix& H = op.values;
  const Eigen::Index n = H.rows();
  if (H.cols() != n) throw DomainError("the eigensolver needs a square matrix");
  if (options.k < 1 || options.k > n / 4) {
    throw DomainError(fmt::format("k must lie in [1, {}] (got {})", n / 4, options.k));
  }
  if (!(options.tol > 0.0)) throw DomainError("solver tol must be positive");
  const double norm = one_norm(H);
  {
    const SparseMatrix diff = SparseMatrix(H.transpose()) - H;
    if (one_norm(diff) > 1e-12 * std::max(norm, 1e-300)) throw DomainError("the eigensolver needs a symmetric matrix");
  }

  std::mt19937_64 rng(options.seed);
  const double threshold = options.tol * norm;
  const int k = options.k;

  LinearMap apply;
  Shifted shifted;
  Inertia certify;
  if (options.shift_invert) {
    double sigma;
    if (options.shift) {
      sigma = *options.shift;
      factor_shifted(H, sigma, shifted);
      if (!shifted.ok) throw SolverError(fmt::format("shift {} does not lie below the spectrum", sigma));
    } else {
      const auto [theta, r] = lowest_estimate(H, rng);
      const auto place = [&](double centre, double margin) {
        for (int attempt = 0;; ++attempt) {
          const double s = centre - margin;
          factor_shifted(H, s, shifted);
          spdlog::trace("shift {} positive definite {}", s, shifted.ok);
          if (shifted.ok) return s;
          if (attempt == 30) throw SolverError("could not place the shift below the spectrum");
          margin *= 2.0;
        }
      };
      sigma = place(theta, std::max({4.0 * r, 0.1 * std::abs(theta), 1e-6 * norm}));
      // Refine: shift-invert passes estimate the wanted window until the
      // lowest Ritz pair is accurate on the scale of that window.
      for (int pass = 0; pass < 8; ++pass) {
        const auto probe = ritz_window(
            [&shifted](const VectorXd& x) -> VectorXd { return shifted.factor.solve(x); }, H, n,
            std::max(2 * k + 10, 30), k, rng);
        const double low = sigma + 1.0 / probe.top;
        const double high = sigma + 1.0 / probe.kth;
        const double window = high - low;
        sigma = place(low, std::max({probe.residual, 0.1 * window, 1e-6 * norm}));
        if (probe.residual < 1e-2 * window) break;
      }
    }
    spdlog::debug("shift-invert at sigma = {:.10g}", sigma);
    apply = [&shifted](const VectorXd& x) -> VectorXd { return shifted.factor.solve(x); };
  } else {
    apply = [&H](const VectorXd& x) -> VectorXd { return -(H * x); };
  }

  int target = k;
  const Eigen::Index capacity = std::min<Eigen::Index>(n, 4 * k + 64);
  MatrixXd locked(n, capacity);
  Eigen::Index nlocked = 0;
  std::vector<double> best(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());

  Spectrum out;
  out.norm_estimate = norm;
  VectorXd start = random_vector(n, rng);

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    const Eigen::Index free_dim = n - nlocked;
    Eigen::Index m = options.krylov_dim > 0 ? options.krylov_dim : std::max(2 * target + 10, 30);
    m = std::min(m, free_dim);
    MatrixXd V(n, m);
    VectorXd alpha(m), beta(m);

    orthogonalize(start, locked, nlocked);
    if (start.norm() < 1e-10) start = random_vector(n, rng), orthogonalize(start, locked, nlocked);
    V.col(0) = start.normalized();
    Eigen::Index steps = m;
    for (Eigen::Index j = 0; j < m; ++j) {
      VectorXd w = apply(V.col(j));
      alpha[j] = V.col(j).dot(w);
      orthogonalize(w, locked, nlocked);
      orthogonalize(w, V, j + 1);
      beta[j] = w.norm();
      ++out.iterations;
      if (j + 1 == m) break;
      if (beta[j] < 1e-13 * std::abs(alpha[j]) + 1e-300) {
        // Invariant subspace: continue in a fresh random direction.
        w = random_vector(n, rng);
        orthogonalize(w, locked, nlocked);
        orthogonalize(w, V, j + 1);
        beta[j] = 0.0;
        V.col(j + 1) = w.normalized();
        continue;
      }
      V.col(j + 1) = w / beta[j];
    }

    MatrixXd T = MatrixXd::Zero(steps, steps);
    for (Eigen::Index j = 0; j < steps; ++j) {
      T(j, j) = alpha[j];
      if (j + 1 < steps) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
    // Ascending in the transformed operator: wanted values sit at the end.
    const Eigen::Index need = target - nlocked;
    const Eigen::Index check = std::min<Eigen::Index>(steps, need + 2);
    VectorXd next = VectorXd::Zero(n);
    for (Eigen::Index r = 0; r < check; ++r) {
      const Eigen::Index col = steps - 1 - r;
      VectorXd x = V.leftCols(steps) * es.eigenvectors().col(col);
      orthogonalize(x, locked, nlocked);
      x.normalize();
      const VectorXd hx = H * x;
      const double lambda = x.dot(hx);
      const double res = (hx - lambda * x).norm();
      if (res < threshold && nlocked < capacity) {
        locked.col(nlocked++) = x;
      } else if (r < need) {
        next += x;
      }
      if (r < static_cast<Eigen::Index>(best.size())) best[static_cast<std::size_t>(r)] = std::min(best[r], res);
    }
    spdlog::debug("lanczos cycle {}: {} locked of {}", restart, nlocked, target);

    if (nlocked >= target) {
      // Rayleigh-Ritz on the locked space, then certify by inertia.
      const MatrixXd Q = locked.leftCols(nlocked);
      const MatrixXd G = Q.transpose() * (H * Q);
      Eigen::SelfAdjointEigenSolver<MatrixXd> rr(0.5 * (G + G.transpose()));
      const MatrixXd X = Q * rr.eigenvectors();
      const VectorXd lam = rr.eigenvalues();
      const double delta = 1e-8 * norm;
      const double tau = lam[k - 1] + delta;
      const int below = count_below(H, tau, certify);
      int found = 0;
      for (Eigen::Index i = 0; i < lam.size(); ++i) found += lam[i] < tau ? 1 : 0;
      if (below <= found) {
        out.restarts = restart;
        out.eigenvalues.assign(lam.data(), lam.data() + k);
        out.eigenvectors = X.leftCols(k);
        for (int i = 0; i < k; ++i) {
          auto col = out.eigenvectors.col(i);
          Eigen::Index arg;
          col.cwiseAbs().maxCoeff(&arg);
          if (col[arg] < 0) col = -col;
          out.residuals.push_back((H * col - out.eigenvalues[i] * col).norm());
        }
        return out;
      }
      spdlog::debug("inertia finds {} eigenvalues below {}, have {}", below, tau, found);
      target = static_cast<int>(nlocked) + (below - found);
      if (target > capacity) throw SolverError("degenerate cluster exceeds the locking capacity", best);
      next = VectorXd::Zero(n);
    }
    const double scale = next.norm();
    VectorXd noise = random_vector(n, rng);
    orthogonalize(noise, locked, nlocked);
    const double spread = std::min(1e-3, best.front() / norm);
    start = scale > 0 ? VectorXd(next / scale + spread * noise.normalized()) : noise;
  }
  throw SolverError(fmt::format("lanczos did not converge in {} restarts ({} of {} pairs locked)",
                                options.max_restarts, nlocked, target),
                    best);
}

ResidualReport residual_report(const OperatorMatrix& H, const Spectrum& s) {
  ResidualReport r;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto v = s.eigenvectors.col(static_cast<Eigen::Index>(i));
    r.residuals.push_back((H.values * v - s.eigenvalues[i] * v).norm());
  }
  const MatrixXd G = s.eigenvectors.transpose() * s.eigenvectors;
  r.orthonormality_defect = (G - MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace pokesim
