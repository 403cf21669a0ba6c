#include "lakes/core/krylov.hpp"

#include <cmath>
#include <vector>

namespace lakes {

namespace {

// exp(-i tau T) e1 for a real symmetric tridiagonal T given in eigen form.
VectorXc small_propagate(const Eigen::VectorXd& theta, const Eigen::MatrixXd& q, double tau) {
  VectorXc c(theta.size());
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    c(k) = std::exp(cplx(0.0, -tau * theta(k))) * q(0, k);
  }
  return q.cast<cplx>() * c;
}

}  // namespace

int expm_multiply(const OperatorAction& a, double tau, VectorXc& v, const KrylovOptions& opts) {
  const Eigen::Index n = v.size();
  if (tau == 0.0 || n == 0) return 0;
  const int mmax = static_cast<int>(std::min<Eigen::Index>(opts.max_dim, n));
  MatrixXc basis(n, mmax);
  VectorXc w(n);
  int matvecs = 0;
  double remaining = tau;

  while (std::abs(remaining) > 0.0) {
    const double beta0 = v.norm();
    if (beta0 == 0.0) return matvecs;
    basis.col(0) = v / beta0;
    Eigen::VectorXd alpha(mmax), beta(mmax);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    int used = 0;
    double step = remaining;
    bool done = false;

    for (int j = 0; j < mmax; ++j) {
      a(basis.col(j), w);
      ++matvecs;
      alpha(j) = basis.col(j).dot(w).real();
      for (int pass = 0; pass < 2; ++pass) {
        VectorXc c = basis.leftCols(j + 1).adjoint() * w;
        w.noalias() -= basis.leftCols(j + 1) * c;
      }
      beta(j) = w.norm();
      used = j + 1;
      Eigen::VectorXd sub = used > 1 ? Eigen::VectorXd(beta.head(used - 1)) : Eigen::VectorXd();
      tri.computeFromTridiagonal(alpha.head(used), sub, Eigen::ComputeEigenvectors);

      const double scale = std::max(1.0, tri.eigenvalues().cwiseAbs().maxCoeff());
      if (beta(j) <= 1e-13 * scale) {
        done = true;  // invariant subspace: exact for any step
        break;
      }
      const VectorXc c = small_propagate(tri.eigenvalues(), tri.eigenvectors(), remaining);
      if (beta(j) * std::abs(c(used - 1)) < opts.tol) {
        done = true;
        break;
      }
      if (j + 1 < mmax) basis.col(j + 1) = w / beta(j);
    }

    if (!done) {
      // shrink the step on the same subspace until the estimate is met
      double lo = 0.0, hi = remaining;
      auto err = [&](double s) {
        const VectorXc c = small_propagate(tri.eigenvalues(), tri.eigenvectors(), s);
        return beta(used - 1) * std::abs(c(used - 1));
      };
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (err(mid) < opts.tol) lo = mid; else hi = mid;
      }
      step = lo;
      if (step == 0.0) throw Error(ErrorCode::NoConvergence, "krylov step underflow");
    }

    const VectorXc c = small_propagate(tri.eigenvalues(), tri.eigenvectors(), step);
    v.noalias() = beta0 * (basis.leftCols(used) * c);
    remaining -= step;
    if (done) break;
  }
  return matvecs;
}

MatrixXc expm_hermitian(const MatrixXc& h, double tau) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h);
  VectorXc phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) phases(k) = std::exp(cplx(0.0, -tau * es.eigenvalues()(k)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace lakes
