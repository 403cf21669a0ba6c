#include "lakes/core/spectrum.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace lakes {

std::vector<StateVector> Eigensystem::vector_list() const {
  std::vector<StateVector> out;
  out.reserve(vectors.cols());
  for (Eigen::Index n = 0; n < vectors.cols(); ++n) out.push_back(vector(n));
  return out;
}

namespace {

Eigen::Index argmax_abs(const Eigen::Ref<const VectorXc>& v) {
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // small slack so ties resolve to the lower index
    if (std::abs(v(i)) > mag + 1e-12) {
      mag = std::abs(v(i));
      best = i;
    }
  }
  return best;
}

}  // namespace

Eigensystem eigendecompose_dense(const MatrixXc& h, BasisHandle basis) {
  const Eigen::Index n = h.rows();
  if (!basis) basis = make_basis("dense", n);
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense eigensolver failed");

  const Eigen::VectorXd& vals = es.eigenvalues();
  MatrixXc vecs = es.eigenvectors();
  std::vector<Eigen::Index> lead(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    lead[k] = argmax_abs(vecs.col(k));
    const cplx a = vecs(lead[k], k);
    vecs.col(k) *= std::conj(a) / std::abs(a);
  }

  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  // values arrive ascending; only reorder inside degenerate blocks
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && vals(stop) - vals(stop - 1) < 1e-10 * scale) ++stop;
    std::stable_sort(order.begin() + start, order.begin() + stop,
                     [&](Eigen::Index a, Eigen::Index b) { return lead[a] < lead[b]; });
    start = stop;
  }

  Eigensystem out;
  out.basis = std::move(basis);
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = vals(order[k]);
    out.vectors.col(k) = vecs.col(order[k]);
  }
  return out;
}

Eigensystem eigendecompose(const SparseOperator& h, Eigen::Index dense_threshold) {
  if (!h.hermitian()) throw Error(ErrorCode::NonHermitian, "eigendecompose needs a hermitian operator");
  if (h.dim() > dense_threshold) {
    throw Error(ErrorCode::DimensionTooLarge,
                "dimension " + std::to_string(h.dim()) + " exceeds dense threshold");
  }
  return eigendecompose_dense(MatrixXc(h.matrix()), h.basis());
}

GroundState ground_state(const SparseOperator& h, const GroundStateOptions& opts) {
  if (!h.hermitian()) throw Error(ErrorCode::NonHermitian, "ground_state needs a hermitian operator");
  const Eigen::Index n = h.dim();
  const SparseMatrixXc& m = h.matrix();

  if (n <= 64) {
    Eigensystem es = eigendecompose_dense(MatrixXc(m), h.basis());
    GroundState g;
    g.energy = es.values(0);
    g.state = es.vector(0);
    g.residual = (m * es.vectors.col(0) - g.energy * es.vectors.col(0)).norm();
    return g;
  }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  VectorXc x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = cplx(gauss(rng), 0.0);
  x.normalize();

  const int kdim = static_cast<int>(std::min<Eigen::Index>(opts.krylov_dim, n));
  MatrixXc basis(n, kdim);
  VectorXc w(n);
  double energy = 0.0;
  double residual = 0.0;

  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    Eigen::VectorXd alpha(kdim), beta(kdim);
    basis.col(0) = x;
    int used = kdim;
    for (int j = 0; j < kdim; ++j) {
      w.noalias() = m * basis.col(j);
      alpha(j) = basis.col(j).dot(w).real();
      // two passes of classical Gram-Schmidt against the whole basis
      for (int pass = 0; pass < 2; ++pass) {
        VectorXc c = basis.leftCols(j + 1).adjoint() * w;
        w.noalias() -= basis.leftCols(j + 1) * c;
      }
      beta(j) = w.norm();
      if (j + 1 == kdim) break;
      if (beta(j) < 1e-14 * std::max(1.0, std::abs(alpha(j)))) {
        used = j + 1;
        break;
      }
      basis.col(j + 1) = w / beta(j);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    Eigen::VectorXd sub = used > 1 ? Eigen::VectorXd(beta.head(used - 1)) : Eigen::VectorXd();
    tri.computeFromTridiagonal(alpha.head(used), sub, Eigen::ComputeEigenvectors);
    energy = tri.eigenvalues()(0);
    x = basis.leftCols(used) * tri.eigenvectors().col(0).cast<cplx>();
    x.normalize();
    w.noalias() = m * x;
    energy = x.dot(w).real();
    residual = (w - energy * x).norm();
    if (residual <= opts.tol * std::max(1.0, std::abs(energy))) {
      const Eigen::Index lead = argmax_abs(x);
      x *= std::conj(x(lead)) / std::abs(x(lead));
      GroundState g;
      g.energy = energy;
      g.state = StateVector(h.basis(), x);
      g.residual = residual;
      g.restarts = restart;
      return g;
    }
  }
  throw Error(ErrorCode::NoConvergence, "lanczos residual " + std::to_string(residual));
}

}  // namespace lakes
