#include "lakes/core/agp.hpp"

#include <cmath>

namespace lakes {

MatrixXc agp_matrix(const Eigensystem& es, const MatrixXc& dh,
                    const std::function<bool(Eigen::Index, Eigen::Index)>& keep, bool strict,
                    double degeneracy_tol) {
  const Eigen::Index n = es.values.size();
  if (strict) {
    for (Eigen::Index k = 1; k < n; ++k) {
      if (es.values(k) - es.values(k - 1) < degeneracy_tol) {
        throw Error(ErrorCode::DegenerateSpectrum, "levels " + std::to_string(k - 1) + "," +
                                                       std::to_string(k) + " closer than tolerance");
      }
    }
  }
  const MatrixXc d = es.vectors.adjoint() * dh * es.vectors;
  MatrixXc a = MatrixXc::Zero(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double gap = es.values(m) - es.values(k);
      if (m == k || std::abs(gap) < degeneracy_tol || !keep(m, k)) continue;
      a(m, k) = cplx(0.0, -1.0) * d(m, k) / gap;
    }
  }
  MatrixXc out = es.vectors * a * es.vectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

namespace {

SparseOperator wrap(const SparseOperator& h, const MatrixXc& m) { return from_dense(h.basis(), m, true, 1e-15); }

}  // namespace

SparseOperator exact_agp(const SparseOperator& h, const SparseOperator& dh) {
  require_same_basis(h.basis(), dh.basis());
  const Eigensystem es = eigendecompose(h);
  return wrap(h, agp_matrix(es, MatrixXc(dh.matrix()), [](Eigen::Index, Eigen::Index) { return true; }));
}

SparseOperator gapped_agp(const SparseOperator& h, const SparseOperator& dh, const GappedAgpSpec& spec) {
  require_same_basis(h.basis(), dh.basis());
  if (spec.delta < 0.0) throw Error(ErrorCode::InvalidArgument, "gap cutoff must be non-negative");
  const Eigensystem es = eigendecompose(h);
  auto keep = [&](Eigen::Index m, Eigen::Index k) {
    return std::abs(es.values(m) - es.values(k)) - spec.delta > 0.0;
  };
  return wrap(h, agp_matrix(es, MatrixXc(dh.matrix()), keep));
}

SparseOperator state_specific_agp(const SparseOperator& h, const SparseOperator& dh, Eigen::Index level) {
  require_same_basis(h.basis(), dh.basis());
  if (level < 0 || level >= h.dim()) {
    throw Error(ErrorCode::IndexOutOfRange, "level " + std::to_string(level));
  }
  const Eigensystem es = eigendecompose(h);
  auto keep = [level](Eigen::Index m, Eigen::Index k) { return m == level || k == level; };
  return wrap(h, agp_matrix(es, MatrixXc(dh.matrix()), keep));
}

MatrixXc exact_agp_tolerant(const MatrixXc& h, const MatrixXc& dh, double degeneracy_tol) {
  const Eigensystem es = eigendecompose_dense(h);
  return agp_matrix(es, dh, [](Eigen::Index, Eigen::Index) { return true; }, false, degeneracy_tol);
}

double trace_action(const MatrixXc& h, const MatrixXc& dh, const MatrixXc& a) {
  const MatrixXc g = dh + cplx(0.0, 1.0) * (a * h - h * a);
  return g.squaredNorm();
}

}  // namespace lakes
