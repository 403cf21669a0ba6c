#pragma once

#include <functional>

#include "lakes/core/spectrum.hpp"

namespace lakes {

/// Cutoff for the gapped gauge potential. Elements survive only when
/// |E_m - E_n| > delta strictly.
struct GappedAgpSpec {
  double delta = 0.0;
};

/// Matrix of the gauge potential in the original basis,
///   A = sum_{m != n, keep(m,n)} -i <m|dH|n> / (E_m - E_n) |m><n|.
/// Pairs closer than `degeneracy_tol` are dropped when `strict` is false and
/// raise DegenerateSpectrum otherwise.
MatrixXc agp_matrix(const Eigensystem& es, const MatrixXc& dh,
                    const std::function<bool(Eigen::Index, Eigen::Index)>& keep, bool strict = true,
                    double degeneracy_tol = 1e-10);

SparseOperator exact_agp(const SparseOperator& h, const SparseOperator& dh);
SparseOperator gapped_agp(const SparseOperator& h, const SparseOperator& dh, const GappedAgpSpec& spec);

/// Only transitions into and out of eigenstate `level` are kept.
SparseOperator state_specific_agp(const SparseOperator& h, const SparseOperator& dh, Eigen::Index level);

/// Exact gauge potential that tolerates degeneracies by dropping elements
/// inside degenerate blocks.
MatrixXc exact_agp_tolerant(const MatrixXc& h, const MatrixXc& dh, double degeneracy_tol = 1e-8);

/// Tr[G^dagger G] with G = dH + i[A, H], the trace action.
double trace_action(const MatrixXc& h, const MatrixXc& dh, const MatrixXc& a);

}  // namespace lakes
