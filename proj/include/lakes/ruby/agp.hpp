#pragma once

#include <vector>

#include "lakes/core/krylov.hpp"
#include "lakes/ruby/operators.hpp"

namespace lakes::ruby {

/// Full: nested commutators with H(delta). Restricted: with PXP only.
enum class Family { Full, Restricted };

inline constexpr int kMaxEll = 6;

/// Dense terms M_k = -(Omega/2) ad_H^{2k-2}(PYP) (Full) or ad_PXP^{2k-2}(PYP)
/// (Restricted), k = 1..ell.
std::vector<MatrixXc> agp_terms(const RubyOperators& ops, Family family, int ell, double omega, double delta);

struct AlphaFit {
  Eigen::VectorXd alpha;
  Eigen::Index rank = 0;
  bool singular = false;
  double action = 0.0;       // Tr[G^2] at the optimum
  double action_zero = 0.0;  // Tr[dH^2]
};

/// Minimize Tr[G^2], G = dH + i[sum_k alpha_k M_k, H]. Singular directions
/// are resolved by the minimum-norm solution.
AlphaFit optimize_alphas(const std::vector<MatrixXc>& terms, const MatrixXc& h, const MatrixXc& dh);

/// alpha_k(delta) on a uniform grid with linear interpolation.
struct AlphaTable {
  double delta_start = -5.0;
  double delta_end = 5.0;
  Eigen::MatrixXd values;  // grid points x ell
  std::vector<Eigen::Index> ranks;

  int ell() const { return static_cast<int>(values.cols()); }
  Eigen::VectorXd at(double delta) const;
};

/// Fit alpha_k on `points` uniformly spaced deltas using the operators of
/// `fit_ops` (typically the 2x2 symmetric space).
AlphaTable build_alpha_table(const RubyOperators& fit_ops, Family family, int ell, double omega,
                             double delta_start, double delta_end, int points = 101);

/// out = sum_n c_n ad_B^n(Y) in, applied matrix-free. `shift` is subtracted
/// from B, which leaves ad_B unchanged but tames powers of B.
void apply_nested(const OperatorAction& b, double shift, const SparseMatrixXc& y,
                  const std::vector<double>& coeffs, const VectorXc& in, VectorXc& out);

/// Tables for every ell' = 1..ell from one pass over the grid.
std::vector<AlphaTable> build_alpha_tables(const RubyOperators& fit_ops, Family family, int ell, double omega,
                                           double delta_start, double delta_end, int points = 101);

/// Action of A(delta) = sum_k alpha_k M_k on the sweep space.
OperatorAction agp_action(const RubyOperators& ops, Family family, const Eigen::VectorXd& alpha, double omega,
                          double delta);

}  // namespace lakes::ruby
