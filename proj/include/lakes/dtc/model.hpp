#pragma once

#include <mutex>
#include <string>
#include <vector>

#include "lakes/dtc/lattice.hpp"

namespace lakes::dtc {

struct DtcParams {
  double K = 0.0;
  double h_x = 1.0;
  double h_z = 0.0;
};

/// Gauss-projection validity bound on h_z / h_x.
double hz_bound();
std::vector<std::string> warnings(const DtcParams& p);

/// -K sum_v G_v - h_x sum_i X_i - h_z sum_i Z_i.
PauliSum pauli_hamiltonian(const DtcLattice& lat, const DtcParams& p);
/// dH/dK = -sum_v G_v.
PauliSum pauli_dk(const DtcLattice& lat);
/// sum over vertices and legs of the star of Z's with that leg's Z replaced by Y.
PauliSum star_y_sum(const DtcLattice& lat);
PauliSum x_sum(const DtcLattice& lat);
PauliSum z_sum(const DtcLattice& lat);

/// i ad_{H_e}^{2k-1}(dH_e/dK) for k = 1..ell with H_e = H(h_z = 0).
std::vector<PauliSum> nested_terms(const DtcLattice& lat, double K, double h_x, int ell);

/// Sparse operators on the full 2^(2 Lx Ly) space.
class DtcModel {
 public:
  /// At most 16 qubits; TooLarge otherwise.
  DtcModel(int lx, int ly);

  const DtcLattice& lattice() const { return lat_; }
  const BasisHandle& basis() const { return basis_; }
  int n_qubits() const { return lat_.n_links(); }

  SparseOperator hamiltonian(const DtcParams& p) const;
  SparseOperator dk() const { return dk_; }
  const SparseOperator& star_y() const { return star_y_; }
  const SparseOperator& gauss(int v) const { return gauss_[v]; }
  const SparseOperator& wilson(int p) const { return wilson_[p]; }
  SparseOperator op(const PauliSum& s, bool hermitian = true) const;

  /// i ad_{H_e}^{2k-1}(dH_e/dK) = sum_j K^j h_x^{2k-1-j} T_{k,j}, k = 1 or 2.
  /// The T_{k,j} are built on first use.
  SparseMatrixXc nested_term(int k, double K, double h_x) const;

  /// Normalized P_G psi with P_G = prod_v (1 + G_v)/2.
  StateVector gauss_projected(const StateVector& psi) const;

 private:
  DtcLattice lat_;
  BasisHandle basis_;
  SparseMatrixXc g_sum_, x_sum_, z_sum_;
  SparseOperator dk_, star_y_;
  std::vector<SparseOperator> gauss_, wilson_;
  mutable std::once_flag nested_once_;
  mutable std::vector<std::vector<SparseMatrixXc>> nested_;
};

}  // namespace lakes::dtc
