#pragma once

#include <complex>
#include <memory>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lakes/core/error.hpp"

namespace lakes {

using cplx = std::complex<double>;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;
using SparseMatrixXc = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// Identity of a Hilbert-space basis. States and operators carry a handle and
/// refuse to mix with objects built on another basis.
struct Basis {
  std::string name;
  Eigen::Index dim = 0;
};

using BasisHandle = std::shared_ptr<const Basis>;

BasisHandle make_basis(std::string name, Eigen::Index dim);

void require_same_basis(const BasisHandle& a, const BasisHandle& b);

/// Normalized complex amplitude vector on a registered basis.
class StateVector {
 public:
  StateVector() = default;
  StateVector(BasisHandle basis, VectorXc amplitudes);

  static StateVector basis_state(BasisHandle basis, Eigen::Index index);

  const VectorXc& amplitudes() const { return amplitudes_; }
  VectorXc& amplitudes() { return amplitudes_; }
  const BasisHandle& basis() const { return basis_; }
  Eigen::Index dim() const { return amplitudes_.size(); }

  /// Effective qubit count log2(dim).
  double n_d() const;
  double norm() const { return amplitudes_.norm(); }

  /// Throws ZeroProjection when the norm vanishes.
  StateVector& normalize();

 private:
  BasisHandle basis_;
  VectorXc amplitudes_;
};

cplx inner(const StateVector& bra, const StateVector& ket);

/// |<psi|phi>|^(1/n_d), the per-qubit overlap used for many-body fidelities.
double overlap_per_site(const StateVector& psi, const StateVector& phi);

/// Sparse operator on a basis. The hermitian flag is checked on construction.
class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(BasisHandle basis, SparseMatrixXc matrix, bool hermitian);

  const SparseMatrixXc& matrix() const { return matrix_; }
  const BasisHandle& basis() const { return basis_; }
  bool hermitian() const { return hermitian_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  VectorXc apply(const VectorXc& v) const { return matrix_ * v; }
  StateVector apply(const StateVector& v) const;
  cplx expectation(const StateVector& v) const;

  SparseOperator operator+(const SparseOperator& other) const;
  SparseOperator operator-(const SparseOperator& other) const;
  SparseOperator operator*(cplx s) const;

 private:
  BasisHandle basis_;
  SparseMatrixXc matrix_;
  bool hermitian_ = false;
};

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);
cplx frobenius_inner(const SparseOperator& a, const SparseOperator& b);
double hermiticity_defect(const SparseMatrixXc& m);

/// Hermitian operator from a dense matrix; entries below `drop` are pruned.
SparseOperator from_dense(BasisHandle basis, const MatrixXc& m, bool hermitian,
                          double drop = 0.0);

template <typename Derived>
typename Derived::PlainObject matrix_commutator(const Eigen::MatrixBase<Derived>& a,
                                                const Eigen::MatrixBase<Derived>& b) {
  return a * b - b * a;
}

/// Tr(A^dagger B) for dense matrices of any scalar type.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar frobenius_inner(const Eigen::MatrixBase<DerivedA>& a,
                                          const Eigen::MatrixBase<DerivedB>& b) {
  return a.conjugate().cwiseProduct(b).sum();
}

}  // namespace lakes
