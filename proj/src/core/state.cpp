#include "lakes/core/state.hpp"

#include <cmath>

namespace lakes {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NormDrift: return "NormDrift";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ZeroProjection: return "ZeroProjection";
    case ErrorCode::BadFactor: return "BadFactor";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::GroupActionInvalid: return "GroupActionInvalid";
    case ErrorCode::NoCoverings: return "NoCoverings";
    case ErrorCode::TooDeep: return "TooDeep";
    case ErrorCode::EmptyLibrary: return "EmptyLibrary";
    case ErrorCode::BurnInUnstable: return "BurnInUnstable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ResourceExceeded: return "ResourceExceeded";
  }
  return "Unknown";
}

BasisHandle make_basis(std::string name, Eigen::Index dim) {
  return std::make_shared<const Basis>(Basis{std::move(name), dim});
}

void require_same_basis(const BasisHandle& a, const BasisHandle& b) {
  if (!a || !b || a.get() != b.get()) {
    throw Error(ErrorCode::BasisMismatch,
                (a ? a->name : std::string("<none>")) + " vs " + (b ? b->name : std::string("<none>")));
  }
}

StateVector::StateVector(BasisHandle basis, VectorXc amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (!basis_ || basis_->dim != amplitudes_.size()) {
    throw Error(ErrorCode::BasisMismatch, "amplitude length does not match basis dimension");
  }
}

StateVector StateVector::basis_state(BasisHandle basis, Eigen::Index index) {
  if (index < 0 || index >= basis->dim) {
    throw Error(ErrorCode::IndexOutOfRange, "basis state index " + std::to_string(index));
  }
  VectorXc v = VectorXc::Zero(basis->dim);
  v(index) = 1.0;
  return StateVector(std::move(basis), std::move(v));
}

double StateVector::n_d() const { return std::log2(static_cast<double>(amplitudes_.size())); }

StateVector& StateVector::normalize() {
  const double n = amplitudes_.norm();
  if (!(n > 1e-300)) throw Error(ErrorCode::ZeroProjection, "cannot normalize a zero vector");
  amplitudes_ /= n;
  return *this;
}

cplx inner(const StateVector& bra, const StateVector& ket) {
  require_same_basis(bra.basis(), ket.basis());
  return bra.amplitudes().dot(ket.amplitudes());
}

double overlap_per_site(const StateVector& psi, const StateVector& phi) {
  const double nd = psi.n_d();
  if (!(nd > 0)) throw Error(ErrorCode::InvalidArgument, "n_d must be positive");
  return std::pow(std::abs(inner(psi, phi)), 1.0 / nd);
}

double hermiticity_defect(const SparseMatrixXc& m) {
  const SparseMatrixXc diff = m - SparseMatrixXc(m.adjoint());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrixXc::InnerIterator it(diff, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

SparseOperator::SparseOperator(BasisHandle basis, SparseMatrixXc matrix, bool hermitian)
    : basis_(std::move(basis)), matrix_(std::move(matrix)), hermitian_(hermitian) {
  if (!basis_ || matrix_.rows() != basis_->dim || matrix_.cols() != basis_->dim) {
    throw Error(ErrorCode::BasisMismatch, "operator shape does not match basis dimension");
  }
  if (hermitian_) {
    double scale = 1.0;
    for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k) {
      for (SparseMatrixXc::InnerIterator it(matrix_, k); it; ++it) {
        scale = std::max(scale, std::abs(it.value()));
      }
    }
    if (hermiticity_defect(matrix_) > 1e-12 * scale) {
      throw Error(ErrorCode::NonHermitian, "operator flagged hermitian is not");
    }
  }
  matrix_.makeCompressed();
}

StateVector SparseOperator::apply(const StateVector& v) const {
  require_same_basis(basis_, v.basis());
  return StateVector(basis_, matrix_ * v.amplitudes());
}

cplx SparseOperator::expectation(const StateVector& v) const {
  require_same_basis(basis_, v.basis());
  return v.amplitudes().dot(matrix_ * v.amplitudes());
}

SparseOperator SparseOperator::operator+(const SparseOperator& other) const {
  require_same_basis(basis_, other.basis_);
  return SparseOperator(basis_, matrix_ + other.matrix_, hermitian_ && other.hermitian_);
}

SparseOperator SparseOperator::operator-(const SparseOperator& other) const {
  require_same_basis(basis_, other.basis_);
  return SparseOperator(basis_, matrix_ - other.matrix_, hermitian_ && other.hermitian_);
}

SparseOperator SparseOperator::operator*(cplx s) const {
  return SparseOperator(basis_, matrix_ * s, hermitian_ && s.imag() == 0.0);
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  require_same_basis(a.basis(), b.basis());
  SparseMatrixXc c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  c.prune(cplx(0.0), 0.0);
  return SparseOperator(a.basis(), std::move(c), false);
}

cplx frobenius_inner(const SparseOperator& a, const SparseOperator& b) {
  require_same_basis(a.basis(), b.basis());
  return a.matrix().conjugate().cwiseProduct(b.matrix()).sum();
}

SparseOperator from_dense(BasisHandle basis, const MatrixXc& m, bool hermitian, double drop) {
  SparseMatrixXc s = m.sparseView(1.0, drop);
  return SparseOperator(std::move(basis), std::move(s), hermitian);
}

}  // namespace lakes
