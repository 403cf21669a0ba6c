#pragma once

#include <functional>

#include "lakes/core/state.hpp"

namespace lakes {

/// out = A in. Implementations must not alias in and out.
using OperatorAction = std::function<void(const VectorXc& in, VectorXc& out)>;

inline OperatorAction action_of(const SparseMatrixXc& m) {
  return [&m](const VectorXc& in, VectorXc& out) { out.noalias() = m * in; };
}

struct KrylovOptions {
  double tol = 1e-12;
  int max_dim = 40;
};

/// v <- exp(-i tau A) v for Hermitian A via Lanczos. The step is split
/// internally whenever the subspace cap is reached. Returns the matvec count.
int expm_multiply(const OperatorAction& a, double tau, VectorXc& v, const KrylovOptions& opts = {});

/// Dense reference: exp(-i tau H) for Hermitian H.
MatrixXc expm_hermitian(const MatrixXc& h, double tau);

}  // namespace lakes
