#pragma once

#include <vector>

#include "lakes/core/state.hpp"

namespace lakes {

inline constexpr Eigen::Index kDenseThreshold = 4096;

/// Full spectrum, ascending. Columns of `vectors` are eigenvectors.
struct Eigensystem {
  Eigen::VectorXd values;
  MatrixXc vectors;
  BasisHandle basis;

  StateVector vector(Eigen::Index n) const { return StateVector(basis, vectors.col(n)); }
  std::vector<StateVector> vector_list() const;
};

/// Dense Hermitian eigensolver with deterministic ordering: ascending energy,
/// then (inside a degenerate block) by the index of the largest amplitude.
/// Each vector's largest amplitude is made real and positive.
Eigensystem eigendecompose(const SparseOperator& h, Eigen::Index dense_threshold = kDenseThreshold);
Eigensystem eigendecompose_dense(const MatrixXc& h, BasisHandle basis = nullptr);

struct GroundStateOptions {
  double tol = 1e-11;
  int krylov_dim = 60;
  int max_restarts = 400;
  unsigned seed = 7;
};

struct GroundState {
  double energy = 0.0;
  StateVector state;
  double residual = 0.0;
  int restarts = 0;
};

/// Restarted Lanczos with full reorthogonalization for the lowest eigenpair.
GroundState ground_state(const SparseOperator& h, const GroundStateOptions& opts = {});

}  // namespace lakes
