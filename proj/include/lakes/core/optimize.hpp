#pragma once

#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace lakes {

struct ScalarMin {
  double x = 0.0;
  double f = 0.0;
  int evaluations = 0;
};

/// Golden-section minimization of a unimodal f on [a, b].
ScalarMin golden_section(const std::function<double(double)>& f, double a, double b, double tol);

struct SimplexResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int evaluations = 0;
  bool stalled = false;
};

struct SimplexOptions {
  double initial_step = 0.1;
  double ftol = 1e-10;
  double xtol = 1e-8;
  int max_evaluations = 4000;
};

/// Nelder-Mead simplex minimization.
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, const SimplexOptions& opts = {});

struct Quadrature {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b].
Quadrature integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

/// Integral over [a, inf) via x = a + s/(1-s).
Quadrature integrate_to_infinity(const std::function<double(double)>& f, double a,
                                 double tol = 1e-10);

template <typename Scalar>
struct MinNormSolution {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Eigen::Index rank = 0;
  bool singular = false;
};

/// Minimum-norm solution of a (possibly singular) symmetric system G x = b.
/// Columns are rescaled by sqrt(diag G) before the decomposition.
template <typename DerivedG, typename DerivedB>
MinNormSolution<typename DerivedG::Scalar> solve_min_norm(const Eigen::MatrixBase<DerivedG>& gram,
                                                          const Eigen::MatrixBase<DerivedB>& rhs,
                                                          double rcond = 1e-13) {
  using Scalar = typename DerivedG::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = gram.rows();
  Vec scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = std::abs(gram(i, i));
    scale(i) = d > 0 ? Scalar(1.0 / std::sqrt(d)) : Scalar(1.0);
  }
  Mat g = scale.asDiagonal() * gram * scale.asDiagonal();
  Vec b = scale.asDiagonal() * rhs;
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(g);
  cod.setThreshold(rcond);
  MinNormSolution<Scalar> out;
  out.x = scale.asDiagonal() * cod.solve(b);
  out.rank = cod.rank();
  out.singular = out.rank < n;
  return out;
}

/// Deterministic uniform draws in [lo, hi) for optimizer restarts.
Eigen::VectorXd uniform_point(std::mt19937_64& rng, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

}  // namespace lakes
