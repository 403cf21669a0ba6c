#pragma once

#include <functional>

#include "lakes/core/krylov.hpp"

namespace lakes {

/// Linear ramp of a parameter over [0, T].
struct SweepSchedule {
  double param_start = 0.0;
  double param_end = 0.0;
  double total_time = 1.0;

  SweepSchedule() = default;
  SweepSchedule(double start, double end, double t);

  double param(double t) const;
  double rate() const { return (param_end - param_start) / total_time; }
};

/// H(t) as a matrix-free action. Called once per quadrature node.
using TimeDependentOperator = std::function<OperatorAction(double t)>;

enum class Integrator { Magnus2, CommutatorFree4 };

struct EvolveOptions {
  double dt = 0.0;  // 0 selects default_dt
  double energy_scale = 1.0;
  Integrator method = Integrator::CommutatorFree4;
  KrylovOptions krylov{};
  double norm_tol = 1e-6;
};

/// Default step: at least 100 steps, and at most 0.5 / energy_scale.
double default_dt(double total_time, double energy_scale);

VectorXc evolve(const TimeDependentOperator& h, const VectorXc& psi0, const SweepSchedule& schedule,
                const EvolveOptions& opts = {});
StateVector evolve(const TimeDependentOperator& h, const StateVector& psi0,
                   const SweepSchedule& schedule, const EvolveOptions& opts = {});

/// Piecewise-constant reference propagation by dense exponentials at the
/// midpoint of each step. Used as an oracle on small systems.
VectorXc evolve_dense_midpoint(const std::function<MatrixXc(double)>& h, const VectorXc& psi0,
                               double total_time, int steps);

}  // namespace lakes
