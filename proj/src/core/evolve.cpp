#include "lakes/core/evolve.hpp"

#include <algorithm>
#include <cmath>

namespace lakes {

SweepSchedule::SweepSchedule(double start, double end, double t)
    : param_start(start), param_end(end), total_time(t) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "sweep time must be positive");
}

double SweepSchedule::param(double t) const {
  const double s = std::clamp(t / total_time, 0.0, 1.0);
  return param_start + s * (param_end - param_start);
}

double default_dt(double total_time, double energy_scale) {
  const double cap = 0.5 / std::max(energy_scale, 1e-300);
  return std::min(total_time / 100.0, cap);
}

VectorXc evolve(const TimeDependentOperator& h, const VectorXc& psi0, const SweepSchedule& schedule,
                const EvolveOptions& opts) {
  const double total = schedule.total_time;
  const double dt_req = opts.dt > 0.0 ? opts.dt : default_dt(total, opts.energy_scale);
  const long steps = std::max<long>(1, static_cast<long>(std::ceil(total / dt_req - 1e-9)));
  const double dt = total / static_cast<double>(steps);
  const double norm0 = psi0.norm();

  VectorXc psi = psi0;
  VectorXc tmp(psi.size());

  // commutator-free Magnus, 4th order, two exponentials per step
  const double r3 = std::sqrt(3.0);
  const double c1 = 0.5 - r3 / 6.0, c2 = 0.5 + r3 / 6.0;
  const double a1 = (3.0 - 2.0 * r3) / 12.0, a2 = (3.0 + 2.0 * r3) / 12.0;

  for (long s = 0; s < steps; ++s) {
    const double t0 = dt * static_cast<double>(s);
    if (opts.method == Integrator::Magnus2) {
      const OperatorAction hm = h(t0 + 0.5 * dt);
      expm_multiply(hm, dt, psi, opts.krylov);
    } else {
      const OperatorAction h1 = h(t0 + c1 * dt);
      const OperatorAction h2 = h(t0 + c2 * dt);
      auto combo = [&](double w1, double w2) {
        return [&, w1, w2](const VectorXc& in, VectorXc& out) {
          h1(in, out);
          h2(in, tmp);
          out = w1 * out + w2 * tmp;
        };
      };
      expm_multiply(combo(a2, a1), dt, psi, opts.krylov);
      expm_multiply(combo(a1, a2), dt, psi, opts.krylov);
    }
    if (!std::isfinite(psi.squaredNorm()) || std::abs(psi.norm() - norm0) > opts.norm_tol) {
      throw Error(ErrorCode::NormDrift, "norm drift " + std::to_string(psi.norm() - norm0) +
                                            " at t=" + std::to_string(t0 + dt));
    }
  }
  return psi;
}

StateVector evolve(const TimeDependentOperator& h, const StateVector& psi0, const SweepSchedule& schedule,
                   const EvolveOptions& opts) {
  return StateVector(psi0.basis(), evolve(h, psi0.amplitudes(), schedule, opts));
}

VectorXc evolve_dense_midpoint(const std::function<MatrixXc(double)>& h, const VectorXc& psi0,
                               double total_time, int steps) {
  const double dt = total_time / steps;
  VectorXc psi = psi0;
  for (int s = 0; s < steps; ++s) psi = expm_hermitian(h((s + 0.5) * dt), dt) * psi;
  return psi;
}

}  // namespace lakes
