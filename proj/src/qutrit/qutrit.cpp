#include "lakes/qutrit/qutrit.hpp"

#include <cmath>
#include <memory>

namespace lakes::qutrit {

const BasisHandle& basis() {
  static const BasisHandle b = make_basis("qutrit", 3);
  return b;
}

MatrixXc spin_x() {
  MatrixXc x = MatrixXc::Zero(3, 3);
  x(0, 1) = x(1, 0) = x(1, 2) = x(2, 1) = 1.0 / std::sqrt(2.0);
  return x;
}

MatrixXc spin_z() {
  MatrixXc z = MatrixXc::Zero(3, 3);
  z(0, 0) = 1.0;
  z(2, 2) = -1.0;
  return z;
}

namespace {

MatrixXc dense_h(const QutritParams& p) {
  const MatrixXc z = spin_z();
  return -p.K * z * z - p.h_x * spin_x() - p.h_z * z;
}

MatrixXc dense_dk() {
  const MatrixXc z = spin_z();
  return -z * z;
}

MatrixXc dense_first_order(const QutritParams& p) {
  const MatrixXc x = spin_x(), z2 = spin_z() * spin_z();
  return cplx(0.0, p.h_x * first_order_alpha(p)) * (x * z2 - z2 * x);
}

}  // namespace

SparseOperator hamiltonian(const QutritParams& p) { return from_dense(basis(), dense_h(p), true); }

SparseOperator dk_hamiltonian() { return from_dense(basis(), dense_dk(), true); }

std::vector<std::string> warnings(const QutritParams& p) {
  std::vector<std::string> w;
  if (p.h_x > 0 && p.h_z / p.h_x > 0.5) w.emplace_back("h_z/h_x > 0.5: weak-field regime not satisfied");
  return w;
}

double first_order_alpha(const QutritParams& p) {
  return -1.0 / (4.0 * p.h_x * p.h_x + p.h_z * p.h_z + p.K * p.K);
}

SparseOperator first_order_agp(const QutritParams& p) {
  return from_dense(basis(), dense_first_order(p), true);
}

SparseOperator floquet_hamiltonian(double t, const QutritParams& p, double k_dot, double omega,
                                   double omega0) {
  const double beta = 2.0 * omega0 * first_order_alpha(p);
  const MatrixXc m = (1.0 + (omega / omega0) * std::cos(omega * t)) * dense_h(p) +
                     k_dot * beta * std::sin(omega * t) * dense_dk();
  return from_dense(basis(), m, true);
}

StateVector projected_target(const StateVector& psi0) {
  VectorXc v = psi0.amplitudes();
  v(1) = 0.0;
  if (v.norm() < 1e-12) throw Error(ErrorCode::ZeroProjection, "no weight outside |0>");
  StateVector out(psi0.basis(), v);
  out.normalize();
  return out;
}

SweepResult sweep(const SweepSpec& spec) {
  const SweepSchedule sched(spec.k_start, spec.k_end, spec.total_time);
  const double k_dot = sched.rate();
  auto params = [&](double t) { return QutritParams{sched.param(t), spec.h_x, spec.h_z}; };

  const StateVector psi0 = ground_state(hamiltonian(params(0.0))).state;
  const StateVector target = projected_target(psi0);
  const MatrixXc dk = dense_dk();

  TimeDependentOperator h = [&](double t) -> OperatorAction {
    const QutritParams p = params(t);
    MatrixXc m = dense_h(p);
    const double c = k_dot * spec.lambda_f;
    switch (spec.drive) {
      case Drive::None:
        break;
      case Drive::FirstOrder:
        m += c * dense_first_order(p);
        break;
      case Drive::Exact:
        m += c * MatrixXc(exact_agp(hamiltonian(p), dk_hamiltonian()).matrix());
        break;
      case Drive::Gapped:
        m += c * MatrixXc(gapped_agp(hamiltonian(p), dk_hamiltonian(), {spec.delta}).matrix());
        break;
      case Drive::StateSpecific:
        m += c * MatrixXc(state_specific_agp(hamiltonian(p), dk_hamiltonian(), spec.level).matrix());
        break;
      case Drive::Floquet: {
        const double beta = 2.0 * spec.omega0 * first_order_alpha(p);
        m = (1.0 + (spec.omega / spec.omega0) * std::cos(spec.omega * t)) * m +
            k_dot * spec.lambda_f * beta * std::sin(spec.omega * t) * dk;
        break;
      }
    }
    auto held = std::make_shared<MatrixXc>(std::move(m));
    return [held](const VectorXc& in, VectorXc& out) { out.noalias() = *held * in; };
  };

  EvolveOptions opts;
  opts.energy_scale = std::max({std::abs(spec.k_start), std::abs(spec.k_end), spec.h_x});
  opts.dt = spec.dt;
  if (spec.drive == Drive::Floquet && opts.dt <= 0.0) {
    // resolve the fast carrier: 40 steps per period
    opts.dt = std::min(default_dt(spec.total_time, opts.energy_scale), 2.0 * M_PI / spec.omega / 40.0);
  }
  SweepResult r;
  r.final_state = evolve(h, psi0, sched, opts);
  const StateVector gs_end = ground_state(hamiltonian(params(spec.total_time))).state;
  r.overlap_target = std::abs(inner(target, r.final_state));
  r.overlap_ground = std::abs(inner(gs_end, r.final_state));
  return r;
}

}  // namespace lakes::qutrit
