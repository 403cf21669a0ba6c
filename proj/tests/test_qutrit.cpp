#include <doctest.h>

#include <cmath>

#include "lakes/core/optimize.hpp"
#include "lakes/qutrit/qutrit.hpp"

using namespace lakes;
using namespace lakes::qutrit;

namespace {

const double kHz = 1.0 / 15.0;

MatrixXc dense(const SparseOperator& op) { return MatrixXc(op.matrix()); }

}  // namespace

TEST_CASE("qutrit hamiltonian limits") {
  Eigensystem es = eigendecompose(hamiltonian({0.0, 1.0, 0.0}));
  CHECK(es.values(0) == doctest::Approx(-1.0));
  CHECK(std::abs(es.values(1)) < 1e-12);
  CHECK(es.values(2) == doctest::Approx(1.0));

  Eigensystem neg = eigendecompose(hamiltonian({-20.0, 1.0, kHz}));
  CHECK(std::norm(neg.vectors(1, 0)) > 0.99);

  Eigensystem pos = eigendecompose(hamiltonian({20.0, 1.0, kHz}));
  CHECK(std::norm(pos.vectors(0, 0)) > 0.5);
  CHECK(pos.values(1) - pos.values(0) < 0.1 * (pos.values(2) - pos.values(1)));

  CHECK(warnings({0.0, 1.0, 0.6}).size() == 1);
  CHECK(warnings({0.0, 1.0, kHz}).empty());
}

TEST_CASE("exact AGP: Landau-Zener is proportional to Y") {
  auto b = make_basis("qubit", 2);
  MatrixXc z(2, 2), x(2, 2), y(2, 2);
  z << 1, 0, 0, -1;
  x << 0, 1, 1, 0;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  for (double k : {-3.0, 0.0, 0.7}) {
    SparseOperator h = from_dense(b, -k * z - x, true);
    MatrixXc a = dense(exact_agp(h, from_dense(b, -z, true)));
    const cplx c = frobenius_inner(y, a) / 2.0;
    CHECK((a - c * y).norm() < 1e-12);
    CHECK(std::abs(c) > 0.0);
  }
}

TEST_CASE("exact AGP vanishes when dH = H") {
  SparseOperator h = hamiltonian({1.0, 1.0, kHz});
  CHECK(dense(exact_agp(h, h)).norm() < 1e-12);
  CHECK(dense(state_specific_agp(h, h, 2)).norm() < 1e-12);
}

TEST_CASE("exact AGP matches finite-difference eigenvector derivative") {
  const double k = 0.0, eps = 1e-5;
  MatrixXc a = dense(exact_agp(hamiltonian({k, 1.0, kHz}), dk_hamiltonian()));
  Eigensystem e0 = eigendecompose(hamiltonian({k, 1.0, kHz}));
  Eigensystem ep = eigendecompose(hamiltonian({k + eps, 1.0, kHz}));
  Eigensystem em = eigendecompose(hamiltonian({k - eps, 1.0, kHz}));
  // parallel-transport gauge: align neighbouring vectors with the centre
  for (int n = 0; n < 3; ++n) {
    for (Eigensystem* e : {&ep, &em}) {
      const cplx ph = e0.vectors.col(n).dot(e->vectors.col(n));
      e->vectors.col(n) *= std::conj(ph) / std::abs(ph);
    }
  }
  MatrixXc dv = (ep.vectors - em.vectors) / (2 * eps);
  MatrixXc a_eig = e0.vectors.adjoint() * a * e0.vectors;
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 3; ++n) {
      if (m == n) continue;
      const cplx fd = cplx(0, 1) * e0.vectors.col(m).dot(dv.col(n));
      CHECK(std::abs(a_eig(m, n) - fd) < 1e-6);
    }
  }
}

TEST_CASE("gapped and state-specific AGPs") {
  SparseOperator h = hamiltonian({0.5, 1.0, kHz});
  SparseOperator dh = dk_hamiltonian();
  MatrixXc exact = dense(exact_agp(h, dh));
  CHECK((dense(gapped_agp(h, dh, {0.0})) - exact).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(dense(gapped_agp(h, dh, {100.0})).norm() == 0.0);
  CHECK(hermiticity_defect(gapped_agp(h, dh, {1.0}).matrix()) < 1e-12);
  CHECK(hermiticity_defect(state_specific_agp(h, dh, 2).matrix()) < 1e-12);
  CHECK_THROWS_AS(state_specific_agp(h, dh, 3), Error);

  // the state-specific operator has no element between levels 0 and 1
  Eigensystem es = eigendecompose(h);
  MatrixXc ss = es.vectors.adjoint() * dense(state_specific_agp(h, dh, 2)) * es.vectors;
  CHECK(std::abs(ss(0, 1)) < 1e-12);
  CHECK(std::abs(ss(0, 2)) > 1e-3);

  // boundary: a cutoff equal to a gap drops that element
  const double gap01 = es.values(1) - es.values(0);
  MatrixXc at = es.vectors.adjoint() * dense(gapped_agp(h, dh, {gap01})) * es.vectors;
  CHECK(std::abs(at(0, 1)) < 1e-12);
}

TEST_CASE("degenerate spectrum is rejected") {
  SparseOperator h = from_dense(basis(), MatrixXc::Identity(3, 3), true);
  CHECK_THROWS_AS(exact_agp(h, dk_hamiltonian()), Error);
}

TEST_CASE("first-order alpha") {
  CHECK(first_order_alpha({0.0, 1.0, 0.0}) == doctest::Approx(-0.25));
  CHECK(first_order_alpha({20.0, 1.0, kHz}) == doctest::Approx(-1.0 / (404.0 + kHz * kHz)));
  CHECK(-1.0 / first_order_alpha({-20.0, 1.0, kHz}) == doctest::Approx(404.004).epsilon(1e-5));

  // least-squares oracle on the trace action with the single operator i[X, Z^2]
  const MatrixXc x = spin_x(), z2 = spin_z() * spin_z();
  const MatrixXc m = cplx(0, 1) * (x * z2 - z2 * x);
  for (double k : {-20.0, -1.0, 0.0, 2.5, 20.0}) {
    const QutritParams p{k, 1.3, kHz};
    const MatrixXc h = dense(hamiltonian(p)), dh = dense(dk_hamiltonian());
    const MatrixXc b = cplx(0, 1) * (m * h - h * m);
    Eigen::Matrix<double, 1, 1> g, r;
    g(0, 0) = frobenius_inner(b, b).real();
    r(0) = -frobenius_inner(b, dh).real();
    const double c = solve_min_norm(g, r).x(0);
    CHECK(c / p.h_x == doctest::Approx(first_order_alpha(p)).epsilon(1e-10));
    CHECK(trace_action(h, dh, dense(first_order_agp(p))) <= trace_action(h, dh, MatrixXc::Zero(3, 3)));
  }
}

TEST_CASE("floquet hamiltonian") {
  const QutritParams p{0.0, 1.0, kHz};
  // vanishing drive ratio with zero K-rate reduces to H
  CHECK((dense(floquet_hamiltonian(0.3, p, 0.0, 1e-9, 10.0)) - dense(hamiltonian(p))).norm() < 1e-9);

  // time-averaged generator approaches H_CD with error per unit time ~ 1/omega
  const double kd = 40.0, w0 = 10.0;
  const MatrixXc hcd = dense(hamiltonian(p)) + kd * dense(first_order_agp(p));
  auto err = [&](double w) {
    const int periods = 16, per_step = 400;
    const double tw = periods * 2 * M_PI / w;
    const int steps = periods * per_step;
    MatrixXc u = MatrixXc::Identity(3, 3);
    for (int s = 0; s < steps; ++s) {
      u = expm_hermitian(dense(floquet_hamiltonian((s + 0.5) * tw / steps, p, kd, w, w0)), tw / steps) * u;
    }
    return (u - expm_hermitian(hcd, tw)).norm() / tw;
  };
  const double ratio = err(4e3) / err(8e3);
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.5);
}

TEST_CASE("projected target") {
  const double e = 0.05;
  VectorXc v(3);
  v << e, 1.0, e;
  StateVector psi(basis(), v.normalized());
  StateVector t = projected_target(psi);
  CHECK(std::abs(t.amplitudes()(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(t.amplitudes()(2) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(projected_target(StateVector::basis_state(basis(), 0)).amplitudes()(0) - 1.0) < 1e-14);
  try {
    projected_target(StateVector::basis_state(basis(), 1));
    FAIL("expected ZeroProjection");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ZeroProjection);
  }
}

TEST_CASE("qutrit sweep: dense oracle and step halving") {
  SweepSpec s;
  s.total_time = 10.0;
  const SweepResult r = sweep(s);

  // oracle: many small exact exponentials at step midpoints
  const SweepSchedule sched(s.k_start, s.k_end, s.total_time);
  const VectorXc psi0 = ground_state(hamiltonian({s.k_start, s.h_x, s.h_z})).state.amplitudes();
  const VectorXc ref = evolve_dense_midpoint(
      [&](double t) { return dense(hamiltonian({sched.param(t), s.h_x, s.h_z})); }, psi0, s.total_time, 200000);
  const StateVector target = projected_target(StateVector(basis(), psi0));
  CHECK(std::abs(std::abs(target.amplitudes().dot(ref)) - r.overlap_target) < 1e-6);

  SweepSpec half = s;
  half.dt = default_dt(s.total_time, 20.0) / 2;
  CHECK(std::abs(sweep(half).overlap_target - r.overlap_target) < 1e-6);
}

TEST_CASE("qutrit sweep: exact AGP tracks the ground state") {
  for (double t : {0.1, 1.0, 10.0}) {
    SweepSpec s;
    s.total_time = t;
    s.drive = Drive::Exact;
    CHECK(sweep(s).overlap_ground >= 1.0 - 1e-6);
  }
}

TEST_CASE("qutrit sweep: first-order drive beats the undriven quench") {
  for (double t : {0.1, 0.5, 1.0}) {
    SweepSpec s;
    s.total_time = t;
    const double und = sweep(s).overlap_target;
    s.drive = Drive::FirstOrder;
    CHECK(sweep(s).overlap_target >= und);
  }
}
