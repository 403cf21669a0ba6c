#include <doctest.h>

#include <cmath>
#include <random>

#include "lakes/core/evolve.hpp"
#include "lakes/core/optimize.hpp"
#include "lakes/core/serialize.hpp"
#include "lakes/core/spectrum.hpp"

using namespace lakes;

namespace {

MatrixXc random_hermitian(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  MatrixXc a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

MatrixXc spin1_x() {
  MatrixXc x = MatrixXc::Zero(3, 3);
  x(0, 1) = x(1, 0) = x(1, 2) = x(2, 1) = 1.0 / std::sqrt(2.0);
  return x;
}

}  // namespace

TEST_CASE("spin-1 X spectrum") {
  auto b = make_basis("spin1", 3);
  auto h = from_dense(b, -spin1_x(), true);
  Eigensystem es = eigendecompose(h);
  CHECK(es.values(0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(es.values(1)) < 1e-12);
  CHECK(es.values(2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigendecompose residuals and trace") {
  auto b = make_basis("rand", 60);
  MatrixXc m = random_hermitian(60, 3);
  Eigensystem es = eigendecompose(from_dense(b, m, true));
  for (Eigen::Index k = 0; k < 60; ++k) {
    CHECK((m * es.vectors.col(k) - es.values(k) * es.vectors.col(k)).norm() <= 1e-10);
    if (k) CHECK(es.values(k) >= es.values(k - 1));
  }
  CHECK(std::abs(es.values.sum() - m.trace().real()) <= 1e-8 * m.norm());
  CHECK((es.vectors.adjoint() * es.vectors - MatrixXc::Identity(60, 60)).norm() < 1e-10);
}

TEST_CASE("degenerate blocks are ordered deterministically") {
  MatrixXc d = MatrixXc::Zero(4, 4);
  d(0, 0) = 1.0;
  d(3, 3) = 1.0;
  d(1, 1) = -1.0;
  d(2, 2) = -1.0;
  Eigensystem es = eigendecompose_dense(d);
  CHECK(std::abs(es.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(es.vectors(2, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(es.vectors(0, 2)) == doctest::Approx(1.0));
  CHECK(std::abs(es.vectors(3, 3)) == doctest::Approx(1.0));
  CHECK(es.vectors(0, 2).real() > 0.0);
}

TEST_CASE("eigendecompose errors") {
  auto b = make_basis("two", 2);
  SparseMatrixXc m(2, 2);
  m.insert(0, 1) = 1.0;
  SparseOperator nh(b, m, false);
  CHECK_THROWS_AS(eigendecompose(nh), Error);
  try {
    eigendecompose(nh);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonHermitian);
  }
  auto big = make_basis("big", 10);
  SparseMatrixXc id(10, 10);
  id.setIdentity();
  try {
    eigendecompose(SparseOperator(big, id, true), 5);
    FAIL("expected DimensionTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionTooLarge);
  }
  SparseMatrixXc bad(2, 2);
  bad.insert(0, 1) = 1.0;
  CHECK_THROWS_AS(SparseOperator(b, bad, true), Error);
}

TEST_CASE("ground state: Landau-Zener far past the crossing") {
  auto b = make_basis("qubit", 2);
  MatrixXc h(2, 2);
  const double k = 100.0;
  h << -k, -1.0, -1.0, k;  // -K Z - X with Z = diag(1,-1)
  GroundState g = ground_state(from_dense(b, h, true));
  const double z = std::norm(g.state.amplitudes()(0)) - std::norm(g.state.amplitudes()(1));
  CHECK(z > 0.999);
}

TEST_CASE("ground state: lanczos matches dense") {
  const Eigen::Index n = 300;
  auto b = make_basis("sparse-rand", n);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  std::normal_distribution<double> g;
  std::vector<Eigen::Triplet<cplx>> t;
  for (Eigen::Index i = 0; i < n; ++i) t.emplace_back(i, i, g(rng));
  for (int e = 0; e < 4 * n; ++e) {
    Eigen::Index i = pick(rng), j = pick(rng);
    if (i == j) continue;
    cplx v(g(rng), g(rng));
    t.emplace_back(i, j, v);
    t.emplace_back(j, i, std::conj(v));
  }
  SparseMatrixXc m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  SparseOperator h(b, m, true);
  GroundState gs = ground_state(h);
  Eigensystem es = eigendecompose(h);
  CHECK(gs.residual <= 1e-8);
  CHECK(gs.energy == doctest::Approx(es.values(0)).epsilon(1e-10));
  CHECK(std::abs(es.vectors.col(0).dot(gs.state.amplitudes())) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ground state: shifted projector has E0 = 0 in its kernel") {
  const Eigen::Index n = 100;
  auto b = make_basis("proj", n);
  VectorXc u = VectorXc::Ones(n) / std::sqrt(double(n));
  MatrixXc p = MatrixXc::Identity(n, n) - u * u.adjoint();
  GroundState g = ground_state(from_dense(b, p, true, 1e-15));
  CHECK(std::abs(g.energy) < 1e-10);
  CHECK(std::abs(u.dot(g.state.amplitudes())) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("krylov action matches dense exponential") {
  const Eigen::Index n = 80;
  MatrixXc h = random_hermitian(n, 5);
  SparseMatrixXc hs = h.sparseView();
  VectorXc v = VectorXc::Random(n).normalized();
  for (double tau : {0.01, 0.7, 9.0}) {
    VectorXc w = v;
    expm_multiply(action_of(hs), tau, w);
    CHECK((w - expm_hermitian(h, tau) * v).norm() < 1e-10);
  }
}

TEST_CASE("evolve: zero Hamiltonian is the identity") {
  auto b = make_basis("q", 2);
  StateVector psi(b, VectorXc::Constant(2, 1.0 / std::sqrt(2.0)));
  TimeDependentOperator zero = [](double) -> OperatorAction {
    return [](const VectorXc& in, VectorXc& out) { out = VectorXc::Zero(in.size()); };
  };
  StateVector out = evolve(zero, psi, SweepSchedule(0, 1, 3.0));
  CHECK((out.amplitudes() - psi.amplitudes()).norm() < 1e-14);
}

TEST_CASE("evolve: Rabi half period flips the qubit") {
  const double hx = 1.3;
  SparseMatrixXc x(2, 2);
  x.insert(0, 1) = -hx;
  x.insert(1, 0) = -hx;
  auto b = make_basis("q", 2);
  StateVector psi = StateVector::basis_state(b, 0);
  TimeDependentOperator h = [&](double) { return action_of(x); };
  StateVector out = evolve(h, psi, SweepSchedule(0, 0, M_PI / (2 * hx)));
  CHECK(std::abs(out.amplitudes()(1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolve: piecewise constant H agrees with dense exponentials") {
  const Eigen::Index n = 40;
  MatrixXc h0 = random_hermitian(n, 21), h1 = random_hermitian(n, 22);
  const int pieces = 8;
  const double total = 2.0;
  std::vector<SparseMatrixXc> mats;
  for (int p = 0; p < pieces; ++p) mats.push_back((h0 + std::cos(p) * h1).sparseView());
  VectorXc v = VectorXc::Random(n).normalized();

  VectorXc ref = v;
  for (int p = 0; p < pieces; ++p) ref = expm_hermitian(MatrixXc(mats[p]), total / pieces) * ref;

  TimeDependentOperator h = [&](double t) {
    const int p = std::min(pieces - 1, int(t / (total / pieces)));
    return action_of(mats[p]);
  };
  EvolveOptions opts;
  opts.dt = total / pieces / 4;  // quadrature nodes never straddle a piece boundary
  VectorXc out = evolve(h, v, SweepSchedule(0, 1, total), opts);
  CHECK(std::abs(std::abs(ref.dot(out)) - 1.0) < 1e-6);
  CHECK(std::abs(out.norm() - 1.0) < 1e-8);
}

TEST_CASE("evolve: energy conservation and step convergence") {
  const Eigen::Index n = 30;
  MatrixXc h0 = random_hermitian(n, 31), h1 = random_hermitian(n, 32);
  SparseMatrixXc s0 = h0.sparseView();
  VectorXc v = VectorXc::Random(n).normalized();
  TimeDependentOperator hc = [&](double) { return action_of(s0); };
  VectorXc w = evolve(hc, v, SweepSchedule(0, 0, 5.0));
  CHECK(std::abs(w.dot(h0 * w).real() - v.dot(h0 * v).real()) < 1e-8 * std::abs(v.dot(h0 * v).real()) + 1e-10);

  SweepSchedule sched(0.0, 1.0, 4.0);
  TimeDependentOperator ht = [&](double t) -> OperatorAction {
    const double lam = sched.param(t);
    return [&, lam](const VectorXc& in, VectorXc& out) { out = h0 * in + lam * (h1 * in); };
  };
  EvolveOptions coarse, fine;
  coarse.dt = 0.02;
  fine.dt = 0.01;
  VectorXc a = evolve(ht, v, sched, coarse), c = evolve(ht, v, sched, fine);
  CHECK(std::abs(std::abs(a.dot(c)) - 1.0) < 1e-6);

  // fourth-order convergence of the commutator-free step
  EvolveOptions ref;
  ref.dt = 0.0025;
  VectorXc r = evolve(ht, v, sched, ref);
  const double e1 = (a - r).norm(), e2 = (c - r).norm();
  CHECK(std::log2(e1 / e2) > 3.5);

  EvolveOptions m2;
  m2.method = Integrator::Magnus2;
  m2.dt = 0.0025;
  CHECK((evolve(ht, v, sched, m2) - r).norm() < 1e-3);
}

TEST_CASE("overlap per site") {
  auto b = make_basis("four", 4);
  StateVector a = StateVector::basis_state(b, 0), c = StateVector::basis_state(b, 3);
  CHECK(overlap_per_site(a, a) == doctest::Approx(1.0));
  CHECK(overlap_per_site(a, c) == doctest::Approx(0.0));
  auto other = make_basis("four", 4);
  CHECK_THROWS_AS(overlap_per_site(a, StateVector::basis_state(other, 0)), Error);
  VectorXc half(4);
  half << 0.5, 0.5, 0.5, 0.5;
  CHECK(overlap_per_site(a, StateVector(b, half)) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("normalize rejects zero vectors") {
  auto b = make_basis("z", 3);
  StateVector z(b, VectorXc::Zero(3));
  CHECK_THROWS_AS(z.normalize(), Error);
  StateVector s(b, VectorXc::Constant(3, 2.0));
  CHECK(std::abs(s.normalize().norm() - 1.0) < 1e-10);
}

TEST_CASE("commutator and Frobenius inner product") {
  auto b = make_basis("q", 2);
  MatrixXc x(2, 2), z(2, 2), y(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  SparseOperator xs = from_dense(b, x, true), zs = from_dense(b, z, true);
  SparseOperator c = commutator(xs, zs);
  CHECK((MatrixXc(c.matrix()) - cplx(0, -2) * y).norm() < 1e-14);
  CHECK(c.basis() == b);
  CHECK(std::abs(frobenius_inner(xs, xs) - 2.0) < 1e-14);
  CHECK(std::abs(frobenius_inner(x, z)) < 1e-14);
}

TEST_CASE("serialization round trip") {
  auto b = make_basis("ser", 3);
  VectorXc v(3);
  v << cplx(0.6, 0.0), cplx(0.0, 0.8), 0.0;
  StateVector s(b, v);
  nlohmann::json j = to_json(s);
  CHECK(j["dim"] == 3);
  CHECK(j["amplitudes"][1][1].get<double>() == 0.8);
  StateVector back = state_from_json(nlohmann::json::parse(j.dump()), b);
  CHECK((back.amplitudes() - v).norm() == 0.0);

  SparseOperator op = from_dense(b, -spin1_x(), true);
  SparseOperator op2 = operator_from_json(nlohmann::json::parse(to_json(op).dump()), b);
  CHECK((MatrixXc(op.matrix()) - MatrixXc(op2.matrix())).norm() == 0.0);
  CHECK_THROWS_AS(state_from_json(j, make_basis("other", 3)), Error);
}

TEST_CASE("scalar and simplex optimizers") {
  ScalarMin m = golden_section([](double x) { return (x - 1.234) * (x - 1.234); }, 0.0, 4.0, 1e-8);
  CHECK(m.x == doctest::Approx(1.234).epsilon(1e-7));

  auto rosen = [](const Eigen::VectorXd& x) {
    return 100 * std::pow(x(1) - x(0) * x(0), 2) + std::pow(1 - x(0), 2);
  };
  SimplexOptions o;
  o.max_evaluations = 10000;
  o.xtol = 1e-10;
  o.ftol = 1e-14;
  SimplexResult r = nelder_mead(rosen, Eigen::Vector2d(-1.2, 1.0), o);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("adaptive quadrature") {
  Quadrature q = integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
  CHECK(q.value == doctest::Approx(2.0).epsilon(1e-12));
  Quadrature inf = integrate_to_infinity([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1e-12);
  CHECK(inf.value == doctest::Approx(M_PI / 2).epsilon(1e-10));
}

TEST_CASE("minimum-norm solve on a singular Gram matrix") {
  Eigen::Matrix2d g;
  g << 1, 1, 1, 1;
  Eigen::Vector2d rhs(2, 2);
  auto s = solve_min_norm(g, rhs);
  CHECK(s.rank == 1);
  CHECK(s.singular);
  CHECK(s.x(0) == doctest::Approx(1.0));
  CHECK(s.x(1) == doctest::Approx(1.0));
}
