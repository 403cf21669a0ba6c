#include <doctest.h>

#include <cmath>
#include <random>

#include "lakes/core/spectrum.hpp"
#include "lakes/dtc/dynamics.hpp"

using namespace lakes;
using namespace lakes::dtc;

namespace {

const DtcContext& ctx22() {
  static auto ctx = make_dtc_context(2, 2);
  return *ctx;
}

const DtcModel& model22() { return ctx22().model(); }

SparseMatrixXc prod(const SparseMatrixXc& a, const SparseMatrixXc& b) { return a * b; }

double comm_norm(const SparseMatrixXc& a, const SparseMatrixXc& b) {
  SparseMatrixXc ab = a * b, ba = b * a;
  SparseMatrixXc c = ab - ba;
  return c.norm();
}

MatrixXc single(int n, int q, char which) {
  MatrixXc p(2, 2);
  if (which == 'X') p << 0, 1, 1, 0;
  if (which == 'Y') p << 0, cplx(0, -1), cplx(0, 1), 0;
  if (which == 'Z') p << 1, 0, 0, -1;
  // qubit q is bit q of the basis index, so it is the rightmost Kronecker factor for q = 0
  MatrixXc m = MatrixXc::Identity(1, 1);
  for (int k = n - 1; k >= 0; --k) {
    const MatrixXc f = k == q ? p : MatrixXc::Identity(2, 2);
    MatrixXc next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = m(i, j) * f;
    m = next;
  }
  return m;
}

PauliSum random_sum(std::mt19937_64& rng, int n, int terms) {
  PauliSum s;
  std::uniform_int_distribution<int> mask(0, (1 << n) - 1);
  std::normal_distribution<double> g;
  for (int t = 0; t < terms; ++t) s.add({Mask(mask(rng)), Mask(mask(rng))}, cplx(g(rng), g(rng)));
  return s;
}

}  // namespace

TEST_CASE("pauli strings match Kronecker products") {
  const int n = 3;
  PauliSum s;
  s.add({bit(0), 0}, 1.0);
  s.add({bit(1) | bit(2), bit(1)}, cplx(0.5, 0.25));
  const MatrixXc want = single(n, 0, 'X') + cplx(0.5, 0.25) * single(n, 1, 'Y') * single(n, 2, 'X');
  CHECK((MatrixXc(s.to_sparse(n)) - want).norm() < 1e-14);
}

TEST_CASE("pauli products and commutators agree with matrices") {
  std::mt19937_64 rng(3);
  const int n = 4;
  for (int rep = 0; rep < 5; ++rep) {
    const PauliSum a = random_sum(rng, n, 6), b = random_sum(rng, n, 7);
    const MatrixXc ma(a.to_sparse(n)), mb(b.to_sparse(n));
    CHECK((MatrixXc(multiply(a, b).to_sparse(n)) - ma * mb).norm() < 1e-12);
    CHECK((MatrixXc(commutator(a, b).to_sparse(n)) - (ma * mb - mb * ma)).norm() < 1e-12);
    CHECK(std::abs(trace_inner(a, b) - (ma.adjoint() * mb).trace() / double(1 << n)) < 1e-12);
  }
}

TEST_CASE("torus links belong to two stars and two plaquettes") {
  for (auto [lx, ly] : {std::pair{2, 2}, {2, 3}, {4, 4}}) {
    DtcLattice lat(lx, ly);
    std::vector<int> in_star(lat.n_links()), in_plaq(lat.n_links());
    for (int v = 0; v < lat.n_vertices(); ++v)
      for (int l : lat.star(v)) ++in_star[l];
    for (int p = 0; p < lat.n_plaquettes(); ++p)
      for (int l : lat.plaquette(p)) ++in_plaq[l];
    for (int l = 0; l < lat.n_links(); ++l) {
      CHECK(in_star[l] == 2);
      CHECK(in_plaq[l] == 2);
    }
    PauliString gprod, wprod;
    for (int v = 0; v < lat.n_vertices(); ++v) gprod.z ^= lat.gauss(v).z;
    for (int p = 0; p < lat.n_plaquettes(); ++p) wprod.x ^= lat.wilson(p).x;
    CHECK(gprod.z == 0);
    CHECK(wprod.x == 0);
  }
  CHECK_THROWS_AS(DtcLattice(1, 3), Error);
  CHECK_THROWS_AS(DtcModel(3, 3), Error);
}

TEST_CASE("constraint algebra on the 2x2 torus") {
  const DtcModel& m = model22();
  const SparseMatrixXc id = SparseOperator(m.basis(), [&] {
    SparseMatrixXc e(256, 256);
    e.setIdentity();
    return e;
  }(), true).matrix();
  for (int v = 0; v < 4; ++v) {
    CHECK(SparseMatrixXc(prod(m.gauss(v).matrix(), m.gauss(v).matrix()) - id).norm() < 1e-12);
    for (int p = 0; p < 4; ++p) CHECK(comm_norm(m.gauss(v).matrix(), m.wilson(p).matrix()) < 1e-12);
  }
  const SparseMatrixXc he = m.hamiltonian({1.3, 1.0, 0.0}).matrix();
  const SparseMatrixXc h = m.hamiltonian({1.3, 1.0, 0.1}).matrix();
  for (int p = 0; p < 4; ++p) {
    CHECK(SparseMatrixXc(prod(m.wilson(p).matrix(), m.wilson(p).matrix()) - id).norm() < 1e-12);
    CHECK(comm_norm(he, m.wilson(p).matrix()) < 1e-12);
    CHECK(comm_norm(m.star_y().matrix(), m.wilson(p).matrix()) < 1e-12);
    CHECK(comm_norm(approximate_agp(m, DtcDrive::SecondOrder, 2.0, 1.0), m.wilson(p).matrix()) < 1e-12);
  }
  CHECK(comm_norm(h, m.wilson(0).matrix()) > 0.1);
  CHECK(hermiticity_defect(approximate_agp(m, DtcDrive::SecondOrder, 2.0, 1.0)) < 1e-12);
}

TEST_CASE("ground-state fixed points") {
  const DtcModel& m = model22();
  const StateVector plus = ground_state(m.hamiltonian({0.0, 1.0, 0.0})).state;
  VectorXc want = VectorXc::Constant(256, 1.0 / 16.0);
  CHECK(std::abs(std::abs(want.dot(plus.amplitudes())) - 1.0) < 1e-10);
  const StateVector tc = ground_state(m.hamiltonian({100.0, 1.0, 0.0})).state;
  for (int v = 0; v < 4; ++v) CHECK(m.gauss(v).expectation(tc).real() > 1.0 - 1e-3);
  CHECK(warnings({1.0, 1.0, 0.1}).empty());
  CHECK(warnings({1.0, 1.0, 0.5}).size() == 1);
}

TEST_CASE("sweep-context spectrum residuals") {
  const SparseOperator h = model22().hamiltonian({4.0, 1.0, 0.1});
  const Eigensystem es = eigendecompose(h);
  const MatrixXc dense(h.matrix());
  for (Eigen::Index n = 0; n < es.values.size(); ++n)
    CHECK((dense * es.vectors.col(n) - es.values(n) * es.vectors.col(n)).norm() < 1e-10);
}

TEST_CASE("first-order AGP is the H_e commutator") {
  const DtcModel& m = model22();
  for (double K : {0.0, 1.5}) {
    const SparseMatrixXc he = m.hamiltonian({K, 1.0, 0.0}).matrix();
    const SparseMatrixXc dk = m.dk().matrix();
    SparseMatrixXc c = prod(he, dk);
    c -= prod(dk, he);
    c *= cplx(0, 1);
    const SparseMatrixXc want = 2.0 * m.star_y().matrix();
    CHECK(SparseMatrixXc(c - want).norm() < 1e-12);
    CHECK(SparseMatrixXc(m.nested_term(1, K, 1.0) - want).norm() < 1e-12);
  }
}

TEST_CASE("nested terms match Pauli commutators on the small torus") {
  const DtcModel& m = model22();
  const double K = 1.7, hx = 0.8;
  const std::vector<PauliSum> t = nested_terms(m.lattice(), K, hx, 2);
  CHECK(SparseMatrixXc(m.nested_term(2, K, hx) - t[1].to_sparse(8)).norm() < 1e-9);
  // dense oracle: i ad^3 on the 256-dim space
  const MatrixXc he(m.hamiltonian({K, hx, 0.0}).matrix()), dk(m.dk().matrix());
  MatrixXc c = dk;
  for (int i = 0; i < 3; ++i) c = he * c - c * he;
  CHECK((cplx(0, 1) * c - MatrixXc(m.nested_term(2, K, hx))).norm() < 1e-9);
}

TEST_CASE("first-order alpha closed forms") {
  const FirstOrderAlpha a = alpha_first_order({0.0, 1.0, 0.0});
  CHECK(a.with_hz == doctest::Approx(-1.0 / 40.0).epsilon(1e-14));
  CHECK(a.without_hz == doctest::Approx(-1.0 / 40.0).epsilon(1e-14));
  const SecondOrderAlpha b = alpha_second_order({0.0, 1.0, 0.0});
  CHECK(b.alpha1 == doctest::Approx(-0.078125).epsilon(1e-14));
  CHECK(b.alpha2 == doctest::Approx(3.0 / 3072.0).epsilon(1e-14));
  CHECK(pulse_x({0.0, 1.0, 0.0}) == doctest::Approx(0.158114).epsilon(1e-6));
}

TEST_CASE("numeric trace fit reproduces the first-order alpha") {
  DtcLattice lat(4, 4);
  for (double K : {0.0, 1.0, 2.0, 4.0}) {
    const DtcParams p{K, 1.0, 0.1};
    const FirstOrderAlpha a = alpha_first_order(p);
    CHECK(std::abs(trace_fit(lat, p, 1, true).alphas(0) / a.with_hz - 1.0) < 1e-8);
    CHECK(std::abs(trace_fit(lat, p, 1, false).alphas(0) / a.without_hz - 1.0) < 1e-8);
  }
  // aliasing does not affect first order even on the 2x2 torus
  CHECK(std::abs(trace_fit(DtcLattice(2, 2), {2.0, 1.0, 0.1}, 1, true).alphas(0) /
                     alpha_first_order({2.0, 1.0, 0.1}).with_hz -
                 1.0) < 1e-8);
}

// Hand-expanded action: G_K as a sum of Pauli families with (count per vertex,
// constant, alpha1 slope, alpha2 slope). The family with one X and two Y's on
// the other six legs splits by whether both Y's sit on the same star (12 per
// vertex) or not (18 per vertex).
Eigen::Vector2d second_order_oracle(double K, double h) {
  const double b1 = 80 * h * h * h + 32 * h * K * K, b2 = -48 * h * h * h, b3 = -32 * h * h * K;
  struct Fam {
    double w, c, u1, u2;
  };
  const std::vector<Fam> fams = {
      {1, -1, -16 * h * h, -8 * h * b1},
      {2, 0, 8 * K * h, 4 * K * b1},
      {2, 0, 8 * K * h, 4 * K * b1 - 12 * h * b3},
      {6, 0, 8 * h * h, 4 * h * b1 - 4 * h * b2 - 4 * K * b3},
      {4, 0, 0, -2 * K * b2},
      {1, 0, 0, 8 * h * b2},
      {6, 0, 0, 4 * K * b3},
      {12, 0, 0, 2 * K * b2 + 4 * h * b3},
      {18, 0, 0, 4 * h * b3},
  };
  Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
  Eigen::Vector2d r = Eigen::Vector2d::Zero();
  for (const Fam& f : fams) {
    const Eigen::Vector2d u(f.u1, f.u2);
    g += f.w * u * u.transpose();
    r -= f.w * f.c * u;
  }
  return g.ldlt().solve(r);
}

TEST_CASE("second-order trace fit against the hand-expanded action") {
  for (double K : {0.0, 1.0, 2.0, 4.0}) {
    const Eigen::Vector2d want = second_order_oracle(K, 1.0);
    for (int L : {3, 4}) {
      const TraceFit fit = trace_fit(DtcLattice(L, L), {K, 1.0, 0.0}, 2, false);
      CHECK(std::abs(fit.alphas(0) / want(0) - 1.0) < 1e-10);
      CHECK(std::abs(fit.alphas(1) / want(1) - 1.0) < 1e-10);
    }
  }
  // the closed forms coincide with the minimizer only at K = 0
  const Eigen::Vector2d k0 = second_order_oracle(0.0, 1.0);
  const SecondOrderAlpha a0 = alpha_second_order({0.0, 1.0, 0.0});
  CHECK(std::abs(k0(0) / a0.alpha1 - 1.0) < 1e-12);
  CHECK(std::abs(k0(1) / a0.alpha2 - 1.0) < 1e-12);
  const Eigen::Vector2d k1 = second_order_oracle(1.0, 1.0);
  CHECK(std::abs(k1(0) / alpha_second_order({1.0, 1.0, 0.0}).alpha1 - 1.0) > 0.1);
}

TEST_CASE("lambda_f factors") {
  CHECK(lambda_f(1) == doctest::Approx(1.315).epsilon(0.001 / 1.315));
  CHECK(lambda_f(1) == doctest::Approx(lambda_f_first_order_closed_form()).epsilon(1e-9));
  CHECK(lambda_f(2) == doctest::Approx(1.304).epsilon(0.001 / 1.304));
  CHECK(integrated_alpha(1, 4.0) == doctest::Approx(std::atan(4 * std::sqrt(0.4)) / (8 * std::sqrt(10.0))).epsilon(1e-9));
  CHECK(std::abs(integrated_alpha(1, 4.0) - 0.047) < 0.001);
  CHECK_THROWS_AS(lambda_f(3), Error);
}

TEST_CASE("FM estimators at fixed points") {
  const DtcModel& m = model22();
  const BasisHandle& b = m.basis();
  const StateVector zero = StateVector::basis_state(b, 0);
  CHECK(fm_order_parameter(m, zero).z_fm == doctest::Approx(1.0));
  const StateVector plus(b, VectorXc::Constant(256, 1.0 / 16.0));
  CHECK(fm_order_parameter(m, plus).x_fm == doctest::Approx(1.0));
  // toric-code state with G_v = +1 everywhere
  const StateVector tc = m.gauss_projected(plus);
  const FmOrder f = fm_order_parameter(m, tc);
  CHECK(std::abs(f.x_fm) < 1e-12);
  CHECK_FALSE(f.x_flagged);
  for (int v = 0; v < 4; ++v) CHECK(m.gauss(v).expectation(tc).real() == doctest::Approx(1.0));
  // Z loop vanishes on |+>
  CHECK(fm_order_parameter(m, plus).z_flagged);
  CHECK_THROWS_AS(fm_order_parameter(m, plus, 2), Error);
}

TEST_CASE("undriven DTC sweep has an interior hemidiabatic peak") {
  const std::vector<double> ts = {0.01, 0.1, 0.3, 1.0, 2.0, 5.0, 20.0};
  std::vector<double> o;
  for (double T : ts) o.push_back(dtc_cd_sweep(ctx22(), {T}).obs.overlap_per_site);
  const auto best = std::max_element(o.begin(), o.end()) - o.begin();
  CHECK(ts[best] >= 0.3);
  CHECK(ts[best] <= 3.0);
  CHECK(o[best] > o.front() + 0.05);
  CHECK(o[best] > o.back() + 0.02);
}

TEST_CASE("driven DTC sweeps") {
  const DtcContext& c = ctx22();
  DtcRun und{0.1};
  const DtcOutcome u = dtc_cd_sweep(c, und);
  DtcRun r1{0.1, DtcDrive::FirstOrder, default_lambda_f(DtcDrive::FirstOrder)};
  const DtcOutcome d1 = dtc_cd_sweep(c, r1);
  DtcRun r2{0.1, DtcDrive::SecondOrder, default_lambda_f(DtcDrive::SecondOrder)};
  const DtcOutcome d2 = dtc_cd_sweep(c, r2);
  CHECK(d1.obs.overlap_per_site > u.obs.overlap_per_site + 0.05);
  CHECK(d1.obs.gauss > u.obs.gauss + 0.3);
  CHECK(d2.obs.overlap_per_site > d1.obs.overlap_per_site);
  CHECK(std::abs(d1.obs.wilson - u.obs.wilson) < 1e-3);
  CHECK(std::abs(d2.obs.wilson - u.obs.wilson) < 1e-3);

  DtcRun zero{0.1, DtcDrive::FirstOrder, 0.0};
  CHECK((dtc_cd_sweep(c, zero).final_state.amplitudes() - u.final_state.amplitudes()).norm() == 0.0);

  DtcRun fine = r1;
  fine.dt = 0.0005;
  CHECK(std::abs(dtc_cd_sweep(c, fine).obs.overlap - d1.obs.overlap) < 1e-6);
}

TEST_CASE("exact-AGP DTC sweep follows the ground state") {
  DtcRun r{1.0, DtcDrive::Exact, 1.0};
  const DtcOutcome e = dtc_cd_sweep(ctx22(), r);
  CHECK(e.obs.gs_overlap >= 1.0 - 1e-6);
}

TEST_CASE("AGP generators conserve every W_p") {
  const DtcModel& m = model22();
  // start from a state with nontrivial plaquette expectations
  DtcRun und{2.0};
  const StateVector psi = dtc_cd_sweep(ctx22(), und).final_state;
  for (DtcDrive d : {DtcDrive::FirstOrder, DtcDrive::SecondOrder}) {
    const SparseMatrixXc a = approximate_agp(m, d, 1.0, 1.0);
    VectorXc v = psi.amplitudes();
    expm_multiply(action_of(a), 5.0, v);
    const StateVector out(m.basis(), v);
    for (int p = 0; p < 4; ++p)
      CHECK(std::abs(m.wilson(p).expectation(out).real() - m.wilson(p).expectation(psi).real()) < 1e-10);
  }
}

TEST_CASE("DTC pulse sequence") {
  const DtcContext& c = ctx22();
  // y = 0: the H_e exponents cancel
  VectorXc v = c.initial_state().amplitudes();
  apply_dtc_cycle(c.model(), 1.0, 1.0, 0.3, 0.0, v);
  CHECK((v - c.initial_state().amplitudes()).norm() < 1e-12);

  for (double y : {kReferencePulseY, 0.2, -0.7}) {
    const DtcPulseResult r = dtc_pulse_sequence(c, 3, y);
    REQUIRE(r.trajectory.size() == 4);
    for (const auto& o : r.trajectory) CHECK(std::abs(o.wilson - r.trajectory[0].wilson) < 1e-10);
  }
  const DtcPulseResult r = dtc_pulse_sequence(c, 3, kReferencePulseY);
  CHECK(r.x_values[0] == doctest::Approx(0.158114).epsilon(1e-5));
  CHECK(r.k_values[1] == doctest::Approx(4.0 / 3.0));
  for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
    CHECK(r.trajectory[i].gauss > r.trajectory[i - 1].gauss);
    CHECK(r.trajectory[i].overlap > r.trajectory[i - 1].overlap);
  }
}

TEST_CASE("DTC y scan") {
  std::vector<double> ys;
  for (int i = -12; i <= 4; ++i) ys.push_back(0.01 * i);
  const YScan s = dtc_y_scan(ctx22(), 3, ys, 2);
  CHECK(s.best_y < 0.0);
  CHECK(s.best_y > ys.front());
  CHECK(s.best_overlap > dtc_pulse_sequence(ctx22(), 3, 0.0).trajectory.back().overlap_per_site);
  CHECK_THROWS_AS(dtc_y_scan(ctx22(), 3, {}), Error);
}
