#include <doctest.h>

#include <cmath>
#include <set>

#include "lakes/core/spectrum.hpp"
#include "lakes/qutrit/qutrit.hpp"
#include "lakes/ruby/metrics.hpp"
#include "lakes/ruby/pulse.hpp"

using namespace lakes;
using namespace lakes::ruby;

namespace {

std::shared_ptr<const RubyLattice> lattice22() {
  static auto lat = std::make_shared<const RubyLattice>(build_lattice(2, 2));
  return lat;
}

const SweepContext& ctx22() {
  static auto ctx = make_sweep_context(2, 2);
  return *ctx;
}

const RubyOperators& full_ops22() {
  static RubyOperators ops = build_operators(RubySpace::full(lattice22()));
  return ops;
}

bool blockade_ok(const RubyLattice& lat, Config c) {
  for (auto [i, j] : lat.blockade_pairs)
    if (((c >> i) & 1) && ((c >> j) & 1)) return false;
  return true;
}

// isometry from the full blockaded basis onto the symmetric sector
Eigen::SparseMatrix<double> symmetrizer(const RubySpace& full, const RubySpace& sym) {
  std::vector<Eigen::Triplet<double>> t;
  const auto& sb = sym.symmetric_basis();
  for (Eigen::Index k = 0; k < full.dim(); ++k) {
    const int o = sb.orbit_of[k];
    t.emplace_back(o, k, 1.0 / std::sqrt(double(sb.orbit_sizes[o])));
  }
  Eigen::SparseMatrix<double> s(sym.dim(), full.dim());
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

}  // namespace

TEST_CASE("ruby lattice geometry") {
  const RubyLattice& lat = *lattice22();
  CHECK(lat.n_sites() == 24);
  CHECK(lat.n_vertices() == 12);
  CHECK(lat.n_plaquettes() == 4);
  CHECK(build_lattice(2, 3).n_sites() == 36);
  CHECK(lat.rb > 2.0);
  CHECK(lat.rb < 2.1);

  // brute-force distance enumeration
  std::vector<int> count(lat.n_sites(), 0);
  std::set<std::pair<int, int>> pairs;
  for (int i = 0; i < lat.n_sites(); ++i) {
    for (int j = i + 1; j < lat.n_sites(); ++j) {
      if (lat.distance(lat.sites[i], lat.sites[j]) <= lat.rb) {
        pairs.insert({i, j});
        ++count[i];
        ++count[j];
      }
    }
  }
  CHECK(pairs == std::set<std::pair<int, int>>(lat.blockade_pairs.begin(), lat.blockade_pairs.end()));
  for (int c : count) CHECK(c == count[0]);
  for (const auto& v : lat.vertices) CHECK(std::set<int>(v.begin(), v.end()).size() == 4);

  CHECK_THROWS_WITH_AS(build_lattice(2, 2, 1.3), doctest::Contains("BadFactor"), Error);
  CHECK_THROWS_AS(build_lattice(2, 2, 1.0), Error);
}

TEST_CASE("blockaded basis matches brute force") {
  const RubyLattice& lat = *lattice22();
  const BlockadedBasis b = enumerate_blockaded_basis(lat);
  CHECK(b.configs.front() == 0);
  CHECK(std::is_sorted(b.configs.begin(), b.configs.end()));
  std::int64_t brute = 0;
  for (Config c = 0; c < (Config(1) << 24); ++c) {
    bool ok = true;
    for (int s = 0; s < 24 && ok; ++s) ok = !((c >> s) & 1) || (c & lat.neighbor_mask[s]) == 0;
    brute += ok;
  }
  CHECK(b.size() == brute);
  for (Config c : b.configs) REQUIRE(blockade_ok(lat, c));
  CHECK_THROWS_AS(enumerate_blockaded_basis(lat, 20), Error);
}

TEST_CASE("symmetry reduction: Burnside count and trivial group") {
  const RubyLattice& lat = *lattice22();
  const auto group = symmetry_group(lat);
  const BlockadedBasis b = enumerate_blockaded_basis(lat);
  const SymmetricBasis s = symmetry_reduce(b, group);
  std::int64_t fixed = 0;
  for (const auto& g : group)
    for (Config c : b.configs) fixed += permute_config(c, g) == c;
  CHECK(fixed % static_cast<std::int64_t>(group.size()) == 0);
  CHECK(s.size() == fixed / static_cast<std::int64_t>(group.size()));
  CHECK(s.size() == 360);
  std::int64_t total = 0;
  for (int n : s.orbit_sizes) total += n;
  CHECK(total == b.size());

  const SymmetricBasis trivial = symmetry_reduce(b, {group[0]});
  CHECK(trivial.size() == b.size());

  auto bad = group;
  bad[1].pop_back();
  CHECK_THROWS_AS(symmetry_reduce(b, bad), Error);
}

TEST_CASE("ruby operators: Gauss values, Wilson involution, blockade safety") {
  const RubyLattice& lat = *lattice22();
  for (int v = 0; v < lat.n_vertices(); ++v) CHECK(gauss_value(lat, 0, v) == 1);
  const Config one = Config(1) << lat.vertices[0][0];
  CHECK(gauss_value(lat, one, 0) == -1);

  const RubyOperators& ops = full_ops22();
  CHECK(hermiticity_defect(ops.pxp.matrix()) < 1e-12);
  CHECK(hermiticity_defect(ops.pyp.matrix()) < 1e-12);

  // flips never leave the blockaded set
  for (Config c : ops.space->blockaded().configs) {
    for (int s = 0; s < lat.n_sites(); ++s) {
      const Config f = c ^ (Config(1) << s);
      const bool allowed = ((c >> s) & 1) || (c & lat.neighbor_mask[s]) == 0;
      if (allowed) REQUIRE(blockade_ok(lat, f));
    }
  }

  // W_p^2 = 1 on the covering subspace
  const SparseMatrixXc& pg = ops.gauss_proj.matrix();
  for (const auto& w : ops.wilson) {
    const SparseMatrixXc& wd = w.matrix();
    const SparseMatrixXc squared = pg * wd * wd * pg;
    const SparseMatrixXc left = wd * pg, right = pg * wd;
    CHECK((squared - pg).norm() < 1e-12);
    CHECK((left - right).norm() < 1e-12);
  }
}

TEST_CASE("symmetric-sector operators are projections of the full ones") {
  const RubyOperators& full = full_ops22();
  const RubyOperators& sym = ctx22().ops();
  const Eigen::SparseMatrix<double> s = symmetrizer(*full.space, *sym.space);
  const SparseMatrixXc sc = s.cast<cplx>();
  auto check = [&](const SparseOperator& f, const SparseOperator& r) {
    const MatrixXc proj = sc * f.matrix() * SparseMatrixXc(sc.adjoint());
    CHECK((proj - MatrixXc(r.matrix())).norm() < 1e-12);
    // images of symmetric states stay in the sector
    const VectorXc v = SparseMatrixXc(sc.adjoint()) * VectorXc::Random(sym.space->dim());
    const VectorXc w = f.matrix() * v;
    CHECK((SparseMatrixXc(sc.adjoint()) * (sc * w) - w).norm() < 1e-12 * std::max(1.0, w.norm()));
  };
  check(full.pxp, sym.pxp);
  check(full.pyp, sym.pyp);
  check(full.n_tot, sym.n_tot);
  check(full.gauss_sum, sym.gauss_sum);
  check(full.wilson_sum, sym.wilson_sum);
  CHECK(hermiticity_defect(sym.wilson_sum.matrix()) < 1e-12);
}

TEST_CASE("RVB state and projection identity on (2,2)") {
  const SweepContext& ctx = ctx22();
  const RubyOperators& full = full_ops22();
  int coverings = 0;
  for (Config c : full.space->blockaded().configs) coverings += is_covering(full.space->lattice(), c);
  const StateVector rvb = rvb_state(*full.space);
  int support = 0;
  for (Eigen::Index i = 0; i < rvb.dim(); ++i) support += std::abs(rvb.amplitudes()(i)) > 0;
  CHECK(support == coverings);
  for (const auto& w : full.wilson) CHECK(w.expectation(rvb).real() == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& g : full.gauss) CHECK(g.expectation(rvb).real() == doctest::Approx(-1.0).epsilon(1e-12));

  const StateVector pg = gauss_projector_apply(ctx.ops(), ctx.initial_state());
  CHECK(1.0 - std::abs(inner(ctx.rvb(), pg)) <= 1e-9);

  // the empty state at delta = -5 dominates
  CHECK(std::norm(ctx.initial_state().amplitudes()(0)) > 0.5);
  CHECK_THROWS_AS(gauss_projector_apply(ctx.ops(), ctx.ops().space->state_from([](Config c) {
                    return c == 0 ? cplx(1.0) : cplx(0.0);
                  })),
                  Error);
}

TEST_CASE("ruby AGP: l = 1 grid-search oracle") {
  const RubyOperators& ops = ctx22().ops();
  const MatrixXc dh = -MatrixXc(ops.n_tot.matrix());
  for (double delta : {-4.0, 0.0, 2.5}) {
    const MatrixXc h = ops.hamiltonian(1.0, delta).matrix();
    const auto terms = agp_terms(ops, Family::Full, 1, 1.0, delta);
    const AlphaFit fit = optimize_alphas(terms, h, dh);
    const MatrixXc c = cplx(0, 1) * (terms[0] * h - h * terms[0]);
    auto action = [&](double a) { return (dh + a * c).squaredNorm(); };
    double best = 0.0;
    double step = 0.01;
    for (double a = -2.0; a <= 2.0; a += step)
      if (action(a) < action(best)) best = a;
    // three-point parabola through the bracketing grid values
    const double fm = action(best - step), f0 = action(best), fp = action(best + step);
    const double grid = best - 0.5 * step * (fp - fm) / (fp - 2 * f0 + fm);
    CHECK(std::abs(fit.alpha(0) - grid) < 1e-8);
    CHECK(fit.action <= fit.action_zero);
  }
}

TEST_CASE("ruby AGP: families, hermiticity, tables and nested application") {
  const RubyOperators& ops = ctx22().ops();
  const MatrixXc dh = -MatrixXc(ops.n_tot.matrix());

  const auto full = agp_terms(ops, Family::Full, 2, 1.0, 0.0);
  const auto restricted = agp_terms(ops, Family::Restricted, 2, 1.0, 0.0);
  CHECK((full[0] + 0.5 * restricted[0]).norm() < 1e-12);
  CHECK((full[1] + 0.125 * restricted[1]).norm() < 1e-10);
  const MatrixXc h0 = ops.hamiltonian(1.0, 0.0).matrix();
  CHECK(optimize_alphas(full, h0, dh).action == doctest::Approx(optimize_alphas(restricted, h0, dh).action));
  CHECK_THROWS_AS(agp_terms(ops, Family::Full, 7, 1.0, 0.0), Error);

  for (Family fam : {Family::Full, Family::Restricted}) {
    const auto tables = build_alpha_tables(ops, fam, 3, 1.0, -5.0, 5.0, 11);
    const double delta = -5.0 + 10.0 * 7 / 10.0;
    const MatrixXc h = ops.hamiltonian(1.0, delta).matrix();
    for (int ell = 1; ell <= 3; ++ell) {
      const auto terms = agp_terms(ops, fam, ell, 1.0, delta);
      const AlphaFit fit = optimize_alphas(terms, h, dh);
      CHECK((tables[ell - 1].at(delta) - fit.alpha).norm() < 1e-9 * fit.alpha.norm());
      CHECK(fit.action <= fit.action_zero);

      MatrixXc a = MatrixXc::Zero(h.rows(), h.cols());
      for (int k = 0; k < ell; ++k) a += fit.alpha(k) * terms[k];
      CHECK((a - a.adjoint()).norm() <= 1e-12 * a.norm());
      const VectorXc v = VectorXc::Random(h.rows());
      VectorXc out;
      agp_action(ops, fam, fit.alpha, 1.0, delta)(v, out);
      CHECK((out - a * v).norm() < 1e-12 * (a * v).norm());
    }
  }
  // interpolation between grid points
  const AlphaTable t = build_alpha_table(ops, Family::Restricted, 1, 1.0, -5.0, 5.0, 3);
  CHECK(t.at(-2.5)(0) == doctest::Approx(0.5 * (t.values(0, 0) + t.values(1, 0))));
}

TEST_CASE("ruby undriven sweep: hemidiabatic maximum") {
  const SweepContext& ctx = ctx22();
  auto rvb = [&](double T) {
    SweepRun run;
    run.total_time = T;
    return cd_sweep(ctx, run).obs.rvb_per_site;
  };
  const double quench = rvb(1.0), hemi = rvb(100.0), slow = rvb(1000.0);
  CHECK(hemi > quench);
  CHECK(hemi > slow);
}

TEST_CASE("ruby driven sweeps: order, sector freezing, step convergence") {
  const SweepContext& ctx = ctx22();
  SweepRun run;
  run.total_time = 1.0;
  run.lambda_f = 1.3;
  const double undriven_wt = cd_sweep(ctx, run).obs.stab.wilson_projected;
  double previous = 0.0;
  for (int ell : {1, 3, 5}) {
    run.ell = ell;
    const SweepObservables o = cd_sweep(ctx, run).obs;
    CHECK(o.rvb_per_site > previous);
    CHECK(std::abs(o.stab.wilson_projected - undriven_wt) <= 1e-2);
    previous = o.rvb_per_site;
  }
  run.ell = 2;
  run.dt = 0.01;
  const double coarse = cd_sweep(ctx, run).obs.rvb_overlap;
  run.dt = 0.005;
  CHECK(std::abs(cd_sweep(ctx, run).obs.rvb_overlap - coarse) <= 1e-6);
  run.lambda_f = 0.0;
  run.dt = 0.0;
  SweepRun bare;
  bare.total_time = 1.0;
  CHECK((cd_sweep(ctx, run).final_state.amplitudes() - cd_sweep(ctx, bare).final_state.amplitudes()).norm() == 0.0);
}

TEST_CASE("lambda_f tuning: RVB and ground-state maxima coincide at l = 1") {
  const SweepContext& ctx = ctx22();
  const LambdaTune rvb = lambda_f_tune(ctx, 1, Family::Full, 1.0);
  CHECK(rvb.lambda_f > 1.0);
  CHECK(rvb.lambda_f < 4.0);
  SweepRun run;
  run.total_time = 1.0;
  run.ell = 1;
  const ScalarMin gs = golden_section(
      [&](double lf) {
        run.lambda_f = lf;
        return -cd_sweep(ctx, run).obs.gs_overlap;
      },
      1.0, 4.0, 1e-3);
  CHECK(std::abs(gs.x - rvb.lambda_f) < 0.05);
}

TEST_CASE("qutrit exact AGP needs no rescaling") {
  qutrit::SweepSpec spec;
  spec.total_time = 1.0;
  spec.drive = qutrit::Drive::Exact;
  auto overlap = [&](double lf) {
    spec.lambda_f = lf;
    return qutrit::sweep(spec).overlap_ground;
  };
  CHECK(overlap(1.0) > overlap(0.95));
  CHECK(overlap(1.0) > overlap(1.05));
}

TEST_CASE("pulse cycle identities and BCH scaling") {
  const RubyOperators& ops = ctx22().ops();
  const MatrixXc y = ops.pyp.matrix();
  CHECK((cycle_unitary(ops, {0.0, 0.2}) - expm_hermitian(y, 0.4)).norm() < 1e-12);
  CHECK((cycle_unitary(ops, {0.3, 0.0}) - MatrixXc::Identity(y.rows(), y.cols())).norm() < 1e-12);

  VectorXc v = VectorXc::Random(y.rows()).normalized();
  const VectorXc v0 = v;
  apply_cycle(ops, {0.4, -0.2}, v);
  CHECK(std::abs(v.norm() - 1.0) < 1e-10);
  CHECK((v - cycle_unitary(ops, {0.4, -0.2}) * v0).norm() < 1e-10);

  const double x = 0.1;
  auto residual = [&](double yy) {
    const PulseCycle c{x, yy};
    return (unitary_log(cycle_unitary(ops, c)) - cycle_effective_hamiltonian(ops, c)).norm();
  };
  const double exponent = std::log2(residual(0.02) / residual(0.01));
  CHECK(std::abs(exponent - 2.0) < 0.2);
  // the truncated series converges to the resummed form
  CHECK((cycle_effective_hamiltonian(ops, {x, 0.01}, 10) - cycle_effective_hamiltonian(ops, {x, 0.01})).norm() <
        1e-12);
}

TEST_CASE("pulse sequences: empty sequence, determinism, time convention") {
  const SweepContext& ctx = ctx22();
  const PulseResult none = run_pulse_sequence(ctx, PulseSequence{});
  CHECK(none.obs.rvb_overlap == doctest::Approx(observe(ctx, ctx.initial_state()).rvb_overlap));
  CHECK(none.trajectory.size() == 1);

  PulseSequence s;
  s.cycles = {{0.5, -0.25}, {-0.1, 0.2}};
  CHECK(s.drive_time() == doctest::Approx(8 * 0.6 + 4 * 0.45));
  CHECK(PulseSequence::unpack(s.packed()).cycles[1].x == -0.1);

  PulseOptions opts;
  opts.restarts = 2;
  opts.simplex.max_evaluations = 200;
  const PulseResult a = optimize_pulse_sequence(ctx, 1, opts);
  const PulseResult b = optimize_pulse_sequence(ctx, 1, opts);
  CHECK(a.sequence.packed() == b.sequence.packed());
  CHECK(a.obs.dimer_density > observe(ctx, ctx.initial_state()).dimer_density);
  CHECK(a.trajectory.size() == 2);
  CHECK_THROWS_AS(optimize_pulse_sequence(ctx, 0, opts), Error);
}

TEST_CASE("lake metrics identities") {
  const SweepContext& ctx = ctx22();
  const StateVector empty = ctx.ops().space->state_from([](Config c) { return c == 0 ? cplx(1.0) : cplx(0.0); });
  CHECK(lake_metrics(ctx.ops(), empty.amplitudes()).l_e == 2.0);

  const LakeMetrics rvb = lake_metrics(ctx.ops(), ctx.rvb().amplitudes());
  CHECK(rvb.epsilon < 1e-14);
  CHECK(rvb.clipped);
  CHECK(rvb.l_lake == doctest::Approx(2.0 * std::sqrt(24.0)));

  const LakeMetrics sub = lake_metrics(0.0, 1.0, 12, 4, 24);
  CHECK(sub.n_e == 0.5);
  CHECK(sub.l_e == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(sub.epsilon == doctest::Approx(0.25));
  CHECK(sub.d_min == doctest::Approx(2.0));
}

TEST_CASE("best matching sweep") {
  const SweepContext& ctx = ctx22();
  const SweepLibrary lib = build_sweep_library(ctx, {1.0, 3.0, 10.0});
  const BestMatch m = best_matching_sweep(lib.states[1], lib);
  CHECK(m.total_time == 3.0);
  CHECK(m.overlap_per_site == doctest::Approx(1.0));

  SweepLibrary dup;
  dup.times = {5.0, 2.0};
  dup.states = {lib.states[0], lib.states[0]};
  CHECK(best_matching_sweep(lib.states[0], dup).total_time == 2.0);
  CHECK_THROWS_AS(best_matching_sweep(lib.states[0], SweepLibrary{}), Error);

  const auto g = log_grid(1.0, 100.0, 3);
  CHECK(g[1] == doctest::Approx(10.0));
}
