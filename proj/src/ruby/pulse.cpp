#include "lakes/ruby/pulse.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "lakes/core/parallel.hpp"

namespace lakes::ruby {

double PulseSequence::drive_time() const {
  double t = 0.0;
  for (const auto& c : cycles) t += 8.0 * std::abs(c.x) + 4.0 * std::abs(c.y);
  return t;
}

Eigen::VectorXd PulseSequence::packed() const {
  Eigen::VectorXd v(2 * cycles.size());
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    v(2 * i) = cycles[i].x;
    v(2 * i + 1) = cycles[i].y;
  }
  return v;
}

PulseSequence PulseSequence::unpack(const Eigen::VectorXd& v) {
  PulseSequence s;
  for (Eigen::Index i = 0; i + 1 < v.size(); i += 2) s.cycles.push_back({v(i), v(i + 1)});
  return s;
}

void apply_cycle(const RubyOperators& ops, const PulseCycle& c, VectorXc& psi, const KrylovOptions& opts) {
  const OperatorAction x = action_of(ops.pxp.matrix());
  const OperatorAction y = action_of(ops.pyp.matrix());
  if (c.x != 0.0) expm_multiply(x, c.x, psi, opts);
  if (c.y != 0.0) expm_multiply(y, c.y, psi, opts);
  if (c.x != 0.0) expm_multiply(x, -2.0 * c.x, psi, opts);
  if (c.y != 0.0) expm_multiply(y, c.y, psi, opts);
  if (c.x != 0.0) expm_multiply(x, c.x, psi, opts);
}

StateVector apply_sequence(const RubyOperators& ops, const PulseSequence& seq, const StateVector& psi,
                           const KrylovOptions& opts) {
  require_same_basis(ops.space->basis(), psi.basis());
  VectorXc v = psi.amplitudes();
  for (const auto& c : seq.cycles) apply_cycle(ops, c, v, opts);
  return StateVector(psi.basis(), std::move(v));
}

MatrixXc cycle_unitary(const RubyOperators& ops, const PulseCycle& c) {
  const MatrixXc x = ops.pxp.matrix();
  const MatrixXc y = ops.pyp.matrix();
  const MatrixXc ux = expm_hermitian(x, c.x);
  const MatrixXc uy = expm_hermitian(y, c.y);
  return ux * uy * ux.adjoint() * ux.adjoint() * uy * ux;
}

MatrixXc cycle_effective_hamiltonian(const RubyOperators& ops, const PulseCycle& c, int terms) {
  const MatrixXc x = ops.pxp.matrix();
  const MatrixXc y = ops.pyp.matrix();
  if (terms <= 0) {
    const MatrixXc ux = expm_hermitian(x, c.x);
    return c.y * (ux * y * ux.adjoint() + ux.adjoint() * y * ux);
  }
  MatrixXc sum = MatrixXc::Zero(y.rows(), y.cols());
  MatrixXc nested = y;
  double coeff = 1.0;  // (-1)^(k-1) x^(2k-2) / (2k-2)!
  for (int k = 1; k <= terms; ++k) {
    if (k > 1) {
      for (int rep = 0; rep < 2; ++rep) nested = x * nested - nested * x;
      coeff *= -c.x * c.x / ((2.0 * k - 2.0) * (2.0 * k - 3.0));
    }
    sum += coeff * nested;
  }
  return 2.0 * c.y * sum;
}

MatrixXc unitary_log(const MatrixXc& u) {
  Eigen::ComplexSchur<MatrixXc> schur(u);
  const MatrixXc& q = schur.matrixU();
  const MatrixXc& t = schur.matrixT();
  Eigen::VectorXd phase(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) phase(i) = -std::arg(t(i, i));
  return q * phase.asDiagonal() * q.adjoint();
}

PulseSequence heuristic_sequence(const SweepContext& ctx, int n_c, double y0) {
  auto table = ctx.table(Family::Restricted, 2);
  PulseSequence s;
  for (int i = 0; i < n_c; ++i) {
    const double delta = ctx.delta_start() + (ctx.delta_end() - ctx.delta_start()) * i / n_c;
    const Eigen::VectorXd a = table->at(delta);
    const double ratio = a(0) != 0.0 ? -2.0 * a(1) / a(0) : 0.0;
    s.cycles.push_back({ratio > 0.0 ? std::sqrt(ratio) : 0.0, y0});
  }
  return s;
}

PulseResult run_pulse_sequence(const SweepContext& ctx, const PulseSequence& seq) {
  PulseResult r;
  r.sequence = seq;
  VectorXc v = ctx.initial_state().amplitudes();
  const BasisHandle basis = ctx.initial_state().basis();
  r.trajectory.push_back(observe(ctx, ctx.initial_state()));
  for (const auto& c : seq.cycles) {
    apply_cycle(ctx.ops(), c, v);
    r.trajectory.push_back(observe(ctx, StateVector(basis, v)));
  }
  r.final_state = StateVector(basis, std::move(v));
  r.obs = r.trajectory.back();
  return r;
}

PulseResult optimize_pulse_sequence(const SweepContext& ctx, int n_c, const PulseOptions& opts) {
  if (n_c < 1 || n_c > 6) throw Error(ErrorCode::InvalidArgument, "n_c must lie in [1, 6]");
  if (opts.restarts < 1) throw Error(ErrorCode::InvalidArgument, "need at least one restart");
  const RubyOperators& ops = ctx.ops();
  const double n_sites = ops.space->lattice().n_sites();
  auto objective = [&](const Eigen::VectorXd& p) {
    VectorXc v = ctx.initial_state().amplitudes();
    for (const auto& c : PulseSequence::unpack(p).cycles) apply_cycle(ops, c, v);
    return -ops.n_tot.matrix().diagonal().real().dot(v.cwiseAbs2()) / n_sites;
  };
  if (opts.start && opts.start->n_c() != n_c) throw Error(ErrorCode::InvalidArgument, "start has wrong n_c");
  const Eigen::VectorXd start = (opts.start ? *opts.start : heuristic_sequence(ctx, n_c, opts.y0)).packed();
  Eigen::VectorXd spread(start.size());
  for (int i = 0; i < n_c; ++i) {
    spread(2 * i) = opts.x_spread;
    spread(2 * i + 1) = opts.y_spread;
  }
  std::vector<SimplexResult> results(opts.restarts);
  parallel_for(results.size(), opts.threads, [&](std::size_t r) {
    Eigen::VectorXd x0 = start;
    if (r > 0) {
      std::mt19937_64 rng(opts.seed + r);
      x0 = uniform_point(rng, start - spread, start + spread);
    }
    results[r] = nelder_mead(objective, x0, opts.simplex);
  });
  std::size_t best = 0;
  int evaluations = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    evaluations += results[r].evaluations;
    if (results[r].f < results[best].f) best = r;
  }
  PulseResult out = run_pulse_sequence(ctx, PulseSequence::unpack(results[best].x));
  out.stalled = results[best].stalled;
  out.evaluations = evaluations;
  return out;
}

}  // namespace lakes::ruby
