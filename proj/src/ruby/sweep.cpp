#include "lakes/ruby/sweep.hpp"

#include <cmath>

#include "lakes/core/optimize.hpp"
#include "lakes/core/parallel.hpp"
#include "lakes/core/spectrum.hpp"

namespace lakes::ruby {

namespace {

StateVector ground(const RubyOperators& ops, double omega, double delta) {
  GroundStateOptions go;
  go.tol = 1e-13;
  return ground_state(ops.hamiltonian(omega, delta), go).state;
}

}  // namespace

SweepContext::SweepContext(RubyOperators ops, std::shared_ptr<const RubyOperators> fit_ops, double omega,
                           double delta_start, double delta_end)
    : ops_(std::move(ops)),
      fit_ops_(std::move(fit_ops)),
      omega_(omega),
      delta_start_(delta_start),
      delta_end_(delta_end) {
  if (!(omega > 0)) throw Error(ErrorCode::InvalidArgument, "omega must be positive");
  if (delta_start == delta_end) throw Error(ErrorCode::InvalidArgument, "empty delta range");
  psi0_ = ground(ops_, omega, delta_start);
  gs_end_ = ground(ops_, omega, delta_end);
  rvb_ = rvb_state(*ops_.space);
  max_occupation_ = static_cast<int>(std::lround(ops_.n_tot.matrix().coeffs().real().maxCoeff()));
  const SparseMatrixXc& x = ops_.pxp.matrix();
  for (Eigen::Index r = 0; r < x.outerSize(); ++r) {
    double row = 0.0;
    for (SparseMatrixXc::InnerIterator it(x, r); it; ++it) row += std::abs(it.value());
    pxp_norm_ = std::max(pxp_norm_, row);
  }
}

double SweepContext::energy_scale() const {
  return 0.5 * omega_ * pxp_norm_ + std::max(std::abs(delta_start_), std::abs(delta_end_)) * max_occupation_;
}

std::shared_ptr<const AlphaTable> SweepContext::table(Family family, int ell) const {
  std::lock_guard lock(mutex_);
  const auto key = std::make_pair(static_cast<int>(family), ell);
  auto it = tables_.find(key);
  if (it != tables_.end()) return it->second;
  // one pass yields all lower orders as well
  const int top = std::max(ell, 5);
  auto all = build_alpha_tables(*fit_ops_, family, top, omega_, delta_start_, delta_end_);
  for (int l = 1; l <= top; ++l) {
    tables_[{static_cast<int>(family), l}] = std::make_shared<const AlphaTable>(std::move(all[l - 1]));
  }
  return tables_.at(key);
}

std::shared_ptr<SweepContext> make_sweep_context(int lx, int ly, double omega, double delta_start,
                                                 double delta_end) {
  auto fit_lat = std::make_shared<const RubyLattice>(build_lattice(2, 2));
  auto fit = std::make_shared<const RubyOperators>(build_operators(RubySpace::symmetric(fit_lat)));
  if (lx == 2 && ly == 2) return std::make_shared<SweepContext>(*fit, fit, omega, delta_start, delta_end);
  auto lat = std::make_shared<const RubyLattice>(build_lattice(lx, ly));
  return std::make_shared<SweepContext>(build_operators(RubySpace::symmetric(lat)), fit, omega, delta_start,
                                        delta_end);
}

SweepObservables observe(const SweepContext& ctx, const StateVector& psi) {
  SweepObservables o;
  o.rvb_overlap = std::abs(inner(ctx.rvb(), psi));
  o.rvb_per_site = overlap_per_site(ctx.rvb(), psi);
  o.gs_overlap = std::abs(inner(ctx.final_ground_state(), psi));
  o.gs_per_site = overlap_per_site(ctx.final_ground_state(), psi);
  o.dimer_density = ctx.ops().n_tot.expectation(psi).real() / ctx.ops().space->lattice().n_sites();
  o.stab = stabilizers(ctx.ops(), psi.amplitudes());
  return o;
}

SweepOutcome cd_sweep(const SweepContext& ctx, const SweepRun& run) {
  if (run.ell < 0) throw Error(ErrorCode::InvalidArgument, "ell must be non-negative");
  const SweepSchedule schedule(ctx.delta_start(), ctx.delta_end(), run.total_time);
  const double omega = ctx.omega();
  const RubyOperators& ops = ctx.ops();
  const SparseMatrixXc* pxp = &ops.pxp.matrix();
  const SparseMatrixXc* nt = &ops.n_tot.matrix();
  const bool driven = run.ell > 0 && run.lambda_f != 0.0;
  std::shared_ptr<const AlphaTable> table = driven ? ctx.table(run.family, run.ell) : nullptr;
  const double drive = schedule.rate() * run.lambda_f;

  TimeDependentOperator h = [&, table](double t) -> OperatorAction {
    const double delta = schedule.param(t);
    auto bare = [=](const VectorXc& v, VectorXc& w) {
      w.noalias() = *pxp * v;
      w *= 0.5 * omega;
      w.noalias() -= delta * (*nt * v);
    };
    if (!table) return bare;
    OperatorAction a = agp_action(ops, run.family, table->at(delta), omega, delta);
    return [=](const VectorXc& v, VectorXc& w) {
      VectorXc av;
      a(v, av);
      bare(v, w);
      w += drive * av;
    };
  };
  EvolveOptions eo;
  // Krylov steps are exact for frozen H; dt only resolves the time dependence
  eo.dt = run.dt > 0.0 ? run.dt : std::min(run.total_time / 100.0, 0.1);
  eo.energy_scale = ctx.energy_scale();
  SweepOutcome out;
  out.final_state = evolve(h, ctx.initial_state(), schedule, eo);
  out.obs = observe(ctx, out.final_state);
  return out;
}

LambdaTune lambda_f_tune(const SweepContext& ctx, int ell, Family family, double total_time, double lo, double hi,
                         double tol) {
  SweepRun run;
  run.total_time = total_time;
  run.ell = ell;
  run.family = family;
  auto neg = [&](double lf) {
    run.lambda_f = lf;
    return -cd_sweep(ctx, run).obs.rvb_overlap;
  };
  const ScalarMin m = golden_section(neg, lo, hi, tol);
  return {m.x, -m.f, m.evaluations};
}

SweepLibrary build_sweep_library(const SweepContext& ctx, const std::vector<double>& times, int threads) {
  SweepLibrary lib;
  lib.times = times;
  lib.states.resize(times.size());
  parallel_for(times.size(), threads, [&](std::size_t i) {
    SweepRun run;
    run.total_time = times[i];
    lib.states[i] = cd_sweep(ctx, run).final_state;
  });
  return lib;
}

BestMatch best_matching_sweep(const StateVector& psi, const SweepLibrary& library) {
  if (library.states.empty()) throw Error(ErrorCode::EmptyLibrary, "sweep library is empty");
  BestMatch best;
  best.overlap_per_site = -1.0;
  // visit in order of increasing T so that strict improvement keeps the smaller T on ties
  std::vector<std::size_t> order(library.states.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return library.times[a] < library.times[b]; });
  for (std::size_t i : order) {
    const double o = overlap_per_site(library.states[i], psi);
    if (o > best.overlap_per_site) best = {library.times[i], o, i};
  }
  return best;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0) || !(hi >= lo)) throw Error(ErrorCode::InvalidArgument, "bad log grid");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = n == 1 ? lo : lo * std::pow(hi / lo, double(i) / (n - 1));
  return g;
}

}  // namespace lakes::ruby
