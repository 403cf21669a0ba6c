#include "lakes/harness/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include "lakes/core/error.hpp"
#include "lakes/core/parallel.hpp"
#include "lakes/dtc/dynamics.hpp"
#include "lakes/qutrit/qutrit.hpp"
#include "lakes/ruby/metrics.hpp"
#include "lakes/ruby/pulse.hpp"
#include "lakes/twa/sweep.hpp"

namespace lakes::harness {

namespace {

// accumulates sub-checks of one criterion
struct Report {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (detail.tellp() > 0) detail << "; ";
    detail << (ok ? "" : "FAIL ") << what;
    pass = pass && ok;
  }
};

template <class... A>
std::string fmt(const char* f, A... a) {
  const int n = std::snprintf(nullptr, 0, f, a...);
  std::string out(static_cast<std::size_t>(n) + 1, '\0');
  std::snprintf(out.data(), out.size(), f, a...);
  out.resize(static_cast<std::size_t>(n));
  return out;
}

struct Shared {
  std::shared_ptr<ruby::SweepContext> ruby22, ruby23;
  std::shared_ptr<dtc::DtcContext> dtc22;
  std::vector<ruby::PulseResult> pulses22;  // n_c = 1..4
  std::shared_ptr<ruby::SweepLibrary> library22;
};

std::shared_ptr<ruby::SweepContext> ruby_ctx(int lx, int ly) { return ruby::make_sweep_context(lx, ly); }

struct Plateau {
  double level = 0.0;
  double t_first = NAN;
};

Plateau undriven_plateau(const ruby::SweepContext& ctx, const ruby::SweepLibrary& lib) {
  Plateau p;
  double best = 0.0;
  std::vector<double> o;
  for (const auto& s : lib.states) {
    o.push_back(overlap_per_site(ctx.rvb(), s));
    best = std::max(best, o.back());
  }
  p.level = best - 0.005;
  for (std::size_t i = 0; i < o.size(); ++i)
    if (o[i] >= p.level && !(p.t_first <= lib.times[i])) p.t_first = lib.times[i];
  return p;
}

// ---------------------------------------------------------------- criteria

void criterion1(Report& r) {
  auto lat = std::make_shared<const ruby::RubyLattice>(ruby::build_lattice(2, 3));
  const auto space = ruby::RubySpace::symmetric(lat);
  r.check(space->dim() == 11438, "(2,3) symmetric dimension " + std::to_string(space->dim()) + " (expect 11438)");
}

void criterion2(Report& r, Tier tier, Shared& s) {
  auto gap = [](const ruby::SweepContext& c) {
    const StateVector p = ruby::gauss_projector_apply(c.ops(), c.initial_state());
    return 1.0 - std::abs(inner(c.rvb(), p));
  };
  const double g22 = gap(*s.ruby22);
  r.check(g22 <= 1e-9, fmt("(2,2) 1-|<RVB|P psi0>| = %.2e (<= 1e-9)", g22));
  if (tier == Tier::Full) {
    const double g23 = gap(*s.ruby23);
    r.check(g23 <= 1e-10, fmt("(2,3) 1-|<RVB|P psi0>| = %.2e (<= 1e-10)", g23));
  }
}

void criterion3(Report& r, int threads) {
  const auto times = ruby::log_grid(0.01, 1000.0, 21);
  struct Row {
    double und, cd1, gap01, gap5, exact;
  };
  std::vector<Row> rows(times.size());
  parallel_for(times.size(), threads, [&](std::size_t i) {
    qutrit::SweepSpec s;
    s.total_time = times[i];
    auto run = [&](qutrit::Drive d, double delta = 0.0) {
      s.drive = d;
      s.delta = delta;
      return qutrit::sweep(s).overlap_target;
    };
    rows[i] = {run(qutrit::Drive::None), run(qutrit::Drive::FirstOrder), run(qutrit::Drive::Gapped, 0.1),
               run(qutrit::Drive::Gapped, 5.0), run(qutrit::Drive::Exact)};
  });
  std::size_t arg = 0;
  double cd_deficit = -std::numeric_limits<double>::infinity(), d01 = 0.0, d5 = 0.0, t_d5 = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].und > rows[arg].und) arg = i;
    if (times[i] <= 1.0) cd_deficit = std::max(cd_deficit, rows[i].und - rows[i].cd1);
    d01 = std::max(d01, std::abs(rows[i].gap01 - rows[i].exact));
    if (std::abs(rows[i].gap5 - rows[i].und) > d5) {
      d5 = std::abs(rows[i].gap5 - rows[i].und);
      t_d5 = times[i];
    }
  }
  r.check(times[arg] >= 3.0 && times[arg] <= 30.0, fmt("undriven max at h_xT = %.3g (overlap %.4f)", times[arg], rows[arg].und));
  r.check(cd_deficit <= 0.0, fmt("max(undriven - cd1) for T <= 1: %.2e", cd_deficit));
  r.check(d01 <= 1e-2, fmt("max|gapped(0.1) - exact| = %.2e", d01));
  r.check(d5 <= 5e-2, fmt("max|gapped(5) - undriven| = %.3f at h_xT = %.3g", d5, t_d5));
}

void criterion4(Report& r) {
  const dtc::DtcLattice lat(4, 4);
  double e1 = 0.0, e2 = 0.0;
  std::ostringstream worst;
  for (double K : {0.0, 1.0, 2.0, 4.0}) {
    const dtc::DtcParams p{K, 1.0, 0.0};
    const auto a1 = dtc::alpha_first_order(p);
    const auto a2 = dtc::alpha_second_order(p);
    const double fh = dtc::trace_fit(lat, p, 1, true).alphas(0);
    const double fn = dtc::trace_fit(lat, p, 1, false).alphas(0);
    const Eigen::VectorXd f2 = dtc::trace_fit(lat, p, 2, false).alphas;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    e1 = std::max({e1, rel(a1.with_hz, fh), rel(a1.without_hz, fn)});
    const double k2 = std::max(rel(a2.alpha1, f2(0)), rel(a2.alpha2, f2(1)));
    if (k2 > 1e-8) worst << " K=" << K << ":" << fmt("%.2g/%.2g", rel(a2.alpha1, f2(0)), rel(a2.alpha2, f2(1)));
    e2 = std::max(e2, k2);
  }
  r.check(e1 <= 1e-8, fmt("first-order alpha max rel err %.1e", e1));
  r.check(e2 <= 1e-8, fmt("second-order (alpha1, alpha2) max rel err %.2e", e2) +
                          (worst.str().empty() ? "" : " [alpha1/alpha2 rel err" + worst.str() + "]"));
  const double l1 = dtc::lambda_f(1), l2 = dtc::lambda_f(2), in = dtc::integrated_alpha(1, 4.0);
  r.check(std::abs(l1 - 1.315) <= 1e-3 && std::abs(l2 - 1.304) <= 1e-3, fmt("lambda_f = %.4f, %.4f", l1, l2));
  r.check(std::abs(in - 0.047) <= 1e-3, fmt("integral = %.4f", in));
}

void criterion5(Report& r, Shared& s) {
  const ruby::RubyOperators& ops = s.ruby22->ops();
  const double x = 0.1;
  auto residual = [&](double y) {
    const ruby::PulseCycle c{x, y};
    return (ruby::unitary_log(ruby::cycle_unitary(ops, c)) - ruby::cycle_effective_hamiltonian(ops, c)).norm();
  };
  const double e = std::log2(residual(0.02) / residual(0.01));
  r.check(std::abs(e - 2.0) <= 0.2, fmt("exponent %.3f between y = 0.02 and 0.01 at x = 0.1", e));
}

void pulse_speedup(Report& r, const ruby::SweepContext& ctx, const ruby::SweepLibrary& lib,
                   const ruby::PulseResult& res, const std::string& tag) {
  const Plateau p = undriven_plateau(ctx, lib);
  const double t = res.sequence.drive_time();
  const bool reach = res.obs.rvb_per_site >= p.level;
  r.check(reach && t <= p.t_first / 3.0,
          tag + fmt(" n_c=4 RVB/site %.4f vs plateau %.4f", res.obs.rvb_per_site, p.level) +
              fmt(", drive time %.3g vs T_plateau %.3g", t, p.t_first) + fmt(" (speedup %.1fx)", p.t_first / t));
}

void criterion6(Report& r, Tier tier, Shared& s, int threads) {
  pulse_speedup(r, *s.ruby22, *s.library22, s.pulses22[3], "(2,2)");
  if (tier == Tier::Full) {
    const auto lib = ruby::build_sweep_library(*s.ruby23, ruby::log_grid(0.1, 1000.0, 41), threads);
    ruby::PulseOptions o;
    o.threads = threads;
    const auto res = ruby::optimize_pulse_sequence(*s.ruby23, 4, o);
    pulse_speedup(r, *s.ruby23, lib, res, "(2,3)");
  }
}

void criterion7(Report& r, Shared& s, int threads) {
  const ruby::SweepContext& ctx = *s.ruby22;
  const std::vector<double> times = {0.1, 1.0, 10.0, 100.0};
  // lambda_f tuned per ell as in the sweep experiment
  std::vector<double> lf(6, 1.0);
  parallel_for(5, threads, [&](std::size_t i) {
    lf[i + 1] = ruby::lambda_f_tune(ctx, static_cast<int>(i + 1), ruby::Family::Full, 1.0).lambda_f;
  });
  std::vector<double> shift(times.size(), 0.0);
  parallel_for(times.size(), threads, [&](std::size_t i) {
    ruby::SweepRun run;
    run.total_time = times[i];
    const double w0 = ruby::cd_sweep(ctx, run).obs.stab.wilson_projected;
    for (int l = 1; l <= 5; ++l) {
      run.ell = l;
      run.lambda_f = lf[l];
      shift[i] = std::max(shift[i], std::abs(ruby::cd_sweep(ctx, run).obs.stab.wilson_projected - w0));
    }
  });
  const double sweep_shift = *std::max_element(shift.begin(), shift.end());
  r.check(sweep_shift <= 1e-2, fmt("ruby sweeps l=1..5: max|dW~| = %.2e", sweep_shift));
  double pulse_shift = 0.0;
  for (const auto& p : s.pulses22) {
    ruby::SweepRun run;
    run.total_time = p.sequence.drive_time();
    pulse_shift = std::max(pulse_shift, std::abs(p.obs.stab.wilson_projected - ruby::cd_sweep(ctx, run).obs.stab.wilson_projected));
  }
  r.check(pulse_shift <= 1e-2, fmt("ruby pulses n_c=1..4 vs undriven at equal time: max|dW~| = %.2e", pulse_shift));

  const dtc::DtcContext& d = *s.dtc22;
  const dtc::DtcModel& m = d.model();
  auto wilsons = [&](const VectorXc& v) {
    const StateVector st(m.basis(), v);
    std::vector<double> w;
    for (int p = 0; p < m.lattice().n_plaquettes(); ++p) w.push_back(m.wilson(p).expectation(st).real());
    return w;
  };
  auto max_diff = [](const std::vector<double>& a, const std::vector<double>& b) {
    double x = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) x = std::max(x, std::abs(a[i] - b[i]));
    return x;
  };
  const VectorXc psi0 = d.initial_state().amplitudes();
  const auto w0 = wilsons(psi0);
  double dw = 0.0;
  for (auto drive : {dtc::DtcDrive::FirstOrder, dtc::DtcDrive::SecondOrder}) {
    for (double K : {0.5, 2.0}) {
      const SparseMatrixXc a = dtc::approximate_agp(m, drive, K, d.h_x());
      VectorXc v = psi0;
      KrylovOptions ko;
      ko.tol = 1e-14;
      expm_multiply(action_of(a), 5.0, v, ko);
      dw = std::max(dw, max_diff(wilsons(v), w0));
    }
  }
  r.check(dw <= 1e-10, fmt("DTC exp(-i 5 A1), exp(-i 5 A2): max|dW_p| = %.1e", dw));
  const auto pulse = dtc::dtc_pulse_sequence(d, 4, dtc::kReferencePulseY);
  const double dp = max_diff(wilsons(pulse.final_state.amplitudes()), w0);
  r.check(dp <= 1e-10, fmt("DTC pulse sequence n_c=4: max|dW_p| = %.1e", dp));
}

void criterion8(Report& r, Shared& s) {
  double worst = 1.0;
  std::ostringstream per;
  for (std::size_t i = 0; i < s.pulses22.size(); ++i) {
    const auto m = ruby::best_matching_sweep(s.pulses22[i].final_state, *s.library22);
    worst = std::min(worst, m.overlap_per_site);
    per << (i ? ", " : "") << "n_c=" << i + 1 << fmt(": %.4f at T=%.3g", m.overlap_per_site, m.total_time);
  }
  r.check(worst >= 0.98, "(2,2) best-match per-site overlap " + per.str());
}

void criterion9(Report& r, Tier tier, int threads) {
  twa::TwaParams p;
  p.n_samples = tier == Tier::Full ? 100000 : 1024;
  twa::TwaSweepOptions o;
  o.threads = threads;
  const auto lim = twa::condensed_limits(p);
  const auto und = twa::run_twa_sweep(p, {1.0, 50.0, 100.0, 200.0}, twa::TwaDrive{}, o);
  double best = INFINITY, best_t = 0.0;
  for (std::size_t i = 1; i < und.size(); ++i) {
    const double worst = std::max(und[i].a.magnitude() / lim.a, und[i].b.magnitude() / lim.b);
    if (worst < best) {
      best = worst;
      best_t = und[i].total_time;
    }
  }
  r.check(best < 0.1, fmt("undriven window: max(|a|/a_c, |b|/b_c) = %.2e at h_xT = %g", best, best_t) +
                          " (n=" + std::to_string(p.n_samples) + ")");
  const auto table = twa::build_alpha_table(p);
  const auto tune = twa::tune_lambda_f(p, table, 1.0, 0.0, 8.0, 512, o);
  const auto drv = twa::run_twa_sweep(p, {1.0}, twa::make_drive(table, tune.lambda_f), o);
  const double a0 = und[0].a.magnitude(), a1 = drv[0].a.magnitude();
  const double db = std::abs(drv[0].b.value.real() - und[0].b.value.real());
  const double se = std::hypot(und[0].b.se_re, drv[0].b.se_re);
  r.check(a1 <= 0.5 * a0, fmt("quench h_xT=1: |a| %.3g -> %.3g", a0, a1) + fmt(" (lambda_f %.3f)", tune.lambda_f));
  r.check(db <= 2 * se, fmt("b shift %.2e vs 2 SE %.2e", db, 2 * se));
  twa::TwaDrive zero = twa::make_drive(table, 0.0);
  const auto z = twa::run_twa_sweep(p, {1.0}, zero, o);
  r.check(z[0].a.value == und[0].a.value && z[0].b.value == und[0].b.value, "lambda_f = 0 bitwise equal to undriven");
}

void criterion10(Report& r, Shared& s) {
  const ruby::SweepContext& ctx = *s.ruby22;
  const StateVector empty = ctx.ops().space->state_from([](ruby::Config c) { return c == 0 ? cplx(1.0) : cplx(0.0); });
  const auto me = ruby::lake_metrics(ctx.ops(), empty.amplitudes());
  r.check(me.l_e == 2.0, fmt("empty-state L_e = %.17g", me.l_e));
  const auto mr = ruby::lake_metrics(ctx.ops(), ctx.rvb().amplitudes());
  r.check(mr.epsilon < 1e-12 && mr.clipped, fmt("RVB epsilon = %.1e, L_lake = %.4g (clipped)", mr.epsilon, mr.l_lake));
  double q = 1.0;
  for (double T : {0.1, 1.0, 10.0}) {
    qutrit::SweepSpec sp;
    sp.total_time = T;
    sp.drive = qutrit::Drive::Exact;
    q = std::min(q, qutrit::sweep(sp).overlap_ground);
  }
  r.check(q >= 1.0 - 1e-6, fmt("qutrit exact AGP: min gs overlap 1 - %.1e", 1.0 - q));
  double d = 1.0;
  for (double T : {0.1, 1.0}) {
    dtc::DtcRun run;
    run.total_time = T;
    run.drive = dtc::DtcDrive::Exact;
    d = std::min(d, dtc::dtc_cd_sweep(*s.dtc22, run).obs.gs_overlap);
  }
  r.check(d >= 1.0 - 1e-6, fmt("DTC exact AGP: min gs overlap 1 - %.1e", 1.0 - d));
}

}  // namespace

Tier parse_tier(const std::string& name) {
  if (name == "ci") return Tier::CI;
  if (name == "full") return Tier::Full;
  throw Error(ErrorCode::ConfigInvalid, "unknown tier '" + name + "' (expected ci or full)");
}

std::vector<CriterionResult> run_acceptance(Tier tier, int threads, std::ostream& out) {
  Shared s;
  std::vector<CriterionResult> results;
  auto run = [&](int id, const std::function<void(Report&)>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Report rep;
    try {
      fn(rep);
    } catch (const std::exception& e) {
      rep.check(false, std::string("error: ") + e.what());
    }
    CriterionResult c;
    c.id = id;
    c.pass = rep.pass;
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.detail = rep.detail.str();
    out << "criterion " << id << (id < 10 ? " " : "") << (c.pass ? " PASS " : " FAIL ") << fmt("(%.1fs) ", c.seconds)
        << c.detail << std::endl;
    results.push_back(c);
  };
  s.ruby22 = ruby_ctx(2, 2);
  if (tier == Tier::Full) s.ruby23 = ruby_ctx(2, 3);
  s.dtc22 = dtc::make_dtc_context(2, 2);

  run(1, [&](Report& r) { criterion1(r); });
  run(2, [&](Report& r) { criterion2(r, tier, s); });
  run(3, [&](Report& r) { criterion3(r, threads); });
  run(4, [&](Report& r) { criterion4(r); });
  run(5, [&](Report& r) { criterion5(r, s); });
  // shared by 6-8: undriven library and optimized sequences n_c = 1..4 on (2,2)
  s.library22 = std::make_shared<ruby::SweepLibrary>(
      ruby::build_sweep_library(*s.ruby22, ruby::log_grid(0.1, 1000.0, 41), threads));
  s.pulses22.resize(4);
  parallel_for(4, threads, [&](std::size_t i) {
    s.pulses22[i] = ruby::optimize_pulse_sequence(*s.ruby22, static_cast<int>(i + 1));
  });
  run(6, [&](Report& r) { criterion6(r, tier, s, threads); });
  run(7, [&](Report& r) { criterion7(r, s, threads); });
  run(8, [&](Report& r) { criterion8(r, s); });
  run(9, [&](Report& r) { criterion9(r, tier, threads); });
  run(10, [&](Report& r) { criterion10(r, s); });
  int passed = 0;
  for (const auto& c : results) passed += c.pass;
  out << passed << "/" << results.size() << " criteria passed (tier " << (tier == Tier::CI ? "ci" : "full") << ")"
      << std::endl;
  return results;
}

}  // namespace lakes::harness
