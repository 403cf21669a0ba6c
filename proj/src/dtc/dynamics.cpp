#include "lakes/dtc/dynamics.hpp"

#include <cmath>

#include "lakes/core/parallel.hpp"
#include "lakes/core/spectrum.hpp"

namespace lakes::dtc {

namespace {

constexpr double kLoopFloor = 1e-8;
constexpr double kDegeneracyTol = 1e-8;

double expect(const DtcModel& model, const PauliString& p, const StateVector& psi) {
  PauliSum s;
  s.add(p, 1.0);
  return model.op(s).expectation(psi).real();
}

StateVector ground(const DtcModel& model, const DtcParams& p) {
  GroundStateOptions go;
  go.tol = 1e-13;
  return ground_state(model.hamiltonian(p), go).state;
}

}  // namespace

FmOrder fm_order_parameter(const DtcModel& model, const StateVector& psi, int length) {
  const DtcLattice& lat = model.lattice();
  if (length == 0) length = std::max(1, lat.lx() / 2);
  if (length < 1 || length >= lat.lx()) throw Error(ErrorCode::InvalidArgument, "string must be shorter than the row");
  PauliString x_open, x_loop, z_open, z_loop;
  for (int x = 0; x < lat.lx(); ++x) {
    x_loop.x |= bit(lat.h_link(x, 0));
    z_loop.z |= bit(lat.v_link(x, 0));
    if (x < length) {
      x_open.x |= bit(lat.h_link(x, 0));
      z_open.z |= bit(lat.v_link(x, 0));
    }
  }
  FmOrder out;
  const double xl = std::abs(expect(model, x_loop, psi));
  const double zl = std::abs(expect(model, z_loop, psi));
  out.x_flagged = xl < kLoopFloor;
  out.z_flagged = zl < kLoopFloor;
  out.x_fm = out.x_flagged ? 0.0 : expect(model, x_open, psi) / std::sqrt(xl);
  out.z_fm = out.z_flagged ? 0.0 : expect(model, z_open, psi) / std::sqrt(zl);
  return out;
}

DtcContext::DtcContext(std::shared_ptr<const DtcModel> model, double h_x, double h_z, double k_start, double k_end)
    : model_(std::move(model)), h_x_(h_x), h_z_(h_z), k_start_(k_start), k_end_(k_end) {
  if (!(h_x > 0)) throw Error(ErrorCode::InvalidArgument, "h_x must be positive");
  if (k_start == k_end) throw Error(ErrorCode::InvalidArgument, "empty K range");
  psi0_ = ground(*model_, params(k_start));
  target_ = model_->gauss_projected(psi0_);
  gs_end_ = ground(*model_, params(k_end));
}

double DtcContext::energy_scale() const {
  const DtcLattice& lat = model_->lattice();
  return std::max(std::abs(k_start_), std::abs(k_end_)) * lat.n_vertices() +
         (h_x_ + std::abs(h_z_)) * lat.n_links();
}

std::shared_ptr<DtcContext> make_dtc_context(int lx, int ly, double h_x, double h_z, double k_start, double k_end) {
  return std::make_shared<DtcContext>(std::make_shared<const DtcModel>(lx, ly), h_x, h_z, k_start, k_end);
}

DtcObservables observe(const DtcContext& ctx, const StateVector& psi) {
  const DtcModel& m = ctx.model();
  DtcObservables o;
  o.overlap = std::abs(inner(ctx.target(), psi));
  o.overlap_per_site = overlap_per_site(ctx.target(), psi);
  o.gs_overlap = std::abs(inner(ctx.final_ground_state(), psi));
  for (int v = 0; v < m.lattice().n_vertices(); ++v) o.gauss += m.gauss(v).expectation(psi).real();
  for (int p = 0; p < m.lattice().n_plaquettes(); ++p) o.wilson += m.wilson(p).expectation(psi).real();
  o.gauss /= m.lattice().n_vertices();
  o.wilson /= m.lattice().n_plaquettes();
  o.fm = fm_order_parameter(m, psi);
  return o;
}

double default_lambda_f(DtcDrive drive) {
  switch (drive) {
    case DtcDrive::FirstOrder:
      return lambda_f(1);
    case DtcDrive::SecondOrder:
      return lambda_f(2);
    default:
      return 1.0;
  }
}

SparseMatrixXc approximate_agp(const DtcModel& model, DtcDrive drive, double K, double h_x) {
  const DtcParams p{K, h_x, 0.0};
  if (drive == DtcDrive::FirstOrder) return alpha_first_order(p).without_hz * model.nested_term(1, K, h_x);
  if (drive == DtcDrive::SecondOrder) {
    const SecondOrderAlpha a = alpha_second_order(p);
    SparseMatrixXc m = a.alpha1 * model.nested_term(1, K, h_x);
    m += a.alpha2 * model.nested_term(2, K, h_x);
    return m;
  }
  throw Error(ErrorCode::InvalidArgument, "approximate AGP needs order 1 or 2");
}

DtcOutcome dtc_cd_sweep(const DtcContext& ctx, const DtcRun& run) {
  const SweepSchedule schedule(ctx.k_start(), ctx.k_end(), run.total_time);
  const DtcModel& model = ctx.model();
  const double drive = schedule.rate() * run.lambda_f;
  const bool driven = run.drive != DtcDrive::None && run.lambda_f != 0.0;

  TimeDependentOperator h = [&](double t) -> OperatorAction {
    const DtcParams p = ctx.params(schedule.param(t));
    auto m = std::make_shared<SparseMatrixXc>(model.hamiltonian(p).matrix());
    if (driven) {
      if (run.drive == DtcDrive::Exact) {
        // H and dH/dK are real: A = -i V M V^T with M_mn = (V^T dH V)_mn / (E_m - E_n)
        auto es = std::make_shared<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>>(
            Eigen::MatrixXd(Eigen::MatrixXcd(*m).real()));
        const Eigen::MatrixXd& v = es->eigenvectors();
        const Eigen::VectorXd& e = es->eigenvalues();
        auto mm = std::make_shared<Eigen::MatrixXd>(v.transpose() * (Eigen::MatrixXcd(model.dk().matrix()).real() * v));
        for (Eigen::Index j = 0; j < e.size(); ++j) {
          for (Eigen::Index i = 0; i < e.size(); ++i) {
            const double gap = e(i) - e(j);
            (*mm)(i, j) = std::abs(gap) > kDegeneracyTol ? drive * (*mm)(i, j) / gap : 0.0;
          }
        }
        return [m, es, mm](const VectorXc& in, VectorXc& out) {
          const Eigen::MatrixXd& v = es->eigenvectors();
          out.noalias() = *m * in;
          const VectorXc c = (*mm) * (v.transpose() * in);
          out.noalias() += cplx(0.0, -1.0) * (v * c);
        };
      } else {
        *m += drive * approximate_agp(model, run.drive, p.K, p.h_x);
      }
    }
    return [m](const VectorXc& in, VectorXc& out) { out.noalias() = *m * in; };
  };
  EvolveOptions eo;
  const double steps = run.drive == DtcDrive::Exact ? 200.0 : 100.0;
  eo.dt = run.dt > 0.0 ? run.dt : std::min(run.total_time / steps, 5.0 / steps);
  eo.energy_scale = ctx.energy_scale();
  DtcOutcome out;
  out.final_state = evolve(h, ctx.initial_state(), schedule, eo);
  out.obs = observe(ctx, out.final_state);
  return out;
}

void apply_dtc_cycle(const DtcModel& model, double K, double h_x, double x, double y, VectorXc& psi) {
  const SparseMatrixXc he = model.hamiltonian({K, h_x, 0.0}).matrix();
  const OperatorAction h_act = action_of(he);
  const OperatorAction a_act = action_of(model.star_y().matrix());
  KrylovOptions ko;
  ko.tol = 1e-14;
  expm_multiply(h_act, x, psi, ko);
  expm_multiply(a_act, y, psi, ko);
  expm_multiply(h_act, -2.0 * x, psi, ko);
  expm_multiply(a_act, y, psi, ko);
  expm_multiply(h_act, x, psi, ko);
}

DtcPulseResult dtc_pulse_sequence(const DtcContext& ctx, int n_c, double y) {
  if (n_c < 1) throw Error(ErrorCode::InvalidArgument, "n_c must be >= 1");
  DtcPulseResult r;
  VectorXc psi = ctx.initial_state().amplitudes();
  r.trajectory.push_back(observe(ctx, ctx.initial_state()));
  r.elapsed.push_back(0.0);
  const double dk = (ctx.k_end() - ctx.k_start()) / n_c;
  for (int c = 0; c < n_c; ++c) {
    const double K = ctx.k_start() + c * dk;
    const double x = pulse_x({K, ctx.h_x(), 0.0});
    apply_dtc_cycle(ctx.model(), K, ctx.h_x(), x, y, psi);
    r.k_values.push_back(K);
    r.x_values.push_back(x);
    r.elapsed.push_back(r.elapsed.back() + ctx.h_x() * (4.0 * std::abs(x) + 2.0 * std::abs(y)));
    r.trajectory.push_back(observe(ctx, StateVector(ctx.model().basis(), psi)));
  }
  r.final_state = StateVector(ctx.model().basis(), std::move(psi));
  return r;
}

YScan dtc_y_scan(const DtcContext& ctx, int n_c, const std::vector<double>& ys, int threads) {
  if (ys.empty()) throw Error(ErrorCode::InvalidArgument, "empty y grid");
  YScan s;
  s.ys = ys;
  s.overlaps.resize(ys.size());
  parallel_for(ys.size(), threads, [&](std::size_t i) {
    s.overlaps[i] = dtc_pulse_sequence(ctx, n_c, ys[i]).trajectory.back().overlap_per_site;
  });
  s.best_overlap = -1.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (s.overlaps[i] > s.best_overlap) {
      s.best_overlap = s.overlaps[i];
      s.best_y = ys[i];
    }
  }
  return s;
}

}  // namespace lakes::dtc
