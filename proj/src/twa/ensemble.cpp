#include "lakes/twa/ensemble.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "lakes/core/spectrum.hpp"
#include "lakes/twa/dynamics.hpp"

namespace lakes::twa {

void TwaParams::validate() const {
  const double vals[] = {delta_a, delta_b, f_a, f_b, h_x, h_z, lambda_a, lambda_b, hbar, k_start, k_end,
                         burn_in_time, settle_periods, dt};
  for (double v : vals) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "TWA couplings must be finite");
  }
  if (!(delta_a > 0) || !(delta_b > 0) || !(hbar > 0) || !(dt > 0))
    throw Error(ErrorCode::InvalidArgument, "delta_a, delta_b, hbar and dt must be positive");
  if (L < 2) throw Error(ErrorCode::InvalidArgument, "torus needs L >= 2");
  if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be >= 1");
  if (burn_in_time < 0 || settle_periods < 0) throw Error(ErrorCode::InvalidArgument, "negative burn-in");
}

namespace {

double well_position(const TwaParams& p, double K) {
  return K < 0 && p.lambda_a > 0 ? std::sqrt(-6.0 * K / p.lambda_a) : 0.0;
}

// harmonic width^2 of the ground state for H = delta Pi^2 / 2 + m phi^2 / 2
double harmonic_var(double hbar, double delta, double m) { return 0.5 * hbar * std::sqrt(delta / m); }

}  // namespace

SiteGaussian fit_site_ground_state(const TwaParams& p, double K, int grid) {
  p.validate();
  if (grid < 8) throw Error(ErrorCode::InvalidArgument, "grid too small");
  const double mu = well_position(p, K);
  const double m_a = mu > 0 ? K + 0.5 * p.lambda_a * mu * mu : K;
  const double m_b = p.h_x * mu * mu - p.h_z;
  if (!(m_a > 0) || !(m_b > 0))
    throw Error(ErrorCode::InvalidArgument, "single-site fit needs a stable well for both fields");
  const double sa = std::sqrt(harmonic_var(p.hbar, p.delta_a, m_a));
  const double sb = std::sqrt(harmonic_var(p.hbar, p.delta_b, m_b));
  const double lo_a = std::max(mu - 8.0 * sa, mu > 0 ? 0.0 : -1e300), hi_a = mu + 8.0 * sa;
  const double ha = (hi_a - lo_a) / (grid + 1), hb = 16.0 * sb / (grid + 1);
  auto pa = [&](int i) { return lo_a + (i + 1) * ha; };
  auto pb = [&](int j) { return -8.0 * sb + (j + 1) * hb; };
  auto idx = [&](int i, int j) { return Eigen::Index(i) * grid + j; };

  // fourth-order finite differences with Dirichlet walls
  const double st[3] = {-30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};
  const double ka = -0.5 * p.delta_a * p.hbar * p.hbar / (ha * ha);
  const double kb = -0.5 * p.delta_b * p.hbar * p.hbar / (hb * hb);
  std::vector<Eigen::Triplet<cplx>> t;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double a = pa(i), b = pb(j);
      const double v = 0.5 * K * a * a + p.lambda_a / 24.0 * std::pow(a, 4) +
                       0.5 * (p.h_x * a * a - p.h_z) * b * b + p.lambda_b / 24.0 * std::pow(b, 4);
      t.emplace_back(idx(i, j), idx(i, j), v + (ka + kb) * st[0]);
      for (int d = 1; d <= 2; ++d) {
        for (int s : {-d, d}) {
          if (i + s >= 0 && i + s < grid) t.emplace_back(idx(i, j), idx(i + s, j), ka * st[d]);
          if (j + s >= 0 && j + s < grid) t.emplace_back(idx(i, j), idx(i, j + s), kb * st[d]);
        }
      }
    }
  }
  const Eigen::Index n = Eigen::Index(grid) * grid;
  SparseMatrixXc h(n, n);
  h.setFromTriplets(t.begin(), t.end());
  auto basis = make_basis("twa_site", n);
  GroundStateOptions go;
  go.tol = 1e-10;
  const GroundState gs = ground_state(SparseOperator(basis, h, true), go);
  Eigen::VectorXd psi = gs.state.amplitudes().real();
  if (psi.sum() < 0) psi = -psi;

  SiteGaussian g;
  g.energy = gs.energy;
  double m1 = 0, m2a = 0, m2b = 0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double w = psi(idx(i, j)) * psi(idx(i, j));
      m1 += w * pa(i);
      m2a += w * pa(i) * pa(i);
      m2b += w * pb(j) * pb(j);
    }
  }
  g.mean_a = m1;
  g.var_phi_a = m2a - m1 * m1;
  g.var_phi_b = m2b;
  g.var_pi_a = p.hbar * p.hbar / (4.0 * g.var_phi_a);
  g.var_pi_b = p.hbar * p.hbar / (4.0 * g.var_phi_b);
  double ov = 0.0, norm = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double da = pa(i) - g.mean_a, db = pb(j);
      const double gv = std::exp(-da * da / (4.0 * g.var_phi_a) - db * db / (4.0 * g.var_phi_b));
      ov += gv * psi(idx(i, j));
      norm += gv * gv;
    }
  }
  g.fidelity = ov * ov / norm;
  return g;
}

FieldEnsemble::FieldEnsemble(int l, Eigen::Index samples)
    : L(l),
      phi_a(Eigen::ArrayXXd::Zero(samples, l * l)),
      pi_a(Eigen::ArrayXXd::Zero(samples, l * l)),
      phi_b(Eigen::ArrayXXd::Zero(samples, l * l)),
      pi_b(Eigen::ArrayXXd::Zero(samples, l * l)) {}

bool FieldEnsemble::finite() const {
  return phi_a.allFinite() && pi_a.allFinite() && phi_b.allFinite() && pi_b.allFinite();
}

FieldEnsemble sample_wigner(const TwaParams& p, const SiteGaussian& g, long first, long count) {
  FieldEnsemble e(p.L, count);
  e.K = p.k_start;
  const double sa = std::sqrt(g.var_phi_a), spa = std::sqrt(g.var_pi_a);
  const double sb = std::sqrt(g.var_phi_b), spb = std::sqrt(g.var_pi_b);
  for (long s = 0; s < count; ++s) {
    std::seed_seq seq{std::uint64_t(p.seed), std::uint64_t(first + s)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> n01;
    const double sign = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
    for (int i = 0; i < e.n_sites(); ++i) {
      e.phi_a(s, i) = sign * g.mean_a + sa * n01(rng);
      e.pi_a(s, i) = spa * n01(rng);
      e.phi_b(s, i) = sb * n01(rng);
      e.pi_b(s, i) = spb * n01(rng);
    }
  }
  return e;
}

FieldEnsemble sample_initial_ensemble(const TwaParams& p, long first, long count) {
  p.validate();
  if (count < 0) count = p.n_samples - first;
  return sample_initial_ensemble(p, fit_site_ground_state(p, p.k_start), first, count);
}

FieldEnsemble sample_initial_ensemble(const TwaParams& p, const SiteGaussian& g, long first, long count) {
  FieldEnsemble e = sample_wigner(p, g, first, count);
  const TwaDrive off;
  const int ramp = static_cast<int>(std::ceil(p.burn_in_time / p.dt));
  for (int n = 0; n < ramp; ++n) {
    const double frac = (n + 0.5) / ramp;
    step(p, e, p.k_start, p.k_start, p.burn_in_time / ramp, off, frac * p.f_a, frac * p.f_b);
  }
  const double settle = p.settle_periods * 2.0 * M_PI / p.h_x;
  const int ns = static_cast<int>(std::ceil(settle / p.dt));
  for (int n = 0; n < ns; ++n) step(p, e, p.k_start, p.k_start, settle / ns, off, p.f_a, p.f_b);
  const Eigen::ArrayXd en = energy(p, e, p.k_start, p.f_a, p.f_b);
  for (Eigen::Index s = 0; s < en.size(); ++s) {
    if (!std::isfinite(en(s)) || std::abs(en(s)) > 1e8 * e.n_sites())
      throw Error(ErrorCode::BurnInUnstable, "sample " + std::to_string(first + s) + " diverged during burn-in");
  }
  return e;
}

}  // namespace lakes::twa
