#include "lakes/twa/dynamics.hpp"

#include <cmath>

#include "lakes/core/error.hpp"

namespace lakes::twa {

namespace {

void drive_flow(const TwaParams& p, FieldEnsemble& e, const TwaDrive& drive, double k0, double k1) {
  if (!drive.on || drive.lambda_f == 0.0 || k0 == k1) return;
  // dphi/dt = eps phi, dPi/dt = -eps Pi with eps dt = lambda_f delta_a alpha dK
  const double s = drive.lambda_f * p.delta_a * drive.alpha(0.5 * (k0 + k1)) * (k1 - k0);
  e.phi_a *= std::exp(s);
  e.pi_a *= std::exp(-s);
}

}  // namespace

void forces(const TwaParams& p, const FieldEnsemble& e, double K, double f_a, double f_b, Eigen::ArrayXXd& fa,
            Eigen::ArrayXXd& fb) {
  const Eigen::Index n = e.phi_a.rows();
  const int L = e.L;
  fa.resize(n, e.phi_a.cols());
  fb.resize(n, e.phi_b.cols());
  const double la = p.lambda_a / 6.0, lb = p.lambda_b / 6.0, hx = p.h_x, hz = p.h_z;
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      const int i = y * L + x;
      const int nb[4] = {y * L + (x + 1) % L, y * L + (x + L - 1) % L, ((y + 1) % L) * L + x, ((y + L - 1) % L) * L + x};
      const double* a = &e.phi_a(0, i);
      const double* b = &e.phi_b(0, i);
      const double *a0 = &e.phi_a(0, nb[0]), *a1 = &e.phi_a(0, nb[1]), *a2 = &e.phi_a(0, nb[2]), *a3 = &e.phi_a(0, nb[3]);
      const double *b0 = &e.phi_b(0, nb[0]), *b1 = &e.phi_b(0, nb[1]), *b2 = &e.phi_b(0, nb[2]), *b3 = &e.phi_b(0, nb[3]);
      double* oa = &fa(0, i);
      double* ob = &fb(0, i);
      for (Eigen::Index r = 0; r < n; ++r) {
        const double aa = a[r] * a[r], bb = b[r] * b[r];
        oa[r] = a[r] * (K + la * aa + hx * bb + 4.0 * f_a) - f_a * (a0[r] + a1[r] + a2[r] + a3[r]);
        ob[r] = b[r] * (hx * aa - hz + lb * bb + 4.0 * f_b) - f_b * (b0[r] + b1[r] + b2[r] + b3[r]);
      }
    }
  }
}

Derivatives equations_of_motion(const TwaParams& p, const FieldEnsemble& e, double K, const TwaDrive& drive) {
  Derivatives d;
  Eigen::ArrayXXd fa, fb;
  forces(p, e, K, p.f_a, p.f_b, fa, fb);
  const double eps = drive.on ? drive.rate() * p.delta_a * drive.alpha(K) : 0.0;
  d.phi_a = p.delta_a * e.pi_a + eps * e.phi_a;
  d.pi_a = -fa - eps * e.pi_a;
  d.phi_b = p.delta_b * e.pi_b;
  d.pi_b = -fb;
  return d;
}

Eigen::ArrayXd energy(const TwaParams& p, const FieldEnsemble& e, double K, double f_a, double f_b) {
  const Eigen::ArrayXXd a2 = e.phi_a.square(), b2 = e.phi_b.square();
  Eigen::ArrayXXd dens = 0.5 * p.delta_a * e.pi_a.square() + 0.5 * p.delta_b * e.pi_b.square() + 0.5 * K * a2 +
                         p.lambda_a / 24.0 * a2.square() + 0.5 * (p.h_x * a2 - p.h_z) * b2 +
                         p.lambda_b / 24.0 * b2.square();
  const int L = e.L;
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      const int i = y * L + x, r = y * L + (x + 1) % L, u = ((y + 1) % L) * L + x;
      dens.col(i) += 0.5 * f_a * ((e.phi_a.col(i) - e.phi_a.col(r)).square() + (e.phi_a.col(i) - e.phi_a.col(u)).square());
      dens.col(i) += 0.5 * f_b * ((e.phi_b.col(i) - e.phi_b.col(r)).square() + (e.phi_b.col(i) - e.phi_b.col(u)).square());
    }
  }
  return dens.rowwise().sum();
}

void step(const TwaParams& p, FieldEnsemble& e, double k0, double k1, double dt, const TwaDrive& drive, double f_a,
          double f_b) {
  const double kh = 0.5 * (k0 + k1);
  Eigen::ArrayXXd fa, fb;
  drive_flow(p, e, drive, k0, kh);
  e.phi_a += 0.5 * dt * p.delta_a * e.pi_a;
  e.phi_b += 0.5 * dt * p.delta_b * e.pi_b;
  forces(p, e, kh, f_a, f_b, fa, fb);
  e.pi_a -= dt * fa;
  e.pi_b -= dt * fb;
  e.phi_a += 0.5 * dt * p.delta_a * e.pi_a;
  e.phi_b += 0.5 * dt * p.delta_b * e.pi_b;
  drive_flow(p, e, drive, kh, k1);
  e.K = k1;
}

AlphaEstimate classical_alpha(const TwaParams& p, const FieldEnsemble& e, double K) {
  Eigen::ArrayXXd fa, fb;
  forces(p, e, K, p.f_a, p.f_b, fa, fb);
  // G = dH/dK + {H, A} = c + beta g with beta = delta_a alpha
  // connected moments: the constant part of c cannot be cancelled and only adds noise
  Eigen::ArrayXd c = 0.5 * e.phi_a.square().rowwise().sum();
  Eigen::ArrayXd g = (e.phi_a * fa - p.delta_a * e.pi_a.square()).rowwise().sum();
  c -= c.mean();
  g -= g.mean();
  const double gg = g.square().mean();
  AlphaEstimate out;
  if (!(gg > 1e-300)) {
    out.degenerate = true;
    return out;
  }
  out.alpha = -(c * g).mean() / gg / p.delta_a;
  return out;
}

double TwaAlphaTable::at(double K) const {
  if (ks.empty()) throw Error(ErrorCode::InvalidArgument, "empty alpha table");
  if (K <= ks.front()) return alphas.front();
  if (K >= ks.back()) return alphas.back();
  const double h = (ks.back() - ks.front()) / (ks.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>((K - ks.front()) / h), ks.size() - 2);
  const double w = (K - ks[i]) / (ks[i + 1] - ks[i]);
  return (1 - w) * alphas[i] + w * alphas[i + 1];
}

TwaAlphaTable build_alpha_table(const TwaParams& p, long n_ref, double t_ref, int points) {
  if (points < 2) throw Error(ErrorCode::InvalidArgument, "alpha table needs >= 2 points");
  TwaParams ref = p;
  ref.seed = p.seed ^ 0x5eed5eed5eedULL;
  FieldEnsemble e = sample_initial_ensemble(ref, 0, n_ref);
  TwaAlphaTable t;
  const double dk = (p.k_end - p.k_start) / (points - 1);
  const double dt_seg = t_ref / (points - 1);
  const int sub = std::max(1, static_cast<int>(std::ceil(dt_seg / p.dt)));
  const TwaDrive off;
  for (int n = 0; n < points; ++n) {
    const double K = p.k_start + n * dk;
    const AlphaEstimate a = classical_alpha(p, e, K);
    t.ks.push_back(K);
    t.alphas.push_back(a.alpha);
    t.degenerate.push_back(a.degenerate);
    if (n + 1 == points) break;
    for (int s = 0; s < sub; ++s) {
      step(p, e, K + dk * s / sub, K + dk * (s + 1) / sub, dt_seg / sub, off, p.f_a, p.f_b);
    }
  }
  return t;
}

}  // namespace lakes::twa
