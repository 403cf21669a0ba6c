#include "lakes/twa/sweep.hpp"

#include <cmath>

#include "lakes/core/error.hpp"
#include "lakes/core/optimize.hpp"
#include "lakes/core/parallel.hpp"

namespace lakes::twa {

namespace {

struct Mode {
  double c, s;
  const Eigen::ArrayXXd *phi, *pi;
};

Mode mode(const TwaParams& p, const FieldEnsemble& e, Sector sec) {
  if (sec == Sector::A) return {std::pow(p.k_end / (4.0 * p.delta_a), 0.25), std::sqrt(p.k_end / p.delta_a), &e.phi_a, &e.pi_a};
  return {std::pow(p.h_z / (4.0 * p.delta_b), 0.25), std::sqrt(p.h_z / p.delta_b), &e.phi_b, &e.pi_b};
}

OrderParameter reduce(const Eigen::ArrayXcd& v) {
  OrderParameter o;
  const double n = static_cast<double>(v.size());
  o.value = v.sum() / n;
  if (v.size() > 1) {
    o.se_re = std::sqrt((v.real() - o.value.real()).square().sum() / (n - 1) / n);
    o.se_im = std::sqrt((v.imag() - o.value.imag()).square().sum() / (n - 1) / n);
  }
  return o;
}

}  // namespace

Eigen::ArrayXcd order_samples(const TwaParams& p, const FieldEnsemble& e, int rx, int ry, Sector sec) {
  const int L = e.L;
  if (rx < 0 || ry < 0 || rx >= L || ry >= L) throw Error(ErrorCode::InvalidArgument, "r outside the torus");
  const Mode m = mode(p, e, sec);
  Eigen::ArrayXcd out = Eigen::ArrayXcd::Zero(e.n_samples());
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      const int i = y * L + x, j = ((y + ry) % L) * L + (x + rx) % L;
      // conj(a_j) a_i with a = c (phi + i Pi / s)
      const Eigen::ArrayXd pj = m.phi->col(j), qj = m.pi->col(j) / m.s;
      const Eigen::ArrayXd pi = m.phi->col(i), qi = m.pi->col(i) / m.s;
      out.real() += pj * pi + qj * qi;
      out.imag() += pj * qi - qj * pi;
    }
  }
  return out * (m.c * m.c / (L * L));
}

OrderParameter order_parameter(const TwaParams& p, const FieldEnsemble& e, int rx, int ry, Sector s) {
  return reduce(order_samples(p, e, rx, ry, s));
}

CondensedLimits condensed_limits(const TwaParams& p) {
  CondensedLimits c;
  c.a = std::sqrt(p.k_end / (4.0 * p.delta_a)) * 6.0 * std::max(0.0, -p.k_start) / p.lambda_a;
  c.b = std::sqrt(p.h_z / (4.0 * p.delta_b)) * 6.0 * p.h_z / p.lambda_b;
  return c;
}

TwaDrive make_drive(const TwaAlphaTable& table, double lambda_f) {
  TwaDrive d;
  d.on = true;
  d.lambda_f = lambda_f;
  d.alpha = [table](double K) { return table.at(K); };
  return d;
}

void sweep_ensemble(const TwaParams& p, FieldEnsemble& e, double total_time, const TwaDrive& drive) {
  // at least 400 steps so that the drive resolves alpha(K) in fast sweeps
  const int n = std::max(400, static_cast<int>(std::ceil(total_time / p.dt)));
  TwaDrive d = drive;
  d.k_dot = (p.k_end - p.k_start) / total_time;
  for (int s = 0; s < n; ++s) {
    const double k0 = p.k_start + (p.k_end - p.k_start) * s / n;
    const double k1 = p.k_start + (p.k_end - p.k_start) * (s + 1) / n;
    step(p, e, k0, k1, total_time / n, d, p.f_a, p.f_b);
  }
  if (!e.finite()) throw Error(ErrorCode::NoConvergence, "TWA trajectory diverged");
}

std::vector<TwaPoint> run_twa_sweep(const TwaParams& p, const std::vector<double>& times, const TwaDrive& drive,
                                    const TwaSweepOptions& opts) {
  p.validate();
  if (times.empty()) throw Error(ErrorCode::InvalidArgument, "empty T list");
  for (double T : times)
    if (!(T > 0)) throw Error(ErrorCode::InvalidArgument, "sweep times must be positive");
  const long batch = std::max(1L, opts.batch);
  const long n_batches = (p.n_samples + batch - 1) / batch;
  std::vector<Eigen::ArrayXcd> va(times.size(), Eigen::ArrayXcd(p.n_samples));
  std::vector<Eigen::ArrayXcd> vb(times.size(), Eigen::ArrayXcd(p.n_samples));
  const SiteGaussian g = fit_site_ground_state(p, p.k_start);
  parallel_for(static_cast<std::size_t>(n_batches), opts.threads, [&](std::size_t bi) {
    const long first = static_cast<long>(bi) * batch;
    const long count = std::min(batch, p.n_samples - first);
    const FieldEnsemble start = sample_initial_ensemble(p, g, first, count);
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
      FieldEnsemble e = start;
      sweep_ensemble(p, e, times[ti], drive);
      va[ti].segment(first, count) = order_samples(p, e, opts.rx, opts.ry, Sector::A);
      vb[ti].segment(first, count) = order_samples(p, e, opts.rx, opts.ry, Sector::B);
    }
  });
  std::vector<TwaPoint> out;
  for (std::size_t ti = 0; ti < times.size(); ++ti) out.push_back({times[ti], reduce(va[ti]), reduce(vb[ti])});
  return out;
}

TwaLambdaTune tune_lambda_f(const TwaParams& p, const TwaAlphaTable& table, double total_time, double lo, double hi,
                            long n_tune, const TwaSweepOptions& opts, double tol) {
  TwaParams tp = p;
  tp.seed = p.seed ^ 0x7a11e57a11e5ULL;
  const long batch = std::max(1L, opts.batch);
  const long nb = (n_tune + batch - 1) / batch;
  const SiteGaussian g = fit_site_ground_state(tp, tp.k_start);
  std::vector<FieldEnsemble> start(nb);
  parallel_for(static_cast<std::size_t>(nb), opts.threads, [&](std::size_t i) {
    const long first = static_cast<long>(i) * batch;
    start[i] = sample_initial_ensemble(tp, g, first, std::min(batch, n_tune - first));
  });
  auto f = [&](double lf) {
    const TwaDrive d = make_drive(table, lf);
    std::vector<Eigen::ArrayXcd> v(nb);
    parallel_for(static_cast<std::size_t>(nb), opts.threads, [&](std::size_t i) {
      FieldEnsemble e = start[i];
      sweep_ensemble(tp, e, total_time, d);
      v[i] = order_samples(tp, e, opts.rx, opts.ry, Sector::A);
    });
    std::complex<double> sum = 0.0;
    for (const auto& x : v) sum += x.sum();
    return std::abs(sum) / static_cast<double>(n_tune);
  };
  const ScalarMin m = golden_section(f, lo, hi, tol);
  return {m.x, m.f, m.evaluations};
}

}  // namespace lakes::twa
