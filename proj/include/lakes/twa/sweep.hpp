#pragma once

#include <complex>

#include "lakes/twa/dynamics.hpp"

namespace lakes::twa {

enum class Sector { A, B };

struct OrderParameter {
  std::complex<double> value;
  double se_re = 0.0;  // standard errors from the sample variance
  double se_im = 0.0;
  double magnitude() const { return std::abs(value); }
};

/// Lattice- and ensemble-averaged a^dag(R + r) a(R) with mode operators built
/// from the on-site harmonic terms at the end of the sweep.
OrderParameter order_parameter(const TwaParams& p, const FieldEnsemble& e, int rx, int ry, Sector s);

/// Per-sample lattice averages of a^dag(R + r) a(R).
Eigen::ArrayXcd order_samples(const TwaParams& p, const FieldEnsemble& e, int rx, int ry, Sector s);

/// Fully condensed values of the order parameters: phi_a^2 at the k_start
/// minimum and phi_b^2 at the phi_a = 0 minimum, in mode units.
struct CondensedLimits {
  double a = 0.0;
  double b = 0.0;
};
CondensedLimits condensed_limits(const TwaParams& p);

struct TwaPoint {
  double total_time = 0.0;
  OrderParameter a, b;
};

struct TwaSweepOptions {
  int rx = 5, ry = 0;
  int threads = 1;
  long batch = 64;
};

/// Evolves e in place through a linear K sweep of duration T (at least 400 steps).
void sweep_ensemble(const TwaParams& p, FieldEnsemble& e, double total_time, const TwaDrive& drive);

/// Sweeps K linearly from k_start to k_end for each T; every T reuses the same
/// burned-in samples. Reductions run in sample order, independent of threads.
std::vector<TwaPoint> run_twa_sweep(const TwaParams& p, const std::vector<double>& times, const TwaDrive& drive,
                                    const TwaSweepOptions& opts = {});

/// Golden-section minimization of |a order| over lambda_f in [lo, hi] for a fixed T,
/// on n_tune samples from a seed stream disjoint from the production one.
struct TwaLambdaTune {
  double lambda_f = 0.0;
  double a_magnitude = 0.0;
  int evaluations = 0;
};
TwaLambdaTune tune_lambda_f(const TwaParams& p, const TwaAlphaTable& table, double total_time, double lo, double hi,
                            long n_tune = 512, const TwaSweepOptions& opts = {}, double tol = 1e-2);

TwaDrive make_drive(const TwaAlphaTable& table, double lambda_f);

}  // namespace lakes::twa
