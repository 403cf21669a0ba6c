#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace lakes::twa {

/// Two-component Landau-Ginzburg model on an L x L torus. Energies in units of h_x.
struct TwaParams {
  double delta_a = 0.05;
  double delta_b = 0.0002;
  double f_a = 0.1;
  double f_b = 0.01;
  double h_x = 1.0;
  double h_z = 0.2;
  double lambda_a = 100.0;
  double lambda_b = 0.05;
  double hbar = 1.0;
  int L = 10;
  long n_samples = 100000;
  std::uint64_t seed = 1;
  double k_start = -20.0;
  double k_end = 20.0;
  double burn_in_time = 50.0;    // f ramp duration, 1/h_x
  double settle_periods = 10.0;  // extra fixed-f evolution in units of 2 pi / h_x
  double dt = 0.04;

  /// Throws InvalidArgument on non-finite couplings or bad sizes.
  void validate() const;
  int n_sites() const { return L * L; }
};

/// Product-of-Gaussians fit to the single-site (f = 0) ground state at K,
/// localized in the phi_a > 0 well when K < 0.
struct SiteGaussian {
  double mean_a = 0.0;
  double var_phi_a = 0.0, var_pi_a = 0.0;
  double var_phi_b = 0.0, var_pi_b = 0.0;
  double fidelity = 0.0;  // |<gaussian|ground>|^2
  double energy = 0.0;
};

SiteGaussian fit_site_ground_state(const TwaParams& p, double K, int grid = 64);

/// Sample-major field arrays: row = sample, column = site (x + L y).
struct FieldEnsemble {
  int L = 0;
  double K = 0.0;
  Eigen::ArrayXXd phi_a, pi_a, phi_b, pi_b;

  FieldEnsemble() = default;
  FieldEnsemble(int L, Eigen::Index samples);
  Eigen::Index n_samples() const { return phi_a.rows(); }
  int n_sites() const { return L * L; }
  bool finite() const;
};

/// Independent Wigner draws for samples [first, first + count). Every sample
/// uses its own generator seeded from (seed, index), and picks one well sign for
/// all its sites, so results do not depend on batching or thread count.
FieldEnsemble sample_wigner(const TwaParams& p, const SiteGaussian& g, long first, long count);

/// Wigner draws at k_start followed by the gradient-coupling burn-in.
/// Throws BurnInUnstable when a sample's energy leaves the finite range.
FieldEnsemble sample_initial_ensemble(const TwaParams& p, long first = 0, long count = -1);
FieldEnsemble sample_initial_ensemble(const TwaParams& p, const SiteGaussian& g, long first, long count);

}  // namespace lakes::twa
