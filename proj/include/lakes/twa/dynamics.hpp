#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "lakes/twa/ensemble.hpp"

namespace lakes::twa {

/// First-order drive K' lambda_f A with A = delta_a alpha(K) sum phi_a Pi_a.
struct TwaDrive {
  bool on = false;
  std::function<double(double)> alpha;  // alpha(K)
  double lambda_f = 0.0;
  double k_dot = 0.0;

  double rate() const { return on ? k_dot * lambda_f : 0.0; }
};

/// dH/dphi for both fields (gradient terms from nearest-neighbour differences).
void forces(const TwaParams& p, const FieldEnsemble& e, double K, double f_a, double f_b, Eigen::ArrayXXd& fa,
            Eigen::ArrayXXd& fb);

struct Derivatives {
  Eigen::ArrayXXd phi_a, pi_a, phi_b, pi_b;
};

/// Hamilton's equations of H + K' lambda_f A at the final gradient couplings.
Derivatives equations_of_motion(const TwaParams& p, const FieldEnsemble& e, double K, const TwaDrive& drive);

/// Energy of each sample (drive term excluded).
Eigen::ArrayXd energy(const TwaParams& p, const FieldEnsemble& e, double K, double f_a, double f_b);

/// Drift-kick-drift step over [t, t + dt] for K(t) linear between k0 and k1 (force
/// at the midpoint K), with the drive applied as its exact flow (phi_a e^{+s}, Pi_a e^{-s})
/// on both half steps.
void step(const TwaParams& p, FieldEnsemble& e, double k0, double k1, double dt, const TwaDrive& drive,
          double f_a, double f_b);

struct AlphaEstimate {
  double alpha = 0.0;
  bool degenerate = false;
};

/// Minimizes the ensemble mean of G^2, G = dH/dK + {H, A}, over alpha.
AlphaEstimate classical_alpha(const TwaParams& p, const FieldEnsemble& e, double K);

/// alpha(K) on a uniform grid, linearly interpolated and clamped.
struct TwaAlphaTable {
  std::vector<double> ks, alphas;
  std::vector<bool> degenerate;
  double at(double K) const;
};

/// Tracks one reference ensemble (n_ref samples, independent seed stream)
/// through an undriven sweep of duration t_ref and records alpha at `points` K values.
TwaAlphaTable build_alpha_table(const TwaParams& p, long n_ref = 256, double t_ref = 100.0, int points = 81);

}  // namespace lakes::twa
