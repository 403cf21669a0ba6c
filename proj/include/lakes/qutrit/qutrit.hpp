#pragma once

#include <string>
#include <vector>

#include "lakes/core/agp.hpp"
#include "lakes/core/evolve.hpp"

namespace lakes::qutrit {

/// Basis order {|+1>, |0>, |-1>}.
struct QutritParams {
  double K = 0.0;
  double h_x = 1.0;
  double h_z = 0.0;
};

const BasisHandle& basis();

MatrixXc spin_x();
MatrixXc spin_z();

/// H = -K Z^2 - h_x X - h_z Z.
SparseOperator hamiltonian(const QutritParams& p);
/// dH/dK = -Z^2.
SparseOperator dk_hamiltonian();

std::vector<std::string> warnings(const QutritParams& p);

/// alpha = -1 / (4 h_x^2 + h_z^2 + K^2).
double first_order_alpha(const QutritParams& p);
/// A = i h_x alpha [X, Z^2].
SparseOperator first_order_agp(const QutritParams& p);

/// Floquet realization of the first-order drive:
///   H_F = (1 + (w/w0) cos wt) H + Kdot beta sin(wt) dH/dK,  beta = 2 w0 alpha.
SparseOperator floquet_hamiltonian(double t, const QutritParams& p, double k_dot, double omega,
                                   double omega0);

/// Drop the |0> amplitude and renormalize.
StateVector projected_target(const StateVector& psi0);

enum class Drive { None, FirstOrder, Exact, Gapped, StateSpecific, Floquet };

struct SweepSpec {
  double h_x = 1.0;
  double h_z = 1.0 / 15.0;
  double k_start = -20.0;
  double k_end = 20.0;
  double total_time = 1.0;
  Drive drive = Drive::None;
  double delta = 0.0;        // gapped cutoff
  Eigen::Index level = 2;    // state-specific level
  double lambda_f = 1.0;
  double omega = 1e4;        // in units of h_x
  double omega0 = 10.0;
  double dt = 0.0;
};

struct SweepResult {
  StateVector final_state;
  double overlap_target = 0.0;  // |<P psi0 | psi(T)>|
  double overlap_ground = 0.0;  // |<gs(K_end) | psi(T)>|
};

SweepResult sweep(const SweepSpec& spec);

}  // namespace lakes::qutrit
