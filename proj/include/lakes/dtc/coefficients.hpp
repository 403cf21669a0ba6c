#pragma once

#include "lakes/dtc/model.hpp"

namespace lakes::dtc {

/// First-order coefficient of A = 2 h_x alpha sum starY. The h_z-dropped
/// variant is the one optimized against H_e.
struct FirstOrderAlpha {
  double with_hz = 0.0;
  double without_hz = 0.0;
};
FirstOrderAlpha alpha_first_order(const DtcParams& p);

/// Second-order coefficients for the H_e ansatz (h_z ignored).
struct SecondOrderAlpha {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};
SecondOrderAlpha alpha_second_order(const DtcParams& p);

/// Pulse duration x = sqrt(-2 alpha2 / alpha1); 0 when the ratio is positive.
double pulse_x(const DtcParams& p);

/// -int_0^k_end alpha dK for the h_z-dropped first-order (order 1) or alpha1 (order 2), in units h_x = 1.
double integrated_alpha(int order, double k_end);
/// int_0^inf / int_0^k_end of the same coefficient.
double lambda_f(int order, double k_end = 4.0);
/// pi / (2 arctan(4 sqrt(2/5))).
double lambda_f_first_order_closed_form();

/// Minimizes the normalized trace action || dH + i[A, H] ||^2 / N_v over
/// A = sum_k alpha_k i ad_{H_e}^{2k-1}(dH_e) with Pauli algebra on an
/// lx-by-ly torus. `h` is the Hamiltonian entering the action.
struct TraceFit {
  Eigen::VectorXd alphas;
  double action_per_vertex = 0.0;
};
TraceFit trace_fit(const DtcLattice& lat, const DtcParams& p, int ell, bool include_hz);

}  // namespace lakes::dtc
