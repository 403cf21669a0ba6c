#pragma once

#include "lakes/ruby/operators.hpp"

namespace lakes::ruby {

/// Lake-size estimates in units of the kagome lattice constant.
struct LakeMetrics {
  double epsilon = 0.0;  // <H_stab> / N_q
  double d_min = 0.0;    // 1/sqrt(epsilon), clipped to sqrt(N_q)
  double l_lake = 0.0;   // 2 d_min
  double n_e = 0.0;      // (1 + <G_v>)/2
  double l_e = 0.0;      // 2/sqrt(n_e), infinite when n_e = 0
  bool clipped = false;
};

/// H_stab = sum_v (1 + G_v)/2 + sum_p (1 - W_p)/2 with lattice-averaged G_v, W_p.
LakeMetrics lake_metrics(const RubyOperators& ops, const VectorXc& psi);
LakeMetrics lake_metrics(double gauss, double wilson, int n_vertices, int n_plaquettes, int n_qubits);

}  // namespace lakes::ruby
