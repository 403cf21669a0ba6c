#pragma once

#include <vector>

#include "lakes/ruby/basis.hpp"

namespace lakes::ruby {

/// (-1)^(occupied links at vertex v).
int gauss_value(const RubyLattice& lat, Config c, int v);
/// Every vertex carries exactly one dimer.
bool is_covering(const RubyLattice& lat, Config c);
/// Image of c under the plaquette flip. Not necessarily blockaded.
Config wilson_image(const Plaquette& p, Config c);

struct RubyOperators {
  SpacePtr space;
  SparseOperator pxp;
  SparseOperator pyp;
  SparseOperator n_tot;
  SparseOperator gauss_sum;    // sum_v G_v
  SparseOperator wilson_sum;   // sum_p P W_p P
  SparseOperator gauss_proj;   // projector on dimer coverings
  // only filled on an unreduced space
  std::vector<SparseOperator> gauss;
  std::vector<SparseOperator> wilson;

  /// H = (Omega/2) PXP - delta N.
  SparseOperator hamiltonian(double omega, double delta) const;
};

RubyOperators build_operators(SpacePtr space);

/// Equal-weight, equal-phase superposition of all dimer coverings.
StateVector rvb_state(const RubySpace& space);

/// Zero amplitudes outside the covering subspace and renormalize.
StateVector gauss_projector_apply(const RubyOperators& ops, const StateVector& psi);

/// Lattice-averaged <G_v>, <W_p> and <W_p> of the Gauss-projected state.
struct Stabilizers {
  double gauss = 0.0;
  double wilson = 0.0;
  double wilson_projected = 0.0;
  double covering_weight = 0.0;
};
Stabilizers stabilizers(const RubyOperators& ops, const VectorXc& psi);

}  // namespace lakes::ruby
