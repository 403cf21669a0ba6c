#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lakes/core/optimize.hpp"
#include "lakes/ruby/sweep.hpp"

namespace lakes::ruby {

struct PulseCycle {
  double x = 0.0;
  double y = 0.0;
};

struct PulseSequence {
  std::vector<PulseCycle> cycles;

  int n_c() const { return static_cast<int>(cycles.size()); }
  /// Omega * (total laser time): the PXP pulses of a cycle rotate by 4|x|
  /// and the PYP pulses by 2|y| under H = (Omega/2) P{X,Y}P.
  double drive_time() const;
  Eigen::VectorXd packed() const;
  static PulseSequence unpack(const Eigen::VectorXd& v);
};

/// U_c = e^{-ix PXP} e^{-iy PYP} e^{2ix PXP} e^{-iy PYP} e^{-ix PXP} applied in place.
void apply_cycle(const RubyOperators& ops, const PulseCycle& c, VectorXc& psi, const KrylovOptions& opts = {});
StateVector apply_sequence(const RubyOperators& ops, const PulseSequence& seq, const StateVector& psi,
                           const KrylovOptions& opts = {});

/// Dense U_c for small spaces.
MatrixXc cycle_unitary(const RubyOperators& ops, const PulseCycle& c);

/// Leading BCH term 2y sum_k (-ix)^{2k-2}/(2k-2)! ad_PXP^{2k-2}(PYP), truncated after
/// `terms` values of k, or resummed to y (e^{-ix PXP} PYP e^{ix PXP} + h.c. conjugate) when terms <= 0.
MatrixXc cycle_effective_hamiltonian(const RubyOperators& ops, const PulseCycle& c, int terms = 0);

/// Principal logarithm: returns H with U = exp(-iH) for a unitary U.
MatrixXc unitary_log(const MatrixXc& u);

/// x = sqrt(-2 alpha_2 / alpha_1) from the restricted ell = 2 fit at each
/// cycle's delta (start of its slice of the sweep range); 0 where the ratio is positive.
PulseSequence heuristic_sequence(const SweepContext& ctx, int n_c, double y0 = -0.1);

struct PulseOptions {
  int restarts = 8;
  std::uint64_t seed = 1;
  double y0 = -0.1;
  double x_spread = 0.3;
  double y_spread = 0.1;
  SimplexOptions simplex{};
  int threads = 1;
  std::optional<PulseSequence> start;  // replaces the heuristic guess
};

struct PulseResult {
  PulseSequence sequence;
  StateVector final_state;
  SweepObservables obs;
  std::vector<SweepObservables> trajectory;  // after each cycle, index 0 = initial
  bool stalled = false;
  int evaluations = 0;
};

/// Maximize <N>/N_sites after the sequence, from the delta_start ground state.
PulseResult optimize_pulse_sequence(const SweepContext& ctx, int n_c, const PulseOptions& opts = {});

/// Observables of ctx.initial_state() after `seq`, one entry per cycle.
PulseResult run_pulse_sequence(const SweepContext& ctx, const PulseSequence& seq);

}  // namespace lakes::ruby
