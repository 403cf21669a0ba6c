#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "lakes/core/evolve.hpp"
#include "lakes/ruby/agp.hpp"

namespace lakes::ruby {

/// Shared, immutable-after-construction data for sweeps on one lattice.
/// Alpha tables are built lazily and cached; access is thread safe.
class SweepContext {
 public:
  SweepContext(RubyOperators ops, std::shared_ptr<const RubyOperators> fit_ops, double omega = 1.0,
               double delta_start = -5.0, double delta_end = 5.0);

  const RubyOperators& ops() const { return ops_; }
  const RubyOperators& fit_ops() const { return *fit_ops_; }
  double omega() const { return omega_; }
  double delta_start() const { return delta_start_; }
  double delta_end() const { return delta_end_; }
  const StateVector& initial_state() const { return psi0_; }
  const StateVector& final_ground_state() const { return gs_end_; }
  const StateVector& rvb() const { return rvb_; }
  int max_occupation() const { return max_occupation_; }
  double energy_scale() const;

  /// Table for the largest ell requested so far is reused for smaller ell.
  std::shared_ptr<const AlphaTable> table(Family family, int ell) const;

 private:
  RubyOperators ops_;
  std::shared_ptr<const RubyOperators> fit_ops_;
  double omega_, delta_start_, delta_end_;
  StateVector psi0_, gs_end_, rvb_;
  int max_occupation_ = 0;
  double pxp_norm_ = 0.0;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, int>, std::shared_ptr<const AlphaTable>> tables_;
};

/// Convenience: lattice (lx, ly) in the symmetric sector, fitted on the
/// (2,2) symmetric sector.
std::shared_ptr<SweepContext> make_sweep_context(int lx, int ly, double omega = 1.0, double delta_start = -5.0,
                                                 double delta_end = 5.0);

struct SweepObservables {
  double rvb_overlap = 0.0;  // |<RVB|psi>|
  double rvb_per_site = 0.0;
  double gs_overlap = 0.0;   // with the ground state at delta_end
  double gs_per_site = 0.0;
  double dimer_density = 0.0;  // <N>/N_sites
  Stabilizers stab;
};

SweepObservables observe(const SweepContext& ctx, const StateVector& psi);

struct SweepRun {
  double total_time = 1.0;
  int ell = 0;  // 0 = undriven
  Family family = Family::Full;
  double lambda_f = 1.0;
  double dt = 0.0;
};

struct SweepOutcome {
  StateVector final_state;
  SweepObservables obs;
};

/// Evolve the delta_start ground state under H(delta) + delta' lambda_f A(delta).
SweepOutcome cd_sweep(const SweepContext& ctx, const SweepRun& run);

struct LambdaTune {
  double lambda_f = 1.0;
  double rvb_overlap = 0.0;
  int evaluations = 0;
};

/// Golden-section maximization of the final RVB overlap over lambda_f in [lo, hi].
LambdaTune lambda_f_tune(const SweepContext& ctx, int ell, Family family, double total_time, double lo = 1.0,
                         double hi = 4.0, double tol = 1e-3);

struct SweepLibrary {
  std::vector<double> times;
  std::vector<StateVector> states;
};

/// Undriven final states over the given T grid (run concurrently).
SweepLibrary build_sweep_library(const SweepContext& ctx, const std::vector<double>& times, int threads = 1);

struct BestMatch {
  double total_time = 0.0;
  double overlap_per_site = 0.0;
  std::size_t index = 0;
};

/// Library member maximizing |<psi_sweep(T)|psi>|^(1/N_d); ties go to smaller T.
BestMatch best_matching_sweep(const StateVector& psi, const SweepLibrary& library);

/// n points log-spaced over [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace lakes::ruby
