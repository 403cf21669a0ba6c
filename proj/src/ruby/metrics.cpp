#include "lakes/ruby/metrics.hpp"

#include <cmath>
#include <limits>

namespace lakes::ruby {

LakeMetrics lake_metrics(double gauss, double wilson, int n_vertices, int n_plaquettes, int n_qubits) {
  LakeMetrics m;
  const double energy = 0.5 * n_vertices * (1.0 + gauss) + 0.5 * n_plaquettes * (1.0 - wilson);
  m.epsilon = std::max(0.0, energy / n_qubits);
  const double cap = std::sqrt(static_cast<double>(n_qubits));
  m.clipped = m.epsilon * cap * cap <= 1.0;
  m.d_min = m.clipped ? cap : 1.0 / std::sqrt(m.epsilon);
  m.l_lake = 2.0 * m.d_min;
  m.n_e = std::max(0.0, 0.5 * (1.0 + gauss));
  m.l_e = m.n_e > 0.0 ? 2.0 / std::sqrt(m.n_e) : std::numeric_limits<double>::infinity();
  return m;
}

LakeMetrics lake_metrics(const RubyOperators& ops, const VectorXc& psi) {
  const RubyLattice& lat = ops.space->lattice();
  const Stabilizers s = stabilizers(ops, psi);
  return lake_metrics(s.gauss, s.wilson, lat.n_vertices(), lat.n_plaquettes(), lat.n_sites());
}

}  // namespace lakes::ruby
