#include "lakes/ruby/operators.hpp"

#include <cmath>

namespace lakes::ruby {

namespace {

inline bool bit(Config c, int s) { return (c >> s) & 1; }
inline Config flip(Config c, int s) { return c ^ (Config(1) << s); }

bool flip_allowed(const RubyLattice& lat, Config c, int s) {
  return bit(c, s) || (c & lat.neighbor_mask[s]) == 0;
}

}  // namespace

int gauss_value(const RubyLattice& lat, Config c, int v) {
  int occ = 0;
  for (int s : lat.vertices[v]) occ += bit(c, s);
  return occ % 2 ? -1 : 1;
}

bool is_covering(const RubyLattice& lat, Config c) {
  for (int v = 0; v < lat.n_vertices(); ++v) {
    if (gauss_value(lat, c, v) != -1) return false;
  }
  return true;
}

Config wilson_image(const Plaquette& p, Config c) {
  for (int k = 0; k < 6; ++k) {
    const bool s = bit(c, p.side[k]), l = bit(c, p.left[k]), r = bit(c, p.right[k]);
    const int count = s + l + r;
    if (count > 1) continue;  // not a single-triangle dimer state; left as is
    if (count == 0 || s) {
      c = flip(c, p.side[k]);
    } else {
      c = flip(flip(c, p.left[k]), p.right[k]);
    }
  }
  return c;
}

RubyOperators build_operators(SpacePtr space) {
  const RubyLattice& lat = space->lattice();
  const int n = lat.n_sites();
  RubyOperators ops;
  ops.space = space;

  ops.pxp = space->build(
      [&](Config c, auto& out) {
        for (int s = 0; s < n; ++s)
          if (flip_allowed(lat, c, s)) out.emplace_back(flip(c, s), 1.0);
      },
      true);
  // Y|0> = i|1>, Y|1> = -i|0> with bit 1 the Rydberg state
  ops.pyp = space->build(
      [&](Config c, auto& out) {
        for (int s = 0; s < n; ++s)
          if (flip_allowed(lat, c, s)) out.emplace_back(flip(c, s), bit(c, s) ? cplx(0, -1) : cplx(0, 1));
      },
      true);
  ops.n_tot = space->diagonal([](Config c) { return static_cast<double>(__builtin_popcountll(c)); });
  ops.gauss_sum = space->diagonal([&](Config c) {
    double g = 0.0;
    for (int v = 0; v < lat.n_vertices(); ++v) g += gauss_value(lat, c, v);
    return g;
  });
  ops.wilson_sum = space->build(
      [&](Config c, auto& out) {
        for (const auto& p : lat.plaquettes) out.emplace_back(wilson_image(p, c), 1.0);
      },
      true);
  ops.gauss_proj = space->diagonal([&](Config c) { return is_covering(lat, c) ? 1.0 : 0.0; });

  if (!space->is_symmetric()) {
    for (int v = 0; v < lat.n_vertices(); ++v) {
      ops.gauss.push_back(space->diagonal([&, v](Config c) { return double(gauss_value(lat, c, v)); }));
    }
    for (const auto& p : lat.plaquettes) {
      ops.wilson.push_back(space->build([&](Config c, auto& out) { out.emplace_back(wilson_image(p, c), 1.0); }, true));
    }
  }
  return ops;
}

SparseOperator RubyOperators::hamiltonian(double omega, double delta) const {
  return SparseOperator(space->basis(), 0.5 * omega * pxp.matrix() - delta * n_tot.matrix(), true);
}

StateVector rvb_state(const RubySpace& space) {
  const RubyLattice& lat = space.lattice();
  bool any = false;
  for (Eigen::Index i = 0; i < space.dim() && !any; ++i) any = is_covering(lat, space.rep(i));
  if (!any) throw Error(ErrorCode::NoCoverings, "lattice has no dimer covering");
  return space.state_from([&](Config c) { return is_covering(lat, c) ? cplx(1.0) : cplx(0.0); });
}

StateVector gauss_projector_apply(const RubyOperators& ops, const StateVector& psi) {
  require_same_basis(ops.space->basis(), psi.basis());
  StateVector out(psi.basis(), ops.gauss_proj.matrix() * psi.amplitudes());
  if (out.norm() < 1e-300) throw Error(ErrorCode::ZeroProjection, "state has no weight on dimer coverings");
  out.normalize();
  return out;
}

Stabilizers stabilizers(const RubyOperators& ops, const VectorXc& psi) {
  const RubyLattice& lat = ops.space->lattice();
  Stabilizers s;
  const double norm2 = psi.squaredNorm();
  s.gauss = psi.dot(ops.gauss_sum.matrix() * psi).real() / norm2 / lat.n_vertices();
  s.wilson = psi.dot(ops.wilson_sum.matrix() * psi).real() / norm2 / lat.n_plaquettes();
  const VectorXc pg = ops.gauss_proj.matrix() * psi;
  s.covering_weight = pg.squaredNorm() / norm2;
  if (pg.squaredNorm() > 0.0) {
    s.wilson_projected = pg.dot(ops.wilson_sum.matrix() * pg).real() / pg.squaredNorm() / lat.n_plaquettes();
  }
  return s;
}

}  // namespace lakes::ruby
