#pragma once

#include <array>
#include <vector>

#include "lakes/dtc/pauli.hpp"

namespace lakes::dtc {

/// Square-lattice torus with one qubit per link. Vertex (x, y) owns the
/// horizontal link h(x, y) = 2 (y Lx + x) to (x+1, y) and the vertical link
/// v(x, y) = 2 (y Lx + x) + 1 to (x, y+1).
class DtcLattice {
 public:
  DtcLattice(int lx, int ly);

  int lx() const { return lx_; }
  int ly() const { return ly_; }
  int n_links() const { return 2 * lx_ * ly_; }
  int n_vertices() const { return lx_ * ly_; }
  int n_plaquettes() const { return lx_ * ly_; }

  int h_link(int x, int y) const;
  int v_link(int x, int y) const;
  int vertex(int x, int y) const;

  /// Links at vertex v in the order right, left, up, down.
  const std::array<int, 4>& star(int v) const { return stars_[v]; }
  /// Links of the plaquette with lower-left corner (x, y): bottom, top, left, right.
  const std::array<int, 4>& plaquette(int p) const { return plaquettes_[p]; }

  /// G_v = product of Z on the star; W_p = product of X around the plaquette.
  PauliString gauss(int v) const;
  PauliString wilson(int p) const;

 private:
  int lx_, ly_;
  std::vector<std::array<int, 4>> stars_;
  std::vector<std::array<int, 4>> plaquettes_;
};

}  // namespace lakes::dtc
