#include "lakes/dtc/lattice.hpp"

namespace lakes::dtc {

DtcLattice::DtcLattice(int lx, int ly) : lx_(lx), ly_(ly) {
  if (lx < 2 || ly < 2) throw Error(ErrorCode::BadFactor, "torus needs Lx, Ly >= 2");
  if (2 * lx * ly > 128) throw Error(ErrorCode::TooLarge, "at most 128 links");
  for (int y = 0; y < ly; ++y) {
    for (int x = 0; x < lx; ++x) {
      stars_.push_back({h_link(x, y), h_link(x - 1, y), v_link(x, y), v_link(x, y - 1)});
      plaquettes_.push_back({h_link(x, y), h_link(x, y + 1), v_link(x, y), v_link(x + 1, y)});
    }
  }
}

int DtcLattice::vertex(int x, int y) const {
  x = ((x % lx_) + lx_) % lx_;
  y = ((y % ly_) + ly_) % ly_;
  return y * lx_ + x;
}

int DtcLattice::h_link(int x, int y) const { return 2 * vertex(x, y); }
int DtcLattice::v_link(int x, int y) const { return 2 * vertex(x, y) + 1; }

PauliString DtcLattice::gauss(int v) const {
  PauliString p;
  for (int l : stars_[v]) p.z |= bit(l);
  return p;
}

PauliString DtcLattice::wilson(int p) const {
  PauliString s;
  for (int l : plaquettes_[p]) s.x |= bit(l);
  return s;
}

}  // namespace lakes::dtc
