#include "lakes/ruby/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lakes/core/error.hpp"

namespace lakes::ruby {

namespace {

constexpr double kTol = 1e-6;

int find_point(const RubyLattice& lat, const std::vector<Eigen::Vector2d>& pts, const Eigen::Vector2d& p) {
  int found = -1;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    if (lat.distance(pts[i], p) < kTol) {
      if (found >= 0) throw Error(ErrorCode::InvalidArgument, "torus too small: ambiguous position");
      found = i;
    }
  }
  return found;
}

}  // namespace

double RubyLattice::distance(const Eigen::Vector2d& p, const Eigen::Vector2d& q) const {
  double best = (p - q).norm();
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      best = std::min(best, (p - q + a * period1 + b * period2).norm());
    }
  }
  return best;
}

int RubyLattice::site_at(const Eigen::Vector2d& p) const {
  for (int i = 0; i < n_sites(); ++i) {
    if (distance(sites[i], p) < kTol) return i;
  }
  return -1;
}

RubyLattice build_lattice(int lx, int ly, double rb_factor) {
  if (lx < 1 || ly < 1) throw Error(ErrorCode::InvalidArgument, "lattice extent must be positive");
  if (!(rb_factor > 1.0 && rb_factor < 1.2)) {
    throw Error(ErrorCode::BadFactor, "rb_factor must lie in (1, 1.2)");
  }
  const double s3 = std::sqrt(3.0);
  const Eigen::Vector2d a1(4.0, 0.0), a2(2.0, 2.0 * s3);
  RubyLattice lat;
  lat.lx = lx;
  lat.ly = ly;
  lat.rb = rb_factor * 2.0;
  lat.period1 = lx * a1;
  lat.period2 = ly * a2;
  if (6 * lx * ly > 64) throw Error(ErrorCode::TooLarge, "at most 64 sites are supported");

  const Eigen::Vector2d dv[3] = {{0.0, 0.0}, {2.0, 0.0}, {1.0, s3}};
  for (int j = 0; j < ly; ++j)
    for (int i = 0; i < lx; ++i)
      for (const auto& d : dv) lat.vertex_positions.push_back(i * a1 + j * a2 + d);

  // up triangle (v0 v1 v2) and the down triangle hanging below-left of v0
  for (int j = 0; j < ly; ++j) {
    for (int i = 0; i < lx; ++i) {
      const Eigen::Vector2d o = i * a1 + j * a2;
      const Eigen::Vector2d v0 = o, v1 = o + dv[1], v2 = o + dv[2];
      const Eigen::Vector2d w1 = o - a1 + dv[1], w2 = o - a2 + dv[2];
      const std::array<std::array<Eigen::Vector2d, 2>, 6> links = {{{v0, v1}, {v1, v2}, {v2, v0},
                                                                    {v0, w1}, {v0, w2}, {w1, w2}}};
      for (const auto& l : links) {
        lat.sites.push_back(0.5 * (l[0] + l[1]));
        lat.site_vertices.push_back({find_point(lat, lat.vertex_positions, l[0]),
                                     find_point(lat, lat.vertex_positions, l[1])});
      }
    }
  }
  const int n = lat.n_sites();

  std::vector<std::vector<int>> incident(lat.vertex_positions.size());
  for (int s = 0; s < n; ++s)
    for (int v : lat.site_vertices[s]) incident[v].push_back(s);
  for (const auto& inc : incident) {
    if (inc.size() != 4) throw Error(ErrorCode::InvalidArgument, "vertex without four links");
    lat.vertices.push_back({inc[0], inc[1], inc[2], inc[3]});
  }

  for (int j = 0; j < ly; ++j) {
    for (int i = 0; i < lx; ++i) {
      const Eigen::Vector2d c = i * a1 + j * a2 + Eigen::Vector2d(3.0, s3);
      Plaquette p;
      for (int k = 0; k < 6; ++k) {
        const double t0 = M_PI / 3.0 * k, t1 = M_PI / 3.0 * (k + 1);
        const Eigen::Vector2d u = c + 2.0 * Eigen::Vector2d(std::cos(t0), std::sin(t0));
        const Eigen::Vector2d w = c + 2.0 * Eigen::Vector2d(std::cos(t1), std::sin(t1));
        const Eigen::Vector2d m = 0.5 * (u + w);
        const Eigen::Vector2d t = 2.0 * m - c;  // apex of the triangle outside the hexagon
        p.side[k] = lat.site_at(m);
        p.left[k] = lat.site_at(0.5 * (u + t));
        p.right[k] = lat.site_at(0.5 * (w + t));
        if (p.side[k] < 0 || p.left[k] < 0 || p.right[k] < 0) {
          throw Error(ErrorCode::InvalidArgument, "plaquette construction failed");
        }
      }
      lat.plaquettes.push_back(p);
    }
  }

  // blockade graph, validated against the distance spectrum and vertex sharing
  std::set<long long> shells;
  lat.neighbor_mask.assign(n, 0);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double d = lat.distance(lat.sites[a], lat.sites[b]);
      shells.insert(std::llround(d * 1e6));
      const auto& ea = lat.site_vertices[a];
      const auto& eb = lat.site_vertices[b];
      const bool share = ea[0] == eb[0] || ea[0] == eb[1] || ea[1] == eb[0] || ea[1] == eb[1];
      const bool blocked = d <= lat.rb;
      if (share != blocked) throw Error(ErrorCode::BadFactor, "blockade radius admits unintended pairs");
      if (blocked) {
        lat.blockade_pairs.emplace_back(a, b);
        lat.neighbor_mask[a] |= std::uint64_t(1) << b;
        lat.neighbor_mask[b] |= std::uint64_t(1) << a;
      }
    }
  }
  for (long long s : shells) {
    const double d = s * 1e-6;
    if (d > 2.0 + kTol && d <= lat.rb) throw Error(ErrorCode::BadFactor, "blockade radius reaches the next shell");
  }
  return lat;
}

std::vector<std::vector<int>> symmetry_group(const RubyLattice& lat) {
  const int n = lat.n_sites();
  const Eigen::Vector2d a1(4.0, 0.0), a2(2.0, 2.0 * std::sqrt(3.0));
  std::vector<std::vector<int>> group;
  for (int inv = 0; inv < 2; ++inv) {
    for (int j = 0; j < lat.ly; ++j) {
      for (int i = 0; i < lat.lx; ++i) {
        std::vector<int> perm(n);
        for (int s = 0; s < n; ++s) {
          const Eigen::Vector2d p = (inv ? -lat.sites[s] : lat.sites[s]) + i * a1 + j * a2;
          perm[s] = lat.site_at(p);
          if (perm[s] < 0) throw Error(ErrorCode::GroupActionInvalid, "image is not a lattice site");
        }
        std::vector<int> seen(perm);
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
          throw Error(ErrorCode::GroupActionInvalid, "group element is not a permutation");
        }
        for (const auto& [a, b] : lat.blockade_pairs) {
          if (!((lat.neighbor_mask[perm[a]] >> perm[b]) & 1)) {
            throw Error(ErrorCode::GroupActionInvalid, "blockade pair not preserved");
          }
        }
        group.push_back(std::move(perm));
      }
    }
  }
  return group;
}

std::uint64_t permute_config(std::uint64_t c, const std::vector<int>& perm) {
  std::uint64_t out = 0;
  while (c) {
    const int s = __builtin_ctzll(c);
    out |= std::uint64_t(1) << perm[s];
    c &= c - 1;
  }
  return out;
}

}  // namespace lakes::ruby
