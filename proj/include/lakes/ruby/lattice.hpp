#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace lakes::ruby {

/// One hexagon of the kagome lattice: the six links on its boundary and, for
/// each, the two other links of the triangle that link belongs to.
struct Plaquette {
  std::array<int, 6> side;
  std::array<int, 6> left;
  std::array<int, 6> right;
};

/// Ruby lattice as the links of a kagome lattice on a torus. Lengths are in
/// units of the nearest ruby spacing a, so kagome bonds have length 2a.
struct RubyLattice {
  int lx = 0, ly = 0;
  double rb = 0.0;
  Eigen::Vector2d period1, period2;

  std::vector<Eigen::Vector2d> sites;                 // link midpoints
  std::vector<std::array<int, 2>> site_vertices;      // kagome endpoints
  std::vector<Eigen::Vector2d> vertex_positions;
  std::vector<std::array<int, 4>> vertices;           // incident links
  std::vector<Plaquette> plaquettes;
  std::vector<std::pair<int, int>> blockade_pairs;    // i < j
  std::vector<std::uint64_t> neighbor_mask;           // blockade neighbours per site

  int n_sites() const { return static_cast<int>(sites.size()); }
  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_plaquettes() const { return static_cast<int>(plaquettes.size()); }

  double distance(const Eigen::Vector2d& p, const Eigen::Vector2d& q) const;
  /// Index of the site at (torus-equivalent) position p, or -1.
  int site_at(const Eigen::Vector2d& p) const;
};

/// Throws BadFactor if rb_factor is outside (1, 1.2) or admits pairs beyond
/// links that share a kagome vertex.
RubyLattice build_lattice(int lx, int ly, double rb_factor = 1.01);

/// Site permutations for translations x inversion about the origin vertex.
/// Element 0 is the identity. Throws GroupActionInvalid if an image is not a
/// site or a blockade pair is not preserved.
std::vector<std::vector<int>> symmetry_group(const RubyLattice& lat);

/// Apply a site permutation to a bit configuration.
std::uint64_t permute_config(std::uint64_t c, const std::vector<int>& perm);

}  // namespace lakes::ruby
