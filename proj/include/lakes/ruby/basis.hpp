#pragma once

#include <functional>
#include <memory>
#include <utility>

#include "lakes/core/state.hpp"
#include "lakes/ruby/lattice.hpp"

namespace lakes::ruby {

using Config = std::uint64_t;

/// All configurations with no blockade pair doubly excited, ascending.
struct BlockadedBasis {
  std::vector<Config> configs;
  int n_sites = 0;

  Eigen::Index size() const { return static_cast<Eigen::Index>(configs.size()); }
  Eigen::Index index_of(Config c) const;  // -1 when absent
};

BlockadedBasis enumerate_blockaded_basis(const RubyLattice& lat, int max_sites = 40);

/// Zero-momentum, inversion-even sector: one state per orbit.
struct SymmetricBasis {
  std::vector<Config> reps;           // smallest config of each orbit, ascending
  std::vector<int> orbit_sizes;
  std::vector<std::int32_t> orbit_of; // per blockaded config
  Eigen::Index size() const { return static_cast<Eigen::Index>(reps.size()); }
};

SymmetricBasis symmetry_reduce(const BlockadedBasis& basis, const std::vector<std::vector<int>>& group);

/// O|c> as a list of (c', amplitude).
using ConfigAction = std::function<void(Config c, std::vector<std::pair<Config, cplx>>& out)>;

/// Hilbert space for ruby operators: the blockaded basis, optionally reduced
/// by the lattice symmetry group.
class RubySpace {
 public:
  static std::shared_ptr<const RubySpace> full(std::shared_ptr<const RubyLattice> lat);
  static std::shared_ptr<const RubySpace> symmetric(std::shared_ptr<const RubyLattice> lat);
  static std::shared_ptr<const RubySpace> with_group(std::shared_ptr<const RubyLattice> lat,
                                                     const std::vector<std::vector<int>>& group);

  const RubyLattice& lattice() const { return *lattice_; }
  const BasisHandle& basis() const { return handle_; }
  const BlockadedBasis& blockaded() const { return blockaded_; }
  const SymmetricBasis& symmetric_basis() const { return sym_; }
  bool is_symmetric() const { return symmetric_; }
  Eigen::Index dim() const { return handle_->dim; }
  double n_d() const { return std::log2(static_cast<double>(dim())); }

  Config rep(Eigen::Index i) const { return symmetric_ ? sym_.reps[i] : blockaded_.configs[i]; }
  double weight(Eigen::Index i) const { return symmetric_ ? sym_.orbit_sizes[i] : 1.0; }
  /// Index of the basis state containing config c, or -1 if c is not blockaded.
  Eigen::Index locate(Config c) const;

  /// Matrix of a group-invariant operator given by its action on configs.
  SparseOperator build(const ConfigAction& op, bool hermitian) const;
  /// Diagonal operator from a function of the config.
  SparseOperator diagonal(const std::function<double(Config)>& f) const;
  /// Normalized state from per-config amplitudes (must be group invariant).
  StateVector state_from(const std::function<cplx(Config)>& amp) const;

 private:
  std::shared_ptr<const RubyLattice> lattice_;
  BlockadedBasis blockaded_;
  SymmetricBasis sym_;
  bool symmetric_ = false;
  BasisHandle handle_;
};

using SpacePtr = std::shared_ptr<const RubySpace>;

}  // namespace lakes::ruby
