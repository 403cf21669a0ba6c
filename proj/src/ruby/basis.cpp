#include "lakes/ruby/basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lakes::ruby {

Eigen::Index BlockadedBasis::index_of(Config c) const {
  auto it = std::lower_bound(configs.begin(), configs.end(), c);
  if (it == configs.end() || *it != c) return -1;
  return it - configs.begin();
}

BlockadedBasis enumerate_blockaded_basis(const RubyLattice& lat, int max_sites) {
  const int n = lat.n_sites();
  if (n > max_sites) throw Error(ErrorCode::TooLarge, std::to_string(n) + " sites exceed enumeration bound");
  BlockadedBasis b;
  b.n_sites = n;
  // depth-first over sites; `forbidden` collects neighbours of placed atoms
  std::function<void(int, Config, Config)> rec = [&](int s, Config c, Config forbidden) {
    if (s == n) {
      b.configs.push_back(c);
      return;
    }
    rec(s + 1, c, forbidden);
    if (!((forbidden >> s) & 1)) rec(s + 1, c | (Config(1) << s), forbidden | lat.neighbor_mask[s]);
  };
  rec(0, 0, 0);
  std::sort(b.configs.begin(), b.configs.end());
  return b;
}

SymmetricBasis symmetry_reduce(const BlockadedBasis& basis, const std::vector<std::vector<int>>& group) {
  for (const auto& g : group) {
    if (static_cast<int>(g.size()) != basis.n_sites) {
      throw Error(ErrorCode::GroupActionInvalid, "permutation size differs from site count");
    }
  }
  SymmetricBasis out;
  std::vector<Config> rep_of(basis.configs.size());
  std::vector<Config> images;
  for (std::size_t k = 0; k < basis.configs.size(); ++k) {
    Config best = basis.configs[k];
    for (const auto& g : group) {
      const Config img = permute_config(basis.configs[k], g);
      if (basis.index_of(img) < 0) throw Error(ErrorCode::GroupActionInvalid, "image leaves the blockaded set");
      best = std::min(best, img);
    }
    rep_of[k] = best;
    if (best == basis.configs[k]) {
      images.clear();
      for (const auto& g : group) images.push_back(permute_config(best, g));
      std::sort(images.begin(), images.end());
      out.reps.push_back(best);
      out.orbit_sizes.push_back(static_cast<int>(std::unique(images.begin(), images.end()) - images.begin()));
    }
  }
  // reps arrive ascending because configs are scanned in order
  out.orbit_of.resize(basis.configs.size());
  for (std::size_t k = 0; k < basis.configs.size(); ++k) {
    out.orbit_of[k] = static_cast<std::int32_t>(std::lower_bound(out.reps.begin(), out.reps.end(), rep_of[k]) -
                                                out.reps.begin());
  }
  return out;
}

SpacePtr RubySpace::full(std::shared_ptr<const RubyLattice> lat) {
  auto s = std::make_shared<RubySpace>();
  s->blockaded_ = enumerate_blockaded_basis(*lat);
  s->handle_ = make_basis("ruby-" + std::to_string(lat->lx) + "x" + std::to_string(lat->ly) + "-full",
                          s->blockaded_.size());
  s->lattice_ = std::move(lat);
  return s;
}

SpacePtr RubySpace::with_group(std::shared_ptr<const RubyLattice> lat, const std::vector<std::vector<int>>& group) {
  auto s = std::make_shared<RubySpace>();
  s->blockaded_ = enumerate_blockaded_basis(*lat);
  s->sym_ = symmetry_reduce(s->blockaded_, group);
  s->symmetric_ = true;
  s->handle_ = make_basis("ruby-" + std::to_string(lat->lx) + "x" + std::to_string(lat->ly) + "-sym" +
                              std::to_string(group.size()),
                          s->sym_.size());
  s->lattice_ = std::move(lat);
  return s;
}

SpacePtr RubySpace::symmetric(std::shared_ptr<const RubyLattice> lat) {
  const auto group = symmetry_group(*lat);
  return with_group(std::move(lat), group);
}

Eigen::Index RubySpace::locate(Config c) const {
  const Eigen::Index k = blockaded_.index_of(c);
  if (k < 0 || !symmetric_) return k;
  return sym_.orbit_of[k];
}

SparseOperator RubySpace::build(const ConfigAction& op, bool hermitian) const {
  std::vector<Eigen::Triplet<cplx>> trips;
  std::vector<std::pair<Config, cplx>> images;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    images.clear();
    op(rep(i), images);
    for (const auto& [c, amp] : images) {
      if (amp == cplx(0.0)) continue;
      const Eigen::Index j = locate(c);
      if (j < 0) continue;  // outside the blockaded space
      trips.emplace_back(j, i, amp * std::sqrt(weight(i) / weight(j)));
    }
  }
  SparseMatrixXc m(dim(), dim());
  m.setFromTriplets(trips.begin(), trips.end());
  m.prune(cplx(0.0), 0.0);
  return SparseOperator(handle_, std::move(m), hermitian);
}

SparseOperator RubySpace::diagonal(const std::function<double(Config)>& f) const {
  return build([&](Config c, auto& out) { out.emplace_back(c, f(c)); }, true);
}

StateVector RubySpace::state_from(const std::function<cplx(Config)>& amp) const {
  VectorXc v(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) v(i) = amp(rep(i)) * std::sqrt(weight(i));
  StateVector s(handle_, std::move(v));
  s.normalize();
  return s;
}

}  // namespace lakes::ruby
