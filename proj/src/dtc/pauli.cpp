#include "lakes/dtc/pauli.hpp"

#include <vector>

namespace lakes::dtc {

namespace {

constexpr cplx kPhase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

int product_phase(const PauliString& a, const PauliString& b) {
  const Mask ax = a.x & ~a.z, ay = a.x & a.z, az = ~a.x & a.z;
  const Mask bx = b.x & ~b.z, by = b.x & b.z, bz = ~b.x & b.z;
  // XY = iZ, YZ = iX, ZX = iY and the reversed pairs pick up -i
  const Mask plus = (ax & by) | (ay & bz) | (az & bx);
  const Mask minus = (ay & bx) | (az & by) | (ax & bz);
  return ((popcount(plus) - popcount(minus)) % 4 + 4) % 4;
}

void PauliSum::add(const PauliString& p, cplx c) {
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(p, c);
  if (!inserted) it->second += c;
}

void PauliSum::add(const PauliSum& o, cplx scale) {
  for (const auto& [p, c] : o.terms_) add(p, scale * c);
}

PauliSum PauliSum::scaled(cplx c) const {
  PauliSum out = *this;
  for (auto& kv : out.terms_) kv.second *= c;
  return out;
}

void PauliSum::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= tol) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

cplx PauliSum::coefficient(const PauliString& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

cplx trace_inner(const PauliSum& a, const PauliSum& b) {
  const PauliSum& small = a.size() <= b.size() ? a : b;
  const PauliSum& large = a.size() <= b.size() ? b : a;
  cplx s = 0.0;
  for (const auto& [p, c] : small.terms_) {
    auto it = large.terms_.find(p);
    if (it == large.terms_.end()) continue;
    s += &small == &a ? std::conj(c) * it->second : std::conj(it->second) * c;
  }
  return s;
}

PauliSum multiply(const PauliSum& a, const PauliSum& b) {
  PauliSum out;
  out.terms_.reserve(a.size() * b.size());
  for (const auto& [pa, ca] : a.terms_) {
    for (const auto& [pb, cb] : b.terms_) {
      out.add({pa.x ^ pb.x, pa.z ^ pb.z}, kPhase[product_phase(pa, pb)] * ca * cb);
    }
  }
  out.prune();
  return out;
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  PauliSum out;
  for (const auto& [pa, ca] : a.terms_) {
    for (const auto& [pb, cb] : b.terms_) {
      if (pa.commutes(pb)) continue;
      out.add({pa.x ^ pb.x, pa.z ^ pb.z}, 2.0 * kPhase[product_phase(pa, pb)] * ca * cb);
    }
  }
  out.prune();
  return out;
}

SparseMatrixXc PauliSum::to_sparse(int n) const {
  if (n < 0 || n > 20) throw Error(ErrorCode::TooLarge, "Pauli matrix needs n <= 20 qubits");
  const Mask outside = ~((Mask(1) << n) - 1);
  const std::int64_t dim = std::int64_t(1) << n;
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(terms_.size() * dim);
  for (const auto& [p, c] : terms_) {
    if ((p.x | p.z) & outside) throw Error(ErrorCode::IndexOutOfRange, "Pauli string acts outside register");
    const auto x = static_cast<std::uint64_t>(p.x), z = static_cast<std::uint64_t>(p.z);
    const cplx base = kPhase[popcount(p.x & p.z) % 4] * c;
    for (std::int64_t b = 0; b < dim; ++b) {
      const bool odd = __builtin_popcountll(z & static_cast<std::uint64_t>(b)) & 1;
      trip.emplace_back(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b), odd ? -base : base);
    }
  }
  SparseMatrixXc m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(cplx(0.0), 1e-15);
  return m;
}

}  // namespace lakes::dtc
