#pragma once

#include <unordered_map>

#include "lakes/core/state.hpp"

namespace lakes::dtc {

using Mask = unsigned __int128;

inline int popcount(Mask m) {
  return __builtin_popcountll(static_cast<std::uint64_t>(m)) + __builtin_popcountll(static_cast<std::uint64_t>(m >> 64));
}
inline Mask bit(int i) { return Mask(1) << i; }

/// Tensor product of single-qubit Paulis; qubit i carries X, Y or Z when
/// (x_i, z_i) = (1,0), (1,1) or (0,1).
struct PauliString {
  Mask x = 0;
  Mask z = 0;
  bool operator==(const PauliString& o) const { return x == o.x && z == o.z; }
  bool commutes(const PauliString& o) const { return popcount((x & o.z) ^ (z & o.x)) % 2 == 0; }
  int weight() const { return popcount(x | z); }
};

/// a * b = i^phase * (a.x ^ b.x, a.z ^ b.z); returns phase in [0, 4).
int product_phase(const PauliString& a, const PauliString& b);

struct PauliHash {
  std::size_t operator()(const PauliString& p) const {
    const auto lo = [](Mask m) { return static_cast<std::uint64_t>(m) ^ (static_cast<std::uint64_t>(m >> 64) * 0x9e3779b97f4a7c15ULL); };
    return std::hash<std::uint64_t>()(lo(p.x) * 31 + lo(p.z));
  }
};

/// Linear combination of Pauli strings. Traces are normalized:
/// Tr[A^dag B] / D = sum conj(a_P) b_P.
class PauliSum {
 public:
  using Terms = std::unordered_map<PauliString, cplx, PauliHash>;

  PauliSum() = default;
  void add(const PauliString& p, cplx c);
  void add(const PauliSum& o, cplx scale = 1.0);
  PauliSum scaled(cplx c) const;
  void prune(double tol = 1e-14);

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  cplx coefficient(const PauliString& p) const;

  /// Normalized Tr[A^dag B] / D.
  friend cplx trace_inner(const PauliSum& a, const PauliSum& b);
  double norm2() const { return trace_inner(*this, *this).real(); }

  friend PauliSum multiply(const PauliSum& a, const PauliSum& b);
  friend PauliSum commutator(const PauliSum& a, const PauliSum& b);

  /// Matrix on the computational basis of the first n qubits (n <= 20).
  SparseMatrixXc to_sparse(int n) const;

 private:
  Terms terms_;
};

}  // namespace lakes::dtc
