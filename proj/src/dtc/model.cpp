#include "lakes/dtc/model.hpp"

#include <cmath>

namespace lakes::dtc {

namespace {

constexpr int kMaxNestedOrder = 2;

// ad_H^n applied to dH/dK, split by powers of K: out[n][j] multiplies K^j h_x^(n-j).
std::vector<std::vector<PauliSum>> nested_powers(const DtcLattice& lat, int n_max) {
  const PauliSum a = pauli_dk(lat);
  const PauliSum b = x_sum(lat).scaled(-1.0);
  std::vector<std::vector<PauliSum>> out(n_max + 1);
  out[0] = {a};
  for (int n = 1; n <= n_max; ++n) {
    out[n].resize(n + 1);
    for (int j = 0; j < n; ++j) {
      out[n][j].add(commutator(b, out[n - 1][j]));
      out[n][j + 1].add(commutator(a, out[n - 1][j]));
    }
  }
  return out;
}

}  // namespace

double hz_bound() { return std::sqrt((std::sqrt(2.0) - 1.0) / 2.0); }

std::vector<std::string> warnings(const DtcParams& p) {
  std::vector<std::string> w;
  if (p.h_x > 0 && p.h_z / p.h_x > hz_bound()) {
    w.push_back("h_z/h_x = " + std::to_string(p.h_z / p.h_x) + " exceeds the Gauss projection bound " +
                std::to_string(hz_bound()));
  }
  return w;
}

PauliSum pauli_hamiltonian(const DtcLattice& lat, const DtcParams& p) {
  PauliSum h = pauli_dk(lat).scaled(p.K);
  h.add(x_sum(lat), -p.h_x);
  h.add(z_sum(lat), -p.h_z);
  return h;
}

PauliSum pauli_dk(const DtcLattice& lat) {
  PauliSum s;
  for (int v = 0; v < lat.n_vertices(); ++v) s.add(lat.gauss(v), -1.0);
  return s;
}

PauliSum star_y_sum(const DtcLattice& lat) {
  PauliSum s;
  for (int v = 0; v < lat.n_vertices(); ++v) {
    PauliString g = lat.gauss(v);
    for (int l : lat.star(v)) s.add({g.x | bit(l), g.z}, 1.0);
  }
  return s;
}

PauliSum x_sum(const DtcLattice& lat) {
  PauliSum s;
  for (int i = 0; i < lat.n_links(); ++i) s.add({bit(i), 0}, 1.0);
  return s;
}

PauliSum z_sum(const DtcLattice& lat) {
  PauliSum s;
  for (int i = 0; i < lat.n_links(); ++i) s.add({0, bit(i)}, 1.0);
  return s;
}

std::vector<PauliSum> nested_terms(const DtcLattice& lat, double K, double h_x, int ell) {
  if (ell < 1) throw Error(ErrorCode::InvalidArgument, "ell must be >= 1");
  if (ell > 6) throw Error(ErrorCode::TooDeep, "ell must be <= 6");
  PauliSum h = pauli_hamiltonian(lat, {K, h_x, 0.0});
  PauliSum cur = pauli_dk(lat);
  std::vector<PauliSum> out;
  for (int n = 1; n <= 2 * ell - 1; ++n) {
    cur = commutator(h, cur);
    if (n % 2 == 1) out.push_back(cur.scaled(cplx(0, 1)));
  }
  return out;
}

DtcModel::DtcModel(int lx, int ly) : lat_(lx, ly) {
  const int n = lat_.n_links();
  if (n > 16) throw Error(ErrorCode::TooLarge, "DTC exact diagonalization is limited to 16 qubits");
  basis_ = make_basis("dtc_" + std::to_string(lx) + "x" + std::to_string(ly), Eigen::Index(1) << n);
  g_sum_ = pauli_dk(lat_).to_sparse(n);
  g_sum_ *= -1.0;
  x_sum_ = x_sum(lat_).to_sparse(n);
  z_sum_ = z_sum(lat_).to_sparse(n);
  dk_ = SparseOperator(basis_, -g_sum_, true);
  star_y_ = op(star_y_sum(lat_));
  for (int v = 0; v < lat_.n_vertices(); ++v) {
    PauliSum s;
    s.add(lat_.gauss(v), 1.0);
    gauss_.push_back(op(s));
  }
  for (int p = 0; p < lat_.n_plaquettes(); ++p) {
    PauliSum s;
    s.add(lat_.wilson(p), 1.0);
    wilson_.push_back(op(s));
  }
}

SparseOperator DtcModel::op(const PauliSum& s, bool hermitian) const {
  return SparseOperator(basis_, s.to_sparse(n_qubits()), hermitian);
}

SparseOperator DtcModel::hamiltonian(const DtcParams& p) const {
  SparseMatrixXc h = -p.K * g_sum_ - p.h_x * x_sum_ - p.h_z * z_sum_;
  return SparseOperator(basis_, std::move(h), true);
}

SparseMatrixXc DtcModel::nested_term(int k, double K, double h_x) const {
  if (k < 1 || k > kMaxNestedOrder) throw Error(ErrorCode::TooDeep, "nested terms available for k = 1, 2");
  std::call_once(nested_once_, [&] {
    auto powers = nested_powers(lat_, 2 * kMaxNestedOrder - 1);
    for (int kk = 1; kk <= kMaxNestedOrder; ++kk) {
      std::vector<SparseMatrixXc> parts;
      for (const PauliSum& s : powers[2 * kk - 1]) parts.push_back(s.scaled(cplx(0, 1)).to_sparse(n_qubits()));
      nested_.push_back(std::move(parts));
    }
  });
  const auto& parts = nested_[k - 1];
  const int n = 2 * k - 1;
  SparseMatrixXc m(parts[0].rows(), parts[0].cols());
  for (int j = 0; j <= n; ++j) {
    const double c = std::pow(K, j) * std::pow(h_x, n - j);
    if (c != 0.0 && parts[j].nonZeros() > 0) m += c * parts[j];
  }
  return m;
}

StateVector DtcModel::gauss_projected(const StateVector& psi) const {
  require_same_basis(basis_, psi.basis());
  VectorXc v = psi.amplitudes();
  for (const auto& g : gauss_) v = 0.5 * (v + g.apply(v));
  StateVector out(basis_, std::move(v));
  out.normalize();
  return out;
}

}  // namespace lakes::dtc
