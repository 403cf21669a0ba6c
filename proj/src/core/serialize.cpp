#include "lakes/core/serialize.hpp"

#include <vector>

namespace lakes {

using nlohmann::json;

namespace {

json basis_json(const BasisHandle& b) { return json{{"name", b->name}, {"dim", b->dim}}; }

void check_basis(const json& j, const BasisHandle& basis) {
  if (j.at("basis").at("name").get<std::string>() != basis->name ||
      j.at("basis").at("dim").get<Eigen::Index>() != basis->dim || j.at("dim").get<Eigen::Index>() != basis->dim) {
    throw Error(ErrorCode::BasisMismatch, "serialized basis does not match " + basis->name);
  }
}

}  // namespace

json to_json(const StateVector& s) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < s.dim(); ++i) amps.push_back({s.amplitudes()(i).real(), s.amplitudes()(i).imag()});
  return json{{"basis", basis_json(s.basis())}, {"dim", s.dim()}, {"amplitudes", std::move(amps)}};
}

json to_json(const SparseOperator& op) {
  json entries = json::array();
  const SparseMatrixXc& m = op.matrix();
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrixXc::InnerIterator it(m, r); it; ++it) {
      entries.push_back({it.row(), it.col(), it.value().real(), it.value().imag()});
    }
  }
  return json{{"basis", basis_json(op.basis())},
              {"dim", op.dim()},
              {"hermitian", op.hermitian()},
              {"entries", std::move(entries)}};
}

StateVector state_from_json(const json& j, const BasisHandle& basis) {
  check_basis(j, basis);
  const json& amps = j.at("amplitudes");
  if (static_cast<Eigen::Index>(amps.size()) != basis->dim) {
    throw Error(ErrorCode::BasisMismatch, "amplitude count differs from dimension");
  }
  VectorXc v(basis->dim);
  for (Eigen::Index i = 0; i < basis->dim; ++i) v(i) = cplx(amps[i][0].get<double>(), amps[i][1].get<double>());
  return StateVector(basis, std::move(v));
}

SparseOperator operator_from_json(const json& j, const BasisHandle& basis) {
  check_basis(j, basis);
  std::vector<Eigen::Triplet<cplx>> trips;
  for (const json& e : j.at("entries")) {
    trips.emplace_back(e[0].get<Eigen::Index>(), e[1].get<Eigen::Index>(),
                       cplx(e[2].get<double>(), e[3].get<double>()));
  }
  SparseMatrixXc m(basis->dim, basis->dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return SparseOperator(basis, std::move(m), j.at("hermitian").get<bool>());
}

}  // namespace lakes
