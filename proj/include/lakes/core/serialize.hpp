#pragma once

#include <json.hpp>

#include "lakes/core/state.hpp"

namespace lakes {

// Layout:
//   state:    {"basis": {"name", "dim"}, "dim", "amplitudes": [[re, im], ...]}
//   operator: {"basis": {...}, "dim", "hermitian", "entries": [[row, col, re, im], ...]}
nlohmann::json to_json(const StateVector& s);
nlohmann::json to_json(const SparseOperator& op);

/// Reads a state; the basis name and dimension must match `basis`.
StateVector state_from_json(const nlohmann::json& j, const BasisHandle& basis);
SparseOperator operator_from_json(const nlohmann::json& j, const BasisHandle& basis);

}  // namespace lakes
