#include "lakes/dtc/coefficients.hpp"

#include <cmath>

#include "lakes/core/optimize.hpp"

namespace lakes::dtc {

FirstOrderAlpha alpha_first_order(const DtcParams& p) {
  const double base = 10.0 * p.h_x * p.h_x + 4.0 * p.K * p.K;
  return {-1.0 / (4.0 * (base + p.h_z * p.h_z)), -1.0 / (4.0 * base)};
}

SecondOrderAlpha alpha_second_order(const DtcParams& p) {
  const double h2 = p.h_x * p.h_x, k2 = p.K * p.K;
  const double den = 192.0 * h2 * h2 * h2 + 1567.0 * h2 * h2 * k2 + 662.0 * h2 * k2 * k2 + 64.0 * k2 * k2 * k2;
  return {-(120.0 * h2 * h2 + 451.0 * h2 * k2 + 64.0 * k2 * k2) / (8.0 * den), (3.0 * h2 + 4.0 * k2) / (16.0 * den)};
}

double pulse_x(const DtcParams& p) {
  const SecondOrderAlpha a = alpha_second_order(p);
  const double r = -2.0 * a.alpha2 / a.alpha1;
  return r > 0 ? std::sqrt(r) : 0.0;
}

namespace {

double coefficient(int order, double k) {
  const DtcParams p{k, 1.0, 0.0};
  if (order == 1) return alpha_first_order(p).without_hz;
  if (order == 2) return alpha_second_order(p).alpha1;
  throw Error(ErrorCode::InvalidArgument, "order must be 1 or 2");
}

}  // namespace

double integrated_alpha(int order, double k_end) {
  return -integrate([order](double k) { return coefficient(order, k); }, 0.0, k_end, 1e-12).value;
}

double lambda_f(int order, double k_end) {
  const double full = -integrate_to_infinity([order](double k) { return coefficient(order, k); }, 0.0, 1e-12).value;
  return full / integrated_alpha(order, k_end);
}

double lambda_f_first_order_closed_form() { return M_PI / (2.0 * std::atan(4.0 * std::sqrt(0.4))); }

TraceFit trace_fit(const DtcLattice& lat, const DtcParams& p, int ell, bool include_hz) {
  const std::vector<PauliSum> terms = nested_terms(lat, p.K, p.h_x, ell);
  const PauliSum h = pauli_hamiltonian(lat, {p.K, p.h_x, include_hz ? p.h_z : 0.0});
  const PauliSum dh = pauli_dk(lat);
  std::vector<PauliSum> d;
  for (const PauliSum& c : terms) d.push_back(commutator(c, h).scaled(cplx(0, 1)));
  const int n = static_cast<int>(d.size());
  Eigen::MatrixXd gram(n, n);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    rhs(i) = -trace_inner(d[i], dh).real();
    for (int j = 0; j <= i; ++j) gram(i, j) = gram(j, i) = trace_inner(d[i], d[j]).real();
  }
  TraceFit fit;
  fit.alphas = solve_min_norm(gram, rhs).x;
  PauliSum g = dh;
  for (int i = 0; i < n; ++i) g.add(d[i], fit.alphas(i));
  fit.action_per_vertex = g.norm2() / lat.n_vertices();
  return fit;
}

}  // namespace lakes::dtc
