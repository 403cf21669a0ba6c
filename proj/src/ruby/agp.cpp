#include "lakes/ruby/agp.hpp"

#include <cmath>

#include "lakes/core/optimize.hpp"

namespace lakes::ruby {

namespace {

void check_ell(int ell) {
  if (ell > kMaxEll) throw Error(ErrorCode::TooDeep, "ell " + std::to_string(ell) + " exceeds cost guard");
  if (ell < 1) throw Error(ErrorCode::InvalidArgument, "ell must be at least 1");
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}


}  // namespace

std::vector<MatrixXc> agp_terms(const RubyOperators& ops, Family family, int ell, double omega, double delta) {
  check_ell(ell);
  if (ops.space->dim() > 20000) throw Error(ErrorCode::TooLarge, "dense AGP terms need dim <= 20000");
  const MatrixXc b = family == Family::Full ? MatrixXc(ops.hamiltonian(omega, delta).matrix())
                                            : MatrixXc(ops.pxp.matrix());
  MatrixXc nested = MatrixXc(ops.pyp.matrix());
  std::vector<MatrixXc> terms;
  for (int k = 1; k <= ell; ++k) {
    if (k > 1) {
      for (int rep = 0; rep < 2; ++rep) nested = b * nested - nested * b;
    }
    terms.push_back(family == Family::Full ? MatrixXc(-0.5 * omega * nested) : nested);
  }
  return terms;
}

AlphaFit optimize_alphas(const std::vector<MatrixXc>& terms, const MatrixXc& h, const MatrixXc& dh) {
  const Eigen::Index k = static_cast<Eigen::Index>(terms.size());
  std::vector<MatrixXc> c;
  for (const auto& m : terms) c.push_back(cplx(0, 1) * (m * h - h * m));
  Eigen::MatrixXd gram(k, k);
  Eigen::VectorXd rhs(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    rhs(i) = -frobenius_inner(c[i], dh).real();
    for (Eigen::Index j = 0; j <= i; ++j) gram(i, j) = gram(j, i) = frobenius_inner(c[i], c[j]).real();
  }
  const auto sol = solve_min_norm(gram, rhs);
  AlphaFit fit;
  fit.alpha = sol.x;
  fit.rank = sol.rank;
  fit.singular = sol.singular;
  MatrixXc a = MatrixXc::Zero(h.rows(), h.cols());
  for (Eigen::Index i = 0; i < k; ++i) a += sol.x(i) * terms[i];
  const MatrixXc g = dh + cplx(0, 1) * (a * h - h * a);
  fit.action = g.squaredNorm();
  fit.action_zero = dh.squaredNorm();
  return fit;
}

Eigen::VectorXd AlphaTable::at(double delta) const {
  const Eigen::Index n = values.rows();
  if (n == 1) return values.row(0).transpose();
  double u = (delta - delta_start) / (delta_end - delta_start) * (n - 1);
  u = std::clamp(u, 0.0, double(n - 1));
  const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>(u), n - 2);
  const double f = u - i;
  return ((1.0 - f) * values.row(i) + f * values.row(i + 1)).transpose();
}

std::vector<AlphaTable> build_alpha_tables(const RubyOperators& fit_ops, Family family, int ell, double omega,
                                           double delta_start, double delta_end, int points) {
  check_ell(ell);
  if (points < 2) throw Error(ErrorCode::InvalidArgument, "alpha table needs at least two points");
  // All operators are real in the configuration basis except PYP = i K.
  const Eigen::MatrixXd x = MatrixXc(fit_ops.pxp.matrix()).real();
  const Eigen::MatrixXd nn = MatrixXc(fit_ops.n_tot.matrix()).real();
  const Eigen::MatrixXd kmat = MatrixXc(fit_ops.pyp.matrix()).imag();
  const double w2 = 0.5 * omega;

  std::vector<AlphaTable> tables(ell);
  for (int l = 1; l <= ell; ++l) {
    tables[l - 1].delta_start = delta_start;
    tables[l - 1].delta_end = delta_end;
    tables[l - 1].values.resize(points, l);
    tables[l - 1].ranks.resize(points);
  }

  Eigen::MatrixXd gram(ell, ell);
  Eigen::VectorXd rhs(ell);

  // restricted family: C_k(delta) = P_k - delta Q_k with fixed P_k, Q_k
  std::vector<Eigen::MatrixXd> pk, qk;
  if (family == Family::Restricted) {
    Eigen::MatrixXd nested = kmat;
    for (int k = 1; k <= ell; ++k) {
      if (k > 1) {
        for (int rep = 0; rep < 2; ++rep) nested = x * nested - nested * x;
      }
      pk.push_back(-w2 * (nested * x - x * nested));
      qk.push_back(-(nested * nn - nn * nested));
    }
  }

  for (int p = 0; p < points; ++p) {
    const double delta = delta_start + (delta_end - delta_start) * p / (points - 1);
    if (family == Family::Restricted) {
      for (int i = 0; i < ell; ++i) {
        const Eigen::MatrixXd ci = pk[i] - delta * qk[i];
        rhs(i) = (ci.cwiseProduct(nn)).sum();  // -<C_i, dH> with dH = -N
        for (int j = 0; j <= i; ++j) {
          const Eigen::MatrixXd cj = pk[j] - delta * qk[j];
          gram(i, j) = gram(j, i) = ci.cwiseProduct(cj).sum();
        }
      }
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w2 * x - delta * nn);
      const Eigen::MatrixXd& q = es.eigenvectors();
      const Eigen::MatrixXd kt = q.transpose() * kmat * q;
      const Eigen::MatrixXd nt = q.transpose() * nn * q;
      const Eigen::Index d = q.rows();
      Eigen::MatrixXd om(d, d);
      for (Eigen::Index m = 0; m < d; ++m)
        for (Eigen::Index n = 0; n < d; ++n) om(m, n) = es.eigenvalues()(m) - es.eigenvalues()(n);
      // C_k = -(Omega/2) om^{2k-1} o K~ in the eigenbasis
      std::vector<Eigen::MatrixXd> ck;
      Eigen::MatrixXd pw = om;
      for (int k = 1; k <= ell; ++k) {
        if (k > 1) pw = pw.cwiseProduct(om).cwiseProduct(om);
        ck.push_back(-w2 * pw.cwiseProduct(kt));
      }
      for (int i = 0; i < ell; ++i) {
        rhs(i) = ck[i].cwiseProduct(nt).sum();
        for (int j = 0; j <= i; ++j) gram(i, j) = gram(j, i) = ck[i].cwiseProduct(ck[j]).sum();
      }
    }
    // the terms for a smaller ell are a prefix, so every table shares one Gram matrix
    for (int l = 1; l <= ell; ++l) {
      const auto sol = solve_min_norm(Eigen::MatrixXd(gram.topLeftCorner(l, l)), Eigen::VectorXd(rhs.head(l)));
      tables[l - 1].values.row(p) = sol.x.transpose();
      tables[l - 1].ranks[p] = sol.rank;
    }
  }
  return tables;
}

AlphaTable build_alpha_table(const RubyOperators& fit_ops, Family family, int ell, double omega,
                             double delta_start, double delta_end, int points) {
  return build_alpha_tables(fit_ops, family, ell, omega, delta_start, delta_end, points).back();
}

void apply_nested(const OperatorAction& b, double shift, const SparseMatrixXc& y, const std::vector<double>& coeffs,
                  const VectorXc& in, VectorXc& out) {
  const int top = static_cast<int>(coeffs.size()) - 1;
  auto bs = [&](const VectorXc& v, VectorXc& w) {
    b(v, w);
    if (shift != 0.0) w -= shift * v;
  };
  std::vector<VectorXc> w(top + 1);
  w[0] = in;
  for (int j = 1; j <= top; ++j) bs(w[j - 1], w[j]);
  std::vector<VectorXc> z(top + 1, VectorXc::Zero(in.size()));
  for (int j = 0; j <= top; ++j) {
    bool needed = false;
    for (int m = 0; m + j <= top; ++m) needed = needed || coeffs[m + j] != 0.0;
    if (!needed) continue;
    const VectorXc yj = y * w[j];
    for (int m = 0; m + j <= top; ++m) {
      const double c = coeffs[m + j];
      if (c == 0.0) continue;
      z[m] += (c * binom(m + j, j) * (j % 2 ? -1.0 : 1.0)) * yj;
    }
  }
  out = z[top];
  VectorXc tmp(in.size());
  for (int m = top - 1; m >= 0; --m) {
    bs(out, tmp);
    out = tmp + z[m];
  }
}

OperatorAction agp_action(const RubyOperators& ops, Family family, const Eigen::VectorXd& alpha, double omega,
                          double delta) {
  const int ell = static_cast<int>(alpha.size());
  std::vector<double> coeffs(2 * ell - 1, 0.0);
  const double scale = family == Family::Full ? -0.5 * omega : 1.0;
  for (int k = 1; k <= ell; ++k) coeffs[2 * k - 2] = scale * alpha(k - 1);
  const SparseMatrixXc* pxp = &ops.pxp.matrix();
  const SparseMatrixXc* nt = &ops.n_tot.matrix();
  const SparseMatrixXc* pyp = &ops.pyp.matrix();
  if (family == Family::Restricted) {
    return [=](const VectorXc& in, VectorXc& out) {
      apply_nested([pxp](const VectorXc& v, VectorXc& w) { w.noalias() = *pxp * v; }, 0.0, *pyp, coeffs, in, out);
    };
  }
  const double shift = -delta * 0.5 * nt->coeffs().real().maxCoeff();
  return [=](const VectorXc& in, VectorXc& out) {
    apply_nested(
        [=](const VectorXc& v, VectorXc& w) {
          w.noalias() = *pxp * v;
          w *= 0.5 * omega;
          w.noalias() -= delta * (*nt * v);
        },
        shift, *pyp, coeffs, in, out);
  };
}

}  // namespace lakes::ruby
