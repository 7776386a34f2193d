#include <map>

#include "extcond/sdp.hpp"

namespace extcond {

SdpBuilder::Expr& SdpBuilder::Expr::add_var(Var v, double c) {
  if (v.dim != dim_) throw ValidationError("expression/variable dimension mismatch");
  terms_.push_back({Term::Kind::identity, v.id, v.dim, c, 0, Mat()});
  return *this;
}

SdpBuilder::Expr& SdpBuilder::Expr::add_kron_identity(Var v, int right_dim, double c) {
  if (v.dim * right_dim != dim_) throw ValidationError("kron term dimension mismatch");
  terms_.push_back({Term::Kind::kron_identity, v.id, v.dim, c, right_dim, Mat()});
  return *this;
}

SdpBuilder::Expr& SdpBuilder::Expr::add_trace_times(Var v, const Mat& g, double c) {
  if (g.rows() != dim_ || g.cols() != dim_) throw ValidationError("trace term dimension mismatch");
  terms_.push_back({Term::Kind::trace_times, v.id, v.dim, c, 0, linalg::hermitize(g)});
  return *this;
}

SdpBuilder::Expr& SdpBuilder::Expr::add_constant(const Mat& k) {
  if (k.rows() != dim_ || k.cols() != dim_) throw ValidationError("constant dimension mismatch");
  constant_ += linalg::hermitize(k);
  return *this;
}

SdpBuilder::ScalarExpr& SdpBuilder::ScalarExpr::add_term(Var v, const Mat& g) {
  if (g.rows() != v.dim || g.cols() != v.dim)
    throw ValidationError("scalar term dimension mismatch");
  terms_.emplace_back(v, linalg::hermitize(g));
  return *this;
}

SdpBuilder::ScalarExpr& SdpBuilder::ScalarExpr::add_trace(Var v, double c) {
  terms_.emplace_back(v, Mat(c * Mat::Identity(v.dim, v.dim)));
  return *this;
}

SdpBuilder::Var SdpBuilder::add_psd(int dim) {
  if (dim < 1) throw ValidationError("block dimension must be positive");
  Var v{static_cast<int>(problem_.block_dims.size()), dim};
  problem_.block_dims.push_back(dim);
  problem_.objective.push_back(Mat::Zero(dim, dim));
  return v;
}

SdpBuilder::Expr SdpBuilder::expr_of(Var v) const {
  Expr e(v.dim);
  e.add_var(v);
  return e;
}

void SdpBuilder::emit_rows(const Expr& diff) {
  const int d = diff.dim();
  // Functionals over the Hermitian basis: diagonal entries, then the real
  // and imaginary parts of each upper off-diagonal entry.
  auto emit_one = [&](const Mat& func) {
    std::map<int, Mat> coeffs;
    for (const auto& t : diff.terms_) {
      Mat a;
      switch (t.kind) {
        case Expr::Term::Kind::identity:
          a = t.coeff * func;
          break;
        case Expr::Term::Kind::kron_identity:
          a = t.coeff * linalg::partial_trace_second(func, t.var_dim, t.right_dim);
          break;
        case Expr::Term::Kind::trace_times: {
          const double w = (func.adjoint() * t.weight).trace().real();
          a = t.coeff * w * Mat::Identity(t.var_dim, t.var_dim);
          break;
        }
      }
      auto it = coeffs.find(t.var_id);
      if (it == coeffs.end())
        coeffs.emplace(t.var_id, a);
      else
        it->second += a;
    }
    SdpProblem::Constraint row;
    row.rhs = -(func.adjoint() * diff.constant_).trace().real();
    double maxc = 0.0;
    for (auto& [vid, a] : coeffs) {
      maxc = std::max(maxc, a.cwiseAbs().maxCoeff());
      row.terms.emplace_back(vid, std::move(a));
    }
    if (maxc < 1e-14) {
      if (std::abs(row.rhs) > 1e-12)
        throw ValidationError("constraint fixes a constant to an incompatible value");
      return;  // vacuous row
    }
    problem_.constraints.push_back(std::move(row));
  };

  const std::complex<double> im(0.0, 1.0);
  for (int i = 0; i < d; ++i) {
    Mat f = Mat::Zero(d, d);
    f(i, i) = 1.0;
    emit_one(f);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Mat fr = Mat::Zero(d, d);
      fr(i, j) = 0.5;
      fr(j, i) = 0.5;
      emit_one(fr);
      Mat fi = Mat::Zero(d, d);
      fi(i, j) = 0.5 * im;
      fi(j, i) = -0.5 * im;
      emit_one(fi);
    }
}

void SdpBuilder::require_eq(const Expr& lhs, const Expr& rhs) {
  if (lhs.dim() != rhs.dim()) throw ValidationError("equality dimension mismatch");
  Expr diff = lhs;
  for (auto t : rhs.terms_) {
    t.coeff = -t.coeff;
    diff.terms_.push_back(std::move(t));
  }
  diff.constant_ -= rhs.constant_;
  emit_rows(diff);
}

SdpBuilder::Var SdpBuilder::require_le(const Expr& lhs, const Expr& rhs) {
  if (lhs.dim() != rhs.dim()) throw ValidationError("inequality dimension mismatch");
  const Var slack = add_psd(lhs.dim());
  Expr diff = lhs;
  diff.add_var(slack, 1.0);
  for (auto t : rhs.terms_) {
    t.coeff = -t.coeff;
    diff.terms_.push_back(std::move(t));
  }
  diff.constant_ -= rhs.constant_;
  emit_rows(diff);
  return slack;
}

void SdpBuilder::require_scalar_eq(const ScalarExpr& e, double rhs) {
  SdpProblem::Constraint row;
  row.rhs = rhs;
  std::map<int, Mat> coeffs;
  for (const auto& [v, g] : e.terms_) {
    auto it = coeffs.find(v.id);
    if (it == coeffs.end())
      coeffs.emplace(v.id, g);
    else
      it->second += g;
  }
  for (auto& [vid, g] : coeffs) row.terms.emplace_back(vid, std::move(g));
  if (row.terms.empty()) throw ValidationError("scalar constraint with no variables");
  problem_.constraints.push_back(std::move(row));
}

SdpBuilder::Var SdpBuilder::require_scalar_le(const ScalarExpr& e, double rhs) {
  const Var slack = add_psd(1);
  ScalarExpr with_slack = e;
  with_slack.add_trace(slack, 1.0);
  require_scalar_eq(with_slack, rhs);
  return slack;
}

void SdpBuilder::maximize(const ScalarExpr& objective) {
  problem_.maximize = true;
  for (const auto& [v, g] : objective.terms_) problem_.objective[v.id] += g;
}

void SdpBuilder::minimize(const ScalarExpr& objective) {
  problem_.maximize = false;
  for (const auto& [v, g] : objective.terms_) problem_.objective[v.id] += g;
}

Mat SdpBuilder::value_of(const SdpSolution& sol, Var v) const {
  if (v.id < 0 || v.id >= static_cast<int>(sol.primal_x.size()))
    throw ValidationError("unknown variable in value_of");
  return sol.primal_x[v.id];
}

}  // namespace extcond
