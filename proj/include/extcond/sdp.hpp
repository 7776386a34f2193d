#pragma once

#include <map>
#include <utility>
#include <vector>

#include "extcond/linalg.hpp"
#include "extcond/model.hpp"

namespace extcond {

// Standard-form semidefinite program over Hermitian blocks:
//   optimize  sum_b <C_b, X_b>
//   s.t.      sum over terms  <A_{i,b}, X_b> = b_i,   X_b >= 0.
// Constraint matrices are stored sparsely per block.
struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<Mat> objective;  // one Hermitian matrix per block (may be zero)
  struct Constraint {
    std::vector<std::pair<int, Mat>> terms;  // (block index, Hermitian matrix)
    double rhs = 0.0;
  };
  std::vector<Constraint> constraints;
  bool maximize = false;
};

enum class SdpStatus { optimal, infeasible, limit };

struct SdpSolution {
  SdpStatus status = SdpStatus::limit;
  double primal_value = 0.0;
  double dual_value = 0.0;
  std::vector<Mat> primal_x;
  Eigen::VectorXd dual_y;
  int iterations = 0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

// Primal-dual interior-point method with Nesterov-Todd scaling and a
// Mehrotra corrector. Complex Hermitian blocks are embedded as 2x2 real
// block structures internally; purely real blocks are passed through.
SdpSolution solve_sdp(const SdpProblem& p, double tol = 1e-7, int max_iter = 200);

// Incremental construction of standard-form problems from matrix
// (in)equalities. Inequalities get PSD slack blocks; the entrywise
// equalities over a Hermitian basis are emitted automatically.
class SdpBuilder {
 public:
  struct Var {
    int id = -1;
    int dim = 0;
  };

  // Hermitian-matrix-valued affine expression of fixed dimension.
  class Expr {
   public:
    explicit Expr(int dim) : dim_(dim), constant_(Mat::Zero(dim, dim)) {}
    static Expr constant(const Mat& k) {
      Expr e(static_cast<int>(k.rows()));
      e.constant_ = linalg::hermitize(k);
      return e;
    }
    int dim() const { return dim_; }
    Expr& add_var(Var v, double c = 1.0);                          // c * X_v
    Expr& add_kron_identity(Var v, int right_dim, double c = 1.0); // c * (X_v (x) I_r)
    Expr& add_trace_times(Var v, const Mat& g, double c = 1.0);    // c * Tr[X_v] * g
    Expr& add_constant(const Mat& k);

   private:
    friend class SdpBuilder;
    struct Term {
      enum class Kind { identity, kron_identity, trace_times };
      Kind kind;
      int var_id;
      int var_dim;
      double coeff;
      int right_dim = 0;  // kron_identity
      Mat weight;         // trace_times
    };
    int dim_;
    std::vector<Term> terms_;
    Mat constant_;
  };

  // Scalar affine functional sum_v Tr[G_v X_v].
  class ScalarExpr {
   public:
    ScalarExpr& add_term(Var v, const Mat& g);      // Tr[g X_v]
    ScalarExpr& add_trace(Var v, double c = 1.0);   // c * Tr[X_v]

   private:
    friend class SdpBuilder;
    std::vector<std::pair<Var, Mat>> terms_;
  };

  Var add_psd(int dim);
  Expr expr_of(Var v) const;

  void require_eq(const Expr& lhs, const Expr& rhs);
  Var require_le(const Expr& lhs, const Expr& rhs);  // returns the slack block
  void require_scalar_eq(const ScalarExpr& e, double rhs);
  Var require_scalar_le(const ScalarExpr& e, double rhs);

  void maximize(const ScalarExpr& objective);
  void minimize(const ScalarExpr& objective);

  const SdpProblem& problem() const { return problem_; }

  Mat value_of(const SdpSolution& sol, Var v) const;

 private:
  void emit_rows(const Expr& diff);  // rows for diff == 0
  SdpProblem problem_;
};

}  // namespace extcond
