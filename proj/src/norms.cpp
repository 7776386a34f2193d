#include "extcond/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "extcond/linalg.hpp"
#include "extcond/sdp.hpp"

namespace extcond::norms {

namespace {

// min over breakpoints t in {0} u {|v_i|} of  a*t + b*sum_i(|v_i| - t)_+ .
double threshold_min(const Vec& v, double a, double b) {
  const int n = static_cast<int>(v.size());
  std::vector<double> mag(n);
  for (int i = 0; i < n; ++i) mag[i] = std::abs(v[i]);
  std::sort(mag.begin(), mag.end(), std::greater<double>());
  double best = b * std::accumulate(mag.begin(), mag.end(), 0.0);  // t = 0
  double prefix = 0.0;
  for (int j = 0; j < n; ++j) {
    prefix += mag[j];
    const double t = mag[j];
    // entries above t are exactly the first j+1 magnitudes
    best = std::min(best, a * t + b * (prefix - (j + 1) * t));
  }
  return best;
}

void check_finite(const Vec& v) {
  for (int i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) throw ValidationError("vector entries must be finite");
}

void check_psd_blocks(const std::vector<Mat>& blocks) {
  if (blocks.empty()) throw ValidationError("empty block list");
  for (const auto& b : blocks) {
    if (b.rows() != b.cols() || b.rows() != blocks.front().rows())
      throw ValidationError("blocks must be square with equal dimension");
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    if (linalg::min_eig_herm(b) < -1e-9 * scale)
      throw ValidationError("block is not positive semidefinite");
  }
}

}  // namespace

double cap_norm(const Vec& v, double k) {
  check_finite(v);
  if (v.size() == 0) return 0.0;
  return std::max(std::exp2(k) * v.cwiseAbs().maxCoeff(), v.lpNorm<1>());
}

double sigma_norm(const Vec& v, double k) {
  check_finite(v);
  if (v.size() == 0) return 0.0;
  return threshold_min(v, std::exp2(k), 1.0);
}

double cap_dual_norm(const Vec& w, double k) {
  check_finite(w);
  if (w.size() == 0) return 0.0;
  return threshold_min(w, 1.0, std::exp2(-k));
}

Vec supporting_functional(const Vec& v, double k) {
  check_finite(v);
  const int n = static_cast<int>(v.size());
  Vec w = Vec::Zero(n);
  if (v.cwiseAbs().maxCoeff() == 0.0) return w;
  const double linf = v.cwiseAbs().maxCoeff();
  if (v.lpNorm<1>() >= std::exp2(k) * linf) {
    for (int i = 0; i < n; ++i) w[i] = v[i] > 0 ? 1.0 : (v[i] < 0 ? -1.0 : 0.0);
  } else {
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(v[i]) > std::abs(v[best])) best = i;
    w[best] = std::exp2(k) * (v[best] >= 0 ? 1.0 : -1.0);
  }
  return w;
}

bool dual_pairing_check(const Vec& v, const Vec& w, double k, double tol) {
  if (v.size() != w.size()) throw ValidationError("pairing dimension mismatch");
  return std::abs(v.dot(w)) <= cap_norm(v, k) * sigma_norm(w, k) + tol;
}

double sigma_norm_lp(const Vec& v, double k, double tol) {
  const int n = static_cast<int>(v.size());
  SdpBuilder b;
  auto u = b.add_psd(1);
  std::vector<SdpBuilder::Var> p(n), q(n), w(n);
  for (int i = 0; i < n; ++i) {
    p[i] = b.add_psd(1);
    q[i] = b.add_psd(1);
    w[i] = b.add_psd(1);
  }
  for (int i = 0; i < n; ++i) {
    // |v1_i| <= u with v1_i = p_i - q_i
    SdpBuilder::ScalarExpr up;
    up.add_trace(p[i], 1.0).add_trace(q[i], -1.0).add_trace(u, -1.0);
    b.require_scalar_le(up, 0.0);
    SdpBuilder::ScalarExpr un;
    un.add_trace(q[i], 1.0).add_trace(p[i], -1.0).add_trace(u, -1.0);
    b.require_scalar_le(un, 0.0);
    // |v2_i| <= w_i with v2_i = v_i - p_i + q_i
    SdpBuilder::ScalarExpr vp;
    vp.add_trace(p[i], -1.0).add_trace(q[i], 1.0).add_trace(w[i], -1.0);
    b.require_scalar_le(vp, -v[i]);
    SdpBuilder::ScalarExpr vn;
    vn.add_trace(p[i], 1.0).add_trace(q[i], -1.0).add_trace(w[i], -1.0);
    b.require_scalar_le(vn, v[i]);
  }
  SdpBuilder::ScalarExpr obj;
  obj.add_trace(u, std::exp2(k));
  for (int i = 0; i < n; ++i) obj.add_trace(w[i], 1.0);
  b.minimize(obj);
  auto sol = solve_sdp(b.problem(), tol, 200);
  if (sol.status != SdpStatus::optimal) throw SolverError("sigma_norm LP did not converge");
  return sol.primal_value;
}

double min_entropy(const Distribution& p) { return -std::log2(p.probs.maxCoeff()); }

double smooth_min_entropy(const Distribution& p, double eps) {
  if (eps < 0 || eps > 2) throw ValidationError("eps must lie in [0, 2]");
  const int n = p.size();
  if (eps < 1e-15) return min_entropy(p);
  std::vector<double> sorted(p.probs.data(), p.probs.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  // smallest t with sum_i (p_i - t)_+ <= eps/2
  const double budget = eps / 2.0;
  double t_eps = 0.0;
  double prefix = 0.0;
  for (int j = 1; j <= n; ++j) {
    prefix += sorted[j - 1];
    const double next = (j < n) ? sorted[j] : 0.0;
    const double t = (prefix - budget) / j;
    if (t >= next - 1e-18) {
      t_eps = std::max(t, 0.0);
      break;
    }
  }
  const double t_star = std::max(1.0 / n, t_eps);
  return -std::log2(t_star);
}

double smooth_min_entropy_lp(const Distribution& p, double eps, double tol) {
  if (eps < 0 || eps > 2) throw ValidationError("eps must lie in [0, 2]");
  if (eps < 1e-12) return min_entropy(p);
  const int n = p.size();
  SdpBuilder b;
  auto t = b.add_psd(1);
  std::vector<SdpBuilder::Var> r(n), u(n);
  for (int i = 0; i < n; ++i) {
    r[i] = b.add_psd(1);
    u[i] = b.add_psd(1);
  }
  SdpBuilder::ScalarExpr total, tv;
  for (int i = 0; i < n; ++i) {
    SdpBuilder::ScalarExpr cap;
    cap.add_trace(r[i], 1.0).add_trace(t, -1.0);
    b.require_scalar_le(cap, 0.0);
    SdpBuilder::ScalarExpr dp;
    dp.add_trace(r[i], 1.0).add_trace(u[i], -1.0);
    b.require_scalar_le(dp, p.probs[i]);
    SdpBuilder::ScalarExpr dn;
    dn.add_trace(r[i], -1.0).add_trace(u[i], -1.0);
    b.require_scalar_le(dn, -p.probs[i]);
    total.add_trace(r[i], 1.0);
    tv.add_trace(u[i], 1.0);
  }
  b.require_scalar_eq(total, 1.0);
  b.require_scalar_le(tv, eps);
  SdpBuilder::ScalarExpr obj;
  obj.add_trace(t, 1.0);
  b.minimize(obj);
  auto sol = solve_sdp(b.problem(), tol, 200);
  if (sol.status != SdpStatus::optimal) throw SolverError("smooth min-entropy LP did not converge");
  return -std::log2(sol.primal_value);
}

double cond_min_entropy(const CqState& rho, double tol) {
  SdpBuilder b;
  auto s = b.add_psd(rho.q);
  for (const auto& blk : rho.blocks)
    b.require_le(SdpBuilder::Expr::constant(blk), b.expr_of(s));
  SdpBuilder::ScalarExpr obj;
  obj.add_trace(s, 1.0);
  b.minimize(obj);
  auto sol = solve_sdp(b.problem(), tol, 200);
  if (sol.status != SdpStatus::optimal) throw SolverError("guessing-probability SDP failed");
  return -std::log2(sol.primal_value);
}

double smooth_cond_min_entropy(const CqState& rho, double eps, double tol) {
  if (eps < 0 || eps > 2) throw ValidationError("eps must lie in [0, 2]");
  if (eps < 1e-12) return cond_min_entropy(rho, tol);
  const int q = rho.q;
  const int n = rho.classical_size();
  SdpBuilder b;
  auto s = b.add_psd(q);
  std::vector<SdpBuilder::Var> rp(n), y1(n), y2(n);
  for (int x = 0; x < n; ++x) {
    rp[x] = b.add_psd(q);
    y1[x] = b.add_psd(q);
    y2[x] = b.add_psd(q);
  }
  SdpBuilder::ScalarExpr total, moved;
  for (int x = 0; x < n; ++x) {
    b.require_le(b.expr_of(rp[x]), b.expr_of(s));
    SdpBuilder::Expr lhs(q);
    lhs.add_var(rp[x], 1.0).add_var(y1[x], -1.0).add_var(y2[x], 1.0);
    b.require_eq(lhs, SdpBuilder::Expr::constant(rho.blocks[x]));
    total.add_trace(rp[x], 1.0);
    moved.add_trace(y1[x], 1.0).add_trace(y2[x], 1.0);
  }
  b.require_scalar_eq(total, 1.0);
  b.require_scalar_le(moved, eps);
  SdpBuilder::ScalarExpr obj;
  obj.add_trace(s, 1.0);
  b.minimize(obj);
  auto sol = solve_sdp(b.problem(), tol, 200);
  if (sol.status != SdpStatus::optimal)
    throw SolverError("smooth conditional min-entropy SDP failed");
  return -std::log2(sol.primal_value);
}

double infty_one_norm_pos(const Mat& x, int q, int n, double tol) {
  if (x.rows() != q * n || x.cols() != q * n)
    throw ValidationError("matrix must act on Q (x) N");
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  if (linalg::min_eig_herm(x) < -1e-9 * scale)
    throw ValidationError("infty_one_norm_pos needs a PSD input");
  SdpBuilder b;
  auto y = b.add_psd(q * n);
  auto sig = b.add_psd(q);
  SdpBuilder::Expr cap(q * n);
  cap.add_kron_identity(sig, n, 1.0);
  b.require_le(b.expr_of(y), cap);
  SdpBuilder::ScalarExpr tr;
  tr.add_trace(sig, 1.0);
  b.require_scalar_le(tr, 1.0);
  SdpBuilder::ScalarExpr obj;
  obj.add_term(y, x);
  b.maximize(obj);
  auto sol = solve_sdp(b.problem(), tol, 200);
  if (sol.status != SdpStatus::optimal) throw SolverError("(infty;1) SDP failed");
  return sol.primal_value;
}

double capcap_norm_pos(const std::vector<Mat>& blocks, double k) {
  check_psd_blocks(blocks);
  const int q = static_cast<int>(blocks.front().rows());
  double max_block = 0.0;
  Mat sum = Mat::Zero(q, q);
  for (const auto& blk : blocks) {
    max_block = std::max(max_block, linalg::op_norm(blk));
    sum += blk;
  }
  return std::max(std::exp2(k) * max_block, linalg::op_norm(sum));
}

double capcap_upper(const Mat& a, const Mat& b, int q, int n, double k) {
  if (a.rows() != q * n || a.cols() != q * n || b.rows() != q * n || b.cols() != q * n)
    throw ValidationError("factors must act on Q (x) N");
  const Mat prod = a * b.adjoint();
  // the product must be a cq element (block-diagonal over N)
  double off = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) off = std::max(off, std::abs(prod(i * n + x, j * n + y)));
    }
  const double scale = std::max(1.0, prod.cwiseAbs().maxCoeff());
  if (off > 1e-8 * scale) throw ValidationError("a b* is not block-structured as a cq element");
  auto factor_score = [&](const Mat& f) {
    const double gamma_norm =
        std::sqrt(linalg::op_norm(linalg::partial_trace_second(f * f.adjoint(), q, n)));
    return std::max(std::sqrt(std::exp2(k)) * linalg::op_norm(f), gamma_norm);
  };
  return factor_score(a) * factor_score(b);
}

double capped_overlap_pos(const std::vector<Mat>& blocks, double k, double tol) {
  check_psd_blocks(blocks);
  const int q = static_cast<int>(blocks.front().rows());
  const int n = static_cast<int>(blocks.size());
  SdpBuilder b;
  std::vector<SdpBuilder::Var> x(n);
  SdpBuilder::Expr total(q);
  SdpBuilder::ScalarExpr obj;
  for (int j = 0; j < n; ++j) {
    x[j] = b.add_psd(q);
    b.require_le(b.expr_of(x[j]), SdpBuilder::Expr::constant(Mat::Identity(q, q)));
    total.add_var(x[j], 1.0);
    obj.add_term(x[j], blocks[j]);
  }
  b.require_le(total, SdpBuilder::Expr::constant(std::exp2(k) * Mat::Identity(q, q)));
  b.maximize(obj);
  auto sol = solve_sdp(b.problem(), tol, 200);
  if (sol.status != SdpStatus::optimal) throw SolverError("capped overlap SDP failed");
  return std::exp2(-k) * sol.primal_value;
}

SigSigValue sigsig_norm_pos(const std::vector<Mat>& blocks, double k, double tol) {
  check_psd_blocks(blocks);
  const int q = static_cast<int>(blocks.front().rows());
  const int n = static_cast<int>(blocks.size());
  const double kinv = std::exp2(-k);
  SigSigValue out;
  {
    SdpBuilder b;
    auto sig = b.add_psd(q);
    std::vector<SdpBuilder::Var> y(n);
    SdpBuilder::Expr total(q);
    SdpBuilder::ScalarExpr obj;
    for (int j = 0; j < n; ++j) {
      y[j] = b.add_psd(q);
      SdpBuilder::Expr cap(q);
      cap.add_var(sig, kinv);
      b.require_le(b.expr_of(y[j]), cap);
      total.add_var(y[j], 1.0);
      obj.add_term(y[j], blocks[j]);
    }
    b.require_le(total, b.expr_of(sig));
    SdpBuilder::ScalarExpr tr;
    tr.add_trace(sig, 1.0);
    b.require_scalar_le(tr, 1.0);
    b.maximize(obj);
    auto sol = solve_sdp(b.problem(), tol, 200);
    if (sol.status != SdpStatus::optimal) throw SolverError("sigsig primal SDP failed");
    out.primal = sol.primal_value;
  }
  {
    SdpBuilder b;
    auto t = b.add_psd(1);
    auto bb = b.add_psd(q);
    std::vector<SdpBuilder::Var> a(n);
    SdpBuilder::Expr weighted(q);
    for (int j = 0; j < n; ++j) {
      a[j] = b.add_psd(q);
      SdpBuilder::Expr rhs(q);
      rhs.add_var(a[j], 1.0).add_var(bb, 1.0);
      b.require_le(SdpBuilder::Expr::constant(blocks[j]), rhs);
      weighted.add_var(a[j], kinv);
    }
    weighted.add_var(bb, 1.0);
    SdpBuilder::Expr tcap(q);
    tcap.add_trace_times(t, Mat::Identity(q, q), 1.0);
    b.require_le(weighted, tcap);
    SdpBuilder::ScalarExpr obj;
    obj.add_trace(t, 1.0);
    b.minimize(obj);
    auto sol = solve_sdp(b.problem(), tol, 200);
    if (sol.status != SdpStatus::optimal) throw SolverError("sigsig dual SDP failed");
    out.dual = sol.primal_value;
  }
  return out;
}

double linfty_to_l1_norm(const RealMat& a, double k, long long limit) {
  const long long rows = a.rows(), cols = a.cols();
  const long long side = std::min(rows, cols);
  if (side > 62 || (1LL << side) > limit)
    throw SizeLimitError("sign enumeration exceeds enumeration limit");
  const RealMat m = (rows <= cols) ? RealMat(a.transpose()) : a;  // m: cols(side) signs
  double best = 0.0;
  const long long total = 1LL << side;
  for (long long mask = 0; mask < total; ++mask) {
    Eigen::VectorXd s(side);
    for (long long i = 0; i < side; ++i) s[i] = (mask >> i) & 1 ? 1.0 : -1.0;
    best = std::max(best, (m * s).lpNorm<1>());
  }
  return std::exp2(-k) * best;
}

double grothendieck_sdp(const RealMat& a, double tol) {
  const int r = static_cast<int>(a.rows()), c = static_cast<int>(a.cols());
  if (r > 32 || c > 32) throw SizeLimitError("grothendieck_sdp limited to dims <= 32");
  SdpBuilder b;
  auto g = b.add_psd(r + c);
  for (int i = 0; i < r + c; ++i) {
    Mat e = Mat::Zero(r + c, r + c);
    e(i, i) = 1.0;
    SdpBuilder::ScalarExpr diag;
    diag.add_term(g, e);
    b.require_scalar_eq(diag, 1.0);
  }
  Mat cost = Mat::Zero(r + c, r + c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      cost(i, r + j) = 0.5 * a(i, j);
      cost(r + j, i) = 0.5 * a(i, j);
    }
  SdpBuilder::ScalarExpr obj;
  obj.add_term(g, cost);
  b.maximize(obj);
  auto sol = solve_sdp(b.problem(), tol, 200);
  if (sol.status != SdpStatus::optimal) throw SolverError("grothendieck SDP failed");
  return sol.primal_value;
}

double grothendieck_signmax(const RealMat& a, long long limit) {
  return linfty_to_l1_norm(a, 0.0, limit);
}

Vec flat_source(int size, const std::vector<int>& support) {
  Vec v = Vec::Zero(size);
  for (int i : support) v[i] = 1.0 / static_cast<double>(support.size());
  return v;
}

}  // namespace extcond::norms
