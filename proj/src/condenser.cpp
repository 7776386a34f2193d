#include "extcond/condenser.hpp"

#include <algorithm>
#include <cmath>

#include "extcond/linalg.hpp"
#include "extcond/norms.hpp"
#include "extcond/parallel.hpp"
#include "extcond/sdp.hpp"

namespace extcond::condenser {

RealMat cond_matrix(const FunctionFamily& fam) {
  const int N = fam.input_size(), M = fam.output_size(), D = fam.seed_count();
  RealMat out = RealMat::Zero(M, N);
  for (int s = 0; s < D; ++s)
    for (int x = 0; x < N; ++x) out(fam.table[s][x], x) += 1.0 / D;
  return out;
}

Vec cond_map(const FunctionFamily& fam, const Vec& v) {
  if (v.size() != fam.input_size()) throw ValidationError("input vector length must be 2^n");
  const int M = fam.output_size(), D = fam.seed_count();
  Vec out = Vec::Zero(M);
  for (int s = 0; s < D; ++s)
    for (int x = 0; x < fam.input_size(); ++x) out[fam.table[s][x]] += v[x] / D;
  return out;
}

Vec cond_map_strong(const FunctionFamily& fam, const Vec& v) {
  if (!fam.is_strong()) throw ValidationError("family is not declared strong");
  return cond_map(fam, v);
}

CondenserCheck is_condenser(const FunctionFamily& fam, double k, double k_prime, double eps,
                            long long limit) {
  const int N = fam.input_size();
  const long long kcount = pow2_exact(k);
  if (kcount > N) throw ValidationError("k exceeds n");
  binomial_checked(N, kcount, limit);
  CondenserCheck out;
  out.ok = true;
  for_each_subset(N, static_cast<int>(kcount), [&](const std::vector<int>& support) {
    if (!out.ok) return;
    const Vec source = norms::flat_source(N, support);
    const Distribution image(cond_map(fam, source));
    if (norms::smooth_min_entropy(image, eps) < k_prime - 1e-9) {
      out.ok = false;
      out.witness = Distribution(source);
    }
  });
  return out;
}

double cond_bounded_norm(const FunctionFamily& fam, double k, double k_prime, long long limit) {
  return cond_bounded_norm_with_witness(fam, k, k_prime, limit).first;
}

std::pair<double, Distribution> cond_bounded_norm_with_witness(const FunctionFamily& fam, double k,
                                                               double k_prime, long long limit) {
  const int N = fam.input_size();
  const long long kcount = pow2_exact(k);
  if (kcount > N) throw ValidationError("k exceeds n");
  binomial_checked(N, kcount, limit);
  double best = -1.0;
  std::vector<int> best_support;
  for_each_subset(N, static_cast<int>(kcount), [&](const std::vector<int>& support) {
    const double v = norms::sigma_norm(cond_map(fam, norms::flat_source(N, support)), k_prime);
    if (v > best) {
      best = v;
      best_support = support;
    }
  });
  return {best, Distribution(norms::flat_source(N, best_support))};
}

DenseResult densest_subgraph(const BipartiteGraph& g, long long k_left, long long k_right,
                             long long limit) {
  g.validate();
  const int N = g.n_left, M = g.n_right;
  k_left = std::min<long long>(k_left, N);
  k_right = std::min<long long>(k_right, M);
  if (k_left <= 0 || k_right <= 0) return {};
  const Eigen::MatrixXi w = g.multiplicity();

  // enumerate whichever side has fewer subsets
  auto count_side = [&](int n, long long r) -> long long {
    try {
      return binomial_checked(n, r, limit);
    } catch (const SizeLimitError&) {
      return -1;
    }
  };
  const long long cl = count_side(N, k_left);
  const long long cr = count_side(M, k_right);
  if (cl < 0 && cr < 0) throw SizeLimitError("densest subgraph enumeration exceeds limit");
  const bool enumerate_left = cr < 0 || (cl >= 0 && cl <= cr);

  DenseResult best;
  best.value = -1;
  auto greedy_other = [&](const std::vector<int>& fixed, bool fixed_is_left) {
    const int other_n = fixed_is_left ? M : N;
    const long long take = fixed_is_left ? k_right : k_left;
    std::vector<std::pair<long long, int>> score(other_n);
    for (int v = 0; v < other_n; ++v) {
      long long s = 0;
      for (int u : fixed) s += fixed_is_left ? w(u, v) : w(v, u);
      score[v] = {s, v};
    }
    std::sort(score.begin(), score.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    long long total = 0;
    std::vector<int> chosen;
    for (long long i = 0; i < take; ++i) {
      total += score[i].first;
      chosen.push_back(score[i].second);
    }
    std::sort(chosen.begin(), chosen.end());
    if (total > best.value) {
      best.value = total;
      best.left = fixed_is_left ? fixed : chosen;
      best.right = fixed_is_left ? chosen : fixed;
    }
  };
  if (enumerate_left)
    for_each_subset(N, static_cast<int>(k_left),
                    [&](const std::vector<int>& s) { greedy_other(s, true); });
  else
    for_each_subset(M, static_cast<int>(k_right),
                    [&](const std::vector<int>& s) { greedy_other(s, false); });
  return best;
}

bool check_densest_equivalence(const FunctionFamily& fam, double k, double k_prime,
                               long long limit) {
  const long long kcount = pow2_exact(k);
  const long long kpcount = pow2_exact(k_prime);
  const double norm = cond_bounded_norm(fam, k, k_prime, limit);
  const DenseResult dense = densest_subgraph(to_graph(fam), kcount, kpcount, limit);
  const double lhs = static_cast<double>(kcount) * fam.seed_count() * norm;
  return std::abs(lhs - static_cast<double>(dense.value)) <= 1e-6;
}

double densest_sdp_relaxation(const BipartiteGraph& g, long long k_left, long long k_right,
                              double tol) {
  g.validate();
  const int N = g.n_left, M = g.n_right;
  const int dim = 1 + N + M;
  if (dim > 64) throw SizeLimitError("relaxation limited to 1 + N + M <= 64");
  const Eigen::MatrixXi w = g.multiplicity();
  SdpBuilder b;
  auto gram = b.add_psd(dim);
  auto entry = [&](int i, int j) {
    Mat f = Mat::Zero(dim, dim);
    f(i, j) = 0.5;
    f(j, i) = 0.5;
    return f;
  };
  SdpBuilder::ScalarExpr corner;
  corner.add_term(gram, entry(0, 0));
  b.require_scalar_eq(corner, 1.0);
  SdpBuilder::ScalarExpr left_mass, right_mass;
  for (int i = 1; i < dim; ++i) {
    // 0/1 relaxation: <u_0, u_i> = ||u_i||^2
    SdpBuilder::ScalarExpr idem;
    idem.add_term(gram, entry(0, i));
    idem.add_term(gram, Mat(-1.0 * entry(i, i)));
    b.require_scalar_eq(idem, 0.0);
    (i <= N ? left_mass : right_mass).add_term(gram, entry(i, i));
  }
  b.require_scalar_le(left_mass, static_cast<double>(std::min<long long>(k_left, N)));
  b.require_scalar_le(right_mass, static_cast<double>(std::min<long long>(k_right, M)));
  Mat cost = Mat::Zero(dim, dim);
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < M; ++y) {
      cost(1 + x, 1 + N + y) += 0.5 * w(x, y);
      cost(1 + N + y, 1 + x) += 0.5 * w(x, y);
    }
  SdpBuilder::ScalarExpr obj;
  obj.add_term(gram, cost);
  b.maximize(obj);
  auto sol = solve_sdp(b.problem(), tol, 200);
  if (sol.status != SdpStatus::optimal) throw SolverError("densest-subgraph relaxation failed");
  return sol.primal_value;
}

double pairing_value(const FunctionFamily& fam, const PairingWitness& w) {
  const int N = fam.input_size(), M = fam.output_size(), D = fam.seed_count();
  if (static_cast<int>(w.input_ops.size()) != N || static_cast<int>(w.output_ops.size()) != M)
    throw ValidationError("pairing witness shape mismatch");
  const int q = static_cast<int>(w.contraction.rows());
  std::vector<Mat> image(M, Mat::Zero(q, q));
  for (int s = 0; s < D; ++s)
    for (int x = 0; x < N; ++x) image[fam.table[s][x]] += w.input_ops[x] / D;
  double value = 0.0;
  for (int y = 0; y < M; ++y) {
    const Mat t = w.contraction.adjoint() * w.output_ops[y].transpose() * w.contraction;
    value += (image[y] * t).trace().real();
  }
  return value;
}

namespace {

// max sum_j Tr[blocks(j) v(j)] over 0 <= v(j) <= cap * I, sum_j v(j) <= I.
std::vector<Mat> capped_block_update(const std::vector<Mat>& h, double cap, double tol) {
  const int q = static_cast<int>(h.front().rows());
  const int n = static_cast<int>(h.size());
  SdpBuilder b;
  std::vector<SdpBuilder::Var> v(n);
  SdpBuilder::Expr total(q);
  SdpBuilder::ScalarExpr obj;
  const Mat capmat = cap * Mat::Identity(q, q);
  for (int j = 0; j < n; ++j) {
    v[j] = b.add_psd(q);
    b.require_le(b.expr_of(v[j]), SdpBuilder::Expr::constant(capmat));
    total.add_var(v[j], 1.0);
    obj.add_term(v[j], h[j]);
  }
  b.require_le(total, SdpBuilder::Expr::constant(Mat::Identity(q, q)));
  b.maximize(obj);
  auto sol = solve_sdp(b.problem(), tol, 200);
  if (sol.status != SdpStatus::optimal) throw SolverError("pairing block SDP failed");
  std::vector<Mat> out(n);
  for (int j = 0; j < n; ++j) {
    auto [vals, vecs] = linalg::herm_eig(b.value_of(sol, v[j]));
    out[j] = vecs * vals.cwiseMax(0.0).cwiseMin(cap).asDiagonal() * vecs.adjoint();
  }
  return out;
}

// Quadratic form matrix K on vec(C): vec(C)^* K vec(C) = sum_y Tr[W_y C* Y_y C].
Mat contraction_form(const std::vector<Mat>& wys, const std::vector<Mat>& yys, int q) {
  Mat kmat = Mat::Zero(q * q, q * q);
  for (size_t t = 0; t < wys.size(); ++t) {
    const Mat& w = wys[t];
    const Mat y = yys[t].transpose();
    for (int a = 0; a < q; ++a)
      for (int b2 = 0; b2 < q; ++b2)
        for (int c = 0; c < q; ++c)
          for (int d = 0; d < q; ++d)
            kmat(b2 * q + c, a * q + d) += w(a, b2) * y(c, d);
  }
  return linalg::hermitize(kmat);
}

Mat vec_to_mat(const Eigen::VectorXcd& v, int q) {
  Mat c(q, q);
  for (int col = 0; col < q; ++col)
    for (int row = 0; row < q; ++row) c(row, col) = v[col * q + row];
  return c;
}

}  // namespace

CondSeesawResult cond_cb_lower_seesaw(const FunctionFamily& fam, double k, double k_prime, int q,
                                      const extractor::SeesawOptions& opts,
                                      const std::vector<PairingWitness>& extra_inits) {
  if (q < 1 || q > 6) throw ValidationError("condenser see-saw supports 1 <= Q <= 6");
  const int N = fam.input_size(), M = fam.output_size(), D = fam.seed_count();
  const double kcap = std::exp2(-k), kpcap = std::exp2(-k_prime);
  const Rng base(opts.seed);

  auto classical_witness = [&]() {
    PairingWitness w;
    Vec p0;
    try {
      p0 = cond_bounded_norm_with_witness(fam, k, k_prime, opts.enumeration_limit).second.probs;
    } catch (const SizeLimitError&) {
      const int count = static_cast<int>(std::min<double>(N, std::ceil(std::exp2(k))));
      std::vector<int> support(count);
      for (int i = 0; i < count; ++i) support[i] = i;
      p0 = norms::flat_source(N, support);
    }
    // scale the flat source to the cap-ball vertex p(x) = 2^{-k} 1_S
    w.input_ops.resize(N);
    for (int x = 0; x < N; ++x)
      w.input_ops[x] = Mat::Identity(q, q) * std::min(kcap, p0[x] > 0 ? kcap : 0.0) *
                       (p0[x] > 0 ? 1.0 : 0.0);
    // best 2^{k'} outputs of the condensed image, weighted 2^{-k'}
    Vec image = cond_map(fam, p0);
    std::vector<int> order(M);
    for (int y = 0; y < M; ++y) order[y] = y;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return image[a] > image[b]; });
    w.output_ops.assign(M, Mat::Zero(q, q));
    double budget = 1.0;
    for (int y : order) {
      const double take = std::min(kpcap, budget);
      if (take <= 0) break;
      w.output_ops[y] = take * Mat::Identity(q, q);
      budget -= take;
    }
    w.contraction = Mat::Zero(q, q);
    w.contraction(0, 0) = 1.0;
    return w;
  };

  std::vector<PairingWitness> inits;
  inits.push_back(classical_witness());
  for (const auto& w : extra_inits)
    if (static_cast<int>(w.contraction.rows()) == q) inits.push_back(w);
  const int restarts = std::max<int>(opts.restarts, static_cast<int>(inits.size()));
  while (static_cast<int>(inits.size()) < restarts) {
    Rng r = base.split(inits.size());
    PairingWitness w;
    w.input_ops.resize(N);
    w.output_ops.resize(M);
    for (int x = 0; x < N; ++x) {
      Mat g = linalg::random_psd(q, r);
      w.input_ops[x] = kcap * g / std::max(1.0, linalg::op_norm(g));
    }
    for (int y = 0; y < M; ++y) {
      Mat g = linalg::random_psd(q, r);
      w.output_ops[y] = kpcap * g / std::max(1.0, linalg::op_norm(g));
    }
    Mat c(q, q);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) c(i, j) = std::complex<double>(r.gaussian(), r.gaussian());
    w.contraction = c / std::sqrt(std::max(1e-12, (c.adjoint() * c).trace().real()));
    inits.push_back(std::move(w));
  }

  std::vector<CondSeesawResult> results(inits.size());
  const int iterations = std::max(1, opts.iterations);
  parallel_for(static_cast<int>(inits.size()), opts.threads, [&](int idx) {
    // initial witnesses may violate the total-mass caps; the first sweep of
    // constrained updates restores feasibility before any value is kept
    PairingWitness w = inits[idx];
    double value = -1.0;
    int sweeps = 0;
    int stalled = 0;
    for (int it = 0; it < iterations; ++it) {
      // input block
      std::vector<Mat> hp(N);
      for (int x = 0; x < N; ++x) {
        Mat h = Mat::Zero(q, q);
        for (int s = 0; s < D; ++s)
          h += w.contraction.adjoint() * w.output_ops[fam.table[s][x]].transpose() *
               w.contraction / D;
        hp[x] = linalg::hermitize(h);
      }
      w.input_ops = capped_block_update(hp, kcap, opts.sdp_tol);
      // output block
      std::vector<Mat> image(M, Mat::Zero(q, q));
      for (int s = 0; s < D; ++s)
        for (int x = 0; x < N; ++x) image[fam.table[s][x]] += w.input_ops[x] / D;
      std::vector<Mat> hy(M);
      for (int y = 0; y < M; ++y)
        hy[y] = linalg::hermitize(
            (w.contraction * image[y] * w.contraction.adjoint()).transpose());
      w.output_ops = capped_block_update(hy, kpcap, opts.sdp_tol);
      // contraction: top eigenvector of the quadratic form
      const Mat kmat = contraction_form(image, w.output_ops, q);
      auto [vals, vecs] = linalg::herm_eig(kmat);
      w.contraction = vec_to_mat(vecs.col(0), q);
      const double next_value = pairing_value(fam, w);
      ++sweeps;
      if (next_value <= value + 1e-10 * (1.0 + std::abs(value))) {
        value = std::max(value, next_value);
        if (++stalled >= 2) break;
      } else {
        stalled = 0;
        value = next_value;
      }
    }
    results[idx] = CondSeesawResult{value, std::move(w), sweeps};
  });

  CondSeesawResult best = results.front();
  for (auto& r : results)
    if (r.value > best.value) best = r;
  best.value = pairing_value(fam, best.witness);
  return best;
}

}  // namespace extcond::condenser
