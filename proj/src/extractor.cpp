#include "extcond/extractor.hpp"

#include <algorithm>
#include <cmath>

#include "extcond/linalg.hpp"
#include "extcond/norms.hpp"
#include "extcond/parallel.hpp"
#include "extcond/sdp.hpp"

namespace extcond::extractor {

RealMat delta_matrix(const FunctionFamily& fam) {
  const int N = fam.input_size(), M = fam.output_size(), D = fam.seed_count();
  RealMat out = RealMat::Constant(M, N, -1.0 / M);
  for (int s = 0; s < D; ++s)
    for (int x = 0; x < N; ++x) out(fam.table[s][x], x) += 1.0 / D;
  return out;
}

Vec delta_map(const FunctionFamily& fam, const Vec& v) {
  if (v.size() != fam.input_size()) throw ValidationError("input vector length must be 2^n");
  const int M = fam.output_size(), D = fam.seed_count();
  Vec out = Vec::Constant(M, -v.sum() / M);
  for (int s = 0; s < D; ++s)
    for (int x = 0; x < fam.input_size(); ++x) out[fam.table[s][x]] += v[x] / D;
  return out;
}

Vec delta_map_strong(const FunctionFamily& fam, const Vec& v) {
  if (!fam.is_strong()) throw ValidationError("family is not declared strong");
  return delta_map(fam, v);
}

double ext_error(const FunctionFamily& fam, double k, long long limit) {
  return ext_error_with_witness(fam, k, limit).first;
}

std::pair<double, Distribution> ext_error_with_witness(const FunctionFamily& fam, double k,
                                                       long long limit) {
  const int N = fam.input_size();
  const long long kcount = pow2_exact(k);
  if (kcount > N) throw ValidationError("k exceeds n");
  binomial_checked(N, kcount, limit);
  double best = -1.0;
  std::vector<int> best_support;
  for_each_subset(N, static_cast<int>(kcount), [&](const std::vector<int>& support) {
    const double e = delta_map(fam, norms::flat_source(N, support)).lpNorm<1>();
    if (e > best) {
      best = e;
      best_support = support;
    }
  });
  return {best, Distribution(norms::flat_source(N, best_support))};
}

double ext_bounded_norm(const FunctionFamily& fam, double k, long long limit) {
  const int M = fam.output_size();
  if (M > 20) throw SizeLimitError("output side too large for sign enumeration");
  if ((1LL << M) > limit) throw SizeLimitError("sign enumeration exceeds enumeration limit");
  const RealMat delta_t = delta_matrix(fam).transpose();  // N x M
  double best = 0.0;
  // signs come in +-pairs; pin the first one
  const long long total = 1LL << (M - 1);
  for (long long mask = 0; mask < total; ++mask) {
    Vec sgn(M);
    sgn[0] = 1.0;
    for (int y = 1; y < M; ++y) sgn[y] = (mask >> (y - 1)) & 1 ? 1.0 : -1.0;
    best = std::max(best, norms::cap_dual_norm(delta_t * sgn, k));
  }
  return best;
}

std::vector<Mat> delta_blocks(const FunctionFamily& fam, const CqState& rho) {
  if (rho.classical_size() != fam.input_size())
    throw ValidationError("state dimension does not match the family");
  const int M = fam.output_size(), D = fam.seed_count();
  const Mat avg = rho.reduced_q() / M;
  std::vector<Mat> out(M, Mat::Zero(rho.q, rho.q));
  for (int s = 0; s < D; ++s)
    for (int x = 0; x < fam.input_size(); ++x)
      out[fam.table[s][x]] += rho.blocks[x] / D;
  for (int y = 0; y < M; ++y) out[y] -= avg;
  return out;
}

double attack_value(const FunctionFamily& fam, const CqState& rho) {
  double value = 0.0;
  for (const auto& blk : delta_blocks(fam, rho)) value += linalg::trace_norm(blk);
  return value;
}

namespace {

// Feasible classical starting distribution for the see-saw.
Vec classical_start(const FunctionFamily& fam, double k, long long limit) {
  const int N = fam.input_size();
  try {
    return ext_error_with_witness(fam, k, limit).second.probs;
  } catch (const SizeLimitError&) {
    const int count = static_cast<int>(std::min<double>(N, std::ceil(std::exp2(k))));
    std::vector<int> support(count);
    for (int i = 0; i < count; ++i) support[i] = i;
    return norms::flat_source(N, support);
  }
}

std::vector<Mat> sign_update(const FunctionFamily& fam, const CqState& rho) {
  std::vector<Mat> u;
  for (const auto& blk : delta_blocks(fam, rho)) u.push_back(linalg::herm_sign(blk));
  return u;
}

// Maximizes Tr[U Delta(rho)] over cq rho with rho(x) <= 2^{-k} omega,
// Tr omega = 1, total trace one.
CqState state_update(const FunctionFamily& fam, double k, int q, const std::vector<Mat>& u,
                     double tol) {
  const int N = fam.input_size(), M = fam.output_size(), D = fam.seed_count();
  Mat ubar = Mat::Zero(q, q);
  for (const auto& uy : u) ubar += uy / M;
  SdpBuilder b;
  auto omega = b.add_psd(q);
  std::vector<SdpBuilder::Var> rho(N);
  SdpBuilder::ScalarExpr total, obj;
  for (int x = 0; x < N; ++x) {
    rho[x] = b.add_psd(q);
    SdpBuilder::Expr cap(q);
    cap.add_var(omega, std::exp2(-k));
    b.require_le(b.expr_of(rho[x]), cap);
    total.add_trace(rho[x], 1.0);
    Mat h = -ubar;
    for (int s = 0; s < D; ++s) h += u[fam.table[s][x]] / D;
    obj.add_term(rho[x], h);
  }
  b.require_scalar_eq(total, 1.0);
  SdpBuilder::ScalarExpr tromega;
  tromega.add_trace(omega, 1.0);
  b.require_scalar_eq(tromega, 1.0);
  b.maximize(obj);
  auto sol = solve_sdp(b.problem(), tol, 200);
  if (sol.status != SdpStatus::optimal) throw SolverError("see-saw state SDP failed");

  // clean up solver residue so the witness is an exactly valid state
  std::vector<Mat> blocks(N);
  double trace = 0.0;
  for (int x = 0; x < N; ++x) {
    auto [vals, vecs] = linalg::herm_eig(b.value_of(sol, rho[x]));
    Vec clipped = vals.cwiseMax(0.0);
    blocks[x] = vecs * clipped.asDiagonal() * vecs.adjoint();
    trace += blocks[x].real().trace();
  }
  const double mix = 1e-9;
  for (int x = 0; x < N; ++x) {
    blocks[x] = (1.0 - mix) * blocks[x] / trace +
                mix * Mat::Identity(q, q) / static_cast<double>(q * N);
    blocks[x] = linalg::hermitize(blocks[x]);
  }
  return CqState(q, std::move(blocks));
}

CqState pad_state(const CqState& rho, int q) {
  if (rho.q == q) return rho;
  std::vector<Mat> blocks;
  for (const auto& blk : rho.blocks) {
    Mat big = Mat::Zero(q, q);
    big.topLeftCorner(rho.q, rho.q) = blk;
    blocks.push_back(big);
  }
  return CqState(q, std::move(blocks));
}

CqState random_start(const FunctionFamily& fam, int q, Rng& rng) {
  const int N = fam.input_size();
  std::vector<Mat> blocks(N);
  double trace = 0.0;
  for (int x = 0; x < N; ++x) {
    blocks[x] = linalg::random_psd(q, rng) * rng.uniform(0.05, 1.0);
    trace += blocks[x].real().trace();
  }
  for (auto& blk : blocks) blk /= trace;
  return CqState(q, std::move(blocks));
}

}  // namespace

AttackResult cb_lower_seesaw(const FunctionFamily& fam, double k, int q,
                             const SeesawOptions& opts, const std::vector<CqState>& extra_inits) {
  if (q < 1 || q > 8) throw ValidationError("see-saw supports 1 <= Q <= 8");
  const Rng base(opts.seed);

  std::vector<CqState> inits;
  {
    Vec p0 = classical_start(fam, k, opts.enumeration_limit);
    std::vector<Mat> blocks(fam.input_size());
    for (int x = 0; x < fam.input_size(); ++x) {
      Mat blk = Mat::Zero(q, q);
      blk(0, 0) = p0[x];
      blocks[x] = blk;
    }
    inits.emplace_back(q, std::move(blocks));
  }
  for (const auto& st : extra_inits)
    if (st.q <= q) inits.push_back(pad_state(st, q));
  const int restarts = std::max<int>(opts.restarts, static_cast<int>(inits.size()));
  while (static_cast<int>(inits.size()) < restarts) {
    Rng r = base.split(inits.size());
    inits.push_back(random_start(fam, q, r));
  }

  std::vector<AttackResult> results(inits.size());
  const int iterations = std::max(1, opts.iterations);
  parallel_for(static_cast<int>(inits.size()), opts.threads, [&](int idx) {
    // the initial state only seeds the first sign update; every reported
    // iterate comes out of the constrained SDP and is feasible
    CqState seed_state = inits[idx];
    CqState rho = state_update(fam, k, q, sign_update(fam, seed_state), opts.sdp_tol);
    double value = attack_value(fam, rho);
    int sweeps = 1;
    int stalled = 0;
    for (int it = 1; it < iterations; ++it) {
      const auto u = sign_update(fam, rho);
      CqState next = state_update(fam, k, q, u, opts.sdp_tol);
      const double next_value = attack_value(fam, next);
      ++sweeps;
      if (next_value > value) {
        rho = std::move(next);
      }
      if (next_value <= value + 1e-10 * (1.0 + std::abs(value))) {
        value = std::max(value, next_value);
        if (++stalled >= 2) break;
      } else {
        stalled = 0;
        value = next_value;
      }
    }
    results[idx] = AttackResult{value, std::move(rho), sweeps};
  });

  AttackResult best = results.front();
  for (const auto& r : results)
    if (r.value > best.value) best = r;
  best.value = attack_value(fam, best.witness);
  return best;
}

std::map<int, AttackResult> cb_lower_profile(const FunctionFamily& fam, double k,
                                             std::vector<int> q_dims, const SeesawOptions& opts) {
  std::sort(q_dims.begin(), q_dims.end());
  q_dims.erase(std::unique(q_dims.begin(), q_dims.end()), q_dims.end());
  std::map<int, AttackResult> out;
  std::vector<CqState> carried;
  for (int q : q_dims) {
    AttackResult res = cb_lower_seesaw(fam, k, q, opts, carried);
    carried.push_back(res.witness);
    out.emplace(q, std::move(res));
  }
  return out;
}

UpperBounds cb_upper_bounds(const FunctionFamily& fam, double k, double eps_classical) {
  if (!(eps_classical > 0.0) || eps_classical > 1.0)
    throw ValidationError("eps_classical must lie in (0, 1]");
  UpperBounds out;
  out.dim = {k + 1.0, 6.0 * std::sqrt(std::exp2(fam.m)) * eps_classical};
  out.high_entropy = {k + 1.0,
                      6.0 * kGrothendieck * std::exp2(fam.n - k) * eps_classical};
  if (fam.is_strong()) {
    const int mp = fam.strong_m_prime.value();
    out.small_output = BoundPair{k + std::log2(2.0 / eps_classical),
                                 12.0 * std::sqrt(std::exp2(mp)) * std::sqrt(2.0 * eps_classical)};
  }
  return out;
}

}  // namespace extcond::extractor
