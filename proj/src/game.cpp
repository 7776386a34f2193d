#include "extcond/game.hpp"

#include <algorithm>
#include <cmath>

#include "extcond/linalg.hpp"
#include "extcond/norms.hpp"
#include "extcond/sdp.hpp"

namespace extcond::game {

namespace {

long long checked_pow(long long base, long long exp, long long cap) {
  long long v = 1;
  for (long long i = 0; i < exp; ++i) {
    if (v > cap / base) throw SizeLimitError("question space exceeds enumeration limit");
    v *= base;
  }
  return v;
}

// digit d of `index` in base `base`
int digit(long long index, int d, int base) {
  for (int i = 0; i < d; ++i) index /= base;
  return static_cast<int>(index % base);
}

}  // namespace

long long GameInstance::alice_questions() const {
  return checked_pow(graph.n_left, gamma, 1LL << 62);
}

long long GameInstance::bob_questions() const {
  return checked_pow(graph.n_right, gamma_prime, 1LL << 62);
}

GameInstance build_game(const FunctionFamily& fam, double k, double k_prime) {
  GameInstance g;
  g.graph = to_graph(fam);
  g.k = k;
  g.k_prime = k_prime;
  const long long kc = pow2_exact(k);
  const long long kpc = pow2_exact(k_prime);
  if (fam.input_size() % kc != 0) throw ExactModeError("non-integer gamma = N / 2^k");
  if (fam.output_size() % kpc != 0) throw ExactModeError("non-integer gamma' = M / 2^k'");
  g.gamma = fam.input_size() / kc;
  g.gamma_prime = fam.output_size() / kpc;
  return g;
}

namespace {

// distribution of the chosen vertex for a deterministic strategy
Vec chosen_distribution(int n_symbols, long long gamma, const std::vector<int>& strategy) {
  const long long questions = static_cast<long long>(strategy.size());
  Vec out = Vec::Zero(n_symbols);
  for (long long qi = 0; qi < questions; ++qi)
    out[digit(qi, strategy[qi], n_symbols)] += 1.0 / static_cast<double>(questions);
  (void)gamma;
  return out;
}

}  // namespace

ClassicalStrategy classical_value_with_strategy(const GameInstance& g, long long limit) {
  g.graph.validate();
  const int n = g.graph.n_left, m = g.graph.n_right;
  const long long qa = g.alice_questions(), qb = g.bob_questions();
  if (qa * qb > limit / std::max(1, g.graph.degree))
    throw SizeLimitError("question space exceeds enumeration limit");
  const long long sa = checked_pow(g.gamma, qa, limit);
  const long long sb = checked_pow(g.gamma_prime, qb, limit);
  if (sa > limit / std::max(1LL, sb)) throw SizeLimitError("strategy space exceeds enumeration limit");

  const RealMat w = g.graph.multiplicity().cast<double>() / g.graph.degree;

  auto decode = [](long long code, long long count, int base) {
    std::vector<int> f(count);
    for (long long i = 0; i < count; ++i) {
      f[i] = static_cast<int>(code % base);
      code /= base;
    }
    return f;
  };

  std::vector<Vec> alice_dists(sa), bob_dists(sb);
  std::vector<std::vector<int>> alice_strats(sa), bob_strats(sb);
  for (long long c = 0; c < sa; ++c) {
    alice_strats[c] = decode(c, qa, static_cast<int>(g.gamma));
    alice_dists[c] = chosen_distribution(n, g.gamma, alice_strats[c]);
  }
  for (long long c = 0; c < sb; ++c) {
    bob_strats[c] = decode(c, qb, static_cast<int>(g.gamma_prime));
    bob_dists[c] = chosen_distribution(m, g.gamma_prime, bob_strats[c]);
  }

  ClassicalStrategy best;
  best.value = -1.0;
  for (long long ca = 0; ca < sa; ++ca) {
    const Vec scored = w.transpose() * alice_dists[ca];  // length m
    for (long long cb = 0; cb < sb; ++cb) {
      const double v = scored.dot(bob_dists[cb]);
      if (v > best.value) {
        best.value = v;
        best.alice = alice_strats[ca];
        best.bob = bob_strats[cb];
      }
    }
  }
  return best;
}

double classical_value(const GameInstance& g, long long limit) {
  return classical_value_with_strategy(g, limit).value;
}

std::vector<Mat> junge_povms(const std::vector<Mat>& marginals, const std::vector<int>& question) {
  if (marginals.empty()) throw ValidationError("empty marginal list");
  const int q = static_cast<int>(marginals.front().rows());
  for (const auto& p : marginals) {
    const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    if (linalg::min_eig_herm(p) < -1e-9 * scale ||
        linalg::min_eig_herm(Mat::Identity(q, q) - p) < -1e-9 * scale)
      throw ValidationError("marginals must satisfy 0 <= p <= 1");
  }
  std::vector<Mat> povms;
  Mat r = Mat::Identity(q, q);  // r_{1, alpha-1}, built right-to-left
  for (size_t a = 0; a < question.size(); ++a) {
    const int x = question[a];
    if (x < 0 || x >= static_cast<int>(marginals.size()))
      throw ValidationError("question entry out of range");
    povms.push_back(r.adjoint() * marginals[x] * r);
    r = linalg::psd_sqrt(Mat::Identity(q, q) - marginals[x], 1e-8) * r;
  }
  return povms;
}

JungeCheck check_junge_lemma(const std::vector<Mat>& marginals, long long gamma, int samples,
                             Rng& rng) {
  const int q = static_cast<int>(marginals.front().rows());
  const int n = static_cast<int>(marginals.size());
  const Mat id = Mat::Identity(q, q);
  JungeCheck out;

  Mat total = Mat::Zero(q, q);
  for (const auto& p : marginals) total += p;
  const double cap = static_cast<double>(n) / (4.0 * static_cast<double>(gamma));  // 2^k / 4
  out.margin_regime = linalg::min_eig_herm(cap * id - total);

  // single-step averages
  Mat avg_root = Mat::Zero(q, q);
  std::vector<Mat> roots(n);
  for (int x = 0; x < n; ++x) {
    roots[x] = linalg::psd_sqrt(id - marginals[x], 1e-8);
    avg_root += roots[x] / n;
  }
  auto cp_step = [&](const Mat& mIn) {
    Mat outM = Mat::Zero(q, q);
    for (int x = 0; x < n; ++x) outM += roots[x] * mIn * roots[x] / static_cast<double>(n);
    return outM;
  };

  Mat rpow = id;           // E[r_{1,a-1}] = avg_root^{a-1}
  Mat rstar_r = id;        // E[r* r] via the iterated cp map
  Mat sum_linear = Mat::Zero(q, q);
  Mat sum_quadratic = Mat::Zero(q, q);
  for (long long a = 1; a <= gamma; ++a) {
    sum_linear += id - rpow;
    sum_quadratic += id - 2.0 * rpow + rstar_r;
    rpow = linalg::hermitize(avg_root * rpow);
    rstar_r = linalg::hermitize(cp_step(rstar_r));
  }
  out.margin_linear =
      linalg::min_eig_herm((static_cast<double>(gamma) / 8.0) * id - sum_linear);
  out.margin_quadratic =
      linalg::min_eig_herm((static_cast<double>(gamma) / 4.0) * id - sum_quadratic);

  out.margin_povm = 1.0;
  for (int t = 0; t < samples; ++t) {
    std::vector<int> question(gamma);
    for (long long a = 0; a < gamma; ++a) question[a] = rng.below_int(n);
    Mat povm_total = Mat::Zero(q, q);
    for (const auto& e : junge_povms(marginals, question)) povm_total += e;
    out.margin_povm = std::min(out.margin_povm, linalg::min_eig_herm(id - povm_total));
  }

  out.ok = out.margin_regime >= -1e-9 && out.margin_povm >= -1e-9 &&
           out.margin_linear >= -1e-9 && out.margin_quadratic >= -1e-9;
  return out;
}

void QuantumStrategy::validate(const GameInstance& g) const {
  const Mat id = Mat::Identity(q_dim, q_dim);
  auto check_side = [&](const std::vector<std::vector<Mat>>& povms, long long questions,
                        long long answers) {
    if (static_cast<long long>(povms.size()) != questions)
      throw ValidationError("strategy question count mismatch");
    for (const auto& fam : povms) {
      if (static_cast<long long>(fam.size()) != answers)
        throw ValidationError("strategy answer count mismatch");
      Mat total = Mat::Zero(q_dim, q_dim);
      for (const auto& e : fam) {
        if (linalg::min_eig_herm(e) < -1e-9) throw ValidationError("POVM element not PSD");
        total += e;
      }
      if (linalg::min_eig_herm(id - total) < -1e-9)
        throw ValidationError("POVM total exceeds identity");
    }
  };
  check_side(alice, g.alice_questions(), g.gamma);
  check_side(bob, g.bob_questions(), g.gamma_prime);
}

namespace {

std::vector<Mat> marginals_of(const std::vector<std::vector<Mat>>& povms, int n_symbols,
                              long long questions, int q) {
  std::vector<Mat> out(n_symbols, Mat::Zero(q, q));
  for (long long qi = 0; qi < questions; ++qi)
    for (size_t a = 0; a < povms[qi].size(); ++a)
      out[digit(qi, static_cast<int>(a), n_symbols)] += povms[qi][a] / static_cast<double>(questions);
  return out;
}

}  // namespace

std::vector<Mat> alice_marginals(const GameInstance& g, const QuantumStrategy& s) {
  return marginals_of(s.alice, g.graph.n_left, g.alice_questions(), s.q_dim);
}

std::vector<Mat> bob_marginals(const GameInstance& g, const QuantumStrategy& s) {
  return marginals_of(s.bob, g.graph.n_right, g.bob_questions(), s.q_dim);
}

Mat game_operator(const GameInstance& g, const QuantumStrategy& s) {
  const auto pm = alice_marginals(g, s);
  const auto qm = bob_marginals(g, s);
  const RealMat w = g.graph.multiplicity().cast<double>() / g.graph.degree;
  const int q = s.q_dim;
  Mat go = Mat::Zero(q * q, q * q);
  for (int x = 0; x < g.graph.n_left; ++x)
    for (int y = 0; y < g.graph.n_right; ++y)
      if (w(x, y) != 0.0) go += w(x, y) * linalg::kron(pm[x], qm[y]);
  return go;
}

double strategy_value(const GameInstance& g, const QuantumStrategy& s) {
  auto [vals, vecs] = linalg::herm_eig(game_operator(g, s));
  return std::max(0.0, vals[0]);
}

QuantumStrategy embed_classical(const GameInstance& g, const std::vector<int>& alice,
                                const std::vector<int>& bob, int q) {
  QuantumStrategy s;
  s.q_dim = q;
  const Mat id = Mat::Identity(q, q);
  s.alice.resize(g.alice_questions());
  for (long long qi = 0; qi < g.alice_questions(); ++qi) {
    s.alice[qi].assign(g.gamma, Mat::Zero(q, q));
    s.alice[qi][alice[qi]] = id;
  }
  s.bob.resize(g.bob_questions());
  for (long long qi = 0; qi < g.bob_questions(); ++qi) {
    s.bob[qi].assign(g.gamma_prime, Mat::Zero(q, q));
    s.bob[qi][bob[qi]] = id;
  }
  return s;
}

namespace {

// sub-POVM update: max sum_a Tr[e_a h_a] with e_a >= 0, sum e_a <= 1
std::vector<Mat> povm_update(const std::vector<Mat>& h, int q, double tol) {
  SdpBuilder b;
  const int answers = static_cast<int>(h.size());
  std::vector<SdpBuilder::Var> e(answers);
  SdpBuilder::Expr total(q);
  SdpBuilder::ScalarExpr obj;
  for (int a = 0; a < answers; ++a) {
    e[a] = b.add_psd(q);
    total.add_var(e[a], 1.0);
    obj.add_term(e[a], h[a]);
  }
  b.require_le(total, SdpBuilder::Expr::constant(Mat::Identity(q, q)));
  b.maximize(obj);
  auto sol = solve_sdp(b.problem(), tol, 200);
  if (sol.status != SdpStatus::optimal) throw SolverError("POVM update SDP failed");
  std::vector<Mat> out(answers);
  for (int a = 0; a < answers; ++a) {
    auto [vals, vecs] = linalg::herm_eig(b.value_of(sol, e[a]));
    out[a] = vecs * vals.cwiseMax(0.0).asDiagonal() * vecs.adjoint();
  }
  return out;
}

}  // namespace

GameSeesawResult entangled_value_lower(const GameInstance& g, int q,
                                       const extractor::SeesawOptions& opts) {
  if (q < 1 || q > 4) throw ValidationError("game see-saw supports 1 <= Q <= 4");
  const long long qa = g.alice_questions(), qb = g.bob_questions();
  const int n = g.graph.n_left, m = g.graph.n_right;
  const RealMat w = g.graph.multiplicity().cast<double>() / g.graph.degree;
  const Rng base(opts.seed);

  std::vector<QuantumStrategy> inits;
  {
    const auto classical = classical_value_with_strategy(g, opts.enumeration_limit);
    inits.push_back(embed_classical(g, classical.alice, classical.bob, q));
  }
  const int restarts = std::max(1, opts.restarts);
  while (static_cast<int>(inits.size()) < restarts) {
    Rng r = base.split(inits.size());
    QuantumStrategy s;
    s.q_dim = q;
    auto random_side = [&](long long questions, long long answers) {
      std::vector<std::vector<Mat>> povms(questions);
      for (long long qi = 0; qi < questions; ++qi) {
        povms[qi].resize(answers);
        Mat total = Mat::Zero(q, q);
        for (long long a = 0; a < answers; ++a) {
          povms[qi][a] = linalg::random_psd(q, r);
          total += povms[qi][a];
        }
        auto [vals, vecs] = linalg::herm_eig(total);
        const Mat scale =
            vecs * vals.cwiseMax(1e-12).cwiseSqrt().cwiseInverse().asDiagonal() * vecs.adjoint();
        for (auto& el : povms[qi]) el = linalg::hermitize(scale * el * scale) * (1.0 - 1e-9);
      }
      return povms;
    };
    s.alice = random_side(qa, g.gamma);
    s.bob = random_side(qb, g.gamma_prime);
    inits.push_back(std::move(s));
  }

  GameSeesawResult best;
  best.value = -1.0;
  const int iterations = std::max(1, opts.iterations);
  for (auto& init : inits) {
    QuantumStrategy s = init;
    double value = strategy_value(g, s);
    Eigen::VectorXcd psi;
    {
      auto [vals, vecs] = linalg::herm_eig(game_operator(g, s));
      psi = vecs.col(0);
    }
    int sweeps = 0;
    int stalled = 0;
    for (int it = 0; it < iterations; ++it) {
      // psi as a Q x Q matrix: psi[(a,b)] = Psi(a,b), Alice index first
      Mat psimat(q, q);
      for (int a = 0; a < q; ++a)
        for (int b2 = 0; b2 < q; ++b2) psimat(a, b2) = psi[a * q + b2];

      // Alice update: g_A(x) = Psi K_B(x)^T Psi^dagger
      const auto qmarg = bob_marginals(g, s);
      std::vector<Mat> ga(n);
      for (int x = 0; x < n; ++x) {
        Mat kb = Mat::Zero(q, q);
        for (int y = 0; y < m; ++y)
          if (w(x, y) != 0.0) kb += w(x, y) * qmarg[y];
        ga[x] = linalg::hermitize(psimat * kb.transpose() * psimat.adjoint());
      }
      for (long long qi = 0; qi < qa; ++qi) {
        std::vector<Mat> h(g.gamma);
        for (long long a = 0; a < g.gamma; ++a)
          h[a] = ga[digit(qi, static_cast<int>(a), n)];
        s.alice[qi] = povm_update(h, q, opts.sdp_tol);
      }

      // Bob update: g_B(y) = (Psi^dagger K_A(y) Psi)^T
      const auto pmarg = alice_marginals(g, s);
      std::vector<Mat> gb(m);
      for (int y = 0; y < m; ++y) {
        Mat ka = Mat::Zero(q, q);
        for (int x = 0; x < n; ++x)
          if (w(x, y) != 0.0) ka += w(x, y) * pmarg[x];
        gb[y] = linalg::hermitize((psimat.adjoint() * ka * psimat).transpose());
      }
      for (long long qi = 0; qi < qb; ++qi) {
        std::vector<Mat> h(g.gamma_prime);
        for (long long b2 = 0; b2 < g.gamma_prime; ++b2)
          h[b2] = gb[digit(qi, static_cast<int>(b2), m)];
        s.bob[qi] = povm_update(h, q, opts.sdp_tol);
      }

      // state update and exact value
      auto [vals, vecs] = linalg::herm_eig(game_operator(g, s));
      psi = vecs.col(0);
      const double next_value = std::max(0.0, vals[0]);
      ++sweeps;
      if (next_value <= value + 1e-10 * (1.0 + std::abs(value))) {
        value = std::max(value, next_value);
        if (++stalled >= 2) break;
      } else {
        value = next_value;
        stalled = 0;
      }
    }
    const double exact = strategy_value(g, s);
    if (exact > best.value) {
      best.value = exact;
      best.strategy = std::move(s);
      best.sweeps = sweeps;
    }
  }
  return best;
}

SandwichReport sandwich_check(const FunctionFamily& fam, double k, double k_prime, int q,
                              const extractor::SeesawOptions& opts) {
  SandwichReport rep;
  const GameInstance g = build_game(fam, k, k_prime);
  rep.omega_classical = classical_value(g, opts.enumeration_limit);
  const double norm = condenser::cond_bounded_norm(fam, k, k_prime, opts.enumeration_limit);
  rep.scaled_norm = std::exp2(-k_prime) * norm;
  rep.left_ok = rep.omega_classical <= rep.scaled_norm + 1e-6;
  rep.ratio_classical =
      rep.omega_classical > 0 ? rep.scaled_norm / rep.omega_classical : 0.0;

  const GameSeesawResult gs = entangled_value_lower(g, q, opts);
  rep.entangled_value = gs.value;

  const auto pm = alice_marginals(g, gs.strategy);
  const auto qm = bob_marginals(g, gs.strategy);
  const Mat id = Mat::Identity(q, q);
  Mat psum = Mat::Zero(q, q), qsum = Mat::Zero(q, q);
  rep.margin_alice_cap = 1.0;
  rep.margin_bob_cap = 1.0;
  for (const auto& p : pm) {
    psum += p;
    rep.margin_alice_cap =
        std::min(rep.margin_alice_cap, linalg::min_eig_herm(std::exp2(-k) * id - p));
  }
  for (const auto& qq : qm) {
    qsum += qq;
    rep.margin_bob_cap =
        std::min(rep.margin_bob_cap, linalg::min_eig_herm(std::exp2(-k_prime) * id - qq));
  }
  rep.margin_alice_sum = linalg::min_eig_herm(id - psum);
  rep.margin_bob_sum = linalg::min_eig_herm(id - qsum);

  rep.pairing_from_strategy = strategy_value(g, gs.strategy);

  // warm start the pairing see-saw with the strategy's marginal operators
  condenser::PairingWitness warm;
  warm.input_ops = pm;
  warm.output_ops = qm;
  {
    auto [vals, vecs] = linalg::herm_eig(game_operator(g, gs.strategy));
    Mat psimat(q, q);
    for (int a = 0; a < q; ++a)
      for (int b2 = 0; b2 < q; ++b2) psimat(a, b2) = vecs.col(0)[a * q + b2];
    warm.contraction = psimat.adjoint();
  }
  const auto pairing = condenser::cond_cb_lower_seesaw(fam, k, k_prime, q, opts, {warm});
  rep.cond_pairing_value = pairing.value;
  rep.quantum_ok = gs.value <= rep.cond_pairing_value + 1e-6;
  return rep;
}

}  // namespace extcond::game
