#include "extcond/verify.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "extcond/condenser.hpp"
#include "extcond/extractor.hpp"
#include "extcond/game.hpp"
#include "extcond/linalg.hpp"
#include "extcond/norms.hpp"
#include "extcond/oracles.hpp"
#include "extcond/report.hpp"

namespace extcond::verify {

namespace {

class Suite {
 public:
  explicit Suite(std::string name) : start_(clock_s()) { result_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    if (ok) {
      ++result_.passed;
    } else {
      ++result_.failed;
      if (result_.failures.size() < 8) result_.failures.push_back(what);
    }
  }

  template <typename Fn>
  void check_nothrow(Fn&& fn, const std::string& what) {
    try {
      fn();
    } catch (const std::exception& e) {
      check(false, what + ": " + e.what());
      return;
    }
    check(true, what);
  }

  SuiteResult finish() {
    result_.seconds = clock_s() - start_;
    return result_;
  }

 private:
  static double clock_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  }
  SuiteResult result_;
  double start_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

FunctionFamily random_family_sized(Rng& rng, int nmax, int mmax, int dmax, bool allow_strong) {
  const int n = 1 + rng.below_int(nmax);
  if (allow_strong && rng.below(2) == 0) {
    const int mp = 1 + rng.below_int(mmax);
    const int d = rng.below_int(dmax + 1);
    FunctionFamily weak = random_family(n, mp, 0, rng.next_u64());
    FunctionFamily fam;
    fam.n = n;
    fam.m = d + mp;
    fam.d = d;
    fam.strong_m_prime = mp;
    const int N = fam.input_size(), D = fam.seed_count(), Mp = 1 << mp;
    fam.table.assign(D, std::vector<int>(N, 0));
    for (int s = 0; s < D; ++s)
      for (int x = 0; x < N; ++x) fam.table[s][x] = s * Mp + static_cast<int>(rng.below(Mp));
    fam.validate();
    return fam;
  }
  const int m = 1 + rng.below_int(mmax);
  const int d = rng.below_int(dmax + 1);
  return random_family(n, m, d, rng.next_u64());
}

CqState random_cq_state(Rng& rng, int q, int n) {
  std::vector<Mat> blocks(n);
  double trace = 0.0;
  for (int x = 0; x < n; ++x) {
    blocks[x] = linalg::random_psd(q, rng) * rng.uniform(0.02, 1.0);
    trace += blocks[x].real().trace();
  }
  for (auto& b : blocks) b = linalg::hermitize(b / trace);
  return CqState(q, std::move(blocks));
}

// classical joint distribution on N x E with guessing probability <= 2^{-h}
CqState random_classical_adversary(Rng& rng, int n, int e_dim, double h) {
  Vec joint(n * e_dim);
  for (int i = 0; i < joint.size(); ++i) joint[i] = rng.uniform(0.0, 1.0);
  joint /= joint.sum();
  auto guess = [&](const Vec& p) {
    double g = 0.0;
    for (int e = 0; e < e_dim; ++e) {
      double mx = 0.0;
      for (int x = 0; x < n; ++x) mx = std::max(mx, p[x * e_dim + e]);
      g += mx;
    }
    return g;
  };
  const double target = std::exp2(-h);
  const double g0 = guess(joint);
  if (g0 > target) {
    // mix toward uniform-over-x with the same E marginal
    Vec flat = joint;
    for (int e = 0; e < e_dim; ++e) {
      double marg = 0.0;
      for (int x = 0; x < n; ++x) marg += joint[x * e_dim + e];
      for (int x = 0; x < n; ++x) flat[x * e_dim + e] = marg / n;
    }
    const double gflat = 1.0 / n;
    const double lam = (target - gflat) / (g0 - gflat);
    joint = lam * joint + (1.0 - lam) * flat;
  }
  std::vector<Mat> blocks(n);
  for (int x = 0; x < n; ++x) {
    Mat b = Mat::Zero(e_dim, e_dim);
    for (int e = 0; e < e_dim; ++e) b(e, e) = joint[x * e_dim + e];
    blocks[x] = b;
  }
  return CqState(e_dim, std::move(blocks));
}

SuiteResult criterion_duality(std::uint64_t seed) {
  Suite s("01-cap-sigma-duality");
  Rng rng(seed);
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + rng.below_int(9);
    Vec v(n), w(n);
    for (int j = 0; j < n; ++j) {
      v[j] = rng.gaussian();
      w[j] = rng.gaussian();
    }
    const double k = rng.uniform(0.0, std::log2(static_cast<double>(n)));
    const double lhs = std::abs(v.dot(w));
    const double rhs = norms::cap_norm(v, k) * norms::sigma_norm(w, k);
    s.check(lhs <= rhs + 1e-9, "pairing bound failed: " + fmt(lhs) + " > " + fmt(rhs));
    const double closed = norms::sigma_norm(w, k);
    const double lp = norms::sigma_norm_lp(w, k);
    s.check(std::abs(closed - lp) <= 1e-9,
            "sigma closed form vs LP: " + fmt(closed) + " vs " + fmt(lp));
    const Vec sup = norms::supporting_functional(v, k);
    const double tight = norms::cap_norm(v, k) * norms::cap_dual_norm(sup, k);
    s.check(std::abs(v.dot(sup) - tight) <= 1e-8, "supporting functional not tight");
  }
  return s.finish();
}

SuiteResult criterion_ext_to_norm(std::uint64_t seed) {
  Suite s("02-ext-to-norm");
  Rng rng(seed);
  const long long limit = 1LL << 22;
  for (int i = 0; i < 50; ++i) {
    const FunctionFamily fam = random_family_sized(rng, 4, 2, 2, false);
    for (int k = 1; k <= fam.n; ++k) {
      const double ek = extractor::ext_error(fam, k, limit);
      const double bn = extractor::ext_bounded_norm(fam, k, limit);
      const double ekm1 = extractor::ext_error(fam, k - 1, limit);
      s.check(ek <= bn + 1e-9, "ext_error > bounded_norm: " + fmt(ek) + " > " + fmt(bn));
      s.check(bn <= 3.0 * ekm1 + 1e-9,
              "bounded_norm > 3 ext_error(k-1): " + fmt(bn) + " > 3*" + fmt(ekm1));
    }
  }
  return s.finish();
}

SuiteResult criterion_bipartite(std::uint64_t seed) {
  Suite s("03-densest-subgraph");
  Rng rng(seed);
  const long long limit = 1LL << 22;
  for (int i = 0; i < 30; ++i) {
    const FunctionFamily fam = random_family_sized(rng, 3, 3, 2, false);
    const int k = 1 + rng.below_int(fam.n);
    const int kp = rng.below_int(fam.m + 1);
    const long long kc = 1LL << k, kpc = 1LL << kp;
    const double norm = condenser::cond_bounded_norm(fam, k, kp, limit);
    const auto dense = condenser::densest_subgraph(to_graph(fam), kc, kpc, limit);
    const double lhs = static_cast<double>(kc) * fam.seed_count() * norm;
    s.check(std::abs(lhs - static_cast<double>(dense.value)) <= 1e-6,
            "norm/dense mismatch: " + fmt(lhs) + " vs " + fmt(dense.value));
    const long long brute =
        oracles::densest_subgraph_bruteforce(to_graph(fam), kc, kpc, limit);
    s.check(dense.value == brute,
            "dense vs brute force: " + fmt(dense.value) + " vs " + fmt(brute));
  }
  return s.finish();
}

SuiteResult criterion_sigsig(std::uint64_t seed) {
  Suite s("04-sigsig-strong-duality");
  Rng rng(seed);
  for (int i = 0; i < 50; ++i) {
    const int q = (i % 2 == 0) ? 1 : 1 + rng.below_int(3);
    const int n = 1 + rng.below_int(4);
    std::vector<Mat> blocks(n);
    for (int j = 0; j < n; ++j) blocks[j] = linalg::random_psd(q, rng) * rng.uniform(0.05, 1.0);
    const double k = rng.uniform(0.0, 2.0);
    const auto val = norms::sigsig_norm_pos(blocks, k, 1e-9);
    s.check(std::abs(val.primal - val.dual) <= 1e-6,
            "primal/dual gap: " + fmt(val.primal) + " vs " + fmt(val.dual));
    if (q == 1) {
      Vec xs(n);
      for (int j = 0; j < n; ++j) xs[j] = blocks[j](0, 0).real();
      const double oracle = oracles::water_filling_value(xs, k);
      s.check(std::abs(val.primal - oracle) <= 1e-9,
              "Q=1 vs water filling: " + fmt(val.primal) + " vs " + fmt(oracle));
    }
  }
  return s.finish();
}

SuiteResult criterion_smoothmin(std::uint64_t seed) {
  Suite s("05-smoothmin-sigmanorm");
  Rng rng(seed);
  for (int i = 0; i < 50; ++i) {
    const int q = 1 + rng.below_int(3);
    const int n = 1 + rng.below_int(4);
    const CqState rho = random_cq_state(rng, q, n);
    const double k = static_cast<double>(i % 2);
    const double pairing = norms::capped_overlap_pos(rho.blocks, k, 1e-9);

    // forward: 2^k pairing <= eps implies large smooth entropy at 2 sqrt(eps)
    const double eps1 = std::min(1.0, std::max(1e-6, std::exp2(k) * pairing));
    const double h1 = norms::smooth_cond_min_entropy(rho, std::min(2.0, 2.0 * std::sqrt(eps1)));
    s.check(h1 >= k + std::log2(1.0 / eps1) - 1e-6,
            "forward implication: H=" + fmt(h1) + " eps=" + fmt(eps1));

    // reverse: find the smallest eps with H^eps >= k + log(1/eps), then the
    // pairing is at most 2 eps
    double lo = 1e-4, hi = 1.0;
    auto margin = [&](double eps) {
      return norms::smooth_cond_min_entropy(rho, eps) - std::log2(1.0 / eps) - k;
    };
    if (margin(hi) >= 0.0) {
      for (int it = 0; it < 10; ++it) {
        const double mid = std::sqrt(lo * hi);
        (margin(mid) >= 0.0 ? hi : lo) = mid;
      }
      const double eps2 = hi;  // premise holds here
      s.check(std::exp2(k) * pairing <= 2.0 * eps2 + 1e-6,
              "reverse implication: pairing=" + fmt(pairing) + " eps=" + fmt(eps2));
    } else {
      s.check(true, "reverse premise unattainable");
    }
  }
  return s.finish();
}

SuiteResult criterion_junge(std::uint64_t seed) {
  Suite s("06-junge-povm");
  Rng rng(seed);
  for (int i = 0; i < 100; ++i) {
    const int q = 1 + rng.below_int(3);
    const long long gamma = 1 + rng.below(4);
    const int n = static_cast<int>(gamma) * (1 + rng.below_int(2));
    const double cap = static_cast<double>(n) / (4.0 * static_cast<double>(gamma));
    std::vector<Mat> p(n);
    Mat total = Mat::Zero(q, q);
    for (int x = 0; x < n; ++x) {
      p[x] = linalg::random_psd(q, rng);
      total += p[x];
    }
    const double scale =
        rng.uniform(0.3, 0.999) * std::min(cap / linalg::op_norm(total),
                                           1.0 / (1e-12 + linalg::op_norm(p[0])));
    for (auto& blk : p) blk *= std::min(scale, 1.0);
    auto chk = game::check_junge_lemma(p, gamma, 12, rng);
    s.check(chk.ok, "junge margins: regime=" + fmt(chk.margin_regime) +
                        " povm=" + fmt(chk.margin_povm) + " lin=" + fmt(chk.margin_linear) +
                        " quad=" + fmt(chk.margin_quadratic));
  }
  // scalar closed form: p = 1/(4 gamma) uniform
  for (long long gamma = 1; gamma <= 4; ++gamma) {
    const int n = static_cast<int>(gamma);
    std::vector<Mat> p(n, Mat::Constant(1, 1, 1.0 / (4.0 * static_cast<double>(gamma))));
    Rng r2(seed ^ 0x9e37u);
    auto chk = game::check_junge_lemma(p, gamma, 4, r2);
    const double root = std::sqrt(1.0 - 1.0 / (4.0 * static_cast<double>(gamma)));
    double lin = 0.0, quad = 0.0;
    for (long long a = 1; a <= gamma; ++a) {
      lin += 1.0 - std::pow(root, static_cast<double>(a - 1));
      quad += 1.0 - 2.0 * std::pow(root, static_cast<double>(a - 1)) +
              std::pow(root * root, static_cast<double>(a - 1));
    }
    const double margin_lin = static_cast<double>(gamma) / 8.0 - lin;
    const double margin_quad = static_cast<double>(gamma) / 4.0 - quad;
    s.check(std::abs(chk.margin_linear - margin_lin) <= 1e-12 &&
                std::abs(chk.margin_quadratic - margin_quad) <= 1e-12 && chk.ok,
            "scalar closed form mismatch at gamma=" + fmt(static_cast<double>(gamma)));
  }
  return s.finish();
}

SuiteResult criterion_game(std::uint64_t seed, int threads) {
  Suite s("07-condenser-game");
  Rng rng(seed);
  const long long limit = 1LL << 22;
  extractor::SeesawOptions opts;
  opts.threads = threads;
  opts.restarts = 3;
  opts.iterations = 20;
  opts.enumeration_limit = limit;

  // constant family: omega = 1 - (1 - 1/M)^{gamma'}
  {
    FunctionFamily fam;
    fam.n = 1;
    fam.m = 1;
    fam.d = 0;
    fam.table = {{0, 0}};
    fam.validate();
    const auto g = game::build_game(fam, 0.0, 0.0);  // gamma = gamma' = 2
    const double omega = game::classical_value(g, limit);
    const double closed =
        1.0 - std::pow(1.0 - 1.0 / fam.output_size(), static_cast<double>(g.gamma_prime));
    s.check(std::abs(omega - closed) <= 1e-12,
            "constant-graph omega: " + fmt(omega) + " vs " + fmt(closed));
  }

  int instances = 0;
  std::uint64_t fam_seed = seed;
  while (instances < 6) {
    const FunctionFamily fam = random_family(1, 1, instances % 2, fam_seed++);
    const int k = rng.below_int(2), kp = rng.below_int(2);
    ++instances;
    const auto g = game::build_game(fam, k, kp);
    const double omega = game::classical_value(g, limit);
    const double scaled =
        std::exp2(-kp) * condenser::cond_bounded_norm(fam, k, kp, limit);
    s.check(omega <= scaled + 1e-6,
            "left inequality: omega=" + fmt(omega) + " scaled norm=" + fmt(scaled));
    opts.seed = fam_seed;
    const auto sw = game::sandwich_check(fam, k, kp, 2, opts);
    s.check(sw.left_ok, "sandwich left flag");
    s.check(sw.margin_alice_sum >= -1e-9 && sw.margin_alice_cap >= -1e-9 &&
                sw.margin_bob_sum >= -1e-9 && sw.margin_bob_cap >= -1e-9,
            "strategy-to-operator feasibility margins");
    s.check(sw.entangled_value <= sw.cond_pairing_value + 1e-6,
            "entangled value vs pairing: " + fmt(sw.entangled_value) + " vs " +
                fmt(sw.cond_pairing_value));
    s.check(sw.entangled_value >= omega - 1e-6,
            "entangled below classical: " + fmt(sw.entangled_value) + " < " + fmt(omega));
  }
  return s.finish();
}

SuiteResult criterion_grothendieck(std::uint64_t seed) {
  Suite s("08-grothendieck");
  Rng rng(seed);
  for (int i = 0; i < 100; ++i) {
    RealMat a(6, 6);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) a(r, c) = rng.gaussian();
    const double sign_max = norms::grothendieck_signmax(a, 1LL << 22);
    const double sdp = norms::grothendieck_sdp(a, 1e-8);
    s.check(sdp >= sign_max - 1e-6, "SDP below sign-max: " + fmt(sdp) + " < " + fmt(sign_max));
    s.check(sdp <= 1.8 * sign_max + 1e-6,
            "SDP above K_G sign-max: " + fmt(sdp) + " > 1.8*" + fmt(sign_max));
  }
  return s.finish();
}

SuiteResult criterion_attacks(std::uint64_t seed, int threads) {
  Suite s("09-attack-consistency");
  Rng rng(seed);
  const long long limit = 1LL << 22;
  extractor::SeesawOptions opts;
  opts.threads = threads;
  opts.restarts = 4;
  opts.iterations = 25;
  opts.enumeration_limit = limit;
  const std::vector<int> qs{1, 2, 4};

  for (int i = 0; i < 20; ++i) {
    const int n = 2 + rng.below_int(2);  // 2..3
    const bool strong = (i % 2 == 1);
    FunctionFamily fam;
    if (strong) {
      const int d = 1, mp = 1;
      fam.n = n;
      fam.m = d + mp;
      fam.d = d;
      fam.strong_m_prime = mp;
      fam.table.assign(1 << d, std::vector<int>(1 << n, 0));
      for (int sd = 0; sd < (1 << d); ++sd)
        for (int x = 0; x < (1 << n); ++x)
          fam.table[sd][x] = sd * (1 << mp) + static_cast<int>(rng.below(1 << mp));
      fam.validate();
    } else {
      fam = random_family(n, 1 + rng.below_int(2), rng.below_int(2), rng.next_u64());
    }
    const double k = 1.0;
    const double eps = extractor::ext_error(fam, k, limit);
    opts.seed = seed + 1000 * i;
    const auto profile = extractor::cb_lower_profile(fam, k, qs, opts);
    s.check(std::abs(profile.at(1).value - eps) <= 1e-6,
            "Q=1 see-saw vs classical: " + fmt(profile.at(1).value) + " vs " + fmt(eps));
    s.check(profile.at(2).value >= profile.at(1).value - 1e-8 &&
                profile.at(4).value >= profile.at(2).value - 1e-8,
            "cb_lower not nondecreasing in Q");
    for (const auto& [q, res] : profile) {
      const double recheck = extractor::attack_value(fam, res.witness);
      s.check(std::abs(recheck - res.value) <= 1e-9, "witness re-evaluation mismatch");
    }

    if (eps > 0.0 && eps <= 1.0) {
      const auto ub = extractor::cb_upper_bounds(fam, k, eps);
      if (k + 1.0 <= fam.n) {
        const auto shifted = extractor::cb_lower_profile(fam, k + 1.0, qs, opts);
        for (const auto& [q, res] : shifted) {
          s.check(res.value <= ub.dim.eps_bound + 1e-6,
                  "attack exceeds dimension bound: " + fmt(res.value) + " > " +
                      fmt(ub.dim.eps_bound));
          s.check(res.value <= ub.high_entropy.eps_bound + 1e-6,
                  "attack exceeds high-entropy bound: " + fmt(res.value) + " > " +
                      fmt(ub.high_entropy.eps_bound));
        }
      }
      if (ub.small_output && ub.small_output->k_shift <= fam.n) {
        const auto shifted =
            extractor::cb_lower_profile(fam, ub.small_output->k_shift, qs, opts);
        for (const auto& [q, res] : shifted)
          s.check(res.value <= ub.small_output->eps_bound + 1e-6,
                  "attack exceeds small-output bound: " + fmt(res.value) + " > " +
                      fmt(ub.small_output->eps_bound));
      }
    }
  }
  return s.finish();
}

SuiteResult criterion_koenig_terhal(std::uint64_t seed) {
  Suite s("10-classical-adversary-audit");
  Rng rng(seed);
  const long long limit = 1LL << 22;
  int done = 0;
  std::uint64_t fam_seed = seed;
  while (done < 100) {
    const FunctionFamily fam = random_family(3, 1, 0, fam_seed++);
    const double k = 1.0;
    const double eps = extractor::ext_error(fam, k, limit);
    if (eps <= 1e-6) continue;
    const double h = k + std::log2(1.0 / eps);
    if (h > fam.n) continue;
    for (int t = 0; t < 10 && done < 100; ++t, ++done) {
      const CqState rho = random_classical_adversary(rng, fam.input_size(), 4, h);
      const double attack = extractor::attack_value(fam, rho);
      s.check(attack <= 2.0 * eps + 1e-6,
              "classical adversary beats 2 eps: " + fmt(attack) + " > 2*" + fmt(eps));
    }
  }
  return s.finish();
}

SuiteResult criterion_solver(std::uint64_t seed) {
  Suite s("11-sdp-analytic-programs");
  Rng rng(seed);
  {
    // eigenvalue program
    const Mat a = linalg::random_herm(4, rng);
    SdpBuilder b;
    auto x = b.add_psd(4);
    SdpBuilder::ScalarExpr tr;
    tr.add_trace(x, 1.0);
    b.require_scalar_eq(tr, 1.0);
    SdpBuilder::ScalarExpr obj;
    obj.add_term(x, a);
    b.maximize(obj);
    const auto sol = solve_sdp(b.problem(), 1e-9, 200);
    const double lmax = linalg::herm_eig(a).first[0];
    s.check(sol.status == SdpStatus::optimal && std::abs(sol.primal_value - lmax) <= 1e-7,
            "eigenvalue program: " + fmt(sol.primal_value) + " vs " + fmt(lmax));
  }
  {
    // identity bound: min Tr X s.t. X >= I_3
    SdpBuilder b;
    auto x = b.add_psd(3);
    b.require_le(SdpBuilder::Expr::constant(Mat::Identity(3, 3)), b.expr_of(x));
    SdpBuilder::ScalarExpr obj;
    obj.add_trace(x, 1.0);
    b.minimize(obj);
    const auto sol = solve_sdp(b.problem(), 1e-9, 200);
    s.check(sol.status == SdpStatus::optimal && std::abs(sol.primal_value - 3.0) <= 1e-7,
            "identity bound: " + fmt(sol.primal_value));
  }
  {
    // guessing probability of diag(0.5, 0.3, 0.2)
    std::vector<Mat> blocks{Mat::Constant(1, 1, 0.5), Mat::Constant(1, 1, 0.3),
                            Mat::Constant(1, 1, 0.2)};
    const double h = norms::cond_min_entropy(CqState(1, blocks), 1e-9);
    s.check(std::abs(std::exp2(-h) - 0.5) <= 1e-7, "guessing probability: " + fmt(std::exp2(-h)));
  }
  {
    // sigma-sigma instance: Q=1, X=(0.5,0.3,0.2), k=1 -> 0.4
    std::vector<Mat> blocks{Mat::Constant(1, 1, 0.5), Mat::Constant(1, 1, 0.3),
                            Mat::Constant(1, 1, 0.2)};
    const auto val = norms::sigsig_norm_pos(blocks, 1.0, 1e-9);
    s.check(std::abs(val.primal - 0.4) <= 1e-7 && std::abs(val.dual - 0.4) <= 1e-7,
            "sigsig instance: " + fmt(val.primal) + ", " + fmt(val.dual));
  }
  {
    // smooth min-entropy LP: P=(0.75,0.25), eps=0.5 -> 1 bit
    Vec p(2);
    p << 0.75, 0.25;
    const double h = norms::smooth_min_entropy_lp(Distribution(p), 0.5, 1e-10);
    s.check(std::abs(h - 1.0) <= 1e-7, "smooth min-entropy LP: " + fmt(h));
  }
  return s.finish();
}

SuiteResult property_model(std::uint64_t seed) {
  Suite s("model-round-trips");
  Rng rng(seed);
  for (int i = 0; i < 20; ++i) {
    const FunctionFamily fam = random_family_sized(rng, 4, 3, 2, true);
    const FunctionFamily back = FunctionFamily::from_json(fam.to_json());
    s.check(back.table == fam.table && back.n == fam.n && back.m == fam.m && back.d == fam.d &&
                back.strong_m_prime == fam.strong_m_prime,
            "family JSON round trip");
    const FunctionFamily regraph = from_graph(to_graph(fam));
    s.check(regraph.table == fam.table, "graph round trip");
  }
  {
    const FunctionFamily a = random_family(3, 2, 2, 77);
    const FunctionFamily b = random_family(3, 2, 2, 77);
    s.check(a.table == b.table, "random_family determinism");
  }
  {
    // PRNG uniformity: empirical mean over 10^4 draws within 3 sigma
    const int m = 3, M = 1 << m;
    Rng r(seed ^ 0xabcdu);
    double sum = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) sum += static_cast<double>(r.below(M));
    const double mean = sum / draws;
    const double expect = (M - 1) / 2.0;
    const double sigma = std::sqrt((M * M - 1.0) / 12.0 / draws);
    s.check(std::abs(mean - expect) <= 3.0 * sigma, "PRNG uniformity: " + fmt(mean));
  }
  {
    const Distribution u = Distribution::uniform(8);
    s.check(std::abs(norms::min_entropy(u) - 3.0) <= 1e-12, "uniform min-entropy");
    Vec bad(2);
    bad << 0.6, 0.6;
    bool threw = false;
    try {
      Distribution d(bad);
    } catch (const ValidationError&) {
      threw = true;
    }
    s.check(threw, "distribution validation rejects bad sum");
  }
  return s.finish();
}

SuiteResult property_linalg(std::uint64_t seed) {
  Suite s("linalg-norm-identities");
  Rng rng(seed);
  for (int i = 0; i < 10; ++i) {
    const int da = 2 + rng.below_int(3), db = 2 + rng.below_int(3);
    Mat a(da, da), b(db, db);
    for (int r = 0; r < da; ++r)
      for (int c = 0; c < da; ++c) a(r, c) = std::complex<double>(rng.gaussian(), rng.gaussian());
    for (int r = 0; r < db; ++r)
      for (int c = 0; c < db; ++c) b(r, c) = std::complex<double>(rng.gaussian(), rng.gaussian());
    s.check(std::abs(linalg::op_norm(linalg::kron(a, b)) -
                     linalg::op_norm(a) * linalg::op_norm(b)) <= 1e-9,
            "operator norm multiplicativity");
  }
  for (int i = 0; i < 10; ++i) {
    Mat a(4, 4);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) a(r, c) = std::complex<double>(rng.gaussian(), rng.gaussian());
    const double tn = linalg::trace_norm(a);
    const double viaU = oracles::trace_norm_unitary_ascent(a, rng);
    const double viaDil = oracles::trace_norm_dilation(a);
    s.check(std::abs(tn - viaU) <= 1e-6, "trace norm vs unitary ascent");
    s.check(std::abs(tn - viaDil) <= 1e-9, "trace norm vs dilation");
  }
  for (int i = 0; i < 10; ++i) {
    const Mat a = linalg::random_herm(5, rng);
    auto [vals, vecs] = linalg::herm_eig(a);
    const Mat back = vecs * vals.asDiagonal() * vecs.adjoint();
    s.check((back - a).cwiseAbs().maxCoeff() <= 1e-9, "eigendecomposition reconstruction");
    for (int j = 0; j + 1 < vals.size(); ++j)
      s.check(vals[j] >= vals[j + 1], "eigenvalue ordering");
  }
  return s.finish();
}

SuiteResult property_norms(std::uint64_t seed) {
  Suite s("norms-matrix-identities");
  Rng rng(seed);
  for (int i = 0; i < 15; ++i) {
    const int q = 1 + rng.below_int(3), n = 1 + rng.below_int(3);
    std::vector<Mat> blocks(n);
    for (int j = 0; j < n; ++j) blocks[j] = linalg::random_psd(q, rng) * rng.uniform(0.1, 1.0);
    const double k = rng.uniform(0.0, 2.0);
    const double capcap = norms::capcap_norm_pos(blocks, k);
    // assemble the block-diagonal matrix on Q (x) N
    Mat x = Mat::Zero(q * n, q * n);
    double maxop = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int r = 0; r < q; ++r)
        for (int c = 0; c < q; ++c) x(r * n + j, c * n + j) = blocks[j](r, c);
      maxop = std::max(maxop, linalg::op_norm(blocks[j]));
    }
    const double io = norms::infty_one_norm_pos(x, q, n, 1e-9);
    s.check(std::abs(capcap - std::max(std::exp2(k) * maxop, io)) <= 1e-8,
            "intersection norm identity: " + fmt(capcap) + " vs io " + fmt(io));
    // polar factorization reproduces the norm
    const Mat root = linalg::psd_sqrt(x, 1e-8);
    const double upper = norms::capcap_upper(root, root, q, n, k);
    s.check(std::abs(upper - capcap) <= 1e-8, "polar factorization upper bound tight");
    // generic factorizations stay above
    const Mat u = linalg::random_unitary(q * n, rng);
    const double loose = norms::capcap_upper(root * u, root * u, q, n, k);
    s.check(loose >= capcap - 1e-8, "factorization upper bound property");
  }
  for (int i = 0; i < 10; ++i) {
    // sigma monotonicity on nonnegative vectors
    const int n = 2 + rng.below_int(6);
    Vec a(n), b(n);
    for (int j = 0; j < n; ++j) {
      a[j] = std::abs(rng.gaussian());
      b[j] = std::abs(rng.gaussian());
    }
    const double k = rng.uniform(0.0, 2.0);
    s.check(norms::sigma_norm(a + b, k) >= norms::sigma_norm(a, k) - 1e-12,
            "sigma monotone under nonnegative addition");
  }
  {
    // smooth entropies: Q=1 diagonal matches the distribution version
    for (int i = 0; i < 8; ++i) {
      const int n = 2 + rng.below_int(4);
      Vec p(n);
      for (int j = 0; j < n; ++j) p[j] = rng.uniform(0.01, 1.0);
      p /= p.sum();
      const double eps = rng.uniform(0.0, 0.8);
      const Distribution dist(p);
      const CqState cq = CqState::classical(dist);
      const double a = norms::smooth_min_entropy(dist, eps);
      const double b = norms::smooth_cond_min_entropy(cq, eps, 1e-9);
      const double c = norms::smooth_min_entropy_lp(dist, eps);
      s.check(std::abs(a - b) <= 1e-6, "smooth entropy cq vs classical: " + fmt(a) + " vs " + fmt(b));
      s.check(std::abs(a - c) <= 1e-6, "smooth entropy closed form vs LP");
      s.check(norms::smooth_min_entropy(dist, std::min(2.0, eps + 0.1)) >= a - 1e-12,
              "smooth entropy monotone in eps");
    }
  }
  {
    // conditional min-entropy examples
    std::vector<Mat> corr(2);
    corr[0] = Mat::Zero(2, 2);
    corr[0](0, 0) = 0.5;
    corr[1] = Mat::Zero(2, 2);
    corr[1](1, 1) = 0.5;
    s.check(std::abs(norms::cond_min_entropy(CqState(2, corr), 1e-9)) <= 1e-7,
            "correlated state has zero conditional entropy");
    std::vector<Mat> prod(2, Mat::Identity(2, 2) * 0.25);
    s.check(std::abs(norms::cond_min_entropy(CqState(2, prod), 1e-9) - 1.0) <= 1e-7,
            "product state conditional entropy");
  }
  return s.finish();
}

SuiteResult property_extractor(std::uint64_t seed) {
  Suite s("extractor-map-properties");
  Rng rng(seed);
  for (int i = 0; i < 10; ++i) {
    const FunctionFamily fam = random_family_sized(rng, 3, 2, 2, false);
    const int N = fam.input_size();
    Vec v(N), w(N);
    for (int j = 0; j < N; ++j) {
      v[j] = rng.gaussian();
      w[j] = rng.gaussian();
    }
    const double a = rng.gaussian(), b = rng.gaussian();
    const Vec lhs = extractor::delta_map(fam, a * v + b * w);
    const Vec rhs = a * extractor::delta_map(fam, v) + b * extractor::delta_map(fam, w);
    s.check((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12, "delta map linearity");
    // ext_error nonincreasing in k
    double prev = 2.0;
    for (int k = 0; k <= fam.n; ++k) {
      const double e = extractor::ext_error(fam, k, 1 << 20);
      s.check(e <= prev + 1e-12, "ext_error nonincreasing in k");
      prev = e;
    }
  }
  {
    // permutation family fixes the uniform distribution
    FunctionFamily perm;
    perm.n = 2;
    perm.m = 2;
    perm.d = 1;
    perm.table = {{0, 1, 2, 3}, {3, 2, 1, 0}};
    perm.validate();
    const Vec img = extractor::delta_map(perm, Vec::Constant(4, 0.25));
    s.check(img.cwiseAbs().maxCoeff() <= 1e-15, "permutation family fixes uniform");
    // identity family: only the uniform source is feasible at k = n
    FunctionFamily id;
    id.n = 1;
    id.m = 1;
    id.d = 0;
    id.table = {{0, 1}};
    id.validate();
    s.check(std::abs(extractor::ext_error(id, 1.0, 1 << 20)) <= 1e-15,
            "identity family is a perfect (n, 0)-extractor");
    s.check(std::abs(extractor::ext_bounded_norm(id, 1.0, 1 << 20) - 1.0) <= 1e-12,
            "identity family bounded norm");
  }
  {
    // primal vertex enumeration equals dual sign enumeration
    for (int i = 0; i < 6; ++i) {
      const FunctionFamily fam = random_family(2 + (i % 2), 1, 1, seed + i);
      for (int k = 1; k <= fam.n; ++k) {
        const double dual = extractor::ext_bounded_norm(fam, k, 1 << 20);
        const double primal = oracles::ext_primal_norm_bruteforce(fam, k, 1 << 20);
        s.check(std::abs(dual - primal) <= 1e-9,
                "primal vs dual bounded norm: " + fmt(primal) + " vs " + fmt(dual));
      }
    }
  }
  return s.finish();
}

SuiteResult property_condenser(std::uint64_t seed) {
  Suite s("condenser-properties");
  Rng rng(seed);
  const long long limit = 1LL << 22;
  {
    FunctionFamily id;
    id.n = 1;
    id.m = 1;
    id.d = 0;
    id.table = {{0, 1}};
    id.validate();
    s.check(condenser::is_condenser(id, 1.0, 1.0, 0.0, limit).ok, "identity family condenses");
    s.check(std::abs(condenser::cond_bounded_norm(id, 1.0, 1.0, limit) - 1.0) <= 1e-12,
            "identity condenser norm");
    s.check(condenser::check_densest_equivalence(id, 1.0, 1.0, limit), "identity equivalence");
    FunctionFamily cst;
    cst.n = 1;
    cst.m = 1;
    cst.d = 0;
    cst.table = {{0, 0}};
    cst.validate();
    const auto chk = condenser::is_condenser(cst, 1.0, 1.0, 0.5, limit);
    s.check(!chk.ok && chk.witness.has_value(), "constant family fails with witness");
    s.check(std::abs(condenser::cond_bounded_norm(cst, 1.0, 0.0, limit) - 1.0) <= 1e-12,
            "constant family k'=0 norm");
    s.check(condenser::check_densest_equivalence(cst, 1.0, 0.0, limit), "constant equivalence");
  }
  // norm characterization both directions (Prop cond-to-norm)
  for (int i = 0; i < 12; ++i) {
    const FunctionFamily fam = random_family_sized(rng, 3, 3, 1, false);
    const int k = 1 + rng.below_int(fam.n);
    const int kp = rng.below_int(fam.m + 1);
    const double norm = condenser::cond_bounded_norm(fam, k, kp, limit);
    if (norm > 1e-9 && norm <= 1.0) {
      const double eps = norm;
      const double kp_shift = kp + std::log2(1.0 / eps);
      if (kp_shift <= fam.m) {
        const auto chk = condenser::is_condenser(fam, k, kp_shift, eps, limit);
        s.check(chk.ok, "norm <= eps implies condenser at shifted k'");
      }
    }
    // reverse: condenser at k-1 implies norm <= 6 eps
    for (double eps : {0.25, 0.5}) {
      const double kp_shift = kp + std::log2(1.0 / eps);
      if (kp_shift > fam.m || k - 1 < 0) continue;
      const auto chk = condenser::is_condenser(fam, k - 1, kp_shift, eps, limit);
      if (chk.ok)
        s.check(norm <= 6.0 * eps + 1e-9,
                "condenser at k-1 but norm > 6 eps: " + fmt(norm) + " eps " + fmt(eps));
    }
  }
  // relaxation upper bounds the exact value
  for (int i = 0; i < 5; ++i) {
    const FunctionFamily fam = random_family(2, 2, 1, seed + i);
    const auto dense = condenser::densest_subgraph(to_graph(fam), 2, 2, limit);
    const double relax = condenser::densest_sdp_relaxation(to_graph(fam), 2, 2, 1e-8);
    s.check(relax >= static_cast<double>(dense.value) - 1e-6,
            "Gram relaxation below exact dense value");
  }
  return s.finish();
}

SuiteResult property_seesaw(std::uint64_t seed, int threads) {
  Suite s("seesaw-pairing-consistency");
  Rng rng(seed);
  const long long limit = 1LL << 22;
  extractor::SeesawOptions opts;
  opts.threads = threads;
  opts.restarts = 3;
  opts.iterations = 15;
  opts.seed = seed;
  opts.enumeration_limit = limit;
  for (int i = 0; i < 4; ++i) {
    const FunctionFamily fam = random_family(2, 1 + (i % 2), 1, seed + 31 * i);
    const double k = 1.0, kp = i % 2 ? 1.0 : 0.0;
    const auto res = condenser::cond_cb_lower_seesaw(fam, k, kp, 1, opts);
    const double classical =
        std::exp2(-kp) * condenser::cond_bounded_norm(fam, k, kp, limit);
    s.check(std::abs(res.value - classical) <= 1e-6,
            "Q=1 pairing vs scaled norm: " + fmt(res.value) + " vs " + fmt(classical));
    const double recheck = condenser::pairing_value(fam, res.witness);
    s.check(std::abs(recheck - res.value) <= 1e-12, "pairing witness re-evaluation");
    const auto res2 = condenser::cond_cb_lower_seesaw(fam, k, kp, 2, opts, {res.witness});
    s.check(res2.value >= res.value - 1e-8, "pairing nondecreasing in Q");
  }
  return s.finish();
}

}  // namespace

std::vector<SuiteResult> run_acceptance_criteria(std::uint64_t seed, int threads) {
  std::vector<SuiteResult> out;
  out.push_back(criterion_duality(seed + 1));
  out.push_back(criterion_ext_to_norm(seed + 2));
  out.push_back(criterion_bipartite(seed + 3));
  out.push_back(criterion_sigsig(seed + 4));
  out.push_back(criterion_smoothmin(seed + 5));
  out.push_back(criterion_junge(seed + 6));
  out.push_back(criterion_game(seed + 7, threads));
  out.push_back(criterion_grothendieck(seed + 8));
  out.push_back(criterion_attacks(seed + 9, threads));
  out.push_back(criterion_koenig_terhal(seed + 10));
  out.push_back(criterion_solver(seed + 11));
  return out;
}

std::vector<SuiteResult> run_module_properties(std::uint64_t seed, int threads) {
  std::vector<SuiteResult> out;
  out.push_back(property_model(seed + 21));
  out.push_back(property_linalg(seed + 22));
  out.push_back(property_norms(seed + 23));
  out.push_back(property_extractor(seed + 24));
  out.push_back(property_condenser(seed + 25));
  out.push_back(property_seesaw(seed + 26, threads));
  return out;
}

}  // namespace extcond::verify
