#pragma once

#include "extcond/condenser.hpp"
#include "extcond/model.hpp"

namespace extcond::game {

// Two-player game on the family's graph: the referee draws gamma left
// candidates, gamma' right candidates and a seed; the players point at one
// candidate each and win if the edge relation holds.
struct GameInstance {
  BipartiteGraph graph;
  double k = 0.0;
  double k_prime = 0.0;
  long long gamma = 1;        // 2^{n-k}
  long long gamma_prime = 1;  // 2^{m-k'}

  long long alice_questions() const;  // N^gamma
  long long bob_questions() const;    // M^gamma'
};

GameInstance build_game(const FunctionFamily& fam, double k, double k_prime);

// Exact classical value by exhaustive enumeration of deterministic
// strategies; the per-strategy expectation is computed through the chosen
// vertex distributions, which factorize over the two players.
double classical_value(const GameInstance& g, long long limit);
// Optimal deterministic pair (flat encodings) alongside the value.
struct ClassicalStrategy {
  double value = 0.0;
  std::vector<int> alice;  // answer per flat Alice question
  std::vector<int> bob;
};
ClassicalStrategy classical_value_with_strategy(const GameInstance& g, long long limit);

// Ordered square-root product POVMs from marginal operators along one
// question vector. Requires 0 <= p(x) <= 1.
std::vector<Mat> junge_povms(const std::vector<Mat>& marginals, const std::vector<int>& question);

struct JungeCheck {
  bool ok = false;
  double margin_regime = 0.0;     // (2^k/4) I - sum p
  double margin_povm = 0.0;       // I - sum_a povm(a), worst sampled question
  double margin_linear = 0.0;     // (gamma/8) I - sum_a E[1 - r]
  double margin_quadratic = 0.0;  // (gamma/4) I - sum_a E[(1-r*)(1-r)]
};

// Verifies the sub-POVM property plus the two expectation bounds; the
// expectations over question prefixes factor into powers of single-step
// averages and are evaluated exactly.
JungeCheck check_junge_lemma(const std::vector<Mat>& marginals, long long gamma, int samples,
                             Rng& rng);

struct QuantumStrategy {
  int q_dim = 1;
  std::vector<std::vector<Mat>> alice;  // [flat question][answer], sub-POVM each
  std::vector<std::vector<Mat>> bob;

  void validate(const GameInstance& g) const;
};

// Marginal operators p(x') = sum_a E[delta_{x(a)=x'} povm(a; x)].
std::vector<Mat> alice_marginals(const GameInstance& g, const QuantumStrategy& s);
std::vector<Mat> bob_marginals(const GameInstance& g, const QuantumStrategy& s);

// Game operator sum_{x,y} Es Gamma[x,s;y] p(x) (x) q(y) on Q^2.
Mat game_operator(const GameInstance& g, const QuantumStrategy& s);

// omega*_Q of a fixed strategy: the operator norm of the game operator.
double strategy_value(const GameInstance& g, const QuantumStrategy& s);

QuantumStrategy embed_classical(const GameInstance& g, const std::vector<int>& alice,
                                const std::vector<int>& bob, int q);

struct GameSeesawResult {
  double value = 0.0;
  QuantumStrategy strategy;
  int sweeps = 0;
};

// See-saw over Alice POVMs, Bob POVMs (per-question SDPs) and the shared
// state (top eigenvector); certified lower bound on omega*_Q.
GameSeesawResult entangled_value_lower(const GameInstance& g, int q,
                                       const extractor::SeesawOptions& opts);

struct SandwichReport {
  double omega_classical = 0.0;
  double scaled_norm = 0.0;  // 2^{-k'} * cond_bounded_norm
  bool left_ok = false;
  double ratio_classical = 0.0;  // scaled_norm / omega
  double entangled_value = 0.0;
  double pairing_from_strategy = 0.0;  // opnorm of the marginal pairing
  double margin_alice_sum = 0.0;       // I - sum_x p(x)
  double margin_alice_cap = 0.0;       // 2^{-k} I - p(x), worst x
  double margin_bob_sum = 0.0;
  double margin_bob_cap = 0.0;
  double cond_pairing_value = 0.0;  // warm-started pairing see-saw
  bool quantum_ok = false;
};

// Verifies the classical inequality omega <= 2^{-k'} norm, builds condenser
// operators out of the best found strategy, checks their cap-ball
// feasibility and closes the loop through the pairing see-saw.
SandwichReport sandwich_check(const FunctionFamily& fam, double k, double k_prime, int q,
                              const extractor::SeesawOptions& opts);

}  // namespace extcond::game
