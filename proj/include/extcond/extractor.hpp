#pragma once

#include <map>
#include <optional>

#include "extcond/model.hpp"

namespace extcond::extractor {

// M x N matrix of the centered extractor map: row y, column x holds
// (1/D) #{s : f_s(x) = y} - 1/M.
RealMat delta_matrix(const FunctionFamily& fam);

// (1/D) sum_s F_s(v) - (1^T v) * uniform_M.
Vec delta_map(const FunctionFamily& fam, const Vec& v);

// Strong variant under the seed-in-high-bits output encoding; requires the
// family to be declared strong (the map itself then coincides with the weak
// one on the product output space).
Vec delta_map_strong(const FunctionFamily& fam, const Vec& v);

// Exact extractor error at min-entropy k: the maximum of ||Delta(P)||_1
// over flat sources on 2^k-subsets. Exact mode needs integer 2^k.
double ext_error(const FunctionFamily& fam, double k, long long limit);
std::pair<double, Distribution> ext_error_with_witness(const FunctionFamily& fam, double k,
                                                       long long limit);

// Exact bounded norm cap{2^k linf, l1} -> l1 via sign enumeration on the
// output side and the closed-form dual norm on each sign pattern.
double ext_bounded_norm(const FunctionFamily& fam, double k, long long limit);

// ||(1/D) sum_s (id (x) F_s)(rho) - rho_Q (x) uniform_M||_1 for a cq attack
// state; the blocks stay cq so this is a sum of block trace norms.
double attack_value(const FunctionFamily& fam, const CqState& rho);

// Output blocks of the centered map applied to a cq state.
std::vector<Mat> delta_blocks(const FunctionFamily& fam, const CqState& rho);

struct SeesawOptions {
  int iterations = 50;
  int restarts = 8;
  std::uint64_t seed = 1;
  double sdp_tol = 1e-9;
  int threads = 0;
  long long enumeration_limit = 1LL << 22;
};

struct AttackResult {
  double value = 0.0;  // exact attack_value of the witness
  CqState witness;
  int sweeps = 0;
};

// Alternating optimization for a lower bound on the fixed-Q attack value
// over cq states with H_min(N|Q) >= k: states are optimized by SDP under
// rho(x) <= 2^{-k} omega, Tr omega = 1; the output contraction is the
// Hermitian sign of the current output blocks. Extra initial states (for
// example witnesses carried from smaller Q) may be supplied.
AttackResult cb_lower_seesaw(const FunctionFamily& fam, double k, int q,
                             const SeesawOptions& opts,
                             const std::vector<CqState>& extra_inits = {});

// Runs the see-saw for each Q in ascending order, carrying witnesses
// upward so the reported values are nondecreasing in Q.
std::map<int, AttackResult> cb_lower_profile(const FunctionFamily& fam, double k,
                                             std::vector<int> q_dims, const SeesawOptions& opts);

struct BoundPair {
  double k_shift = 0.0;
  double eps_bound = 0.0;
};

// The three quantum-proofness upper bounds for a (k, eps)-extractor:
// output-dimension, small-output (strong families only), and
// high-min-entropy with K_G = 1.8.
struct UpperBounds {
  BoundPair dim;
  std::optional<BoundPair> small_output;
  BoundPair high_entropy;
};

UpperBounds cb_upper_bounds(const FunctionFamily& fam, double k, double eps_classical);

inline constexpr double kGrothendieck = 1.8;

}  // namespace extcond::extractor
