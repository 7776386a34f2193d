#pragma once

#include <optional>

#include "extcond/extractor.hpp"
#include "extcond/model.hpp"

namespace extcond::condenser {

// M x N column-stochastic matrix (1/D) sum_s F_s.
RealMat cond_matrix(const FunctionFamily& fam);

Vec cond_map(const FunctionFamily& fam, const Vec& v);
Vec cond_map_strong(const FunctionFamily& fam, const Vec& v);

struct CondenserCheck {
  bool ok = false;
  std::optional<Distribution> witness;  // violating source when !ok
};

// True iff every flat source with min-entropy k condenses to smooth
// min-entropy at least k' at smoothing eps.
CondenserCheck is_condenser(const FunctionFamily& fam, double k, double k_prime, double eps,
                            long long limit);

// Exact norm cap{2^k linf, l1} -> sigma{2^k' linf, l1}: maximum of the
// sigma norm of the condensed output over nonnegative cap-ball vertices.
double cond_bounded_norm(const FunctionFamily& fam, double k, double k_prime, long long limit);
std::pair<double, Distribution> cond_bounded_norm_with_witness(const FunctionFamily& fam, double k,
                                                               double k_prime, long long limit);

struct DenseResult {
  long long value = 0;
  std::vector<int> left;
  std::vector<int> right;
};

// Exact densest (K, K')-subgraph value with parallel edges counted by
// multiplicity; enumerates the smaller side and greedily scores the other,
// which is exact because the objective separates once one side is fixed.
DenseResult densest_subgraph(const BipartiteGraph& g, long long k_left, long long k_right,
                             long long limit);

// |2^{k+d} * bounded_norm - Dense| <= 1e-6.
bool check_densest_equivalence(const FunctionFamily& fam, double k, double k_prime,
                               long long limit);

// Gram relaxation of the 0/1 quadratic program; report-only upper bound.
double densest_sdp_relaxation(const BipartiteGraph& g, long long k_left, long long k_right,
                              double tol = 1e-8);

struct PairingWitness {
  std::vector<Mat> input_ops;   // p(x), N blocks
  std::vector<Mat> output_ops;  // y(j), M blocks
  Mat contraction;              // C with Tr[C* C] <= 1
};

// Objective Tr[sum_j ([Con]p)(j) C* y(j)^T C] of a pairing witness.
double pairing_value(const FunctionFamily& fam, const PairingWitness& w);

struct CondSeesawResult {
  double value = 0.0;
  PairingWitness witness;
  int sweeps = 0;
};

// Lower bound on the 2^{-k'}-scaled Q-restricted completely bounded norm
// by alternating SDP updates of the input block, the output test block,
// and the contraction (a top-eigenvector step).
CondSeesawResult cond_cb_lower_seesaw(const FunctionFamily& fam, double k, double k_prime, int q,
                                      const extractor::SeesawOptions& opts,
                                      const std::vector<PairingWitness>& extra_inits = {});

}  // namespace extcond::condenser
