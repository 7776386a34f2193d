#pragma once

#include "extcond/model.hpp"

namespace extcond::oracles {

// Primal route to the extractor bounded norm: enumerate every signed
// cap-ball vertex (+-2^{-k} on 2^k-subsets) and take the worst l1 image.
// Independent of the dual sign-enumeration path.
double ext_primal_norm_bruteforce(const FunctionFamily& fam, double k, long long limit);

// Full 0/1 quadratic program for the densest (K, K')-subgraph: both sides
// enumerated, no greedy step.
long long densest_subgraph_bruteforce(const BipartiteGraph& g, long long k_left,
                                      long long k_right, long long limit);

// Greedy water-filling value max{sum x_j y_j : 0 <= y_j <= 2^{-k}, sum y <= 1}
// for nonnegative scalars; the Q = 1 face of the sigma-sigma program.
double water_filling_value(const Vec& xs, double k);

// Hill-climbing max |Tr[A U]| over unitaries from random starts; ascends by
// polar-factor iterations.
double trace_norm_unitary_ascent(const Mat& a, Rng& rng, int restarts = 4, int iters = 40);

// Trace norm through the Hermitian dilation [[0, A], [A*, 0]]: half the sum
// of absolute eigenvalues.
double trace_norm_dilation(const Mat& a);

}  // namespace extcond::oracles
