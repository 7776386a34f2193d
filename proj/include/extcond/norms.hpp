#pragma once

#include <vector>

#include "extcond/model.hpp"

namespace extcond::norms {

// max{2^k ||v||_inf, ||v||_1}; the source-side norm.
double cap_norm(const Vec& v, double k);

// inf{2^k ||v1||_inf + ||v2||_1 : v1 + v2 = v}; the condenser output norm.
// Computed exactly at the breakpoints of the threshold objective
// 2^k t + sum_i (|v_i| - t)_+.
double sigma_norm(const Vec& v, double k);

// Dual norm of cap_norm: inf{2^{-k} ||w1||_1 + ||w2||_inf}, evaluated as
// inf_t [t + 2^{-k} sum_i (|w_i| - t)_+].
double cap_dual_norm(const Vec& w, double k);

// A functional w with <v, w> = cap_norm(v, k) and cap_dual_norm(w, k) = 1.
Vec supporting_functional(const Vec& v, double k);

// |<v,w>| <= cap_norm(v) * sigma_norm(w) + tol. The bound holds with slack
// 2^{-k}; equality lives in the tight pairing against cap_dual_norm.
bool dual_pairing_check(const Vec& v, const Vec& w, double k, double tol = 1e-9);

// LP oracle for sigma_norm over explicit splits v = v1 + v2 (test support).
double sigma_norm_lp(const Vec& v, double k, double tol = 1e-10);

double min_entropy(const Distribution& p);

// Best min-entropy within total-variation eps of p, over normalized
// distributions. Water-filling closed form of the defining LP.
double smooth_min_entropy(const Distribution& p, double eps);
double smooth_min_entropy_lp(const Distribution& p, double eps, double tol = 1e-10);

// -log2 of min{Tr S : S >= rho(x) for all x}; the (1;infty) norm of rho.
double cond_min_entropy(const CqState& rho, double tol = 1e-9);
double smooth_cond_min_entropy(const CqState& rho, double eps, double tol = 1e-9);

// (infty;1) norm of a PSD matrix on Q (x) N:
// max{Tr[Y X] : 0 <= Y <= sigma (x) 1_N, Tr sigma <= 1, sigma >= 0}.
double infty_one_norm_pos(const Mat& x, int q, int n, double tol = 1e-9);

// Intersection norm of a PSD cq block matrix:
// max{2^k max_x ||X(x)||_inf, ||sum_x X(x)||_inf}.
double capcap_norm_pos(const std::vector<Mat>& blocks, double k);

// Factorization upper bound on the intersection norm of a b*: the product
// of max{sqrt(2^k) ||.||_inf, ||reshape(.)||_inf} over the two factors.
double capcap_upper(const Mat& a, const Mat& b, int q, int n, double k);

// Scalar pairing of a PSD cq block matrix against the weighted cap ball:
// 2^{-k} max{Tr sum_j X(j) x(j) : 0 <= x(j) <= 1, sum_j x(j) <= 2^k 1},
// equivalently 2^{-k} min{sum_j Tr A(j) + 2^k Tr B : X(j) <= A(j) + B}.
// The smooth-min-entropy implications run through this quantity.
double capped_overlap_pos(const std::vector<Mat>& blocks, double k, double tol = 1e-9);

struct SigSigValue {
  double primal = 0.0;
  double dual = 0.0;
};

// Primal/dual SDP pair sandwiching the dual intersection norm of a PSD cq
// block matrix within a factor two. Primal:
//   max{Tr sum_j X(j) y(j) : 0 <= y(j) <= 2^{-k} sigma, sum_j y(j) <= sigma,
//       Tr sigma <= 1, sigma >= 0};
// dual: min{||2^{-k} sum_j A(j) + B||_inf : X(j) <= A(j) + B, A(j), B >= 0}.
SigSigValue sigsig_norm_pos(const std::vector<Mat>& blocks, double k, double tol = 1e-9);

// Exact norm of 2^{-k} A as a map linfty -> l1, by sign enumeration over
// the smaller side.
double linfty_to_l1_norm(const RealMat& a, double k, long long limit);

// Gram relaxation max sum A_ij <a_i, b_j> over unit vectors.
double grothendieck_sdp(const RealMat& a, double tol = 1e-9);
// Exhaustive +-1 bilinear maximum (test oracle).
double grothendieck_signmax(const RealMat& a, long long limit);

// Nonnegative cap-ball vertices in exact mode: uniform mass 1/count on
// each count-subset of {0..size-1}.
Vec flat_source(int size, const std::vector<int>& support);

}  // namespace extcond::norms
