#pragma once

#include <utility>

#include "extcond/model.hpp"

namespace extcond::linalg {

// Symmetrized copy (A + A*)/2.
Mat hermitize(const Mat& a);

struct HermMatrix {
  Mat entries;
  explicit HermMatrix(Mat a) : entries(hermitize(a)) {
    if (entries.rows() != entries.cols()) throw ValidationError("HermMatrix must be square");
  }
  int dim() const { return static_cast<int>(entries.rows()); }
};

// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
// Throws SolverError if the iteration fails to converge.
std::pair<Vec, Mat> herm_eig(const Mat& a);

double min_eig_herm(const Mat& a);

// Largest singular value / sum of singular values of a general matrix.
double op_norm(const Mat& a);
double trace_norm(const Mat& a);

// PSD square root; eigenvalues below zero are clipped (magnitudes beyond
// `clip` are rejected as genuinely non-PSD input).
Mat psd_sqrt(const Mat& a, double clip = 1e-10);

// Hermitian sign(A): +1/-1 on the eigenspaces, the trace-norm achiever.
Mat herm_sign(const Mat& a);

Mat kron(const Mat& a, const Mat& b);

// Partial traces of a (dim_a * dim_b) square matrix.
Mat partial_trace_first(const Mat& x, int dim_a, int dim_b);   // out: dim_b
Mat partial_trace_second(const Mat& x, int dim_a, int dim_b);  // out: dim_a

Mat random_herm(int dim, Rng& rng);
Mat random_psd(int dim, Rng& rng);          // G G* with Gaussian G
Mat random_density(int dim, Rng& rng);      // trace-one PSD
Mat random_unitary(int dim, Rng& rng);      // QR of a Ginibre matrix

}  // namespace extcond::linalg
