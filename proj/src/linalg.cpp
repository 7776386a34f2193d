#include "extcond/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace extcond::linalg {

Mat hermitize(const Mat& a) { return 0.5 * (a + a.adjoint()); }

std::pair<Vec, Mat> herm_eig(const Mat& a) {
  if (a.rows() != a.cols()) throw ValidationError("herm_eig needs a square matrix");
  if (a.rows() > 512) throw SizeLimitError("herm_eig limited to dim <= 512");
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(a));
  if (es.info() != Eigen::Success) throw SolverError("eigendecomposition did not converge");
  const int n = static_cast<int>(a.rows());
  Vec vals(n);
  Mat vecs(n, n);
  for (int i = 0; i < n; ++i) {  // Eigen sorts ascending; flip to descending
    vals[i] = es.eigenvalues()[n - 1 - i];
    vecs.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return {vals, vecs};
}

double min_eig_herm(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(a), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("eigendecomposition did not converge");
  return es.eigenvalues().minCoeff();
}

double op_norm(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()[0];
}

double trace_norm(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues().sum();
}

Mat psd_sqrt(const Mat& a, double clip) {
  auto [vals, vecs] = herm_eig(a);
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  Vec s(vals.size());
  for (int i = 0; i < vals.size(); ++i) {
    if (vals[i] < -clip * scale) throw ValidationError("psd_sqrt of a non-PSD matrix");
    s[i] = std::sqrt(std::max(0.0, vals[i]));
  }
  return vecs * s.asDiagonal() * vecs.adjoint();
}

Mat herm_sign(const Mat& a) {
  auto [vals, vecs] = herm_eig(a);
  Vec s(vals.size());
  for (int i = 0; i < vals.size(); ++i) s[i] = vals[i] >= 0.0 ? 1.0 : -1.0;
  return vecs * s.asDiagonal() * vecs.adjoint();
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat partial_trace_first(const Mat& x, int dim_a, int dim_b) {
  Mat out = Mat::Zero(dim_b, dim_b);
  for (int a = 0; a < dim_a; ++a)
    out += x.block(a * dim_b, a * dim_b, dim_b, dim_b);
  return out;
}

Mat partial_trace_second(const Mat& x, int dim_a, int dim_b) {
  Mat out = Mat::Zero(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j) {
      std::complex<double> s = 0.0;
      for (int t = 0; t < dim_b; ++t) s += x(i * dim_b + t, j * dim_b + t);
      out(i, j) = s;
    }
  return out;
}

Mat random_herm(int dim, Rng& rng) {
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  return hermitize(g);
}

Mat random_psd(int dim, Rng& rng) {
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  return g * g.adjoint();
}

Mat random_density(int dim, Rng& rng) {
  Mat p = random_psd(dim, rng);
  return p / p.real().trace();
}

Mat random_unitary(int dim, Rng& rng) {
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Mat> qr(g);
  Mat qmat = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const std::complex<double> rii = r(i, i);
    const double mag = std::abs(rii);
    qmat.col(i) *= (mag > 0.0) ? rii / mag : std::complex<double>(1.0, 0.0);
  }
  return qmat;
}

}  // namespace extcond::linalg
