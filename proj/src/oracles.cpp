#include "extcond/oracles.hpp"

#include <algorithm>

#include "extcond/extractor.hpp"
#include "extcond/linalg.hpp"

namespace extcond::oracles {

double ext_primal_norm_bruteforce(const FunctionFamily& fam, double k, long long limit) {
  const int N = fam.input_size();
  const long long kcount = pow2_exact(k);
  if (kcount > N) throw ValidationError("k exceeds n");
  const long long subsets = binomial_checked(N, kcount, limit);
  if (kcount > 40 || subsets > limit / (1LL << std::min(kcount, 40LL)))
    throw SizeLimitError("vertex enumeration exceeds limit");
  const double scale = std::exp2(-k);
  double best = 0.0;
  for_each_subset(N, static_cast<int>(kcount), [&](const std::vector<int>& support) {
    const long long signs = 1LL << kcount;
    for (long long mask = 0; mask < signs; ++mask) {
      Vec v = Vec::Zero(N);
      for (long long i = 0; i < kcount; ++i)
        v[support[i]] = (mask >> i) & 1 ? scale : -scale;
      best = std::max(best, extractor::delta_map(fam, v).lpNorm<1>());
    }
  });
  return best;
}

long long densest_subgraph_bruteforce(const BipartiteGraph& g, long long k_left,
                                      long long k_right, long long limit) {
  g.validate();
  k_left = std::min<long long>(k_left, g.n_left);
  k_right = std::min<long long>(k_right, g.n_right);
  if (k_left <= 0 || k_right <= 0) return 0;
  const long long pairs = binomial_checked(g.n_left, k_left, limit) *
                          binomial_checked(g.n_right, k_right, limit);
  if (pairs > limit) throw SizeLimitError("subset pair enumeration exceeds limit");
  const Eigen::MatrixXi w = g.multiplicity();
  long long best = 0;
  for_each_subset(g.n_left, static_cast<int>(k_left), [&](const std::vector<int>& left) {
    for_each_subset(g.n_right, static_cast<int>(k_right), [&](const std::vector<int>& right) {
      long long total = 0;
      for (int x : left)
        for (int y : right) total += w(x, y);
      best = std::max(best, total);
    });
  });
  return best;
}

double water_filling_value(const Vec& xs, double k) {
  std::vector<double> vals(xs.data(), xs.data() + xs.size());
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  const double cap = std::exp2(-k);
  double budget = 1.0, out = 0.0;
  for (double v : vals) {
    const double take = std::min(cap, budget);
    if (take <= 0.0) break;
    out += take * v;
    budget -= take;
  }
  return out;
}

double trace_norm_unitary_ascent(const Mat& a, Rng& rng, int restarts, int iters) {
  const int d = static_cast<int>(a.rows());
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    Mat u = linalg::random_unitary(d, rng);
    double value = std::abs((a * u).trace());
    for (int it = 0; it < iters; ++it) {
      // ascend toward the polar factor of (A + tau U*)*
      const Mat target = a.adjoint() + 0.25 * u;
      Eigen::JacobiSVD<Mat> svd(target, Eigen::ComputeFullU | Eigen::ComputeFullV);
      u = svd.matrixU() * svd.matrixV().adjoint();
      const double next = std::abs((a * u).trace());
      if (next <= value + 1e-13) break;
      value = next;
    }
    best = std::max(best, value);
  }
  return best;
}

double trace_norm_dilation(const Mat& a) {
  const int r = static_cast<int>(a.rows()), c = static_cast<int>(a.cols());
  Mat dil = Mat::Zero(r + c, r + c);
  dil.topRightCorner(r, c) = a;
  dil.bottomLeftCorner(c, r) = a.adjoint();
  auto [vals, vecs] = linalg::herm_eig(dil);
  return 0.5 * vals.cwiseAbs().sum();
}

}  // namespace extcond::oracles
