#include "extcond/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace extcond {

long long pow2_exact(double k) {
  const double v = std::exp2(k);
  if (!(v >= 1.0) || v > 9.0e15) throw ExactModeError("non-integer 2^k");
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9 * std::max(1.0, r)) throw ExactModeError("non-integer 2^k");
  return static_cast<long long>(r);
}

long long binomial_checked(long long n, long long r, long long limit) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 c = 1;
  for (long long i = 1; i <= r; ++i) {
    c = c * static_cast<unsigned __int128>(n - r + i) / static_cast<unsigned __int128>(i);
    if (c > static_cast<unsigned __int128>(limit))
      throw SizeLimitError("subset count exceeds enumeration limit");
  }
  return static_cast<long long>(c);
}

void for_each_subset(int n, int r, const std::function<void(const std::vector<int>&)>& fn) {
  if (r < 0 || r > n) return;
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void FunctionFamily::validate() const {
  if (n < 0 || m < 0 || d < 0 || n > 30 || m > 30 || d > 30)
    throw ValidationError("bit lengths out of range");
  const int N = input_size(), M = output_size(), D = seed_count();
  if (static_cast<int>(table.size()) != D)
    throw ValidationError("table must have 2^d rows");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != N)
      throw ValidationError("table rows must have 2^n entries");
    for (int y : row)
      if (y < 0 || y >= M) throw ValidationError("table entry out of range [0, 2^m)");
  }
  if (strong_m_prime) {
    const int mp = *strong_m_prime;
    if (mp < 0 || m != d + mp)
      throw ValidationError("strong family requires m = d + m'");
    const int Mp = 1 << mp;
    for (int s = 0; s < D; ++s)
      for (int x = 0; x < N; ++x)
        if (table[s][x] / Mp != s)
          throw ValidationError("strong encoding violated: seed bits do not match row");
  }
}

std::string FunctionFamily::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["m"] = m;
  j["d"] = d;
  j["table"] = table;
  if (strong_m_prime)
    j["strong_m_prime"] = *strong_m_prime;
  else
    j["strong_m_prime"] = nullptr;
  return j.dump();
}

FunctionFamily FunctionFamily::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("family parse error: ") + e.what());
  }
  FunctionFamily fam;
  try {
    fam.n = j.at("n").get<int>();
    fam.m = j.at("m").get<int>();
    fam.d = j.at("d").get<int>();
    fam.table = j.at("table").get<std::vector<std::vector<int>>>();
    if (j.contains("strong_m_prime") && !j["strong_m_prime"].is_null())
      fam.strong_m_prime = j["strong_m_prime"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("family schema error: ") + e.what());
  }
  fam.validate();
  return fam;
}

FunctionFamily FunctionFamily::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open family file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void FunctionFamily::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write family file: " + path);
  out << to_json() << "\n";
}

FunctionFamily random_family(int n, int m, int d, std::uint64_t seed, long long enumeration_limit) {
  if (n < 0 || m < 0 || d < 0) throw ValidationError("bit lengths must be nonnegative");
  if (n + d > 62 || (1LL << (n + d)) > enumeration_limit)
    throw SizeLimitError("2^(n+d) exceeds enumeration limit");
  FunctionFamily fam;
  fam.n = n;
  fam.m = m;
  fam.d = d;
  const int N = fam.input_size(), M = fam.output_size(), D = fam.seed_count();
  Rng rng(seed);
  fam.table.assign(D, std::vector<int>(N, 0));
  for (int s = 0; s < D; ++s)
    for (int x = 0; x < N; ++x) fam.table[s][x] = rng.below_int(M);
  return fam;
}

Distribution::Distribution(Vec p) : probs(std::move(p)) {
  if (probs.size() == 0) throw ValidationError("empty distribution");
  double sum = 0.0;
  for (int i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i]) || probs[i] < 0.0)
      throw ValidationError("distribution entries must be nonnegative");
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("distribution must sum to one");
}

Distribution Distribution::uniform(int size) {
  return Distribution(Vec::Constant(size, 1.0 / size));
}

Distribution Distribution::point_mass(int size, int at) {
  Vec p = Vec::Zero(size);
  p[at] = 1.0;
  return Distribution(p);
}

CqState::CqState(int q_dim, std::vector<Mat> blks) : q(q_dim), blocks(std::move(blks)) {
  if (q < 1 || blocks.empty()) throw ValidationError("cq state needs Q >= 1 and N >= 1 blocks");
  double total = 0.0;
  for (auto& b : blocks) {
    if (b.rows() != q || b.cols() != q) throw ValidationError("cq block dimension mismatch");
    const Mat h = 0.5 * (b + b.adjoint());
    if ((b - h).cwiseAbs().maxCoeff() > 1e-9) throw ValidationError("cq block not Hermitian");
    b = h;
    Eigen::SelfAdjointEigenSolver<Mat> es(b, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw ValidationError("cq block not positive semidefinite");
    total += b.real().trace();
  }
  if (std::abs(total - 1.0) > 1e-10) throw ValidationError("cq state trace must be one");
}

CqState CqState::classical(const Distribution& p) {
  std::vector<Mat> blks(p.size());
  for (int i = 0; i < p.size(); ++i) blks[i] = Mat::Constant(1, 1, p.probs[i]);
  return CqState(1, std::move(blks));
}

Mat CqState::reduced_q() const {
  Mat r = Mat::Zero(q, q);
  for (const auto& b : blocks) r += b;
  return r;
}

void BipartiteGraph::validate() const {
  if (static_cast<int>(neighbors.size()) != degree)
    throw ValidationError("graph must have `degree` neighbor rows");
  for (const auto& row : neighbors) {
    if (static_cast<int>(row.size()) != n_left)
      throw ValidationError("neighbor rows must have n_left entries");
    for (int y : row)
      if (y < 0 || y >= n_right) throw ValidationError("neighbor out of range");
  }
}

Eigen::MatrixXi BipartiteGraph::multiplicity() const {
  Eigen::MatrixXi w = Eigen::MatrixXi::Zero(n_left, n_right);
  for (int s = 0; s < degree; ++s)
    for (int x = 0; x < n_left; ++x) w(x, neighbors[s][x]) += 1;
  return w;
}

BipartiteGraph to_graph(const FunctionFamily& fam) {
  BipartiteGraph g;
  g.n_left = fam.input_size();
  g.n_right = fam.output_size();
  g.degree = fam.seed_count();
  g.neighbors = fam.table;
  return g;
}

FunctionFamily from_graph(const BipartiteGraph& g) {
  auto log2_of = [](int v, const char* what) {
    int b = 0;
    while ((1 << b) < v) ++b;
    if ((1 << b) != v) throw ValidationError(std::string(what) + " must be a power of two");
    return b;
  };
  FunctionFamily fam;
  fam.n = log2_of(g.n_left, "n_left");
  fam.m = log2_of(g.n_right, "n_right");
  fam.d = log2_of(g.degree, "degree");
  fam.table = g.neighbors;
  fam.validate();
  return fam;
}

void AnalysisParams::validate(int n_bits, int m_bits) const {
  if (k < 0 || k > n_bits) throw ValidationError("k must lie in [0, n]");
  if (k_prime < 0 || k_prime > m_bits) throw ValidationError("k' must lie in [0, m]");
  if (eps < 0 || eps > 2) throw ValidationError("eps must lie in [0, 2]");
  if (tol <= 0) throw ValidationError("tol must be positive");
  if (q_dim < 1) throw ValidationError("Q must be at least one");
}

}  // namespace extcond
