#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "extcond/rng.hpp"

namespace extcond {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXcd;
using RealMat = Eigen::MatrixXd;

// Error taxonomy; the CLI maps these onto distinct exit codes.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};
struct SizeLimitError : std::runtime_error {
  explicit SizeLimitError(const std::string& what) : std::runtime_error(what) {}
};
struct ExactModeError : SizeLimitError {
  explicit ExactModeError(const std::string& what) : SizeLimitError(what) {}
};
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Requires 2^k to be a positive integer (within 1e-9); exact vertex
// enumeration is only valid in that case.
long long pow2_exact(double k);

// C(n, r), throwing SizeLimitError if the count exceeds `limit`.
long long binomial_checked(long long n, long long r, long long limit);

// Visits every r-subset of {0,..,n-1} in lexicographic order.
void for_each_subset(int n, int r, const std::function<void(const std::vector<int>&)>& fn);

// A seeded family {f_s : [N] -> [M]} stored as an explicit D x N table.
// When strong_m_prime is set the outputs carry the seed in the high bits:
// table[s][x] = s * 2^{m'} + f'_s(x).
struct FunctionFamily {
  int n = 0;  // input bits, N = 2^n
  int m = 0;  // output bits, M = 2^m
  int d = 0;  // seed bits, D = 2^d
  std::vector<std::vector<int>> table;  // table[s][x] in [0, M)
  std::optional<int> strong_m_prime;

  int input_size() const { return 1 << n; }
  int output_size() const { return 1 << m; }
  int seed_count() const { return 1 << d; }

  bool is_strong() const { return strong_m_prime.has_value(); }
  int strong_output_size() const { return 1 << strong_m_prime.value(); }

  void validate() const;  // throws ValidationError

  std::string to_json() const;
  static FunctionFamily from_json(const std::string& text);
  static FunctionFamily load(const std::string& path);
  void save(const std::string& path) const;
};

// Uniform table entries from a seeded generator; same seed, same family.
FunctionFamily random_family(int n, int m, int d, std::uint64_t seed,
                             long long enumeration_limit = 1LL << 22);

struct Distribution {
  Vec probs;

  Distribution() = default;
  explicit Distribution(Vec p);  // validates
  static Distribution uniform(int size);
  static Distribution point_mass(int size, int at);
  int size() const { return static_cast<int>(probs.size()); }
};

// Classical-quantum state: N positive semidefinite Q x Q blocks with
// total trace one.
struct CqState {
  int q = 1;
  std::vector<Mat> blocks;

  CqState() = default;
  CqState(int q_dim, std::vector<Mat> blks);  // validates
  static CqState classical(const Distribution& p);  // Q = 1 diagonal embedding
  int classical_size() const { return static_cast<int>(blocks.size()); }
  Mat reduced_q() const;  // partial trace over the classical register
};

struct BipartiteGraph {
  int n_left = 0;
  int n_right = 0;
  int degree = 0;
  std::vector<std::vector<int>> neighbors;  // neighbors[s][x] in [0, n_right)

  void validate() const;
  // Edge multiplicity #{s : neighbor(x, s) = y}.
  Eigen::MatrixXi multiplicity() const;
};

BipartiteGraph to_graph(const FunctionFamily& fam);
FunctionFamily from_graph(const BipartiteGraph& g);

struct AnalysisParams {
  double k = 0.0;
  double k_prime = 0.0;
  double eps = 0.0;
  int q_dim = 1;
  double tol = 1e-7;
  std::uint64_t seed = 1;
  long long enumeration_limit = 1LL << 22;
  int threads = 0;  // 0 = all cores

  void validate(int n_bits, int m_bits) const;
};

}  // namespace extcond
