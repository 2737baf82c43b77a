#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "zebra/json_format.hpp"

namespace zebra::stats {

// Per-prompt scores of two systems on the same prompts, aligned by id.
struct PairedSample {
  std::vector<std::string> ids;
  std::vector<double> a;
  std::vector<double> b;

  // Throws ValidationError unless a, b (and ids, when given) share a length >= 2.
  void validate() const;
  std::vector<double> differences() const;
};

// P(T <= t) for Student's t with `dof` degrees of freedom, via the
// regularized incomplete beta function.
double student_t_cdf(double t, double dof);

struct TTestResult {
  double t_stat = 0.0;
  double p_t = 1.0;  // two-sided
  double mean_delta = 0.0;
  std::size_t n = 0;
  // Every difference was exactly zero; t is reported as 0 and p_t as 1.
  bool all_zero = false;
};

// Two-sided paired t-test on d = a - b with n - 1 degrees of freedom.
// Throws ValidationError when the differences have zero variance but a
// nonzero mean (t would be infinite).
TTestResult paired_t_test(const PairedSample& sample);

struct PermutationResult {
  double p_perm = 1.0;
  std::size_t n_shuffles = 0;
  std::uint64_t seed = 0;
  std::size_t at_least_as_extreme = 0;
};

// Sign-flip permutation test on the paired differences with statistic
// |mean(d)|. p = (count(permuted >= observed) + 1) / (n_shuffles + 1).
// Shuffles are drawn in fixed-size blocks, each with its own generator
// derived from (seed, block), so the result does not depend on `threads`.
// Throws ConfigError if n_shuffles < 1.
PermutationResult permutation_test(const PairedSample& sample, std::size_t n_shuffles = 10000,
                                   std::uint64_t seed = 0, unsigned threads = 1);

struct ComparisonResult {
  TTestResult t_test;
  PermutationResult permutation;
};

ComparisonResult compare(const PairedSample& sample, std::size_t n_shuffles, std::uint64_t seed,
                         unsigned threads = 1);

// {"t", "p_t", "mean_delta", "p_perm", "n", "n_shuffles", "seed", "all_zero"}
ordered_json to_json(const ComparisonResult& result);

using ScoreList = std::vector<std::pair<std::string, double>>;

// Two-column CSV `id,score`; a first row whose score cell is not numeric is
// treated as a header. Throws ParseError / ValidationError (duplicate id).
ScoreList load_scores(const std::filesystem::path& path);

// Aligns b to the id order of a. Throws ValidationError if the id sets differ.
PairedSample align_scores(const ScoreList& a, const ScoreList& b);

}  // namespace zebra::stats
