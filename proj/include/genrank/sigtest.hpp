#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "genrank/matrix.hpp"
#include "genrank/mmd.hpp"

namespace genrank {

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Tie-corrected Friedman test over within-block average ranks; each
/// result in the sample is one block. Fully tied input degenerates to
/// (0, 1). The p-value is the chi-square upper tail with n_a - 1 degrees
/// of freedom.
FriedmanResult friedman_test(const EmpiricalSample& sample);

struct SignificanceResult {
  double friedman_statistic = 0.0;
  double friedman_p = 1.0;
  Matrix pairwise_p;                    // two-sided p per alternative pair
  std::vector<int> best_alternatives;   // minimal rank sum, possibly tied
  bool best_is_significant = false;
};

/// Conover post-hoc comparisons on rank sums. With b blocks, k
/// alternatives, rank sums R_j, A1 = sum of squared ranks,
/// C1 = b k (k+1)^2 / 4 and T1 the tie-corrected Friedman statistic, the
/// pairwise statistic is
///   t_ij = |R_i - R_j| / sqrt( 2 b (A1 - C1) (1 - T1 / (b (k-1)))
///                              / ((b-1)(k-1)) ),
/// referred to a Student t with (b-1)(k-1) degrees of freedom.
/// `best_is_significant` is gated on the Friedman rejection and requires a
/// unique best alternative that beats every other one pairwise.
SignificanceResult conover_iman(const EmpiricalSample& sample,
                                double significance = 0.05);

/// One cell of the significance-vs-generalizability summary.
struct DemoCell {
  bool ci_significant = false;
  std::vector<int> best_alternatives;
  int count = 0;
  double mean_generalizability = 0.0;
  double std_generalizability = 0.0;
};

struct DemoSummary {
  std::vector<DemoCell> cells;
  int repetitions = 0;
  int sample_size = 0;
  double friedman_significant_fraction = 0.0;
  double ci_significant_fraction = 0.0;
  double overall_mean = 0.0;
  double overall_std = 0.0;
  std::uint64_t seed = 0;
};

/// Repeatedly samples n results from the two-permutation distribution
/// {(0,1,2,3,4) -> 0.55, (1,0,2,3,4) -> 0.45}, runs the Friedman and
/// Conover tests at level 0.05, and computes the (n/2)-generalizability of
/// each sample under the Jaccard k=1 kernel at delta* = 0.05. Cells group
/// repetitions by (Conover-significant, best alternatives).
DemoSummary significance_vs_generalizability_demo(int repetitions = 1000,
                                                  int sample_size = 20,
                                                  std::uint64_t seed = 0,
                                                  int n_rep = 100,
                                                  int threads = 0);

std::string demo_summary_csv(const DemoSummary& summary);
std::string demo_summary_json(const DemoSummary& summary);

}  // namespace genrank
