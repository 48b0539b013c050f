#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "genrank/errors.hpp"
#include "genrank/rng.hpp"
#include "genrank/sigtest.hpp"
#include "genrank/synthetic.hpp"
#include "helpers.hpp"

using namespace genrank;

namespace {

// Independent Friedman oracle: ranks recomputed by sorting each block's
// tiers, statistic assembled from the raw definition.
double friedman_oracle(const std::vector<Ranking>& blocks) {
  const int b = static_cast<int>(blocks.size());
  const int k = blocks.front().n_alternatives();
  std::vector<double> rank_sums(k, 0.0);
  double squared = 0.0;
  for (const Ranking& block : blocks) {
    for (int a = 0; a < k; ++a) {
      double rank = 0.0;
      int equal = 0;
      for (int other = 0; other < k; ++other) {
        if (block.tiers()[other] < block.tiers()[a]) rank += 1.0;
        if (block.tiers()[other] == block.tiers()[a]) ++equal;
      }
      const double midrank = rank + 0.5 * (equal + 1);
      rank_sums[a] += midrank;
      squared += midrank * midrank;
    }
  }
  const double c1 = b * k * (k + 1.0) * (k + 1.0) / 4.0;
  if (squared - c1 <= 1e-12) return 0.0;
  double ss = 0.0;
  for (double r : rank_sums) {
    const double d = r - b * (k + 1.0) / 2.0;
    ss += d * d;
  }
  return (k - 1.0) * ss / (squared - c1);
}

EmpiricalSample blocks_of(std::vector<Ranking> rankings) {
  return EmpiricalSample::from_rankings(std::move(rankings));
}

}  // namespace

TEST_CASE("friedman statistic on ten identical strict rankings of three") {
  const EmpiricalSample sample =
      blocks_of(std::vector<Ranking>(10, Ranking({0, 1, 2})));
  const FriedmanResult result = friedman_test(sample);
  CHECK(result.statistic == doctest::Approx(20.0).epsilon(1e-9));
  CHECK(result.p_value == doctest::Approx(std::exp(-10.0)).epsilon(1e-9));
}

TEST_CASE("friedman degenerates to (0, 1) on fully tied blocks") {
  const EmpiricalSample sample =
      blocks_of(std::vector<Ranking>(5, Ranking({0, 0, 0})));
  const FriedmanResult result = friedman_test(sample);
  CHECK(result.statistic == 0.0);
  CHECK(result.p_value == 1.0);
}

TEST_CASE("friedman matches an independent rank-based oracle") {
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const int b = 2 + static_cast<int>(rng.next_below(10));
    const int k = 2 + static_cast<int>(rng.next_below(4));
    std::vector<Ranking> blocks;
    for (int i = 0; i < b; ++i) blocks.push_back(testutil::random_ranking(rng, k));
    const double oracle = friedman_oracle(blocks);
    const FriedmanResult result = friedman_test(blocks_of(blocks));
    CHECK(result.statistic == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("friedman is invariant under relabeling the alternatives") {
  Rng rng(62);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 3 + static_cast<int>(rng.next_below(3));
    std::vector<Ranking> blocks;
    for (int i = 0; i < 8; ++i) blocks.push_back(testutil::random_ranking(rng, k));

    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = k - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.next_below(i + 1)]);
    std::vector<Ranking> relabeled;
    for (const Ranking& block : blocks) {
      std::vector<int> tiers(k);
      for (int a = 0; a < k; ++a) tiers[perm[a]] = block.tiers()[a];
      relabeled.emplace_back(tiers);
    }
    const FriedmanResult original = friedman_test(blocks_of(blocks));
    const FriedmanResult shuffled = friedman_test(blocks_of(relabeled));
    CHECK(original.statistic == doctest::Approx(shuffled.statistic).epsilon(1e-12));
    CHECK(original.p_value == doctest::Approx(shuffled.p_value).epsilon(1e-12));
  }
}

TEST_CASE("friedman requires two blocks and two alternatives") {
  CHECK_THROWS_AS(friedman_test(blocks_of({Ranking({0, 1})})), InputError);
  CHECK_THROWS_AS(friedman_test(blocks_of({Ranking({0}), Ranking({0})})),
                  InputError);
}

TEST_CASE("conover_iman flags a dominant alternative") {
  const EmpiricalSample sample =
      blocks_of(std::vector<Ranking>(10, Ranking({0, 1, 2})));
  const SignificanceResult result = conover_iman(sample);
  CHECK(result.best_alternatives == std::vector<int>{0});
  CHECK(result.best_is_significant);
  CHECK(result.pairwise_p(0, 1) < 0.05);
  CHECK(result.pairwise_p(0, 2) < 0.05);
}

TEST_CASE("conover_iman on fully tied blocks reports everyone best") {
  const EmpiricalSample sample =
      blocks_of(std::vector<Ranking>(6, Ranking({0, 0, 0, 0})));
  const SignificanceResult result = conover_iman(sample);
  CHECK_FALSE(result.best_is_significant);
  CHECK(result.best_alternatives == std::vector<int>{0, 1, 2, 3});
  CHECK(result.friedman_p == 1.0);
}

TEST_CASE("conover_iman is gated on the friedman rejection") {
  // Two blocks of two alternatives: perfectly associated ranks, but the
  // Friedman chi-square (statistic 2, df 1) cannot reject at 0.05.
  const EmpiricalSample sample =
      blocks_of(std::vector<Ranking>(2, Ranking({0, 1})));
  const SignificanceResult result = conover_iman(sample);
  CHECK(result.friedman_p > 0.05);
  CHECK(result.pairwise_p(0, 1) < 0.05);  // the post-hoc alone would reject
  CHECK_FALSE(result.best_is_significant);
}

TEST_CASE("the App-A sampling regime lands near one third significant") {
  // 300 seeded repetitions of n=20 from the two-permutation distribution;
  // the acceptance suite runs the full 1000.
  const DiscreteDistribution dist = explicit_distribution(
      std::vector<std::pair<Ranking, double>>{{Ranking({0, 1, 2, 3, 4}), 0.55},
                                              {Ranking({1, 0, 2, 3, 4}), 0.45}});
  int friedman_hits = 0, ci_hits = 0;
  const int reps = 300;
  for (int r = 0; r < reps; ++r) {
    const EmpiricalSample sample = sample_from(dist, 20, Rng::derive(123, 7, r));
    const SignificanceResult result = conover_iman(sample);
    friedman_hits += result.friedman_p < 0.05;
    ci_hits += result.best_is_significant;
  }
  CHECK(friedman_hits == reps);
  const double fraction = static_cast<double>(ci_hits) / reps;
  CHECK(fraction > 0.23);
  CHECK(fraction < 0.43);
}

TEST_CASE("the demo summary is deterministic and well formed") {
  const DemoSummary a = significance_vs_generalizability_demo(60, 20, 99, 50, 2);
  const DemoSummary b = significance_vs_generalizability_demo(60, 20, 99, 50, 1);
  CHECK(a.friedman_significant_fraction == 1.0);
  CHECK(a.ci_significant_fraction == b.ci_significant_fraction);
  CHECK(a.overall_mean == b.overall_mean);
  REQUIRE(a.cells.size() == b.cells.size());
  int total = 0;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].count == b.cells[i].count);
    CHECK(a.cells[i].mean_generalizability == b.cells[i].mean_generalizability);
    total += a.cells[i].count;
  }
  CHECK(total == 60);
  CHECK(demo_summary_csv(a) == demo_summary_csv(b));
  CHECK(demo_summary_json(a) == demo_summary_json(b));
}

TEST_CASE("demo validates its arguments") {
  CHECK_THROWS_AS(significance_vs_generalizability_demo(0, 20, 1), InputError);
  CHECK_THROWS_AS(significance_vs_generalizability_demo(10, 21, 1), InputError);
}
