#include <cmath>
#include <map>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

#include "doctest.h"
#include "genrank/errors.hpp"
#include "genrank/synthetic.hpp"

using namespace genrank;

namespace {

// Independent count oracle: ordered set partitions number
// sum_k k! * S(n, k) with Stirling numbers from the recurrence.
long long ordered_bell(int n) {
  std::vector<std::vector<long long>> stirling(n + 1,
                                               std::vector<long long>(n + 1, 0));
  stirling[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= i; ++k)
      stirling[i][k] = k * stirling[i - 1][k] + stirling[i - 1][k - 1];
  long long factorial = 1, total = 0;
  for (int k = 1; k <= n; ++k) {
    factorial *= k;
    total += factorial * stirling[n][k];
  }
  return total;
}

DiscreteDistribution app_a_distribution() {
  return explicit_distribution(std::vector<std::pair<Ranking, double>>{
      {Ranking({0, 1, 2, 3, 4}), 0.55},
      {Ranking({1, 0, 2, 3, 4}), 0.45},
  });
}

}  // namespace

TEST_CASE("enumeration counts match the ordered Bell numbers and factorials") {
  const long long expected_ties[] = {0, 1, 3, 13, 75, 541};
  for (int n = 1; n <= 5; ++n) {
    const auto rankings = enumerate_rankings(n, true);
    CHECK(static_cast<long long>(rankings.size()) == expected_ties[n]);
    CHECK(static_cast<long long>(rankings.size()) == ordered_bell(n));
  }
  long long factorial = 1;
  for (int n = 1; n <= 7; ++n) {
    factorial *= n;
    CHECK(static_cast<long long>(enumerate_rankings(n, false).size()) == factorial);
  }
}

TEST_CASE("enumerated rankings are distinct and valid") {
  for (const bool ties : {true, false}) {
    const auto rankings = enumerate_rankings(4, ties);
    std::set<std::vector<int>> seen;
    for (const Ranking& r : rankings) {
      CHECK(seen.insert(r.tiers()).second);
      if (!ties) CHECK(r.tier_count() == 4);
    }
  }
}

TEST_CASE("enumeration guards the combinatorial explosion") {
  CHECK_THROWS_AS(enumerate_rankings(7, true), SizeError);
  CHECK_THROWS_AS(enumerate_rankings(8, false), SizeError);
  CHECK_THROWS_AS(enumerate_rankings(0, true), InputError);
}

TEST_CASE("uniform_distribution spreads mass evenly") {
  const DiscreteDistribution u3 = uniform_distribution(3, true);
  CHECK(u3.size() == 13);
  double sum = 0.0;
  for (double p : u3.probs()) {
    CHECK(p == doctest::Approx(1.0 / 13.0));
    sum += p;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(uniform_distribution(3, false).size() == 6);
}

TEST_CASE("explicit_distribution validates its input") {
  const DiscreteDistribution app_a = app_a_distribution();
  CHECK(app_a.size() == 2);
  CHECK_FALSE(app_a.is_point_mass());

  const DiscreteDistribution point = explicit_distribution(
      std::vector<std::pair<Ranking, double>>{{Ranking({0, 1}), 1.0}});
  CHECK(point.is_point_mass());

  CHECK_THROWS_AS(
      explicit_distribution(std::vector<std::pair<Ranking, double>>{
          {Ranking({0, 1}), 0.5}, {Ranking({0, 1}), 0.5}}),
      InputError);
  CHECK_THROWS_AS(
      explicit_distribution(std::vector<std::pair<Ranking, double>>{
          {Ranking({0, 1}), 0.6}, {Ranking({1, 0}), 0.6}}),
      InputError);
}

TEST_CASE("sample_from draws i.i.d. per seed") {
  const DiscreteDistribution point = explicit_distribution(
      std::vector<std::pair<Ranking, double>>{{Ranking({0, 1, 1}), 1.0}});
  const EmpiricalSample s = sample_from(point, 7, 1);
  CHECK(s.size() == 7);
  for (const Result& r : s.results) CHECK(std::get<Ranking>(r) == Ranking({0, 1, 1}));

  const DiscreteDistribution app_a = app_a_distribution();
  const EmpiricalSample a = sample_from(app_a, 100, 42);
  const EmpiricalSample b = sample_from(app_a, 100, 42);
  CHECK(a.results == b.results);
  CHECK(a.results != sample_from(app_a, 100, 43).results);
}

TEST_CASE("sample_from frequencies converge to the probabilities") {
  const DiscreteDistribution app_a = app_a_distribution();
  const int n = 100000;
  const EmpiricalSample s = sample_from(app_a, n, 7);
  int first = 0;
  for (const Result& r : s.results)
    if (std::get<Ranking>(r) == Ranking({0, 1, 2, 3, 4})) ++first;
  CHECK(std::abs(static_cast<double>(first) / n - 0.55) < 0.01);
}

TEST_CASE("sample_from passes a chi-square goodness-of-fit test") {
  const DiscreteDistribution u3 = uniform_distribution(3, true);
  const int n = 100000;
  const EmpiricalSample s = sample_from(u3, n, 11);
  std::map<std::vector<int>, int> counts;
  for (const Result& r : s.results) ++counts[std::get<Ranking>(r).tiers()];
  double stat = 0.0;
  const double expected = static_cast<double>(n) / u3.size();
  for (int i = 0; i < u3.size(); ++i) {
    const auto it = counts.find(std::get<Ranking>(u3.support()[i]).tiers());
    const double observed = it == counts.end() ? 0.0 : it->second;
    stat += (observed - expected) * (observed - expected) / expected;
  }
  boost::math::chi_squared chi2(u3.size() - 1);
  CHECK(stat < boost::math::quantile(chi2, 0.999));
}

TEST_CASE("estimator accuracy on a point mass is exactly 1") {
  const DiscreteDistribution point = explicit_distribution(
      std::vector<std::pair<Ranking, double>>{{Ranking({0, 1, 1}), 1.0}});
  const KernelSpec spec = KernelSpec::jaccard(3, 1);
  const std::vector<int> sizes{10, 20};
  const AccuracyTable table =
      estimator_accuracy_experiment(point, spec, 0.95, 0.05, sizes, 5, 3);
  CHECK(table.n_star == 1);
  CHECK(table.rows.size() == 10);
  for (const AccuracyRow& row : table.rows) {
    CHECK(row.status == "ok");
    REQUIRE(row.ratio.has_value());
    CHECK(*row.ratio == 1.0);
  }
}

TEST_CASE("estimator accuracy tables are deterministic and serializable") {
  const DiscreteDistribution u3 = uniform_distribution(3, false);
  const KernelSpec spec = KernelSpec::mallows_recommended(3);
  const std::vector<int> sizes{12};
  const AccuracyTable a =
      estimator_accuracy_experiment(u3, spec, 0.9, 0.1, sizes, 4, 17,
                                    /*curve_n_rep=*/50,
                                    SubsampleMode::WithReplacement,
                                    /*threads=*/2, /*n_star_cap=*/128,
                                    /*n_star_rep=*/500);
  const AccuracyTable b =
      estimator_accuracy_experiment(u3, spec, 0.9, 0.1, sizes, 4, 17,
                                    /*curve_n_rep=*/50,
                                    SubsampleMode::WithReplacement,
                                    /*threads=*/1, /*n_star_cap=*/128,
                                    /*n_star_rep=*/500);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].ratio == b.rows[i].ratio);
    CHECK(a.rows[i].status == b.rows[i].status);
  }
  CHECK(accuracy_table_csv(a) == accuracy_table_csv(b));
  CHECK(accuracy_table_json(a) == accuracy_table_json(b));
  CHECK(accuracy_table_csv(a).find("N,repetition,n_star,n_hat,ratio,status") == 0);
}
