#include <cmath>

#include "doctest.h"
#include "genrank/errors.hpp"
#include "genrank/kernel.hpp"
#include "genrank/matrix.hpp"
#include "genrank/rng.hpp"
#include "genrank/synthetic.hpp"
#include "helpers.hpp"

using namespace genrank;

TEST_CASE("kernel golden values on r=(0,0,0), s=(0,1,1)") {
  const Ranking r({0, 0, 0});
  const Ranking s({0, 1, 1});
  CHECK(kernel_eval(KernelSpec::borda(3, 0, 1.0 / 3.0), r, s) == 1.0);
  CHECK(kernel_eval(KernelSpec::jaccard(3, 1), r, s) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(kernel_eval(KernelSpec::mallows(3, 1.0 / 3.0), r, s) ==
        doctest::Approx(std::exp(-1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("rbf kernel is 1 at zero distance") {
  const ScoreVector v{0.3, -0.7, 2.0};
  CHECK(kernel_eval(KernelSpec::rbf(3, 1.0), std::span<const double>(v),
                    std::span<const double>(v)) == 1.0);
  const ScoreVector w{0.3, -0.7, 1.0};
  CHECK(kernel_eval(KernelSpec::rbf(3, 0.5), std::span<const double>(v),
                    std::span<const double>(w)) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("kernel_eval is symmetric for every family") {
  Rng rng(31);
  for (KernelFamily family : testutil::kAllFamilies) {
    for (int trial = 0; trial < 100; ++trial) {
      const int n_a = 2 + static_cast<int>(rng.next_below(4));
      const KernelSpec spec = testutil::random_spec(rng, family, n_a);
      const Result a = testutil::random_result(rng, family, n_a);
      const Result b = testutil::random_result(rng, family, n_a);
      CHECK(kernel_eval(spec, a, b) == kernel_eval(spec, b, a));
    }
  }
}

TEST_CASE("kernel values stay within the family bounds, exhaustively") {
  for (int n_a = 2; n_a <= 4; ++n_a) {
    const auto all = enumerate_rankings(n_a, true);
    const KernelSpec specs[] = {
        KernelSpec::borda_recommended(n_a, n_a - 1),
        KernelSpec::jaccard(n_a, 1),
        KernelSpec::mallows_recommended(n_a),
    };
    for (const KernelSpec& spec : specs) {
      const KernelBounds bounds = kernel_bounds(spec);
      for (const Ranking& a : all) {
        CHECK(kernel_eval(spec, a, a) == 1.0);
        for (const Ranking& b : all) {
          const double v = kernel_eval(spec, a, b);
          CHECK(v >= bounds.k_inf - 1e-12);
          CHECK(v <= bounds.k_sup + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("borda kernel depends only on the target's domination count") {
  const int n_a = 4;
  const KernelSpec spec = KernelSpec::borda_recommended(n_a, 0);
  const auto all = enumerate_rankings(n_a, true);
  for (const Ranking& r1 : all) {
    for (const Ranking& r2 : all) {
      if (borda_count(r1, 0) != borda_count(r2, 0)) continue;
      for (const Ranking& s : all)
        CHECK(kernel_eval(spec, r1, s) == kernel_eval(spec, r2, s));
    }
  }
}

TEST_CASE("gram matrices are symmetric, unit-diagonal, and PSD") {
  Rng rng(32);
  SUBCASE("singleton") {
    const std::vector<Result> sample{Ranking({0, 1})};
    const Matrix g = gram_matrix(KernelSpec::jaccard(2, 1), sample);
    CHECK(g.rows() == 1);
    CHECK(g(0, 0) == 1.0);
  }
  SUBCASE("duplicate entries repeat rows exactly") {
    const Ranking x({0, 1, 2});
    const Ranking y({2, 1, 0});
    const std::vector<Result> sample{x, y, x};
    const Matrix g = gram_matrix(KernelSpec::mallows_recommended(3), sample);
    for (int j = 0; j < 3; ++j) CHECK(g(0, j) == g(2, j));
  }
  SUBCASE("three distinct permutations under mallows are PSD") {
    const std::vector<Result> sample{Ranking({0, 1, 2}), Ranking({1, 0, 2}),
                                     Ranking({2, 1, 0})};
    const Matrix g = gram_matrix(KernelSpec::mallows(3, 1.0 / 3.0), sample);
    const auto eig = jacobi_eigenvalues(g);
    CHECK(eig.back() >= -1e-8);
  }
  SUBCASE("random samples across families") {
    for (KernelFamily family : testutil::kAllFamilies) {
      for (int trial = 0; trial < 12; ++trial) {
        const int n_a = 2 + static_cast<int>(rng.next_below(4));
        const int m = 1 + static_cast<int>(rng.next_below(12));
        const KernelSpec spec = testutil::random_spec(rng, family, n_a);
        std::vector<Result> sample;
        for (int i = 0; i < m; ++i)
          sample.push_back(testutil::random_result(rng, family, n_a));
        const Matrix g = gram_matrix(spec, sample);
        CHECK(g.is_symmetric(0.0));
        for (int i = 0; i < m; ++i) CHECK(g(i, i) == 1.0);
        const auto eig = jacobi_eigenvalues(g);
        CHECK(eig.back() >= -1e-8 * std::max(1.0, eig.front()));
      }
    }
  }
  SUBCASE("mixed sample types are rejected") {
    const std::vector<Result> mixed{Ranking({0, 1}), ScoreVector{0.0, 1.0}};
    CHECK_THROWS_AS(gram_matrix(KernelSpec::jaccard(2, 1), mixed), InputError);
  }
}

TEST_CASE("recommended parameters") {
  CHECK(*recommended_param(KernelFamily::Borda, 3) == doctest::Approx(1.0 / 3.0));
  CHECK(*recommended_param(KernelFamily::Mallows, 3) == doctest::Approx(1.0 / 3.0));
  CHECK(*recommended_param(KernelFamily::Mallows, 5) == doctest::Approx(0.1));
  CHECK_FALSE(recommended_param(KernelFamily::Jaccard, 3).has_value());
  CHECK_FALSE(recommended_param(KernelFamily::Rbf, 3).has_value());
  CHECK_THROWS_AS(recommended_param(KernelFamily::Mallows, 1), InputError);
}

TEST_CASE("median_gamma follows the median heuristic") {
  CHECK(median_gamma(std::vector<ScoreVector>{{0.0}, {1.0}}) == doctest::Approx(0.5));
  CHECK(median_gamma(std::vector<ScoreVector>{{0.0, 0.0}, {3.0, 4.0}}) ==
        doctest::Approx(0.02));

  Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ScoreVector> sample;
    for (int i = 0; i < 4; ++i) sample.push_back(testutil::random_vector(rng, 3));
    std::vector<double> d2;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) {
          const double d = sample[i][k] - sample[j][k];
          s += d * d;
        }
        d2.push_back(s);
      }
    std::sort(d2.begin(), d2.end());
    const double median = 0.5 * (d2[2] + d2[3]);
    CHECK(median_gamma(sample) == doctest::Approx(1.0 / (2.0 * median)));
  }

  bool degenerate = false;
  CHECK(median_gamma(std::vector<ScoreVector>{{1.0, 2.0}, {1.0, 2.0}}, &degenerate) ==
        1.0);
  CHECK(degenerate);
  CHECK_THROWS_AS(median_gamma(std::vector<ScoreVector>{{1.0}}), InputError);
}

TEST_CASE("kernel_bounds per family") {
  CHECK(kernel_bounds(KernelSpec::borda(3, 0, 1.0 / 3.0)).k_inf ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  const KernelBounds jac = kernel_bounds(KernelSpec::jaccard(4, 2));
  CHECK(jac.k_inf == 0.0);
  CHECK(jac.k_sup == 1.0);
  CHECK(kernel_bounds(KernelSpec::mallows_recommended(5)).k_inf ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(kernel_bounds(KernelSpec::rbf(3, 2.0)).k_inf == 0.0);
}

TEST_CASE("epsilon_star maps delta* through the kernel's f") {
  const KernelSpec jac = KernelSpec::jaccard(3, 1);
  CHECK(epsilon_star(jac, 0.05) == doctest::Approx(std::sqrt(0.1)).epsilon(1e-12));
  CHECK(epsilon_star(jac, 0.0) == 0.0);

  const KernelSpec borda = KernelSpec::borda_recommended(3, 0);
  CHECK(epsilon_star(borda, 1.0 / 3.0) ==
        doctest::Approx(std::sqrt(2.0 * (1.0 - std::exp(-1.0 / 3.0)))).epsilon(1e-12));
  CHECK(epsilon_star(borda, 1.0 / 3.0) == doctest::Approx(0.753).epsilon(1e-3));

  SUBCASE("monotone in delta*") {
    for (KernelFamily family : testutil::kAllFamilies) {
      Rng rng(34);
      const KernelSpec spec = testutil::random_spec(rng, family, 4);
      double prev = -1.0;
      for (double delta = 0.0; delta <= 1.0; delta += 0.05) {
        const double eps = epsilon_star(spec, delta);
        CHECK(eps >= prev);
        prev = eps;
      }
    }
  }
  CHECK_THROWS_AS(epsilon_star(jac, -0.1), InputError);
  CHECK_THROWS_AS(epsilon_star(jac, 1.1), InputError);
}

TEST_CASE("kernel_eval rejects mismatched result types") {
  const Ranking r({0, 1});
  const ScoreVector v{0.0, 1.0};
  CHECK_THROWS_AS(kernel_eval(KernelSpec::rbf(2, 1.0), r, r), InputError);
  CHECK_THROWS_AS(kernel_eval(KernelSpec::jaccard(2, 1), std::span<const double>(v),
                              std::span<const double>(v)),
                  InputError);
  CHECK_THROWS_AS(kernel_eval(KernelSpec::jaccard(2, 1), Result(r), Result(v)),
                  InputError);
  CHECK_THROWS_AS(kernel_eval(KernelSpec::jaccard(3, 1), r, r), InputError);
}

TEST_CASE("KernelSpec validates its parameters") {
  CHECK_THROWS_AS(KernelSpec::borda(3, 3, 0.5), InputError);
  CHECK_THROWS_AS(KernelSpec::borda(3, 0, -1.0), InputError);
  CHECK_THROWS_AS(KernelSpec::jaccard(3, 0), InputError);
  CHECK_THROWS_AS(KernelSpec::jaccard(3, 4), InputError);
  CHECK_THROWS_AS(KernelSpec::mallows(3, 0.0), InputError);
  CHECK_THROWS_AS(KernelSpec::rbf(3, 0.0), InputError);
}

TEST_CASE("KernelChoice resolves defaults and rejects stray flags") {
  const AlternativeSet alts({"one", "two", "three"});

  KernelChoice mallows;
  mallows.family = KernelFamily::Mallows;
  CHECK(mallows.resolve(alts).nu() == doctest::Approx(1.0 / 3.0));

  KernelChoice borda;
  borda.family = KernelFamily::Borda;
  borda.target_name = "two";
  const KernelSpec spec = borda.resolve(alts);
  CHECK(spec.target() == 1);
  CHECK(spec.nu() == doctest::Approx(1.0 / 3.0));

  KernelChoice unknown_target = borda;
  unknown_target.target_name = "nope";
  CHECK_THROWS_AS(unknown_target.resolve(alts), InputError);

  KernelChoice stray;
  stray.family = KernelFamily::Mallows;
  stray.top_k = 2;
  CHECK_THROWS_AS(stray.resolve(alts), InputError);

  KernelChoice rbf;
  rbf.family = KernelFamily::Rbf;
  CHECK_THROWS_AS(rbf.resolve(alts), InputError);  // no gamma, no data
  const std::vector<ScoreVector> data{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  CHECK(rbf.resolve(alts, data).gamma() == doctest::Approx(0.5));
}
