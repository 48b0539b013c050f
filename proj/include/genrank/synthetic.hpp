#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "genrank/distribution.hpp"
#include "genrank/mmd.hpp"

namespace genrank {

/// All rankings of n_a alternatives, each exactly once, in lexicographic
/// tier-vector order: ordered set partitions when with_ties, permutations
/// otherwise. Guarded at n_a <= 6 (ties) / n_a <= 7 (permutations).
std::vector<Ranking> enumerate_rankings(int n_a, bool with_ties);

/// Equal mass on every enumerated ranking.
DiscreteDistribution uniform_distribution(int n_a, bool with_ties);

/// The distribution given explicitly as (ranking, probability) pairs.
DiscreteDistribution explicit_distribution(
    std::span<const std::pair<Ranking, double>> pairs);

/// n i.i.d. draws; deterministic per seed.
EmpiricalSample sample_from(const DiscreteDistribution& dist, int n,
                            std::uint64_t seed);

/// One repetition of the estimator-accuracy pipeline.
struct AccuracyRow {
  int sample_size = 0;   // N, preliminary experiments drawn
  int repetition = 0;
  std::optional<int> n_hat;
  std::optional<double> ratio;  // n_hat / n_star
  std::string status;           // "ok" or the failure reason
};

struct AccuracyTable {
  std::vector<AccuracyRow> rows;
  int n_star = 0;
  double alpha_star = 0.0;
  double delta_star = 0.0;
  double eps_star = 0.0;
  std::string kernel;
  std::uint64_t seed = 0;
};

/// Accuracy of the n* estimator: for each preliminary sample size N and
/// repetition, draws a size-N sample, bootstraps the MMD quantile curve on
/// n in 1..floor(N/2) (100 draws per n), fits the power law, predicts
/// n_hat, and reports n_hat / n* against the Monte Carlo ground truth
/// (2000 draws per candidate n, scan capped at 512). Repetitions with fit
/// failures are recorded as missing rather than dropped.
AccuracyTable estimator_accuracy_experiment(
    const DiscreteDistribution& dist, const KernelSpec& spec,
    double alpha_star, double delta_star, std::span<const int> sample_sizes,
    int repetitions, std::uint64_t seed, int curve_n_rep = 100,
    SubsampleMode mode = SubsampleMode::WithReplacement, int threads = 0,
    int n_star_cap = 512, int n_star_rep = 2000);

std::string accuracy_table_csv(const AccuracyTable& table);
std::string accuracy_table_json(const AccuracyTable& table);

}  // namespace genrank
