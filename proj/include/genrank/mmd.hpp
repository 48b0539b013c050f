#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genrank/distribution.hpp"
#include "genrank/kernel.hpp"

namespace genrank {

/// Observed results of one configuration: a homogeneous sequence of
/// rankings or score vectors over a fixed alternative set.
struct EmpiricalSample {
  std::vector<Result> results;
  AlternativeSet alternatives;
  std::string label;

  EmpiricalSample(std::vector<Result> results, AlternativeSet alternatives,
                  std::string label = "");
  static EmpiricalSample from_rankings(std::vector<Ranking> rankings,
                                       std::string label = "");
  static EmpiricalSample from_vectors(std::vector<ScoreVector> vectors,
                                      std::string label = "");

  int size() const noexcept { return static_cast<int>(results.size()); }
  int n_alternatives() const noexcept { return alternatives.size(); }
};

/// How the two size-n samples behind one MMD draw are produced from an
/// empirical sample: disjoint subsamples (without replacement) or
/// independent bootstrap resamples (with replacement).
enum class SubsampleMode { WithoutReplacement, WithReplacement };

std::string to_string(SubsampleMode mode);

/// Monte Carlo draws of MMD_n.
struct MmdSample {
  std::vector<double> values;
  int subsample_size = 0;
  int n_rep = 0;
  SubsampleMode mode = SubsampleMode::WithoutReplacement;
  std::uint64_t seed = 0;
};

/// Biased MMD between two equal-size samples: the square root of the
/// V-statistic
///   (1/n^2) [sum k(x_i,x_j) + sum k(y_i,y_j) - 2 sum k(x_i,y_j)],
/// clamped at zero when rounding pushes the radicand slightly negative.
double mmd_biased(const KernelSpec& spec, std::span<const Result> x,
                  std::span<const Result> y);

/// n_rep independent draws of MMD(x, y) where x and y are size-n
/// subsamples of `sample` per `mode`. Repetition i runs on the stream
/// derived from (seed, n, i), so output is bit-identical across runs and
/// execution orders.
MmdSample mmd_distribution(const EmpiricalSample& sample, const KernelSpec& spec,
                           int n, int n_rep, SubsampleMode mode,
                           std::uint64_t seed);

/// MmdSamples for several subsample sizes at once, sharing one Gram matrix.
std::vector<MmdSample> mmd_samples_for_grid(const EmpiricalSample& sample,
                                            const KernelSpec& spec,
                                            std::span<const int> n_grid,
                                            int n_rep, SubsampleMode mode,
                                            std::uint64_t seed);

/// Order statistic at index ceil(alpha * m), 1-based. The "higher"
/// interpolation is conservative: it inflates the estimated sample size
/// rather than deflating it.
double empirical_quantile(std::span<const double> values, double alpha);

/// Fraction of MMD_n draws at or below eps; realizes the n-generalizability
/// of the sample's empirical distribution.
double generalizability(const EmpiricalSample& sample, const KernelSpec& spec,
                        int n, double eps, int n_rep, SubsampleMode mode,
                        std::uint64_t seed);

/// Ground-truth minimum sample size: scans n = 1, 2, ... and returns the
/// first n whose Monte Carlo n-generalizability under `dist` (true i.i.d.
/// draws) reaches alpha_star, or nullopt when no n <= n_max qualifies.
std::optional<int> n_star_exact(const DiscreteDistribution& dist,
                                const KernelSpec& spec, double alpha_star,
                                double eps_star, int n_max, int n_rep,
                                std::uint64_t seed);

/// Monte Carlo draws of MMD_n for true i.i.d. size-n samples from `dist`.
MmdSample mmd_distribution_from(const DiscreteDistribution& dist,
                                const KernelSpec& spec, int n, int n_rep,
                                std::uint64_t seed);

}  // namespace genrank
