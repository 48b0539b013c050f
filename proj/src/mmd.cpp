#include "genrank/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "genrank/errors.hpp"
#include "genrank/rng.hpp"

namespace genrank {

namespace {

constexpr std::uint64_t kMmdTag = 0x6D6D64ULL;
constexpr std::uint64_t kNStarTag = 0x6E2A2AULL;

std::uint64_t stream_for(std::uint64_t tag, int n) {
  return (tag << 32) ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(n));
}

int result_width(const Result& r) {
  if (std::holds_alternative<Ranking>(r))
    return std::get<Ranking>(r).n_alternatives();
  return static_cast<int>(std::get<ScoreVector>(r).size());
}

/// Items mapped to distinct-value ids plus the Gram matrix over the
/// distinct values. Subsampled MMD values then cost O(t^2) for t touched
/// values instead of O(n^2) kernel evaluations.
struct DedupGram {
  std::vector<int> item_value;
  std::vector<Result> distinct;
  Matrix gram;
};

DedupGram build_dedup_gram(const KernelSpec& spec,
                           std::span<const Result> items) {
  DedupGram out;
  out.item_value.reserve(items.size());
  std::map<std::vector<int>, int> ranking_ids;
  std::map<std::vector<double>, int> vector_ids;
  const bool rankings = std::holds_alternative<Ranking>(items.front());
  for (const Result& r : items) {
    if (std::holds_alternative<Ranking>(r) != rankings)
      throw InputError("mmd: sample mixes rankings and score vectors");
    int id;
    if (rankings) {
      auto [it, fresh] = ranking_ids.try_emplace(
          std::get<Ranking>(r).tiers(), static_cast<int>(out.distinct.size()));
      id = it->second;
      if (fresh) out.distinct.push_back(r);
    } else {
      auto [it, fresh] = vector_ids.try_emplace(
          std::get<ScoreVector>(r), static_cast<int>(out.distinct.size()));
      id = it->second;
      if (fresh) out.distinct.push_back(r);
    }
    out.item_value.push_back(id);
  }
  out.gram = gram_matrix(spec, out.distinct);
  return out;
}

/// sqrt of the V-statistic from signed value counts c = counts(x) - counts(y):
/// MMD^2 = (1/n^2) sum_{u,v} c_u c_v G(u,v). Radicands below -1e-12 indicate
/// a broken kernel, smaller negatives are rounding and clamp to zero.
double mmd_from_counts(const Matrix& gram, std::span<const int> counts,
                       std::span<const int> touched, int n) {
  double s = 0.0;
  for (std::size_t a = 0; a < touched.size(); ++a) {
    const int u = touched[a];
    const double cu = counts[u];
    s += cu * cu * gram(u, u);
    for (std::size_t b = a + 1; b < touched.size(); ++b) {
      const int v = touched[b];
      s += 2.0 * cu * counts[v] * gram(u, v);
    }
  }
  const double m2 = s / (static_cast<double>(n) * n);
  if (m2 < 0.0) {
    if (m2 < -1e-12)
      throw NumericError("mmd: squared MMD is negative beyond rounding noise");
    return 0.0;
  }
  return std::sqrt(m2);
}

struct CountScratch {
  std::vector<int> counts;
  std::vector<char> seen;
  std::vector<int> touched;

  explicit CountScratch(int distinct) : counts(distinct, 0), seen(distinct, 0) {}

  void add(int id, int delta) {
    if (!seen[id]) {
      seen[id] = 1;
      touched.push_back(id);
    }
    counts[id] += delta;
  }
  void reset() {
    for (int id : touched) {
      counts[id] = 0;
      seen[id] = 0;
    }
    touched.clear();
  }
};

MmdSample draw_mmd_sample(const DedupGram& dedup, int total, int n, int n_rep,
                          SubsampleMode mode, std::uint64_t seed) {
  MmdSample out;
  out.subsample_size = n;
  out.n_rep = n_rep;
  out.mode = mode;
  out.seed = seed;
  out.values.resize(n_rep);

  CountScratch scratch(static_cast<int>(dedup.distinct.size()));
  std::vector<int> pool(total);
  const auto N = static_cast<std::uint32_t>(total);

  for (int rep = 0; rep < n_rep; ++rep) {
    Rng rng(Rng::derive(seed, stream_for(kMmdTag, n), rep));
    if (mode == SubsampleMode::WithoutReplacement) {
      std::iota(pool.begin(), pool.end(), 0);
      for (int i = 0; i < 2 * n; ++i) {
        const int j = i + static_cast<int>(rng.next_below(N - i));
        std::swap(pool[i], pool[j]);
        scratch.add(dedup.item_value[pool[i]], i < n ? +1 : -1);
      }
    } else {
      for (int i = 0; i < 2 * n; ++i)
        scratch.add(dedup.item_value[rng.next_below(N)], i < n ? +1 : -1);
    }
    out.values[rep] = mmd_from_counts(dedup.gram, scratch.counts, scratch.touched, n);
    scratch.reset();
  }
  return out;
}

/// First index whose cumulative probability exceeds u.
int categorical_draw(std::span<const double> cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto idx = static_cast<int>(it - cumulative.begin());
  return std::min(idx, static_cast<int>(cumulative.size()) - 1);
}

std::vector<double> cumulative_probs(const DiscreteDistribution& dist) {
  std::vector<double> cum(dist.probs().size());
  std::partial_sum(dist.probs().begin(), dist.probs().end(), cum.begin());
  return cum;
}

}  // namespace

EmpiricalSample::EmpiricalSample(std::vector<Result> results_in,
                                 AlternativeSet alternatives_in,
                                 std::string label_in)
    : results(std::move(results_in)),
      alternatives(std::move(alternatives_in)),
      label(std::move(label_in)) {
  if (results.empty())
    throw InputError("EmpiricalSample: need at least one result");
  const bool rankings = std::holds_alternative<Ranking>(results.front());
  for (const Result& r : results) {
    if (std::holds_alternative<Ranking>(r) != rankings)
      throw InputError("EmpiricalSample: results mix rankings and score vectors");
    if (result_width(r) != alternatives.size())
      throw InputError("EmpiricalSample: result size does not match the alternative set");
  }
}

EmpiricalSample EmpiricalSample::from_rankings(std::vector<Ranking> rankings,
                                               std::string label) {
  if (rankings.empty())
    throw InputError("EmpiricalSample: need at least one result");
  const int n_a = rankings.front().n_alternatives();
  std::vector<Result> results(rankings.begin(), rankings.end());
  return EmpiricalSample(std::move(results), AlternativeSet::indexed(n_a),
                         std::move(label));
}

EmpiricalSample EmpiricalSample::from_vectors(std::vector<ScoreVector> vectors,
                                              std::string label) {
  if (vectors.empty())
    throw InputError("EmpiricalSample: need at least one result");
  const int n_a = static_cast<int>(vectors.front().size());
  std::vector<Result> results(vectors.begin(), vectors.end());
  return EmpiricalSample(std::move(results), AlternativeSet::indexed(n_a),
                         std::move(label));
}

std::string to_string(SubsampleMode mode) {
  return mode == SubsampleMode::WithoutReplacement ? "subsample" : "bootstrap";
}

double mmd_biased(const KernelSpec& spec, std::span<const Result> x,
                  std::span<const Result> y) {
  if (x.empty() || x.size() != y.size())
    throw InputError("mmd_biased: samples must be non-empty and of equal size");
  const int n = static_cast<int>(x.size());

  std::vector<Result> combined;
  combined.reserve(x.size() + y.size());
  combined.insert(combined.end(), x.begin(), x.end());
  combined.insert(combined.end(), y.begin(), y.end());
  const DedupGram dedup = build_dedup_gram(spec, combined);

  CountScratch scratch(static_cast<int>(dedup.distinct.size()));
  for (int i = 0; i < n; ++i) scratch.add(dedup.item_value[i], +1);
  for (int i = 0; i < n; ++i) scratch.add(dedup.item_value[n + i], -1);
  return mmd_from_counts(dedup.gram, scratch.counts, scratch.touched, n);
}

MmdSample mmd_distribution(const EmpiricalSample& sample, const KernelSpec& spec,
                           int n, int n_rep, SubsampleMode mode,
                           std::uint64_t seed) {
  if (n < 1) throw InputError("mmd_distribution: n must be >= 1");
  if (n_rep < 1) throw InputError("mmd_distribution: n_rep must be >= 1");
  if (mode == SubsampleMode::WithoutReplacement && 2 * n > sample.size())
    throw SizeError("mmd_distribution: without replacement needs 2n <= N (2*" +
                    std::to_string(n) + " > " + std::to_string(sample.size()) + ")");
  const DedupGram dedup = build_dedup_gram(spec, sample.results);
  return draw_mmd_sample(dedup, sample.size(), n, n_rep, mode, seed);
}

std::vector<MmdSample> mmd_samples_for_grid(const EmpiricalSample& sample,
                                            const KernelSpec& spec,
                                            std::span<const int> n_grid,
                                            int n_rep, SubsampleMode mode,
                                            std::uint64_t seed) {
  if (n_rep < 1) throw InputError("mmd_samples_for_grid: n_rep must be >= 1");
  for (int n : n_grid) {
    if (n < 1) throw InputError("mmd_samples_for_grid: n must be >= 1");
    if (mode == SubsampleMode::WithoutReplacement && 2 * n > sample.size())
      throw SizeError("mmd_samples_for_grid: without replacement needs 2n <= N");
  }
  const DedupGram dedup = build_dedup_gram(spec, sample.results);
  std::vector<MmdSample> out;
  out.reserve(n_grid.size());
  for (int n : n_grid)
    out.push_back(draw_mmd_sample(dedup, sample.size(), n, n_rep, mode, seed));
  return out;
}

double empirical_quantile(std::span<const double> values, double alpha) {
  if (values.empty()) throw InputError("empirical_quantile: values must be non-empty");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InputError("empirical_quantile: alpha must lie in (0, 1)");
  const auto m = static_cast<double>(values.size());
  // The 1e-9 slack keeps ceil from jumping one order statistic up when
  // alpha*m is an integer but carries representation error (0.95 * 100).
  auto k = static_cast<long>(std::ceil(alpha * m - 1e-9));
  k = std::clamp(k, 1L, static_cast<long>(values.size()));
  std::vector<double> copy(values.begin(), values.end());
  std::nth_element(copy.begin(), copy.begin() + (k - 1), copy.end());
  return copy[k - 1];
}

double generalizability(const EmpiricalSample& sample, const KernelSpec& spec,
                        int n, double eps, int n_rep, SubsampleMode mode,
                        std::uint64_t seed) {
  if (!(eps >= 0.0))
    throw InputError("generalizability: eps must be non-negative");
  const MmdSample draws = mmd_distribution(sample, spec, n, n_rep, mode, seed);
  int hits = 0;
  for (double v : draws.values)
    if (v <= eps) ++hits;
  return static_cast<double>(hits) / draws.values.size();
}

MmdSample mmd_distribution_from(const DiscreteDistribution& dist,
                                const KernelSpec& spec, int n, int n_rep,
                                std::uint64_t seed) {
  if (n < 1) throw InputError("mmd_distribution_from: n must be >= 1");
  if (n_rep < 1) throw InputError("mmd_distribution_from: n_rep must be >= 1");
  const Matrix gram = gram_matrix(spec, dist.support());
  const std::vector<double> cum = cumulative_probs(dist);

  MmdSample out;
  out.subsample_size = n;
  out.n_rep = n_rep;
  out.mode = SubsampleMode::WithReplacement;
  out.seed = seed;
  out.values.resize(n_rep);

  CountScratch scratch(dist.size());
  for (int rep = 0; rep < n_rep; ++rep) {
    Rng rng(Rng::derive(seed, stream_for(kNStarTag, n), rep));
    for (int i = 0; i < 2 * n; ++i)
      scratch.add(categorical_draw(cum, rng.next_double()), i < n ? +1 : -1);
    out.values[rep] = mmd_from_counts(gram, scratch.counts, scratch.touched, n);
    scratch.reset();
  }
  return out;
}

std::optional<int> n_star_exact(const DiscreteDistribution& dist,
                                const KernelSpec& spec, double alpha_star,
                                double eps_star, int n_max, int n_rep,
                                std::uint64_t seed) {
  if (!(alpha_star > 0.0 && alpha_star < 1.0))
    throw InputError("n_star_exact: alpha* must lie in (0, 1)");
  if (!(eps_star >= 0.0))
    throw InputError("n_star_exact: eps* must be non-negative");
  if (n_max < 1) throw InputError("n_star_exact: n_max must be >= 1");
  if (n_rep < 1) throw InputError("n_star_exact: n_rep must be >= 1");

  const Matrix gram = gram_matrix(spec, dist.support());
  const std::vector<double> cum = cumulative_probs(dist);
  CountScratch scratch(dist.size());

  for (int n = 1; n <= n_max; ++n) {
    int hits = 0;
    for (int rep = 0; rep < n_rep; ++rep) {
      Rng rng(Rng::derive(seed, stream_for(kNStarTag, n), rep));
      for (int i = 0; i < 2 * n; ++i)
        scratch.add(categorical_draw(cum, rng.next_double()), i < n ? +1 : -1);
      const double v = mmd_from_counts(gram, scratch.counts, scratch.touched, n);
      scratch.reset();
      if (v <= eps_star) ++hits;
    }
    if (static_cast<double>(hits) / n_rep >= alpha_star) return n;
  }
  return std::nullopt;
}

}  // namespace genrank
