#include "genrank/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "genrank/errors.hpp"
#include "genrank/parallel.hpp"
#include "genrank/powerlaw.hpp"
#include "genrank/rng.hpp"

#include "json.hpp"

namespace genrank {

namespace {

constexpr std::uint64_t kSampleTag = 0x5A3D21ULL;
constexpr std::uint64_t kAccuracyTag = 0xACC01ULL;

bool valid_tier_vector(const std::vector<int>& tiers) {
  int max_tier = 0;
  for (int t : tiers) max_tier = std::max(max_tier, t);
  std::vector<char> seen(static_cast<std::size_t>(max_tier) + 1, 0);
  for (int t : tiers) seen[t] = 1;
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

}  // namespace

std::vector<Ranking> enumerate_rankings(int n_a, bool with_ties) {
  if (n_a < 1) throw InputError("enumerate_rankings: n_a must be >= 1");
  if (with_ties && n_a > 6)
    throw SizeError("enumerate_rankings: rankings with ties are enumerated up to n_a = 6");
  if (!with_ties && n_a > 7)
    throw SizeError("enumerate_rankings: permutations are enumerated up to n_a = 7");

  std::vector<Ranking> out;
  if (!with_ties) {
    std::vector<int> tiers(n_a);
    std::iota(tiers.begin(), tiers.end(), 0);
    do {
      out.emplace_back(tiers);
    } while (std::next_permutation(tiers.begin(), tiers.end()));
    std::sort(out.begin(), out.end());
    return out;
  }

  // Odometer over {0..n_a-1}^n_a in lexicographic order, keeping the
  // gap-free tier vectors.
  std::vector<int> tiers(n_a, 0);
  while (true) {
    if (valid_tier_vector(tiers)) out.emplace_back(tiers);
    int pos = n_a - 1;
    while (pos >= 0 && tiers[pos] == n_a - 1) tiers[pos--] = 0;
    if (pos < 0) break;
    ++tiers[pos];
  }
  return out;
}

DiscreteDistribution uniform_distribution(int n_a, bool with_ties) {
  std::vector<Ranking> rankings = enumerate_rankings(n_a, with_ties);
  std::vector<Result> support(rankings.begin(), rankings.end());
  std::vector<double> probs(support.size(), 1.0 / support.size());
  return DiscreteDistribution(std::move(support), std::move(probs));
}

DiscreteDistribution explicit_distribution(
    std::span<const std::pair<Ranking, double>> pairs) {
  std::vector<Result> support;
  std::vector<double> probs;
  support.reserve(pairs.size());
  probs.reserve(pairs.size());
  for (const auto& [ranking, p] : pairs) {
    support.emplace_back(ranking);
    probs.push_back(p);
  }
  return DiscreteDistribution(std::move(support), std::move(probs));
}

EmpiricalSample sample_from(const DiscreteDistribution& dist, int n,
                            std::uint64_t seed) {
  if (n < 1) throw InputError("sample_from: n must be >= 1");
  std::vector<double> cum(dist.probs().size());
  std::partial_sum(dist.probs().begin(), dist.probs().end(), cum.begin());

  Rng rng(Rng::derive(seed, kSampleTag, 0));
  std::vector<Result> results;
  results.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    auto idx = static_cast<std::size_t>(it - cum.begin());
    if (idx >= cum.size()) idx = cum.size() - 1;
    results.push_back(dist.support()[idx]);
  }
  return EmpiricalSample(std::move(results),
                         AlternativeSet::indexed(dist.n_alternatives()));
}

AccuracyTable estimator_accuracy_experiment(
    const DiscreteDistribution& dist, const KernelSpec& spec,
    double alpha_star, double delta_star, std::span<const int> sample_sizes,
    int repetitions, std::uint64_t seed, int curve_n_rep, SubsampleMode mode,
    int threads, int n_star_cap, int n_star_rep) {
  if (repetitions < 1)
    throw InputError("estimator_accuracy_experiment: repetitions must be >= 1");
  for (int n : sample_sizes)
    if (n < 4)
      throw InputError("estimator_accuracy_experiment: sample sizes must be >= 4");

  AccuracyTable table;
  table.alpha_star = alpha_star;
  table.delta_star = delta_star;
  table.eps_star = epsilon_star(spec, delta_star);
  table.kernel = spec.describe();
  table.seed = seed;

  const auto exact = n_star_exact(dist, spec, alpha_star, table.eps_star,
                                  n_star_cap, n_star_rep,
                                  Rng::derive(seed, kAccuracyTag, 0));
  if (!exact)
    throw InputError("estimator_accuracy_experiment: exact n* exceeds the scan cap of " +
                     std::to_string(n_star_cap));
  table.n_star = *exact;

  table.rows.resize(sample_sizes.size() * static_cast<std::size_t>(repetitions));
  parallel_for(table.rows.size(), threads, [&](std::size_t idx) {
    const int size_idx = static_cast<int>(idx) / repetitions;
    const int rep = static_cast<int>(idx) % repetitions;
    const int big_n = sample_sizes[size_idx];

    AccuracyRow row;
    row.sample_size = big_n;
    row.repetition = rep;
    const std::uint64_t run_seed =
        Rng::derive(seed, (kAccuracyTag << 24) ^ static_cast<std::uint64_t>(big_n), rep);
    try {
      const EmpiricalSample sample = sample_from(dist, big_n, run_seed);
      // The accuracy pipeline bootstraps every n from 1 up to floor(N/2).
      std::vector<int> grid(static_cast<std::size_t>(big_n / 2));
      std::iota(grid.begin(), grid.end(), 1);
      const MmdQuantileCurve curve = quantile_curve_from_sample(
          sample, spec, grid, alpha_star, curve_n_rep, mode,
          Rng::derive(run_seed, kAccuracyTag, 1));
      const NStarEstimate est = estimate_n_star(curve, table.eps_star);
      row.n_hat = est.n_hat;
      row.ratio = static_cast<double>(est.n_hat) / table.n_star;
      row.status = "ok";
    } catch (const Error& e) {
      row.status = e.what();
    }
    table.rows[idx] = std::move(row);
  });
  return table;
}

std::string accuracy_table_csv(const AccuracyTable& table) {
  std::ostringstream os;
  os << "N,repetition,n_star,n_hat,ratio,status\n";
  char buf[64];
  for (const AccuracyRow& row : table.rows) {
    os << row.sample_size << ',' << row.repetition << ',' << table.n_star << ',';
    if (row.n_hat) os << *row.n_hat;
    os << ',';
    if (row.ratio) {
      std::snprintf(buf, sizeof(buf), "%.17g", *row.ratio);
      os << buf;
    }
    os << ',' << row.status << '\n';
  }
  return os.str();
}

std::string accuracy_table_json(const AccuracyTable& table) {
  nlohmann::ordered_json doc;
  doc["kernel"] = table.kernel;
  doc["alpha_star"] = table.alpha_star;
  doc["delta_star"] = table.delta_star;
  doc["eps_star"] = table.eps_star;
  doc["n_star"] = table.n_star;
  doc["seed"] = table.seed;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const AccuracyRow& row : table.rows) {
    nlohmann::ordered_json r;
    r["N"] = row.sample_size;
    r["repetition"] = row.repetition;
    if (row.n_hat) r["n_hat"] = *row.n_hat; else r["n_hat"] = nullptr;
    if (row.ratio) r["ratio"] = *row.ratio; else r["ratio"] = nullptr;
    r["status"] = row.status;
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump(2);
}

}  // namespace genrank
