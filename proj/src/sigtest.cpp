#include "genrank/sigtest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "genrank/errors.hpp"
#include "genrank/parallel.hpp"
#include "genrank/rng.hpp"
#include "genrank/synthetic.hpp"

#include "json.hpp"

namespace genrank {

namespace {

constexpr std::uint64_t kDemoSampleTag = 0xDE301ULL;
constexpr std::uint64_t kDemoGenTag = 0xDE302ULL;

/// Within-block 1-based average ranks, one row per result. Tiers map to
/// mid-ranks; score vectors are ranked per block first (higher = better).
Matrix block_midranks(const EmpiricalSample& sample) {
  const int blocks = sample.size();
  const int k = sample.n_alternatives();
  Matrix ranks(blocks, k);
  for (int b = 0; b < blocks; ++b) {
    const Ranking ranking =
        std::holds_alternative<Ranking>(sample.results[b])
            ? std::get<Ranking>(sample.results[b])
            : Ranking::from_scores(std::get<ScoreVector>(sample.results[b]),
                                   /*higher_is_better=*/true, /*tie_tol=*/0.0);
    std::vector<int> tier_size(ranking.tier_count(), 0);
    for (int t : ranking.tiers()) ++tier_size[t];
    std::vector<double> tier_midrank(ranking.tier_count());
    int placed = 0;
    for (int t = 0; t < ranking.tier_count(); ++t) {
      tier_midrank[t] = placed + 0.5 * (tier_size[t] + 1);
      placed += tier_size[t];
    }
    for (int a = 0; a < k; ++a) ranks(b, a) = tier_midrank[ranking.tiers()[a]];
  }
  return ranks;
}

double chi_square_upper_tail(double x, double dof) {
  if (x <= 0.0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, x));
}

double student_t_two_sided(double t, double dof) {
  boost::math::students_t dist(dof);
  const double tail = boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return std::min(1.0, 2.0 * tail);
}

struct RankSummary {
  int blocks = 0;
  int k = 0;
  std::vector<double> rank_sums;
  double a1 = 0.0;  // sum of squared ranks
  double c1 = 0.0;  // b k (k+1)^2 / 4
};

RankSummary summarize_ranks(const EmpiricalSample& sample) {
  if (sample.size() < 2)
    throw InputError("friedman_test: need at least 2 results (blocks)");
  if (sample.n_alternatives() < 2)
    throw InputError("friedman_test: need at least 2 alternatives");
  const Matrix ranks = block_midranks(sample);
  RankSummary s;
  s.blocks = ranks.rows();
  s.k = ranks.cols();
  s.rank_sums.assign(s.k, 0.0);
  for (int b = 0; b < s.blocks; ++b) {
    for (int a = 0; a < s.k; ++a) {
      s.rank_sums[a] += ranks(b, a);
      s.a1 += ranks(b, a) * ranks(b, a);
    }
  }
  s.c1 = s.blocks * s.k * (s.k + 1.0) * (s.k + 1.0) / 4.0;
  return s;
}

double friedman_statistic(const RankSummary& s) {
  const double denom = s.a1 - s.c1;
  if (denom <= 1e-12) return 0.0;
  double ss = 0.0;
  const double center = s.blocks * (s.k + 1.0) / 2.0;
  for (double r : s.rank_sums) ss += (r - center) * (r - center);
  return (s.k - 1.0) * ss / denom;
}

}  // namespace

FriedmanResult friedman_test(const EmpiricalSample& sample) {
  const RankSummary s = summarize_ranks(sample);
  FriedmanResult out;
  out.statistic = friedman_statistic(s);
  if (s.a1 - s.c1 <= 1e-12) {
    out.p_value = 1.0;  // every block fully tied
    return out;
  }
  out.p_value = chi_square_upper_tail(out.statistic, s.k - 1.0);
  return out;
}

SignificanceResult conover_iman(const EmpiricalSample& sample,
                                double significance) {
  if (!(significance > 0.0 && significance < 1.0))
    throw InputError("conover_iman: significance must lie in (0, 1)");
  const RankSummary s = summarize_ranks(sample);

  SignificanceResult out;
  out.friedman_statistic = friedman_statistic(s);
  const double denom = s.a1 - s.c1;
  out.friedman_p = denom <= 1e-12
                       ? 1.0
                       : chi_square_upper_tail(out.friedman_statistic, s.k - 1.0);

  const double best_sum = *std::min_element(s.rank_sums.begin(), s.rank_sums.end());
  for (int a = 0; a < s.k; ++a)
    if (s.rank_sums[a] <= best_sum + 1e-9) out.best_alternatives.push_back(a);

  out.pairwise_p = Matrix(s.k, s.k, 1.0);
  const double dof = (s.blocks - 1.0) * (s.k - 1.0);
  double se = 0.0;
  if (denom > 1e-12) {
    const double shrink = 1.0 - out.friedman_statistic / (s.blocks * (s.k - 1.0));
    se = std::sqrt(std::max(0.0, 2.0 * s.blocks * denom * shrink / dof));
  }
  for (int i = 0; i < s.k; ++i) {
    for (int j = i + 1; j < s.k; ++j) {
      const double diff = std::abs(s.rank_sums[i] - s.rank_sums[j]);
      double p;
      if (se > 1e-12) {
        p = student_t_two_sided(diff / se, dof);
      } else {
        p = diff <= 1e-9 ? 1.0 : 0.0;  // perfect association, or all tied
      }
      out.pairwise_p(i, j) = p;
      out.pairwise_p(j, i) = p;
    }
  }

  if (out.friedman_p < significance && out.best_alternatives.size() == 1) {
    const int best = out.best_alternatives.front();
    out.best_is_significant = true;
    for (int j = 0; j < s.k && out.best_is_significant; ++j)
      if (j != best && !(out.pairwise_p(best, j) < significance))
        out.best_is_significant = false;
  }
  return out;
}

DemoSummary significance_vs_generalizability_demo(int repetitions,
                                                  int sample_size,
                                                  std::uint64_t seed, int n_rep,
                                                  int threads) {
  if (repetitions < 1)
    throw InputError("significance demo: repetitions must be >= 1");
  if (sample_size < 4 || sample_size % 2 != 0)
    throw InputError("significance demo: the sample size must be even and >= 4");

  const DiscreteDistribution dist = explicit_distribution(
      std::vector<std::pair<Ranking, double>>{
          {Ranking({0, 1, 2, 3, 4}), 0.55},
          {Ranking({1, 0, 2, 3, 4}), 0.45},
      });
  const KernelSpec kernel = KernelSpec::jaccard(5, 1);
  const double eps = epsilon_star(kernel, 0.05);
  const int half = sample_size / 2;

  struct RepOutcome {
    bool friedman_significant = false;
    bool ci_significant = false;
    std::vector<int> best;
    double gen = 0.0;
  };
  std::vector<RepOutcome> outcomes(repetitions);

  parallel_for(static_cast<std::size_t>(repetitions), threads, [&](std::size_t r) {
    const EmpiricalSample sample =
        sample_from(dist, sample_size, Rng::derive(seed, kDemoSampleTag, r));
    const SignificanceResult sig = conover_iman(sample, 0.05);
    RepOutcome& o = outcomes[r];
    o.friedman_significant = sig.friedman_p < 0.05;
    o.ci_significant = sig.best_is_significant;
    o.best = sig.best_alternatives;
    o.gen = generalizability(sample, kernel, half, eps, n_rep,
                             SubsampleMode::WithoutReplacement,
                             Rng::derive(seed, kDemoGenTag, r));
  });

  DemoSummary summary;
  summary.repetitions = repetitions;
  summary.sample_size = sample_size;
  summary.seed = seed;

  std::map<std::pair<bool, std::vector<int>>, std::vector<double>> cells;
  double gen_sum = 0.0;
  int friedman_hits = 0, ci_hits = 0;
  for (const RepOutcome& o : outcomes) {
    friedman_hits += o.friedman_significant;
    ci_hits += o.ci_significant;
    gen_sum += o.gen;
    cells[{o.ci_significant, o.best}].push_back(o.gen);
  }
  summary.friedman_significant_fraction =
      static_cast<double>(friedman_hits) / repetitions;
  summary.ci_significant_fraction = static_cast<double>(ci_hits) / repetitions;
  summary.overall_mean = gen_sum / repetitions;
  double ss = 0.0;
  for (const RepOutcome& o : outcomes)
    ss += (o.gen - summary.overall_mean) * (o.gen - summary.overall_mean);
  summary.overall_std =
      repetitions > 1 ? std::sqrt(ss / (repetitions - 1)) : 0.0;

  for (const auto& [key, values] : cells) {
    DemoCell cell;
    cell.ci_significant = key.first;
    cell.best_alternatives = key.second;
    cell.count = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    cell.mean_generalizability = sum / values.size();
    double cell_ss = 0.0;
    for (double v : values)
      cell_ss += (v - cell.mean_generalizability) * (v - cell.mean_generalizability);
    cell.std_generalizability =
        values.size() > 1 ? std::sqrt(cell_ss / (values.size() - 1)) : 0.0;
    summary.cells.push_back(std::move(cell));
  }
  return summary;
}

namespace {

std::string best_label(const std::vector<int>& best) {
  std::ostringstream os;
  for (std::size_t i = 0; i < best.size(); ++i) {
    if (i) os << '+';
    os << best[i];
  }
  return os.str();
}

}  // namespace

std::string demo_summary_csv(const DemoSummary& summary) {
  std::ostringstream os;
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  os << "ci_significant,best_alternatives,count,mean_generalizability,std_generalizability\n";
  for (const DemoCell& cell : summary.cells)
    os << (cell.ci_significant ? "true" : "false") << ',' << best_label(cell.best_alternatives)
       << ',' << cell.count << ',' << num(cell.mean_generalizability) << ','
       << num(cell.std_generalizability) << '\n';
  os << ",all," << summary.repetitions << ',' << num(summary.overall_mean) << ','
     << num(summary.overall_std) << '\n';
  return os.str();
}

std::string demo_summary_json(const DemoSummary& summary) {
  nlohmann::ordered_json doc;
  doc["repetitions"] = summary.repetitions;
  doc["sample_size"] = summary.sample_size;
  doc["seed"] = summary.seed;
  doc["friedman_significant_fraction"] = summary.friedman_significant_fraction;
  doc["ci_significant_fraction"] = summary.ci_significant_fraction;
  doc["overall_mean_generalizability"] = summary.overall_mean;
  doc["overall_std_generalizability"] = summary.overall_std;
  doc["cells"] = nlohmann::ordered_json::array();
  for (const DemoCell& cell : summary.cells) {
    nlohmann::ordered_json c;
    c["ci_significant"] = cell.ci_significant;
    c["best_alternatives"] = cell.best_alternatives;
    c["count"] = cell.count;
    c["mean_generalizability"] = cell.mean_generalizability;
    c["std_generalizability"] = cell.std_generalizability;
    doc["cells"].push_back(std::move(c));
  }
  return doc.dump(2);
}

}  // namespace genrank
