#include "genrank/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "genrank/errors.hpp"

namespace genrank {

Ranking::Ranking(std::vector<int> tiers) : tiers_(std::move(tiers)) {
  if (tiers_.empty()) throw InputError("Ranking: need at least one alternative");
  int max_tier = 0;
  for (int t : tiers_) {
    if (t < 0) throw InputError("Ranking: tier indices must be non-negative");
    max_tier = std::max(max_tier, t);
  }
  std::vector<char> seen(static_cast<std::size_t>(max_tier) + 1, 0);
  for (int t : tiers_) seen[t] = 1;
  for (int t = 0; t <= max_tier; ++t)
    if (!seen[t])
      throw InputError("Ranking: tier " + std::to_string(t) +
                       " is unoccupied (tiers must be 0..t_max with no gaps)");
  tier_count_ = max_tier + 1;
}

Ranking Ranking::from_scores(std::span<const double> scores,
                             bool higher_is_better, double tie_tol) {
  if (scores.empty()) throw InputError("from_scores: need at least one score");
  if (!(tie_tol >= 0.0) || !std::isfinite(tie_tol))
    throw InputError("from_scores: tie tolerance must be finite and non-negative");
  for (double s : scores)
    if (!std::isfinite(s)) throw InputError("from_scores: scores must be finite");

  const int n = static_cast<int>(scores.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return higher_is_better ? scores[a] > scores[b] : scores[a] < scores[b];
  });

  std::vector<int> tiers(n, 0);
  int tier = 0;
  for (int i = 1; i < n; ++i) {
    const double gap = std::abs(scores[order[i]] - scores[order[i - 1]]);
    if (gap > tie_tol) ++tier;
    tiers[order[i]] = tier;
  }
  return Ranking(std::move(tiers));
}

int Ranking::tier_of(int alternative) const {
  if (alternative < 0 || alternative >= n_alternatives())
    throw InputError("Ranking: alternative index out of range");
  return tiers_[alternative];
}

std::string Ranking::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < tiers_.size(); ++i) {
    if (i) os << ',';
    os << tiers_[i];
  }
  os << ')';
  return os.str();
}

int borda_count(const Ranking& r, int target) {
  const int t = r.tier_of(target);
  int count = 0;
  for (int tier : r.tiers())
    if (tier >= t) ++count;
  return count;
}

std::vector<int> top_k_tiers(const Ranking& r, int k) {
  if (k < 1) throw InputError("top_k_tiers: k must be >= 1");
  std::vector<int> top;
  for (int a = 0; a < r.n_alternatives(); ++a)
    if (r.tiers()[a] <= k - 1) top.push_back(a);
  return top;
}

double discordant_pairs(const Ranking& r1, const Ranking& r2) {
  if (r1.n_alternatives() != r2.n_alternatives())
    throw InputError("discordant_pairs: rankings must cover the same alternatives");
  const auto sgn = [](int x) { return (x > 0) - (x < 0); };
  const int n = r1.n_alternatives();
  double count = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int d1 = sgn(r1.tiers()[i] - r1.tiers()[j]);
      const int d2 = sgn(r2.tiers()[i] - r2.tiers()[j]);
      if (d1 == d2) continue;
      count += (d1 == 0 || d2 == 0) ? 0.5 : 1.0;
    }
  }
  return count;
}

AlternativeSet::AlternativeSet(std::vector<std::string> names_in)
    : names(std::move(names_in)) {
  if (names.empty()) throw InputError("AlternativeSet: need at least one alternative");
  std::set<std::string> unique(names.begin(), names.end());
  if (unique.size() != names.size())
    throw InputError("AlternativeSet: alternative names must be unique");
}

AlternativeSet AlternativeSet::indexed(int n) {
  if (n < 1) throw InputError("AlternativeSet: need at least one alternative");
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 1; i <= n; ++i) names.push_back("a" + std::to_string(i));
  return AlternativeSet(std::move(names));
}

int AlternativeSet::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

}  // namespace genrank
