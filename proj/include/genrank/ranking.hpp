#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace genrank {

/// A ranking with ties over a fixed set of alternatives: every alternative
/// carries a tier index, tier 0 is best, and the occupied tiers are exactly
/// 0..t_max with no gaps. Immutable after construction.
class Ranking {
 public:
  /// Validates the tier vector (non-empty, non-negative, gap-free).
  explicit Ranking(std::vector<int> tiers);

  /// Builds a ranking from raw scores. Alternatives are sorted by score
  /// (descending when higher is better) and consecutive sorted scores whose
  /// gap is <= tie_tol are chained into one tier.
  static Ranking from_scores(std::span<const double> scores,
                             bool higher_is_better, double tie_tol);

  int n_alternatives() const noexcept { return static_cast<int>(tiers_.size()); }
  int tier_of(int alternative) const;
  int tier_count() const noexcept { return tier_count_; }
  const std::vector<int>& tiers() const noexcept { return tiers_; }

  std::string to_string() const;

  friend bool operator==(const Ranking& a, const Ranking& b) {
    return a.tiers_ == b.tiers_;
  }
  friend std::strong_ordering operator<=>(const Ranking& a, const Ranking& b) {
    return a.tiers_ <=> b.tiers_;
  }

 private:
  std::vector<int> tiers_;
  int tier_count_ = 0;
};

/// Number of alternatives weakly dominated by `target` (itself included):
/// |{a : r(a) >= r(target)}|, in [1, n_a].
int borda_count(const Ranking& r, int target);

/// Alternatives occupying the k best tiers, {a : r(a) <= k-1}, as sorted
/// indices. k past the last tier returns all alternatives.
std::vector<int> top_k_tiers(const Ranking& r, int k);

/// Discordant pairs between two rankings over the same alternatives.
/// A strictly reversed pair counts 1, a pair tied in exactly one of the two
/// rankings counts 0.5; the value lies in [0, C(n_a, 2)].
double discordant_pairs(const Ranking& r1, const Ranking& r2);

/// The named alternatives of a study.
struct AlternativeSet {
  std::vector<std::string> names;

  explicit AlternativeSet(std::vector<std::string> names);
  /// "a1", "a2", ... placeholder names.
  static AlternativeSet indexed(int n);

  int size() const noexcept { return static_cast<int>(names.size()); }
  /// Index of `name`, or -1.
  int index_of(const std::string& name) const;

  friend bool operator==(const AlternativeSet&, const AlternativeSet&) = default;
};

}  // namespace genrank
