#include "genrank/distribution.hpp"

#include <cmath>
#include <set>

#include "genrank/errors.hpp"

namespace genrank {

namespace {

int result_width(const Result& r) {
  if (std::holds_alternative<Ranking>(r))
    return std::get<Ranking>(r).n_alternatives();
  return static_cast<int>(std::get<ScoreVector>(r).size());
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<Result> support,
                                           std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.empty())
    throw InputError("DiscreteDistribution: support must be non-empty");
  if (support_.size() != probs_.size())
    throw InputError("DiscreteDistribution: support and probabilities differ in length");

  holds_rankings_ = std::holds_alternative<Ranking>(support_.front());
  n_alternatives_ = result_width(support_.front());
  for (const Result& r : support_) {
    if (std::holds_alternative<Ranking>(r) != holds_rankings_)
      throw InputError("DiscreteDistribution: support mixes rankings and score vectors");
    if (result_width(r) != n_alternatives_)
      throw InputError("DiscreteDistribution: support entries disagree on n_a");
  }

  std::set<std::vector<int>> seen_rankings;
  std::set<std::vector<double>> seen_vectors;
  for (const Result& r : support_) {
    const bool fresh = holds_rankings_
        ? seen_rankings.insert(std::get<Ranking>(r).tiers()).second
        : seen_vectors.insert(std::get<ScoreVector>(r)).second;
    if (!fresh)
      throw InputError("DiscreteDistribution: support entries must be distinct");
  }

  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw InputError("DiscreteDistribution: probabilities must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InputError("DiscreteDistribution: probabilities must sum to 1");
}

bool DiscreteDistribution::is_point_mass() const noexcept {
  int heavy = 0;
  for (double p : probs_)
    if (p > 1e-12) ++heavy;
  return heavy <= 1;
}

}  // namespace genrank
