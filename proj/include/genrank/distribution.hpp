#pragma once

#include <vector>

#include "genrank/kernel.hpp"

namespace genrank {

/// Explicit finite distribution over results (rankings or score vectors):
/// distinct support points with a probability vector.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<Result> support, std::vector<double> probs);

  const std::vector<Result>& support() const noexcept { return support_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  int size() const noexcept { return static_cast<int>(support_.size()); }
  int n_alternatives() const noexcept { return n_alternatives_; }
  bool holds_rankings() const noexcept { return holds_rankings_; }

  /// True when a single support point carries (numerically) all the mass.
  bool is_point_mass() const noexcept;

 private:
  std::vector<Result> support_;
  std::vector<double> probs_;
  int n_alternatives_ = 0;
  bool holds_rankings_ = true;
};

}  // namespace genrank
