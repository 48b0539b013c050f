#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "genrank/kernel.hpp"
#include "genrank/ranking.hpp"
#include "genrank/rng.hpp"

namespace testutil {

/// Random valid ranking with ties: random tier assignment, gaps compressed.
inline genrank::Ranking random_ranking(genrank::Rng& rng, int n_a) {
  const int max_tiers = 1 + static_cast<int>(rng.next_below(n_a));
  std::vector<int> raw(n_a);
  for (int& t : raw) t = static_cast<int>(rng.next_below(max_tiers));
  std::vector<int> distinct = raw;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::map<int, int> remap;
  for (std::size_t i = 0; i < distinct.size(); ++i) remap[distinct[i]] = static_cast<int>(i);
  for (int& t : raw) t = remap[t];
  return genrank::Ranking(raw);
}

inline genrank::ScoreVector random_vector(genrank::Rng& rng, int dim) {
  genrank::ScoreVector v(dim);
  for (double& x : v) x = rng.next_double() * 2.0 - 1.0;
  return v;
}

/// One random kernel spec of the given family over n_a alternatives.
inline genrank::KernelSpec random_spec(genrank::Rng& rng, genrank::KernelFamily family,
                                       int n_a) {
  using genrank::KernelFamily;
  using genrank::KernelSpec;
  switch (family) {
    case KernelFamily::Borda:
      return KernelSpec::borda(n_a, static_cast<int>(rng.next_below(n_a)),
                               0.1 + rng.next_double());
    case KernelFamily::Jaccard:
      return KernelSpec::jaccard(n_a, 1 + static_cast<int>(rng.next_below(n_a)));
    case KernelFamily::Mallows:
      return KernelSpec::mallows(n_a, 0.1 + rng.next_double());
    case KernelFamily::Rbf:
      return KernelSpec::rbf(n_a, 0.1 + rng.next_double());
  }
  return KernelSpec::jaccard(n_a, 1);
}

inline genrank::Result random_result(genrank::Rng& rng, genrank::KernelFamily family,
                                     int n_a) {
  if (family == genrank::KernelFamily::Rbf) return random_vector(rng, n_a);
  return random_ranking(rng, n_a);
}

constexpr genrank::KernelFamily kAllFamilies[] = {
    genrank::KernelFamily::Borda, genrank::KernelFamily::Jaccard,
    genrank::KernelFamily::Mallows, genrank::KernelFamily::Rbf};

}  // namespace testutil
