#include "genrank/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "genrank/errors.hpp"

namespace genrank {

namespace {

double binom2(int n) { return 0.5 * n * (n - 1); }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InputError(std::string(what) + " must be positive and finite");
}

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Borda: return "borda";
    case KernelFamily::Jaccard: return "jaccard";
    case KernelFamily::Mallows: return "mallows";
    case KernelFamily::Rbf: return "rbf";
  }
  return "?";
}

KernelSpec KernelSpec::borda(int n_a, int target_alternative, double nu) {
  if (n_a < 1) throw InputError("KernelSpec: n_a must be >= 1");
  if (target_alternative < 0 || target_alternative >= n_a)
    throw InputError("KernelSpec: target alternative out of range");
  require_positive(nu, "borda nu");
  KernelSpec s(KernelFamily::Borda, n_a);
  s.target_ = target_alternative;
  s.nu_ = nu;
  return s;
}

KernelSpec KernelSpec::borda_recommended(int n_a, int target_alternative) {
  return borda(n_a, target_alternative, 1.0 / n_a);
}

KernelSpec KernelSpec::jaccard(int n_a, int top_k) {
  if (n_a < 1) throw InputError("KernelSpec: n_a must be >= 1");
  if (top_k < 1 || top_k > n_a)
    throw InputError("KernelSpec: jaccard k must be in [1, n_a]");
  KernelSpec s(KernelFamily::Jaccard, n_a);
  s.top_k_ = top_k;
  return s;
}

KernelSpec KernelSpec::mallows(int n_a, double nu) {
  if (n_a < 1) throw InputError("KernelSpec: n_a must be >= 1");
  require_positive(nu, "mallows nu");
  KernelSpec s(KernelFamily::Mallows, n_a);
  s.nu_ = nu;
  return s;
}

KernelSpec KernelSpec::mallows_recommended(int n_a) {
  auto nu = recommended_param(KernelFamily::Mallows, n_a);
  return mallows(n_a, *nu);
}

KernelSpec KernelSpec::rbf(int n_a, double gamma) {
  if (n_a < 1) throw InputError("KernelSpec: n_a must be >= 1");
  require_positive(gamma, "rbf gamma");
  KernelSpec s(KernelFamily::Rbf, n_a);
  s.gamma_ = gamma;
  return s;
}

std::string KernelSpec::describe() const {
  std::ostringstream os;
  os << to_string(family_) << '(';
  switch (family_) {
    case KernelFamily::Borda:
      os << "nu=" << nu_ << ",target=" << target_;
      break;
    case KernelFamily::Jaccard:
      os << "k=" << top_k_;
      break;
    case KernelFamily::Mallows:
      os << "nu=" << nu_;
      break;
    case KernelFamily::Rbf:
      os << "gamma=" << gamma_;
      break;
  }
  os << ')';
  return os.str();
}

double kernel_eval(const KernelSpec& spec, const Ranking& x1, const Ranking& x2) {
  if (spec.family() == KernelFamily::Rbf)
    throw InputError("kernel_eval: the RBF kernel expects score vectors, not rankings");
  if (x1.n_alternatives() != spec.n_alternatives() ||
      x2.n_alternatives() != spec.n_alternatives())
    throw InputError("kernel_eval: ranking size does not match the kernel's n_a");

  switch (spec.family()) {
    case KernelFamily::Borda: {
      const int b1 = borda_count(x1, spec.target());
      const int b2 = borda_count(x2, spec.target());
      return std::exp(-spec.nu() * std::abs(b1 - b2));
    }
    case KernelFamily::Jaccard: {
      const int cutoff = spec.top_k() - 1;
      int both = 0, either = 0;
      for (int a = 0; a < spec.n_alternatives(); ++a) {
        const bool in1 = x1.tiers()[a] <= cutoff;
        const bool in2 = x2.tiers()[a] <= cutoff;
        both += in1 && in2;
        either += in1 || in2;
      }
      return static_cast<double>(both) / either;
    }
    case KernelFamily::Mallows:
      return std::exp(-spec.nu() * discordant_pairs(x1, x2));
    case KernelFamily::Rbf:
      break;
  }
  throw InputError("kernel_eval: unknown kernel family");
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x1,
                   std::span<const double> x2) {
  if (spec.family() != KernelFamily::Rbf)
    throw InputError("kernel_eval: " + to_string(spec.family()) +
                     " expects rankings, not score vectors");
  if (static_cast<int>(x1.size()) != spec.n_alternatives() ||
      static_cast<int>(x2.size()) != spec.n_alternatives())
    throw InputError("kernel_eval: vector length does not match the kernel's n_a");
  double d2 = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const double d = x1[i] - x2[i];
    d2 += d * d;
  }
  return std::exp(-spec.gamma() * d2);
}

double kernel_eval(const KernelSpec& spec, const Result& x1, const Result& x2) {
  if (x1.index() != x2.index())
    throw InputError("kernel_eval: results must have the same type");
  if (std::holds_alternative<Ranking>(x1))
    return kernel_eval(spec, std::get<Ranking>(x1), std::get<Ranking>(x2));
  return kernel_eval(spec, std::span<const double>(std::get<ScoreVector>(x1)),
                     std::span<const double>(std::get<ScoreVector>(x2)));
}

Matrix gram_matrix(const KernelSpec& spec, std::span<const Result> sample) {
  if (sample.empty()) throw InputError("gram_matrix: sample must be non-empty");
  const std::size_t type = sample.front().index();
  for (const Result& r : sample)
    if (r.index() != type)
      throw InputError("gram_matrix: sample mixes rankings and score vectors");

  const int m = static_cast<int>(sample.size());
  Matrix gram(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const double v = kernel_eval(spec, sample[i], sample[j]);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  return gram;
}

std::optional<double> recommended_param(KernelFamily family, int n_a) {
  if (n_a < 1) throw InputError("recommended_param: n_a must be >= 1");
  switch (family) {
    case KernelFamily::Borda:
      return 1.0 / n_a;
    case KernelFamily::Mallows:
      if (n_a < 2)
        throw InputError("recommended_param: mallows needs n_a >= 2");
      return 1.0 / binom2(n_a);
    case KernelFamily::Jaccard:
    case KernelFamily::Rbf:
      return std::nullopt;
  }
  return std::nullopt;
}

double median_gamma(std::span<const ScoreVector> sample, bool* degenerate) {
  if (degenerate) *degenerate = false;
  if (sample.size() < 2)
    throw InputError("median_gamma: need at least two vectors");
  const std::size_t dim = sample.front().size();
  std::vector<double> d2;
  d2.reserve(sample.size() * (sample.size() - 1) / 2);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (sample[i].size() != dim)
      throw InputError("median_gamma: vectors must have equal length");
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = sample[i][k] - sample[j][k];
        s += d * d;
      }
      d2.push_back(s);
    }
  }
  std::sort(d2.begin(), d2.end());
  const std::size_t m = d2.size();
  const double median =
      (m % 2 == 1) ? d2[m / 2] : 0.5 * (d2[m / 2 - 1] + d2[m / 2]);
  if (!(median > 0.0)) {
    if (degenerate) *degenerate = true;
    return 1.0;
  }
  return 1.0 / (2.0 * median);
}

KernelBounds kernel_bounds(const KernelSpec& spec) {
  switch (spec.family()) {
    case KernelFamily::Borda:
      return {std::exp(-spec.nu() * spec.n_alternatives()), 1.0};
    case KernelFamily::Jaccard:
      return {0.0, 1.0};
    case KernelFamily::Mallows:
      return {std::exp(-spec.nu() * binom2(spec.n_alternatives())), 1.0};
    case KernelFamily::Rbf:
      return {0.0, 1.0};
  }
  throw InputError("kernel_bounds: unknown kernel family");
}

double epsilon_star(const KernelSpec& spec, double delta_star) {
  if (!(delta_star >= 0.0 && delta_star <= 1.0))
    throw InputError("epsilon_star: delta* must lie in [0, 1]");
  const double f = spec.family() == KernelFamily::Jaccard
                       ? 1.0 - delta_star
                       : std::exp(-delta_star);
  const double k_sup = kernel_bounds(spec).k_sup;
  return std::sqrt(std::max(0.0, 2.0 * (k_sup - f)));
}

KernelSpec KernelChoice::resolve(const AlternativeSet& alternatives,
                                 std::span<const ScoreVector> vectors) const {
  const int n_a = alternatives.size();
  if (family != KernelFamily::Borda && (target || target_name))
    throw InputError("kernel: a target alternative only applies to the borda kernel");
  if (family != KernelFamily::Jaccard && top_k)
    throw InputError("kernel: top-k only applies to the jaccard kernel");
  if (family != KernelFamily::Rbf && gamma)
    throw InputError("kernel: gamma only applies to the rbf kernel");
  if ((family == KernelFamily::Jaccard || family == KernelFamily::Rbf) && nu)
    throw InputError("kernel: nu only applies to the borda and mallows kernels");

  switch (family) {
    case KernelFamily::Borda: {
      int t = 0;
      if (target && target_name)
        throw InputError("kernel: give the target alternative by index or by name, not both");
      if (target) {
        t = *target;
      } else if (target_name) {
        t = alternatives.index_of(*target_name);
        if (t < 0)
          throw InputError("kernel: unknown target alternative '" + *target_name + "'");
      }
      return KernelSpec::borda(n_a, t, nu ? *nu : 1.0 / n_a);
    }
    case KernelFamily::Jaccard:
      return KernelSpec::jaccard(n_a, top_k ? *top_k : 1);
    case KernelFamily::Mallows:
      return KernelSpec::mallows(n_a, nu ? *nu : *recommended_param(family, n_a));
    case KernelFamily::Rbf: {
      if (gamma) return KernelSpec::rbf(n_a, *gamma);
      if (vectors.empty())
        throw InputError("kernel: rbf needs either an explicit gamma or score vectors "
                         "for the median heuristic");
      return KernelSpec::rbf(n_a, median_gamma(vectors));
    }
  }
  throw InputError("kernel: unknown kernel family");
}

}  // namespace genrank
