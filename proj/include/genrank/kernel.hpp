#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "genrank/matrix.hpp"
#include "genrank/ranking.hpp"

namespace genrank {

/// One evaluation of all alternatives under a single experimental
/// condition: either a ranking or a vector of raw scores. The score
/// vector comes first so the variant stays default-constructible.
using ScoreVector = std::vector<double>;
using Result = std::variant<ScoreVector, Ranking>;

enum class KernelFamily { Borda, Jaccard, Mallows, Rbf };

std::string to_string(KernelFamily family);

/// A kernel family bound to an alternative count, with exactly the
/// parameters of its family set. Construct through the factory functions.
class KernelSpec {
 public:
  static KernelSpec borda(int n_a, int target_alternative, double nu);
  /// Borda with the recommended nu = 1/n_a.
  static KernelSpec borda_recommended(int n_a, int target_alternative);
  static KernelSpec jaccard(int n_a, int top_k);
  static KernelSpec mallows(int n_a, double nu);
  /// Mallows with the recommended nu = 1/C(n_a, 2).
  static KernelSpec mallows_recommended(int n_a);
  static KernelSpec rbf(int n_a, double gamma);

  KernelFamily family() const noexcept { return family_; }
  int n_alternatives() const noexcept { return n_a_; }
  double nu() const noexcept { return nu_; }
  double gamma() const noexcept { return gamma_; }
  int top_k() const noexcept { return top_k_; }
  int target() const noexcept { return target_; }

  /// Human-readable form, e.g. "mallows(nu=0.166667)".
  std::string describe() const;

 private:
  KernelSpec(KernelFamily family, int n_a) : family_(family), n_a_(n_a) {}

  KernelFamily family_;
  int n_a_;
  double nu_ = 0.0;
  double gamma_ = 0.0;
  int top_k_ = 0;
  int target_ = -1;
};

/// Range of the kernel; k_sup is 1 for all four families.
struct KernelBounds {
  double k_inf;
  double k_sup;
};

double kernel_eval(const KernelSpec& spec, const Ranking& x1, const Ranking& x2);
double kernel_eval(const KernelSpec& spec, std::span<const double> x1,
                   std::span<const double> x2);
double kernel_eval(const KernelSpec& spec, const Result& x1, const Result& x2);

/// Pairwise kernel evaluations over a homogeneous sample; symmetric with
/// unit diagonal and positive semidefinite up to rounding.
Matrix gram_matrix(const KernelSpec& spec, std::span<const Result> sample);

/// Recommended kernel parameter: 1/n_a for Borda, 1/C(n_a,2) for Mallows.
/// Jaccard's k is user intent and RBF's gamma comes from `median_gamma`,
/// so both return nullopt.
std::optional<double> recommended_param(KernelFamily family, int n_a);

/// Median heuristic: gamma = 1 / (2 * median pairwise squared distance).
/// All-identical vectors fall back to gamma = 1 (reported via `degenerate`).
double median_gamma(std::span<const ScoreVector> sample,
                    bool* degenerate = nullptr);

KernelBounds kernel_bounds(const KernelSpec& spec);

/// Similarity threshold for the MMD from the interpretable parameter
/// delta*: eps* = sqrt(2 (k_sup - f(delta*))) with f(x) = 1 - x for
/// Jaccard and f(x) = exp(-x) for the other families.
double epsilon_star(const KernelSpec& spec, double delta_star);

/// Unresolved kernel intent as it arrives from a command line or a config
/// file: missing parameters are filled with the recommended values (or the
/// median heuristic for RBF) when resolved against a concrete sample.
struct KernelChoice {
  KernelFamily family = KernelFamily::Mallows;
  std::optional<double> nu;
  std::optional<int> top_k;
  std::optional<int> target;
  std::optional<std::string> target_name;
  std::optional<double> gamma;

  /// Validates flag consistency (e.g. top_k only with Jaccard) and fills
  /// defaults. `vectors` feeds the RBF median heuristic.
  KernelSpec resolve(const AlternativeSet& alternatives,
                     std::span<const ScoreVector> vectors = {}) const;
};

}  // namespace genrank
