#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "genrank/mmd.hpp"

namespace genrank {

/// (n, q_alpha(n)) pairs with n strictly increasing.
struct MmdQuantileCurve {
  std::vector<std::pair<int, double>> points;
  double alpha = 0.0;
};

enum class FitMode { FreeSlope, FixedSlope };

/// Log-log fit of the quantile curve: log n = beta1 * log q + beta0.
/// Fixed-slope mode pins beta1 = -2; residual is the RMS log residual.
struct PowerLawFit {
  double beta0 = 0.0;
  double beta1 = 0.0;
  FitMode mode = FitMode::FreeSlope;
  double residual = 0.0;
};

/// Least-squares fit over the curve points with q > 1e-12. Free slope
/// needs at least 3 usable points, fixed slope at least 1; FitError
/// otherwise (carrying the usable count).
PowerLawFit fit_quantile_curve(const MmdQuantileCurve& curve, FitMode mode);

/// Predicted minimum study size at the similarity threshold eps*:
/// ceil(exp(beta1 * log eps* + beta0)), floored at 1.
int predict_n_star(const PowerLawFit& fit, double eps_star);

/// Subsample-size grid for a curve built from N results: every n in
/// 2..floor(N/2) while that stays small, about 20 log-spaced values
/// otherwise.
std::vector<int> workflow_n_grid(int sample_size);

/// Quantile curve extracted from per-n MMD draws.
MmdQuantileCurve curve_from_samples(std::span<const MmdSample> samples,
                                    double alpha);

MmdQuantileCurve quantile_curve_from_sample(const EmpiricalSample& sample,
                                            const KernelSpec& spec,
                                            std::span<const int> n_grid,
                                            double alpha, int n_rep,
                                            SubsampleMode mode,
                                            std::uint64_t seed);

MmdQuantileCurve quantile_curve_from_distribution(
    const DiscreteDistribution& dist, const KernelSpec& spec,
    std::span<const int> n_grid, double alpha, int n_rep, std::uint64_t seed);

/// Estimated n* from a quantile curve: free-slope fit when enough points
/// survive, fixed-slope as fallback, and n_hat = 1 when every quantile is
/// (numerically) zero, i.e. the results are already indistinguishable.
struct NStarEstimate {
  int n_hat = 1;
  std::optional<PowerLawFit> fit;
};
NStarEstimate estimate_n_star(const MmdQuantileCurve& curve, double eps_star,
                              FitMode preferred = FitMode::FreeSlope);

/// Eigenvalues of the probability-centered kernel matrix
/// (I - 1 p^T) K (I - p 1^T) diag(p), computed on the similar symmetric
/// matrix diag(sqrt p) K~ diag(sqrt p) with cyclic Jacobi iterations.
/// Descending order; all values are real and their sum is non-negative.
std::vector<double> centered_kernel_eigenvalues(const Matrix& kernel_matrix,
                                                std::span<const double> probs);

/// Scaled chi-square a * chi2(dof) matching the first two noncentral
/// moments of Q = 2 sum_k lambda_k Z_k^2.
struct ChiSquareMatch {
  std::vector<double> lambdas;
  double lambda1 = 0.0;  // sum lambda_k
  double lambda2 = 0.0;  // 3 sum lambda_k^2 + sum_{i != j} lambda_i lambda_j
  double scale = 0.0;    // a
  double dof = 0.0;      // d
};

/// nullopt signals a degenerate spectrum (all eigenvalues ~ 0, i.e. a
/// point-mass distribution) for which the closed form is unavailable.
std::optional<ChiSquareMatch> chi2_moment_match(std::span<const double> lambdas);

/// Closed-form approximation of the standard normal quantile, valid in
/// the upper tail alpha in [0.6, 1).
double lin_inverse_normal(double alpha);

/// Closed-form alpha-quantile of MMD_n under `dist`: chains the limiting
/// distribution's eigenvalues, the chi-square moment match, the
/// Wilson-Hilferty cube-root normalization, and the closed-form normal
/// quantile. Point-mass distributions yield 0.
double closed_form_quantile(const DiscreteDistribution& dist,
                            const KernelSpec& spec, int n, double alpha);

/// Distribution-free upper bound on the alpha-quantile of MMD_n:
/// (sqrt(-log(1-alpha) * 4 k_sup) + sqrt(2 k_sup)) / sqrt(n).
double distribution_free_epsilon(const KernelSpec& spec, double alpha, int n);

/// (beta0, beta1) of the distribution-free power law
/// log n = beta1 log eps + beta0, with beta1 = -2.
std::pair<double, double> distribution_free_power_law(const KernelSpec& spec,
                                                      double alpha);

}  // namespace genrank
