#include "genrank/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "genrank/errors.hpp"

namespace genrank {

namespace {

constexpr double kZeroQuantile = 1e-12;

struct LogPoints {
  std::vector<double> x;  // log q
  std::vector<double> y;  // log n
};

LogPoints usable_log_points(const MmdQuantileCurve& curve) {
  LogPoints pts;
  for (const auto& [n, q] : curve.points) {
    if (q <= kZeroQuantile) continue;
    pts.x.push_back(std::log(q));
    pts.y.push_back(std::log(static_cast<double>(n)));
  }
  return pts;
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

PowerLawFit fit_quantile_curve(const MmdQuantileCurve& curve, FitMode mode) {
  const LogPoints pts = usable_log_points(curve);
  const int usable = static_cast<int>(pts.x.size());
  const int needed = mode == FitMode::FreeSlope ? 3 : 1;
  if (usable < needed)
    throw FitError("fit_quantile_curve: " + std::to_string(usable) +
                       " usable point(s), need " + std::to_string(needed),
                   usable);

  PowerLawFit fit;
  fit.mode = mode;
  if (mode == FitMode::FreeSlope) {
    const double mx = mean(pts.x);
    const double my = mean(pts.y);
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < usable; ++i) {
      sxx += (pts.x[i] - mx) * (pts.x[i] - mx);
      sxy += (pts.x[i] - mx) * (pts.y[i] - my);
    }
    if (sxx <= 1e-24)
      throw FitError("fit_quantile_curve: quantiles are constant, slope undefined",
                     usable);
    fit.beta1 = sxy / sxx;
    fit.beta0 = my - fit.beta1 * mx;
  } else {
    fit.beta1 = -2.0;
    double s = 0.0;
    for (int i = 0; i < usable; ++i) s += pts.y[i] - fit.beta1 * pts.x[i];
    fit.beta0 = s / usable;
  }

  double rss = 0.0;
  for (int i = 0; i < usable; ++i) {
    const double r = pts.y[i] - (fit.beta0 + fit.beta1 * pts.x[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / usable);
  return fit;
}

int predict_n_star(const PowerLawFit& fit, double eps_star) {
  if (!(eps_star > 0.0) || !std::isfinite(eps_star))
    throw InputError("predict_n_star: eps* must be positive and finite");
  const double log_n = fit.beta1 * std::log(eps_star) + fit.beta0;
  if (!std::isfinite(log_n))
    throw NumericError("predict_n_star: prediction is not finite");
  const double n = std::exp(log_n);
  if (n >= static_cast<double>(std::numeric_limits<int>::max()))
    return std::numeric_limits<int>::max();
  return std::max(1, static_cast<int>(std::ceil(n)));
}

std::vector<int> workflow_n_grid(int sample_size) {
  const int max_n = sample_size / 2;
  if (max_n < 2)
    throw InputError("workflow_n_grid: need at least 4 results for a curve");
  std::vector<int> grid;
  if (max_n <= 32) {
    for (int n = 2; n <= max_n; ++n) grid.push_back(n);
    return grid;
  }
  const int points = 20;
  const double lo = std::log(2.0);
  const double hi = std::log(static_cast<double>(max_n));
  for (int i = 0; i < points; ++i) {
    const double t = lo + (hi - lo) * i / (points - 1);
    const int n = static_cast<int>(std::lround(std::exp(t)));
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  return grid;
}

MmdQuantileCurve curve_from_samples(std::span<const MmdSample> samples,
                                    double alpha) {
  MmdQuantileCurve curve;
  curve.alpha = alpha;
  curve.points.reserve(samples.size());
  int prev = 0;
  for (const MmdSample& s : samples) {
    if (s.subsample_size <= prev)
      throw InputError("curve_from_samples: subsample sizes must be strictly increasing");
    prev = s.subsample_size;
    curve.points.emplace_back(s.subsample_size,
                              empirical_quantile(s.values, alpha));
  }
  return curve;
}

MmdQuantileCurve quantile_curve_from_sample(const EmpiricalSample& sample,
                                            const KernelSpec& spec,
                                            std::span<const int> n_grid,
                                            double alpha, int n_rep,
                                            SubsampleMode mode,
                                            std::uint64_t seed) {
  const auto samples = mmd_samples_for_grid(sample, spec, n_grid, n_rep, mode, seed);
  return curve_from_samples(samples, alpha);
}

MmdQuantileCurve quantile_curve_from_distribution(
    const DiscreteDistribution& dist, const KernelSpec& spec,
    std::span<const int> n_grid, double alpha, int n_rep, std::uint64_t seed) {
  std::vector<MmdSample> samples;
  samples.reserve(n_grid.size());
  for (int n : n_grid)
    samples.push_back(mmd_distribution_from(dist, spec, n, n_rep, seed));
  return curve_from_samples(samples, alpha);
}

NStarEstimate estimate_n_star(const MmdQuantileCurve& curve, double eps_star,
                              FitMode preferred) {
  NStarEstimate est;
  try {
    const PowerLawFit fit = fit_quantile_curve(curve, preferred);
    est.fit = fit;
    est.n_hat = predict_n_star(fit, eps_star);
    return est;
  } catch (const FitError& e) {
    if (e.usable_points == 0) {
      // Every quantile is zero: the results are already indistinguishable.
      est.n_hat = 1;
      return est;
    }
  }
  const PowerLawFit fit = fit_quantile_curve(curve, FitMode::FixedSlope);
  est.fit = fit;
  est.n_hat = predict_n_star(fit, eps_star);
  return est;
}

std::vector<double> centered_kernel_eigenvalues(const Matrix& kernel_matrix,
                                                std::span<const double> probs) {
  if (!kernel_matrix.is_square())
    throw InputError("centered_kernel_eigenvalues: kernel matrix must be square");
  if (!kernel_matrix.is_symmetric())
    throw InputError("centered_kernel_eigenvalues: kernel matrix must be symmetric");
  const int l = kernel_matrix.rows();
  if (static_cast<int>(probs.size()) != l)
    throw InputError("centered_kernel_eigenvalues: probability vector length mismatch");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw InputError("centered_kernel_eigenvalues: probabilities must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InputError("centered_kernel_eigenvalues: probabilities must sum to 1");

  // K~ = (I - 1 p^T) K (I - p 1^T); conjugating by diag(sqrt p) keeps the
  // spectrum of K~ diag(p) while staying symmetric for the Jacobi solver.
  std::vector<double> row_mean(l, 0.0);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) row_mean[i] += kernel_matrix(i, j) * probs[j];
  double grand_mean = 0.0;
  for (int i = 0; i < l; ++i) grand_mean += probs[i] * row_mean[i];

  Matrix m(l, l);
  std::vector<double> sqrt_p(l);
  for (int i = 0; i < l; ++i) sqrt_p[i] = std::sqrt(probs[i]);
  for (int i = 0; i < l; ++i) {
    for (int j = i; j < l; ++j) {
      const double centered =
          kernel_matrix(i, j) - row_mean[i] - row_mean[j] + grand_mean;
      const double v = sqrt_p[i] * sqrt_p[j] * centered;
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return jacobi_eigenvalues(std::move(m));
}

std::optional<ChiSquareMatch> chi2_moment_match(std::span<const double> lambdas) {
  double l1 = 0.0, sum_sq = 0.0;
  for (double l : lambdas) {
    l1 += l;
    sum_sq += l * l;
  }
  // Lambda2 - Lambda1^2 = 2 sum lambda_k^2, so the spectrum is degenerate
  // exactly when all eigenvalues are (numerically) zero.
  if (l1 <= 1e-10 || sum_sq <= 1e-20) return std::nullopt;

  ChiSquareMatch match;
  match.lambdas.assign(lambdas.begin(), lambdas.end());
  match.lambda1 = l1;
  match.lambda2 = l1 * l1 + 2.0 * sum_sq;
  match.scale = 2.0 * sum_sq / l1;
  match.dof = l1 * l1 / sum_sq;
  return match;
}

double lin_inverse_normal(double alpha) {
  if (!(alpha >= 0.6 && alpha < 1.0))
    throw InputError("lin_inverse_normal: alpha must lie in [0.6, 1)");
  constexpr double c0 = -0.861779;
  constexpr double c1 = 0.00120192;
  constexpr double c2 = 514089.0;
  constexpr double c3 = 1664000.0;
  return c0 + c1 * std::sqrt(c2 - c3 * std::log(2.0 * (1.0 - alpha)));
}

namespace {

/// Inverse Wilson-Hilferty normalization: quantile of a * chi2(d) from a
/// standard normal quantile z.
double wilson_hilferty_inverse(double z, double scale, double dof) {
  const double c = 2.0 / (9.0 * dof);
  const double base = std::sqrt(c) * z + (1.0 - c);
  return scale * dof * base * base * base;
}

}  // namespace

double closed_form_quantile(const DiscreteDistribution& dist,
                            const KernelSpec& spec, int n, double alpha) {
  if (n < 1) throw InputError("closed_form_quantile: n must be >= 1");
  const double z = lin_inverse_normal(alpha);
  const Matrix gram = gram_matrix(spec, dist.support());
  const auto lambdas = centered_kernel_eigenvalues(gram, dist.probs());
  const auto match = chi2_moment_match(lambdas);
  if (!match) return 0.0;
  const double q = wilson_hilferty_inverse(z, match->scale, match->dof);
  return std::sqrt(std::max(0.0, q) / n);
}

double distribution_free_epsilon(const KernelSpec& spec, double alpha, int n) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InputError("distribution_free_epsilon: alpha must lie in (0, 1)");
  if (n < 1) throw InputError("distribution_free_epsilon: n must be >= 1");
  const double k_sup = kernel_bounds(spec).k_sup;
  return (std::sqrt(-std::log1p(-alpha) * 4.0 * k_sup) +
          std::sqrt(2.0 * k_sup)) /
         std::sqrt(static_cast<double>(n));
}

std::pair<double, double> distribution_free_power_law(const KernelSpec& spec,
                                                      double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InputError("distribution_free_power_law: alpha must lie in (0, 1)");
  const double k_sup = kernel_bounds(spec).k_sup;
  const double beta0 =
      std::log(2.0 * k_sup) + std::log(std::sqrt(-2.0 * std::log1p(-alpha)) + 1.0);
  return {beta0, -2.0};
}

}  // namespace genrank
