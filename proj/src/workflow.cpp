#include "genrank/workflow.hpp"

#include <algorithm>
#include <numeric>

#include "genrank/errors.hpp"
#include "genrank/rng.hpp"

namespace genrank {

namespace {

constexpr std::uint64_t kWorkflowTag = 0x3F10ULL;
constexpr std::uint64_t kSourceTag = 0x50CEULL;

PowerLawFit degenerate_fit() {
  // Stands in when all quantiles vanished: log n = -2 log q + 0 predicts
  // n_hat = 1 at any positive eps <= 1.
  PowerLawFit fit;
  fit.beta0 = 0.0;
  fit.beta1 = -2.0;
  fit.mode = FitMode::FixedSlope;
  fit.residual = 0.0;
  return fit;
}

}  // namespace

GenRequirement GenRequirement::from_delta(const KernelSpec& spec,
                                          double alpha_star, double delta_star) {
  if (!(alpha_star > 0.0 && alpha_star < 1.0))
    throw InputError("GenRequirement: alpha* must lie in (0, 1)");
  GenRequirement req;
  req.alpha_star = alpha_star;
  req.delta_star = delta_star;
  req.eps_star = epsilon_star(spec, delta_star);
  return req;
}

DistributionSource::DistributionSource(DiscreteDistribution dist,
                                       std::uint64_t seed)
    : dist_(std::move(dist)), seed_(seed) {
  cumulative_.resize(dist_.probs().size());
  std::partial_sum(dist_.probs().begin(), dist_.probs().end(),
                   cumulative_.begin());
}

std::vector<Result> DistributionSource::next_batch(int count) {
  std::vector<Result> batch;
  batch.reserve(std::max(count, 0));
  for (int i = 0; i < count; ++i) {
    Rng rng(Rng::derive(seed_, kSourceTag, drawn_++));
    const double u = rng.next_double();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    auto idx = static_cast<std::size_t>(it - cumulative_.begin());
    if (idx >= cumulative_.size()) idx = cumulative_.size() - 1;
    batch.push_back(dist_.support()[idx]);
  }
  return batch;
}

AlternativeSet DistributionSource::alternatives() const {
  return AlternativeSet::indexed(dist_.n_alternatives());
}

PoolSource::PoolSource(std::vector<Result> items, AlternativeSet alternatives)
    : items_(std::move(items)), alternatives_(std::move(alternatives)) {}

std::vector<Result> PoolSource::next_batch(int count) {
  std::vector<Result> batch;
  while (count-- > 0 && cursor_ < items_.size()) batch.push_back(items_[cursor_++]);
  return batch;
}

AlternativeSet PoolSource::alternatives() const { return alternatives_; }

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Converged: return "converged";
    case StopReason::SourceExhausted: return "source-exhausted";
    case StopReason::CapReached: return "cap-reached";
  }
  return "?";
}

WorkflowReport run_generalizable_study(ExperimentSource& source,
                                       const KernelSpec& spec,
                                       const GenRequirement& req,
                                       int batch_size, const WorkflowCaps& caps,
                                       int n_rep, std::uint64_t seed,
                                       SubsampleMode mode, FitMode fit_mode) {
  if (batch_size < 4)
    throw InputError("run_generalizable_study: the batch size must be >= 4");
  if (caps.max_total < 4 || caps.max_iterations < 1)
    throw InputError("run_generalizable_study: caps must allow at least one batch");

  WorkflowReport report;
  report.seed = seed;
  const AlternativeSet alternatives = source.alternatives();
  std::vector<Result> results;

  for (int iter = 0; iter < caps.max_iterations; ++iter) {
    const int want = std::min<int>(batch_size,
                                   caps.max_total - static_cast<int>(results.size()));
    std::vector<Result> batch = source.next_batch(want);
    const bool exhausted = static_cast<int>(batch.size()) < want;
    if (batch.empty() && !report.iterations.empty()) {
      // Nothing new to learn from; the previous estimate stands.
      report.stopped_reason = StopReason::SourceExhausted;
      return report;
    }
    results.insert(results.end(), std::make_move_iterator(batch.begin()),
                   std::make_move_iterator(batch.end()));

    const int total = static_cast<int>(results.size());
    if (total < 4) {
      if (!exhausted) continue;
      throw InputError("run_generalizable_study: source yielded fewer than 4 results");
    }

    WorkflowIteration iteration;
    iteration.n_total = total;
    try {
      const EmpiricalSample sample(results, alternatives);
      const std::vector<int> grid = workflow_n_grid(total);
      const auto samples = mmd_samples_for_grid(
          sample, spec, grid, n_rep, mode, Rng::derive(seed, kWorkflowTag, iter));
      iteration.curve = curve_from_samples(samples, req.alpha_star);
    } catch (const InputError& e) {
      throw InputError("run_generalizable_study: iteration " +
                       std::to_string(iter) + ": " + e.what());
    }
    const NStarEstimate est = estimate_n_star(iteration.curve, req.eps_star, fit_mode);
    iteration.fit = est.fit;
    iteration.n_hat = est.n_hat;
    report.iterations.push_back(std::move(iteration));
    report.final_n_hat = est.n_hat;

    if (total >= est.n_hat) {
      report.stopped_reason = StopReason::Converged;
      report.generalizable = true;
      return report;
    }
    if (exhausted) {
      report.stopped_reason = StopReason::SourceExhausted;
      return report;
    }
    if (total >= caps.max_total) {
      report.stopped_reason = StopReason::CapReached;
      return report;
    }
  }
  report.stopped_reason = StopReason::CapReached;
  return report;
}

StudyAssessment assess_study(const EmpiricalSample& sample,
                             const KernelSpec& spec, const GenRequirement& req,
                             int n_rep, std::uint64_t seed, SubsampleMode mode,
                             FitMode fit_mode) {
  if (sample.size() < 4)
    throw InputError("assess_study: need at least 4 results");
  const std::vector<int> grid = workflow_n_grid(sample.size());
  const MmdQuantileCurve curve = quantile_curve_from_sample(
      sample, spec, grid, req.alpha_star, n_rep, mode, seed);
  const NStarEstimate est = estimate_n_star(curve, req.eps_star, fit_mode);

  StudyAssessment out;
  out.n_hat = est.n_hat;
  out.generalizable = sample.size() >= est.n_hat;
  out.curve = curve;
  out.fit = est.fit.value_or(degenerate_fit());
  return out;
}

std::vector<SweepEntry> assess_study_sweep(
    const EmpiricalSample& sample, const KernelSpec& spec,
    std::span<const double> alpha_values, std::span<const double> delta_values,
    int n_rep, std::uint64_t seed, SubsampleMode mode, FitMode fit_mode) {
  if (sample.size() < 4)
    throw InputError("assess_study_sweep: need at least 4 results");
  if (alpha_values.empty() || delta_values.empty())
    throw InputError("assess_study_sweep: need at least one alpha and one delta");

  const std::vector<int> grid = workflow_n_grid(sample.size());
  const auto samples = mmd_samples_for_grid(sample, spec, grid, n_rep, mode, seed);

  std::vector<SweepEntry> out;
  out.reserve(alpha_values.size() * delta_values.size());
  for (double alpha : alpha_values) {
    const MmdQuantileCurve curve = curve_from_samples(samples, alpha);
    for (double delta : delta_values) {
      const GenRequirement req = GenRequirement::from_delta(spec, alpha, delta);
      const NStarEstimate est = estimate_n_star(curve, req.eps_star, fit_mode);
      SweepEntry entry;
      entry.alpha_star = alpha;
      entry.delta_star = delta;
      entry.eps_star = req.eps_star;
      entry.n_hat = est.n_hat;
      entry.generalizable = sample.size() >= est.n_hat;
      entry.curve = curve;
      entry.fit = est.fit.value_or(degenerate_fit());
      out.push_back(std::move(entry));
    }
  }
  return out;
}

}  // namespace genrank
