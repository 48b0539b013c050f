#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genrank/distribution.hpp"
#include "genrank/powerlaw.hpp"

namespace genrank {

/// Generalizability requirement: the target probability alpha* and the
/// interpretable similarity threshold delta*, with the derived MMD
/// threshold eps*.
struct GenRequirement {
  double alpha_star = 0.95;
  double delta_star = 0.05;
  double eps_star = 0.0;

  static GenRequirement from_delta(const KernelSpec& spec, double alpha_star,
                                   double delta_star);
};

/// Pull interface for experiments: a batch may come back smaller than
/// requested (possibly empty) once the source is exhausted. Single
/// consumer; implementations need not be thread-safe.
class ExperimentSource {
 public:
  virtual ~ExperimentSource() = default;
  virtual std::vector<Result> next_batch(int count) = 0;
  virtual AlternativeSet alternatives() const = 0;
};

/// Inexhaustible source drawing i.i.d. results from a distribution.
class DistributionSource final : public ExperimentSource {
 public:
  DistributionSource(DiscreteDistribution dist, std::uint64_t seed);
  std::vector<Result> next_batch(int count) override;
  AlternativeSet alternatives() const override;

 private:
  DiscreteDistribution dist_;
  std::vector<double> cumulative_;
  std::uint64_t seed_;
  std::uint64_t drawn_ = 0;
};

/// Fixed pool of pre-existing results, handed out in order.
class PoolSource final : public ExperimentSource {
 public:
  PoolSource(std::vector<Result> items, AlternativeSet alternatives);
  std::vector<Result> next_batch(int count) override;
  AlternativeSet alternatives() const override;

 private:
  std::vector<Result> items_;
  AlternativeSet alternatives_;
  std::size_t cursor_ = 0;
};

struct WorkflowCaps {
  int max_total = 10000;
  int max_iterations = 20;
};

struct WorkflowIteration {
  int n_total = 0;  // cumulative results used by this iteration
  MmdQuantileCurve curve;
  std::optional<PowerLawFit> fit;
  int n_hat = 0;
};

enum class StopReason { Converged, SourceExhausted, CapReached };

std::string to_string(StopReason reason);

struct WorkflowReport {
  std::vector<WorkflowIteration> iterations;
  int final_n_hat = 0;
  StopReason stopped_reason = StopReason::Converged;
  bool generalizable = false;
  std::uint64_t seed = 0;
};

/// The sequential study-planning loop: draw a batch, re-estimate n* from
/// the cumulative sample, stop once N >= n_hat (converged), the source
/// dries up, or a cap is hit.
WorkflowReport run_generalizable_study(ExperimentSource& source,
                                       const KernelSpec& spec,
                                       const GenRequirement& req,
                                       int batch_size,
                                       const WorkflowCaps& caps = {},
                                       int n_rep = 100, std::uint64_t seed = 0,
                                       SubsampleMode mode = SubsampleMode::WithoutReplacement,
                                       FitMode fit_mode = FitMode::FreeSlope);

/// One-shot assessment of an existing study sample.
struct StudyAssessment {
  int n_hat = 0;
  bool generalizable = false;
  MmdQuantileCurve curve;
  PowerLawFit fit;
};

StudyAssessment assess_study(const EmpiricalSample& sample,
                             const KernelSpec& spec, const GenRequirement& req,
                             int n_rep = 100, std::uint64_t seed = 0,
                             SubsampleMode mode = SubsampleMode::WithoutReplacement,
                             FitMode fit_mode = FitMode::FreeSlope);

/// Assessment across a grid of (alpha*, delta*) requirements, re-using the
/// per-n MMD draws: the curve is re-read at each alpha quantile and eps*
/// is re-derived per delta.
struct SweepEntry {
  double alpha_star = 0.0;
  double delta_star = 0.0;
  double eps_star = 0.0;
  int n_hat = 0;
  bool generalizable = false;
  MmdQuantileCurve curve;
  PowerLawFit fit;
};

std::vector<SweepEntry> assess_study_sweep(
    const EmpiricalSample& sample, const KernelSpec& spec,
    std::span<const double> alpha_values, std::span<const double> delta_values,
    int n_rep = 100, std::uint64_t seed = 0,
    SubsampleMode mode = SubsampleMode::WithoutReplacement,
    FitMode fit_mode = FitMode::FreeSlope);

}  // namespace genrank
