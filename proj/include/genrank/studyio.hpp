#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genrank/kernel.hpp"
#include "genrank/workflow.hpp"

namespace genrank {

enum class FactorRole { Design, Generalizability, Stochasticity, HeldConstant };
enum class MissingPolicy { ImputeWorstRank, DropCondition };
enum class ScoreAggregation { Mean, Median };

FactorRole factor_role_from_string(const std::string& name);
std::string to_string(FactorRole role);

/// Declares how a long-format result table maps onto a study: which column
/// names the alternative, which carries the score, and the role of every
/// factor column.
struct StudySchema {
  std::string alternative_column;
  std::string score_column;
  std::vector<std::pair<std::string, FactorRole>> factor_roles;
  bool higher_is_better = true;
  double tie_tol = 0.0;
  MissingPolicy missing_policy = MissingPolicy::ImputeWorstRank;
  double coverage_row = 0.8;  // min fraction of alternatives per condition
  double coverage_col = 0.8;  // min fraction of conditions per alternative
  ScoreAggregation aggregation = ScoreAggregation::Mean;

  /// Checks the invariants (one alternative and one score column, at least
  /// one generalizability factor, coverages in [0, 1]).
  void validate() const;

  static StudySchema from_json_file(const std::filesystem::path& path);
  static StudySchema from_json_text(const std::string& text);
};

/// One parsed row: an (alternative, condition, score) observation. An
/// empty score cell is kept as a missing marker.
struct TableRow {
  std::string alternative;
  std::optional<double> score;
  std::vector<std::string> design_levels;
  std::vector<std::string> generalizability_levels;
  std::vector<std::string> stochasticity_levels;
  std::size_t line = 0;
};

struct RawTable {
  std::vector<std::string> design_columns;
  std::vector<std::string> generalizability_columns;
  std::vector<std::string> stochasticity_columns;
  std::vector<TableRow> rows;
  std::vector<std::string> warnings;
};

/// Parses the CSV at `path` against the schema. Held-constant columns are
/// verified single-valued and dropped. Unparseable scores and missing
/// declared columns raise errors naming the row or column.
RawTable load_long_table(const std::filesystem::path& path,
                         const StudySchema& schema);

/// Where every input row ended up; the counts partition the input exactly.
struct RowAccounting {
  std::size_t total = 0;
  std::size_t used = 0;
  std::size_t missing_score = 0;
  std::size_t dropped_condition_coverage = 0;
  std::size_t dropped_alternative_coverage = 0;
  std::size_t dropped_condition_missing = 0;
  std::size_t dropped_config_too_small = 0;

  bool reconciled() const {
    return total == used + missing_score + dropped_condition_coverage +
                        dropped_alternative_coverage + dropped_condition_missing +
                        dropped_config_too_small;
  }
};

/// Results of one configuration: one result per surviving generalizability
/// condition, over the configuration's surviving alternatives.
struct ConfigurationResults {
  std::vector<std::pair<std::string, std::string>> key;  // design factor -> level
  EmpiricalSample sample;
  std::vector<std::string> condition_labels;

  std::string key_label() const;
};

enum class ResultKind { Rankings, ScoreVectors };

struct StudyConfigurations {
  std::vector<ConfigurationResults> configurations;
  RowAccounting accounting;
  std::vector<std::string> warnings;
};

/// Groups rows into configurations: aggregate over stochasticity factors,
/// apply the coverage filters (conditions first, then alternatives),
/// convert to rankings (or keep score vectors) and apply the missing-value
/// policy. Deterministic and independent of the input row order.
StudyConfigurations build_configurations(const RawTable& table,
                                         const StudySchema& schema,
                                         ResultKind kind = ResultKind::Rankings);

/// Per-configuration generalizability result for one (alpha*, delta*).
struct GeneralizabilityReport {
  std::vector<std::pair<std::string, std::string>> config_key;
  int available = 0;  // N
  int n_hat = 0;
  double alpha_star = 0.0;
  double delta_star = 0.0;
  double eps_star = 0.0;
  std::string kernel;
  bool generalizable = false;
  MmdQuantileCurve curve;
  PowerLawFit fit;
  std::uint64_t seed = 0;
};

struct StudyAnalysis {
  std::vector<GeneralizabilityReport> reports;
  /// Configurations that could not be analyzed, with the reason; a failing
  /// configuration never aborts the others.
  std::vector<std::pair<std::string, std::string>> failures;
};

StudyAnalysis analyze_study(const StudyConfigurations& configs,
                            const KernelChoice& kernel,
                            std::span<const double> alpha_values,
                            std::span<const double> delta_values,
                            int n_rep = 100, std::uint64_t seed = 0,
                            SubsampleMode mode = SubsampleMode::WithoutReplacement,
                            FitMode fit_mode = FitMode::FreeSlope,
                            int threads = 0);

enum class ReportFormat { Json, Csv };

std::string render_reports(std::span<const GeneralizabilityReport> reports,
                           ReportFormat format);
void emit_report(std::span<const GeneralizabilityReport> reports,
                 ReportFormat format, const std::filesystem::path& path);
std::vector<GeneralizabilityReport> parse_reports(const std::string& text,
                                                  ReportFormat format);

}  // namespace genrank
