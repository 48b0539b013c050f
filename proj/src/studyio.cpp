#include "genrank/studyio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "genrank/errors.hpp"
#include "genrank/parallel.hpp"
#include "genrank/rng.hpp"

#include "json.hpp"

namespace genrank {

namespace {

constexpr std::uint64_t kAnalyzeTag = 0xA7A1ULL;

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// CSV plumbing. Quoted fields may contain commas and doubled quotes;
// records are single-line.

std::vector<std::string> split_csv_record(const std::string& line,
                                          std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted)
    throw IoError("csv: unterminated quote on line " + std::to_string(line_no));
  fields.push_back(std::move(field));
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::optional<double> parse_score(const std::string& raw, std::size_t line_no,
                                  const std::string& column) {
  const std::string text = trim(raw);
  if (text.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(v))
    throw InputError("csv: line " + std::to_string(line_no) + ": column '" +
                     column + "' does not parse as a finite score: '" + text + "'");
  return v;
}

}  // namespace

FactorRole factor_role_from_string(const std::string& name) {
  if (name == "design") return FactorRole::Design;
  if (name == "generalizability") return FactorRole::Generalizability;
  if (name == "stochasticity") return FactorRole::Stochasticity;
  if (name == "held-constant" || name == "held_constant")
    return FactorRole::HeldConstant;
  throw InputError("schema: unknown factor role '" + name + "'");
}

std::string to_string(FactorRole role) {
  switch (role) {
    case FactorRole::Design: return "design";
    case FactorRole::Generalizability: return "generalizability";
    case FactorRole::Stochasticity: return "stochasticity";
    case FactorRole::HeldConstant: return "held-constant";
  }
  return "?";
}

void StudySchema::validate() const {
  if (alternative_column.empty())
    throw InputError("schema: alternative_column is required");
  if (score_column.empty()) throw InputError("schema: score_column is required");
  if (alternative_column == score_column)
    throw InputError("schema: alternative and score columns must differ");
  std::set<std::string> seen;
  int generalizability = 0;
  for (const auto& [column, role] : factor_roles) {
    if (column == alternative_column || column == score_column)
      throw InputError("schema: column '" + column +
                       "' cannot be both a factor and the alternative/score column");
    if (!seen.insert(column).second)
      throw InputError("schema: duplicate factor column '" + column + "'");
    if (role == FactorRole::Generalizability) ++generalizability;
  }
  if (generalizability == 0)
    throw InputError("schema: need at least one generalizability factor");
  if (!(coverage_row >= 0.0 && coverage_row <= 1.0) ||
      !(coverage_col >= 0.0 && coverage_col <= 1.0))
    throw InputError("schema: coverage fractions must lie in [0, 1]");
  if (!(tie_tol >= 0.0) || !std::isfinite(tie_tol))
    throw InputError("schema: tie_tol must be finite and non-negative");
}

StudySchema StudySchema::from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("schema: invalid JSON: ") + e.what());
  }
  StudySchema schema;
  try {
    schema.alternative_column = doc.at("alternative_column").get<std::string>();
    schema.score_column = doc.at("score_column").get<std::string>();
    for (const auto& [column, role] : doc.at("factor_roles").items())
      schema.factor_roles.emplace_back(column,
                                       factor_role_from_string(role.get<std::string>()));
    if (doc.contains("higher_is_better"))
      schema.higher_is_better = doc["higher_is_better"].get<bool>();
    if (doc.contains("tie_tol")) schema.tie_tol = doc["tie_tol"].get<double>();
    if (doc.contains("missing_policy")) {
      const auto policy = doc["missing_policy"].get<std::string>();
      if (policy == "impute-worst-rank")
        schema.missing_policy = MissingPolicy::ImputeWorstRank;
      else if (policy == "drop-condition")
        schema.missing_policy = MissingPolicy::DropCondition;
      else
        throw InputError("schema: unknown missing_policy '" + policy + "'");
    }
    if (doc.contains("coverage_row"))
      schema.coverage_row = doc["coverage_row"].get<double>();
    if (doc.contains("coverage_col"))
      schema.coverage_col = doc["coverage_col"].get<double>();
    if (doc.contains("aggregation")) {
      const auto agg = doc["aggregation"].get<std::string>();
      if (agg == "mean") schema.aggregation = ScoreAggregation::Mean;
      else if (agg == "median") schema.aggregation = ScoreAggregation::Median;
      else throw InputError("schema: unknown aggregation '" + agg + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("schema: ") + e.what());
  }
  schema.validate();
  return schema;
}

StudySchema StudySchema::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("schema: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

RawTable load_long_table(const std::filesystem::path& path,
                         const StudySchema& schema) {
  schema.validate();
  std::ifstream in(path);
  if (!in) throw IoError("csv: cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line))
    throw IoError("csv: " + path.string() + " is empty");
  const std::vector<std::string> header = split_csv_record(line, 1);

  const auto column_index = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw InputError("csv: required column '" + name + "' not found in " +
                       path.string());
    return static_cast<std::size_t>(it - header.begin());
  };

  const std::size_t alt_col = column_index(schema.alternative_column);
  const std::size_t score_col = column_index(schema.score_column);

  RawTable table;
  struct FactorColumn {
    std::string name;
    FactorRole role;
    std::size_t index;
  };
  std::vector<FactorColumn> factors;
  for (const auto& [column, role] : schema.factor_roles) {
    factors.push_back({column, role, column_index(column)});
    switch (role) {
      case FactorRole::Design: table.design_columns.push_back(column); break;
      case FactorRole::Generalizability:
        table.generalizability_columns.push_back(column);
        break;
      case FactorRole::Stochasticity:
        table.stochasticity_columns.push_back(column);
        break;
      case FactorRole::HeldConstant: break;
    }
  }

  std::set<std::string> declared{schema.alternative_column, schema.score_column};
  for (const auto& [column, role] : schema.factor_roles) declared.insert(column);
  for (const std::string& column : header)
    if (!declared.count(column))
      table.warnings.push_back("ignoring undeclared column '" + column + "'");

  // Held-constant columns must be single-valued; remember where they vary.
  std::map<std::string, std::pair<std::string, std::size_t>> held_seen;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_record(line, line_no);
    if (fields.size() != header.size())
      throw InputError("csv: line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(header.size()));

    TableRow row;
    row.line = line_no;
    row.alternative = trim(fields[alt_col]);
    row.score = parse_score(fields[score_col], line_no, schema.score_column);
    for (const FactorColumn& f : factors) {
      const std::string value = trim(fields[f.index]);
      switch (f.role) {
        case FactorRole::Design: row.design_levels.push_back(value); break;
        case FactorRole::Generalizability:
          row.generalizability_levels.push_back(value);
          break;
        case FactorRole::Stochasticity:
          row.stochasticity_levels.push_back(value);
          break;
        case FactorRole::HeldConstant: {
          auto [it, fresh] = held_seen.try_emplace(f.name, value, line_no);
          if (!fresh && it->second.first != value)
            throw InputError("csv: held-constant column '" + f.name +
                             "' takes both '" + it->second.first + "' (line " +
                             std::to_string(it->second.second) + ") and '" + value +
                             "' (line " + std::to_string(line_no) + ")");
          break;
        }
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

enum class RowStatus {
  Unassigned,
  Used,
  MissingScore,
  DroppedConditionCoverage,
  DroppedAlternativeCoverage,
  DroppedConditionMissing,
  DroppedConfigTooSmall,
};

struct Cell {
  std::vector<double> scores;
  std::vector<std::size_t> rows;  // indices into table.rows
};

double aggregate(const std::vector<double>& scores, ScoreAggregation mode) {
  if (mode == ScoreAggregation::Mean) {
    double s = 0.0;
    for (double v : scores) s += v;
    return s / static_cast<double>(scores.size());
  }
  std::vector<double> copy = scores;
  std::sort(copy.begin(), copy.end());
  const std::size_t m = copy.size();
  return m % 2 == 1 ? copy[m / 2] : 0.5 * (copy[m / 2 - 1] + copy[m / 2]);
}

std::string join_levels(const std::vector<std::string>& levels) {
  std::string out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i) out.push_back('|');
    out += levels[i];
  }
  return out;
}

std::string label_for_key(const std::vector<std::pair<std::string, std::string>>& key) {
  std::string out;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) out.push_back(',');
    out += key[i].first + "=" + key[i].second;
  }
  return out.empty() ? "(single configuration)" : out;
}

}  // namespace

std::string ConfigurationResults::key_label() const { return label_for_key(key); }

StudyConfigurations build_configurations(const RawTable& table,
                                         const StudySchema& schema,
                                         ResultKind kind) {
  schema.validate();
  StudyConfigurations out;
  out.warnings = table.warnings;
  out.accounting.total = table.rows.size();
  std::vector<RowStatus> status(table.rows.size(), RowStatus::Unassigned);

  using ConditionKey = std::vector<std::string>;
  struct ConfigDraft {
    std::set<std::string> alternatives;
    std::map<ConditionKey, std::map<std::string, Cell>> cells;
  };
  std::map<ConditionKey, ConfigDraft> drafts;  // keyed by design levels

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const TableRow& row = table.rows[i];
    ConfigDraft& draft = drafts[row.design_levels];
    draft.alternatives.insert(row.alternative);
    Cell& cell = draft.cells[row.generalizability_levels][row.alternative];
    if (row.score) cell.scores.push_back(*row.score);
    cell.rows.push_back(i);
  }

  for (auto& [design_levels, draft] : drafts) {
    const std::vector<std::string> all_alternatives(draft.alternatives.begin(),
                                                    draft.alternatives.end());
    const double n_alt = static_cast<double>(all_alternatives.size());

    // Aggregate over stochasticity factors, then filter conditions by the
    // fraction of alternatives they cover.
    std::map<ConditionKey, std::map<std::string, double>> values;
    std::vector<ConditionKey> kept_conditions;
    for (auto& [condition, cells] : draft.cells) {
      std::size_t observed = 0;
      for (auto& [alt, cell] : cells)
        if (!cell.scores.empty()) ++observed;
      const double fraction = static_cast<double>(observed) / n_alt;
      if (fraction + 1e-12 < schema.coverage_row) {
        for (auto& [alt, cell] : cells)
          for (std::size_t r : cell.rows)
            status[r] = RowStatus::DroppedConditionCoverage;
        continue;
      }
      kept_conditions.push_back(condition);
      for (auto& [alt, cell] : cells)
        if (!cell.scores.empty())
          values[condition][alt] = aggregate(cell.scores, schema.aggregation);
    }

    // Filter alternatives by the fraction of kept conditions they cover.
    std::vector<std::string> kept_alternatives;
    for (const std::string& alt : all_alternatives) {
      std::size_t covered = 0;
      for (const ConditionKey& condition : kept_conditions)
        if (values.count(condition) && values.at(condition).count(alt)) ++covered;
      const double fraction =
          kept_conditions.empty()
              ? 0.0
              : static_cast<double>(covered) / kept_conditions.size();
      if (fraction + 1e-12 < schema.coverage_col) {
        for (const ConditionKey& condition : kept_conditions) {
          const auto cond_it = draft.cells.find(condition);
          const auto cell_it = cond_it->second.find(alt);
          if (cell_it != cond_it->second.end())
            for (std::size_t r : cell_it->second.rows)
              status[r] = RowStatus::DroppedAlternativeCoverage;
        }
      } else {
        kept_alternatives.push_back(alt);
      }
    }

    std::vector<std::pair<std::string, std::string>> key;
    for (std::size_t i = 0; i < table.design_columns.size(); ++i)
      key.emplace_back(table.design_columns[i], design_levels[i]);
    const std::string label = label_for_key(key);

    if (kept_alternatives.empty()) {
      for (const ConditionKey& condition : kept_conditions)
        for (auto& [alt, cell] : draft.cells.at(condition))
          for (std::size_t r : cell.rows)
            if (status[r] == RowStatus::Unassigned)
              status[r] = RowStatus::DroppedConfigTooSmall;
      out.warnings.push_back("configuration " + label +
                             ": no alternative meets the coverage threshold; excluded");
      continue;
    }

    // Build one result per condition; track which rows each condition used
    // so that later drops reassign them in one place.
    std::vector<Result> results;
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> result_rows;
    for (const ConditionKey& condition : kept_conditions) {
      const auto& cells = draft.cells.at(condition);
      const auto& observed = values.count(condition)
                                 ? values.at(condition)
                                 : std::map<std::string, double>{};
      std::vector<int> present;
      std::vector<double> present_scores;
      for (std::size_t a = 0; a < kept_alternatives.size(); ++a) {
        const auto it = observed.find(kept_alternatives[a]);
        if (it != observed.end()) {
          present.push_back(static_cast<int>(a));
          present_scores.push_back(it->second);
        }
      }
      const bool complete = present.size() == kept_alternatives.size();
      const bool dropped =
          present.empty() ||
          (!complete && (kind == ResultKind::ScoreVectors ||
                         schema.missing_policy == MissingPolicy::DropCondition));
      std::vector<std::size_t> rows_here;
      for (const auto& [alt, cell] : cells)
        for (std::size_t r : cell.rows)
          if (status[r] == RowStatus::Unassigned) rows_here.push_back(r);
      if (dropped) {
        for (std::size_t r : rows_here) status[r] = RowStatus::DroppedConditionMissing;
        continue;
      }

      if (kind == ResultKind::ScoreVectors) {
        results.emplace_back(present_scores);
      } else {
        // Rank the observed scores, then put every unobserved alternative
        // together into one fresh worst tier.
        const Ranking observed_ranking = Ranking::from_scores(
            present_scores, schema.higher_is_better, schema.tie_tol);
        std::vector<int> tiers(kept_alternatives.size(),
                               observed_ranking.tier_count());
        for (std::size_t p = 0; p < present.size(); ++p)
          tiers[present[p]] = observed_ranking.tiers()[p];
        results.emplace_back(Ranking(std::move(tiers)));
      }
      labels.push_back(join_levels(condition));
      result_rows.push_back(std::move(rows_here));
    }

    if (results.size() < 2) {
      for (const auto& rows_here : result_rows)
        for (std::size_t r : rows_here) status[r] = RowStatus::DroppedConfigTooSmall;
      for (const ConditionKey& condition : kept_conditions)
        for (auto& [alt, cell] : draft.cells.at(condition))
          for (std::size_t r : cell.rows)
            if (status[r] == RowStatus::Unassigned)
              status[r] = RowStatus::DroppedConfigTooSmall;
      out.warnings.push_back("configuration " + label + ": fewer than 2 usable conditions; excluded");
      continue;
    }

    for (std::size_t c = 0; c < result_rows.size(); ++c)
      for (std::size_t r : result_rows[c])
        status[r] = table.rows[r].score ? RowStatus::Used : RowStatus::MissingScore;

    ConfigurationResults config{
        key,
        EmpiricalSample(std::move(results),
                        AlternativeSet(std::vector<std::string>(kept_alternatives)),
                        label),
        std::move(labels)};
    out.configurations.push_back(std::move(config));
  }

  for (RowStatus s : status) {
    switch (s) {
      case RowStatus::Used: ++out.accounting.used; break;
      case RowStatus::MissingScore: ++out.accounting.missing_score; break;
      case RowStatus::DroppedConditionCoverage:
        ++out.accounting.dropped_condition_coverage;
        break;
      case RowStatus::DroppedAlternativeCoverage:
        ++out.accounting.dropped_alternative_coverage;
        break;
      case RowStatus::DroppedConditionMissing:
        ++out.accounting.dropped_condition_missing;
        break;
      case RowStatus::DroppedConfigTooSmall:
      case RowStatus::Unassigned:  // whole configuration vanished
        ++out.accounting.dropped_config_too_small;
        break;
    }
  }
  return out;
}

StudyAnalysis analyze_study(const StudyConfigurations& configs,
                            const KernelChoice& kernel,
                            std::span<const double> alpha_values,
                            std::span<const double> delta_values,
                            int n_rep, std::uint64_t seed, SubsampleMode mode,
                            FitMode fit_mode, int threads) {
  if (configs.configurations.empty())
    throw InputError("analyze_study: no usable configurations");

  struct Slot {
    std::vector<GeneralizabilityReport> reports;
    std::optional<std::pair<std::string, std::string>> failure;
  };
  std::vector<Slot> slots(configs.configurations.size());

  parallel_for(slots.size(), threads, [&](std::size_t i) {
    const ConfigurationResults& config = configs.configurations[i];
    Slot& slot = slots[i];
    try {
      std::vector<ScoreVector> vectors;
      for (const Result& r : config.sample.results)
        if (std::holds_alternative<ScoreVector>(r))
          vectors.push_back(std::get<ScoreVector>(r));
      const KernelSpec spec = kernel.resolve(config.sample.alternatives, vectors);
      const std::uint64_t config_seed = Rng::derive(seed, kAnalyzeTag, i);
      const auto sweep =
          assess_study_sweep(config.sample, spec, alpha_values, delta_values,
                             n_rep, config_seed, mode, fit_mode);
      for (const SweepEntry& entry : sweep) {
        GeneralizabilityReport report;
        report.config_key = config.key;
        report.available = config.sample.size();
        report.n_hat = entry.n_hat;
        report.alpha_star = entry.alpha_star;
        report.delta_star = entry.delta_star;
        report.eps_star = entry.eps_star;
        report.kernel = spec.describe();
        report.generalizable = entry.generalizable;
        report.curve = entry.curve;
        report.fit = entry.fit;
        report.seed = config_seed;
        slot.reports.push_back(std::move(report));
      }
    } catch (const Error& e) {
      slot.failure = {config.key_label(), e.what()};
    }
  });

  StudyAnalysis analysis;
  for (Slot& slot : slots) {
    if (slot.failure) analysis.failures.push_back(std::move(*slot.failure));
    for (auto& report : slot.reports)
      analysis.reports.push_back(std::move(report));
  }
  return analysis;
}

namespace {

nlohmann::ordered_json report_to_json(const GeneralizabilityReport& r) {
  nlohmann::ordered_json doc;
  doc["config_key"] = nlohmann::ordered_json::object();
  for (const auto& [factor, level] : r.config_key) doc["config_key"][factor] = level;
  doc["N"] = r.available;
  doc["n_hat"] = r.n_hat;
  doc["alpha_star"] = r.alpha_star;
  doc["delta_star"] = r.delta_star;
  doc["eps_star"] = r.eps_star;
  doc["kernel"] = r.kernel;
  doc["generalizable"] = r.generalizable;
  doc["curve"] = nlohmann::ordered_json::array();
  for (const auto& [n, q] : r.curve.points)
    doc["curve"].push_back(nlohmann::ordered_json::array({n, q}));
  doc["fit"] = {{"beta0", r.fit.beta0},
                {"beta1", r.fit.beta1},
                {"residual", r.fit.residual}};
  doc["seed"] = r.seed;
  return doc;
}

GeneralizabilityReport report_from_json(const nlohmann::json& doc) {
  GeneralizabilityReport r;
  for (const auto& [factor, level] : doc.at("config_key").items())
    r.config_key.emplace_back(factor, level.get<std::string>());
  r.available = doc.at("N").get<int>();
  r.n_hat = doc.at("n_hat").get<int>();
  r.alpha_star = doc.at("alpha_star").get<double>();
  r.delta_star = doc.at("delta_star").get<double>();
  r.eps_star = doc.at("eps_star").get<double>();
  r.kernel = doc.at("kernel").get<std::string>();
  r.generalizable = doc.at("generalizable").get<bool>();
  for (const auto& point : doc.at("curve"))
    r.curve.points.emplace_back(point.at(0).get<int>(), point.at(1).get<double>());
  r.curve.alpha = r.alpha_star;
  r.fit.beta0 = doc.at("fit").at("beta0").get<double>();
  r.fit.beta1 = doc.at("fit").at("beta1").get<double>();
  r.fit.residual = doc.at("fit").at("residual").get<double>();
  r.seed = doc.at("seed").get<std::uint64_t>();
  return r;
}

std::string curve_to_cell(const MmdQuantileCurve& curve) {
  std::string out;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    if (i) out.push_back('|');
    out += std::to_string(curve.points[i].first) + ":" +
           format17(curve.points[i].second);
  }
  return out;
}

MmdQuantileCurve curve_from_cell(const std::string& cell, double alpha) {
  MmdQuantileCurve curve;
  curve.alpha = alpha;
  std::istringstream is(cell);
  std::string token;
  while (std::getline(is, token, '|')) {
    const auto colon = token.find(':');
    if (colon == std::string::npos)
      throw InputError("report csv: malformed curve cell '" + cell + "'");
    curve.points.emplace_back(std::stoi(token.substr(0, colon)),
                              std::stod(token.substr(colon + 1)));
  }
  return curve;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string render_reports(std::span<const GeneralizabilityReport> reports,
                           ReportFormat format) {
  if (format == ReportFormat::Json) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const GeneralizabilityReport& r : reports) doc.push_back(report_to_json(r));
    return doc.dump(2);
  }

  std::ostringstream os;
  std::vector<std::string> factors;
  if (!reports.empty())
    for (const auto& [factor, level] : reports.front().config_key)
      factors.push_back(factor);
  for (const GeneralizabilityReport& r : reports) {
    if (r.config_key.size() != factors.size())
      throw InputError("render_reports: reports disagree on the config key factors");
    for (std::size_t i = 0; i < factors.size(); ++i)
      if (r.config_key[i].first != factors[i])
        throw InputError("render_reports: reports disagree on the config key factors");
  }

  for (const std::string& factor : factors) os << "key:" << csv_escape(factor) << ',';
  os << "N,n_hat,alpha_star,delta_star,eps_star,kernel,generalizable,"
        "beta0,beta1,residual,seed,curve\n";
  for (const GeneralizabilityReport& r : reports) {
    for (const auto& [factor, level] : r.config_key) os << csv_escape(level) << ',';
    os << r.available << ',' << r.n_hat << ',' << format17(r.alpha_star) << ','
       << format17(r.delta_star) << ',' << format17(r.eps_star) << ','
       << csv_escape(r.kernel) << ',' << (r.generalizable ? "true" : "false") << ','
       << format17(r.fit.beta0) << ',' << format17(r.fit.beta1) << ','
       << format17(r.fit.residual) << ',' << r.seed << ','
       << csv_escape(curve_to_cell(r.curve)) << '\n';
  }
  return os.str();
}

void emit_report(std::span<const GeneralizabilityReport> reports,
                 ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("emit_report: cannot open " + path.string() + " for writing");
  out << render_reports(reports, format);
  if (!out) throw IoError("emit_report: failed writing " + path.string());
}

std::vector<GeneralizabilityReport> parse_reports(const std::string& text,
                                                  ReportFormat format) {
  std::vector<GeneralizabilityReport> reports;
  if (format == ReportFormat::Json) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("report json: ") + e.what());
    }
    for (const auto& entry : doc) reports.push_back(report_from_json(entry));
    return reports;
  }

  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) return reports;
  const std::vector<std::string> header = split_csv_record(line, 1);
  std::vector<std::string> factors;
  std::size_t fixed_start = 0;
  for (; fixed_start < header.size(); ++fixed_start) {
    if (header[fixed_start].rfind("key:", 0) != 0) break;
    factors.push_back(header[fixed_start].substr(4));
  }
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_record(line, line_no);
    if (fields.size() != header.size())
      throw InputError("report csv: line " + std::to_string(line_no) +
                       " has the wrong number of fields");
    GeneralizabilityReport r;
    for (std::size_t i = 0; i < factors.size(); ++i)
      r.config_key.emplace_back(factors[i], fields[i]);
    std::size_t c = fixed_start;
    r.available = std::stoi(fields[c++]);
    r.n_hat = std::stoi(fields[c++]);
    r.alpha_star = std::stod(fields[c++]);
    r.delta_star = std::stod(fields[c++]);
    r.eps_star = std::stod(fields[c++]);
    r.kernel = fields[c++];
    r.generalizable = fields[c++] == "true";
    r.fit.beta0 = std::stod(fields[c++]);
    r.fit.beta1 = std::stod(fields[c++]);
    r.fit.residual = std::stod(fields[c++]);
    r.seed = std::stoull(fields[c++]);
    r.curve = curve_from_cell(fields[c++], r.alpha_star);
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace genrank
