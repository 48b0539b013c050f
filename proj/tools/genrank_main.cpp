#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "genrank/errors.hpp"
#include "genrank/powerlaw.hpp"
#include "genrank/rng.hpp"
#include "genrank/sigtest.hpp"
#include "genrank/studyio.hpp"
#include "genrank/synthetic.hpp"
#include "genrank/workflow.hpp"

namespace {

using namespace genrank;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct CommonOpts {
  std::string kernel = "mallows";
  std::optional<double> nu;
  std::optional<double> gamma;
  std::optional<int> topk;
  std::optional<std::string> target;
  double alpha = 0.95;
  double delta = 0.05;
  std::vector<double> alpha_grid;
  std::vector<double> delta_grid;
  int nrep = 100;
  std::optional<std::uint64_t> seed;
  std::string mode = "subsample";
  std::string fit = "free";
  int threads = 0;
  std::string output;
  std::string format = "json";
};

void add_kernel_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--kernel", o.kernel, "Kernel family")
      ->check(CLI::IsMember({"borda", "jaccard", "mallows", "rbf"}))
      ->capture_default_str();
  cmd->add_option("--nu", o.nu,
                  "Borda/Mallows sensitivity (default: 1/n_a resp. 1/C(n_a,2))");
  cmd->add_option("--topk", o.topk, "Jaccard tier cutoff k (default 1)");
  cmd->add_option("--target-alternative", o.target,
                  "Borda target alternative, by index or by name (default: first)");
  cmd->add_option("--gamma", o.gamma,
                  "RBF bandwidth (default: median heuristic on the data)");
}

void add_common_options(CLI::App* cmd, CommonOpts& o, bool with_grids) {
  add_kernel_options(cmd, o);
  cmd->add_option("--alpha", o.alpha, "Target generalizability alpha*")
      ->capture_default_str();
  cmd->add_option("--delta", o.delta, "Similarity threshold delta*")
      ->capture_default_str();
  if (with_grids) {
    cmd->add_option("--alpha-grid", o.alpha_grid,
                    "Sweep of alpha* values (overrides --alpha)")
        ->delimiter(',');
    cmd->add_option("--delta-grid", o.delta_grid,
                    "Sweep of delta* values (overrides --delta)")
        ->delimiter(',');
  }
  cmd->add_option("--nrep", o.nrep, "Monte Carlo repetitions per quantile")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed,
                  "Master seed (falls back to the GENRANK_SEED env var, then 0)");
  cmd->add_option("--mode", o.mode,
                  "Subsampling: disjoint halves (subsample) or resampling (bootstrap)")
      ->check(CLI::IsMember({"subsample", "bootstrap"}))
      ->capture_default_str();
  cmd->add_option("--fit", o.fit, "Power-law fit: free or fixed slope")
      ->check(CLI::IsMember({"free", "fixed"}))
      ->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  cmd->add_option("--output", o.output, "Output file path");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

std::uint64_t resolve_seed(const CommonOpts& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("GENRANK_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 0;
}

KernelChoice make_kernel_choice(const CommonOpts& o) {
  KernelChoice choice;
  if (o.kernel == "borda") choice.family = KernelFamily::Borda;
  else if (o.kernel == "jaccard") choice.family = KernelFamily::Jaccard;
  else if (o.kernel == "mallows") choice.family = KernelFamily::Mallows;
  else choice.family = KernelFamily::Rbf;
  choice.nu = o.nu;
  choice.top_k = o.topk;
  choice.gamma = o.gamma;
  if (o.target) {
    const std::string& t = *o.target;
    const bool numeric = !t.empty() &&
        t.find_first_not_of("0123456789") == std::string::npos;
    if (numeric) choice.target = std::stoi(t);
    else choice.target_name = t;
  }
  return choice;
}

SubsampleMode make_mode(const CommonOpts& o) {
  return o.mode == "bootstrap" ? SubsampleMode::WithReplacement
                               : SubsampleMode::WithoutReplacement;
}

FitMode make_fit(const CommonOpts& o) {
  return o.fit == "fixed" ? FitMode::FixedSlope : FitMode::FreeSlope;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

DiscreteDistribution load_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": invalid JSON: " + e.what());
  }
  const std::string kind = doc.value("kind", "rankings");
  std::vector<Result> support;
  for (const auto& entry : doc.at("support")) {
    if (kind == "rankings") {
      support.emplace_back(Ranking(entry.get<std::vector<int>>()));
    } else if (kind == "vectors") {
      support.emplace_back(entry.get<std::vector<double>>());
    } else {
      throw InputError(path + ": kind must be 'rankings' or 'vectors'");
    }
  }
  return DiscreteDistribution(std::move(support),
                              doc.at("probs").get<std::vector<double>>());
}

/// Pool file: a CSV of tier vectors, one ranking per row, with an optional
/// header naming the alternatives.
std::pair<std::vector<Result>, AlternativeSet> load_pool_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<Result> items;
  std::optional<AlternativeSet> alts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    const bool all_numeric = std::all_of(cells.begin(), cells.end(), [](const std::string& c) {
      return !c.empty() &&
             c.find_first_not_of("0123456789 \t\r") == std::string::npos;
    });
    if (!all_numeric) {
      if (line_no != 1 || alts)
        throw InputError(path + ": line " + std::to_string(line_no) +
                         ": expected tier indices");
      alts = AlternativeSet(std::move(cells));
      continue;
    }
    std::vector<int> tiers;
    tiers.reserve(cells.size());
    for (const std::string& c : cells) tiers.push_back(std::stoi(c));
    items.emplace_back(Ranking(std::move(tiers)));
  }
  if (items.empty()) throw InputError(path + ": no rankings found");
  const int n_a = std::get<Ranking>(items.front()).n_alternatives();
  if (!alts) alts = AlternativeSet::indexed(n_a);
  if (alts->size() != n_a)
    throw InputError(path + ": header names " + std::to_string(alts->size()) +
                     " alternatives but rankings have " + std::to_string(n_a));
  return {std::move(items), std::move(*alts)};
}

// ---------------------------------------------------------------------------

int cmd_analyze(const CommonOpts& o, const std::string& input,
                const std::string& schema_path) {
  const StudySchema schema = StudySchema::from_json_file(schema_path);
  const RawTable table = load_long_table(input, schema);
  const KernelChoice choice = make_kernel_choice(o);
  const ResultKind kind = choice.family == KernelFamily::Rbf
                              ? ResultKind::ScoreVectors
                              : ResultKind::Rankings;
  const StudyConfigurations configs = build_configurations(table, schema, kind);
  for (const std::string& w : configs.warnings) std::cerr << "warning: " << w << '\n';

  const std::vector<double> alphas =
      o.alpha_grid.empty() ? std::vector<double>{o.alpha} : o.alpha_grid;
  const std::vector<double> deltas =
      o.delta_grid.empty() ? std::vector<double>{o.delta} : o.delta_grid;
  const std::uint64_t seed = resolve_seed(o);

  const StudyAnalysis analysis =
      analyze_study(configs, choice, alphas, deltas, o.nrep, seed, make_mode(o),
                    make_fit(o), o.threads);
  for (const auto& [config, why] : analysis.failures)
    std::cerr << "warning: configuration " << config << " failed: " << why << '\n';
  if (analysis.reports.empty())
    throw InputError("no configuration produced a report");

  const std::string output =
      o.output.empty() ? std::string("genrank_report.") + o.format : o.output;
  const ReportFormat fmt =
      o.format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
  emit_report(analysis.reports, fmt, output);

  std::cout << std::left << std::setw(40) << "configuration" << std::right
            << std::setw(8) << "alpha*" << std::setw(8) << "delta*"
            << std::setw(6) << "N" << std::setw(8) << "n*" << std::setw(16)
            << "generalizable" << '\n';
  for (const GeneralizabilityReport& r : analysis.reports) {
    std::string key;
    for (const auto& [factor, level] : r.config_key) {
      if (!key.empty()) key += ",";
      key += factor + "=" + level;
    }
    if (key.empty()) key = "(single configuration)";
    std::cout << std::left << std::setw(40) << key << std::right << std::setw(8)
              << r.alpha_star << std::setw(8) << r.delta_star << std::setw(6)
              << r.available << std::setw(8) << r.n_hat << std::setw(16)
              << (r.generalizable ? "yes" : "no") << '\n';
  }
  std::cout << "report written to " << output << '\n';
  return kExitOk;
}

int cmd_plan(const CommonOpts& o, const std::string& pool_file,
             const std::string& dist_file, int n_a, bool with_ties, int n0,
             int max_n, int max_iter) {
  const std::uint64_t seed = resolve_seed(o);
  std::unique_ptr<ExperimentSource> source;
  if (!pool_file.empty()) {
    auto [items, alts] = load_pool_file(pool_file);
    source = std::make_unique<PoolSource>(std::move(items), std::move(alts));
  } else {
    DiscreteDistribution dist =
        dist_file.empty() ? uniform_distribution(n_a, with_ties)
                          : load_distribution_file(dist_file);
    source = std::make_unique<DistributionSource>(std::move(dist),
                                                  Rng::derive(seed, 0x9001, 0));
  }

  const KernelChoice choice = make_kernel_choice(o);
  const KernelSpec spec = choice.resolve(source->alternatives());
  const GenRequirement req = GenRequirement::from_delta(spec, o.alpha, o.delta);

  WorkflowCaps caps;
  caps.max_total = max_n;
  caps.max_iterations = max_iter;
  const WorkflowReport report = run_generalizable_study(
      *source, spec, req, n0, caps, o.nrep, seed, make_mode(o), make_fit(o));

  std::cout << "kernel " << spec.describe() << ", alpha*=" << req.alpha_star
            << ", delta*=" << req.delta_star << ", eps*=" << req.eps_star << '\n';
  std::cout << std::right << std::setw(10) << "iteration" << std::setw(8) << "N"
            << std::setw(10) << "n_hat" << '\n';
  for (std::size_t i = 0; i < report.iterations.size(); ++i)
    std::cout << std::setw(10) << i << std::setw(8) << report.iterations[i].n_total
              << std::setw(10) << report.iterations[i].n_hat << '\n';
  std::cout << "stopped: " << to_string(report.stopped_reason) << "; ";
  if (report.generalizable)
    std::cout << "generalizable with N=" << report.iterations.back().n_total
              << " >= n_hat=" << report.final_n_hat << '\n';
  else
    std::cout << "not generalizable with available pool (n_hat="
              << report.final_n_hat << ")\n";

  if (!o.output.empty()) {
    nlohmann::ordered_json doc;
    doc["stopped_reason"] = to_string(report.stopped_reason);
    doc["generalizable"] = report.generalizable;
    doc["final_n_hat"] = report.final_n_hat;
    doc["seed"] = report.seed;
    doc["iterations"] = nlohmann::ordered_json::array();
    for (const WorkflowIteration& it : report.iterations) {
      nlohmann::ordered_json entry;
      entry["N"] = it.n_total;
      entry["n_hat"] = it.n_hat;
      if (it.fit) {
        entry["fit"] = {{"beta0", it.fit->beta0},
                        {"beta1", it.fit->beta1},
                        {"residual", it.fit->residual}};
      } else {
        entry["fit"] = nullptr;
      }
      entry["curve"] = nlohmann::ordered_json::array();
      for (const auto& [n, q] : it.curve.points)
        entry["curve"].push_back(nlohmann::ordered_json::array({n, q}));
      doc["iterations"].push_back(std::move(entry));
    }
    write_text(o.output, doc.dump(2));
    std::cout << "trace written to " << o.output << '\n';
  }
  return kExitOk;
}

int cmd_simulate(const CommonOpts& o, const std::string& dist_file, int n_a,
                 bool with_ties, std::vector<int> sizes, int reps,
                 int n_star_cap, int n_star_rep) {
  const std::uint64_t seed = resolve_seed(o);
  const DiscreteDistribution dist =
      dist_file.empty() ? uniform_distribution(n_a, with_ties)
                        : load_distribution_file(dist_file);
  const KernelChoice choice = make_kernel_choice(o);
  std::vector<ScoreVector> vectors;
  if (!dist.holds_rankings())
    for (const Result& r : dist.support())
      vectors.push_back(std::get<ScoreVector>(r));
  const KernelSpec spec =
      choice.resolve(AlternativeSet::indexed(dist.n_alternatives()), vectors);

  const AccuracyTable table = estimator_accuracy_experiment(
      dist, spec, o.alpha, o.delta, sizes, reps, seed, o.nrep, make_mode(o),
      o.threads, n_star_cap, n_star_rep);

  std::cout << "kernel " << table.kernel << ", exact n* = " << table.n_star << '\n';
  for (int n : sizes) {
    int ok = 0, within = 0;
    double median = 0.0;
    std::vector<double> ratios;
    for (const AccuracyRow& row : table.rows)
      if (row.sample_size == n && row.ratio) {
        ++ok;
        ratios.push_back(*row.ratio);
        if (*row.ratio >= 0.5 && *row.ratio <= 2.0) ++within;
      }
    if (!ratios.empty()) {
      std::sort(ratios.begin(), ratios.end());
      median = ratios[ratios.size() / 2];
    }
    std::cout << "N=" << n << ": " << ok << "/" << reps
              << " fits, ratio in [0.5,2]: " << within << ", median ratio "
              << median << '\n';
  }
  if (!o.output.empty()) {
    write_text(o.output, o.format == "csv" ? accuracy_table_csv(table)
                                           : accuracy_table_json(table));
    std::cout << "table written to " << o.output << '\n';
  }
  return kExitOk;
}

int cmd_demo_significance(const CommonOpts& o, int reps, int n) {
  const std::uint64_t seed = resolve_seed(o);
  const DemoSummary summary =
      significance_vs_generalizability_demo(reps, n, seed, o.nrep, o.threads);
  std::cout << "friedman-significant fraction: "
            << summary.friedman_significant_fraction << '\n'
            << "conover-iman-significant fraction: "
            << summary.ci_significant_fraction << '\n'
            << "overall " << (n / 2) << "-generalizability: " << summary.overall_mean
            << " (" << summary.overall_std << ")\n";
  std::cout << std::left << std::setw(16) << "ci-significant" << std::setw(12)
            << "best" << std::right << std::setw(8) << "count" << std::setw(12)
            << "mean" << std::setw(12) << "std" << '\n';
  for (const DemoCell& cell : summary.cells) {
    std::string best;
    for (std::size_t i = 0; i < cell.best_alternatives.size(); ++i) {
      if (i) best += "+";
      best += std::to_string(cell.best_alternatives[i]);
    }
    std::cout << std::left << std::setw(16) << (cell.ci_significant ? "true" : "false")
              << std::setw(12) << best << std::right << std::setw(8) << cell.count
              << std::setw(12) << std::setprecision(4) << cell.mean_generalizability
              << std::setw(12) << cell.std_generalizability << '\n';
  }
  if (!o.output.empty()) {
    write_text(o.output, o.format == "csv" ? demo_summary_csv(summary)
                                           : demo_summary_json(summary));
    std::cout << "summary written to " << o.output << '\n';
  }
  return kExitOk;
}

int cmd_enumerate(const CommonOpts& o, int n_a, bool with_ties) {
  const std::vector<Ranking> rankings = enumerate_rankings(n_a, with_ties);
  std::cout << rankings.size() << " rankings of " << n_a << " alternatives"
            << (with_ties ? " (with ties)" : " (permutations)") << '\n';
  if (!o.output.empty()) {
    if (o.format == "csv") {
      std::ostringstream os;
      for (const Ranking& r : rankings) {
        for (int a = 0; a < r.n_alternatives(); ++a) {
          if (a) os << ',';
          os << r.tiers()[a];
        }
        os << '\n';
      }
      write_text(o.output, os.str());
    } else {
      nlohmann::json doc = nlohmann::json::array();
      for (const Ranking& r : rankings) doc.push_back(r.tiers());
      write_text(o.output, doc.dump());
    }
    std::cout << "rankings written to " << o.output << '\n';
  } else {
    for (const Ranking& r : rankings) std::cout << r.to_string() << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"genrank - generalizability analysis for experimental studies"};
  app.require_subcommand(1);

  CommonOpts analyze_opts;
  std::string analyze_input, analyze_schema;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Assess the generalizability of each configuration of a study "
                 "given as a long-format CSV");
  analyze->add_option("--input", analyze_input, "Long-format results CSV")->required();
  analyze
      ->add_option("--schema", analyze_schema,
                   "Study schema JSON (coverage thresholds default to 0.8)")
      ->required();
  add_common_options(analyze, analyze_opts, /*with_grids=*/true);

  CommonOpts plan_opts;
  std::string plan_pool, plan_dist;
  int plan_na = 4, plan_n0 = 20, plan_max_n = 10000, plan_max_iter = 20;
  bool plan_ties = false;
  CLI::App* plan = app.add_subcommand(
      "plan", "Run the sequential study-planning loop against a synthetic "
              "distribution or a pool of existing results");
  plan->add_option("--pool", plan_pool, "CSV pool of rankings (one tier vector per row)");
  plan->add_option("--dist-file", plan_dist, "Explicit distribution JSON");
  plan->add_option("--na", plan_na, "Alternatives for the uniform synthetic source")
      ->capture_default_str();
  plan->add_flag("--ties", plan_ties, "Uniform over rankings with ties instead of permutations");
  plan->add_option("--n0", plan_n0, "Batch size of preliminary experiments")
      ->capture_default_str();
  plan->add_option("--max-n", plan_max_n, "Cap on total experiments")->capture_default_str();
  plan->add_option("--max-iter", plan_max_iter, "Cap on iterations")->capture_default_str();
  add_common_options(plan, plan_opts, /*with_grids=*/false);

  CommonOpts sim_opts;
  sim_opts.mode = "bootstrap";
  std::string sim_dist;
  int sim_na = 4, sim_reps = 100, sim_cap = 512, sim_nstar_rep = 2000;
  bool sim_ties = false;
  std::vector<int> sim_sizes{10, 20, 40, 80};
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Estimator-accuracy experiment: ratio of estimated to exact n* "
                  "over repeated preliminary samples");
  simulate->add_option("--na", sim_na, "Alternatives of the uniform ranking distribution")
      ->capture_default_str();
  simulate->add_flag("--ties", sim_ties, "Uniform over rankings with ties instead of permutations");
  simulate->add_option("--dist-file", sim_dist, "Explicit distribution JSON");
  simulate->add_option("--sizes", sim_sizes, "Preliminary sample sizes N")
      ->delimiter(',')
      ->capture_default_str();
  simulate->add_option("--reps", sim_reps, "Repetitions per N")->capture_default_str();
  simulate->add_option("--nstar-max", sim_cap, "Scan cap for the exact n*")
      ->capture_default_str();
  simulate->add_option("--nstar-rep", sim_nstar_rep,
                       "Monte Carlo draws per candidate n for the exact n*")
      ->capture_default_str();
  add_common_options(simulate, sim_opts, /*with_grids=*/false);

  CommonOpts demo_opts;
  int demo_reps = 1000, demo_n = 20;
  CLI::App* demo = app.add_subcommand(
      "demo-significance",
      "Significance-vs-generalizability demonstration on a two-permutation distribution");
  demo->add_option("--reps", demo_reps, "Repetitions")->capture_default_str();
  demo->add_option("--n", demo_n, "Sample size per repetition")->capture_default_str();
  add_common_options(demo, demo_opts, /*with_grids=*/false);

  CommonOpts enum_opts;
  int enum_na = 3;
  bool enum_ties = false;
  CLI::App* enumerate = app.add_subcommand(
      "enumerate", "Enumerate all rankings of n alternatives");
  enumerate->add_option("--na", enum_na, "Alternatives")->capture_default_str();
  enumerate->add_flag("--ties", enum_ties, "Include rankings with ties");
  enumerate->add_option("--output", enum_opts.output, "Output file path");
  enumerate->add_option("--format", enum_opts.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (app.got_subcommand(analyze))
      return cmd_analyze(analyze_opts, analyze_input, analyze_schema);
    if (app.got_subcommand(plan))
      return cmd_plan(plan_opts, plan_pool, plan_dist, plan_na, plan_ties,
                      plan_n0, plan_max_n, plan_max_iter);
    if (app.got_subcommand(simulate))
      return cmd_simulate(sim_opts, sim_dist, sim_na, sim_ties, sim_sizes,
                          sim_reps, sim_cap, sim_nstar_rep);
    if (app.got_subcommand(demo))
      return cmd_demo_significance(demo_opts, demo_reps, demo_n);
    if (app.got_subcommand(enumerate))
      return cmd_enumerate(enum_opts, enum_na, enum_ties);
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitInput;
}
