#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "genrank/errors.hpp"
#include "genrank/powerlaw.hpp"
#include "genrank/sigtest.hpp"
#include "genrank/studyio.hpp"
#include "genrank/synthetic.hpp"
#include "genrank/workflow.hpp"

namespace py = pybind11;
using namespace genrank;

namespace {

std::vector<std::vector<double>> matrix_to_rows(const Matrix& m) {
  std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  return rows;
}

Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  const int cols = n == 0 ? 0 : static_cast<int>(rows.front().size());
  Matrix m(n, cols);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != cols)
      throw InputError("matrix rows must have equal length");
    for (int j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

class PyExperimentSource : public ExperimentSource {
 public:
  using ExperimentSource::ExperimentSource;
  std::vector<Result> next_batch(int count) override {
    PYBIND11_OVERRIDE_PURE(std::vector<Result>, ExperimentSource, next_batch, count);
  }
  AlternativeSet alternatives() const override {
    PYBIND11_OVERRIDE_PURE(AlternativeSet, ExperimentSource, alternatives);
  }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generalizability analysis for experimental studies: rankings, "
            "kernels, MMD, and sample-size planning";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<FitError>(m, "FitError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  // ---- rankings -----------------------------------------------------------
  py::class_<Ranking>(m, "Ranking")
      .def(py::init<std::vector<int>>(), py::arg("tiers"))
      .def_static(
          "from_scores",
          [](const std::vector<double>& scores, bool higher_is_better, double tie_tol) {
            return Ranking::from_scores(scores, higher_is_better, tie_tol);
          },
          py::arg("scores"), py::arg("higher_is_better") = true,
          py::arg("tie_tol") = 0.0)
      .def_property_readonly("tiers", &Ranking::tiers)
      .def_property_readonly("n_alternatives", &Ranking::n_alternatives)
      .def_property_readonly("tier_count", &Ranking::tier_count)
      .def("tier_of", &Ranking::tier_of, py::arg("alternative"))
      .def("__eq__", [](const Ranking& a, const Ranking& b) { return a == b; })
      .def("__hash__",
           [](const Ranking& r) {
             std::size_t h = 1469598103934665603ull;
             for (int t : r.tiers()) h = (h ^ static_cast<std::size_t>(t)) * 1099511628211ull;
             return h;
           })
      .def("__repr__", [](const Ranking& r) { return "Ranking" + r.to_string(); });

  m.def("borda_count", &borda_count, py::arg("ranking"), py::arg("target"));
  m.def("top_k_tiers", &top_k_tiers, py::arg("ranking"), py::arg("k"));
  m.def("discordant_pairs", &discordant_pairs, py::arg("r1"), py::arg("r2"));

  py::class_<AlternativeSet>(m, "AlternativeSet")
      .def(py::init<std::vector<std::string>>(), py::arg("names"))
      .def_static("indexed", &AlternativeSet::indexed, py::arg("n"))
      .def_readonly("names", &AlternativeSet::names)
      .def("index_of", &AlternativeSet::index_of)
      .def("__len__", &AlternativeSet::size);

  // ---- kernels ------------------------------------------------------------
  py::enum_<KernelFamily>(m, "KernelFamily")
      .value("Borda", KernelFamily::Borda)
      .value("Jaccard", KernelFamily::Jaccard)
      .value("Mallows", KernelFamily::Mallows)
      .value("Rbf", KernelFamily::Rbf);

  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static("borda", &KernelSpec::borda, py::arg("n_a"), py::arg("target"),
                  py::arg("nu"))
      .def_static("borda_recommended", &KernelSpec::borda_recommended,
                  py::arg("n_a"), py::arg("target"))
      .def_static("jaccard", &KernelSpec::jaccard, py::arg("n_a"), py::arg("top_k"))
      .def_static("mallows", &KernelSpec::mallows, py::arg("n_a"), py::arg("nu"))
      .def_static("mallows_recommended", &KernelSpec::mallows_recommended,
                  py::arg("n_a"))
      .def_static("rbf", &KernelSpec::rbf, py::arg("n_a"), py::arg("gamma"))
      .def_property_readonly("family", &KernelSpec::family)
      .def_property_readonly("n_alternatives", &KernelSpec::n_alternatives)
      .def("describe", &KernelSpec::describe)
      .def("__repr__", [](const KernelSpec& s) { return "KernelSpec " + s.describe(); });

  py::class_<KernelBounds>(m, "KernelBounds")
      .def_readonly("k_inf", &KernelBounds::k_inf)
      .def_readonly("k_sup", &KernelBounds::k_sup);

  m.def("kernel_eval",
        [](const KernelSpec& spec, const Result& a, const Result& b) {
          return kernel_eval(spec, a, b);
        },
        py::arg("spec"), py::arg("x1"), py::arg("x2"));
  m.def("gram_matrix",
        [](const KernelSpec& spec, const std::vector<Result>& sample) {
          return matrix_to_rows(gram_matrix(spec, sample));
        },
        py::arg("spec"), py::arg("sample"));
  m.def("recommended_param", &recommended_param, py::arg("family"), py::arg("n_a"));
  m.def("median_gamma",
        [](const std::vector<ScoreVector>& sample) { return median_gamma(sample); },
        py::arg("sample"));
  m.def("kernel_bounds", &kernel_bounds, py::arg("spec"));
  m.def("epsilon_star", &epsilon_star, py::arg("spec"), py::arg("delta_star"));

  // ---- samples and MMD ----------------------------------------------------
  py::class_<EmpiricalSample>(m, "EmpiricalSample")
      .def(py::init<std::vector<Result>, AlternativeSet, std::string>(),
           py::arg("results"), py::arg("alternatives"), py::arg("label") = "")
      .def_static("from_rankings", &EmpiricalSample::from_rankings,
                  py::arg("rankings"), py::arg("label") = "")
      .def_static("from_vectors", &EmpiricalSample::from_vectors,
                  py::arg("vectors"), py::arg("label") = "")
      .def_readonly("results", &EmpiricalSample::results)
      .def_readonly("alternatives", &EmpiricalSample::alternatives)
      .def_readonly("label", &EmpiricalSample::label)
      .def("__len__", &EmpiricalSample::size);

  py::enum_<SubsampleMode>(m, "SubsampleMode")
      .value("WithoutReplacement", SubsampleMode::WithoutReplacement)
      .value("WithReplacement", SubsampleMode::WithReplacement);

  py::class_<MmdSample>(m, "MmdSample")
      .def_readonly("values", &MmdSample::values)
      .def_readonly("subsample_size", &MmdSample::subsample_size)
      .def_readonly("n_rep", &MmdSample::n_rep)
      .def_readonly("mode", &MmdSample::mode)
      .def_readonly("seed", &MmdSample::seed);

  m.def("mmd_biased",
        [](const KernelSpec& spec, const std::vector<Result>& x,
           const std::vector<Result>& y) { return mmd_biased(spec, x, y); },
        py::arg("spec"), py::arg("x"), py::arg("y"));
  m.def("mmd_distribution", &mmd_distribution, py::arg("sample"), py::arg("spec"),
        py::arg("n"), py::arg("n_rep") = 100,
        py::arg("mode") = SubsampleMode::WithoutReplacement, py::arg("seed") = 0);
  m.def("empirical_quantile",
        [](const std::vector<double>& values, double alpha) {
          return empirical_quantile(values, alpha);
        },
        py::arg("values"), py::arg("alpha"));
  m.def("generalizability", &generalizability, py::arg("sample"), py::arg("spec"),
        py::arg("n"), py::arg("eps"), py::arg("n_rep") = 100,
        py::arg("mode") = SubsampleMode::WithoutReplacement, py::arg("seed") = 0);
  m.def("n_star_exact", &n_star_exact, py::arg("dist"), py::arg("spec"),
        py::arg("alpha_star"), py::arg("eps_star"), py::arg("n_max") = 512,
        py::arg("n_rep") = 2000, py::arg("seed") = 0);
  m.def("mmd_distribution_from", &mmd_distribution_from, py::arg("dist"),
        py::arg("spec"), py::arg("n"), py::arg("n_rep") = 100, py::arg("seed") = 0);

  // ---- distributions ------------------------------------------------------
  py::class_<DiscreteDistribution>(m, "DiscreteDistribution")
      .def(py::init<std::vector<Result>, std::vector<double>>(), py::arg("support"),
           py::arg("probs"))
      .def_property_readonly("support", &DiscreteDistribution::support)
      .def_property_readonly("probs", &DiscreteDistribution::probs)
      .def_property_readonly("n_alternatives", &DiscreteDistribution::n_alternatives)
      .def("is_point_mass", &DiscreteDistribution::is_point_mass)
      .def("__len__", &DiscreteDistribution::size);

  m.def("enumerate_rankings", &enumerate_rankings, py::arg("n_a"),
        py::arg("with_ties") = false);
  m.def("uniform_distribution", &uniform_distribution, py::arg("n_a"),
        py::arg("with_ties") = false);
  m.def("explicit_distribution",
        [](const std::vector<std::pair<Ranking, double>>& pairs) {
          return explicit_distribution(pairs);
        },
        py::arg("pairs"));
  m.def("sample_from", &sample_from, py::arg("dist"), py::arg("n"), py::arg("seed") = 0);

  // ---- power law ----------------------------------------------------------
  py::enum_<FitMode>(m, "FitMode")
      .value("FreeSlope", FitMode::FreeSlope)
      .value("FixedSlope", FitMode::FixedSlope);

  py::class_<MmdQuantileCurve>(m, "MmdQuantileCurve")
      .def(py::init([](std::vector<std::pair<int, double>> points, double alpha) {
             MmdQuantileCurve c;
             c.points = std::move(points);
             c.alpha = alpha;
             return c;
           }),
           py::arg("points"), py::arg("alpha"))
      .def_readonly("points", &MmdQuantileCurve::points)
      .def_readonly("alpha", &MmdQuantileCurve::alpha);

  py::class_<PowerLawFit>(m, "PowerLawFit")
      .def_readonly("beta0", &PowerLawFit::beta0)
      .def_readonly("beta1", &PowerLawFit::beta1)
      .def_readonly("mode", &PowerLawFit::mode)
      .def_readonly("residual", &PowerLawFit::residual);

  m.def("fit_quantile_curve", &fit_quantile_curve, py::arg("curve"),
        py::arg("mode") = FitMode::FreeSlope);
  m.def("predict_n_star", &predict_n_star, py::arg("fit"), py::arg("eps_star"));
  m.def("workflow_n_grid", &workflow_n_grid, py::arg("sample_size"));
  m.def("quantile_curve_from_sample",
        [](const EmpiricalSample& sample, const KernelSpec& spec,
           const std::vector<int>& grid, double alpha, int n_rep, SubsampleMode mode,
           std::uint64_t seed) {
          return quantile_curve_from_sample(sample, spec, grid, alpha, n_rep, mode, seed);
        },
        py::arg("sample"), py::arg("spec"), py::arg("n_grid"), py::arg("alpha"),
        py::arg("n_rep") = 100, py::arg("mode") = SubsampleMode::WithoutReplacement,
        py::arg("seed") = 0);
  m.def("quantile_curve_from_distribution",
        [](const DiscreteDistribution& dist, const KernelSpec& spec,
           const std::vector<int>& grid, double alpha, int n_rep, std::uint64_t seed) {
          return quantile_curve_from_distribution(dist, spec, grid, alpha, n_rep, seed);
        },
        py::arg("dist"), py::arg("spec"), py::arg("n_grid"), py::arg("alpha"),
        py::arg("n_rep") = 100, py::arg("seed") = 0);

  py::class_<NStarEstimate>(m, "NStarEstimate")
      .def_readonly("n_hat", &NStarEstimate::n_hat)
      .def_readonly("fit", &NStarEstimate::fit);
  m.def("estimate_n_star", &estimate_n_star, py::arg("curve"), py::arg("eps_star"),
        py::arg("preferred") = FitMode::FreeSlope);

  m.def("centered_kernel_eigenvalues",
        [](const std::vector<std::vector<double>>& kernel_matrix,
           const std::vector<double>& probs) {
          return centered_kernel_eigenvalues(rows_to_matrix(kernel_matrix), probs);
        },
        py::arg("kernel_matrix"), py::arg("probs"));

  py::class_<ChiSquareMatch>(m, "ChiSquareMatch")
      .def_readonly("lambdas", &ChiSquareMatch::lambdas)
      .def_readonly("lambda1", &ChiSquareMatch::lambda1)
      .def_readonly("lambda2", &ChiSquareMatch::lambda2)
      .def_readonly("scale", &ChiSquareMatch::scale)
      .def_readonly("dof", &ChiSquareMatch::dof);
  m.def("chi2_moment_match",
        [](const std::vector<double>& lambdas) { return chi2_moment_match(lambdas); },
        py::arg("lambdas"));
  m.def("lin_inverse_normal", &lin_inverse_normal, py::arg("alpha"));
  m.def("closed_form_quantile", &closed_form_quantile, py::arg("dist"), py::arg("spec"),
        py::arg("n"), py::arg("alpha"));
  m.def("distribution_free_epsilon", &distribution_free_epsilon, py::arg("spec"),
        py::arg("alpha"), py::arg("n"));
  m.def("distribution_free_power_law", &distribution_free_power_law, py::arg("spec"),
        py::arg("alpha"));

  // ---- workflow -----------------------------------------------------------
  py::class_<GenRequirement>(m, "GenRequirement")
      .def_static("from_delta", &GenRequirement::from_delta, py::arg("spec"),
                  py::arg("alpha_star"), py::arg("delta_star"))
      .def_readonly("alpha_star", &GenRequirement::alpha_star)
      .def_readonly("delta_star", &GenRequirement::delta_star)
      .def_readonly("eps_star", &GenRequirement::eps_star);

  py::class_<ExperimentSource, PyExperimentSource>(m, "ExperimentSource")
      .def(py::init<>())
      .def("next_batch", &ExperimentSource::next_batch, py::arg("count"))
      .def("alternatives", &ExperimentSource::alternatives);

  py::class_<DistributionSource, ExperimentSource>(m, "DistributionSource")
      .def(py::init<DiscreteDistribution, std::uint64_t>(), py::arg("dist"),
           py::arg("seed") = 0);
  py::class_<PoolSource, ExperimentSource>(m, "PoolSource")
      .def(py::init<std::vector<Result>, AlternativeSet>(), py::arg("items"),
           py::arg("alternatives"));

  py::class_<WorkflowCaps>(m, "WorkflowCaps")
      .def(py::init([](int max_total, int max_iterations) {
             WorkflowCaps caps;
             caps.max_total = max_total;
             caps.max_iterations = max_iterations;
             return caps;
           }),
           py::arg("max_total") = 10000, py::arg("max_iterations") = 20)
      .def_readwrite("max_total", &WorkflowCaps::max_total)
      .def_readwrite("max_iterations", &WorkflowCaps::max_iterations);

  py::enum_<StopReason>(m, "StopReason")
      .value("Converged", StopReason::Converged)
      .value("SourceExhausted", StopReason::SourceExhausted)
      .value("CapReached", StopReason::CapReached);

  py::class_<WorkflowIteration>(m, "WorkflowIteration")
      .def_readonly("n_total", &WorkflowIteration::n_total)
      .def_readonly("curve", &WorkflowIteration::curve)
      .def_readonly("fit", &WorkflowIteration::fit)
      .def_readonly("n_hat", &WorkflowIteration::n_hat);

  py::class_<WorkflowReport>(m, "WorkflowReport")
      .def_readonly("iterations", &WorkflowReport::iterations)
      .def_readonly("final_n_hat", &WorkflowReport::final_n_hat)
      .def_readonly("stopped_reason", &WorkflowReport::stopped_reason)
      .def_readonly("generalizable", &WorkflowReport::generalizable)
      .def_readonly("seed", &WorkflowReport::seed);

  m.def("run_generalizable_study", &run_generalizable_study, py::arg("source"),
        py::arg("spec"), py::arg("req"), py::arg("batch_size"),
        py::arg("caps") = WorkflowCaps{}, py::arg("n_rep") = 100, py::arg("seed") = 0,
        py::arg("mode") = SubsampleMode::WithoutReplacement,
        py::arg("fit_mode") = FitMode::FreeSlope);

  py::class_<StudyAssessment>(m, "StudyAssessment")
      .def_readonly("n_hat", &StudyAssessment::n_hat)
      .def_readonly("generalizable", &StudyAssessment::generalizable)
      .def_readonly("curve", &StudyAssessment::curve)
      .def_readonly("fit", &StudyAssessment::fit);

  m.def("assess_study", &assess_study, py::arg("sample"), py::arg("spec"),
        py::arg("req"), py::arg("n_rep") = 100, py::arg("seed") = 0,
        py::arg("mode") = SubsampleMode::WithoutReplacement,
        py::arg("fit_mode") = FitMode::FreeSlope);

  // ---- synthetic experiment -------------------------------------------------
  py::class_<AccuracyRow>(m, "AccuracyRow")
      .def_readonly("sample_size", &AccuracyRow::sample_size)
      .def_readonly("repetition", &AccuracyRow::repetition)
      .def_readonly("n_hat", &AccuracyRow::n_hat)
      .def_readonly("ratio", &AccuracyRow::ratio)
      .def_readonly("status", &AccuracyRow::status);
  py::class_<AccuracyTable>(m, "AccuracyTable")
      .def_readonly("rows", &AccuracyTable::rows)
      .def_readonly("n_star", &AccuracyTable::n_star)
      .def_readonly("eps_star", &AccuracyTable::eps_star)
      .def_readonly("kernel", &AccuracyTable::kernel);
  m.def("estimator_accuracy_experiment",
        [](const DiscreteDistribution& dist, const KernelSpec& spec, double alpha_star,
           double delta_star, const std::vector<int>& sizes, int repetitions,
           std::uint64_t seed, int curve_n_rep, int threads) {
          return estimator_accuracy_experiment(dist, spec, alpha_star, delta_star,
                                               sizes, repetitions, seed, curve_n_rep,
                                               SubsampleMode::WithReplacement, threads);
        },
        py::arg("dist"), py::arg("spec"), py::arg("alpha_star"), py::arg("delta_star"),
        py::arg("sample_sizes"), py::arg("repetitions") = 100, py::arg("seed") = 0,
        py::arg("curve_n_rep") = 100, py::arg("threads") = 0);
  m.def("accuracy_table_csv", &accuracy_table_csv, py::arg("table"));
  m.def("accuracy_table_json", &accuracy_table_json, py::arg("table"));

  // ---- significance tests ---------------------------------------------------
  py::class_<FriedmanResult>(m, "FriedmanResult")
      .def_readonly("statistic", &FriedmanResult::statistic)
      .def_readonly("p_value", &FriedmanResult::p_value);
  m.def("friedman_test", &friedman_test, py::arg("sample"));

  py::class_<SignificanceResult>(m, "SignificanceResult")
      .def_readonly("friedman_statistic", &SignificanceResult::friedman_statistic)
      .def_readonly("friedman_p", &SignificanceResult::friedman_p)
      .def_property_readonly(
          "pairwise_p",
          [](const SignificanceResult& r) { return matrix_to_rows(r.pairwise_p); })
      .def_readonly("best_alternatives", &SignificanceResult::best_alternatives)
      .def_readonly("best_is_significant", &SignificanceResult::best_is_significant);
  m.def("conover_iman", &conover_iman, py::arg("sample"), py::arg("significance") = 0.05);

  py::class_<DemoCell>(m, "DemoCell")
      .def_readonly("ci_significant", &DemoCell::ci_significant)
      .def_readonly("best_alternatives", &DemoCell::best_alternatives)
      .def_readonly("count", &DemoCell::count)
      .def_readonly("mean_generalizability", &DemoCell::mean_generalizability)
      .def_readonly("std_generalizability", &DemoCell::std_generalizability);
  py::class_<DemoSummary>(m, "DemoSummary")
      .def_readonly("cells", &DemoSummary::cells)
      .def_readonly("repetitions", &DemoSummary::repetitions)
      .def_readonly("friedman_significant_fraction",
                    &DemoSummary::friedman_significant_fraction)
      .def_readonly("ci_significant_fraction", &DemoSummary::ci_significant_fraction)
      .def_readonly("overall_mean", &DemoSummary::overall_mean)
      .def_readonly("overall_std", &DemoSummary::overall_std);
  m.def("significance_vs_generalizability_demo", &significance_vs_generalizability_demo,
        py::arg("repetitions") = 1000, py::arg("sample_size") = 20, py::arg("seed") = 0,
        py::arg("n_rep") = 100, py::arg("threads") = 0);
  m.def("demo_summary_csv", &demo_summary_csv, py::arg("summary"));
  m.def("demo_summary_json", &demo_summary_json, py::arg("summary"));

  // ---- study ingestion -------------------------------------------------------
  py::enum_<FactorRole>(m, "FactorRole")
      .value("Design", FactorRole::Design)
      .value("Generalizability", FactorRole::Generalizability)
      .value("Stochasticity", FactorRole::Stochasticity)
      .value("HeldConstant", FactorRole::HeldConstant);
  py::enum_<MissingPolicy>(m, "MissingPolicy")
      .value("ImputeWorstRank", MissingPolicy::ImputeWorstRank)
      .value("DropCondition", MissingPolicy::DropCondition);
  py::enum_<ResultKind>(m, "ResultKind")
      .value("Rankings", ResultKind::Rankings)
      .value("ScoreVectors", ResultKind::ScoreVectors);

  py::class_<StudySchema>(m, "StudySchema")
      .def_static("from_json_file", &StudySchema::from_json_file, py::arg("path"))
      .def_static("from_json_text", &StudySchema::from_json_text, py::arg("text"))
      .def_readwrite("alternative_column", &StudySchema::alternative_column)
      .def_readwrite("score_column", &StudySchema::score_column)
      .def_readwrite("higher_is_better", &StudySchema::higher_is_better)
      .def_readwrite("tie_tol", &StudySchema::tie_tol)
      .def_readwrite("coverage_row", &StudySchema::coverage_row)
      .def_readwrite("coverage_col", &StudySchema::coverage_col);

  py::class_<RawTable>(m, "RawTable")
      .def_readonly("design_columns", &RawTable::design_columns)
      .def_readonly("generalizability_columns", &RawTable::generalizability_columns)
      .def_readonly("warnings", &RawTable::warnings)
      .def("__len__", [](const RawTable& t) { return t.rows.size(); });
  m.def("load_long_table", &load_long_table, py::arg("path"), py::arg("schema"));

  py::class_<RowAccounting>(m, "RowAccounting")
      .def_readonly("total", &RowAccounting::total)
      .def_readonly("used", &RowAccounting::used)
      .def_readonly("missing_score", &RowAccounting::missing_score)
      .def_readonly("dropped_condition_coverage", &RowAccounting::dropped_condition_coverage)
      .def_readonly("dropped_alternative_coverage",
                    &RowAccounting::dropped_alternative_coverage)
      .def_readonly("dropped_condition_missing", &RowAccounting::dropped_condition_missing)
      .def_readonly("dropped_config_too_small", &RowAccounting::dropped_config_too_small)
      .def("reconciled", &RowAccounting::reconciled);

  py::class_<ConfigurationResults>(m, "ConfigurationResults")
      .def_readonly("key", &ConfigurationResults::key)
      .def_readonly("sample", &ConfigurationResults::sample)
      .def_readonly("condition_labels", &ConfigurationResults::condition_labels)
      .def("key_label", &ConfigurationResults::key_label);
  py::class_<StudyConfigurations>(m, "StudyConfigurations")
      .def_readonly("configurations", &StudyConfigurations::configurations)
      .def_readonly("accounting", &StudyConfigurations::accounting)
      .def_readonly("warnings", &StudyConfigurations::warnings);
  m.def("build_configurations", &build_configurations, py::arg("table"),
        py::arg("schema"), py::arg("kind") = ResultKind::Rankings);

  py::class_<KernelChoice>(m, "KernelChoice")
      .def(py::init([](KernelFamily family, std::optional<double> nu,
                       std::optional<int> top_k, std::optional<int> target,
                       std::optional<std::string> target_name,
                       std::optional<double> gamma) {
             KernelChoice c;
             c.family = family;
             c.nu = nu;
             c.top_k = top_k;
             c.target = target;
             c.target_name = std::move(target_name);
             c.gamma = gamma;
             return c;
           }),
           py::arg("family"), py::arg("nu") = std::nullopt,
           py::arg("top_k") = std::nullopt, py::arg("target") = std::nullopt,
           py::arg("target_name") = std::nullopt, py::arg("gamma") = std::nullopt)
      .def("resolve",
           [](const KernelChoice& c, const AlternativeSet& alts,
              const std::vector<ScoreVector>& vectors) {
             return c.resolve(alts, vectors);
           },
           py::arg("alternatives"), py::arg("vectors") = std::vector<ScoreVector>{});

  py::class_<GeneralizabilityReport>(m, "GeneralizabilityReport")
      .def_readonly("config_key", &GeneralizabilityReport::config_key)
      .def_readonly("available", &GeneralizabilityReport::available)
      .def_readonly("n_hat", &GeneralizabilityReport::n_hat)
      .def_readonly("alpha_star", &GeneralizabilityReport::alpha_star)
      .def_readonly("delta_star", &GeneralizabilityReport::delta_star)
      .def_readonly("eps_star", &GeneralizabilityReport::eps_star)
      .def_readonly("kernel", &GeneralizabilityReport::kernel)
      .def_readonly("generalizable", &GeneralizabilityReport::generalizable)
      .def_readonly("curve", &GeneralizabilityReport::curve)
      .def_readonly("fit", &GeneralizabilityReport::fit)
      .def_readonly("seed", &GeneralizabilityReport::seed);
  py::class_<StudyAnalysis>(m, "StudyAnalysis")
      .def_readonly("reports", &StudyAnalysis::reports)
      .def_readonly("failures", &StudyAnalysis::failures);

  py::enum_<ReportFormat>(m, "ReportFormat")
      .value("Json", ReportFormat::Json)
      .value("Csv", ReportFormat::Csv);

  m.def("analyze_study",
        [](const StudyConfigurations& configs, const KernelChoice& kernel,
           const std::vector<double>& alphas, const std::vector<double>& deltas,
           int n_rep, std::uint64_t seed, SubsampleMode mode, FitMode fit_mode,
           int threads) {
          return analyze_study(configs, kernel, alphas, deltas, n_rep, seed, mode,
                               fit_mode, threads);
        },
        py::arg("configs"), py::arg("kernel"), py::arg("alpha_values"),
        py::arg("delta_values"), py::arg("n_rep") = 100, py::arg("seed") = 0,
        py::arg("mode") = SubsampleMode::WithoutReplacement,
        py::arg("fit_mode") = FitMode::FreeSlope, py::arg("threads") = 0);
  m.def("render_reports",
        [](const std::vector<GeneralizabilityReport>& reports, ReportFormat format) {
          return render_reports(reports, format);
        },
        py::arg("reports"), py::arg("format"));
  m.def("emit_report",
        [](const std::vector<GeneralizabilityReport>& reports, ReportFormat format,
           const std::filesystem::path& path) { emit_report(reports, format, path); },
        py::arg("reports"), py::arg("format"), py::arg("path"));
  m.def("parse_reports", &parse_reports, py::arg("text"), py::arg("format"));
}
