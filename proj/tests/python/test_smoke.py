"""Smoke tests for the python module: a thin pass over the main operations."""

import math

import pytest

import genrank as gr


def test_kernel_golden_values():
    r = gr.Ranking([0, 0, 0])
    s = gr.Ranking([0, 1, 1])
    assert gr.kernel_eval(gr.KernelSpec.borda(3, 0, 1 / 3), r, s) == 1.0
    assert gr.kernel_eval(gr.KernelSpec.jaccard(3, 1), r, s) == pytest.approx(1 / 3, abs=1e-12)
    assert gr.kernel_eval(gr.KernelSpec.mallows(3, 1 / 3), r, s) == pytest.approx(
        math.exp(-1 / 3), abs=1e-12
    )


def test_ranking_helpers():
    r = gr.Ranking.from_scores([0.9, 0.9, 0.3])
    assert r.tiers == [0, 0, 1]
    assert gr.borda_count(gr.Ranking([0, 1, 1]), 1) == 2
    assert gr.top_k_tiers(gr.Ranking([0, 1, 1]), 1) == [0]
    assert gr.discordant_pairs(gr.Ranking([0, 0, 0]), gr.Ranking([0, 1, 1])) == 1.0
    with pytest.raises(ValueError):
        gr.Ranking([0, 2])


def test_epsilon_star_and_bounds():
    jac = gr.KernelSpec.jaccard(5, 1)
    assert gr.epsilon_star(jac, 0.05) == pytest.approx(math.sqrt(0.1), abs=1e-12)
    bounds = gr.kernel_bounds(gr.KernelSpec.borda(3, 0, 1 / 3))
    assert bounds.k_inf == pytest.approx(math.exp(-1.0))
    assert bounds.k_sup == 1.0


def test_enumeration_counts():
    assert len(gr.enumerate_rankings(3, with_ties=True)) == 13
    assert len(gr.enumerate_rankings(4)) == 24


def test_mmd_and_generalizability():
    spec = gr.KernelSpec.jaccard(3, 1)
    x = [gr.Ranking([0, 0, 0])]
    y = [gr.Ranking([0, 1, 1])]
    assert gr.mmd_biased(spec, x, y) == pytest.approx(math.sqrt(4 / 3), abs=1e-12)

    point = gr.explicit_distribution([(gr.Ranking([0, 1, 1]), 1.0)])
    sample = gr.sample_from(point, 12, seed=3)
    assert gr.generalizability(sample, spec, 5, 0.0, n_rep=50, seed=1) == 1.0
    assert gr.n_star_exact(point, spec, 0.95, 0.1, n_max=32, n_rep=100, seed=1) == 1


def test_power_law_fit_and_prediction():
    points = [(n, math.exp((math.log(n) - 3.0) / -2.0)) for n in (2, 4, 8, 16)]
    fit = gr.fit_quantile_curve(gr.MmdQuantileCurve(points, 0.95))
    assert fit.beta0 == pytest.approx(3.0, abs=1e-9)
    assert fit.beta1 == pytest.approx(-2.0, abs=1e-9)
    assert gr.predict_n_star(fit, 0.1) == pytest.approx(math.exp(-2 * math.log(0.1) + 3), abs=2)

    assert gr.lin_inverse_normal(0.95) == pytest.approx(1.6449, abs=0.01)
    spec = gr.KernelSpec.jaccard(4, 1)
    assert gr.distribution_free_epsilon(spec, 0.95, 100) == pytest.approx(
        0.48758503275776655, abs=1e-12
    )


def test_assess_study_point_mass():
    point = gr.explicit_distribution([(gr.Ranking([0, 1, 2]), 1.0)])
    sample = gr.sample_from(point, 20, seed=5)
    spec = gr.KernelSpec.mallows_recommended(3)
    req = gr.GenRequirement.from_delta(spec, 0.95, 0.05)
    assessment = gr.assess_study(sample, spec, req, n_rep=50, seed=5)
    assert assessment.n_hat == 1
    assert assessment.generalizable


def test_workflow_with_python_source():
    class TwoRankingSource(gr.ExperimentSource):
        def __init__(self):
            super().__init__()
            self.counter = 0

        def next_batch(self, count):
            batch = []
            for _ in range(count):
                batch.append(gr.Ranking([0, 1, 2] if self.counter % 2 else [1, 0, 2]))
                self.counter += 1
            return batch

        def alternatives(self):
            return gr.AlternativeSet.indexed(3)

    source = TwoRankingSource()
    spec = gr.KernelSpec.jaccard(3, 1)
    req = gr.GenRequirement.from_delta(spec, 0.7, 0.3)
    report = gr.run_generalizable_study(source, spec, req, 10, n_rep=50, seed=2)
    assert report.iterations
    assert report.stopped_reason in (gr.StopReason.Converged, gr.StopReason.CapReached)


def test_significance_tests():
    sample = gr.EmpiricalSample.from_rankings([gr.Ranking([0, 1, 2])] * 10)
    friedman = gr.friedman_test(sample)
    assert friedman.statistic == pytest.approx(20.0, abs=1e-9)
    assert friedman.p_value == pytest.approx(math.exp(-10.0), rel=1e-9)
    result = gr.conover_iman(sample)
    assert result.best_alternatives == [0]
    assert result.best_is_significant


def test_study_analysis_roundtrip(tmp_path):
    csv = ["method,score,metric,dataset"]
    for d in range(1, 9):
        for i, m in enumerate(("m1", "m2", "m3")):
            csv.append(f"{m},{0.9 - 0.3 * i},acc,d{d}")
    path = tmp_path / "study.csv"
    path.write_text("\n".join(csv) + "\n")

    schema = gr.StudySchema.from_json_text(
        '{"alternative_column": "method", "score_column": "score",'
        ' "factor_roles": {"metric": "design", "dataset": "generalizability"}}'
    )
    table = gr.load_long_table(path, schema)
    configs = gr.build_configurations(table, schema)
    assert configs.accounting.reconciled()
    assert len(configs.configurations) == 1

    analysis = gr.analyze_study(
        configs, gr.KernelChoice(gr.KernelFamily.Jaccard), [0.95], [0.05], n_rep=50, seed=3
    )
    assert not analysis.failures
    assert len(analysis.reports) == 1
    report = analysis.reports[0]
    assert report.n_hat == 1 and report.generalizable

    text = gr.render_reports(analysis.reports, gr.ReportFormat.Json)
    parsed = gr.parse_reports(text, gr.ReportFormat.Json)
    assert len(parsed) == 1 and parsed[0].n_hat == report.n_hat


def test_demo_runs_small():
    summary = gr.significance_vs_generalizability_demo(repetitions=25, seed=1, n_rep=40)
    assert summary.friedman_significant_fraction == 1.0
    assert sum(cell.count for cell in summary.cells) == 25
