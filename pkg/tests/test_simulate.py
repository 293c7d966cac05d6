"""Simulate module: KS distance, experiment harness, and the CLI."""

import json

import numpy as np
import pytest

from graphonlab import (
    DegenerateGraphonError,
    ExperimentConfig,
    KernelSpec,
    LabeledGraph,
    LimitLaw,
    ks_distance,
    run_experiment,
    sample_limit,
)
from graphonlab.cli import main
from graphonlab.simulate import replicate_seed

STAR2 = LabeledGraph.star(2)
K3 = LabeledGraph.complete(3)

# small but non-degree-regular: Gaussian branch
SKEWED = KernelSpec.custom((0.5, 0.5), [[0.4, 0.5], [0.5, 0.7]])


def small_config(**overrides):
    base = dict(
        pattern=STAR2,
        kernel=KernelSpec.two_block_diagonal(0.5),
        n=40,
        replicates=60,
        reference_draws=2_000,
        master_seed=71,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestKsDistance:
    def test_identical_samples(self):
        a = np.array([0.3, 1.2, -0.5])
        assert ks_distance(a, a.copy()) == 0.0

    def test_disjoint_supports(self):
        assert ks_distance([-3.0, -1.0, -2.0], [1.0, 2.0]) == 1.0

    def test_hand_enumerated_step_functions(self):
        assert ks_distance([1.0, 2.0], [1.5, 2.5]) == 0.5

    def test_empty_input(self):
        with pytest.raises(ValueError):
            ks_distance([], [1.0])

    def test_two_reference_samples_are_close(self):
        # calibrates the acceptance threshold: same law, different streams
        law = LimitLaw.mixture(1 / 64, (3 / 32,), 3)
        a = sample_limit(law, seed=100, count=10_000)
        b = sample_limit(law, seed=200, count=10_000)
        assert ks_distance(a, b) < 0.03


class TestConfig:
    def test_json_round_trip(self):
        cfg = small_config()
        again = ExperimentConfig.from_json_dict(cfg.to_json_dict())
        assert again == cfg

    def test_rejects_unknown_schema_version(self):
        data = small_config().to_json_dict()
        data["schema_version"] = 99
        with pytest.raises(ValueError):
            ExperimentConfig.from_json_dict(data)

    def test_rejects_small_reference_sample(self):
        with pytest.raises(ValueError):
            small_config(reference_draws=10)

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            small_config(n=2)


class TestRunExperiment:
    def test_mixture_branch_smoke(self):
        result = run_experiment(small_config())
        assert result.law.kind == "mixture"
        assert len(result.records) == 60
        assert result.ks <= 1.0
        assert result.records[0].seed == replicate_seed(71, 0)

    def test_gaussian_branch_smoke(self):
        result = run_experiment(small_config(kernel=SKEWED, pattern=STAR2, n=30))
        assert result.law.kind == "gaussian"
        assert result.law.tau2 > 0

    def test_byte_identical_reruns(self):
        cfg = small_config()
        a = run_experiment(cfg).to_canonical_json()
        b = run_experiment(cfg).to_canonical_json()
        assert a == b

    def test_worker_pool_matches_serial(self, monkeypatch):
        cfg = small_config(replicates=24, n=25)
        serial = run_experiment(cfg).to_canonical_json()
        monkeypatch.setenv("GRAPHONLAB_THREADS", "3")
        pooled = run_experiment(cfg).to_canonical_json()
        assert pooled == serial

    def test_degenerate_kernel_raises(self):
        with pytest.raises(DegenerateGraphonError):
            run_experiment(small_config(kernel=KernelSpec.constant(1.0), pattern=K3))

    def test_variance_gap_shrinks_with_n(self):
        # Gaussian branch for the edge pattern; counting is cheap, so the
        # finite-size bias trend over n is visible above Monte Carlo noise.
        K2 = LabeledGraph.complete(2)
        gaps = []
        for n in (50, 100, 200):
            per_rep = []
            for rep in range(5):
                cfg = ExperimentConfig(
                    pattern=K2,
                    kernel=SKEWED,
                    n=n,
                    replicates=1_000,
                    reference_draws=2_000,
                    master_seed=900 + rep,
                )
                result = run_experiment(cfg)
                per_rep.append(abs(result.empirical_variance - result.law.variance))
            gaps.append(float(np.median(per_rep)))
        assert gaps[0] > gaps[1] > gaps[2]

    def test_failing_threshold_is_reported(self):
        result = run_experiment(small_config(ks_threshold=1e-9))
        assert not result.ks_pass
        assert not result.passed


class TestOutputs:
    def test_writes_result_and_csv(self, tmp_path):
        result = run_experiment(small_config(replicates=10))
        result_path, csv_path = result.write(tmp_path / "out")
        data = json.loads(result_path.read_text())
        assert data["schema_version"] == 1
        assert len(data["records"]) == 10
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "replicate,seed,raw_count,normalized"
        assert len(lines) == 11
        # floats round-trip exactly through the CSV
        first = lines[1].split(",")
        assert float(first[3]) == data["records"][0]["normalized"]


class TestCli:
    def test_density_constant(self, capsys):
        assert main(["density", "--pattern", "k2", "--kernel", "constant:0.3"]) == 0
        assert float(capsys.readouterr().out.strip()) == 0.3

    def test_constants_two_block(self, capsys):
        code = main(["constants", "--pattern", "star2", "--kernel", "two_block:0.5"])
        out = capsys.readouterr().out
        assert code == 0
        assert "sigma2 = 0.015625" in out
        assert "spec_minus = [0.09375" in out

    def test_constants_product_reports_refinement(self, capsys):
        code = main(
            ["constants", "--pattern", "star2", "--kernel", "product", "--m", "32"]
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "refined_m = 64" in out
        assert "refined_tau2" in out

    def test_regularity_verdicts(self, capsys):
        assert main(["regularity", "--pattern", "star2", "--kernel", "two_block:0.5"]) == 0
        assert "regular = true" in capsys.readouterr().out
        assert main(["regularity", "--pattern", "star2", "--kernel", "product", "--m", "64"]) == 0
        assert "regular = false" in capsys.readouterr().out

    def test_spectrum_json(self, capsys):
        assert main(["spectrum", "--kernel", "two_block:0.5", "--pattern", "star2"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert np.allclose(sorted(data["eigenvalues"]), 3 * 0.25 / 8, atol=1e-10)
        assert data["pi"] == [0.5, 0.5]

    def test_pattern_file_loading(self, tmp_path, capsys):
        pattern_path = tmp_path / "k2.json"
        pattern_path.write_text(json.dumps({"n": 2, "edges": [[1, 2]]}))
        assert main(["density", "--pattern", str(pattern_path), "--kernel", "constant:0.25"]) == 0
        assert float(capsys.readouterr().out.strip()) == 0.25

    def test_unknown_subcommand_exits_2(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 2
        assert "usage" in capsys.readouterr().err

    def test_degenerate_config_exits_2(self, tmp_path, capsys):
        cfg = small_config(kernel=KernelSpec.constant(1.0), pattern=K3)
        cfg_path = tmp_path / "exp.json"
        cfg_path.write_text(json.dumps(cfg.to_json_dict()))
        code = main(["simulate", "--config", str(cfg_path), "--out", str(tmp_path / "o")])
        assert code == 2
        assert "degenerate" in capsys.readouterr().err

    def test_simulate_end_to_end(self, tmp_path, capsys):
        cfg = small_config(replicates=30, n=30, ks_threshold=0.9, variance_band=5.0)
        cfg_path = tmp_path / "exp.json"
        cfg_path.write_text(json.dumps(cfg.to_json_dict()))
        out_dir = tmp_path / "results"
        code = main(["simulate", "--config", str(cfg_path), "--out", str(out_dir)])
        assert code == 0
        assert (out_dir / "result.json").exists()
        assert (out_dir / "replicates.csv").exists()

    def test_simulate_failed_check_exits_1(self, tmp_path):
        cfg = small_config(replicates=30, n=30, ks_threshold=1e-9)
        cfg_path = tmp_path / "exp.json"
        cfg_path.write_text(json.dumps(cfg.to_json_dict()))
        code = main(["simulate", "--config", str(cfg_path), "--out", str(tmp_path / "o")])
        assert code == 1

    def test_selftest_passes(self, capsys):
        assert main(["selftest"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert out.count("ok - ") >= 10
