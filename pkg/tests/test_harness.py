import numpy as np
import pytest
from autodiff.checkpoint import CheckpointError
from config.schemas import (
    CodeRef,
    DecoderConfig,
    ExperimentConfig,
    StabilityConfig,
    SweepConfig,
    TrainConfig,
    parse_experiment,
)
from harness.compare import ComparePoint, CompareResult, coding_gain_holds, compare
from harness.gradcheck import KINDS, run_gradcheck
from harness.runner import ExperimentRunner, split_paths, with_seed
from harness.stability import run_stability
from harness.sweep import run_sweep
from utils.report_writer import report_writer

HAMMING = CodeRef(name="HAMMING_7_4")


def small_sweep(**overrides):
    base = dict(
        variants=["plain", "uncoded"],
        snr_points_db=[1.0, 3.0],
        max_frames=240,
        min_bit_errors=40,
        frames_per_batch=30,
        seed=11,
    )
    base.update(overrides)
    return SweepConfig(**base)


def small_experiment(**sweep_overrides) -> ExperimentConfig:
    return ExperimentConfig(
        code=HAMMING,
        decoder=DecoderConfig(iterations=5),
        sweep=small_sweep(**sweep_overrides),
    )


def test_sweep_does_not_depend_on_thread_count():
    sweep = small_sweep()
    single = run_sweep(sweep, DecoderConfig(iterations=5), HAMMING, threads=1)
    pooled = run_sweep(sweep, DecoderConfig(iterations=5), HAMMING, threads=3)
    assert single.rows() == pooled.rows()


def test_sweep_stops_at_error_budget_or_frame_cap():
    result = run_sweep(small_sweep(), DecoderConfig(iterations=5), HAMMING, threads=1)
    for point in result.points["plain"] + result.points["uncoded"]:
        assert point.frames <= 240
        assert point.frames == 240 or point.bit_errors >= 40
    assert result.k == 4 and result.n == 7
    assert result.metadata()["codeword"] == "all-zero"


def test_noise_injection_gives_zero_errors():
    result = run_sweep(small_sweep(noise_sigma=1e-6), DecoderConfig(), HAMMING, threads=1)
    for point in result.points["plain"]:
        assert point.ber == 0.0
        assert point.frames == 240
        assert point.sigma == 1e-6


def test_uncoded_column_is_optional():
    with_column = run_sweep(small_sweep(max_frames=30), DecoderConfig(), HAMMING, threads=1)
    without = run_sweep(small_sweep(max_frames=30, include_uncoded=False), DecoderConfig(), HAMMING, threads=1)
    assert "uncoded_ber" in with_column.rows()[0]
    assert "uncoded_ber" not in without.rows()[0]


def test_learned_variant_without_checkpoint_is_refused():
    with pytest.raises(CheckpointError):
        run_sweep(small_sweep(variants=["weighted"]), DecoderConfig(), HAMMING, threads=1)
    allowed = run_sweep(small_sweep(variants=["weighted"], allow_untrained=True, max_frames=30), DecoderConfig(), HAMMING, threads=1)
    assert allowed.points["weighted"][0].frames == 30


def test_comparing_a_decoder_with_itself():
    config = DecoderConfig(iterations=4)
    result = compare(config, config, small_sweep(snr_points_db=[2.0]), HAMMING, frames=90)
    point = result.points[0]
    assert point.frames == 90
    assert point.delta == 0.0
    assert point.agreement == 1.0
    assert point.sign_test_p == 1.0
    assert coding_gain_holds(result)


def test_sign_test_flags_a_worse_decoder():
    point = ComparePoint(snr_db=5.0, frames=100, n=7, bit_errors_a=60, bit_errors_b=5, a_better=0, b_better=30)
    assert point.sign_test_p < 1e-6
    assert point.ratio == pytest.approx(12.0)
    assert not coding_gain_holds(CompareResult("c", "a", "b", [point]))


def test_gradcheck_suite_passes_on_every_kind():
    summary = run_gradcheck(num_cases=len(KINDS), seed=0)
    assert summary.passed, [c.to_row() for c in summary.failures]
    assert sorted(summary.by_kind()) == sorted(KINDS)


def test_stability_reports_every_run():
    result = run_stability(
        StabilityConfig(variants=["hyper_damped", "hyper"], seeds=[0, 1], steps=2),
        TrainConfig(batch_size=4, validation_frames=8, eval_every=1, lr=0.01),
        DecoderConfig(iterations=2, f_hidden=4, g_hidden=3),
        CodeRef(name="REPETITION_3_1"),
    )
    table = result.divergences()
    assert table["hyper_damped"]["runs"] == 2
    assert table["hyper"]["runs"] == 2
    assert len(result.rows()) == 4
    assert all(r.checkpoint is None for r in result.reports)


def test_csv_is_self_describing(tmp_path):
    runner = ExperimentRunner(results_path=str(tmp_path))
    config = small_experiment(max_frames=60)
    written = runner.sweep(config, threads=1)
    assert written["success"], written.get("error")

    metadata, toml_text, rows = report_writer.read_csv(written["result"]["csv"])
    assert metadata["code"] == "HAMMING(7,4)"
    rebuilt = parse_experiment(toml_text)
    assert rebuilt == config

    rerun = runner.sweep(rebuilt, threads=1, write=False)
    assert rerun["result"]["rows"] == rows


def test_runner_turns_errors_into_messages():
    runner = ExperimentRunner()
    unknown = runner.decode([0.1, 0.2, 0.3], code={"name": "NAO_EXISTE"})
    assert not unknown["success"]
    assert "Referência desconhecida" in unknown["error"]

    plain = runner.train(ExperimentConfig())
    assert not plain["success"]
    assert "plain" in plain["error"]


def test_runner_decode_single_frame():
    out = ExperimentRunner().decode([2.0, 2.0, -0.5], code={"name": "REPETITION_3_1"})
    assert out["success"]
    assert out["result"]["bits"] == [0, 0, 0]
    assert out["result"]["converged"] is True
    assert out["result"]["decoder"]["variant"] == "plain"


def test_runner_train_writes_reports(tmp_path):
    config = ExperimentConfig(
        code=CodeRef(name="REPETITION_3_1"),
        decoder=DecoderConfig(variant="weighted", iterations=2),
        train=TrainConfig(steps=2, batch_size=4, validation_frames=8, eval_every=1, seeds=[0, 1], checkpoint_path=str(tmp_path / "ckpt")),
    )
    out = ExperimentRunner().train(config, out=str(tmp_path / "treino.csv"))
    assert out["success"], out.get("error")
    runs = out["result"]["runs"]
    assert [r["seed"] for r in runs] == [0, 1]
    assert runs[0]["csv"].endswith("treino.seed0.csv")
    for r in runs:
        metadata, _, rows = report_writer.read_csv(r["csv"])
        assert metadata["seed"] == r["seed"]
        assert len(rows) == 2


def test_runner_gin_train_then_eval(tmp_path):
    config = ExperimentConfig.model_validate({
        "gin": {
            "hidden": 4, "iterations": 2, "f_hidden": 3, "g_hidden": 3, "steps": 2, "batch_size": 4,
            "num_graphs": 10, "min_nodes": 4, "max_nodes": 5,
            "dataset": str(tmp_path / "grafos.txt"), "checkpoint": str(tmp_path / "gin.npz"),
        }
    })
    runner = ExperimentRunner(results_path=str(tmp_path))
    trained = runner.gin_train(config)
    assert trained["success"], trained.get("error")
    paths = split_paths(config.gin.dataset)
    assert paths["train"].endswith("grafos.train.txt")

    evaluated = runner.gin_eval(config)
    assert evaluated["success"], evaluated.get("error")
    assert evaluated["result"]["test_accuracy"] == pytest.approx(trained["result"]["test_accuracy"])


def test_with_seed_overrides_every_section():
    config = with_seed(ExperimentConfig(), 42)
    assert config.decoder.seed == 42
    assert config.train.seeds == [42]
    assert config.sweep.seed == 42
    assert config.gin.seed == 42
    assert with_seed(config, None) is config


def test_sweep_rows_have_finite_ber_per_point():
    result = run_sweep(small_sweep(max_frames=60), DecoderConfig(iterations=5), HAMMING, threads=1)
    assert np.isfinite(result.ber("plain")).all()
    assert result.ber("plain").shape == (2,)
