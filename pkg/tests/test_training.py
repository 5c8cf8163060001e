import math
import os
import numpy as np
import pytest
from autodiff.checkpoint import load_checkpoint
from autodiff.tape import Tape, scale
from channel.awgn import sigma_from_ebn0
from config.schemas import TrainConfig
from decoders.bp import BPDecoder, DecodeConfig
from decoders.guardrails import TrainingGuardrails
from decoders.hyper import HyperDecoder
from training import trainer as trainer_module
from training.batches import make_batch
from training.loss import multiloss
from training.trainer import checkpoint_file, train, validation_ber


def small_config(**overrides):
    base = dict(lr=0.01, batch_size=8, steps=5, snr_range_db=(1.0, 4.0), seeds=[0], eval_every=2, validation_frames=20)
    base.update(overrides)
    return TrainConfig(**base)


def weighted(graph):
    return BPDecoder(graph, DecodeConfig(variant="weighted", iterations=3, early_stop=False))


def damped_hyper(graph, seed=0):
    config = DecodeConfig(variant="hyper_damped", iterations=3, early_stop=False)
    return HyperDecoder(graph, config, seed=seed, f_hidden=8, g_hidden=4)


def test_make_batch_uses_all_zero_codeword(hamming):
    llr, targets = make_batch(hamming, 16, (1.0, 6.0), np.random.default_rng(0))
    assert llr.shape == targets.shape == (16, 7)
    assert not targets.any()
    assert np.isfinite(llr).all()
    assert np.mean(llr > 0) > 0.7


def test_make_batch_range_and_fixed_sigma(hamming):
    with pytest.raises(ValueError):
        make_batch(hamming, 4, (3.0, 1.0), np.random.default_rng(0))
    llr, _ = make_batch(hamming, 4, (2.0, 2.0), np.random.default_rng(0), sigma=1e-6)
    assert np.all(llr > 1e6)


def test_multiloss_anchor_with_zero_llr(hamming_graph):
    tape = Tape()
    marginals = weighted(hamming_graph).unroll(tape, {}, tape.constant(np.zeros((4, 7))), iterations=5)
    targets = np.zeros((4, 7))
    assert multiloss(marginals, targets).item() == pytest.approx(5 * math.log(2.0))
    assert multiloss(marginals, targets, "frame").item() == pytest.approx(7 * 5 * math.log(2.0))
    with pytest.raises(ValueError):
        multiloss([], targets)


def test_zero_steps_saves_initial_checkpoint(hamming_graph, tmp_path):
    model = weighted(hamming_graph)
    report = train(model, small_config(steps=0, checkpoint_path=str(tmp_path)), seed=0)
    assert report.losses == []
    assert report.best_step == 0
    assert os.path.exists(report.checkpoint)
    store, header = load_checkpoint(report.checkpoint)
    np.testing.assert_array_equal(store["w"], np.ones(hamming_graph.num_edges))
    assert header["variant"] == "weighted"


def test_training_is_deterministic(hamming_graph):
    a, b = weighted(hamming_graph), weighted(hamming_graph)
    report_a = train(a, small_config(), seed=3)
    report_b = train(b, small_config(), seed=3)
    assert report_a.losses == report_b.losses
    np.testing.assert_array_equal(a.store["w"], b.store["w"])
    assert len(report_a.losses) == 5
    assert [step for step, _ in report_a.validation] == [0, 2, 4, 5]


def test_damping_stays_in_unit_interval(hamming_graph):
    model = damped_hyper(hamming_graph)
    report = train(model, small_config(lr=0.5, steps=6), seed=1)
    assert len(report.damping) == len(report.losses)
    assert all(0.0 <= c <= 1.0 for c in report.damping)
    assert report.final_damping == report.damping[-1]


def test_divergence_is_reported_not_raised(hamming_graph, monkeypatch):
    original = trainer_module.multiloss
    monkeypatch.setattr(trainer_module, "multiloss", lambda *args: scale(original(*args), float("nan")))
    report = train(weighted(hamming_graph), small_config(), seed=0)
    assert report.diverged
    assert report.divergence_step == 1
    assert "perda" in report.divergence_reason
    assert len(report.losses) == 1


def test_trace_rows_follow_steps(hamming_graph):
    report = train(weighted(hamming_graph), small_config(steps=3, eval_every=5), seed=0)
    rows = report.trace_rows()
    assert [r["step"] for r in rows] == [1, 2, 3]
    assert rows[-1]["val_ber"] != ""
    assert rows[0]["val_ber"] == ""
    assert report.to_dict()["steps"] == 3


def test_checkpoint_file_naming(tmp_path):
    assert checkpoint_file(small_config(), "weighted", 0, "HAMMING(7,4)") is None
    assert checkpoint_file(small_config(checkpoint_path="x/modelo.npz"), "hyper", 2, "c") == "x/modelo.npz"
    path = checkpoint_file(small_config(checkpoint_path=str(tmp_path)), "hyper", 2, "HAMMING(7,4)")
    assert path == os.path.join(str(tmp_path), "HAMMING_7_4_hyper_seed2.npz")


def test_guardrails_flag_nonfinite_parameters():
    assert TrainingGuardrails.check_divergence(0.5, {"w": np.array([1.0, np.inf])})["diverged"]
    assert not TrainingGuardrails.check_divergence(0.5, {"w": np.ones(2)})["diverged"]
    assert TrainingGuardrails.detect_plateau([0.3] * 50)
    assert not TrainingGuardrails.detect_plateau([0.3] * 10)


def test_make_batch_llr_mean_matches_channel(hamming):
    llr, _ = make_batch(hamming, 20000, (3.0, 3.0), np.random.default_rng(4))
    sigma = sigma_from_ebn0(3.0, hamming.code_rate)
    assert llr.mean() == pytest.approx(2.0 / sigma**2, rel=0.02)


def test_weighted_bp_on_repetition_is_not_worse_than_plain(repetition_graph, tmp_path):
    config = small_config(steps=20, batch_size=16, eval_every=5, validation_frames=200, checkpoint_path=str(tmp_path))
    model = weighted(repetition_graph)
    report = train(model, config, seed=2)
    assert not report.diverged
    assert np.isfinite(model.store["w"]).all()

    store, _ = load_checkpoint(report.checkpoint)
    assert np.isfinite(store["w"]).all()

    val_llr, _ = make_batch(repetition_graph.H, config.validation_frames, config.snr_range_db, np.random.default_rng([2, 1]))
    plain = BPDecoder(repetition_graph, DecodeConfig(iterations=3, early_stop=False))
    assert report.best_ber <= validation_ber(plain, val_llr)
