"""
Experimentos em escala de bancada (lentos; rode com `pytest -m slow`)
"""
import numpy as np
import pytest
from autodiff.tape import Tape
from codes.code_loader import code_loader
from config.decoder_factory import DecoderFactory
from config.schemas import CodeRef, DecoderConfig, GinConfig, StabilityConfig, SweepConfig, TrainConfig
from decoders.bp import DecodeConfig, decode
from decoders.tanner import build
from gnn.graphs import make_synthetic_dataset
from gnn.trainer import build_model, train_gin
from harness.compare import coding_gain_holds, compare
from harness.gradcheck import run_gradcheck
from harness.stability import run_stability
from harness.sweep import batch_seed, point_sigma, run_sweep, simulate_frames
from training.trainer import train

pytestmark = pytest.mark.slow

HAMMING = CodeRef(name="HAMMING_7_4")


def hamming_training(tmp_path, steps=400):
    return TrainConfig(
        lr=1e-3, batch_size=64, steps=steps, snr_range_db=(1.0, 6.0), seeds=[0],
        eval_every=100, validation_frames=500, checkpoint_path=str(tmp_path / "hyper.npz"),
    )


def trained_damped_decoder(tmp_path) -> DecoderConfig:
    config = DecoderConfig(variant="hyper_damped", iterations=5, early_stop=False)
    graph = build(code_loader.load(HAMMING.name))
    report = train(DecoderFactory.create_decoder(config, graph), hamming_training(tmp_path), seed=0)
    assert not report.diverged
    return config.model_copy(update={"checkpoint": report.checkpoint, "early_stop": True})


def test_full_gradient_suite():
    summary = run_gradcheck(num_cases=100, seed=0)
    assert summary.passed, [c.to_row() for c in summary.failures]


def test_reduction_identities_on_random_frames():
    graph = build(code_loader.load("BCH_31_16"))
    config = DecoderConfig(variant="hyper_damped", iterations=4, early_stop=False, f_hidden=16, g_hidden=8)
    damped = DecoderFactory.create_decoder(config, graph)
    llr = simulate_frames(graph.H, 0.8, 100, batch_seed(0, 0, 0))

    damped.store.params["damping"][:] = 0.0
    undamped = DecoderFactory.create_decoder(config.model_copy(update={"variant": "hyper"}), graph, store=damped.store)
    np.testing.assert_array_equal(damped.decode(llr).marginals, undamped.decode(llr).marginals)

    damped.store.params["damping"][:] = 1.0
    tape = Tape(record=False)
    marginals = damped.unroll(tape, damped.store.bind(tape), tape.constant(llr))
    for later in marginals[1:]:
        np.testing.assert_array_equal(later.data, marginals[0].data)


def test_plain_bp_on_bch63_beats_uncoded_and_improves_with_snr():
    sweep = SweepConfig(
        variants=["plain"], snr_points_db=[4.0, 5.0, 6.0], max_frames=400_000,
        min_bit_errors=100, frames_per_batch=2000, seed=0,
    )
    result = run_sweep(sweep, DecoderConfig(iterations=5), CodeRef(name="BCH_63_51"), threads=4)
    for row in result.rows():
        assert row["bit_errors"] >= 100
        assert row["ber"] < row["uncoded_ber"]
    ber = result.ber("plain")
    assert np.all(np.diff(ber) <= 0)


def test_taylor_and_exact_bp_agree_on_random_frames():
    H = code_loader.load("BCH_63_51")
    graph = build(H)
    agreeing, total = 0, 0
    for i, snr in enumerate((2.0, 3.0)):
        llr = simulate_frames(H, point_sigma(snr, H), 5000, batch_seed(1, i, 0))
        exact = decode(graph, llr, DecodeConfig(iterations=5))
        taylor = decode(graph, llr, DecodeConfig(iterations=5, check_update="taylor", q=50))
        agreeing += int((exact.bits == taylor.bits).sum())
        total += exact.bits.size
    assert agreeing / total >= 0.999


def test_damped_training_never_diverges():
    result = run_stability(
        StabilityConfig(variants=["hyper_damped", "hyper"], seeds=[0, 1, 2, 3, 4], steps=2000),
        TrainConfig(lr=1e-3, batch_size=32, snr_range_db=(1.0, 6.0), eval_every=500, validation_frames=200),
        DecoderConfig(iterations=5),
        HAMMING,
    )
    table = result.divergences()
    assert table["hyper_damped"] == {"runs": 5, "diverged": 0}
    assert table["hyper"]["runs"] == 5


def test_trained_damped_decoder_is_not_worse_than_plain(tmp_path):
    trained = trained_damped_decoder(tmp_path)
    sweep = SweepConfig(snr_points_db=[3.0, 4.0, 5.0], frames_per_batch=1000, seed=7)
    result = compare(trained, DecoderConfig(iterations=5), sweep, HAMMING, frames=10_000)
    assert coding_gain_holds(result, top=2, alpha=0.05)


def test_trained_decoder_taylor_matches_exact(tmp_path):
    trained = trained_damped_decoder(tmp_path)
    taylor = trained.model_copy(update={"check_update": "taylor", "q": 50})
    sweep = SweepConfig(snr_points_db=[2.0, 4.0], frames_per_batch=1000, seed=3)
    result = compare(trained, taylor, sweep, HAMMING, frames=5000)
    agreeing = sum(p.agreeing_bits for p in result.points)
    total = sum(p.frames * p.n for p in result.points)
    assert agreeing / total >= 0.99


def test_hyper_gin_separates_cycles_from_paths():
    config = GinConfig(family="cycle-vs-path", model="hyper_gin", iterations=3, min_nodes=6, max_nodes=12, steps=300, seed=0)
    train_set, test_set = make_synthetic_dataset(config.family, (config.min_nodes, config.max_nodes), config.seed, config.num_graphs)
    model = build_model(config)
    report = train_gin(model, train_set, config, test_set)
    assert not report.diverged
    assert report.test_accuracy >= 0.95
