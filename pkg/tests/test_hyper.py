import numpy as np
import pytest
from autodiff.nn import MlpSpec
from autodiff.optim import ParameterStore
from autodiff.tape import Tape
from decoders.bp import DecodeConfig, decode
from decoders.hyper import HyperDecoder, clip_damping, compute_x0, hyper_decode


def bp_mimic(graph, variant="hyper", damping=0.3, theta_scope="edge"):
    """f constante (W=0, b=½) e g = tanh(θ·[l_v, u]): reproduz o passo ímpar do BP"""
    width = graph.ext_var_table.shape[1]
    g_spec = MlpSpec.uniform([width + 1, 1], "tanh")
    f_spec = MlpSpec.uniform([width, width + 1], "linear", bias=True)
    store = ParameterStore()
    store.add_group("f", {"W0": np.zeros((width, width + 1)), "b0": np.full(width + 1, 0.5)})
    store.add("damping", [damping], bounds=(0.0, 1.0))
    config = DecodeConfig(variant=variant, iterations=4, early_stop=False)
    return HyperDecoder(graph, config, store, f_spec=f_spec, g_spec=g_spec, theta_scope=theta_scope)


def random_decoder(graph, variant="hyper_damped", seed=3):
    return HyperDecoder(graph, DecodeConfig(variant=variant, iterations=3, early_stop=False), seed=seed, f_hidden=8, g_hidden=4)


def test_identity_hypernetwork_reproduces_plain_bp(hamming_graph):
    llr = np.random.default_rng(0).normal(0.5, 1.0, size=(5, 7))
    plain = decode(hamming_graph, llr, DecodeConfig(iterations=4, early_stop=False))
    hyper = bp_mimic(hamming_graph).decode(llr)
    np.testing.assert_allclose(hyper.marginals, plain.marginals, atol=1e-9)
    np.testing.assert_array_equal(hyper.bits, plain.bits)


def test_shared_theta_matches_per_edge_theta_for_constant_f(hamming_graph):
    llr = np.random.default_rng(1).normal(0.5, 2.0, size=(3, 7))
    edge = bp_mimic(hamming_graph, theta_scope="edge").decode(llr)
    shared = bp_mimic(hamming_graph, theta_scope="iteration").decode(llr)
    np.testing.assert_allclose(shared.marginals, edge.marginals, atol=1e-12)


def test_zero_damping_equals_undamped(hamming_graph):
    dec = random_decoder(hamming_graph)
    dec.store.params["damping"][:] = 0.0
    llr = np.random.default_rng(2).normal(1.0, 1.0, size=(4, 7))
    damped = hyper_decode(dec, llr, damped=True)
    undamped = hyper_decode(dec, llr, damped=False)
    np.testing.assert_allclose(damped.marginals, undamped.marginals, atol=1e-12)


def test_full_damping_freezes_the_odd_input(hamming_graph):
    dec = random_decoder(hamming_graph)
    dec.store.params["damping"][:] = 1.0
    tape = Tape(record=False)
    llr = tape.constant(np.random.default_rng(3).normal(1.0, 1.0, size=(2, 7)))
    marginals = dec.unroll(tape, dec.store.bind(tape), llr, iterations=4)
    for later in marginals[1:]:
        np.testing.assert_allclose(later.data, marginals[0].data, atol=1e-12)


def test_random_hypernetwork_outputs_are_finite(hamming_graph):
    llr = np.random.default_rng(4).normal(1.0, 3.0, size=(6, 7))
    for variant in ("hyper", "hyper_damped"):
        result = random_decoder(hamming_graph, variant).decode(llr)
        assert result.marginals.shape == (6, 7)
        assert np.isfinite(result.marginals).all()


def test_default_networks_follow_graph_degrees(hamming_graph):
    dec = HyperDecoder(hamming_graph, DecodeConfig(variant="hyper"))
    assert dec.g_spec.widths == (3, 16, 1)
    assert dec.g_spec.num_params() == 64
    assert dec.f_spec.widths == (2, 32, 32, 32, 64)
    assert 0.0 <= dec.damping <= 1.0


def test_initialization_is_seeded(hamming_graph):
    a, b = random_decoder(hamming_graph, seed=5), random_decoder(hamming_graph, seed=5)
    for name in a.store.names():
        np.testing.assert_array_equal(a.store[name], b.store[name])


def test_clip_damping():
    for raw, expected in ((1.7, 1.0), (-0.2, 0.0), (0.42, 0.42)):
        store = ParameterStore()
        store.add("damping", [0.5])
        store.params["damping"][:] = raw
        assert clip_damping(store)["damping"][0] == pytest.approx(expected)


def test_mismatched_network_widths_are_rejected(hamming_graph):
    config = DecodeConfig(variant="hyper")
    g_spec = MlpSpec.uniform([3, 1], "tanh")
    with pytest.raises(ValueError):
        HyperDecoder(hamming_graph, config, f_spec=MlpSpec.uniform([2, 5]), g_spec=g_spec)
    with pytest.raises(ValueError):
        HyperDecoder(hamming_graph, config, g_spec=MlpSpec.uniform([4, 1], "tanh"))
    with pytest.raises(ValueError):
        HyperDecoder(hamming_graph, DecodeConfig(variant="plain"))


def test_x0_modes(hamming_graph):
    tape = Tape(record=False)
    raw = np.array([[1.0, -2.0, 0.5, 0.0, 3.0, -1.0, 2.0]])
    half = compute_x0(hamming_graph, tape.constant(raw)).data
    np.testing.assert_allclose(half[0], np.tanh(0.5 * raw[0, hamming_graph.edge_var]))
    with pytest.raises(ValueError):
        compute_x0(hamming_graph, tape.constant(raw), mode="pair")
    pair = compute_x0(hamming_graph, tape.constant(raw), mode="pair", config=DecodeConfig()).data
    assert pair.shape == (1, hamming_graph.num_edges)
    assert np.isfinite(pair).all()
