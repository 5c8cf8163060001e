import numpy as np
import pytest
from autodiff.tape import Tape
from codes.parity_check import enumerate_codewords
from decoders.bp import (
    ATANH_CLIP,
    BPDecoder,
    DecodeConfig,
    MessageState,
    check_to_var,
    decode,
    hard_decision,
    initial_state,
    marginalize,
    var_to_check,
)
from decoders.tanner import build


def exact_posterior_llr(H, llr: np.ndarray) -> np.ndarray:
    """log P(c_v=0|y) - log P(c_v=1|y) por enumeração das palavras-código"""
    words = np.array(sorted(enumerate_codewords(H)), dtype=np.float64)
    log_weights = -(words @ llr)
    out = np.zeros(H.num_vars)
    for v in range(H.num_vars):
        zero = np.logaddexp.reduce(log_weights[words[:, v] == 0])
        one = np.logaddexp.reduce(log_weights[words[:, v] == 1])
        out[v] = zero - one
    return out


def test_bp_marginals_equal_exact_posteriors_on_trees(tree_code):
    graph = build(tree_code)
    config = DecodeConfig(iterations=12, early_stop=False)
    rng = np.random.default_rng(0)
    for _ in range(5):
        llr = rng.normal(loc=0.3, scale=1.0, size=tree_code.num_vars)
        result = decode(graph, llr, config)
        np.testing.assert_allclose(result.marginals, exact_posterior_llr(tree_code, llr), atol=1e-9)


def test_zero_state_marginal_is_channel_llr(hamming_graph):
    tape = Tape(record=False)
    llr = tape.constant(np.arange(7.0)[None, :])
    np.testing.assert_array_equal(marginalize(hamming_graph, llr, initial_state(tape, hamming_graph, 1)).data, llr.data)


def test_repetition_reinforces_noiseless_all_zero(repetition_graph):
    llr = np.full(3, 2.0)
    result = decode(repetition_graph, llr, DecodeConfig(iterations=1, early_stop=False))
    assert np.all(result.marginals > llr)
    np.testing.assert_array_equal(result.bits, [0, 0, 0])


def test_repetition_majority_corrects_one_flip(repetition_graph):
    result = decode(repetition_graph, np.array([1.0, -0.5, 1.0]), DecodeConfig(iterations=2))
    np.testing.assert_array_equal(result.bits, [0, 0, 0])
    assert result.converged


def test_odd_update_single_neighbour_is_tanh_half_llr(repetition_graph):
    tape = Tape(record=False)
    llr = tape.constant(np.array([[0.8, -1.2, 2.0]]))
    state = var_to_check(repetition_graph, llr, initial_state(tape, repetition_graph, 1))
    np.testing.assert_allclose(state.x.data[0], np.tanh(0.5 * np.array([0.8, -1.2, -1.2, 2.0])))


def test_check_update_closed_forms(repetition_graph):
    tape = Tape(record=False)
    odd = MessageState(tape.constant(np.full((1, 4), 0.5)), parity=1)
    exact = check_to_var(repetition_graph, odd, DecodeConfig()).x.data
    np.testing.assert_allclose(exact, np.log(3.0))
    taylor = check_to_var(repetition_graph, odd, DecodeConfig(check_update="taylor", q=2)).x.data
    np.testing.assert_allclose(taylor, 2 * 0.5479166666666667)


def test_zero_in_extrinsic_set_annihilates_message(hamming_graph):
    tape = Tape(record=False)
    x = np.full((1, hamming_graph.num_edges), 0.7)
    x[0, 0] = 0.0
    out = check_to_var(hamming_graph, MessageState(tape.constant(x), parity=1), DecodeConfig()).x.data[0]
    for e in range(hamming_graph.num_edges):
        if 0 in hamming_graph.extrinsic_check[e]:
            assert out[e] == 0.0


def test_saturation_clip_keeps_messages_finite(hamming_graph):
    result = decode(hamming_graph, np.full(7, 80.0), DecodeConfig(iterations=3, early_stop=False))
    assert np.isfinite(result.marginals).all()
    tape = Tape(record=False)
    odd = MessageState(tape.constant(np.ones((1, hamming_graph.num_edges))), parity=1)
    out = check_to_var(hamming_graph, odd, DecodeConfig()).x.data
    np.testing.assert_allclose(out, 2 * np.arctanh(ATANH_CLIP))


def test_parity_alternation_is_enforced(hamming_graph):
    tape = Tape(record=False)
    even = initial_state(tape, hamming_graph, 1)
    with pytest.raises(ValueError):
        check_to_var(hamming_graph, even, DecodeConfig())
    odd = var_to_check(hamming_graph, tape.constant(np.zeros((1, 7))), even)
    with pytest.raises(ValueError):
        var_to_check(hamming_graph, tape.constant(np.zeros((1, 7))), odd)
    with pytest.raises(ValueError):
        marginalize(hamming_graph, tape.constant(np.zeros((1, 7))), odd)


def test_hard_decision_tie_goes_to_zero():
    np.testing.assert_array_equal(hard_decision(np.array([0.0, -0.0, -1e-12, 3.0])), [0, 0, 1, 0])


def test_early_stop_freezes_decisions(hamming_graph):
    llr = np.full(7, 4.0)
    result = decode(hamming_graph, llr, DecodeConfig(iterations=5))
    assert result.converged and result.iterations == 1
    full = decode(hamming_graph, llr, DecodeConfig(iterations=5, early_stop=False))
    assert full.iterations == 5


def test_batch_matches_single_frames(hamming_graph):
    llr = np.random.default_rng(2).normal(1.0, 1.5, size=(6, 7))
    config = DecodeConfig(iterations=4)
    batch = decode(hamming_graph, llr, config)
    for i in range(6):
        single = decode(hamming_graph, llr[i], config)
        np.testing.assert_array_equal(single.bits, batch.bits[i])
        np.testing.assert_allclose(single.marginals, batch.marginals[i])


def test_hamming_corrects_every_single_error(hamming_graph):
    for j in range(7):
        llr = np.full(7, 3.0)
        llr[j] = -1.0
        result = decode(hamming_graph, llr, DecodeConfig(iterations=5))
        np.testing.assert_array_equal(result.bits, np.zeros(7))


def test_unit_weights_equal_plain_bp(hamming_graph):
    llr = np.random.default_rng(4).normal(1.0, 1.5, size=(8, 7))
    config = DecodeConfig(iterations=3, early_stop=False)
    plain = decode(hamming_graph, llr, config)
    weighted = decode(hamming_graph, llr, config, weights=np.ones(hamming_graph.num_edges))
    np.testing.assert_allclose(weighted.marginals, plain.marginals, atol=1e-12)


def test_weighted_decoder_initializes_unit_weights(hamming_graph):
    dec = BPDecoder(hamming_graph, DecodeConfig(variant="weighted"))
    np.testing.assert_array_equal(dec.store["w"], np.ones(12))
    with pytest.raises(ValueError):
        BPDecoder(hamming_graph, DecodeConfig(variant="hyper"))


def test_invalid_llr_rejected(hamming_graph):
    with pytest.raises(ValueError):
        decode(hamming_graph, np.zeros(6), DecodeConfig())
    with pytest.raises(ValueError):
        decode(hamming_graph, np.array([np.nan] * 7), DecodeConfig())


def test_taylor_degree_is_required_only_for_taylor():
    with pytest.raises(ValueError):
        DecodeConfig(check_update="taylor")
    with pytest.raises(ValueError):
        DecodeConfig(q=3)


def test_large_taylor_degree_tracks_exact_decoder(hamming_graph):
    llr = np.random.default_rng(9).normal(1.0, 0.8, size=(20, 7))
    exact = decode(hamming_graph, llr, DecodeConfig(iterations=3, early_stop=False))
    taylor = decode(hamming_graph, llr, DecodeConfig(iterations=3, early_stop=False, check_update="taylor", q=60))
    assert np.mean(exact.bits == taylor.bits) >= 0.99


def test_decoding_is_symmetric_in_the_codeword(hamming, hamming_graph):
    rng = np.random.default_rng(5)
    words = np.array(sorted(enumerate_codewords(hamming)), dtype=np.uint8)
    llr = rng.normal(loc=1.5, scale=1.5, size=(50, 7))
    codeword = words[rng.integers(len(words), size=50)]
    config = DecodeConfig(iterations=5)
    reference = decode(hamming_graph, llr, config)
    flipped = decode(hamming_graph, llr * (1.0 - 2.0 * codeword), config)
    np.testing.assert_array_equal(flipped.bits, reference.bits ^ codeword)
