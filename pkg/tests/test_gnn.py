import numpy as np
import pytest
from autodiff.checkpoint import CheckpointError
from autodiff.tape import Tape
from config.schemas import GinConfig
from gnn.graphs import (
    GraphInstance,
    collate,
    cycle_graph,
    disjoint_union,
    dump_dataset,
    from_edges,
    load_dataset,
    make_synthetic_dataset,
    path_graph,
    permute,
    triangle_count,
    wl_colors,
)
from gnn.model import GinModel, as_batch, graph_embedding, hyper_gin_step
from gnn.trainer import build_model, train_gin

KINDS = ("gin", "hyper_gin", "hyper_gin_undamped")


def embedding(model, graph):
    tape = Tape(record=False)
    batch = as_batch(graph)
    _, states = model.forward(tape, model.store.bind(tape), batch)
    return graph_embedding(batch, states).data


def two_triangles():
    return from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])


@pytest.mark.parametrize("kind", KINDS)
def test_scores_are_permutation_invariant(kind):
    model = GinModel(kind, hidden=6, iterations=2, f_hidden=5, g_hidden=4, seed=1)
    graph = from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (2, 5)])
    perm = np.random.default_rng(0).permutation(7)
    np.testing.assert_allclose(model.scores(permute(graph, perm)), model.scores(graph), atol=1e-9)


def test_zero_damping_equals_undamped_model():
    damped = GinModel("hyper_gin", hidden=6, iterations=3, f_hidden=5, g_hidden=4, seed=2)
    damped.store.params["damping"][:] = 0.0
    undamped = GinModel("hyper_gin_undamped", hidden=6, iterations=3, f_hidden=5, g_hidden=4, store=damped.store)
    graph = cycle_graph(5)
    np.testing.assert_allclose(undamped.scores(graph), damped.scores(graph), atol=1e-12)


def test_full_damping_repeats_the_first_step():
    model = GinModel("hyper_gin", hidden=6, iterations=3, f_hidden=5, g_hidden=4, seed=3)
    model.store.params["damping"][:] = 1.0
    states = model.node_states(path_graph(6))
    np.testing.assert_allclose(states[2], states[1], atol=1e-12)
    np.testing.assert_allclose(states[3], states[1], atol=1e-12)


def test_hyper_step_requires_positive_iteration():
    model = GinModel("hyper_gin", hidden=4, iterations=1, f_hidden=3, g_hidden=3)
    tape = Tape(record=False)
    params = model.store.bind(tape)
    h = tape.constant(np.zeros((3, 4)))
    with pytest.raises(ValueError):
        hyper_gin_step(model, params, path_graph(3), h, h, 0)


@pytest.mark.parametrize("kind", KINDS)
def test_disjoint_copy_doubles_embedding(kind):
    model = GinModel(kind, hidden=5, iterations=2, f_hidden=4, g_hidden=3, seed=4)
    graph = from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
    np.testing.assert_allclose(embedding(model, disjoint_union(graph, graph)), 2 * embedding(model, graph), atol=1e-9)


def test_wl_equivalent_graphs_get_equal_scores():
    hexagon, triangles = cycle_graph(6), two_triangles()
    assert wl_colors(hexagon, 3) == wl_colors(triangles, 3)
    assert wl_colors(cycle_graph(6), 2) != wl_colors(path_graph(6), 2)
    for kind in KINDS:
        model = GinModel(kind, hidden=5, iterations=2, f_hidden=4, g_hidden=3, seed=5)
        np.testing.assert_allclose(model.scores(triangles), model.scores(hexagon), atol=1e-9)


def test_batch_scores_match_single_graph_scores():
    model = GinModel("hyper_gin", hidden=5, iterations=2, f_hidden=4, g_hidden=3, seed=6)
    graphs = [cycle_graph(4), path_graph(5), two_triangles()]
    batched = model.scores(graphs)
    for i, g in enumerate(graphs):
        np.testing.assert_allclose(batched[i], model.scores(g)[0], atol=1e-9)


def test_fixed_eps_has_no_parameters():
    model = GinModel("gin", hidden=4, iterations=2, learn_eps=False)
    assert not any(name.startswith("eps") for name in model.store.names())
    assert "damping" not in model.store
    with pytest.raises(ValueError):
        GinModel("gat")


def test_graph_validation():
    with pytest.raises(ValueError):
        GraphInstance(np.array([[0, 1], [0, 0]]), np.ones((2, 1)))
    with pytest.raises(ValueError):
        GraphInstance(np.array([[1, 0], [0, 0]]), np.ones((2, 1)))
    with pytest.raises(ValueError):
        GraphInstance(np.zeros((2, 2)), np.ones((3, 1)))
    with pytest.raises(ValueError):
        collate([])


def test_synthetic_dataset_is_deterministic_and_stratified():
    train_a, test_a = make_synthetic_dataset("triangle-count-parity", (6, 9), seed=7, num_graphs=20)
    train_b, test_b = make_synthetic_dataset("triangle-count-parity", (6, 9), seed=7, num_graphs=20)
    assert len(train_a) == 16 and len(test_a) == 4
    assert sum(g.label for g in train_a) == 8
    for a, b in zip(train_a + test_a, train_b + test_b):
        np.testing.assert_array_equal(a.adjacency, b.adjacency)
    assert all(triangle_count(g) % 2 == g.label for g in train_a + test_a)
    with pytest.raises(ValueError):
        make_synthetic_dataset("caminhos", seed=0)


def test_dataset_file_round_trip(tmp_path):
    train, _ = make_synthetic_dataset("density-pair", (5, 7), seed=1, num_graphs=6)
    path = dump_dataset(train, str(tmp_path / "dados" / "treino.txt"), family="density-pair")
    family, loaded = load_dataset(path)
    assert family == "density-pair"
    assert len(loaded) == len(train)
    for a, b in zip(train, loaded):
        np.testing.assert_array_equal(a.adjacency, b.adjacency)
        np.testing.assert_array_equal(a.features, b.features)
        assert a.label == b.label


def test_dataset_file_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_dataset(str(tmp_path / "nada.txt"))
    bad = tmp_path / "ruim.txt"
    bad.write_text("dataset custom 1\ngraph 3 2 1 0\n0 1\n", encoding="utf-8")
    with pytest.raises(ValueError, match="linha 2"):
        load_dataset(str(bad))


def test_gin_eval_requires_checkpoint(tmp_path):
    with pytest.raises(CheckpointError):
        build_model(GinConfig(), require_checkpoint=True)
    with pytest.raises(CheckpointError):
        build_model(GinConfig(checkpoint=str(tmp_path / "nada.npz")), require_checkpoint=True)


def test_training_then_reloading_checkpoint(tmp_path):
    config = GinConfig(
        model="hyper_gin", hidden=4, iterations=2, f_hidden=4, g_hidden=3,
        steps=4, batch_size=6, num_graphs=12, min_nodes=4, max_nodes=6,
        checkpoint=str(tmp_path / "gin.npz"),
    )
    train, test = make_synthetic_dataset(config.family, (config.min_nodes, config.max_nodes), config.seed, config.num_graphs)
    model = build_model(config)
    report = train_gin(model, train, config, test)
    assert len(report.losses) == 4
    assert all(0.0 <= c <= 1.0 for c in report.damping)
    assert 0.0 <= report.test_accuracy <= 1.0

    reloaded = build_model(config, require_checkpoint=True)
    np.testing.assert_allclose(reloaded.scores(test), model.scores(test), atol=1e-12)


def test_hyper_kinds_only_learn_the_first_eps():
    for kind in ("hyper_gin", "hyper_gin_undamped"):
        model = GinModel(kind, hidden=4, iterations=3, f_hidden=3, g_hidden=3)
        assert [name for name in model.store.names() if name.startswith("eps")] == ["eps0"]
    gin = GinModel("gin", hidden=4, iterations=3)
    assert [name for name in gin.store.names() if name.startswith("eps")] == ["eps0", "eps1", "eps2", "eps3"]
