import itertools
import random
import re

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import edge_pairs, graph_with, partition_of
from ecomini import editscript, stdlib
from ecomini.interpreter import Interpreter, display
from ecomini.oracles import oracle_connected
from ecomini.runtime import EcoRuntimeError, EcoThrow, is_forest, support_of


def snapshot(it, g):
    return display(it.get_field(g, "vertices")), display(it.get_field(g, "edges"))


# -- Graph protocol


def test_add_edge_without_extensions(interp):
    g = graph_with(interp, 2)
    assert interp.call_method(g, "AddEdge", [0, 1]) == 0
    assert interp.call_method(g, "AddEdge", [1, 0]) == 1
    assert interp.call_method(g, "EdgeCount") == 2


@pytest.mark.parametrize("u, v", [(0, 0), (0, 9)])
def test_add_edge_rejects_bad_endpoints(interp, u, v):
    g = graph_with(interp, 2)
    with pytest.raises(EcoThrow):
        interp.call_method(g, "AddEdge", [u, v])
    assert interp.call_method(g, "EdgeCount") == 0


def test_vertex_ids_never_reused(interp):
    g = graph_with(interp, 3)
    interp.call_method(g, "DeleteVertex", [2])
    assert interp.call_method(g, "AddVertex") == 3
    assert display(interp.get_field(g, "vertices")) == "[0, 1, 3]"


def test_delete_vertex_deletes_incident_edges_through_protocol(interp):
    g = graph_with(interp, 3, [(0, 1), (1, 2), (0, 2)])
    orient = interp.new("Orientation", g)
    interp.call_method(g, "DeleteVertex", [1])
    assert edge_pairs(interp, g) == [(0, 2)]
    assert display(interp.call_method(orient, "Journal")) == \
        "[Orientation.Post_DeleteEdge 0, Orientation.Post_DeleteEdge 1]"
    assert interp.call_method(orient, "Size") == 1


def test_unknown_ids_throw(interp):
    g = graph_with(interp, 1)
    for name, args in [("DeleteVertex", [5]), ("DeleteEdge", [0]), ("Endpoints", [3])]:
        with pytest.raises(EcoThrow):
            interp.call_method(g, name, args)


# -- ConnCompSet / Connected / NotConnected


def classification(it, g):
    return it.has_classer(g, "Connected"), it.has_classer(g, "NotConnected")


def test_make_on_empty_graph(interp):
    g = graph_with(interp)
    cc = interp.call_static("ConnCompSet", "Make", [g])
    assert interp.call_method(cc, "Count") == 0
    assert classification(interp, g) == (True, False)


def test_make_on_triangle(interp):
    g = graph_with(interp, 3, [(0, 1), (1, 2), (2, 0)])
    cc = interp.call_static("ConnCompSet", "Make", [g])
    assert interp.call_method(cc, "Count") == 1
    assert classification(interp, g) == (True, False)


def test_make_on_two_isolated_vertices_then_join(interp):
    g = graph_with(interp, 2)
    cc = interp.call_static("ConnCompSet", "Make", [g])
    assert interp.call_method(cc, "Count") == 2
    assert classification(interp, g) == (False, True)
    interp.call_method(g, "AddEdge", [0, 1])
    assert interp.call_method(cc, "Count") == 1
    assert classification(interp, g) == (True, False)
    assert interp.call_method(cc, "ComponentOf", [0]) == interp.call_method(cc, "ComponentOf", [1])


def test_cutting_a_path(interp):
    g = graph_with(interp, 3, [(0, 1), (1, 2)])
    cc = interp.call_static("ConnCompSet", "Make", [g])
    interp.call_method(g, "DeleteEdge", [1])
    assert interp.call_method(cc, "Count") == 2
    assert classification(interp, g) == (False, True)


def test_second_make_is_r100(interp):
    g = graph_with(interp, 1)
    interp.call_static("ConnCompSet", "Make", [g])
    with pytest.raises(EcoRuntimeError) as info:
        interp.call_static("ConnCompSet", "Make", [g])
    assert info.value.code == "R100"


def test_component_of_dead_vertex_throws(interp):
    g = graph_with(interp, 2)
    cc = interp.call_static("ConnCompSet", "Make", [g])
    interp.call_method(g, "DeleteVertex", [1])
    with pytest.raises(EcoThrow):
        interp.call_method(cc, "ComponentOf", [1])


def test_connected_classers_cannot_be_made_directly(interp):
    g = graph_with(interp, 2)
    assert interp.call_static("Connected", "Make", [g]) is None
    interp.call_static("ConnCompSet", "Make", [g])
    assert interp.call_static("Connected", "Make", [g]) is None
    assert interp.call_static("NotConnected", "Make", [g]) is None
    assert classification(interp, g) == (False, True)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_partition_follows_oracle_on_random_scripts(library_core, seed):
    it = Interpreter(library_core)
    g = it.new("Graph")
    it.call_static("ConnCompSet", "Make", [g])
    model = editscript.GraphModel()
    for op in editscript.generate(seed, length=80, max_vertices=10):
        editscript.apply_to_graph(it, g, op)
        model.apply(op)
        expected = oracle_connected(model.edges.values(), model.vertices)
        assert partition_of(it, g) == expected
        assert classification(it, g) == ((True, False) if len(expected) <= 1 else (False, True))


# -- Planar


def test_planar_make_spot_values(interp):
    cases = [(nx.complete_graph(5), False), (nx.complete_graph(4), True), (nx.complete_bipartite_graph(3, 3), False)]
    for graph, planar in cases:
        g = graph_with(interp, graph.number_of_nodes(), list(graph.edges()))
        p = interp.call_static("Planar", "Make", [g])
        assert (p is not None) == planar
        assert interp.has_classer(g, "Planar") == planar


def test_planar_veto_completing_k5(interp):
    g = graph_with(interp, 5, list(itertools.combinations(range(5), 2))[:-1])
    assert interp.call_static("Planar", "Make", [g]) is not None
    before = snapshot(interp, g)
    with pytest.raises(EcoThrow) as info:
        interp.call_method(g, "AddEdge", [3, 4])
    assert "nonplanar" in display(info.value.value)
    assert interp.call_method(g, "EdgeCount") == 9
    assert snapshot(interp, g) == before


def test_planar_make_guard(interp):
    g = graph_with(interp, 13)
    with pytest.raises(EcoThrow):
        interp.call_static("Planar", "Make", [g])


def test_planar_make_is_idempotent(interp):
    g = graph_with(interp, 3)
    p = interp.call_static("Planar", "Make", [g])
    assert interp.call_static("Planar", "Make", [g]) is p


def test_check_delete_vertex_veto_is_atomic(library_core):
    from conftest import compile_src
    from ecomini.lowering import emit, parse_core

    src = """
    extend Graph class Pin {
        var v;
        constructor(g) { this.v = 0; }
        extend Check_DeleteVertex(v) { if (v == this.v) { throw "pinned"; } }
    }
    class Main { static method main() {} }
    """
    it = Interpreter(parse_core(emit(compile_src(src).core)))
    g = graph_with(it, 3, [(0, 1), (0, 2)])
    it.new("Pin", g)
    before = snapshot(it, g)
    with pytest.raises(EcoThrow):
        it.call_method(g, "DeleteVertex", [0])
    assert snapshot(it, g) == before


# -- Decorations and the extension tree


def test_add_vertex_runs_five_decorations(interp):
    g = graph_with(interp)
    embs = [interp.new("Embedding", g) for _ in range(3)]
    oris = [interp.new("Orientation", g) for _ in range(2)]
    interp.trace = []
    v = interp.call_method(g, "AddVertex")
    assert interp.trace == [(o, "Post_AddVertex") for o in embs + oris]
    for e in embs:
        assert display(interp.call_method(e, "Journal")) == f"[Embedding.Post_AddVertex {v}]"
    for o in oris:
        assert display(interp.call_method(o, "Journal")) == f"[Orientation.Post_AddVertex {v}]"


def test_tree_cascade_order(interp):
    g = graph_with(interp, 2)
    emb = interp.new("Embedding", g)
    shape = interp.new("OrthogonalShape", emb)
    interp.trace = []
    e = interp.call_method(g, "AddEdge", [0, 1])
    assert [(o, m) for o, m in interp.trace] == [(emb, "Post_AddEdge"), (shape, "Post_EmbedEdge")]
    assert interp.call_method(shape, "Bends", [e]) == ""
    assert display(interp.call_method(emb, "Rotation", [0])) == f"[{e}]"


def test_destroying_embedding_under_shape_is_r101(interp):
    g = graph_with(interp, 2, [(0, 1)])
    emb = interp.new("Embedding", g)
    shape = interp.new("OrthogonalShape", emb)
    with pytest.raises(EcoRuntimeError) as info:
        interp.runtime.destroy(emb)
    assert info.value.code == "R101"
    assert is_forest([g, emb, shape])
    interp.runtime.destroy(shape)
    interp.runtime.destroy(emb)
    interp.runtime.destroy(g)


def test_destroy_graph_with_labeling_is_r101(interp):
    g = graph_with(interp, 1)
    lab = interp.new("Labeling", g)
    with pytest.raises(EcoRuntimeError) as info:
        interp.runtime.destroy(g)
    assert info.value.code == "R101"
    interp.runtime.destroy(lab)
    interp.runtime.destroy(g)


def test_labeling_follows_vertex_deletion(interp):
    g = graph_with(interp, 2)
    lab = interp.new("Labeling", g)
    interp.call_method(lab, "SetLabel", [1, "b"])
    interp.call_method(lab, "SetLabel", [0, "a"])
    interp.call_method(g, "DeleteVertex", [1])
    assert interp.call_method(lab, "Label", [1]) is None
    assert interp.call_method(lab, "Count") == 1


def _invariants(it, g, emb, shape, oris, lab):
    vertices = list(it.get_field(g, "vertices"))
    edges = {e: (u, v) for e, u, v in it.get_field(g, "edges")}
    for v in vertices:
        incident = sorted(e for e, uv in edges.items() if v in uv)
        assert sorted(it.call_method(emb, "Rotation", [v])) == incident
    assert sorted(e for e, _ in it.get_field(shape, "bends")) == sorted(edges)
    for o in oris:
        assert sorted(e for e, _ in it.get_field(o, "dir")) == sorted(edges)
    assert all(v in vertices for v, _ in it.get_field(lab, "labels"))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_decorations_stay_consistent_and_independent(library_core, seed):
    it = Interpreter(library_core)
    g = it.new("Graph")
    emb = it.new("Embedding", g)
    shape = it.new("OrthogonalShape", emb)
    o1, o2 = it.new("Orientation", g), it.new("Orientation", g)
    lab = it.new("Labeling", g)
    rng = random.Random(seed)
    model = editscript.GraphModel()
    for op in editscript.generate(seed, length=60, max_vertices=8):
        editscript.apply_to_graph(it, g, op)
        model.apply(op)
        if op.kind == "AV":
            it.call_method(lab, "SetLabel", [model.vertices[-1], f"v{model.vertices[-1]}"])
        if model.edges and rng.random() < 0.5:
            e = rng.choice(sorted(model.edges))
            before = display(it.get_field(o2, "dir"))
            it.call_method(o1, "Flip", [e])
            assert display(it.get_field(o2, "dir")) == before
        _invariants(it, g, emb, shape, [o1, o2], lab)
    assert is_forest([g, emb, shape, o1, o2, lab])


# -- Classification structure


CLASSER_HEAD = re.compile(r"^\s*(?:extensible\s+)?dynamic\s+extend\s+(\w+)\s+class\s+(\w+)", re.M)
CLASS_HEAD = re.compile(r"^\s*(?:extensible\s+)?(?:dynamic\s+)?(?:extend\s+\w+\s+)?class\s+(\w+)(?:\s+extends\s+(\w+))?", re.M)


def test_classer_catalogue_and_no_crossed_products():
    corpus = "\n".join(stdlib.source(n) for n in stdlib.LIBRARY_FILES)
    classers = {name for _, name in CLASSER_HEAD.findall(corpus)}
    assert classers == {"ConnCompSet", "Connected", "NotConnected", "Planar"}
    all_classes = CLASS_HEAD.findall(corpus)
    products = {a + b for a in classers for b in classers if a != b}
    crossed = [name for name, base in all_classes if base in classers or name in products]
    assert crossed == []


def test_connected_and_planar_coexist(interp):
    g = graph_with(interp, 4, [(0, 1), (1, 2), (2, 3)])
    interp.call_static("ConnCompSet", "Make", [g])
    interp.call_static("Planar", "Make", [g])
    assert interp.has_classer(g, "Connected") and interp.has_classer(g, "Planar")
    interp.call_method(g, "AddEdge", [3, 0])
    assert interp.has_classer(g, "Connected") and interp.has_classer(g, "Planar")


def test_promotion_keeps_identities(interp):
    g = graph_with(interp, 6, [(i, (i + 1) % 6) for i in range(6)])
    edges, vertices = interp.get_field(g, "edges"), interp.get_field(g, "vertices")
    for name in ("ConnCompSet", "Planar"):
        interp.call_static(name, "Make", [g])
        assert interp.get_field(g, "edges") is edges and interp.get_field(g, "vertices") is vertices
        assert support_of(interp.get_classer(g, name)) is g
