"""Acceptance criteria 1-10, each checked at its stated tolerance.

Every criterion prints one PASS/FAIL line in the pytest terminal summary.
The module also runs standalone: ``python3 tests/test_acceptance.py``.
"""

import functools
import io
import itertools
import re
import sys
import time
from pathlib import Path

import networkx as nx
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import HOST_STUB, LIBRARY, graph_with, partition_of  # noqa: E402
from ecomini import editscript, pipeline, planarity, stdlib  # noqa: E402
from ecomini.interpreter import Interpreter, display, run_program  # noqa: E402
from ecomini.lexer import TokenKind as T  # noqa: E402
from ecomini.lexer import tokenize  # noqa: E402
from ecomini.lowering import emit, parse_core  # noqa: E402
from ecomini.diagnostics import CompileError  # noqa: E402
from ecomini.oracles import is_connected_verdict, oracle_connected, oracle_is_planar  # noqa: E402
from ecomini.runtime import EcoRuntimeError, EcoThrow  # noqa: E402

HERE = Path(__file__).parent
RESULTS = []

pytestmark = pytest.mark.acceptance


def criterion(number, title, limit=None):
    """Time the check, enforce ``limit`` seconds, and record a summary line."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            ok, note = False, ""
            try:
                note = fn(*args, **kwargs) or ""
                elapsed = time.perf_counter() - start
                if limit is not None and elapsed >= limit:
                    raise AssertionError(f"took {elapsed:.2f} s, limit {limit} s")
                ok = True
            except BaseException as exc:
                note = f"{type(exc).__name__}: {exc}".splitlines()[0]
                raise
            finally:
                elapsed = time.perf_counter() - start
                bound = f" < {limit} s" if limit is not None else ""
                verdict = "PASS" if ok else "FAIL"
                RESULTS.append(f"[{verdict}] {number:>2}. {title} ({elapsed:.2f} s{bound}) {note}".rstrip())
        return run

    return wrap


@functools.lru_cache(maxsize=None)
def library_core():
    c = pipeline.compile_sources(pipeline.read_sources(LIBRARY) + [("host.eco", HOST_STUB)], link_stdlib=False)
    return parse_core(emit(c.core))


@criterion(1, "attach/detach cost constant in k, dispatch visits exactly k", limit=5)
def test_01_complexity_contracts():
    core = library_core()
    costs = {}
    for k in (10, 100, 1000):
        it = Interpreter(core)
        g = it.new("Graph")
        labs = [it.new("Labeling", g) for _ in range(k - 1)]
        rt = it.runtime
        rt.visits = 0
        labs.append(it.new("Labeling", g))
        attach = rt.visits
        rt.visits = 0
        it.call_method(g, "AddVertex")  # dispatches Check_, Pre_ and Post_AddVertex
        dispatch = rt.visits
        rt.visits = 0
        rt.destroy(labs[k // 2])
        detach_middle = rt.visits
        rt.visits = 0
        rt.destroy(labs[-1])
        detach_tail = rt.visits
        rt.visits = 0
        rt.destroy(labs[0])
        detach_head = rt.visits
        assert dispatch == 3 * k, (k, dispatch)
        costs[k] = (attach, detach_head, detach_middle, detach_tail)
    assert len(set(costs.values())) == 1, costs
    a, h, m, t = costs[10]
    return f"attach={a} detach(head/middle/tail)={h}/{m}/{t} visits for every k"


@criterion(2, "decorations: 3 embeddings + 2 orientations, AddVertex runs 5 behaviors", limit=1)
def test_02_decoration_scenario():
    it = Interpreter(library_core())
    g = graph_with(it)
    embs = [it.new("Embedding", g) for _ in range(3)]
    oris = [it.new("Orientation", g) for _ in range(2)]
    it.trace = []
    v = it.call_method(g, "AddVertex")
    assert len(it.trace) == 5
    assert [o for o, _ in it.trace] == embs + oris
    assert len({id(o) for o, _ in it.trace}) == 5
    for e in embs:
        assert display(it.call_method(e, "Journal")) == f"[Embedding.Post_AddVertex {v}]"
    for o in oris:
        assert display(it.call_method(o, "Journal")) == f"[Orientation.Post_AddVertex {v}]"
    code, out = run_program(emit(pipeline.compile_files([stdlib.path("scenario_fig2.eco")]).core))
    assert (code, out) == (0, (HERE / "golden" / "scenario_fig2.out").read_text())
    return "5 executions on 5 distinct objects"


@criterion(3, "connectivity classers: 100 seeded scripts x 200 ops match the BFS oracle", limit=30)
def test_03_connectivity_oracle_conformance():
    core = library_core()
    mismatches = checks = 0
    for seed in range(100):
        it = Interpreter(core)
        g = it.new("Graph")
        it.call_static("ConnCompSet", "Make", [g])
        model = editscript.GraphModel()
        for op in editscript.generate(seed, length=200, max_vertices=15):
            editscript.apply_to_graph(it, g, op)
            model.apply(op)
            expected = oracle_connected(model.edges.values(), model.vertices)
            connected = it.has_classer(g, "Connected")
            not_connected = it.has_classer(g, "NotConnected")
            checks += 1
            if (
                partition_of(it, g) != expected
                or connected == not_connected
                or connected != is_connected_verdict(expected)
            ):
                mismatches += 1
    assert mismatches == 0, f"{mismatches} mismatches"
    return f"{checks} checks, 0 mismatches"


@criterion(4, "classer uniqueness: direct second attach is R100, guarded Make never is")
def test_04_classer_uniqueness():
    core = library_core()
    it = Interpreter(core)
    g = graph_with(it, 2, [(0, 1)])
    it.call_static("ConnCompSet", "Make", [g])
    it.call_static("Planar", "Make", [g])
    h = graph_with(it, 2)
    it.call_static("ConnCompSet", "Make", [h])
    direct = [(g, "ConnCompSet"), (g, "Connected"), (g, "Planar"), (h, "NotConnected")]
    for support, name in direct:
        assert it.has_classer(support, name)
        with pytest.raises(EcoRuntimeError) as info:
            it.new(name, support)
        assert info.value.code == "R100", name

    guarded_calls = 0
    for seed in range(20):
        it = Interpreter(core)
        g = it.new("Graph")
        model = editscript.GraphModel()
        for op in editscript.generate(seed, length=100, max_vertices=12):
            try:
                editscript.apply_to_graph(it, g, op)
            except EcoThrow:
                continue  # Planar vetoed the edge; the model skips it too
            model.apply(op)
            if not it.has_classer(g, "ConnCompSet"):
                it.call_static("ConnCompSet", "Make", [g])
            for name in ("Planar", "Connected", "NotConnected"):
                it.call_static(name, "Make", [g])
                guarded_calls += 1
    return f"{len(direct)} direct R100s, {guarded_calls} guarded Make calls without R100"


def _atlas_planar_graphs(max_n):
    for graph in nx.graph_atlas_g():
        if graph.number_of_nodes() <= max_n and nx.check_planarity(graph)[0]:
            yield graph


@criterion(5, "Planar veto on all graphs n <= 6 agrees with the host oracle", limit=60)
def test_05_veto_atomicity():
    core = library_core()
    graphs = attempts = vetoes = 0
    for graph in _atlas_planar_graphs(6):
        n = graph.number_of_nodes()
        it = Interpreter(core)
        g = graph_with(it, n, list(graph.edges()))
        assert it.call_static("Planar", "Make", [g]) is not None
        graphs += 1
        present = {frozenset(e) for e in graph.edges()}
        for u, v in itertools.combinations(range(n), 2):
            if frozenset((u, v)) in present:
                continue
            attempts += 1
            before = display(it.get_field(g, "edges"))
            expect_ok = oracle_is_planar(list(graph.edges()) + [(u, v)])
            try:
                e = it.call_method(g, "AddEdge", [u, v])
            except EcoThrow:
                vetoes += 1
                assert not expect_ok, (list(graph.edges()), (u, v))
                assert display(it.get_field(g, "edges")) == before
                continue
            assert expect_ok, (list(graph.edges()), (u, v))
            it.call_method(g, "DeleteEdge", [e])
    return f"{graphs} planar graphs, {attempts} AddEdge attempts, {vetoes} vetoes, 0 disagreements"


@criterion(6, "planarity spot values K5, K3,3, K4, Petersen")
def test_06_planarity_spot_values():
    def no_search(n, masks):
        raise AssertionError("Euler bound should decide K5")

    k5 = list(itertools.combinations(range(5), 2))
    assert planarity.is_planar(k5, search=no_search) is False
    cases = {
        "K3,3": (nx.complete_bipartite_graph(3, 3), False),
        "K4": (nx.complete_graph(4), True),
        "Petersen": (nx.petersen_graph(), False),
    }
    kernels = [planarity.py_kernel] + ([planarity.c_kernel] if planarity.c_kernel else [])
    for name, (graph, expected) in cases.items():
        for kernel in kernels:
            assert planarity.is_planar(list(graph.edges()), search=kernel) is expected, name
    return f"backend={planarity.BACKEND}, kernels checked={len(kernels)}"


@criterion(7, "promotion on a 1000-edge graph keeps graph and edge-list identity")
def test_07_promotion_without_copy():
    it = Interpreter(library_core())
    n = 10
    g = graph_with(it, n, [(i % n, (i + 1) % n) for i in range(1000)])
    assert it.call_method(g, "EdgeCount") == 1000
    edges, vertices = it.get_field(g, "edges"), it.get_field(g, "vertices")
    snapshot = list(edges)
    cc = it.call_static("ConnCompSet", "Make", [g])
    p = it.call_static("Planar", "Make", [g])
    assert cc is not None and p is not None
    assert it.get_classer(g, "ConnCompSet") is cc and it.get_classer(g, "Planar") is p
    assert it.has_classer(g, "Connected")
    assert it.get_field(g, "edges") is edges and it.get_field(g, "vertices") is vertices
    assert all(a is b for a, b in zip(it.get_field(g, "edges"), snapshot))
    assert it.get_field(cc, "g") is g and it.get_field(p, "g") is g
    return "graph, vertex list, edge list and edge records unchanged"


RULE_CODES = ["E010", "E011", "E012", "E013", "E014", "E015", "E016", "E020", "E021", "E022", "E023"]


@criterion(8, "each rule fixture E010-E023 yields exactly its code; corpus is clean")
def test_08_static_rule_suite():
    for code in RULE_CODES:
        with pytest.raises(CompileError) as info:
            pipeline.compile_files([HERE / "fixtures" / "rules" / f"{code}.eco"], link_stdlib=False)
        assert [d.code for d in info.value.diagnostics] == [code]
    pipeline.compile_files(stdlib.library_paths(), link_stdlib=False)
    for name in stdlib.SCENARIO_FILES:
        pipeline.compile_files([stdlib.path(name)])
    return f"{len(RULE_CODES)} fixtures"


_SURFACE = re.compile(r"\b(extensible|dynamic|extend|call_e_method)\b|\.\{")


@criterion(9, "emit is deterministic, ECO-free and round-trips for every corpus file")
def test_09_emit_determinism_and_round_trip():
    names = stdlib.LIBRARY_FILES + stdlib.SCENARIO_FILES
    for name in names:
        core = pipeline.compile_files([stdlib.path(name)]).core
        text = emit(core)
        assert text == emit(pipeline.compile_files([stdlib.path(name)]).core), name
        body = [line for line in text.splitlines() if not line.startswith("//")]
        assert not any(_SURFACE.search(line) for line in body), name
        kinds = [t.kind for t in tokenize(text)]
        assert not {T.KW_EXTENSIBLE, T.KW_DYNAMIC, T.KW_EXTEND, T.KW_CALL_E_METHOD} & set(kinds)
        assert parse_core(text) == core, name
    return f"{len(names)} files"


@criterion(10, "write barrier: support-field write exits 2 with R102, own field exits 0")
def test_10_write_barrier():
    results = {}
    for name in ("barrier_bad", "barrier_ok"):
        core = pipeline.compile_files([HERE / "fixtures" / "cli" / f"{name}.eco"], link_stdlib=False).core
        err = io.StringIO()
        code, out = run_program(emit(core), stderr=err)
        results[name] = (code, err.getvalue())
    assert results["barrier_bad"][0] == 2 and "R102" in results["barrier_bad"][1]
    assert results["barrier_ok"] == (0, "")
    return "R102 / clean exit"


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except BaseException:
                failed += 1
    print("\n".join(RESULTS))
    sys.exit(1 if failed else 0)
