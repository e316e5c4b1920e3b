import pytest

from ecomini import pipeline, stdlib
from ecomini.interpreter import Interpreter, run_core
from ecomini.lowering import emit, parse_core

LIBRARY = [str(p) for p in stdlib.library_paths()]

# Host-driven tests need a Main class; the library itself is linked on demand.
HOST_STUB = "class Main { static method main() { var g = new Graph(); } }"


def compile_src(src, file="test.eco", link_stdlib=True):
    return pipeline.compile_sources([(file, src)], link_stdlib)


def run_src(src, link_stdlib=True, max_steps=10**7, via_text=True):
    """Compile and run ``Main.main``; returns (exit code, stdout, stderr)."""
    core = compile_src(src, link_stdlib=link_stdlib).core
    if via_text:
        core = parse_core(emit(core))
    return run_core(core, max_steps=max_steps)


@pytest.fixture(scope="session")
def library_core():
    c = pipeline.compile_sources(
        pipeline.read_sources(LIBRARY) + [("host.eco", HOST_STUB)], link_stdlib=False
    )
    return parse_core(emit(c.core))


@pytest.fixture
def interp(library_core):
    return Interpreter(library_core)


def graph_with(interp, n=0, edges=()):
    g = interp.new("Graph")
    for _ in range(n):
        interp.call_method(g, "AddVertex")
    for u, v in edges:
        interp.call_method(g, "AddEdge", [u, v])
    return g


def edge_pairs(interp, g):
    return [(u, v) for _, u, v in interp.get_field(g, "edges")]


def partition_of(interp, g):
    cc = interp.get_classer(g, "ConnCompSet")
    blocks = {}
    for v, cid in interp.get_field(cc, "comp"):
        blocks.setdefault(cid, set()).add(v)
    return frozenset(frozenset(b) for b in blocks.values())


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
