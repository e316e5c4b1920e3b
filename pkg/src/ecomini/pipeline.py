"""Front half of the toolchain: read sources, parse, link the library, analyze, lower.

Several input files are concatenated in argument order into one namespace.
Classes that the inputs use but do not define are pulled in from the bundled
graph library, so a scenario file can be compiled on its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from . import nodes as N
from . import stdlib
from .analysis import SymbolTable, check_eco_rules, resolve
from .diagnostics import CompileError
from .lowering import CoreProgram, lower
from .parser import parse_source


@dataclass
class Compiled:
    module: N.Module
    table: SymbolTable
    core: CoreProgram
    files: list[str]


def referenced_classes(module: N.Module) -> set[str]:
    """Class names a module mentions; over-approximate, since locals are plain Names too."""
    out = set()
    for node in N.walk(module):
        if isinstance(node, N.ClassDecl):
            out.update(n for n in (node.base, node.extend_target) if n)
        elif isinstance(node, N.New):
            out.add(node.class_name)
        elif isinstance(node, N.Name):
            out.add(node.ident)
        elif isinstance(node, (N.ClasserTest, N.ClasserAccess)):
            out.add(node.classer)
    return out


@lru_cache(maxsize=None)
def _library_module(name: str) -> N.Module:
    return parse_source(stdlib.source(name), str(stdlib.path(name)))


def link_library(module: N.Module) -> list[str]:
    """Library files (in library order) needed to define classes ``module`` uses."""
    defined = {c.name for c in module.classes}
    providers = {}
    for name in stdlib.LIBRARY_FILES:
        for decl in _library_module(name).classes:
            providers.setdefault(decl.name, name)
    chosen: set[str] = set()
    pending = referenced_classes(module)
    while pending:
        name = pending.pop()
        lib = providers.get(name)
        if name in defined or lib is None or lib in chosen:
            continue
        chosen.add(lib)
        lib_module = _library_module(lib)
        defined.update(c.name for c in lib_module.classes)
        pending |= referenced_classes(lib_module)
    return [n for n in stdlib.LIBRARY_FILES if n in chosen]


def parse_files(sources: list[tuple[str, str]]) -> N.Module:
    """Parse (file name, text) pairs and concatenate their classes."""
    classes, diags = [], []
    for file, text in sources:
        try:
            classes.extend(parse_source(text, file).classes)
        except CompileError as exc:
            diags.extend(exc.diagnostics)
    if diags:
        raise CompileError(diags)
    return N.Module(classes)


def compile_sources(sources: list[tuple[str, str]], link_stdlib: bool = True) -> Compiled:
    """Parse, link, analyze and lower; raises CompileError with diagnostics in file order."""
    files = [f for f, _ in sources]
    try:
        module = parse_files(sources)
        if link_stdlib:
            libs = link_library(module)
            if libs:
                lib_classes = [c for n in libs for c in _library_module(n).classes]
                module = N.Module(lib_classes + module.classes)
                files = [str(stdlib.path(n)) for n in libs] + files
        table = resolve(module)
        diags = check_eco_rules(module, table)
        if diags:
            raise CompileError(diags)
    except CompileError as exc:
        raise CompileError(exc.diagnostics, files) from None
    return Compiled(module, table, lower(module, table), files)


def read_sources(paths: list[str | Path]) -> list[tuple[str, str]]:
    return [(str(p), Path(p).read_text(encoding="utf-8")) for p in paths]


def compile_files(paths: list[str | Path], link_stdlib: bool = True) -> Compiled:
    return compile_sources(read_sources(paths), link_stdlib)
