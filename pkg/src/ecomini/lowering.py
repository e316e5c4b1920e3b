"""Desugaring of ECO constructs into core ECO-mini, and the canonical core printer."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from . import nodes as N
from .analysis import SymbolTable
from .diagnostics import E_SYNTAX, CompileError, Diagnostic
from .lexer import encode_string
from .parser import parse_source

HEADER = "// eco-core v1"
CORE_SUFFIX = ".core.eco"
META_PREFIX = "//#eco-meta "
KIND_PREFIX = "//#eco-kind "
REGISTRY_FIELD = "__eco_registry"
SUPPORT_FIELD = "__eco_support"
BEHAVIOR_PREFIX = "__eco_b_"
_KINDS = ("support", "extender", "classer")


@dataclass
class ClassKind:
    """Runtime-relevant ECO role of a class, kept after the flags are erased."""

    name: str
    kind: str  # support | extender | classer
    support: str | None = None


@dataclass
class CoreProgram:
    module: N.Module
    behaviors: list = field(default_factory=list)  # (class, E-method) pairs, declaration order
    kinds: list = field(default_factory=list)  # ClassKind, declaration order


# ------------------------------------------------------------------- lowering


class _Lowerer:
    def expr(self, e):
        if isinstance(e, N.CallEMethod):
            args = [self.expr(a) for a in e.args]
            return N.Call("eco_dispatch", [N.This(), N.StrLit(e.name), N.ListLit(args)], pos=e.pos)
        if isinstance(e, N.ClasserTest):
            return N.Call("eco_has", [self.expr(e.obj), N.StrLit(e.classer)], pos=e.pos)
        if isinstance(e, N.ClasserAccess):
            target = N.Call("eco_get", [self.expr(e.obj), N.StrLit(e.classer)], pos=e.pos)
            return N.MethodCall(target, e.method, [self.expr(a) for a in e.args], pos=e.pos)
        if isinstance(e, N.ListLit):
            return N.ListLit([self.expr(a) for a in e.items], pos=e.pos)
        if isinstance(e, N.New):
            return N.New(e.class_name, [self.expr(a) for a in e.args], pos=e.pos)
        if isinstance(e, N.FieldGet):
            return N.FieldGet(self.expr(e.obj), e.name, pos=e.pos)
        if isinstance(e, N.MethodCall):
            return N.MethodCall(self.expr(e.obj), e.name, [self.expr(a) for a in e.args], pos=e.pos)
        if isinstance(e, N.Call):
            return N.Call(e.name, [self.expr(a) for a in e.args], pos=e.pos)
        if isinstance(e, N.Index):
            return N.Index(self.expr(e.obj), self.expr(e.index), pos=e.pos)
        if isinstance(e, N.Binary):
            return N.Binary(e.op, self.expr(e.left), self.expr(e.right), pos=e.pos)
        if isinstance(e, N.Unary):
            return N.Unary(e.op, self.expr(e.operand), pos=e.pos)
        return copy.copy(e)

    def block(self, b: N.Block, prologue=()) -> N.Block:
        return N.Block(list(prologue) + [self.stmt(s) for s in b.stmts], pos=b.pos)

    def stmt(self, s):
        if isinstance(s, N.VarStmt):
            return N.VarStmt(s.name, self.expr(s.init), pos=s.pos)
        if isinstance(s, N.AssignStmt):
            return N.AssignStmt(self.expr(s.target), self.expr(s.value), pos=s.pos)
        if isinstance(s, N.IfStmt):
            orelse = self.block(s.orelse) if s.orelse is not None else None
            return N.IfStmt(self.expr(s.cond), self.block(s.then), orelse, pos=s.pos)
        if isinstance(s, N.WhileStmt):
            return N.WhileStmt(self.expr(s.cond), self.block(s.body), pos=s.pos)
        if isinstance(s, N.ReturnStmt):
            return N.ReturnStmt(self.expr(s.value) if s.value is not None else None, pos=s.pos)
        if isinstance(s, N.ThrowStmt):
            return N.ThrowStmt(self.expr(s.value), pos=s.pos)
        if isinstance(s, N.TryStmt):
            return N.TryStmt(self.block(s.body), s.var, self.block(s.handler), pos=s.pos)
        if isinstance(s, N.DeleteStmt):
            return N.ExprStmt(N.Call("eco_destroy", [self.expr(s.target)], pos=s.pos), pos=s.pos)
        return N.ExprStmt(self.expr(s.expr), pos=s.pos)

    def class_decl(self, decl: N.ClassDecl, table: SymbolTable, core: CoreProgram) -> N.ClassDecl:
        members = []
        is_support = decl.is_extensible
        is_ext = decl.extend_target is not None
        if is_support:
            members.append(N.FieldDecl(REGISTRY_FIELD))
        if is_ext:
            members.append(N.FieldDecl(SUPPORT_FIELD))
            core.kinds.append(ClassKind(decl.name, "classer" if decl.is_classer else "extender", decl.extend_target))
        if is_support:
            core.kinds.append(ClassKind(decl.name, "support"))

        for m in decl.members:
            if isinstance(m, N.EMethodSigDecl):
                continue
            if isinstance(m, N.EMethodBehaviorDecl):
                core.behaviors.append((decl.name, m.name))
                members.append(N.MethodDecl(BEHAVIOR_PREFIX + m.name, list(m.params), self.block(m.body), False, pos=m.pos))
            elif isinstance(m, N.CtorDecl):
                prologue = ()
                if is_ext:
                    attach = N.Call(
                        "eco_attach",
                        [N.Name(m.params[0]), N.This(), N.StrLit(decl.name), N.BoolLit(decl.is_classer)],
                    )
                    prologue = (N.ExprStmt(attach),)
                members.append(N.CtorDecl(list(m.params), self.block(m.body, prologue), m.is_private, pos=m.pos))
            elif isinstance(m, N.MethodDecl):
                members.append(N.MethodDecl(m.name, list(m.params), self.block(m.body), m.is_static, pos=m.pos))
            else:
                members.append(N.FieldDecl(m.name, pos=m.pos))
        return N.ClassDecl(decl.name, members, decl.base, pos=decl.pos)


def lower(module: N.Module, table: SymbolTable) -> CoreProgram:
    """Rewrite an analyzed module into the ECO-free core language."""
    core = CoreProgram(N.Module([], pos=module.pos))
    lowerer = _Lowerer()
    for decl in module.classes:
        core.module.classes.append(lowerer.class_decl(decl, table, core))
    return core


# ------------------------------------------------------------------- printing

_PREC = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 4, "<=": 4, ">": 4, ">=": 4, "+": 5, "-": 5, "*": 6, "/": 6, "%": 6}
_UNARY_PREC = 7
_POSTFIX_PREC = 8


def _prec(e) -> int:
    if isinstance(e, N.Binary):
        return _PREC[e.op]
    if isinstance(e, N.Unary):
        return _UNARY_PREC
    return _POSTFIX_PREC + 1


def format_expr(e) -> str:
    if isinstance(e, N.IntLit):
        return str(e.value)
    if isinstance(e, N.StrLit):
        return encode_string(e.value)
    if isinstance(e, N.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, N.NullLit):
        return "null"
    if isinstance(e, N.This):
        return "this"
    if isinstance(e, N.Name):
        return e.ident
    if isinstance(e, N.ListLit):
        return "[" + ", ".join(format_expr(a) for a in e.items) + "]"
    if isinstance(e, N.New):
        return f"new {e.class_name}({_args(e.args)})"
    if isinstance(e, N.Call):
        return f"{e.name}({_args(e.args)})"
    if isinstance(e, N.CallEMethod):
        return "call_e_method(" + ", ".join([e.name] + [format_expr(a) for a in e.args]) + ")"
    if isinstance(e, N.FieldGet):
        return f"{_operand(e.obj)}.{e.name}"
    if isinstance(e, N.MethodCall):
        return f"{_operand(e.obj)}.{e.name}({_args(e.args)})"
    if isinstance(e, N.ClasserTest):
        return f"{_operand(e.obj)}.{{{e.classer}}}"
    if isinstance(e, N.ClasserAccess):
        return f"{_operand(e.obj)}.{{{e.classer}}}.{e.method}({_args(e.args)})"
    if isinstance(e, N.Index):
        return f"{_operand(e.obj)}[{format_expr(e.index)}]"
    if isinstance(e, N.Unary):
        inner = format_expr(e.operand)
        if _prec(e.operand) < _UNARY_PREC:
            inner = f"({inner})"
        return e.op + inner
    if isinstance(e, N.Binary):
        p = _PREC[e.op]
        left = format_expr(e.left)
        right = format_expr(e.right)
        if _prec(e.left) < p:
            left = f"({left})"
        if _prec(e.right) <= p:
            right = f"({right})"
        return f"{left} {e.op} {right}"
    raise TypeError(f"cannot format {type(e).__name__}")


def _operand(e) -> str:
    text = format_expr(e)
    return f"({text})" if _prec(e) <= _POSTFIX_PREC - 1 else text


def _args(args) -> str:
    return ", ".join(format_expr(a) for a in args)


class _Printer:
    def __init__(self):
        self.lines: list[str] = []

    def line(self, depth: int, text: str):
        self.lines.append("    " * depth + text)

    def block(self, depth: int, head: str, block: N.Block, tail: str = ""):
        if not block.stmts:
            self.line(depth, head + " {}" + tail)
            return
        self.line(depth, head + " {")
        for s in block.stmts:
            self.stmt(depth + 1, s)
        self.line(depth, "}" + tail)

    def stmt(self, d: int, s):
        if isinstance(s, N.VarStmt):
            self.line(d, f"var {s.name} = {format_expr(s.init)};")
        elif isinstance(s, N.AssignStmt):
            self.line(d, f"{format_expr(s.target)} = {format_expr(s.value)};")
        elif isinstance(s, N.IfStmt):
            head = f"if ({format_expr(s.cond)})"
            if s.orelse is None:
                self.block(d, head, s.then)
            else:
                self._chain(d, head, s.then, "else", s.orelse)
        elif isinstance(s, N.WhileStmt):
            self.block(d, f"while ({format_expr(s.cond)})", s.body)
        elif isinstance(s, N.ReturnStmt):
            self.line(d, "return;" if s.value is None else f"return {format_expr(s.value)};")
        elif isinstance(s, N.ThrowStmt):
            self.line(d, f"throw {format_expr(s.value)};")
        elif isinstance(s, N.TryStmt):
            self._chain(d, "try", s.body, f"catch ({s.var})", s.handler)
        elif isinstance(s, N.DeleteStmt):
            self.line(d, f"delete {format_expr(s.target)};")
        else:
            self.line(d, f"{format_expr(s.expr)};")

    def _chain(self, d, head, first: N.Block, joiner: str, second: N.Block):
        if first.stmts:
            self.line(d, head + " {")
            for s in first.stmts:
                self.stmt(d + 1, s)
            self.block(d, "} " + joiner, second)
        else:
            self.block(d, f"{head} {{}} {joiner}", second)

    def class_decl(self, c: N.ClassDecl):
        head = []
        if c.is_extensible:
            head.append("extensible")
        if c.is_classer:
            head.append("dynamic")
        if c.extend_target is not None:
            head.append(f"extend {c.extend_target}")
        head.append(f"class {c.name}")
        if c.base is not None:
            head.append(f"extends {c.base}")
        if not c.members:
            self.line(0, " ".join(head) + " {}")
            return
        self.line(0, " ".join(head) + " {")
        for m in c.members:
            if isinstance(m, N.FieldDecl):
                self.line(1, f"var {m.name};")
            elif isinstance(m, N.MethodDecl):
                prefix = "static method" if m.is_static else "method"
                self.block(1, f"{prefix} {m.name}({', '.join(m.params)})", m.body)
            elif isinstance(m, N.CtorDecl):
                prefix = "private constructor" if m.is_private else "constructor"
                self.block(1, f"{prefix}({', '.join(m.params)})", m.body)
            elif isinstance(m, N.EMethodSigDecl):
                self.line(1, f"extend {m.name}({', '.join(m.params)});")
            else:
                self.block(1, f"extend {m.name}({', '.join(m.params)})", m.body)
        self.line(0, "}")


def format_module(module: N.Module) -> str:
    """Canonical source text for any module, ECO constructs included."""
    p = _Printer()
    for i, c in enumerate(module.classes):
        if i:
            p.lines.append("")
        p.class_decl(c)
    return "".join(line + "\n" for line in p.lines)


def emit(core: CoreProgram) -> str:
    """Serialize a CoreProgram as deterministic core text."""
    parts = [HEADER + "\n"]
    body = format_module(core.module)
    if body:
        parts.append(body)
    meta = [f"{META_PREFIX}{cls} {name}" for cls, name in core.behaviors]
    for k in core.kinds:
        meta.append(f"{KIND_PREFIX}{k.name} {k.kind}" + (f" {k.support}" if k.support else ""))
    if meta:
        parts.append("".join(line + "\n" for line in meta))
    return "".join(parts)


def parse_core(text: str, file: str = "<core>") -> CoreProgram:
    """Inverse of :func:`emit`: re-parse core text and its metadata block.

    Raises CompileError when the header is missing, a metadata line is
    malformed, or an ECO construct survived lowering.
    """
    diags = []
    lines = text.splitlines()
    if not lines or lines[0] != HEADER:
        diags.append(Diagnostic(file, 1, 1, E_SYNTAX, f"core text must start with '{HEADER}'"))
    behaviors = []
    kinds = []
    for lineno, line in enumerate(lines, 1):
        if line.startswith(META_PREFIX):
            fields = line[len(META_PREFIX):].split()
            if len(fields) == 2:
                behaviors.append((fields[0], fields[1]))
                continue
        elif line.startswith(KIND_PREFIX):
            fields = line[len(KIND_PREFIX):].split()
            if len(fields) in (2, 3) and fields[1] in _KINDS:
                kinds.append(ClassKind(fields[0], fields[1], fields[2] if len(fields) > 2 else None))
                continue
        else:
            continue
        diags.append(Diagnostic(file, lineno, 1, E_SYNTAX, "malformed metadata line"))
    module = parse_source(text, file)
    for c in module.classes:
        eco = c.is_extensible or c.is_classer or c.extend_target is not None
        if eco or any(isinstance(m, (N.EMethodSigDecl, N.EMethodBehaviorDecl)) for m in c.members):
            diags.append(Diagnostic.at(c.pos, E_SYNTAX, f"ECO construct in core class '{c.name}'"))
    for node in N.walk(module):
        if isinstance(node, (N.ClasserTest, N.ClasserAccess, N.CallEMethod)):
            diags.append(Diagnostic.at(node.pos, E_SYNTAX, "ECO expression in core text"))
    if diags:
        raise CompileError(diags)
    return CoreProgram(module, behaviors, kinds)
