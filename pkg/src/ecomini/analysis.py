"""Name resolution and the static ECO rules."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from . import nodes as N
from .diagnostics import (
    E_ARITY,
    E_BAD_CALL_E_METHOD,
    E_BEHAVIOR_NO_SIG,
    E_CLASSER_PUBLIC_CTOR,
    E_CTOR_ARITY,
    E_CYCLIC_BASE,
    E_DUPLICATE,
    E_DYNAMIC_NO_EXTEND,
    E_EXT_CTOR_PARAM,
    E_NOT_A_CLASSER,
    E_NOT_EXTENSIBLE,
    E_PRIVATE_CTOR,
    E_RESERVED,
    E_SIG_NOT_EXTENSIBLE,
    E_THIS_IN_STATIC,
    E_UNKNOWN_NAME,
    CompileError,
    Diagnostic,
    Pos,
    sort_diagnostics,
)
from .parser import INTRINSICS

BUILTINS = {"print": 1, "builtin_is_planar": 1}
HIDDEN_PREFIX = "__eco_"


@dataclass
class ClassInfo:
    name: str
    decl: N.ClassDecl
    kind: str  # plain | extensible | extender | classer
    extensible: bool
    support: Optional[str]
    base: Optional[str]
    sigs: dict = field(default_factory=dict)  # E-method name -> arity
    behaviors: dict = field(default_factory=dict)
    members: dict = field(default_factory=dict)  # name -> field | method | static
    ctors: list = field(default_factory=list)  # CtorDecl

    @property
    def ctor_visibility(self) -> dict:
        """Arity -> 'private' | 'public'; a class without constructors gets a public nullary one."""
        if not self.ctors:
            return {0: "public"}
        return {len(c.params): "private" if c.is_private else "public" for c in self.ctors}


@dataclass
class SymbolTable:
    classes: dict = field(default_factory=dict)

    def __contains__(self, name: str) -> bool:
        return name in self.classes

    def __getitem__(self, name: str) -> ClassInfo:
        return self.classes[name]

    def chain(self, name: Optional[str]) -> Iterator[ClassInfo]:
        seen = set()
        while name is not None and name in self.classes and name not in seen:
            seen.add(name)
            info = self.classes[name]
            yield info
            name = info.base

    def is_subclass(self, name: str, ancestor: str) -> bool:
        return any(info.name == ancestor for info in self.chain(name))

    def is_support(self, name: str) -> bool:
        """True when instances of ``name`` may carry extension-objects."""
        return any(info.extensible for info in self.chain(name))

    def sig_arity(self, name: str, emethod: str) -> Optional[int]:
        for info in self.chain(name):
            if emethod in info.sigs:
                return info.sigs[emethod]
        return None

    def member_kind(self, name: str, member: str) -> Optional[str]:
        for info in self.chain(name):
            if member in info.members:
                return info.members[member]
        return None

    def is_classer(self, name: str) -> bool:
        return name in self.classes and self.classes[name].kind == "classer"


def _kind(decl: N.ClassDecl) -> str:
    if decl.extend_target is not None:
        return "classer" if decl.is_classer else "extender"
    return "extensible" if decl.is_extensible else "plain"


def _reserved(name: str) -> bool:
    return name in INTRINSICS or name.startswith(HIDDEN_PREFIX)


# ------------------------------------------------------------------ resolve


class _Resolver:
    def __init__(self, table: SymbolTable, core: bool):
        self.table = table
        self.core = core
        self.diags: list[Diagnostic] = []

    def err(self, pos: Pos, code: str, message: str):
        self.diags.append(Diagnostic.at(pos, code, message))

    def declare_name(self, pos: Pos, name: str):
        if not self.core and name.startswith(HIDDEN_PREFIX):
            self.err(pos, E_RESERVED, f"names starting with '{HIDDEN_PREFIX}' are reserved")

    def run_class(self, info: ClassInfo):
        decl = info.decl
        for member in decl.members:
            if isinstance(member, (N.MethodDecl, N.CtorDecl, N.EMethodBehaviorDecl)):
                static = isinstance(member, N.MethodDecl) and member.is_static
                scope = {}
                for p in member.params:
                    if p in scope:
                        self.err(member.pos, E_DUPLICATE, f"duplicate parameter '{p}'")
                    self.declare_name(member.pos, p)
                    scope[p] = True
                self.block(member.body, [scope], info, static)

    def block(self, block: N.Block, scopes: list, info: ClassInfo, static: bool):
        scopes = scopes + [{}]
        for stmt in block.stmts:
            self.stmt(stmt, scopes, info, static)

    def bind(self, pos: Pos, name: str, scopes: list):
        if any(name in s for s in scopes):
            self.err(pos, E_DUPLICATE, f"'{name}' is already defined in this method")
        self.declare_name(pos, name)
        scopes[-1][name] = True

    def stmt(self, s, scopes, info, static):
        if isinstance(s, N.VarStmt):
            self.expr(s.init, scopes, info, static)
            self.bind(s.pos, s.name, scopes)
        elif isinstance(s, N.AssignStmt):
            self.expr(s.target, scopes, info, static)
            self.expr(s.value, scopes, info, static)
        elif isinstance(s, N.IfStmt):
            self.expr(s.cond, scopes, info, static)
            self.block(s.then, scopes, info, static)
            if s.orelse is not None:
                self.block(s.orelse, scopes, info, static)
        elif isinstance(s, N.WhileStmt):
            self.expr(s.cond, scopes, info, static)
            self.block(s.body, scopes, info, static)
        elif isinstance(s, (N.ReturnStmt, N.ThrowStmt)):
            if s.value is not None:
                self.expr(s.value, scopes, info, static)
        elif isinstance(s, N.TryStmt):
            self.block(s.body, scopes, info, static)
            inner = scopes + [{}]
            self.bind(s.pos, s.var, inner)
            self.block(s.handler, inner, info, static)
        elif isinstance(s, N.DeleteStmt):
            self.expr(s.target, scopes, info, static)
        elif isinstance(s, N.ExprStmt):
            self.expr(s.expr, scopes, info, static)

    def class_ref(self, pos: Pos, name: str) -> bool:
        if name not in self.table:
            self.err(pos, E_UNKNOWN_NAME, f"unknown class '{name}'")
            return False
        return True

    def expr(self, e, scopes, info, static):
        t = self.table
        if isinstance(e, N.Name):
            if not any(e.ident in s for s in scopes):
                if e.ident in t:
                    self.err(e.pos, E_UNKNOWN_NAME, f"class '{e.ident}' used as a value")
                else:
                    self.err(e.pos, E_UNKNOWN_NAME, f"unknown name '{e.ident}'")
            return
        if isinstance(e, N.This):
            if static:
                self.err(e.pos, E_THIS_IN_STATIC, "'this' used in a static method")
            return
        if isinstance(e, N.MethodCall):
            recv = e.obj
            if isinstance(recv, N.Name) and not any(recv.ident in s for s in scopes):
                if self.class_ref(recv.pos, recv.ident):
                    target = self._static_method(recv.ident, e.name)
                    if target is None:
                        self.err(e.pos, E_UNKNOWN_NAME, f"class '{recv.ident}' has no static method '{e.name}'")
                    elif len(target.params) != len(e.args):
                        self.err(
                            e.pos, E_ARITY,
                            f"'{recv.ident}.{e.name}' takes {len(target.params)} argument(s), got {len(e.args)}",
                        )
            else:
                self.expr(recv, scopes, info, static)
                if isinstance(recv, N.This) and not static and t.member_kind(info.name, e.name) != "method":
                    self.err(e.pos, E_UNKNOWN_NAME, f"class '{info.name}' has no method '{e.name}'")
            for a in e.args:
                self.expr(a, scopes, info, static)
            return
        if isinstance(e, N.FieldGet):
            self.expr(e.obj, scopes, info, static)
            if isinstance(e.obj, N.This) and not static and t.member_kind(info.name, e.name) != "field":
                self.err(e.pos, E_UNKNOWN_NAME, f"class '{info.name}' has no field '{e.name}'")
            return
        if isinstance(e, N.New):
            if self.class_ref(e.pos, e.class_name):
                vis = t[e.class_name].ctor_visibility
                arity = len(e.args)
                if arity not in vis:
                    self.err(e.pos, E_CTOR_ARITY, f"class '{e.class_name}' has no constructor taking {arity} argument(s)")
                elif vis[arity] == "private" and info.name != e.class_name:
                    self.err(e.pos, E_PRIVATE_CTOR, f"constructor of '{e.class_name}' is private")
            for a in e.args:
                self.expr(a, scopes, info, static)
            return
        if isinstance(e, (N.ClasserTest, N.ClasserAccess)):
            self.class_ref(e.pos, e.classer)
            self.expr(e.obj, scopes, info, static)
            for a in getattr(e, "args", ()):
                self.expr(a, scopes, info, static)
            return
        if isinstance(e, N.Call):
            if e.name in INTRINSICS:
                if not self.core:
                    self.err(e.pos, E_RESERVED, f"'{e.name}' is a reserved runtime name")
            elif e.name in BUILTINS:
                if BUILTINS[e.name] != len(e.args):
                    self.err(e.pos, E_ARITY, f"'{e.name}' takes {BUILTINS[e.name]} argument(s), got {len(e.args)}")
            else:
                self.err(e.pos, E_UNKNOWN_NAME, f"unknown function '{e.name}'")
            for a in e.args:
                self.expr(a, scopes, info, static)
            return
        if isinstance(e, N.CallEMethod):
            for a in e.args:
                self.expr(a, scopes, info, static)
            return
        if isinstance(e, N.ListLit):
            for a in e.items:
                self.expr(a, scopes, info, static)
            return
        if isinstance(e, N.Index):
            self.expr(e.obj, scopes, info, static)
            self.expr(e.index, scopes, info, static)
            return
        if isinstance(e, N.Binary):
            self.expr(e.left, scopes, info, static)
            self.expr(e.right, scopes, info, static)
            return
        if isinstance(e, N.Unary):
            self.expr(e.operand, scopes, info, static)

    def _static_method(self, cls: str, name: str) -> Optional[N.MethodDecl]:
        for info in self.table.chain(cls):
            for m in info.decl.members:
                if isinstance(m, N.MethodDecl) and m.is_static and m.name == name:
                    return m
        return None


def resolve(module: N.Module, core: bool = False) -> SymbolTable:
    """Build the symbol table for ``module``.

    ``core`` admits runtime intrinsics and hidden ``__eco_`` names, which
    only lowered programs may use. Raises CompileError on any diagnostic.
    """
    table = SymbolTable()
    diags: list[Diagnostic] = []

    for decl in module.classes:
        if decl.name in table.classes:
            diags.append(Diagnostic.at(decl.pos, E_DUPLICATE, f"duplicate class '{decl.name}'"))
            continue
        info = ClassInfo(
            decl.name, decl, _kind(decl), decl.is_extensible, decl.extend_target, decl.base,
        )
        if not core and decl.name.startswith(HIDDEN_PREFIX):
            diags.append(Diagnostic.at(decl.pos, E_RESERVED, f"names starting with '{HIDDEN_PREFIX}' are reserved"))
        ctor_arities = set()
        for m in decl.members:
            if isinstance(m, N.CtorDecl):
                if len(m.params) in ctor_arities:
                    diags.append(Diagnostic.at(m.pos, E_DUPLICATE, f"duplicate constructor with {len(m.params)} parameter(s)"))
                ctor_arities.add(len(m.params))
                info.ctors.append(m)
                continue
            if isinstance(m, N.EMethodSigDecl):
                bucket, what = info.sigs, "E-method signature"
                value = len(m.params)
            elif isinstance(m, N.EMethodBehaviorDecl):
                bucket, what = info.behaviors, "E-method behavior"
                value = len(m.params)
            elif isinstance(m, N.FieldDecl):
                bucket, what, value = info.members, "member", "field"
            else:
                bucket, what, value = info.members, "member", "static" if m.is_static else "method"
            if m.name in bucket:
                diags.append(Diagnostic.at(m.pos, E_DUPLICATE, f"duplicate {what} '{m.name}' in class '{decl.name}'"))
                continue
            if not core and m.name.startswith(HIDDEN_PREFIX):
                diags.append(Diagnostic.at(m.pos, E_RESERVED, f"names starting with '{HIDDEN_PREFIX}' are reserved"))
            bucket[m.name] = value
        table.classes[decl.name] = info

    for info in table.classes.values():
        decl = info.decl
        if info.base is not None and info.base not in table:
            diags.append(Diagnostic.at(decl.pos, E_UNKNOWN_NAME, f"unknown class '{info.base}'"))
        if info.support is not None and info.support not in table:
            diags.append(Diagnostic.at(decl.pos, E_UNKNOWN_NAME, f"unknown class '{info.support}'"))
        seen = set()
        name = info.name
        while name is not None and name in table:
            if name in seen:
                diags.append(Diagnostic.at(decl.pos, E_CYCLIC_BASE, f"cyclic inheritance through '{info.name}'"))
                break
            seen.add(name)
            name = table[name].base

    if diags:
        raise CompileError(diags)

    resolver = _Resolver(table, core)
    for info in table.classes.values():
        resolver.run_class(info)
    if resolver.diags:
        raise CompileError(resolver.diags)
    return table


# ---------------------------------------------------------------- ECO rules


class _RuleChecker:
    def __init__(self, table: SymbolTable):
        self.table = table
        self.diags: list[Diagnostic] = []

    def err(self, pos: Pos, code: str, message: str):
        self.diags.append(Diagnostic.at(pos, code, message))

    def check_class(self, info: ClassInfo):
        t = self.table
        decl = info.decl
        if decl.is_classer and decl.extend_target is None:
            self.err(decl.pos, E_DYNAMIC_NO_EXTEND, f"'dynamic' class '{decl.name}' has no 'extend' head")
        support = decl.extend_target
        if support is not None and not t.is_support(support):
            self.err(decl.pos, E_NOT_EXTENSIBLE, f"'{support}' is not declared extensible")
        if support is not None and not info.ctors:
            self.err(decl.pos, E_EXT_CTOR_PARAM, f"extender '{decl.name}' needs a constructor taking its support-object")

        for m in decl.members:
            if isinstance(m, N.EMethodSigDecl) and not t.is_support(decl.name):
                self.err(m.pos, E_SIG_NOT_EXTENSIBLE, f"E-method signature '{m.name}' in non-extensible class '{decl.name}'")
            elif isinstance(m, N.EMethodBehaviorDecl):
                arity = t.sig_arity(support, m.name) if support is not None and support in t else None
                if arity is None or arity != len(m.params):
                    where = f"'{support}'" if support else "a support-class (class has no 'extend' head)"
                    self.err(
                        m.pos, E_BEHAVIOR_NO_SIG,
                        f"no E-method signature {m.name}/{len(m.params)} in {where}",
                    )
            elif isinstance(m, N.CtorDecl) and support is not None:
                if not m.params:
                    self.err(m.pos, E_EXT_CTOR_PARAM, "extender constructors must take the support-object as first parameter")
                if decl.is_classer and not m.is_private:
                    self.err(m.pos, E_CLASSER_PUBLIC_CTOR, f"classer '{decl.name}' constructors must be private")

        for m in decl.members:
            if isinstance(m, (N.MethodDecl, N.EMethodBehaviorDecl)):
                static = isinstance(m, N.MethodDecl) and m.is_static
                self.walk(m.body, info, can_dispatch=not static, known={})
            elif isinstance(m, N.CtorDecl):
                known = {}
                if support is not None and m.params and not self._reassigned(m.body, m.params[0]):
                    known[m.params[0]] = support
                self.walk(m.body, info, can_dispatch=False, known=known)

    @staticmethod
    def _reassigned(body: N.Block, name: str) -> bool:
        return any(
            isinstance(n, N.AssignStmt) and isinstance(n.target, N.Name) and n.target.ident == name
            for n in N.walk(body)
        )

    def static_class(self, e, info: ClassInfo, known: dict) -> Optional[str]:
        if isinstance(e, N.This):
            return info.name
        if isinstance(e, N.New):
            return e.class_name
        if isinstance(e, N.Name):
            return known.get(e.ident)
        return None

    def walk(self, body: N.Block, info: ClassInfo, can_dispatch: bool, known: dict):
        t = self.table
        for node in N.walk(body):
            if isinstance(node, N.CallEMethod):
                if not can_dispatch or not t.is_support(info.name):
                    self.err(
                        node.pos, E_BAD_CALL_E_METHOD,
                        f"call_e_method({node.name}) is only allowed in methods of an extensible class",
                    )
                    continue
                arity = t.sig_arity(info.name, node.name)
                if arity is None:
                    self.err(node.pos, E_BAD_CALL_E_METHOD, f"'{node.name}' is not an E-method of '{info.name}'")
                elif arity != len(node.args):
                    self.err(
                        node.pos, E_BAD_CALL_E_METHOD,
                        f"E-method '{node.name}' takes {arity} argument(s), got {len(node.args)}",
                    )
            elif isinstance(node, (N.ClasserTest, N.ClasserAccess)):
                recv = self.static_class(node.obj, info, known)
                if recv is None:
                    continue
                if not t.is_classer(node.classer):
                    self.err(node.pos, E_NOT_A_CLASSER, f"'{node.classer}' is not a classer")
                elif not t.is_subclass(recv, t[node.classer].support):
                    self.err(node.pos, E_NOT_A_CLASSER, f"'{node.classer}' is not a classer over '{recv}'")


def check_eco_rules(module: N.Module, table: SymbolTable) -> list[Diagnostic]:
    """Return every ECO-rule violation in ``module``, sorted by position."""
    checker = _RuleChecker(table)
    for decl in module.classes:
        info = table.classes.get(decl.name)
        if info is not None and info.decl is decl:
            checker.check_class(info)
    return sort_diagnostics(checker.diags)


def analyze(module: N.Module) -> SymbolTable:
    """resolve + check_eco_rules; raises CompileError on any diagnostic."""
    table = resolve(module)
    diags = check_eco_rules(module, table)
    if diags:
        raise CompileError(diags)
    return table
