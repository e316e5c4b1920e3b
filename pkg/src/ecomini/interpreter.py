"""Interpreter for core ECO-mini programs.

Method bodies are compiled once into trees of Python closures: an expression
becomes ``f(frame) -> value`` and a statement ``s(frame) -> True`` when it
executed a ``return``. A frame is a flat list ``[this, result, *params,
*locals]`` with slots assigned at compile time.

Values: int (64-bit checked), bool, str, None (null), list (shared by
identity) and :class:`ObjectInstance`.
"""

from __future__ import annotations

import sys
from operator import itemgetter
from typing import Optional, TextIO

from . import nodes as N
from .diagnostics import R_CLASSER_ABSENT, R_EVAL, R_WRITE_BARRIER
from .lowering import BEHAVIOR_PREFIX, REGISTRY_FIELD, SUPPORT_FIELD, CoreProgram, parse_core
from .planarity import is_planar
from .runtime import EcoRuntimeError, EcoThrow, Runtime, RuntimeObject

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1
DEFAULT_MAX_STEPS = 10**7
RECURSION_LIMIT = 12000

THIS = 0
RESULT = 1


class ObjectInstance(RuntimeObject):
    __slots__ = ("cls", "fields", "serial")

    def __init__(self, cls: "RtClass", serial: int):
        super().__init__()
        self.cls = cls
        self.fields = dict.fromkeys(cls.field_names)
        self.serial = serial

    def __repr__(self) -> str:
        state = "" if self.alive else " dead"
        return f"<{self.cls.name}#{self.serial}{state}>"


class RtMethod:
    __slots__ = ("name", "owner", "params", "nslots", "body", "is_static", "is_private", "decl")

    def __init__(self, name: str, owner: "RtClass", decl, is_static=False, is_private=False):
        self.name = name
        self.owner = owner
        self.params = list(decl.params)
        self.decl = decl
        self.nslots = 0
        self.body = None
        self.is_static = is_static
        self.is_private = is_private


class RtClass:
    def __init__(self, name: str):
        self.name = name
        self.base: Optional[RtClass] = None
        self.field_names: list[str] = []
        self.methods: dict[str, RtMethod] = {}
        self.statics: dict[str, RtMethod] = {}
        self.ctors: dict[int, RtMethod] = {}
        self.behaviors: dict[str, RtMethod] = {}
        self.kind = "plain"
        self.support_name: Optional[str] = None
        self.is_support = False
        self.ancestors: frozenset = frozenset()

    def __repr__(self):
        return f"<class {self.name}>"


def _err(message: str):
    raise EcoRuntimeError(R_EVAL, message)


def display(value, _seen=None) -> str:
    t = type(value)
    if t is str:
        return value
    if t is bool:
        return "true" if value else "false"
    if t is int:
        return str(value)
    if value is None:
        return "null"
    if t is list:
        _seen = _seen or set()
        if id(value) in _seen:
            return "[...]"
        _seen = _seen | {id(value)}
        return "[" + ", ".join(display(v, _seen) for v in value) + "]"
    if t is ObjectInstance:
        return f"<{value.cls.name}>"
    return "<registry>"


def _type_name(value) -> str:
    t = type(value)
    if t is bool:
        return "boolean"
    if t is int:
        return "integer"
    if t is str:
        return "string"
    if value is None:
        return "null"
    if t is list:
        return "list"
    if t is ObjectInstance:
        return f"object of class '{value.cls.name}'"
    return "internal value"


def _check_int(v: int) -> int:
    if v < INT_MIN or v > INT_MAX:
        _err("integer overflow")
    return v


def values_equal(a, b) -> bool:
    ta = type(a)
    if ta is not type(b):
        return False
    if ta is list or ta is ObjectInstance:
        return a is b
    return a == b


def _live(obj, what: str):
    if type(obj) is not ObjectInstance:
        _err(f"{what} on {_type_name(obj)}")
    if not obj.alive:
        _err(f"{what} on destroyed object of class '{obj.cls.name}'")
    return obj


# ------------------------------------------------------------ binary operators


def _arith(op):
    if op == "+":
        def fn(a, b):
            if type(a) is int and type(b) is int:
                v = a + b
                if v < INT_MIN or v > INT_MAX:
                    _err("integer overflow")
                return v
            if type(a) is str or type(b) is str:
                return display(a) + display(b)
            _err(f"cannot add {_type_name(a)} and {_type_name(b)}")
        return fn

    def fn(a, b):
        if type(a) is not int or type(b) is not int:
            _err(f"operator '{op}' needs integers, got {_type_name(a)} and {_type_name(b)}")
        if op == "-":
            v = a - b
        elif op == "*":
            v = a * b
        else:
            if b == 0:
                _err("division by zero")
            q = abs(a) // abs(b)
            if (a < 0) != (b < 0):
                q = -q
            v = q if op == "/" else a - q * b
        if v < INT_MIN or v > INT_MAX:
            _err("integer overflow")
        return v
    return fn


def _compare(op):
    import operator as _op

    cmp = {"<": _op.lt, "<=": _op.le, ">": _op.gt, ">=": _op.ge}[op]

    def fn(a, b):
        ta, tb = type(a), type(b)
        if (ta is int and tb is int) or (ta is str and tb is str):
            return cmp(a, b)
        _err(f"operator '{op}' cannot compare {_type_name(a)} and {_type_name(b)}")
    return fn


# ---------------------------------------------------------------- compilation


class _Scope:
    """Compile-time name -> frame slot mapping for one method body."""

    def __init__(self, params):
        self.stack = [{p: i + 2 for i, p in enumerate(params)}]
        self.nslots = 2 + len(params)

    def push(self):
        self.stack.append({})

    def pop(self):
        self.stack.pop()

    def declare(self, name: str) -> int:
        slot = self.nslots
        self.nslots += 1
        self.stack[-1][name] = slot
        return slot

    def lookup(self, name: str) -> Optional[int]:
        for frame in reversed(self.stack):
            if name in frame:
                return frame[name]
        return None


class Interpreter:
    """Loads a CoreProgram and executes it.

    Every top-level entry (:meth:`run`, :meth:`new`, :meth:`call_method`,
    :meth:`call_static`) starts with a fresh step budget of ``max_steps``.
    """

    def __init__(self, core: CoreProgram, max_steps: int = DEFAULT_MAX_STEPS):
        self.core = core
        self.max_steps = max_steps
        self.budget = [max_steps]
        self.runtime = Runtime()
        self.barrier: list[tuple] = []  # (bound extension-object, serial at behavior start)
        self.serial = 0
        self.output: list[str] = []
        self.depth = 0
        self.trace: Optional[list] = None  # set to a list to record (extension-object, E-method) per behavior run
        self.classes: dict[str, RtClass] = {}
        self._build()

    # -- class images

    def _build(self):
        decls = {c.name: c for c in self.core.module.classes}
        for name in decls:
            self.classes[name] = RtClass(name)
        for name, decl in decls.items():
            if decl.base is not None:
                if decl.base not in self.classes:
                    _err(f"unknown base class '{decl.base}'")
                self.classes[name].base = self.classes[decl.base]
        for k in self.core.kinds:
            if k.name not in self.classes:
                _err(f"metadata names unknown class '{k.name}'")
            rc = self.classes[k.name]
            if k.kind == "support":
                rc.is_support = True
            else:
                rc.kind = k.kind
                rc.support_name = k.support

        done: set[str] = set()

        def layout(rc: RtClass, decl: N.ClassDecl):
            if rc.name in done:
                return
            base = rc.base
            if base is not None:
                layout(base, decls[base.name])
                rc.field_names = list(base.field_names)
                rc.methods = dict(base.methods)
                rc.statics = dict(base.statics)
                rc.behaviors = dict(base.behaviors)
                rc.is_support = rc.is_support or base.is_support
                rc.ancestors = base.ancestors | {rc.name}
            else:
                rc.ancestors = frozenset({rc.name})
            for m in decl.members:
                if isinstance(m, N.FieldDecl):
                    if m.name not in rc.field_names:
                        rc.field_names.append(m.name)
                elif isinstance(m, N.MethodDecl):
                    rm = RtMethod(m.name, rc, m, is_static=m.is_static)
                    (rc.statics if m.is_static else rc.methods)[m.name] = rm
                elif isinstance(m, N.CtorDecl):
                    rc.ctors[len(m.params)] = RtMethod("constructor", rc, m, is_private=m.is_private)
            done.add(rc.name)

        for name, decl in decls.items():
            layout(self.classes[name], decl)

        behaviors_by_class: dict[str, list[str]] = {}
        for cls, emethod in self.core.behaviors:
            behaviors_by_class.setdefault(cls, []).append(emethod)
        for name in decls:
            self._bind_behaviors(self.classes[name], behaviors_by_class, decls)

        for rc in self.classes.values():
            own = [m for m in list(rc.methods.values()) + list(rc.statics.values()) + list(rc.ctors.values()) if m.owner is rc]
            for m in own:
                self._compile_method(m)

    def _bind_behaviors(self, rc: RtClass, table: dict, decls: dict):
        chain = []
        cur = rc
        while cur is not None:
            chain.append(cur)
            cur = cur.base
        rc.behaviors = {}
        for c in reversed(chain):
            for emethod in table.get(c.name, ()):
                method = c.methods.get(BEHAVIOR_PREFIX + emethod)
                if method is None or method.owner is not c:
                    _err(f"metadata names missing behavior '{emethod}' in class '{c.name}'")
                rc.behaviors[emethod] = method

    def _compile_method(self, m: RtMethod):
        scope = _Scope(m.params)
        ctx = _MethodContext(m.owner, m.is_static)
        m.body = self._block(m.decl.body, scope, ctx)
        m.nslots = scope.nslots

    # -- statements

    def _block(self, block: N.Block, scope: _Scope, ctx: "_MethodContext"):
        scope.push()
        stmts = tuple(self._stmt(s, scope, ctx) for s in block.stmts)
        scope.pop()
        n = len(stmts)
        budget = self.budget
        over = self._out_of_steps

        if n == 0:
            def run(frame):
                return None
        elif n == 1:
            (s0,) = stmts

            def run(frame):
                budget[0] -= 1
                if budget[0] < 0:
                    over()
                return s0(frame)
        else:
            def run(frame):
                budget[0] -= n
                if budget[0] < 0:
                    over()
                for s in stmts:
                    if s(frame):
                        return True
                return None
        return run

    def _out_of_steps(self):
        self.budget[0] = 0
        raise EcoRuntimeError("R104", f"step budget of {self.max_steps} exceeded")

    def _stmt(self, s, scope: _Scope, ctx):
        if isinstance(s, N.VarStmt):
            init = self._expr(s.init, scope, ctx)
            slot = scope.declare(s.name)

            def run(frame):
                frame[slot] = init(frame)
            return run

        if isinstance(s, N.AssignStmt):
            return self._assign(s, scope, ctx)

        if isinstance(s, N.ExprStmt):
            f = self._expr(s.expr, scope, ctx)

            def run(frame):
                f(frame)
            return run

        if isinstance(s, N.IfStmt):
            cond = self._expr(s.cond, scope, ctx)
            then = self._block(s.then, scope, ctx)
            orelse = self._block(s.orelse, scope, ctx) if s.orelse is not None else None

            def run(frame):
                c = cond(frame)
                if c is True:
                    return then(frame)
                if c is False:
                    if orelse is not None:
                        return orelse(frame)
                    return None
                _err(f"condition must be boolean, got {_type_name(c)}")
            return run

        if isinstance(s, N.WhileStmt):
            cond = self._expr(s.cond, scope, ctx)
            body = self._block(s.body, scope, ctx)
            budget = self.budget
            over = self._out_of_steps

            def run(frame):
                while True:
                    c = cond(frame)
                    if c is True:
                        budget[0] -= 1
                        if budget[0] < 0:
                            over()
                        if body(frame):
                            return True
                    elif c is False:
                        return None
                    else:
                        _err(f"condition must be boolean, got {_type_name(c)}")
            return run

        if isinstance(s, N.ReturnStmt):
            if s.value is None:
                def run(frame):
                    frame[RESULT] = None
                    return True
                return run
            f = self._expr(s.value, scope, ctx)

            def run(frame):
                frame[RESULT] = f(frame)
                return True
            return run

        if isinstance(s, N.ThrowStmt):
            f = self._expr(s.value, scope, ctx)

            def run(frame):
                raise EcoThrow(f(frame))
            return run

        if isinstance(s, N.TryStmt):
            body = self._block(s.body, scope, ctx)
            scope.push()
            slot = scope.declare(s.var)
            handler = self._block(s.handler, scope, ctx)
            scope.pop()
            barrier = self.barrier

            def run(frame):
                depth = len(barrier)
                try:
                    return body(frame)
                except EcoThrow as exc:
                    del barrier[depth:]
                    frame[slot] = exc.value
                    return handler(frame)
            return run

        if isinstance(s, N.DeleteStmt):
            f = self._expr(s.target, scope, ctx)
            destroy = self._intrinsic_destroy

            def run(frame):
                destroy(f(frame))
            return run

        _err(f"unsupported statement {type(s).__name__}")

    def _assign(self, s: N.AssignStmt, scope, ctx):
        value = self._expr(s.value, scope, ctx)
        target = s.target
        if isinstance(target, N.Name):
            slot = scope.lookup(target.ident)
            if slot is None:
                _err(f"assignment to unknown variable '{target.ident}'")

            def run(frame):
                frame[slot] = value(frame)
            return run

        if isinstance(target, N.Index):
            obj = self._expr(target.obj, scope, ctx)
            index = self._expr(target.index, scope, ctx)

            def run(frame):
                seq = obj(frame)
                i = index(frame)
                v = value(frame)
                if type(seq) is not list:
                    _err(f"cannot index {_type_name(seq)}")
                if type(i) is not int or not 0 <= i < len(seq):
                    _err(f"list index {display(i)} out of range for size {len(seq)}")
                seq[i] = v
            return run

        obj = self._expr(target.obj, scope, ctx)
        name = target.name
        barrier = self.barrier

        def run(frame):
            o = obj(frame)
            v = value(frame)
            if type(o) is not ObjectInstance or not o.alive:
                _live(o, f"assignment to field '{name}'")
            fields = o.fields
            if name not in fields:
                _err(f"class '{o.cls.name}' has no field '{name}'")
            if barrier:
                bound, start = barrier[-1]
                if o is not bound and o.serial <= start:
                    raise EcoRuntimeError(
                        R_WRITE_BARRIER,
                        f"behavior bound to '{bound.cls.name}' may not assign field '{name}' of '{o.cls.name}'",
                    )
            fields[name] = v
        return run

    # -- expressions

    def _expr(self, e, scope: _Scope, ctx):
        if isinstance(e, (N.IntLit, N.StrLit, N.BoolLit)):
            v = e.value
            return lambda frame: v
        if isinstance(e, N.NullLit):
            return lambda frame: None
        if isinstance(e, N.This):
            return itemgetter(THIS)
        if isinstance(e, N.Name):
            slot = scope.lookup(e.ident)
            if slot is None:
                _err(f"unknown name '{e.ident}'")
            return itemgetter(slot)
        if isinstance(e, N.ListLit):
            items = tuple(self._expr(a, scope, ctx) for a in e.items)
            if not items:
                return lambda frame: []
            return lambda frame: [f(frame) for f in items]
        if isinstance(e, N.Binary):
            return self._binary(e, scope, ctx)
        if isinstance(e, N.Unary):
            f = self._expr(e.operand, scope, ctx)
            if e.op == "!":
                def run(frame):
                    v = f(frame)
                    if v is True:
                        return False
                    if v is False:
                        return True
                    _err(f"operator '!' needs a boolean, got {_type_name(v)}")
                return run

            def run(frame):
                v = f(frame)
                if type(v) is not int:
                    _err(f"operator '-' needs an integer, got {_type_name(v)}")
                return _check_int(-v)
            return run
        if isinstance(e, N.FieldGet):
            obj = self._expr(e.obj, scope, ctx)
            name = e.name

            def run(frame):
                o = obj(frame)
                if type(o) is not ObjectInstance or not o.alive:
                    _live(o, f"read of field '{name}'")
                try:
                    return o.fields[name]
                except KeyError:
                    _err(f"class '{o.cls.name}' has no field '{name}'")
            return run
        if isinstance(e, N.Index):
            obj = self._expr(e.obj, scope, ctx)
            index = self._expr(e.index, scope, ctx)

            def run(frame):
                seq = obj(frame)
                i = index(frame)
                if type(seq) is not list:
                    _err(f"cannot index {_type_name(seq)}")
                if type(i) is not int or not 0 <= i < len(seq):
                    _err(f"list index {display(i)} out of range for size {len(seq)}")
                return seq[i]
            return run
        if isinstance(e, N.New):
            return self._new(e, scope, ctx)
        if isinstance(e, N.MethodCall):
            return self._method_call(e, scope, ctx)
        if isinstance(e, N.Call):
            return self._call(e, scope, ctx)
        _err(f"construct {type(e).__name__} is not part of the core language")

    def _binary(self, e: N.Binary, scope, ctx):
        left = self._expr(e.left, scope, ctx)
        right = self._expr(e.right, scope, ctx)
        op = e.op
        if op == "&&" or op == "||":
            short = op == "||"

            def run(frame):
                a = left(frame)
                if type(a) is not bool:
                    _err(f"operator '{op}' needs booleans, got {_type_name(a)}")
                if a is short:
                    return a
                b = right(frame)
                if type(b) is not bool:
                    _err(f"operator '{op}' needs booleans, got {_type_name(b)}")
                return b
            return run
        if op == "==" or op == "!=":
            negate = op == "!="

            def run(frame):
                a = left(frame)
                b = right(frame)
                ta = type(a)
                if ta is not type(b):
                    return negate
                if ta is list or ta is ObjectInstance:
                    return (a is b) is not negate
                return (a == b) is not negate
            return run
        if op in ("<", "<=", ">", ">="):
            cmp = _compare(op)
            if op == "<":
                def run(frame):
                    a = left(frame)
                    b = right(frame)
                    if type(a) is int and type(b) is int:
                        return a < b
                    return cmp(a, b)
                return run

            def run(frame):
                return cmp(left(frame), right(frame))
            return run
        fn = _arith(op)
        if op == "+" or op == "-":
            plus = op == "+"

            def run(frame):
                a = left(frame)
                b = right(frame)
                if type(a) is int and type(b) is int:
                    v = a + b if plus else a - b
                    if INT_MIN <= v <= INT_MAX:
                        return v
                return fn(a, b)
            return run

        def run(frame):
            return fn(left(frame), right(frame))
        return run

    def _args(self, args, scope, ctx):
        fs = tuple(self._expr(a, scope, ctx) for a in args)
        n = len(fs)
        if n == 0:
            return lambda frame: []
        if n == 1:
            (a0,) = fs
            return lambda frame: [a0(frame)]
        if n == 2:
            a0, a1 = fs
            return lambda frame: [a0(frame), a1(frame)]
        return lambda frame: [f(frame) for f in fs]

    def _new(self, e: N.New, scope, ctx):
        rc = self.classes.get(e.class_name)
        if rc is None:
            _err(f"unknown class '{e.class_name}'")
        args = self._args(e.args, scope, ctx)
        arity = len(e.args)
        ctor = rc.ctors.get(arity)
        if ctor is None and not (arity == 0 and not rc.ctors):
            _err(f"class '{rc.name}' has no constructor taking {arity} argument(s)")
        if ctor is not None and ctor.is_private and ctx.cls is not rc:
            _err(f"constructor of '{rc.name}' is private")
        construct = self.construct

        def run(frame):
            return construct(rc, ctor, args(frame))
        return run

    def construct(self, rc: RtClass, ctor: Optional[RtMethod], args: list) -> ObjectInstance:
        self.serial += 1
        obj = ObjectInstance(rc, self.serial)
        if ctor is not None:
            self.invoke(ctor, obj, args)
        return obj

    def _method_call(self, e: N.MethodCall, scope, ctx):
        name = e.name
        args = self._args(e.args, scope, ctx)
        recv = e.obj
        if isinstance(recv, N.Name) and scope.lookup(recv.ident) is None:
            rc = self.classes.get(recv.ident)
            if rc is None:
                _err(f"unknown name '{recv.ident}'")
            method = rc.statics.get(name)
            if method is None:
                _err(f"class '{rc.name}' has no static method '{name}'")
            invoke = self.invoke
            return lambda frame: invoke(method, None, args(frame))

        obj = self._expr(recv, scope, ctx)
        invoke = self.invoke
        list_method = self._list_method

        def run(frame):
            o = obj(frame)
            a = args(frame)
            if type(o) is ObjectInstance:
                if not o.alive:
                    _live(o, f"call of '{name}'")
                m = o.cls.methods.get(name)
                if m is None:
                    _err(f"class '{o.cls.name}' has no method '{name}'")
                return invoke(m, o, a)
            if type(o) is list:
                return list_method(o, name, a)
            if type(o) is str and name == "size" and not a:
                return len(o)
            _err(f"cannot call '{name}' on {_type_name(o)}")
        return run

    @staticmethod
    def _list_method(seq: list, name: str, args: list):
        n = len(args)
        if name == "get" and n == 1:
            i = args[0]
            if type(i) is not int or not 0 <= i < len(seq):
                _err(f"list index {display(i)} out of range for size {len(seq)}")
            return seq[i]
        if name == "size" and n == 0:
            return len(seq)
        if name == "push" and n == 1:
            seq.append(args[0])
            return None
        if name == "set" and n == 2:
            i = args[0]
            if type(i) is not int or not 0 <= i < len(seq):
                _err(f"list index {display(i)} out of range for size {len(seq)}")
            seq[i] = args[1]
            return None
        if name == "remove_at" and n == 1:
            i = args[0]
            if type(i) is not int or not 0 <= i < len(seq):
                _err(f"list index {display(i)} out of range for size {len(seq)}")
            return seq.pop(i)
        _err(f"lists have no method '{name}' taking {n} argument(s)")

    def invoke(self, m: RtMethod, this, args: list):
        if len(args) != len(m.params):
            _err(f"'{m.owner.name}.{m.name}' takes {len(m.params)} argument(s), got {len(args)}")
        budget = self.budget
        budget[0] -= 1
        if budget[0] < 0:
            self._out_of_steps()
        frame = [this, None]
        frame += args
        extra = m.nslots - len(frame)
        if extra:
            frame += [None] * extra
        m.body(frame)
        return frame[RESULT]

    # -- builtins and runtime intrinsics

    def _call(self, e: N.Call, scope, ctx):
        name = e.name
        args = e.args
        if name == "print":
            f = self._expr(args[0], scope, ctx)
            out = self.output

            def run(frame):
                out.append(display(f(frame)))
            return run
        if name == "builtin_is_planar":
            f = self._expr(args[0], scope, ctx)
            return lambda frame: _builtin_is_planar(f(frame))
        if name == "eco_dispatch":
            if len(args) != 3 or not isinstance(args[1], N.StrLit) or not isinstance(args[2], N.ListLit):
                _err("malformed eco_dispatch")
            support = self._expr(args[0], scope, ctx)
            emethod = args[1].value
            payload = self._args(args[2].items, scope, ctx)
            dispatch = self.runtime.dispatch
            behavior = self._run_behavior

            def run(frame):
                s = support(frame)
                _live(s, f"dispatch of {emethod}")
                dispatch(s, emethod, payload(frame), behavior)
            return run
        if name in ("eco_has", "eco_get"):
            if len(args) != 2 or not isinstance(args[1], N.StrLit):
                _err(f"malformed {name}")
            obj = self._expr(args[0], scope, ctx)
            classer = args[1].value
            check = self._classer_target
            rt = self.runtime
            if name == "eco_has":
                return lambda frame: rt.classer_present(check(obj(frame), classer), classer)
            return lambda frame: rt.classer_get(check(obj(frame), classer), classer)
        if name == "eco_attach":
            if len(args) != 4 or not isinstance(args[2], N.StrLit) or not isinstance(args[3], N.BoolLit):
                _err("malformed eco_attach")
            support = self._expr(args[0], scope, ctx)
            ext = self._expr(args[1], scope, ctx)
            type_name = args[2].value
            is_classer = args[3].value
            attach = self._intrinsic_attach
            return lambda frame: attach(support(frame), ext(frame), type_name, is_classer)
        if name == "eco_detach":
            f = self._expr(args[0], scope, ctx)
            detach = self._intrinsic_detach
            return lambda frame: detach(f(frame))
        if name == "eco_destroy":
            f = self._expr(args[0], scope, ctx)
            destroy = self._intrinsic_destroy
            return lambda frame: destroy(f(frame))
        _err(f"unknown function '{name}'")

    def _run_behavior(self, ext: ObjectInstance, emethod: str, args: list) -> bool:
        m = ext.cls.behaviors.get(emethod)
        if m is None:
            return False
        if self.trace is not None:
            self.trace.append((ext, emethod))
        barrier = self.barrier
        barrier.append((ext, self.serial))
        try:
            self.invoke(m, ext, args)
        finally:
            barrier.pop()
        return True

    def _classer_target(self, obj, classer: str):
        rc = self.classes.get(classer)
        if rc is None or rc.kind != "classer":
            raise EcoRuntimeError(R_CLASSER_ABSENT, f"'{classer}' is not a classer")
        _live(obj, f"classer selector {{{classer}}}")
        if rc.support_name not in obj.cls.ancestors:
            raise EcoRuntimeError(R_CLASSER_ABSENT, f"'{classer}' is not a classer over class '{obj.cls.name}'")
        return obj

    def _intrinsic_attach(self, support, ext, type_name: str, is_classer: bool):
        _live(support, f"attach of '{type_name}'")
        _live(ext, f"attach of '{type_name}'")
        rc = self.classes.get(type_name)
        if rc is None or rc.kind not in ("extender", "classer") or (rc.kind == "classer") != is_classer:
            _err(f"'{type_name}' is not an extender")
        if not support.cls.is_support or rc.support_name not in support.cls.ancestors:
            _err(f"'{type_name}' cannot extend an object of class '{support.cls.name}'")
        self.runtime.attach(support, ext, type_name, is_classer)
        support.fields[REGISTRY_FIELD] = support.registry
        ext.fields[SUPPORT_FIELD] = support

    def _intrinsic_detach(self, ext):
        _live(ext, "detach")
        self.runtime.detach(ext)
        ext.fields[SUPPORT_FIELD] = None

    def _intrinsic_destroy(self, obj):
        if type(obj) is not ObjectInstance:
            _err(f"delete of {_type_name(obj)}")
        was_ext = obj.entry is not None
        self.runtime.destroy(obj)
        if was_ext:
            obj.fields[SUPPORT_FIELD] = None

    # -- host API

    def _top(self, fn, *args):
        self.budget[0] = self.max_steps
        self.barrier.clear()
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, RECURSION_LIMIT))
        try:
            return fn(*args)
        except RecursionError:
            raise EcoRuntimeError(R_EVAL, "call stack exhausted") from None
        finally:
            sys.setrecursionlimit(old)

    def new(self, class_name: str, *args) -> ObjectInstance:
        rc = self.classes[class_name]
        ctor = rc.ctors.get(len(args))
        if ctor is None and (args or rc.ctors):
            _err(f"class '{class_name}' has no constructor taking {len(args)} argument(s)")
        return self._top(self.construct, rc, ctor, list(args))

    def call_method(self, obj, name: str, args=()):
        _live(obj, f"call of '{name}'")
        m = obj.cls.methods.get(name)
        if m is None:
            _err(f"class '{obj.cls.name}' has no method '{name}'")
        return self._top(self.invoke, m, obj, list(args))

    def call_static(self, class_name: str, name: str, args=()):
        m = self.classes[class_name].statics.get(name)
        if m is None:
            _err(f"class '{class_name}' has no static method '{name}'")
        return self._top(self.invoke, m, None, list(args))

    def get_field(self, obj, name: str):
        _live(obj, f"read of field '{name}'")
        return obj.fields[name]

    def has_classer(self, obj, classer: str) -> bool:
        return self.runtime.classer_present(self._classer_target(obj, classer), classer)

    def get_classer(self, obj, classer: str):
        return self.runtime.classer_get(self._classer_target(obj, classer), classer)

    def run(self, entry: str = "main") -> None:
        main = self.classes.get("Main")
        if main is None or entry not in main.statics:
            _err(f"no static method Main.{entry}")
        self.call_static("Main", entry)

    @property
    def stdout(self) -> str:
        return "".join(line + "\n" for line in self.output)


class _MethodContext:
    __slots__ = ("cls", "static")

    def __init__(self, cls: RtClass, static: bool):
        self.cls = cls
        self.static = static


def _builtin_is_planar(edges) -> bool:
    if type(edges) is not list:
        _err(f"builtin_is_planar needs a list of [u, v] pairs, got {_type_name(edges)}")
    pairs = []
    for item in edges:
        if type(item) is not list or len(item) != 2 or type(item[0]) is not int or type(item[1]) is not int:
            _err("builtin_is_planar needs a list of [u, v] integer pairs")
        pairs.append((item[0], item[1]))
    try:
        return is_planar(pairs)
    except ValueError as exc:
        _err(str(exc))


def run_program(
    core_text: str,
    entry: str = "main",
    max_steps: int = DEFAULT_MAX_STEPS,
    stderr: Optional[TextIO] = None,
) -> tuple[int, str]:
    """Execute ``Main.<entry>`` of a core program; returns (exit code, stdout text).

    Exit codes: 0 normal return, 1 uncaught ``throw``, 2 runtime error.
    """
    code, out, err = run_core(parse_core(core_text), entry, max_steps)
    (stderr if stderr is not None else sys.stderr).write(err)
    return code, out


def run_core(core: CoreProgram, entry: str = "main", max_steps: int = DEFAULT_MAX_STEPS) -> tuple[int, str, str]:
    """Like :func:`run_program` but on an in-memory CoreProgram; also returns stderr text."""
    interp = Interpreter(core, max_steps=max_steps)
    try:
        interp.run(entry)
    except EcoThrow as exc:
        return 1, interp.stdout, f"uncaught exception: {display(exc.value)}\n"
    except EcoRuntimeError as exc:
        return 2, interp.stdout, f"runtime error[{exc.code}]: {exc.message}\n"
    return 0, interp.stdout, ""
