"""AST node types.

Every node records the position of its first token in ``pos``; positions are
excluded from equality so that re-parsed text compares equal to the tree it
was printed from.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .diagnostics import Pos


def _pos():
    return field(default=None, compare=False, repr=False)


# ---------------------------------------------------------------- expressions


@dataclass
class IntLit:
    value: int
    pos: Optional[Pos] = _pos()


@dataclass
class StrLit:
    value: str
    pos: Optional[Pos] = _pos()


@dataclass
class BoolLit:
    value: bool
    pos: Optional[Pos] = _pos()


@dataclass
class NullLit:
    pos: Optional[Pos] = _pos()


@dataclass
class ListLit:
    items: list
    pos: Optional[Pos] = _pos()


@dataclass
class This:
    pos: Optional[Pos] = _pos()


@dataclass
class Name:
    ident: str
    pos: Optional[Pos] = _pos()


@dataclass
class New:
    class_name: str
    args: list
    pos: Optional[Pos] = _pos()


@dataclass
class FieldGet:
    obj: "Expr"
    name: str
    pos: Optional[Pos] = _pos()


@dataclass
class MethodCall:
    obj: "Expr"
    name: str
    args: list
    pos: Optional[Pos] = _pos()


@dataclass
class Call:
    """Free-function call: builtins and runtime intrinsics only."""

    name: str
    args: list
    pos: Optional[Pos] = _pos()


@dataclass
class ClasserTest:
    obj: "Expr"
    classer: str
    pos: Optional[Pos] = _pos()


@dataclass
class ClasserAccess:
    obj: "Expr"
    classer: str
    method: str
    args: list
    pos: Optional[Pos] = _pos()


@dataclass
class CallEMethod:
    name: str
    args: list
    pos: Optional[Pos] = _pos()


@dataclass
class Index:
    obj: "Expr"
    index: "Expr"
    pos: Optional[Pos] = _pos()


@dataclass
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    pos: Optional[Pos] = _pos()


@dataclass
class Unary:
    op: str
    operand: "Expr"
    pos: Optional[Pos] = _pos()


Expr = Union[
    IntLit, StrLit, BoolLit, NullLit, ListLit, This, Name, New, FieldGet, MethodCall, Call,
    ClasserTest, ClasserAccess, CallEMethod, Index, Binary, Unary,
]

# ----------------------------------------------------------------- statements


@dataclass
class Block:
    stmts: list
    pos: Optional[Pos] = _pos()


@dataclass
class VarStmt:
    name: str
    init: Expr
    pos: Optional[Pos] = _pos()


@dataclass
class AssignStmt:
    target: Expr  # Name, FieldGet or Index
    value: Expr
    pos: Optional[Pos] = _pos()


@dataclass
class IfStmt:
    cond: Expr
    then: Block
    orelse: Optional[Block] = None
    pos: Optional[Pos] = _pos()


@dataclass
class WhileStmt:
    cond: Expr
    body: Block
    pos: Optional[Pos] = _pos()


@dataclass
class ReturnStmt:
    value: Optional[Expr] = None
    pos: Optional[Pos] = _pos()


@dataclass
class ThrowStmt:
    value: Expr
    pos: Optional[Pos] = _pos()


@dataclass
class TryStmt:
    body: Block
    var: str
    handler: Block
    pos: Optional[Pos] = _pos()


@dataclass
class DeleteStmt:
    target: Expr
    pos: Optional[Pos] = _pos()


@dataclass
class ExprStmt:
    expr: Expr
    pos: Optional[Pos] = _pos()


Stmt = Union[VarStmt, AssignStmt, IfStmt, WhileStmt, ReturnStmt, ThrowStmt, TryStmt, DeleteStmt, ExprStmt]

# --------------------------------------------------------------- declarations


@dataclass
class FieldDecl:
    name: str
    pos: Optional[Pos] = _pos()


@dataclass
class MethodDecl:
    name: str
    params: list
    body: Block
    is_static: bool = False
    pos: Optional[Pos] = _pos()

    @property
    def is_pseudo_ctor(self) -> bool:
        return self.is_static and self.name == "Make"


@dataclass
class CtorDecl:
    params: list
    body: Block
    is_private: bool = False
    pos: Optional[Pos] = _pos()


@dataclass
class EMethodSigDecl:
    name: str
    params: list
    pos: Optional[Pos] = _pos()


@dataclass
class EMethodBehaviorDecl:
    name: str
    params: list
    body: Block
    pos: Optional[Pos] = _pos()


Member = Union[FieldDecl, MethodDecl, CtorDecl, EMethodSigDecl, EMethodBehaviorDecl]


@dataclass
class ClassDecl:
    name: str
    members: list
    base: Optional[str] = None
    is_extensible: bool = False
    is_classer: bool = False
    extend_target: Optional[str] = None
    pos: Optional[Pos] = _pos()


@dataclass
class Module:
    classes: list = field(default_factory=list)
    pos: Optional[Pos] = _pos()


def walk(node):
    """Yield ``node`` and every AST node below it, depth first, in source order."""
    stack = [node]
    while stack:
        cur = stack.pop()
        yield cur
        children = []
        for value in vars(cur).values():
            if isinstance(value, list):
                children.extend(v for v in value if hasattr(v, "__dataclass_fields__"))
            elif hasattr(value, "__dataclass_fields__"):
                children.append(value)
        stack.extend(reversed(children))
