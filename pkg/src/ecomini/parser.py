"""Recursive-descent parser producing a :class:`~ecomini.nodes.Module`."""

from __future__ import annotations

from . import nodes as N
from .diagnostics import E_RESERVED, E_SYNTAX, CompileError, Diagnostic, Pos
from .lexer import Token, TokenKind as T, tokenize

INTRINSICS = ("eco_attach", "eco_detach", "eco_dispatch", "eco_has", "eco_get", "eco_destroy")

_BINARY_LEVELS = (
    {T.OR: "||"},
    {T.AND: "&&"},
    {T.EQ: "==", T.NE: "!="},
    {T.LT: "<", T.LE: "<=", T.GT: ">", T.GE: ">="},
    {T.PLUS: "+", T.MINUS: "-"},
    {T.STAR: "*", T.SLASH: "/", T.PERCENT: "%"},
)

_CLASS_HEAD = (T.KW_EXTENSIBLE, T.KW_DYNAMIC, T.KW_CLASS)


class _Abort(Exception):
    pass


class Parser:
    def __init__(self, tokens: list[Token], file: str):
        self.toks = tokens
        self.file = file
        self.i = 0
        self.diags: list[Diagnostic] = []

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def pos(self, tok: Token | None = None) -> Pos:
        tok = tok or self.tok
        return Pos(self.file, tok.line, tok.col)

    def at(self, *kinds: T) -> bool:
        return self.tok.kind in kinds

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind is not T.EOI:
            self.i += 1
        return tok

    def accept(self, kind: T) -> Token | None:
        if self.tok.kind is kind:
            return self.advance()
        return None

    def error(self, message: str, tok: Token | None = None):
        self.diags.append(Diagnostic.at(self.pos(tok), E_SYNTAX, message))
        raise _Abort

    def expect(self, kind: T, what: str | None = None) -> Token:
        if self.tok.kind is kind:
            return self.advance()
        self.error(f"expected {what or repr(kind.value)}, found {self.tok.describe()}")

    def ident(self, context: str = "", declares: bool = False) -> Token:
        if self.tok.kind is not T.IDENT:
            where = f" {context}" if context else ""
            self.error(f"expected identifier{where}, found {self.tok.describe()}")
        tok = self.advance()
        if declares and tok.text in INTRINSICS:
            self.diags.append(
                Diagnostic.at(self.pos(tok), E_RESERVED, f"'{tok.text}' is a reserved runtime name")
            )
        return tok

    # -- declarations

    def module(self) -> N.Module:
        classes = []
        while not self.at(T.EOI):
            start = self.i
            try:
                classes.append(self.class_decl())
            except _Abort:
                self.recover(start)
        return N.Module(classes, pos=Pos(self.file, 1, 1))

    def _head_at(self, j: int) -> bool:
        kind = self.toks[j].kind
        if kind in _CLASS_HEAD:
            return True
        return (
            kind is T.KW_EXTEND
            and j + 2 < len(self.toks)
            and self.toks[j + 1].kind is T.IDENT
            and self.toks[j + 2].kind is T.KW_CLASS
        )

    def recover(self, start: int):
        j = max(self.i, start + 1)
        while j < len(self.toks) - 1 and not self._head_at(j):
            j += 1
        self.i = j

    def class_decl(self) -> N.ClassDecl:
        pos = self.pos()
        extensible = bool(self.accept(T.KW_EXTENSIBLE))
        dynamic = bool(self.accept(T.KW_DYNAMIC))
        target = None
        if self.accept(T.KW_EXTEND):
            target = self.ident("after 'extend'").text
        self.expect(T.KW_CLASS, "'class'")
        name = self.ident("after 'class'", declares=True).text
        base = None
        if self.accept(T.KW_EXTENDS):
            base = self.ident("after 'extends'").text
        self.expect(T.LBRACE)
        members = []
        while not self.at(T.RBRACE):
            if self.at(T.EOI):
                self.error(f"expected '}}' to close class '{name}', found end of input")
            members.append(self.member())
        self.advance()
        return N.ClassDecl(name, members, base, extensible, dynamic, target, pos=pos)

    def params(self) -> list[str]:
        self.expect(T.LPAREN)
        out = []
        if not self.at(T.RPAREN):
            out.append(self.ident("in parameter list", declares=True).text)
            while self.accept(T.COMMA):
                out.append(self.ident("in parameter list", declares=True).text)
        self.expect(T.RPAREN)
        return out

    def member(self):
        pos = self.pos()
        if self.accept(T.KW_VAR):
            name = self.ident("after 'var'", declares=True).text
            self.expect(T.SEMI)
            return N.FieldDecl(name, pos=pos)
        if self.at(T.KW_STATIC, T.KW_METHOD):
            static = bool(self.accept(T.KW_STATIC))
            self.expect(T.KW_METHOD, "'method'")
            name = self.ident("after 'method'", declares=True).text
            params = self.params()
            return N.MethodDecl(name, params, self.block(), static, pos=pos)
        if self.at(T.KW_PRIVATE, T.KW_CONSTRUCTOR):
            private = bool(self.accept(T.KW_PRIVATE))
            self.expect(T.KW_CONSTRUCTOR, "'constructor'")
            params = self.params()
            return N.CtorDecl(params, self.block(), private, pos=pos)
        if self.accept(T.KW_EXTEND):
            name = self.ident("after 'extend'", declares=True).text
            params = self.params()
            if self.accept(T.SEMI):
                return N.EMethodSigDecl(name, params, pos=pos)
            return N.EMethodBehaviorDecl(name, params, self.block(), pos=pos)
        self.error(f"expected class member, found {self.tok.describe()}")

    # -- statements

    def block(self) -> N.Block:
        pos = self.pos()
        self.expect(T.LBRACE)
        stmts = []
        while not self.at(T.RBRACE):
            if self.at(T.EOI):
                self.error("expected '}', found end of input")
            stmts.append(self.statement())
        self.advance()
        return N.Block(stmts, pos=pos)

    def statement(self):
        pos = self.pos()
        kind = self.tok.kind
        if kind is T.KW_VAR:
            self.advance()
            name = self.ident("after 'var'", declares=True).text
            self.expect(T.ASSIGN)
            init = self.expr()
            self.expect(T.SEMI)
            return N.VarStmt(name, init, pos=pos)
        if kind is T.KW_IF:
            self.advance()
            self.expect(T.LPAREN)
            cond = self.expr()
            self.expect(T.RPAREN)
            then = self.block()
            orelse = self.block() if self.accept(T.KW_ELSE) else None
            return N.IfStmt(cond, then, orelse, pos=pos)
        if kind is T.KW_WHILE:
            self.advance()
            self.expect(T.LPAREN)
            cond = self.expr()
            self.expect(T.RPAREN)
            return N.WhileStmt(cond, self.block(), pos=pos)
        if kind is T.KW_RETURN:
            self.advance()
            value = None if self.at(T.SEMI) else self.expr()
            self.expect(T.SEMI)
            return N.ReturnStmt(value, pos=pos)
        if kind is T.KW_THROW:
            self.advance()
            value = self.expr()
            self.expect(T.SEMI)
            return N.ThrowStmt(value, pos=pos)
        if kind is T.KW_TRY:
            self.advance()
            body = self.block()
            self.expect(T.KW_CATCH, "'catch'")
            self.expect(T.LPAREN)
            var = self.ident("in catch clause", declares=True).text
            self.expect(T.RPAREN)
            return N.TryStmt(body, var, self.block(), pos=pos)
        if kind is T.KW_DELETE:
            self.advance()
            target = self.expr()
            self.expect(T.SEMI)
            return N.DeleteStmt(target, pos=pos)
        start = self.tok
        target = self.expr()
        if self.at(T.ASSIGN):
            if not isinstance(target, (N.Name, N.FieldGet, N.Index)):
                self.error("invalid assignment target", start)
            self.advance()
            value = self.expr()
            self.expect(T.SEMI)
            return N.AssignStmt(target, value, pos=pos)
        self.expect(T.SEMI)
        return N.ExprStmt(target, pos=pos)

    # -- expressions

    def expr(self, level: int = 0):
        if level == len(_BINARY_LEVELS):
            return self.unary()
        ops = _BINARY_LEVELS[level]
        left = self.expr(level + 1)
        while self.tok.kind in ops:
            op = ops[self.advance().kind]
            right = self.expr(level + 1)
            left = N.Binary(op, left, right, pos=left.pos)
        return left

    def unary(self):
        if self.at(T.NOT, T.MINUS):
            pos = self.pos()
            op = self.advance().text
            return N.Unary(op, self.unary(), pos=pos)
        return self.postfix()

    def args(self, close: T) -> list:
        out = []
        if not self.at(close):
            out.append(self.expr())
            while self.accept(T.COMMA):
                out.append(self.expr())
        self.expect(close)
        return out

    def postfix(self):
        node = self.primary()
        pos = node.pos
        while True:
            if self.accept(T.DOT):
                if self.accept(T.LBRACE):
                    classer = self.ident("in classer selector").text
                    self.expect(T.RBRACE)
                    if self.at(T.DOT):
                        self.advance()
                        method = self.ident("after classer selector").text
                        self.expect(T.LPAREN, "'(' (classer members are reached by method calls)")
                        node = N.ClasserAccess(node, classer, method, self.args(T.RPAREN), pos=pos)
                    else:
                        node = N.ClasserTest(node, classer, pos=pos)
                    continue
                name = self.ident("after '.'").text
                if self.accept(T.LPAREN):
                    node = N.MethodCall(node, name, self.args(T.RPAREN), pos=pos)
                else:
                    node = N.FieldGet(node, name, pos=pos)
            elif self.accept(T.LBRACKET):
                index = self.expr()
                self.expect(T.RBRACKET)
                node = N.Index(node, index, pos=pos)
            else:
                return node

    def primary(self):
        tok = self.tok
        pos = self.pos()
        kind = tok.kind
        if kind is T.INT:
            self.advance()
            return N.IntLit(tok.value, pos=pos)
        if kind is T.STRING:
            self.advance()
            return N.StrLit(tok.value, pos=pos)
        if kind in (T.KW_TRUE, T.KW_FALSE):
            self.advance()
            return N.BoolLit(kind is T.KW_TRUE, pos=pos)
        if kind is T.KW_NULL:
            self.advance()
            return N.NullLit(pos=pos)
        if kind is T.KW_THIS:
            self.advance()
            return N.This(pos=pos)
        if kind is T.LBRACKET:
            self.advance()
            return N.ListLit(self.args(T.RBRACKET), pos=pos)
        if kind is T.LPAREN:
            self.advance()
            inner = self.expr()
            self.expect(T.RPAREN)
            return inner
        if kind is T.KW_NEW:
            self.advance()
            name = self.ident("after 'new'").text
            self.expect(T.LPAREN)
            return N.New(name, self.args(T.RPAREN), pos=pos)
        if kind is T.KW_CALL_E_METHOD:
            self.advance()
            self.expect(T.LPAREN)
            name = self.ident("naming the E-method").text
            args = []
            if self.accept(T.COMMA):
                args = self.args(T.RPAREN)
            else:
                self.expect(T.RPAREN)
            return N.CallEMethod(name, args, pos=pos)
        if kind is T.IDENT:
            self.advance()
            if self.accept(T.LPAREN):
                return N.Call(tok.text, self.args(T.RPAREN), pos=pos)
            return N.Name(tok.text, pos=pos)
        self.error(f"expected expression, found {tok.describe()}")


def parse(tokens: list[Token], file: str = "<input>") -> N.Module:
    """Parse a token stream; raises CompileError listing every syntax error found."""
    parser = Parser(tokens, file)
    module = parser.module()
    if parser.diags:
        raise CompileError(parser.diags)
    return module


def parse_source(source: str, file: str = "<input>") -> N.Module:
    return parse(tokenize(source, file), file)
