"""Parser for the toolkit's CLP-style concrete syntax.

Clauses are Prolog-like: ``head :- item, item, ... .`` where each body item
is either a predicate atom or a linear comparison using ``=<``, ``>=``,
``=``, ``<``, ``>`` or ``=\\=``.  Comments start with ``%``; lines starting
with ``%%`` carry directives:

    %% group p q r      assign predicates p, q, r one provenance tag
    %% real p q         declare all arguments of p and q as real-sorted

Strict inequalities over integer-sorted terms are rewritten into non-strict
ones (``x < y`` becomes ``x <= y - 1``); disequalities are only accepted in
goal clauses and are split into the two sign cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

from .syntax import (
    Atom, AtomicConstraint, ChcSystem, Clause, Constraint, ChcError,
    EQ, INT, LE, NEQ, REAL, VarId, constraint_of, make_atomic,
    normalize_clause, split_disequalities,
)


class ParseError(ChcError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, VAR, INT, PUNCT, END
    text: str
    line: int
    col: int


_PUNCT = ("=\\=", "=<", ">=", ":-", "(", ")", ",", ".", "+", "-", "*", "/",
          "=", "<", ">")


def _tokenize(text: str) -> tuple[list[Token], list[tuple[str, list[str]]]]:
    tokens: list[Token] = []
    directives: list[tuple[str, list[str]]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("%%"):
            words = stripped[2:].split()
            if words:
                directives.append((words[0], words[1:]))
            continue
        if "%" in line:
            line = line[:line.index("%")]
        i = 0
        while i < len(line):
            ch = line[i]
            if ch.isspace():
                i += 1
                continue
            col = i + 1
            if ch.isdigit():
                j = i
                while j < len(line) and line[j].isdigit():
                    j += 1
                tokens.append(Token("INT", line[i:j], lineno, col))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(line) and (line[j].isalnum() or line[j] == "_"):
                    j += 1
                word = line[i:j]
                kind = "VAR" if ch.isupper() or ch == "_" else "NAME"
                tokens.append(Token(kind, word, lineno, col))
                i = j
                continue
            for p in _PUNCT:
                if line.startswith(p, i):
                    tokens.append(Token("PUNCT", p, lineno, col))
                    i += len(p)
                    break
            else:
                raise ParseError(f"unexpected character {ch!r}", lineno, col)
    tokens.append(Token("END", "", len(text.splitlines()) + 1, 1))
    return tokens, directives


class _LinExpr:
    """A linear expression: coefficient map plus constant."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs: dict[int, Fraction] | None = None,
                 const: Fraction = Fraction(0)):
        self.coeffs = coeffs or {}
        self.const = const

    def add(self, other: "_LinExpr", sign: int) -> "_LinExpr":
        coeffs = dict(self.coeffs)
        for v, c in other.coeffs.items():
            coeffs[v] = coeffs.get(v, Fraction(0)) + sign * c
        return _LinExpr(coeffs, self.const + sign * other.const)

    def scale(self, k: Fraction) -> "_LinExpr":
        return _LinExpr({v: c * k for v, c in self.coeffs.items()},
                        self.const * k)

    @property
    def is_const(self) -> bool:
        return not self.coeffs

    @property
    def single_var(self) -> int | None:
        if len(self.coeffs) == 1 and self.const == 0:
            v, c = next(iter(self.coeffs.items()))
            if c == 1:
                return v
        return None


@dataclass
class _RawComparison:
    expr: _LinExpr  # lhs - rhs
    op: str         # one of =<, <, >=, >, =, =\=
    line: int
    col: int


@dataclass
class _RawClause:
    head: tuple[str, list[_LinExpr]] | None  # None for false heads
    comparisons: list[_RawComparison]
    atoms: list[tuple[str, list[_LinExpr], int, int]]
    false_body: bool
    nvars: int
    line: int


class _Parser:
    def __init__(self, text: str):
        self.tokens, self.directives = _tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}",
                             tok.line, tok.col)
        return tok

    def fail(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.col)

    # clause-local variable table
    def start_clause(self) -> None:
        self.varmap: dict[str, int] = {}
        self.nvars = 0

    def var_index(self, name: str) -> int:
        if name == "_":
            idx = self.nvars
            self.nvars += 1
            return idx
        if name not in self.varmap:
            self.varmap[name] = self.nvars
            self.nvars += 1
        return self.varmap[name]

    def fresh_var(self) -> int:
        idx = self.nvars
        self.nvars += 1
        return idx

    def parse_program(self) -> list[_RawClause]:
        clauses = []
        while self.peek().kind != "END":
            clauses.append(self.parse_clause())
        return clauses

    def parse_clause(self) -> _RawClause:
        self.start_clause()
        tok = self.peek()
        line = tok.line
        if tok.kind == "NAME" and tok.text == "false":
            self.next()
            head = None
        elif tok.kind == "NAME":
            name, args, _, _ = self.parse_atom()
            head = (name, args)
        else:
            raise self.fail("expected a clause head")
        comparisons: list[_RawComparison] = []
        atoms: list[tuple[str, list[_LinExpr], int, int]] = []
        false_body = False
        if self.peek().text == ":-":
            self.next()
            while True:
                item = self.peek()
                if item.kind == "NAME" and item.text == "true":
                    self.next()
                elif item.kind == "NAME" and item.text == "false":
                    self.next()
                    false_body = True
                elif item.kind == "NAME":
                    atoms.append(self.parse_atom())
                else:
                    comparisons.append(self.parse_comparison())
                if self.peek().text == ",":
                    self.next()
                    continue
                break
        self.expect(".")
        return _RawClause(head, comparisons, atoms, false_body,
                          self.nvars, line)

    def parse_atom(self) -> tuple[str, list[_LinExpr], int, int]:
        tok = self.next()
        name = tok.text
        args: list[_LinExpr] = []
        if self.peek().text == "(":
            self.next()
            if self.peek().text != ")":
                args.append(self.parse_expr())
                while self.peek().text == ",":
                    self.next()
                    args.append(self.parse_expr())
            self.expect(")")
        return name, args, tok.line, tok.col

    def parse_comparison(self) -> _RawComparison:
        lhs = self.parse_expr()
        tok = self.next()
        if tok.text not in ("=<", "<", ">=", ">", "=", "=\\="):
            raise ParseError(f"expected a comparison operator, found "
                             f"{tok.text!r}", tok.line, tok.col)
        rhs = self.parse_expr()
        return _RawComparison(lhs.add(rhs, -1), tok.text, tok.line, tok.col)

    def parse_expr(self) -> _LinExpr:
        expr = self.parse_term()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            expr = expr.add(self.parse_term(), 1 if op == "+" else -1)
        return expr

    def parse_term(self) -> _LinExpr:
        expr = self.parse_factor()
        while self.peek().text in ("*", "/"):
            op = self.next()
            rhs = self.parse_factor()
            if op.text == "*":
                if expr.is_const:
                    expr = rhs.scale(expr.const)
                elif rhs.is_const:
                    expr = expr.scale(rhs.const)
                else:
                    raise ParseError("nonlinear product", op.line, op.col)
            else:
                if not rhs.is_const or rhs.const == 0:
                    raise ParseError("division only by nonzero constants",
                                     op.line, op.col)
                expr = expr.scale(1 / rhs.const)
        return expr

    def parse_factor(self) -> _LinExpr:
        tok = self.next()
        if tok.kind == "INT":
            return _LinExpr(const=Fraction(int(tok.text)))
        if tok.kind == "VAR":
            return _LinExpr({self.var_index(tok.text): Fraction(1)})
        if tok.text == "-":
            return self.parse_factor().scale(Fraction(-1))
        if tok.text == "(":
            expr = self.parse_expr()
            self.expect(")")
            return expr
        raise ParseError(f"unexpected token {tok.text!r}", tok.line, tok.col)


def _strict_bound(b: Fraction) -> Fraction:
    return Fraction(math.ceil(b) - 1)


def parse_clp(text: str) -> ChcSystem:
    """Parse concrete syntax into a normalized :class:`ChcSystem`.

    Strict inequalities over int sorts are rewritten to non-strict form,
    goal disequalities are split, and every clause is normalized."""
    parser = _Parser(text)
    raw_clauses = parser.parse_program()

    real_preds: set[str] = set()
    groups: dict[str, int] = {}
    tag = 0
    for name, words in parser.directives:
        if name == "real":
            real_preds.update(words)
        elif name == "group":
            for pred in words:
                groups[pred] = tag
            tag += 1
        else:
            raise ChcError(f"unknown directive %%{name}")

    sigs: dict[str, tuple[str, ...]] = {}
    clauses: list[Clause] = []
    for raw in raw_clauses:
        all_atoms = ([(raw.head[0], raw.head[1], raw.line, 1)]
                     if raw.head else [])
        all_atoms += raw.atoms
        # resolve signatures and variable sorts
        sorts: dict[int, str] = {}
        for pred, args, line, col in all_atoms:
            if pred == "false":
                raise ParseError("false cannot take arguments or be defined",
                                 line, col)
            sort = REAL if pred in real_preds else INT
            if pred in sigs:
                if len(sigs[pred]) != len(args):
                    raise ParseError(
                        f"arity mismatch for {pred}: {len(args)} vs "
                        f"declared {len(sigs[pred])}", line, col)
            else:
                sigs[pred] = tuple(sort for _ in args)
            for expr in args:
                for v in expr.coeffs:
                    if sort == REAL:
                        sorts[v] = REAL

        def mkvar(idx: int) -> VarId:
            return VarId(idx, sorts.get(idx, INT))

        catoms: list[AtomicConstraint | bool] = []
        arg_atoms: list[Atom] = []
        nvars = raw.nvars
        for pred, args, _, _ in all_atoms:
            rsort = REAL if pred in real_preds else INT
            arglist: list[VarId] = []
            for expr in args:
                v = expr.single_var
                if v is None:
                    v = nvars
                    nvars += 1
                    if rsort == REAL:
                        sorts[v] = REAL
                    diff = dict(expr.coeffs)
                    diff[v] = diff.get(v, Fraction(0)) - 1
                    catoms.append(make_atomic(
                        {mkvar(i): c for i, c in diff.items()},
                        -expr.const, EQ))
                arglist.append(mkvar(v))
            arg_atoms.append(Atom(pred, tuple(arglist)))

        for cmp in raw.comparisons:
            coeffs = {mkvar(i): c for i, c in cmp.expr.coeffs.items()}
            bound = -cmp.expr.const
            op = cmp.op
            if op in (">", ">="):
                coeffs = {v: -c for v, c in coeffs.items()}
                bound = -bound
                op = "<" if op == ">" else "=<"
            if op == "<":
                if any(v.sort == REAL for v in coeffs):
                    raise ParseError("strict inequality over real-sorted "
                                     "variables is unsupported",
                                     cmp.line, cmp.col)
                op, bound = LE, _strict_bound(bound)
            catoms.append(make_atomic(coeffs, bound, op))
        if raw.false_body:
            catoms.append(False)

        head = arg_atoms[0] if raw.head else None
        body = tuple(arg_atoms[1 if raw.head else 0:])
        clauses.append(Clause(head, constraint_of(catoms), body))

    system = ChcSystem(tuple(clauses), sigs,
                       {p: t for p, t in groups.items() if p in sigs})
    system = split_disequalities(system)
    system = ChcSystem(tuple(normalize_clause(c) for c in system.clauses),
                       system.sigs, system.groups)
    system.validate()
    return system
