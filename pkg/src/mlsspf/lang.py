"""AST, parser and evaluator for conjunctions of set literals.

Literal forms: v=w, v!={}, v=u U w, v=u I w, v=u \\ w, v<=u, v in w,
v=Pow(w), v={w0,...,wH}, Finite(v), and the negations !v=w, !v<=u, !v in w,
!Finite(v).  A formula is a conjunction of such literals, written with '&'
or newlines between them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import hf
from .errors import ArityError, FormulaSyntaxError, UnboundVariable
from .limits import DEFAULT_LIMITS, Limits

EQ = "Eq"
NEQ = "Neq"
EQ_EMPTY = "EqEmpty"
NEQ_EMPTY = "NotEqEmpty"
UNION = "Union"
INTER = "Inter"
DIFF = "Diff"
SUBSETEQ = "Subseteq"
NOT_SUBSETEQ = "NotSubseteq"
IN = "In"
NOT_IN = "NotIn"
POW = "Pow"
ENUM = "Enum"
FINITE = "Finite"
NOT_FINITE = "NotFinite"

_ARITY = {
    EQ: 2, NEQ: 2, EQ_EMPTY: 1, NEQ_EMPTY: 1, UNION: 3, INTER: 3, DIFF: 3,
    SUBSETEQ: 2, NOT_SUBSETEQ: 2, IN: 2, NOT_IN: 2, POW: 2,
    FINITE: 1, NOT_FINITE: 1,
}

KEYWORDS = frozenset({"in", "U", "I", "Pow", "Finite"})


@dataclass(frozen=True)
class Literal:
    """One (possibly negated) literal; operands are variable names."""

    kind: str
    operands: tuple

    def __post_init__(self):
        object.__setattr__(self, "operands", tuple(self.operands))
        if self.kind == ENUM:
            if len(self.operands) < 2:
                raise ArityError("enumeration literal needs a target and one member")
        elif self.kind in _ARITY:
            if len(self.operands) != _ARITY[self.kind]:
                raise ArityError(
                    f"{self.kind} takes {_ARITY[self.kind]} operands, got {len(self.operands)}")
        else:
            raise ArityError(f"unknown literal kind {self.kind!r}")
        if any(not v for v in self.operands):
            raise ArityError("variable names must be nonempty")

    def render(self) -> str:
        o = self.operands
        if self.kind == EQ:
            return f"{o[0]} = {o[1]}"
        if self.kind == NEQ:
            return f"!{o[0]} = {o[1]}"
        if self.kind == EQ_EMPTY:
            return f"{o[0]} = {{}}"
        if self.kind == NEQ_EMPTY:
            return f"!{o[0]} = {{}}"
        if self.kind == UNION:
            return f"{o[0]} = {o[1]} U {o[2]}"
        if self.kind == INTER:
            return f"{o[0]} = {o[1]} I {o[2]}"
        if self.kind == DIFF:
            return f"{o[0]} = {o[1]} \\ {o[2]}"
        if self.kind == SUBSETEQ:
            return f"{o[0]} <= {o[1]}"
        if self.kind == NOT_SUBSETEQ:
            return f"!{o[0]} <= {o[1]}"
        if self.kind == IN:
            return f"{o[0]} in {o[1]}"
        if self.kind == NOT_IN:
            return f"!{o[0]} in {o[1]}"
        if self.kind == POW:
            return f"{o[0]} = Pow({o[1]})"
        if self.kind == ENUM:
            return f"{o[0]} = {{{', '.join(o[1:])}}}"
        if self.kind == FINITE:
            return f"Finite({o[0]})"
        return f"!Finite({o[0]})"


@dataclass(frozen=True)
class Formula:
    """An ordered conjunction of literals."""

    literals: tuple
    vars: tuple = field(init=False)
    has_duplicates: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "literals", tuple(self.literals))
        names = sorted({v for lit in self.literals for v in lit.operands})
        object.__setattr__(self, "vars", tuple(names))
        object.__setattr__(
            self, "has_duplicates", len(set(self.literals)) != len(self.literals))

    def render(self) -> str:
        return " & ".join(lit.render() for lit in self.literals)


_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|<=|[=!{},()\\&\n]|[^\sA-Za-z_]")


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            tokens.append(("\n", line, col))
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {ch!r}", line, col)
        tok = m.group()
        if len(tok) == 1 and not (tok.isalnum() or tok in "_={}!,()\\&<"):
            raise FormulaSyntaxError(f"unexpected character {tok!r}", line, col)
        tokens.append((tok, line, col))
        col += len(tok)
        i = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def loc(self):
        if self.pos < len(self.tokens):
            _, line, col = self.tokens[self.pos]
            return line, col
        if self.tokens:
            _, line, col = self.tokens[-1]
            return line, col + 1
        return 1, 1

    def take(self, expected=None):
        if self.pos >= len(self.tokens):
            line, col = self.loc()
            raise FormulaSyntaxError(
                f"unexpected end of input, expected {expected!r}", line, col)
        tok, line, col = self.tokens[self.pos]
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, got {tok!r}", line, col)
        self.pos += 1
        return tok

    def variable(self):
        line, col = self.loc()
        if self.pos >= len(self.tokens):
            raise FormulaSyntaxError("expected a variable, found end of input",
                                     line, col)
        tok = self.tokens[self.pos][0]
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok) or tok in KEYWORDS:
            raise FormulaSyntaxError(f"expected a variable, got {tok!r}", line, col)
        self.pos += 1
        return tok

    def literal(self):
        negated = False
        if self.peek() == "!":
            self.take()
            negated = True
        if self.peek() == "Finite":
            self.take()
            self.take("(")
            v = self.variable()
            self.take(")")
            return Literal(NOT_FINITE if negated else FINITE, (v,))
        line, col = self.loc()
        v = self.variable()
        op = self.peek()
        if op == "<=":
            self.take()
            u = self.variable()
            return Literal(NOT_SUBSETEQ if negated else SUBSETEQ, (v, u))
        if op == "in":
            self.take()
            w = self.variable()
            return Literal(NOT_IN if negated else IN, (v, w))
        if op != "=":
            raise FormulaSyntaxError(f"expected '=', '<=' or 'in' after {v!r}", *self.loc())
        self.take("=")
        nxt = self.peek()
        if nxt == "{":
            self.take()
            if self.peek() == "}":
                self.take()
                return Literal(NEQ_EMPTY if negated else EQ_EMPTY, (v,))
            members = [self.variable()]
            while self.peek() == ",":
                self.take()
                members.append(self.variable())
            self.take("}")
            if negated:
                raise FormulaSyntaxError(
                    "'!' cannot negate an enumeration literal", line, col)
            return Literal(ENUM, (v, *members))
        if nxt == "Pow":
            self.take()
            self.take("(")
            w = self.variable()
            self.take(")")
            if negated:
                raise FormulaSyntaxError(
                    "'!' cannot negate a powerset literal", line, col)
            return Literal(POW, (v, w))
        u = self.variable()
        op2 = self.peek()
        if op2 in ("U", "I", "\\"):
            self.take()
            w = self.variable()
            if negated:
                raise FormulaSyntaxError(
                    "'!' cannot negate a Boolean-operator literal", line, col)
            kind = {"U": UNION, "I": INTER, "\\": DIFF}[op2]
            return Literal(kind, (v, u, w))
        return Literal(NEQ if negated else EQ, (v, u))


def parse(text: str) -> Formula:
    """Parse the concrete syntax into a Formula; raises FormulaSyntaxError."""
    tokens = _tokenize(text)
    p = _Parser(tokens)
    literals = []
    while p.peek() == "\n":
        p.take()
    if p.peek() is None:
        raise FormulaSyntaxError("empty formula", 1, 1)
    literals.append(p.literal())
    while p.peek() is not None:
        sep = p.peek()
        if sep not in ("&", "\n"):
            raise FormulaSyntaxError(f"expected '&' or newline, got {sep!r}", *p.loc())
        while p.peek() in ("&", "\n"):
            p.take()
        if p.peek() is None:
            break
        literals.append(p.literal())
    return Formula(tuple(literals))


@dataclass(frozen=True)
class SatisfactionReport:
    """Per-literal truth values under one assignment."""

    results: tuple
    satisfied: bool

    def to_json(self):
        return {"literals": list(self.results), "satisfied": self.satisfied}


def _lookup(assignment, var):
    try:
        return assignment.bindings[var]
    except KeyError:
        raise UnboundVariable(f"variable {var!r} is not bound") from None


def eval_literal(lit: Literal, assignment, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Truth of one literal under a finite assignment.

    Finite(v) is true of every hereditarily finite value, so NotFinite is
    false under any assignment evaluated here; witnessing semantics for
    NotFinite live in the pumping machinery, not in this evaluator.
    """
    vals = [_lookup(assignment, v) for v in lit.operands]
    k = lit.kind
    if k == EQ:
        return vals[0] is vals[1]
    if k == NEQ:
        return vals[0] is not vals[1]
    if k == EQ_EMPTY:
        return vals[0] is hf.EMPTY
    if k == NEQ_EMPTY:
        return vals[0] is not hf.EMPTY
    if k == UNION:
        return vals[0] is hf.bool_op(vals[1], vals[2], "U")
    if k == INTER:
        return vals[0] is hf.bool_op(vals[1], vals[2], "I")
    if k == DIFF:
        return vals[0] is hf.bool_op(vals[1], vals[2], "\\")
    if k == SUBSETEQ:
        return hf.subset(vals[0], vals[1])
    if k == NOT_SUBSETEQ:
        return not hf.subset(vals[0], vals[1])
    if k == IN:
        return vals[0] in vals[1]
    if k == NOT_IN:
        return vals[0] not in vals[1]
    if k == POW:
        return vals[0] is hf.powerset(vals[1], limits.pow_limit)
    if k == ENUM:
        return vals[0] is hf.make_set(vals[1:])
    if k == FINITE:
        return True
    return False  # NotFinite


def evaluate(formula: Formula, assignment, limits: Limits = DEFAULT_LIMITS) -> SatisfactionReport:
    """Evaluate every literal; satisfied means the assignment is a model."""
    results = tuple(eval_literal(lit, assignment, limits) for lit in formula.literals)
    return SatisfactionReport(results, all(results))


def drop_finite_literals(formula: Formula) -> Formula:
    """The formula with every Finite/NotFinite literal removed, order kept."""
    return Formula(tuple(
        lit for lit in formula.literals if lit.kind not in (FINITE, NOT_FINITE)))
