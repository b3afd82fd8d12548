"""A small text language for cup/cap diagrams and its evaluator.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('|' factor)*
    factor := atom (';' atom)*
    atom   := 'cup' '(' site ',' site ':' type ')'
            | 'cap' '(' site ',' site ':' type ')'
            | scalar '*' atom
            | '(' expr ')'
    type   := 'd1' | 'd2' | 'o1' | 'o2'
    scalar := real | imag | real ('+'|'-') imag     (imag is a number suffixed by i or j)

``a ; b`` stacks ``a`` on top of ``b`` (``b`` acts first) and ``a | b`` places
the two side by side. A complex scalar may be wrapped in parentheses, e.g.
``(0.5-1i)*cup(1,2:d1)``.

Every strand carries its site label. When composing, strands that only one
side touches pass straight through the other, so ``cap(2,3:d1) ; (cup(1,2:d1)
| cup(3,4:d1))`` is a two-site state on sites 1 and 4.
"""

from dataclasses import dataclass
import json
import re

import numpy as np

from .cupcap import CupType, cup_vector
from .tl_algebra import TLParams

MAX_SITE = 8


class DiagramError(ValueError):
    pass


class DiagramSyntaxError(DiagramError):
    def __init__(self, message, line=1, col=1, expected=()):
        self.line = line
        self.col = col
        self.expected = tuple(sorted(expected))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"line {line}, column {col}: {message}{detail}")


class DisjointnessViolation(DiagramError):
    pass


class CrossingViolation(DisjointnessViolation):
    pass


class BoundaryMismatch(DiagramError):
    pass


# --- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Cup:
    i: int
    j: int
    t: CupType


@dataclass(frozen=True)
class Cap:
    i: int
    j: int
    t: CupType


@dataclass(frozen=True)
class Tensor:
    parts: tuple


@dataclass(frozen=True)
class Compose:
    top: object
    bottom: object


@dataclass(frozen=True)
class ScalarMul:
    c: complex
    diagram: object


@dataclass(frozen=True)
class Sum:
    terms: tuple


def boundary(node) -> tuple:
    """(outputs, inputs) as frozensets of site labels."""
    if isinstance(node, Cup):
        return frozenset((node.i, node.j)), frozenset()
    if isinstance(node, Cap):
        return frozenset(), frozenset((node.i, node.j))
    if isinstance(node, ScalarMul):
        return boundary(node.diagram)
    if isinstance(node, Sum):
        return boundary(node.terms[0])
    if isinstance(node, Tensor):
        outs, ins = frozenset(), frozenset()
        for part in node.parts:
            o, i = boundary(part)
            outs |= o
            ins |= i
        return outs, ins
    if isinstance(node, Compose):
        to, ti = boundary(node.top)
        bo, bi = boundary(node.bottom)
        return to | (bo - ti), bi | (ti - bo)
    raise TypeError(f"not a diagram node: {node!r}")


def sites(node) -> frozenset:
    o, i = boundary(node)
    return o | i


def is_closed(node) -> bool:
    return not sites(node)


def _arcs(node):
    if isinstance(node, (Cup, Cap)):
        return [(node.i, node.j)]
    return []


def _check_tensor(parts):
    seen = set()
    for part in parts:
        s = sites(part)
        overlap = seen & s
        if overlap:
            raise DisjointnessViolation(f"sites {sorted(overlap)} used twice in one horizontal layer")
        seen |= s
    arcs = [a for part in parts for a in _arcs(part)]
    for a, b in arcs:
        for c, d in arcs:
            if a < c < b < d:
                raise CrossingViolation(f"arcs ({a},{b}) and ({c},{d}) cross")


def _check_compose(top, bottom):
    to, ti = boundary(top)
    bo, bi = boundary(bottom)
    up = bo - ti
    down = ti - bo
    if up & to:
        raise BoundaryMismatch(f"sites {sorted(up & to)} emerge from both layers of a composition")
    if down & bi:
        raise BoundaryMismatch(f"sites {sorted(down & bi)} enter both layers of a composition")


def _check_sum(terms):
    b0 = boundary(terms[0])
    for term in terms[1:]:
        if boundary(term) != b0:
            raise BoundaryMismatch("summands have different free sites")


def make_tensor(parts) -> Tensor:
    parts = tuple(parts)
    _check_tensor(parts)
    return Tensor(parts)


def make_compose(top, bottom) -> Compose:
    _check_compose(top, bottom)
    return Compose(top, bottom)


def make_sum(terms) -> Sum:
    terms = tuple(terms)
    _check_sum(terms)
    return Sum(terms)


def mirror(node):
    """Upside-down copy: cups become caps, stacking order flips, scalars conjugate."""
    if isinstance(node, Cup):
        return Cap(node.i, node.j, node.t)
    if isinstance(node, Cap):
        return Cup(node.i, node.j, node.t)
    if isinstance(node, Tensor):
        return Tensor(tuple(mirror(p) for p in node.parts))
    if isinstance(node, Compose):
        return Compose(mirror(node.bottom), mirror(node.top))
    if isinstance(node, ScalarMul):
        return ScalarMul(complex(node.c).conjugate(), mirror(node.diagram))
    if isinstance(node, Sum):
        return Sum(tuple(mirror(t) for t in node.terms))
    raise TypeError(f"not a diagram node: {node!r}")


# --- lexer / parser ---------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?[ij]?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<punct>[()+\-*;|,:])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise DiagramSyntaxError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind == "ws":
            for k, ch in enumerate(text):
                if ch == "\n":
                    line += 1
                    line_start = pos + k + 1
        else:
            tokens.append(Token("punct" if kind == "punct" else kind, text, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _is_imag(tok) -> bool:
    return tok.kind == "num" and tok.text[-1] in "ij"


def _num_value(tok) -> complex:
    if _is_imag(tok):
        return complex(0.0, float(tok.text[:-1]))
    return complex(float(tok.text), 0.0)


class Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.pos = 0

    def peek(self, k=0) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def error(self, message, expected=()):
        tok = self.peek()
        raise DiagramSyntaxError(message, tok.line, tok.col, expected)

    def accept(self, text) -> bool:
        tok = self.peek()
        if tok.kind in ("punct", "name") and tok.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text) -> Token:
        tok = self.peek()
        if not self.accept(text):
            found = tok.text or "end of input"
            self.error(f"found {found!r}", {repr(text)})
        return tok

    def parse(self):
        node = self.expr()
        if self.peek().kind != "eof":
            self.error(f"unexpected {self.peek().text!r}", {"'+'", "'-'", "'|'", "';'", "end of input"})
        return node

    def expr(self):
        terms = [self.term()]
        while self.peek().text in ("+", "-") and self.peek().kind == "punct":
            op = self.peek().text
            self.pos += 1
            t = self.term()
            terms.append(t if op == "+" else ScalarMul(-1.0 + 0j, t))
        return terms[0] if len(terms) == 1 else make_sum(terms)

    def term(self):
        parts = [self.factor()]
        while self.accept("|"):
            parts.append(self.factor())
        return parts[0] if len(parts) == 1 else make_tensor(parts)

    def factor(self):
        node = self.atom()
        while self.accept(";"):
            node = make_compose(node, self.atom())
        return node

    def atom(self):
        tok = self.peek()
        if tok.kind == "name" and tok.text in ("cup", "cap"):
            return self.leaf()
        c = self.scalar()
        if c is not None:
            self.expect("*")
            return ScalarMul(c, self.atom())
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        found = tok.text or "end of input"
        self.error(f"found {found!r}", {"'cup'", "'cap'", "'('", "number"})

    def leaf(self):
        kind = self.peek().text
        self.pos += 1
        self.expect("(")
        start = self.peek()
        i = self.site()
        self.expect(",")
        j = self.site()
        self.expect(":")
        t = self.peek()
        if t.kind != "name" or t.text not in {c.value for c in CupType}:
            self.error(f"unknown cup type {t.text!r}", {"d1", "d2", "o1", "o2"})
        self.pos += 1
        self.expect(")")
        if not i < j:
            raise DiagramSyntaxError(f"{kind} sites must be increasing, got ({i},{j})", start.line, start.col)
        cls = Cup if kind == "cup" else Cap
        return cls(i, j, CupType(t.text))

    def site(self) -> int:
        tok = self.peek()
        if tok.kind != "num" or not tok.text.isdigit():
            self.error(f"found {tok.text or 'end of input'!r}", {"site number"})
        value = int(tok.text)
        if not 1 <= value <= MAX_SITE:
            self.error(f"site {value} outside 1..{MAX_SITE}")
        self.pos += 1
        return value

    def _signed_number(self, start):
        k = start
        sign = 1.0
        if self.peek(k).kind == "punct" and self.peek(k).text in "+-":
            sign = -1.0 if self.peek(k).text == "-" else 1.0
            k += 1
        if self.peek(k).kind != "num":
            return None, start
        return sign * _num_value(self.peek(k)), k + 1

    def _complex_at(self, start):
        """Scan a complex literal from token offset ``start`` without consuming."""
        value, k = self._signed_number(start)
        if value is None:
            return None, start
        nxt = self.peek(k)
        if value.imag == 0 and nxt.kind == "punct" and nxt.text in "+-" and _is_imag(self.peek(k + 1)):
            sign = -1.0 if nxt.text == "-" else 1.0
            value = value + sign * _num_value(self.peek(k + 1))
            k += 2
        return value, k

    def scalar(self):
        value, k = self._complex_at(0)
        if value is not None and self.peek(k).text == "*":
            self.pos += k
            return value
        if self.peek().text == "(":
            value, k = self._complex_at(1)
            if value is not None and self.peek(k).text == ")" and self.peek(k + 1).text == "*":
                self.pos += k + 1
                return value
        return None


def parse(src: str):
    """Parse DSL source into a diagram AST, validating its site structure."""
    return Parser(src).parse()


# --- evaluation -------------------------------------------------------------


@dataclass(frozen=True)
class LinearMap:
    """Tensor with one axis per output site then one per input site (sorted)."""

    outputs: tuple
    inputs: tuple
    tensor: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return self.tensor.reshape(2 ** len(self.outputs), 2 ** len(self.inputs))


def _identity(site_set) -> LinearMap:
    s = tuple(sorted(site_set))
    k = len(s)
    t = np.eye(2**k, dtype=complex).reshape((2,) * (2 * k))
    return LinearMap(s, s, t)


def _tensor(a: LinearMap, b: LinearMap) -> LinearMap:
    t = np.multiply.outer(a.tensor, b.tensor)
    labels = (
        [("o", s) for s in a.outputs]
        + [("i", s) for s in a.inputs]
        + [("o", s) for s in b.outputs]
        + [("i", s) for s in b.inputs]
    )
    outs = tuple(sorted(a.outputs + b.outputs))
    ins = tuple(sorted(a.inputs + b.inputs))
    order = [labels.index(("o", s)) for s in outs] + [labels.index(("i", s)) for s in ins]
    return LinearMap(outs, ins, np.transpose(t, order))


def _compose(top: LinearMap, bottom: LinearMap) -> LinearMap:
    up = set(bottom.outputs) - set(top.inputs)
    down = set(top.inputs) - set(bottom.outputs)
    if up:
        top = _tensor(top, _identity(up))
    if down:
        bottom = _tensor(bottom, _identity(down))
    n_out = len(top.outputs)
    n_glue = len(top.inputs)
    t = np.tensordot(
        top.tensor,
        bottom.tensor,
        axes=(list(range(n_out, n_out + n_glue)), list(range(n_glue))),
    )
    return LinearMap(top.outputs, bottom.inputs, t)


def to_map(node, p: TLParams) -> LinearMap:
    if isinstance(node, Cup):
        return LinearMap((node.i, node.j), (), cup_vector(node.t, p).reshape(2, 2))
    if isinstance(node, Cap):
        return LinearMap((), (node.i, node.j), cup_vector(node.t, p).conj().reshape(2, 2))
    if isinstance(node, ScalarMul):
        m = to_map(node.diagram, p)
        return LinearMap(m.outputs, m.inputs, complex(node.c) * m.tensor)
    if isinstance(node, Sum):
        maps = [to_map(t, p) for t in node.terms]
        total = maps[0].tensor.copy()
        for m in maps[1:]:
            total = total + m.tensor
        return LinearMap(maps[0].outputs, maps[0].inputs, total)
    if isinstance(node, Tensor):
        out = to_map(node.parts[0], p)
        for part in node.parts[1:]:
            out = _tensor(out, to_map(part, p))
        return out
    if isinstance(node, Compose):
        return _compose(to_map(node.top, p), to_map(node.bottom, p))
    raise TypeError(f"not a diagram node: {node!r}")


@dataclass(frozen=True)
class EvalResult:
    kind: str  # scalar | state | costate | op
    value: object
    outputs: tuple = ()
    inputs: tuple = ()

    @property
    def shape(self) -> tuple:
        if self.kind == "scalar":
            return (1, 1)
        return (2 ** len(self.outputs), 2 ** len(self.inputs))

    def to_json(self) -> dict:
        flat = np.atleast_1d(np.asarray(self.value, dtype=complex)).ravel()
        rows, cols = self.shape
        return {
            "kind": self.kind,
            "dim": cols if self.kind == "costate" else rows,
            "shape": [rows, cols],
            "sites": {"out": list(self.outputs), "in": list(self.inputs)},
            "data": [[float(z.real), float(z.imag)] for z in flat],
        }


def evaluate(diag, p: TLParams) -> EvalResult:
    """Evaluate a diagram (AST or DSL source) under the spin realization."""
    if isinstance(diag, str):
        diag = parse(diag)
    m = to_map(diag, p)
    if not m.outputs and not m.inputs:
        return EvalResult("scalar", complex(m.tensor.reshape(())))
    if not m.inputs:
        return EvalResult("state", m.matrix[:, 0].copy(), m.outputs, ())
    if not m.outputs:
        return EvalResult("costate", m.matrix[0, :].copy(), (), m.inputs)
    return EvalResult("op", m.matrix.copy(), m.outputs, m.inputs)


def dumps(result: EvalResult) -> str:
    return json.dumps(result.to_json())
