"""Map oracles: builtin self-maps and a small expression language.

A map file is a list of component equations plus optional directives::

    f1 = 0.5*x1 + 0.5*x2;
    f2 = 0.5*x1 + 0.5*x2;
    tail zeros;
    post project

Components are expressions in the variables x1, x2, ... with ``+ - * /``,
parentheses, and the functions ``min``, ``max``, ``abs`` and ``pow`` (the
exponent must be a numeric literal). ``tail zeros`` makes every component
past the explicit list zero; ``tail shift from j`` makes component i equal
x_{i-1} for i >= j (the convention of the shift builtin). ``post project``
clamps and rescales the raw output onto the simplex.
"""

import re
from dataclasses import dataclass

from .errors import (
    DivisionByZero,
    EmptyComponentList,
    MapSyntaxError,
    RangeViolation,
    UndeclaredVariable,
    UnknownBuiltin,
)
from .geometry import TOL_MEMBERSHIP, Point, ZERO_EPS, basis, from_dense


class MapOracle:
    """Evaluatable self-map of the simplex with component access.

    ``support_bound`` is the largest index where a component can be
    nonzero (None when unbounded). ``face_invariant`` declares that the
    map sends the face F^{support_bound-1} into itself, which lets the
    solver work on that face directly.
    """

    name = "oracle"
    support_bound = None
    face_invariant = False

    def components_from_dense(self, xs, upto):
        """First ``upto`` components at the point with dense coords xs."""
        raise NotImplementedError

    def components(self, x, upto):
        width = max(upto + 1, x.max_index())
        return self.components_from_dense(x.dense(width), upto)

    def component(self, x, i):
        return self.components(x, i)[i - 1]

    def image_support_bound(self, x):
        """Index past which f(x) is certainly zero."""
        if self.support_bound is not None:
            return self.support_bound
        return x.max_index()

    def apply(self, x):
        """Full image f(x) as a Point."""
        bound = self.image_support_bound(x)
        return from_dense(self.components(x, bound)) if bound else Point()

    def kernel_code(self):
        """Compiled-kernel descriptor, or None when not kernel-codeable."""
        return None

    def __repr__(self):
        return f"<map {self.name}>"


class IdentityMap(MapOracle):
    name = "identity"

    def components_from_dense(self, xs, upto):
        n = len(xs)
        return [xs[i] if i < n else 0.0 for i in range(upto)]

    def kernel_code(self):
        return ("identity", 0, ())


class ShiftMap(MapOracle):
    """x -> (0, x_1, x_2, ...); unbounded support, unique fixed point 0."""

    name = "shift"

    def components_from_dense(self, xs, upto):
        n = len(xs)
        out = [0.0] * upto
        for i in range(1, upto):
            if i - 1 < n:
                out[i] = xs[i - 1]
        return out

    def image_support_bound(self, x):
        return x.max_index() + 1

    def kernel_code(self):
        return ("shift", 0, ())


class RotationMap(MapOracle):
    """Cyclic rotation of the first n coordinates, zero beyond."""

    def __init__(self, n):
        if n < 2:
            raise ValueError(f"rotation needs n >= 2, got {n}")
        self.n = n
        self.name = f"rotation-{n}"
        self.support_bound = n
        self.face_invariant = True

    def components_from_dense(self, xs, upto):
        width = len(xs)
        out = [0.0] * upto
        for i in range(min(upto, self.n)):
            src = self.n - 1 if i == 0 else i - 1
            out[i] = xs[src] if src < width else 0.0
        return out

    def kernel_code(self):
        return ("rotation", self.n, ())


class ConstantMap(MapOracle):
    """f(x) = p for every x."""

    def __init__(self, p):
        if not isinstance(p, Point):
            p = from_dense(p)
        self.point = p
        self.name = f"constant({p!r})"
        self.support_bound = max(p.max_index(), 1)
        self.face_invariant = abs(p.mass() - 1.0) <= TOL_MEMBERSHIP

    def components_from_dense(self, xs, upto):
        dense = self.point.dense(upto)
        return dense

    def kernel_code(self):
        bound = self.point.max_index()
        return ("constant", 0, tuple(self.point.dense(bound)))


class ConvexComboMap(MapOracle):
    """Pointwise mix t*f + (1-t)*g of two oracles."""

    def __init__(self, f, g, t):
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"mixing weight must be in [0, 1], got {t}")
        self.f = f
        self.g = g
        self.t = float(t)
        self.name = f"combo({f.name}, {g.name}, {self.t:g})"
        if f.support_bound is not None and g.support_bound is not None:
            self.support_bound = max(f.support_bound, g.support_bound)
        self.face_invariant = f.face_invariant and g.face_invariant

    def components_from_dense(self, xs, upto):
        a = self.f.components_from_dense(xs, upto)
        b = self.g.components_from_dense(xs, upto)
        t = self.t
        return [t * u + (1.0 - t) * v for u, v in zip(a, b)]

    def image_support_bound(self, x):
        return max(self.f.image_support_bound(x), self.g.image_support_bound(x))


def builtin(name, **params):
    """Builtin oracle by name: identity, shift, rotation, constant, convex-combo."""
    if name == "identity":
        return IdentityMap()
    if name == "shift":
        return ShiftMap()
    if name == "rotation":
        return RotationMap(params.get("n", 3))
    if name == "constant":
        if "point" not in params:
            raise UnknownBuiltin("constant requires a point= parameter")
        return ConstantMap(params["point"])
    if name in ("convex-combo", "combo"):
        try:
            return ConvexComboMap(params["f"], params["g"], params.get("t", 0.5))
        except KeyError as missing:
            raise UnknownBuiltin(f"convex-combo requires f= and g= ({missing})") from None
    raise UnknownBuiltin(f"unknown builtin map {name!r}")


def builtin_suite():
    """Canonical instances used across the test surface."""
    return [
        builtin("identity"),
        builtin("shift"),
        builtin("rotation", n=2),
        builtin("rotation", n=3),
        builtin("constant", point=basis(1)),
        builtin("constant", point=basis(3)),
        builtin("convex-combo", f=builtin("identity"), g=builtin("rotation", n=3), t=0.5),
    ]


def project_to_simplex(raw):
    """Clamp to [0, 1], then rescale when the mass exceeds 1.

    Idempotent on points already in the closed simplex; continuous on
    the nonnegative orthant.
    """
    clamped = [min(1.0, max(0.0, float(v))) for v in raw]
    total = sum(clamped)
    if total > 1.0 + TOL_MEMBERSHIP:
        clamped = [v / total for v in clamped]
    return from_dense(clamped)


# --- expression language -------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>\d+\.\d*|\.\d+|\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/=;(),])"
)

_KEYWORDS = {"tail", "zeros", "shift", "from", "post", "project"}
_FUNCTIONS = {"min": 2, "max": 2, "abs": 1, "pow": 2}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


@dataclass(frozen=True)
class Zeros:
    pass


@dataclass(frozen=True)
class ShiftFrom:
    start: int


@dataclass(frozen=True)
class MapSpec:
    """Validated parse result: component ASTs, tail rule, post step."""

    components: tuple
    tail: object
    project: bool

    @property
    def support_bound(self):
        return len(self.components) if isinstance(self.tail, Zeros) else None


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(source):
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if not m:
            raise MapSyntaxError(line, col, ("number", "identifier", "operator"),
                                 source[pos])
        text = m.group(0)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, expected, tok=None):
        tok = tok or self.peek()
        found = tok.text if tok.kind != "eof" else "end of input"
        raise MapSyntaxError(tok.line, tok.col, expected, found)

    def expect(self, text, expected=None):
        tok = self.peek()
        if tok.text != text:
            self.fail(expected or (repr(text),))
        return self.advance()

    def parse(self):
        components = {}
        tail = Zeros()
        project = False
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.text == "tail":
                tail = self.parse_tail()
            elif tok.text == "post":
                self.advance()
                nxt = self.advance()
                if nxt.text != "project":
                    self.fail(("'project'",), nxt)
                project = True
            elif tok.kind == "name" and re.fullmatch(r"f[1-9][0-9]*", tok.text):
                idx, expr = self.parse_component()
                if idx in components:
                    self.fail((f"a component other than f{idx} (duplicate)",), tok)
                components[idx] = expr
            else:
                self.fail(("component 'f<i> = ...'", "'tail'", "'post'"))
            if self.peek().text == ";":
                self.advance()
            elif self.peek().kind != "eof":
                self.fail(("';'", "end of input"))
        if not components:
            raise EmptyComponentList("map defines no components")
        for i in range(1, len(components) + 1):
            if i not in components:
                raise MapSyntaxError(1, 1, (f"component f{i} (indices must be contiguous)",),
                                     f"f{max(components)}")
        ordered = tuple(components[i] for i in range(1, len(components) + 1))
        return MapSpec(components=ordered, tail=tail, project=project)

    def parse_tail(self):
        self.advance()  # 'tail'
        tok = self.advance()
        if tok.text == "zeros":
            return Zeros()
        if tok.text == "shift":
            self.expect("from", ("'from'",))
            num = self.advance()
            if num.kind != "num" or "." in num.text:
                self.fail(("integer start index",), num)
            return ShiftFrom(int(num.text))
        self.fail(("'zeros'", "'shift from <j>'"), tok)

    def parse_component(self):
        name = self.advance()
        idx = int(name.text[1:])
        self.expect("=", ("'='",))
        expr = self.parse_expr()
        return idx, expr

    def parse_expr(self):
        node = self.parse_term()
        while self.peek().text in ("+", "-"):
            op = self.advance().text
            node = Bin(op, node, self.parse_term())
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.peek().text in ("*", "/"):
            op = self.advance().text
            node = Bin(op, node, self.parse_factor())
        return node

    def parse_factor(self):
        tok = self.peek()
        if tok.text == "-":
            self.advance()
            return Neg(self.parse_factor())
        if tok.text == "(":
            self.advance()
            node = self.parse_expr()
            self.expect(")", ("')'",))
            return node
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "name":
            if tok.text in _FUNCTIONS:
                return self.parse_call()
            m = re.fullmatch(r"x([1-9][0-9]*)", tok.text)
            if m:
                self.advance()
                return Var(int(m.group(1)))
            if tok.text in _KEYWORDS or re.fullmatch(r"f[1-9][0-9]*", tok.text):
                self.fail(("expression",), tok)
            raise UndeclaredVariable(tok.line, tok.col, tok.text)
        self.fail(("number", "variable", "function", "'('"))

    def parse_call(self):
        name = self.advance()
        arity = _FUNCTIONS[name.text]
        self.expect("(", ("'('",))
        args = [self.parse_expr()]
        while self.peek().text == ",":
            self.advance()
            args.append(self.parse_expr())
        self.expect(")", ("')'", "','"))
        if len(args) != arity:
            raise MapSyntaxError(name.line, name.col,
                                 (f"{arity} argument(s) to {name.text}",),
                                 f"{len(args)} argument(s)")
        if name.text == "pow" and not isinstance(args[1], (Num, Neg)):
            raise MapSyntaxError(name.line, name.col,
                                 ("numeric exponent literal",), "expression")
        if name.text == "pow" and isinstance(args[1], Neg) and not isinstance(args[1].operand, Num):
            raise MapSyntaxError(name.line, name.col,
                                 ("numeric exponent literal",), "expression")
        return Call(name.text, tuple(args))


def parse_map(source):
    """Parse map source text into a MapSpec, with positioned diagnostics."""
    return _Parser(_tokenize(source)).parse()


def _eval(node, lookup, point):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return lookup(node.index)
    if isinstance(node, Neg):
        return -_eval(node.operand, lookup, point)
    if isinstance(node, Bin):
        a = _eval(node.left, lookup, point)
        b = _eval(node.right, lookup, point)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0.0:
            raise DivisionByZero(f"division by zero at input {point!r}", point)
        return a / b
    if isinstance(node, Call):
        args = [_eval(a, lookup, point) for a in node.args]
        if node.func == "min":
            return min(args)
        if node.func == "max":
            return max(args)
        if node.func == "abs":
            return abs(args[0])
        base, exp = args
        if base == 0.0 and exp < 0.0:
            raise DivisionByZero(f"zero raised to {exp} at input {point!r}", point)
        return base ** exp
    raise TypeError(f"unknown AST node {node!r}")


def evaluate_map(spec, x):
    """Evaluate a MapSpec at a point of the closed simplex.

    Without a projection step the raw output must already lie in the
    simplex (RangeViolation otherwise).
    """
    if not isinstance(x, Point):
        x = from_dense(x)

    def lookup(i):
        return x.value(i)

    raw = [_eval(c, lookup, x) for c in spec.components]
    n = len(raw)
    if isinstance(spec.tail, ShiftFrom):
        top = x.max_index() + 1
        for i in range(n + 1, top + 1):
            raw.append(x.value(i - 1) if i >= spec.tail.start else 0.0)
    if spec.project:
        return project_to_simplex(raw)
    total = 0.0
    for j, v in enumerate(raw):
        if v < -TOL_MEMBERSHIP or v > 1.0 + TOL_MEMBERSHIP:
            raise RangeViolation(f"component {j + 1} = {v!r} outside [0, 1] at {x!r}")
        raw[j] = min(1.0, max(0.0, v))
        total += raw[j]
    if total > 1.0 + TOL_MEMBERSHIP:
        raise RangeViolation(f"components sum to {total!r} > 1 at {x!r}")
    return from_dense(raw)


class ParsedMap(MapOracle):
    """Oracle backed by a parsed MapSpec."""

    def __init__(self, spec, name="parsed"):
        self.spec = spec
        self.name = name
        self.support_bound = spec.support_bound

    def components_from_dense(self, xs, upto):
        x = from_dense([max(0.0, v) for v in xs])
        image = evaluate_map(self.spec, x)
        return image.dense(upto)

    def image_support_bound(self, x):
        if self.support_bound is not None:
            return self.support_bound
        return max(len(self.spec.components), x.max_index() + 1)

    def apply(self, x):
        return evaluate_map(self.spec, x)


def _render_expr(node, parent_prec=0):
    if isinstance(node, Num):
        v = node.value
        if v == int(v) and abs(v) < 1e15:
            return str(int(v))
        text = repr(v)
        if "e" in text or "E" in text:
            text = f"{v:.17f}"
        return text
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Neg):
        inner = _render_expr(node.operand, 3)
        return f"-{inner}"
    if isinstance(node, Call):
        args = ", ".join(_render_expr(a) for a in node.args)
        return f"{node.func}({args})"
    prec = 1 if node.op in "+-" else 2
    left = _render_expr(node.left, prec)
    right = _render_expr(node.right, prec + 1)
    text = f"{left} {node.op} {right}"
    if prec < parent_prec:
        return f"({text})"
    return text


def render_map(spec):
    """Source text whose parse equals ``spec`` (round trip)."""
    lines = [f"f{i + 1} = {_render_expr(c)}" for i, c in enumerate(spec.components)]
    if isinstance(spec.tail, ShiftFrom):
        lines.append(f"tail shift from {spec.tail.start}")
    else:
        lines.append("tail zeros")
    if spec.project:
        lines.append("post project")
    return ";\n".join(lines) + "\n"


def load_map_file(path):
    """Parse a map file into an oracle named after the file."""
    with open(path, "r", encoding="utf-8") as fh:
        source = fh.read()
    spec = parse_map(source)
    import os
    return ParsedMap(spec, name=os.path.splitext(os.path.basename(path))[0])
