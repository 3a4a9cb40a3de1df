"""The regular tree on which SL2 of the Laurent ring acts.

Vertices are homothety classes of rank-two lattices over the local ring
O of rational functions regular at t = 0.  Every class has a unique
representative matrix [[t^a, r], [0, 1]] where r is a Laurent
polynomial whose exponents all lie below a, so a vertex is just the
pair (a, r).  The base vertex is (0, 0); the class (-1, 0) is the other
endpoint of the fundamental edge, and the two subgroups of the amalgam
are exactly the stabilizers of these two vertices.

Distances come from elementary divisors: for vertices v, w the distance
is a_v + a_w - 2 l with l = min(a_v, a_w, ord(r_v - r_w)).  Geodesics
walk down to level l and climb back up, one coefficient of r at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .laurent import LaurentPoly, ParseError, parse_poly, single_variable_ring
from .rep import Matrix2

_QT = single_variable_ring("t", "Q")


def series_ring():
    """The coefficient ring used for vertices: Q Laurent polynomials in t."""
    return _QT


def _poly_divmod(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    # plain long division of polynomials (nonnegative exponents) over Q
    q = _QT.zero()
    r = a
    db = b.degree()
    lead = b.coeff((db,))
    while r and r.degree() >= db:
        k = r.degree() - db
        c = Fraction(r.coeff((r.degree(),))) / Fraction(lead)
        term = _QT.monomial((k,), c)
        q = q + term
        r = r - term * b
    return q, r


def _poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    while b:
        a, b = b, _poly_divmod(a, b)[1]
    lead = a.coeff((a.degree(),))
    return a.scale(Fraction(1) / Fraction(lead))


class RationalFunction:
    """An element of Q(t), kept in lowest terms.

    The denominator is a monic polynomial with nonzero constant term;
    any power of t the function carries lives in the numerator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = self._coerce(num)
        den = self._coerce(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            object.__setattr__(self, "num", _QT.zero())
            object.__setattr__(self, "den", _QT.one())
            return
        shift_n = num.valuation()
        shift_d = den.valuation()
        n0 = num * _QT.monomial((-shift_n,), 1)
        d0 = den * _QT.monomial((-shift_d,), 1)
        g = _poly_gcd(n0, d0)
        n1 = _poly_divmod(n0, g)[0]
        d1 = _poly_divmod(d0, g)[0]
        lead = d1.coeff((d1.degree(),))
        n1 = n1.scale(Fraction(1) / Fraction(lead))
        d1 = d1.scale(Fraction(1) / Fraction(lead))
        object.__setattr__(self, "num", n1 * _QT.monomial((shift_n - shift_d,), 1))
        object.__setattr__(self, "den", d1)

    @staticmethod
    def _coerce(value) -> LaurentPoly:
        if isinstance(value, RationalFunction):
            raise TypeError("nested rational functions; use the arithmetic ops")
        if isinstance(value, LaurentPoly):
            if value.ring == _QT:
                return value
            if value.ring.names == ("t",):
                return value.as_domain("Q")
            raise ValueError("rational functions are univariate in t")
        return _QT.constant(value)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def wrap(cls, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        return cls(value)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = RationalFunction.wrap(other)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = RationalFunction.__new__(RationalFunction)
        object.__setattr__(out, "num", -self.num)
        object.__setattr__(out, "den", self.den)
        return out

    def __sub__(self, other):
        return self + (-RationalFunction.wrap(other))

    def __rsub__(self, other):
        return RationalFunction.wrap(other) + (-self)

    def __mul__(self, other):
        other = RationalFunction.wrap(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalFunction.wrap(other)
        if not other:
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def valuation(self) -> int:
        """Order of vanishing at t = 0 (negative for poles)."""
        return self.num.valuation()

    def is_regular_at_zero(self) -> bool:
        return not self.num or self.valuation() >= 0

    def truncate(self, bound: int) -> LaurentPoly:
        """The Laurent expansion at 0, keeping exponents below bound."""
        if not self.num:
            return _QT.zero()
        v = self.num.valuation()
        count = bound - v
        if count <= 0:
            return _QT.zero()
        num_c = {e[0] - v: Fraction(c) for e, c in self.num.terms.items()}
        den_c = {e[0]: Fraction(c) for e, c in self.den.terms.items()}
        d0 = den_c[0]
        series: list[Fraction] = []
        for i in range(count):
            acc = num_c.get(i, Fraction(0))
            for j, cj in enumerate(series):
                acc -= cj * den_c.get(i - j, Fraction(0))
            series.append(acc / d0)
        return LaurentPoly(_QT, {(v + i,): c for i, c in enumerate(series)})

    def __str__(self):
        if self.den == _QT.one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


@dataclass(frozen=True)
class TreeVertex:
    """A vertex (a, r): the lattice class of [[t^a, r], [0, 1]]."""

    a: int
    r: LaurentPoly

    def __post_init__(self):
        if self.r.ring != _QT:
            if self.r.ring.names == ("t",):
                object.__setattr__(self, "r", self.r.as_domain("Q"))
            else:
                raise ValueError("vertex tail must be univariate in t")
        if self.r and self.r.degree() >= self.a:
            raise ValueError(
                f"vertex tail {self.r} has exponents at or above level {self.a}"
            )

    @classmethod
    def base(cls) -> "TreeVertex":
        return cls(0, _QT.zero())

    def parent(self) -> "TreeVertex":
        """The neighbor one level down."""
        kept = {e: c for e, c in self.r.terms.items() if e[0] < self.a - 1}
        return TreeVertex(self.a - 1, LaurentPoly(_QT, kept))

    def child(self, coefficient) -> "TreeVertex":
        """The neighbor one level up selected by a tail coefficient."""
        return TreeVertex(
            self.a + 1, self.r + _QT.monomial((self.a,), Fraction(coefficient)))

    def neighbors(self, coefficients: Sequence = (0, 1)) -> list["TreeVertex"]:
        return [self.parent()] + [self.child(c) for c in coefficients]

    def __str__(self):
        return f"({self.a}; {self.r})"


def base_vertex() -> TreeVertex:
    return TreeVertex.base()


def odd_base_vertex() -> TreeVertex:
    """The other endpoint of the fundamental edge: (-1, 0)."""
    return TreeVertex(-1, _QT.zero())


def parse_vertex(text: str) -> TreeVertex:
    """Read a vertex back from its "(a; r)" rendering."""
    body = text.strip()
    if body == "base":
        return TreeVertex.base()
    if not (body.startswith("(") and body.endswith(")")) or ";" not in body:
        raise ParseError("expected a vertex of the form (a; r)", 0)
    level_text, _, tail_text = body[1:-1].partition(";")
    try:
        level = int(level_text.strip())
    except ValueError:
        raise ParseError(f"bad vertex level {level_text.strip()!r}", 1) from None
    return TreeVertex(level, parse_poly(tail_text.strip(), _QT))


def vertex_matrix(vertex: TreeVertex) -> Matrix2:
    """The canonical lattice representative [[t^a, r], [0, 1]]."""
    return Matrix2(_QT.monomial((vertex.a,), 1), vertex.r,
                   _QT.zero(), _QT.one())


def canonical_vertex(alpha, beta, gamma, delta) -> TreeVertex:
    """The vertex of the lattice spanned by the columns of [[a, b], [c, d]].

    Column operations over the local ring bring the matrix to upper
    triangular form; scaling by the center and by units then pins down
    the representative.
    """
    alpha = RationalFunction.wrap(alpha)
    beta = RationalFunction.wrap(beta)
    gamma = RationalFunction.wrap(gamma)
    delta = RationalFunction.wrap(delta)
    det = alpha * delta - beta * gamma
    if not det:
        raise ValueError("lattice matrix is singular")
    if not delta or (gamma and gamma.valuation() < delta.valuation()):
        alpha, beta = beta, alpha
        gamma, delta = delta, gamma
    if gamma:
        alpha = alpha - (gamma / delta) * beta
    level = det.valuation() - 2 * delta.valuation()
    return TreeVertex(level, (beta / delta).truncate(level))


def _coerce_matrix(mat: Matrix2) -> tuple[RationalFunction, ...]:
    try:
        return tuple(RationalFunction.wrap(e) for e in mat.entries())
    except ValueError:
        raise ValueError("tree actions need matrices univariate in t") from None


def act(mat: Matrix2, vertex: TreeVertex) -> TreeVertex:
    """Apply a determinant-one matrix to a vertex."""
    a, b, c, d = _coerce_matrix(mat)
    if a * d - b * c != RationalFunction(1):
        raise ValueError("tree actions need determinant one")
    power = RationalFunction(_QT.monomial((vertex.a,), 1))
    tail = RationalFunction(vertex.r)
    return canonical_vertex(a * power, a * tail + b,
                            c * power, c * tail + d)


def distance(v: TreeVertex, w: TreeVertex) -> int:
    """The path metric, via elementary divisors of the transition matrix."""
    diff = v.r - w.r
    levels = [v.a, w.a]
    if diff:
        levels.append(diff.valuation())
    return v.a + w.a - 2 * min(levels)


def first_step(v: TreeVertex, w: TreeVertex) -> TreeVertex:
    """The neighbor of v on the geodesic toward w."""
    if v == w:
        raise ValueError("the vertices coincide")
    diff = w.r - v.r
    levels = [v.a, w.a]
    if diff:
        levels.append(diff.valuation())
    if min(levels) < v.a:
        return v.parent()
    kept = {e: c for e, c in w.r.terms.items() if e[0] <= v.a}
    return TreeVertex(v.a + 1, LaurentPoly(_QT, kept))


def geodesic(v: TreeVertex, w: TreeVertex) -> list[TreeVertex]:
    """All vertices from v to w inclusive, in order."""
    path = [v]
    while path[-1] != w:
        path.append(first_step(path[-1], w))
    assert len(path) == distance(v, w) + 1
    return path


def fixes_vertex(mat: Matrix2, vertex: TreeVertex) -> bool:
    return act(mat, vertex) == vertex


def fixes_edge(mat: Matrix2, v: TreeVertex, w: TreeVertex) -> bool:
    if distance(v, w) != 1:
        raise ValueError("the two vertices are not adjacent")
    return fixes_vertex(mat, v) and fixes_vertex(mat, w)


@dataclass(frozen=True)
class TranslationReport:
    """Minimum displacement seen inside a ball, with an exactness flag.

    The displacement function is convex along the geodesic from the base
    vertex to its image, and its true minimum is attained there, so the
    scan is exact unless the minimum sat at the ball boundary with
    geodesic left over.
    """

    length: int
    exact: bool
    note: str


def translation_length(mat: Matrix2, radius: int = 8) -> TranslationReport:
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    start = TreeVertex.base()
    image = act(mat, start)
    if image == start:
        return TranslationReport(0, True, "fixes the base vertex")
    path = geodesic(start, image)
    last = min(len(path) - 1, radius)
    best = None
    best_index = 0
    for index in range(last + 1):
        moved = distance(path[index], act(mat, path[index]))
        if moved == 0:
            return TranslationReport(0, True, "found a fixed vertex")
        if best is None or moved < best:
            best, best_index = moved, index
    if best_index < last or last == len(path) - 1:
        return TranslationReport(best, True, "minimum attained inside the scan")
    return TranslationReport(
        best, False,
        f"scan stopped at the ball boundary (radius {radius}); "
        "rerun with a larger radius for certainty")


def ball_dot(center: Optional[TreeVertex] = None, radius: int = 2,
             coefficients: Sequence = (0, 1)) -> str:
    """A DOT rendering of the ball around a vertex.

    Only children whose new tail coefficient lies in the given finite
    set are explored; the full tree is infinitely branching.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if center is None:
        center = TreeVertex.base()
    seen = {center}
    frontier = [center]
    edges: list[tuple[str, str]] = []
    edge_keys = set()
    for _ in range(radius):
        next_frontier = []
        for vertex in frontier:
            for neighbor in vertex.neighbors(coefficients):
                key = frozenset((str(vertex), str(neighbor)))
                if key not in edge_keys:
                    edge_keys.add(key)
                    edges.append((str(vertex), str(neighbor)))
                if neighbor not in seen:
                    seen.add(neighbor)
                    next_frontier.append(neighbor)
        frontier = next_frontier
    lines = ["graph ball {"]
    for vertex in sorted(seen, key=lambda v: (v.a, str(v))):
        lines.append(f'  "{vertex}";')
    for left, right in edges:
        lines.append(f'  "{left}" -- "{right}";')
    lines.append("}")
    return "\n".join(lines)
