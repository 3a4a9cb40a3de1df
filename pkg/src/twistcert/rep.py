"""The matrix representation carried by twists about lifted curves.

The twist about a lifted curve acts L_g-linearly on the span of the two
handle classes a1, b1 (everything else it adds dies under the collapse
map Phi).  Writing the action in the (a1, b1) basis, with matrices
acting on coordinate columns, gives a 2x2 matrix over L_g whose entries
are convolution sums in the lift's m and n families; those sums are
exactly involution products, so the matrix is

    [ 1 + inv(n) m   -inv(m) m ]
    [   inv(n) n    1 - inv(m) n ]

Applying Phi entrywise lands in SL_2 of the one-variable ring L.  The
built-in bounding-curve lift maps to N = [[1, t - 2 + t^-1], [0, 1]],
and pushing it forward under k-th powers of the handle twist conjugates
N by M_k = [[1, 0], [k, 1]].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .homology import LiftClass, validate_lift
from .laurent import (
    LaurentPoly,
    LaurentRing,
    parse_poly,
    single_variable_ring,
    specialize_phi,
)


@dataclass(frozen=True)
class Matrix2:
    """An immutable 2x2 matrix with Laurent polynomial entries."""

    a: LaurentPoly
    b: LaurentPoly
    c: LaurentPoly
    d: LaurentPoly

    def __post_init__(self):
        ring = self.a.ring
        for entry in (self.b, self.c, self.d):
            if entry.ring != ring:
                raise ValueError("matrix entries live in different rings")

    @property
    def ring(self) -> LaurentRing:
        return self.a.ring

    @classmethod
    def identity(cls, ring: LaurentRing) -> "Matrix2":
        one, zero = ring.one(), ring.zero()
        return cls(one, zero, zero, one)

    @classmethod
    def from_rows(cls, ring: LaurentRing, rows: Sequence[Sequence]) -> "Matrix2":
        def entry(x) -> LaurentPoly:
            if isinstance(x, LaurentPoly):
                if x.ring != ring:
                    raise ValueError("entry lives in the wrong ring")
                return x
            if isinstance(x, str):
                return parse_poly(x, ring)
            return ring.constant(x)

        (a, b), (c, d) = rows
        return cls(entry(a), entry(b), entry(c), entry(d))

    def entries(self) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly, LaurentPoly]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> LaurentPoly:
        return self.a * self.d - self.b * self.c

    def trace(self) -> LaurentPoly:
        return self.a + self.d

    def __matmul__(self, other: "Matrix2") -> "Matrix2":
        if not isinstance(other, Matrix2):
            return NotImplemented
        if self.ring != other.ring:
            raise ValueError("matrices live in different rings")
        return Matrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Matrix2":
        """The inverse, defined when the determinant is a unit.

        Laurent units are signed monomials, so the adjugate divided by
        the determinant stays in the ring.
        """
        det = self.det()
        inv_det = det.unit_inverse()
        return Matrix2(inv_det * self.d, -(inv_det * self.b),
                       -(inv_det * self.c), inv_det * self.a)

    def __pow__(self, k: int) -> "Matrix2":
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = Matrix2.identity(self.ring)
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_identity(self) -> bool:
        return self == Matrix2.identity(self.ring)

    def map_entries(self, fn) -> "Matrix2":
        return Matrix2(fn(self.a), fn(self.b), fn(self.c), fn(self.d))

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b),
                "c": str(self.c), "d": str(self.d)}

    @classmethod
    def from_json(cls, ring: LaurentRing, data: Mapping) -> "Matrix2":
        try:
            return cls(*(parse_poly(data[k], ring) for k in "abcd"))
        except KeyError as exc:
            raise ValueError(f"matrix record is missing entry {exc}") from None

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def multiply(matrices: Iterable[Matrix2],
             ring: Optional[LaurentRing] = None) -> Matrix2:
    """The ordered product of a sequence of matrices."""
    out = None
    for mat in matrices:
        out = mat if out is None else out @ mat
    if out is None:
        if ring is None:
            raise ValueError("empty product needs an explicit ring")
        return Matrix2.identity(ring)
    return out


def rho_pre_phi(lift: LiftClass) -> Matrix2:
    """The twist's matrix on the handle span, before specialization.

    Entries are over the full ring L_g.  The determinant is
    1 + inv(n) m - inv(m) n, which is 1 exactly when the lift passes
    validation; the commutator part of the lift never reaches the
    handle span and does not enter.
    """
    ring = lift.ring
    one = ring.one()
    m, n = lift.m, lift.n
    m_bar, n_bar = m.involution(), n.involution()
    return Matrix2(one + n_bar * m, -(m_bar * m),
                   n_bar * n, one - m_bar * n)


def rho(lift: LiftClass) -> Matrix2:
    """The represented matrix over L, after applying Phi entrywise."""
    report = validate_lift(lift)
    if not report.ok:
        raise ValueError(f"invalid lift: {report.detail}")
    mat = rho_pre_phi(lift).map_entries(specialize_phi)
    assert mat.det() == mat.ring.one()
    return mat


def matrix_N(ring: Optional[LaurentRing] = None) -> Matrix2:
    """The image of the bounding-curve twist: [[1, t - 2 + t^-1], [0, 1]]."""
    if ring is None:
        ring = single_variable_ring()
    return Matrix2.from_rows(ring, [[1, "t - 2 + t^-1"], [0, 1]])


def matrix_Mk(k: int, ring: Optional[LaurentRing] = None) -> Matrix2:
    """The image of the k-th power of the handle twist: [[1, 0], [k, 1]]."""
    if not isinstance(k, int):
        raise TypeError("twist power must be an integer")
    if ring is None:
        ring = single_variable_ring()
    return Matrix2.from_rows(ring, [[1, 0], [k, 1]])


@dataclass(frozen=True)
class HFormReport:
    """Balancedness of the four polynomials attached to a matrix.

    For M = [[a, b], [c, d]] the relevant polynomials are a - 1, b, c
    and 1 - d; M lies in the subgroup cut out by the homological
    constraints exactly when all four are balanced (vanish at 1 and are
    fixed by the bar involution).
    """

    p1: LaurentPoly
    q1: LaurentPoly
    q2: LaurentPoly
    p2: LaurentPoly

    @property
    def flags(self) -> tuple[bool, bool, bool, bool]:
        return (self.p1.is_balanced(), self.q1.is_balanced(),
                self.q2.is_balanced(), self.p2.is_balanced())

    @property
    def all_balanced(self) -> bool:
        return all(self.flags)


def h_form(mat: Matrix2) -> HFormReport:
    one = mat.ring.one()
    return HFormReport(mat.a - one, mat.b, mat.c, one - mat.d)
