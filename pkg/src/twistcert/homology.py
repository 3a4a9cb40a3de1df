"""First homology of the universal abelian-quotient cover of a surface.

For a closed surface of genus g >= 2, the cover in question has deck
group Z^(2g-2) and its first homology is a module over the Laurent ring
L_g in the variables (s2..sg, t2..tg) = (u_1..u_{2g-2}).  As a module it
is generated by two handle classes a1, b1 together with commutator
classes [c_i, c_j] for 1 <= i < j <= 2g-2, where (c_1..c_{2g-2}) =
(a2..ag, b2..bg); the pair corresponding to [a_g, b_g], namely
(g-1, 2g-2), is redundant and excluded.

The intersection pairing between translated commutator generators is
only pinned down up to a family of signs epsilon (one per pair of
generators with disjoint or singly-overlapping index sets).  Those signs
are configuration, kept in an EpsilonTable; every quantity that feeds
the certificate pipeline is provably independent of them.

A LiftClass records the class of a lifted simple closed curve: a
w-part supported on commutator generators plus coefficient families
m, n for the translates of a1 and b1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from .laurent import (
    ExponentVector,
    LaurentPoly,
    LaurentRing,
    parse_poly,
    surface_ring,
)

IndexPair = tuple[int, int]


def excluded_pair(genus: int) -> IndexPair:
    """The commutator pair left out of the generating set: [a_g, b_g]."""
    return (genus - 1, 2 * genus - 2)


def comm_pairs(genus: int) -> list[IndexPair]:
    n = 2 * genus - 2
    skip = excluded_pair(genus)
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
            if (i, j) != skip]


@dataclass(frozen=True)
class Generator:
    """A module generator: a1, b1, or a commutator class [c_i, c_j]."""

    kind: str
    i: int = 0
    j: int = 0

    _KINDS = ("a1", "b1", "comm")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == "comm":
            if not 1 <= self.i < self.j:
                raise ValueError(f"bad commutator indices ({self.i}, {self.j})")
        elif self.i or self.j:
            raise ValueError(f"{self.kind} takes no indices")

    @classmethod
    def a1(cls) -> "Generator":
        return cls("a1")

    @classmethod
    def b1(cls) -> "Generator":
        return cls("b1")

    @classmethod
    def comm(cls, i: int, j: int) -> "Generator":
        return cls("comm", i, j)

    @property
    def pair(self) -> IndexPair:
        if self.kind != "comm":
            raise ValueError(f"{self.key()} is not a commutator generator")
        return (self.i, self.j)

    def validate(self, genus: int):
        if self.kind != "comm":
            return
        n = 2 * genus - 2
        if self.j > n:
            raise ValueError(
                f"commutator index {self.j} out of range 1..{n} for genus {genus}"
            )
        if (self.i, self.j) == excluded_pair(genus):
            raise ValueError(
                f"the pair {self.pair} is the excluded [a_g, b_g] commutator"
            )

    def sort_key(self) -> tuple:
        return (self._KINDS.index(self.kind), self.i, self.j)

    def key(self) -> str:
        if self.kind == "comm":
            return f"c:{self.i}:{self.j}"
        return self.kind

    @classmethod
    def from_key(cls, text: str) -> "Generator":
        if text == "a1":
            return cls.a1()
        if text == "b1":
            return cls.b1()
        parts = text.split(":")
        if len(parts) == 3 and parts[0] == "c":
            try:
                return cls.comm(int(parts[1]), int(parts[2]))
            except ValueError as exc:
                raise ValueError(f"bad generator key {text!r}: {exc}") from None
        raise ValueError(f"bad generator key {text!r}")


class EpsilonTable:
    """Skew-consistent intersection signs for commutator generator pairs.

    Stored canonically: a disjoint entry under the lexicographically
    smaller ordered pair first, a shared-index entry as
    (shared, smaller other, larger other).  Lookups outside the stored
    domain return 0, and reversed lookups pick up the skew sign.
    """

    def __init__(self, genus: int,
                 disjoint: Mapping[tuple[IndexPair, IndexPair], int] = (),
                 parallel: Mapping[tuple[int, int, int], int] = ()):
        if genus < 2:
            raise ValueError(f"genus must be at least 2, got {genus}")
        self.genus = genus
        self._disjoint = {}
        self._parallel = {}
        valid = set(comm_pairs(genus))
        for (p, q), v in dict(disjoint).items():
            if p not in valid or q not in valid or set(p) & set(q):
                raise ValueError(f"bad disjoint key ({p}, {q})")
            if p >= q:
                raise ValueError(f"disjoint key ({p}, {q}) is not canonical")
            if v not in (-1, 0, 1):
                raise ValueError(f"epsilon value {v} outside {{-1, 0, 1}}")
            if v:
                self._disjoint[(p, q)] = v
        n = 2 * genus - 2
        for (s, x, y), v in dict(parallel).items():
            if not (1 <= s <= n and 1 <= x < y <= n) or s in (x, y):
                raise ValueError(f"bad shared-index key ({s}, {x}, {y})")
            if v not in (-1, 0, 1):
                raise ValueError(f"epsilon value {v} outside {{-1, 0, 1}}")
            if v:
                self._parallel[(s, x, y)] = v

    @classmethod
    def zero(cls, genus: int) -> "EpsilonTable":
        return cls(genus)

    @classmethod
    def random_skew(cls, genus: int, rng, density: float = 0.6) -> "EpsilonTable":
        """A random table, mostly nonzero, for robustness tests."""
        pairs = comm_pairs(genus)
        disjoint = {}
        parallel = {}
        for a in range(len(pairs)):
            for b in range(a + 1, len(pairs)):
                p, q = pairs[a], pairs[b]
                shared = set(p) & set(q)
                if rng.random() > density:
                    continue
                v = rng.choice((-1, 1))
                if not shared:
                    disjoint[(p, q)] = v
                elif len(shared) == 1:
                    s = shared.pop()
                    x = p[0] if p[1] == s else p[1]
                    y = q[0] if q[1] == s else q[1]
                    key = (s, min(x, y), max(x, y))
                    if key not in parallel:
                        parallel[key] = v
        return cls(genus, disjoint, parallel)

    @classmethod
    def from_entries(cls, genus: int, entries: Iterable[Mapping]) -> "EpsilonTable":
        """Build a table from {"x": [i,j], "y": [k,l], "value": v} records.

        Each record fixes the sign for the ordered pair (x, y); the skew
        partner is implied.  Conflicting records are an error.
        """
        disjoint: dict = {}
        parallel: dict = {}
        valid = set(comm_pairs(genus))
        for entry in entries:
            try:
                x = (int(entry["x"][0]), int(entry["x"][1]))
                y = (int(entry["y"][0]), int(entry["y"][1]))
                v = int(entry["value"])
            except (KeyError, IndexError, TypeError) as exc:
                raise ValueError(f"malformed epsilon entry {entry!r}") from exc
            if x[0] >= x[1] or y[0] >= y[1]:
                raise ValueError(f"pair indices must be increasing in {entry!r}")
            if x not in valid or y not in valid:
                raise ValueError(
                    f"entry {entry!r} names a pair outside the generating set"
                )
            shared = set(x) & set(y)
            if len(shared) == 2:
                raise ValueError(f"pairs in {entry!r} coincide")
            if not shared:
                key, val = ((x, y), v) if x < y else ((y, x), -v)
                store = disjoint
            else:
                s = shared.pop()
                sign = 1
                x2 = x[1] if x[0] == s else x[0]
                if x[0] != s:
                    sign = -sign
                y2 = y[1] if y[0] == s else y[0]
                if y[0] != s:
                    sign = -sign
                if x2 < y2:
                    key, val = (s, x2, y2), sign * v
                else:
                    key, val = (s, y2, x2), -sign * v
                store = parallel
            if key in store and store[key] != val:
                raise ValueError(f"entry {entry!r} conflicts with an earlier one")
            store[key] = val
        return cls(genus, disjoint, parallel)

    def disjoint_value(self, p: IndexPair, q: IndexPair) -> int:
        if p < q:
            return self._disjoint.get((p, q), 0)
        return -self._disjoint.get((q, p), 0)

    def parallel_value(self, shared: int, x: int, y: int) -> int:
        if x < y:
            return self._parallel.get((shared, x, y), 0)
        return -self._parallel.get((shared, y, x), 0)


def _var(ring: LaurentRing, index: int) -> LaurentPoly:
    # index is 1-based within the fixed (s2..sg, t2..tg) ordering
    return ring.variable(index - 1)


def pair_kernel(x: IndexPair, y: IndexPair, eps: EpsilonTable,
                ring: Optional[LaurentRing] = None) -> LaurentPoly:
    """The generating polynomial sum_r ([c_x] . u^r [c_y]) u^r.

    Three cases: identical pairs pair to zero (parallel translates of a
    single curve are disjoint), disjoint index sets give the product of
    four (u-1)-type factors, and a single shared index gives the
    three-factor form with the shared variable contributing
    1 - u - u^{-1}.
    """
    if ring is None:
        ring = surface_ring(eps.genus)
    if set(x) == set(y):
        return ring.zero()
    one = ring.one()
    shared = set(x) & set(y)
    if not shared:
        v = eps.disjoint_value(x, y)
        if not v:
            return ring.zero()
        poly = (_var(ring, x[0]) - one) * (_var(ring, x[1]) - one) \
            * (_var(ring, y[0]).unit_inverse() - one) \
            * (_var(ring, y[1]).unit_inverse() - one)
        return v * poly
    s = shared.pop()
    sign = 1
    x2 = x[1] if x[0] == s else x[0]
    if x[0] != s:
        sign = -sign
    y2 = y[1] if y[0] == s else y[0]
    if y[0] != s:
        sign = -sign
    v = eps.parallel_value(s, x2, y2)
    if not v:
        return ring.zero()
    u_s = _var(ring, s)
    poly = (one - u_s - u_s.unit_inverse()) * (_var(ring, x2) - one) \
        * (_var(ring, y2).unit_inverse() - one)
    return (sign * v) * poly


def pair_generators(x: Generator, shift: Sequence[int], y: Generator,
                    eps: EpsilonTable) -> int:
    """The intersection number [x] . (u^shift [y]).

    Pairings in which either side is a1 or b1 vanish here; the symplectic
    a1/b1 pairing enters the lift-level functions pair_with_a1/b1 instead.
    """
    shift = tuple(int(e) for e in shift)
    n = 2 * eps.genus - 2
    if len(shift) != n:
        raise ValueError(f"shift of length {len(shift)} for genus {eps.genus}")
    if x.kind != "comm" or y.kind != "comm":
        return 0
    x.validate(eps.genus)
    y.validate(eps.genus)
    return pair_kernel(x.pair, y.pair, eps).coeff(shift)


class CycleClass:
    """A finite L_g-combination of module generators."""

    __slots__ = ("genus", "coeffs")

    def __init__(self, genus: int, coeffs: Mapping[Generator, LaurentPoly] = ()):
        if genus < 2:
            raise ValueError(f"genus must be at least 2, got {genus}")
        ring = surface_ring(genus)
        clean = {}
        for gen, poly in dict(coeffs).items():
            gen.validate(genus)
            if poly.ring != ring:
                raise ValueError(
                    f"coefficient of {gen.key()} lives in the wrong ring"
                )
            if poly:
                clean[gen] = poly
        object.__setattr__(self, "genus", genus)
        object.__setattr__(
            self, "coeffs",
            {g: clean[g] for g in sorted(clean, key=Generator.sort_key)},
        )

    def __setattr__(self, name, value):
        raise AttributeError("CycleClass is immutable")

    @classmethod
    def basis(cls, genus: int, gen: Generator) -> "CycleClass":
        return cls(genus, {gen: surface_ring(genus).one()})

    @property
    def ring(self) -> LaurentRing:
        return surface_ring(self.genus)

    def coeff(self, gen: Generator) -> LaurentPoly:
        return self.coeffs.get(gen, self.ring.zero())

    def a1_coeff(self) -> LaurentPoly:
        return self.coeff(Generator.a1())

    def b1_coeff(self) -> LaurentPoly:
        return self.coeff(Generator.b1())

    def comm_items(self) -> list[tuple[Generator, LaurentPoly]]:
        return [(g, p) for g, p in self.coeffs.items() if g.kind == "comm"]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycleClass):
            return NotImplemented
        return self.genus == other.genus and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.genus, tuple(self.coeffs.items())))

    def _check(self, other: "CycleClass"):
        if self.genus != other.genus:
            raise ValueError(f"mixed genera {self.genus} and {other.genus}")

    def __add__(self, other: "CycleClass") -> "CycleClass":
        self._check(other)
        out = dict(self.coeffs)
        for gen, poly in other.coeffs.items():
            out[gen] = out.get(gen, self.ring.zero()) + poly
        return CycleClass(self.genus, out)

    def __sub__(self, other: "CycleClass") -> "CycleClass":
        return self + other.scaled_by(self.ring.constant(-1))

    def scaled_by(self, poly: LaurentPoly) -> "CycleClass":
        if poly.ring != self.ring:
            raise ValueError("scalar lives in the wrong ring")
        return CycleClass(self.genus, {g: poly * p for g, p in self.coeffs.items()})

    def __repr__(self):
        body = ", ".join(f"{g.key()}: {p}" for g, p in self.coeffs.items())
        return f"<CycleClass genus {self.genus} {{{body}}}>"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    shift: Optional[ExponentVector] = None
    detail: str = ""

    def __bool__(self):
        return self.ok


class LiftClass:
    """The homology class of a lifted simple closed curve.

    w is the commutator part; m and n record, per deck translate, how the
    curve's lifts meet the translates of a1 and b1 respectively.
    """

    __slots__ = ("genus", "w", "m", "n")

    def __init__(self, genus: int, w: Optional[CycleClass] = None,
                 m: Union[Mapping[Sequence[int], int], LaurentPoly] = (),
                 n: Union[Mapping[Sequence[int], int], LaurentPoly] = ()):
        ring = surface_ring(genus)
        if w is None:
            w = CycleClass(genus)
        if w.genus != genus:
            raise ValueError("w-part has the wrong genus")
        if w.coeffs.get(Generator.a1()) or w.coeffs.get(Generator.b1()):
            raise ValueError("w-part must be supported on commutator generators")
        object.__setattr__(self, "genus", genus)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "m", self._family(ring, m))
        object.__setattr__(self, "n", self._family(ring, n))

    @staticmethod
    def _family(ring: LaurentRing, data) -> LaurentPoly:
        if isinstance(data, LaurentPoly):
            if data.ring != ring:
                raise ValueError("coefficient family lives in the wrong ring")
            return data
        return LaurentPoly(ring, dict(data))

    def __setattr__(self, name, value):
        raise AttributeError("LiftClass is immutable")

    @property
    def ring(self) -> LaurentRing:
        return surface_ring(self.genus)

    def __eq__(self, other):
        if not isinstance(other, LiftClass):
            return NotImplemented
        return (self.genus, self.w, self.m, self.n) == \
            (other.genus, other.w, other.m, other.n)

    def __hash__(self):
        return hash((self.genus, self.w, self.m, self.n))

    def as_cycle_class(self) -> CycleClass:
        """The class itself, written out over the module generators."""
        out = dict(self.w.coeffs)
        if self.m:
            out[Generator.a1()] = self.m
        if self.n:
            out[Generator.b1()] = self.n
        return CycleClass(self.genus, out)

    # -- serialization --------------------------------------------------

    def to_json(self) -> dict:
        def family(poly: LaurentPoly) -> dict:
            return {",".join(str(e) for e in exps): c
                    for exps, c in poly.terms.items()}

        return {
            "genus": self.genus,
            "w": [[gen.key(), str(poly)] for gen, poly in self.w.coeffs.items()],
            "m": family(self.m),
            "n": family(self.n),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LiftClass":
        try:
            genus = int(data["genus"])
        except (KeyError, TypeError, ValueError):
            raise ValueError("lift record needs an integer genus") from None
        ring = surface_ring(genus)

        def family(obj) -> dict:
            out = {}
            for key, c in dict(obj).items():
                exps = tuple(int(p) for p in str(key).split(","))
                if len(exps) != ring.nvars:
                    raise ValueError(
                        f"exponent key {key!r} has the wrong arity for genus {genus}"
                    )
                out[exps] = int(c)
            return out

        w_coeffs = {}
        for item in data.get("w", []):
            gen = Generator.from_key(item[0])
            if gen.kind != "comm":
                raise ValueError("w-part entries must be commutator generators")
            w_coeffs[gen] = parse_poly(item[1], ring)
        return cls(
            genus,
            CycleClass(genus, w_coeffs),
            family(data.get("m", {})),
            family(data.get("n", {})),
        )

    def __repr__(self):
        return (f"<LiftClass genus {self.genus} m=({self.m}) n=({self.n}) "
                f"w={'0' if self.w.is_zero() else '...'}>")


def canonical_lift(genus: int) -> LiftClass:
    """The built-in bounding-curve lift: m = t2 - 1, n = 0, w = 0."""
    ring = surface_ring(genus)
    m = ring.variable("t2") - ring.one()
    return LiftClass(genus, None, m, ring.zero())


def validate_lift(lift: LiftClass) -> ValidationReport:
    """Check the self-intersection identity between the m and n families.

    For every shift p the cross-correlations must agree:
    sum_v m[v] n[v+p] = sum_v n[v] m[v+p].  This is what disjointness of
    the curve's lifts imposes on the a1/b1 coefficient families.
    """
    m, n = lift.m, lift.n
    supp_m = list(m.support())
    supp_n = list(n.support())
    # The identity at shift p is the identity at -p with sides swapped,
    # so it is enough to check one representative per +-pair.
    shifts = set()
    for v in supp_m:
        for w in supp_n:
            p = tuple(b - a for a, b in zip(v, w))
            shifts.add(max(p, tuple(-e for e in p)))
    for p in sorted(shifts):
        lhs = sum(m.coeff(v) * n.coeff(tuple(a + b for a, b in zip(v, p)))
                  for v in supp_m)
        rhs = sum(n.coeff(v) * m.coeff(tuple(a + b for a, b in zip(v, p)))
                  for v in supp_n)
        if lhs != rhs:
            return ValidationReport(
                False, p,
                f"cross-correlation mismatch at shift {p}: {lhs} != {rhs}",
            )
    return ValidationReport(True)


def _require_valid(lift: LiftClass):
    report = validate_lift(lift)
    if not report.ok:
        raise ValueError(f"invalid lift: {report.detail}")


def pair_with_a1(lift: LiftClass, shift: Sequence[int]) -> int:
    """a1 . (u^shift C~) = n[-shift]."""
    key = tuple(-int(e) for e in shift)
    return lift.n.coeff(key)


def pair_with_b1(lift: LiftClass, shift: Sequence[int]) -> int:
    """b1 . (u^shift C~) = -m[-shift]."""
    key = tuple(-int(e) for e in shift)
    return -lift.m.coeff(key)


def pairing_polynomial(x: CycleClass, lift: LiftClass,
                       eps: Optional[EpsilonTable] = None) -> LaurentPoly:
    """The polynomial P(u) = sum_r (x . u^r C~) u^r.

    Bilinearity reduces the whole family of pairings against deck
    translates to a product: each generator gamma in the support of x
    contributes coeff_gamma(u) * G_gamma(u), where G_gamma collects the
    pairings of gamma itself against all translates of the lift.
    """
    if eps is None:
        eps = EpsilonTable.zero(x.genus)
    if eps.genus != x.genus or lift.genus != x.genus:
        raise ValueError("genus mismatch between class, lift and epsilon table")
    ring = x.ring
    total = ring.zero()
    for gen, coeff in x.coeffs.items():
        if gen.kind == "a1":
            g_poly = lift.n.involution()
        elif gen.kind == "b1":
            g_poly = -lift.m.involution()
        else:
            g_poly = ring.zero()
            for other, w_coeff in lift.w.comm_items():
                kern = pair_kernel(gen.pair, other.pair, eps, ring)
                if kern:
                    g_poly = g_poly + w_coeff.involution() * kern
        total = total + coeff * g_poly
    return total


def twist_apply(lift: LiftClass, x: CycleClass,
                eps: Optional[EpsilonTable] = None,
                inverse: bool = False) -> CycleClass:
    """Push x forward under the simultaneous twist about the lift's curve.

    x |-> x + sum_r (x . u^r C~) u^r [C~]; with inverse=True the pairing
    enters negated, giving the inverse twist.
    """
    _require_valid(lift)
    p = pairing_polynomial(x, lift, eps)
    if inverse:
        p = -p
    return x + lift.as_cycle_class().scaled_by(p)


def pushforward_b1_twist(lift: LiftClass, k: int) -> LiftClass:
    """The lift's class after the k-th power of the twist about b1.

    All lifts of b1 are twisted at once; on homology this is
    a1 |-> a1 + b1 (k times), b1 and the commutator part fixed, so only
    the n family moves: n |-> n + k m.
    """
    if not isinstance(k, int):
        raise TypeError("twist power must be an integer")
    return LiftClass(lift.genus, lift.w, lift.m, lift.n + k * lift.m)
