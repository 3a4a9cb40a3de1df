"""Exact multivariate Laurent polynomial arithmetic over Z or Q.

Everything in this module is immutable and exact.  A ring is a tuple of
variable names plus a coefficient domain ("Z" for Python ints, "Q" for
fractions.Fraction); a polynomial is a sorted term map from exponent
vectors (tuples of ints, one slot per variable, negatives allowed) to
nonzero coefficients.  Term maps are kept sorted by exponent vector so
that printing, serialization and equality are deterministic.

The text format round-trips: parse_poly(str(f), f.ring) == f.  Terms are
emitted in ascending lexicographic exponent order, e.g.

    >>> R = single_variable_ring()
    >>> str(parse_poly("(t-1)*(t^-1-1)", R))
    '-t^-1 + 2 - t'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence, Union

Coeff = Union[int, Fraction]
ExponentVector = tuple[int, ...]


class RingMismatchError(ValueError):
    """Two operands (or a hom and its argument) live in different rings."""


class ValuationError(ArithmeticError):
    """The zero polynomial has no valuation."""


class ParseError(ValueError):
    """Malformed polynomial text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class LaurentRing:
    """A Laurent polynomial ring signature: variable names and domain."""

    names: tuple[str, ...]
    domain: str = "Z"

    def __post_init__(self):
        if self.domain not in ("Z", "Q"):
            raise ValueError(f"unknown coefficient domain {self.domain!r}")
        if not self.names or len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be nonempty and distinct")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def coerce_coeff(self, c: Coeff) -> Coeff:
        if isinstance(c, bool):
            raise TypeError("bool is not a coefficient")
        if self.domain == "Z":
            if isinstance(c, int):
                return c
            if isinstance(c, Fraction) and c.denominator == 1:
                return int(c)
            raise TypeError(f"coefficient {c!r} does not lie in Z")
        if isinstance(c, (int, Fraction)):
            return Fraction(c)
        raise TypeError(f"coefficient {c!r} does not lie in Q")

    def zero(self) -> "LaurentPoly":
        return LaurentPoly._make(self, {})

    def one(self) -> "LaurentPoly":
        return self.constant(1)

    def constant(self, c: Coeff) -> "LaurentPoly":
        c = self.coerce_coeff(c)
        if not c:
            return self.zero()
        return LaurentPoly._make(self, {(0,) * self.nvars: c})

    def monomial(self, exponents: Sequence[int], coeff: Coeff = 1) -> "LaurentPoly":
        exps = tuple(int(e) for e in exponents)
        if len(exps) != self.nvars:
            raise RingMismatchError(
                f"exponent vector of length {len(exps)} in a {self.nvars}-variable ring"
            )
        c = self.coerce_coeff(coeff)
        if not c:
            return self.zero()
        return LaurentPoly._make(self, {exps: c})

    def variable(self, name_or_index: Union[str, int]) -> "LaurentPoly":
        if isinstance(name_or_index, str):
            if name_or_index not in self.names:
                raise ValueError(f"no variable {name_or_index!r} in ring {self.names}")
            idx = self.names.index(name_or_index)
        else:
            idx = name_or_index
            if not 0 <= idx < self.nvars:
                raise ValueError(f"variable index {idx} out of range")
        exps = [0] * self.nvars
        exps[idx] = 1
        return self.monomial(exps)


def single_variable_ring(name: str = "t", domain: str = "Z") -> LaurentRing:
    return LaurentRing((name,), domain)


def surface_ring(genus: int, domain: str = "Z") -> LaurentRing:
    """The 2g-2 variable ring with the fixed ordering (s2..sg, t2..tg)."""
    if genus < 2:
        raise ValueError(f"genus must be at least 2, got {genus}")
    s_names = tuple(f"s{i}" for i in range(2, genus + 1))
    t_names = tuple(f"t{i}" for i in range(2, genus + 1))
    return LaurentRing(s_names + t_names, domain)


class LaurentPoly:
    """An immutable Laurent polynomial: a sorted map exponents -> coefficient."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: LaurentRing, terms: Mapping[Sequence[int], Coeff]):
        cleaned = {}
        for exps, c in terms.items():
            key = tuple(int(e) for e in exps)
            if len(key) != ring.nvars:
                raise RingMismatchError(
                    f"exponent vector {key} in a {ring.nvars}-variable ring"
                )
            c = ring.coerce_coeff(c)
            if c:
                cleaned[key] = cleaned.get(key, ring.coerce_coeff(0)) + c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(
            self, "terms", {k: cleaned[k] for k in sorted(cleaned) if cleaned[k]}
        )
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _make(cls, ring: LaurentRing, clean_terms: dict) -> "LaurentPoly":
        # Internal fast path: caller guarantees coerced, nonzero coefficients.
        self = object.__new__(cls)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(
            self, "terms", {k: clean_terms[k] for k in sorted(clean_terms)}
        )
        object.__setattr__(self, "_hash", None)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exponents: Sequence[int]) -> Coeff:
        key = tuple(int(e) for e in exponents)
        zero = 0 if self.ring.domain == "Z" else Fraction(0)
        return self.terms.get(key, zero)

    def support(self) -> Iterator[ExponentVector]:
        return iter(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash((self.ring, tuple(self.terms.items())))
            )
        return self._hash

    def _check_ring(self, other: "LaurentPoly"):
        if self.ring != other.ring:
            raise RingMismatchError(
                f"mixed rings: {self.ring.names}/{self.ring.domain} "
                f"vs {other.ring.names}/{other.ring.domain}"
            )

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_ring(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps, 0) + c
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return LaurentPoly._make(self.ring, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._make(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_ring(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(key, 0) + c1 * c2
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return LaurentPoly._make(self.ring, out)

    def __rmul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: Coeff) -> "LaurentPoly":
        c = self.ring.coerce_coeff(c)
        if not c:
            return self.ring.zero()
        return LaurentPoly._make(self.ring, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.unit_inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def unit_inverse(self) -> "LaurentPoly":
        """Inverse of a unit (a single invertible term); error otherwise."""
        if len(self.terms) != 1:
            raise ValueError(f"{self} is not a unit in {self.ring.names}")
        (exps, c), = self.terms.items()
        if self.ring.domain == "Z":
            if c not in (1, -1):
                raise ValueError(f"coefficient {c} is not invertible over Z")
            inv = c
        else:
            inv = Fraction(1) / c
        return LaurentPoly._make(self.ring, {tuple(-e for e in exps): inv})

    # -- structure maps -----------------------------------------------

    def involution(self) -> "LaurentPoly":
        """The ring automorphism sending every variable to its inverse."""
        return LaurentPoly._make(
            self.ring, {tuple(-e for e in exps): c for exps, c in self.terms.items()}
        )

    def evaluate_at_one(self) -> Coeff:
        """The coefficient sum, i.e. the value at (1, ..., 1)."""
        total = 0 if self.ring.domain == "Z" else Fraction(0)
        for c in self.terms.values():
            total += c
        return total

    def is_balanced(self) -> bool:
        """Zero coefficient sum and symmetric under exponent negation."""
        return self.evaluate_at_one() == 0 and self.involution() == self

    def valuation(self) -> int:
        """Lowest exponent of a univariate polynomial; errors on zero."""
        if self.ring.nvars != 1:
            raise ValueError("valuation is only defined for univariate polynomials")
        if not self.terms:
            raise ValuationError("the zero polynomial has no valuation")
        return min(e[0] for e in self.terms)

    def degree(self) -> int:
        """Highest exponent of a nonzero univariate polynomial."""
        if self.ring.nvars != 1:
            raise ValueError("degree is only defined for univariate polynomials")
        if not self.terms:
            raise ValuationError("the zero polynomial has no degree")
        return max(e[0] for e in self.terms)

    def is_polynomial(self) -> bool:
        """True when no variable appears with a negative exponent."""
        return all(all(e >= 0 for e in exps) for exps in self.terms)

    def eval_at_zero(self) -> Coeff:
        """Constant term of a genuine polynomial; domain error otherwise."""
        if not self.is_polynomial():
            raise ValueError(f"{self} has negative exponents, cannot evaluate at 0")
        return self.coeff((0,) * self.ring.nvars)

    def as_domain(self, domain: str) -> "LaurentPoly":
        """The same polynomial viewed in the ring with the given domain."""
        target = LaurentRing(self.ring.names, domain)
        return LaurentPoly(target, dict(self.terms))

    # -- printing -------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks: list[str] = []
        for exps, c in self.terms.items():
            body = self._term_body(exps, c)
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(chunks)

    def _term_body(self, exps: ExponentVector, c: Coeff) -> str:
        mag = -c if c < 0 else c
        parts = []
        for name, e in zip(self.ring.names, exps):
            if e == 1:
                parts.append(name)
            elif e != 0:
                parts.append(f"{name}^{e}")
        if not parts:
            return str(mag)
        if mag != 1:
            parts.insert(0, str(mag))
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"<LaurentPoly {self} over {'/'.join(self.ring.names)};{self.ring.domain}>"


@dataclass(frozen=True)
class RingHom:
    """A ring homomorphism fixed by per-variable image polynomials."""

    source: LaurentRing
    target: LaurentRing
    images: tuple[LaurentPoly, ...]

    def __post_init__(self):
        if len(self.images) != self.source.nvars:
            raise RingMismatchError(
                f"{len(self.images)} images for {self.source.nvars} variables"
            )
        for im in self.images:
            if im.ring != self.target:
                raise RingMismatchError("image polynomial outside the target ring")

    def apply(self, f: LaurentPoly) -> LaurentPoly:
        if f.ring != self.source:
            raise RingMismatchError("argument does not live in the source ring")
        total = self.target.zero()
        for exps, c in f.terms.items():
            term = self.target.constant(c)
            for im, e in zip(self.images, exps):
                if e:
                    term = term * (im ** e)
            total = total + term
        return total

    def then(self, after: "RingHom") -> "RingHom":
        """The composite f |-> after(self(f)) as a single assignment map."""
        if after.source != self.target:
            raise RingMismatchError("homomorphisms do not compose")
        return RingHom(self.source, after.target,
                       tuple(after.apply(im) for im in self.images))


def phi_hom(ring: LaurentRing) -> RingHom:
    """The specialization s_i -> 1, t_2 -> t, t_i -> 1 (i >= 3).

    The source must be a 2g-2 variable ring in the fixed ordering
    (s2..sg, t2..tg); positionally, slot g-1 (the first t-variable) is
    the one kept alive.
    """
    n = ring.nvars
    if n < 2 or n % 2 != 0:
        raise RingMismatchError(
            f"specialization needs a 2g-2 variable ring, got {n} variables"
        )
    g = n // 2 + 1
    target = single_variable_ring("t", ring.domain)
    images = [target.one()] * n
    images[g - 1] = target.variable("t")
    return RingHom(ring, target, tuple(images))


def specialize_phi(f: LaurentPoly) -> LaurentPoly:
    return phi_hom(f.ring).apply(f)


def specialize_single(f: LaurentPoly, keep: int) -> LaurentPoly:
    """Send every variable except the keep-th (1-based) to 1."""
    ring = f.ring
    if not 1 <= keep <= ring.nvars:
        raise ValueError(f"variable index {keep} out of range 1..{ring.nvars}")
    target = single_variable_ring(ring.names[keep - 1], ring.domain)
    images = [target.one()] * ring.nvars
    images[keep - 1] = target.variable(0)
    return RingHom(ring, target, tuple(images)).apply(f)


# -- parsing ------------------------------------------------------------

_TOKEN_RE = re.compile(r"(\d+)|([A-Za-z][A-Za-z0-9]*)|([-+*/^()])")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser for the documented expression grammar.

    Grammar: sums and differences of products of signed atoms; an atom is
    an integer literal, a rational literal p/q, a variable, or a
    parenthesized expression, optionally raised to an integer power via ^.
    """

    def __init__(self, text: str, ring: LaurentRing):
        self.tokens = _tokenize(text)
        self.ring = ring
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)
        self.advance()

    def parse(self) -> LaurentPoly:
        poly = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r}", pos)
        return poly

    def expr(self) -> LaurentPoly:
        poly = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                rhs = self.term()
                poly = poly + rhs if val == "+" else poly - rhs
            else:
                return poly

    def term(self) -> LaurentPoly:
        poly = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.advance()
                poly = poly * self.factor()
            else:
                return poly

    def factor(self) -> LaurentPoly:
        sign = 1
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                if val == "-":
                    sign = -sign
            else:
                break
        atom = self.atom()
        return atom if sign == 1 else -atom

    def integer(self) -> int:
        sign = 1
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.advance()
            if val == "-":
                sign = -1
            kind, val, pos = self.peek()
        if kind != "int":
            raise ParseError("expected an integer", pos)
        self.advance()
        return sign * val

    def atom(self) -> LaurentPoly:
        kind, val, pos = self.peek()
        if kind == "int":
            self.advance()
            nkind, nval, npos = self.peek()
            if nkind == "op" and nval == "/":
                self.advance()
                kind2, val2, pos2 = self.peek()
                if kind2 != "int":
                    raise ParseError("expected a denominator", pos2)
                self.advance()
                if self.ring.domain != "Q":
                    raise ParseError("rational literal in an integer ring", pos)
                if val2 == 0:
                    raise ParseError("zero denominator", pos2)
                return self.power(self.ring.constant(Fraction(val, val2)))
            return self.power(self.ring.constant(val))
        if kind == "name":
            if val not in self.ring.names:
                raise ParseError(
                    f"unknown variable {val!r} (ring has {', '.join(self.ring.names)})",
                    pos,
                )
            self.advance()
            return self.power(self.ring.variable(val))
        if kind == "op" and val == "(":
            self.advance()
            inner = self.expr()
            self.expect_op(")")
            return self.power(inner)
        raise ParseError(f"expected a value, found {val!r}", pos)

    def power(self, base: LaurentPoly) -> LaurentPoly:
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            exponent = self.integer()
            try:
                return base ** exponent
            except ValueError as exc:
                raise ParseError(str(exc), pos) from None
        return base


def parse_poly(text: str, ring: LaurentRing) -> LaurentPoly:
    """Parse the documented text format into a polynomial of the ring."""
    return _Parser(text, ring).parse()
