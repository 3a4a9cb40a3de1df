"""The amalgam decomposition of SL2 over the Laurent ring, and the
infinite-generation certificate built on it.

SL2(Q[t, t^-1]) is the amalgamated product A *_U B where A = SL2(Q[t]),
B is the conjugate of A by diag(t, 1), and U = A cap B.  On the tree, A
and B are the stabilizers of the two endpoints of the fundamental edge,
which is what drives both the normal-form algorithm and the separation
argument: a matrix in A whose balanced form vanishes must be the
identity, so distinct twist powers land in distinct double cosets.

The certificate assembles, for k = 1..kmax, the pushed-forward
bounding-curve lift, its represented matrix, the conjugation identity
rho = M_k N M_k^-1, the membership facts M_k in A minus U and N in B
minus U, and the pairwise double-coset separations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .homology import (
    CycleClass,
    EpsilonTable,
    Generator,
    LiftClass,
    canonical_lift,
    pushforward_b1_twist,
    twist_apply,
)
from .laurent import specialize_phi
from .rep import Matrix2, h_form, matrix_Mk, matrix_N, multiply, rho
from .tree import (
    act,
    base_vertex,
    distance,
    first_step,
    odd_base_vertex,
    series_ring,
)

_QT = series_ring()


def _as_laurent_matrix(mat: Matrix2) -> Matrix2:
    """Coerce to rational coefficients and insist on determinant one."""
    if mat.ring != _QT:
        if mat.ring.names != ("t",):
            raise ValueError("amalgam matrices are univariate in t")
        mat = mat.map_entries(lambda f: f.as_domain("Q"))
    if mat.det() != _QT.one():
        raise ValueError("amalgam matrices must have determinant one")
    return mat


def in_A(mat: Matrix2) -> bool:
    """Membership in SL2(Q[t]): all entries free of negative exponents."""
    mat = _as_laurent_matrix(mat)
    return all(entry.is_polynomial() for entry in mat.entries())


def in_B(mat: Matrix2) -> bool:
    """Membership in the diag(t, 1) conjugate of A."""
    mat = _as_laurent_matrix(mat)
    t = _QT.variable(0)
    t_inv = t.unit_inverse()
    conjugated = Matrix2(mat.a, t * mat.b, t_inv * mat.c, mat.d)
    return in_A(conjugated)


def in_U(mat: Matrix2) -> bool:
    """Membership in the edge subgroup A cap B."""
    return in_A(mat) and in_B(mat)


@dataclass(frozen=True)
class AmalgamLetter:
    """One factor of a normal form: a side label and a matrix in it."""

    side: str
    matrix: Matrix2

    def __post_init__(self):
        if self.side not in ("A", "B"):
            raise ValueError(f"unknown side {self.side!r}")
        member = in_A(self.matrix) if self.side == "A" else in_B(self.matrix)
        if not member:
            raise ValueError(f"matrix {self.matrix} is not in side {self.side}")
        object.__setattr__(self, "matrix", _as_laurent_matrix(self.matrix))

    def in_edge_subgroup(self) -> bool:
        return in_U(self.matrix)

    def __str__(self):
        return f"({self.side}) {self.matrix}"


@dataclass(frozen=True)
class IdentityForcingReport:
    """Trace of the argument that a balanced matrix in A is the identity."""

    status: str  # "ok" | "precondition_failed" | "counterexample"
    steps: tuple[str, ...]
    matrix: Matrix2

    def __bool__(self):
        return self.status == "ok"


def h_cap_a_forces_identity(mat: Matrix2) -> IdentityForcingReport:
    """Check that balanced form plus polynomial entries forces M = I.

    A polynomial fixed by the bar involution can have no exponent of
    either sign, so it is constant; a balanced one vanishes at 1, so it
    is zero.  Applied to a - 1, b, c and 1 - d this pins M to the
    identity.  Precondition failures (entries not polynomial, or form
    not balanced) are reported as such; a counterexample status would
    mean the argument itself broke and must never occur.
    """

    def failed(reason: str) -> IdentityForcingReport:
        return IdentityForcingReport("precondition_failed", (reason,), mat)

    try:
        m = _as_laurent_matrix(mat)
    except ValueError as exc:
        return failed(str(exc))
    for label, entry in zip("abcd", m.entries()):
        if not entry.is_polynomial():
            return failed(f"entry {label} = {entry} is not a polynomial")
    steps = ["all four entries are polynomials, so M lies in A"]
    form = h_form(m)
    named = (("a - 1", form.p1), ("b", form.q1),
             ("c", form.q2), ("1 - d", form.p2))
    for name, poly in named:
        if not poly.is_balanced():
            return failed(f"{name} = {poly} is not balanced")
    steps.append("a - 1, b, c and 1 - d are balanced")
    for name, poly in named:
        if poly:
            return IdentityForcingReport(
                "counterexample",
                tuple(steps) + (f"{name} = {poly} is balanced and polynomial "
                                "yet nonzero",),
                mat)
        steps.append(f"{name} is balanced and polynomial, "
                     "hence constant, hence zero")
    steps.append("M = I")
    return IdentityForcingReport("ok", tuple(steps), mat)


@dataclass(frozen=True)
class DoubleCosetReport:
    """Outcome of the double-coset separation between two twist powers."""

    k: int
    l: int
    distinct: bool
    witness: str
    connecting: Matrix2

    def __bool__(self):
        return self.distinct

    def to_json(self) -> dict:
        return {"k": self.k, "l": self.l, "distinct": self.distinct,
                "witness": self.witness}


def double_cosets_distinct(k: int, l: int) -> DoubleCosetReport:
    """Separate the double cosets of M_k and M_l modulo U on the right.

    Coset equality would force M_k = h M_l u with h balanced in A and u
    in U; h is the identity (h_cap_a_forces_identity), so u = M_l^-1 M_k
    would lie in U.  Its lower-left entry is the constant k - l, and U
    requires that entry to vanish at t = 0.
    """
    if k < 1 or l < 1:
        raise ValueError("twist powers must be at least 1")
    u = matrix_Mk(l).inverse() @ matrix_Mk(k)
    value = u.c.eval_at_zero()
    distinct = value != 0
    if distinct:
        witness = (f"equality would put M_{l}^-1 M_{k} = {u} in U, but its "
                   f"lower-left entry is {value} at t = 0, not divisible by t")
    else:
        witness = "k = l, the cosets coincide"
    return DoubleCosetReport(k, l, distinct, witness, u)


def amalgam_normal_form(mat: Matrix2) -> list[AmalgamLetter]:
    """Factor a matrix as an alternating word in A and B.

    The word is read off the tree: while the matrix fixes neither
    endpoint of the fundamental edge, the geodesic from that edge to its
    image leaves through one endpoint, and a letter from that endpoint's
    stabilizer pulls the image one edge closer.  Letters alternate sides
    automatically, every non-initial letter lies outside U, and the word
    length is at most the displacement of the base vertex plus one.
    """
    original = _as_laurent_matrix(mat)
    rest = original
    v0, v1 = base_vertex(), odd_base_vertex()
    t = _QT.variable(0)
    t_inv = t.unit_inverse()
    one, zero = _QT.one(), _QT.zero()
    letters: list[tuple[str, Matrix2]] = []
    while not (in_A(rest) or in_B(rest)):
        p, q = act(rest, v0), act(rest, v1)
        near_v0 = min(distance(v0, p), distance(v0, q))
        near_v1 = min(distance(v1, p), distance(v1, q))
        if near_v0 < near_v1:
            target = p if distance(v0, p) < distance(v0, q) else q
            step = first_step(v0, target)
            # step is a child (1; c); the letter fixes v0 and moves the
            # fundamental edge onto (v0, step)
            c = step.r.coeff((0,))
            letter, side = Matrix2.from_rows(_QT, [[c, -1], [1, 0]]), "A"
        else:
            target = p if distance(v1, p) < distance(v1, q) else q
            step = first_step(v1, target)
            if step.a == -2:
                letter = Matrix2(zero, -t_inv, t, zero)
            else:
                # step is a sibling (0; c t^-1) of the base vertex
                letter = Matrix2(one, _QT.monomial((-1,), step.r.coeff((-1,))),
                                 zero, one)
            side = "B"
        letters.append((side, letter))
        rest = letter.inverse() @ rest
    if not letters:
        out = [AmalgamLetter("A" if in_A(rest) else "B", rest)]
    elif in_U(rest):
        last_side, last = letters[-1]
        out = [AmalgamLetter(side, matrix) for side, matrix in letters[:-1]]
        out.append(AmalgamLetter(last_side, last @ rest))
    else:
        out = [AmalgamLetter(side, matrix) for side, matrix in letters]
        out.append(AmalgamLetter("A" if in_A(rest) else "B", rest))
    assert multiply([letter.matrix for letter in out]) == original
    return out


@dataclass(frozen=True)
class Certificate:
    """A machine-checkable record that the twist powers are independent.

    The verdict is true exactly when every per-k record and every
    pairwise separation passed.
    """

    kmax: int
    genus: int
    records: tuple[dict, ...]
    pairwise: tuple[dict, ...]
    verdict: bool

    def to_json(self) -> dict:
        return {
            "kmax": self.kmax,
            "genus": self.genus,
            "records": [dict(r) for r in self.records],
            "pairwise": [dict(p) for p in self.pairwise],
            "verdict": self.verdict,
        }

    def json_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def summary_lines(self) -> list[str]:
        lines = [f"certificate: genus {self.genus}, twist powers 1..{self.kmax}"]
        for record in self.records:
            if "error" in record:
                lines.append(f"  k={record['k']}: ERROR {record['error']}")
                continue
            member = record["memberships"]
            bits = [
                "conjugation ok" if record["conjugation_ok"]
                else "conjugation FAILED",
                "twist consistent" if record["twist_consistency_ok"]
                else "twist INCONSISTENT",
                "M_k in A\\U" if member["Mk_in_A_not_U"]
                else "M_k membership FAILED",
                "N in B\\U" if member["N_in_B_not_U"]
                else "N membership FAILED",
                "balanced" if member["conjugate_balanced"]
                else "balance FAILED",
            ]
            lines.append(f"  k={record['k']}: " + ", ".join(bits))
        failed_pairs = [p for p in self.pairwise if not p["distinct"]]
        lines.append(f"  pairwise separations: "
                     f"{len(self.pairwise) - len(failed_pairs)}"
                     f"/{len(self.pairwise)} distinct")
        for pair in failed_pairs:
            lines.append(f"    NOT distinct: k={pair['k']}, l={pair['l']}")
        lines.append(f"verdict: {'PASS' if self.verdict else 'FAIL'}")
        return lines


def _twist_consistent(lift: LiftClass, mat: Matrix2,
                      eps: EpsilonTable) -> bool:
    """The represented matrix must match the twist's action on handles."""
    genus = lift.genus
    image_a1 = twist_apply(lift, CycleClass.basis(genus, Generator.a1()), eps)
    image_b1 = twist_apply(lift, CycleClass.basis(genus, Generator.b1()), eps)
    return (mat.a == specialize_phi(image_a1.a1_coeff())
            and mat.c == specialize_phi(image_a1.b1_coeff())
            and mat.b == specialize_phi(image_b1.a1_coeff())
            and mat.d == specialize_phi(image_b1.b1_coeff()))


def build_certificate(kmax: int, genus: int,
                      eps: Optional[EpsilonTable] = None,
                      base_lift: Optional[LiftClass] = None) -> Certificate:
    """Run the full pipeline for twist powers 1..kmax at the given genus.

    The epsilon table is threaded through the twist-consistency check so
    a caller can confirm the output does not depend on it; the sign
    choices provably never reach the certificate.
    """
    if kmax < 2:
        raise ValueError("need kmax >= 2 to separate at least two cosets")
    if genus < 2:
        raise ValueError(f"genus must be at least 2, got {genus}")
    star = base_lift if base_lift is not None else canonical_lift(genus)
    if star.genus != genus:
        raise ValueError(f"base lift has genus {star.genus}, expected {genus}")
    if eps is None:
        eps = EpsilonTable.zero(genus)
    elif eps.genus != genus:
        raise ValueError(f"epsilon table has genus {eps.genus}, expected {genus}")
    n_mat = matrix_N()
    n_in_b_not_u = in_B(n_mat) and not in_U(n_mat)
    records = []
    all_ok = True
    for k in range(1, kmax + 1):
        moved = pushforward_b1_twist(star, k)
        try:
            mat = rho(moved)
        except ValueError as exc:
            records.append({"k": k, "error": str(exc)})
            all_ok = False
            continue
        mk = matrix_Mk(k)
        conjugation_ok = mat == mk @ n_mat @ mk.inverse()
        twist_ok = _twist_consistent(moved, mat, eps)
        memberships = {
            "Mk_in_A_not_U": in_A(mk) and not in_U(mk),
            "N_in_B_not_U": n_in_b_not_u,
            "conjugate_balanced": h_form(mat).all_balanced,
        }
        records.append({
            "k": k,
            "lift": moved.to_json(),
            "rho": mat.to_json(),
            "conjugation_ok": conjugation_ok,
            "twist_consistency_ok": twist_ok,
            "memberships": memberships,
        })
        all_ok = all_ok and conjugation_ok and twist_ok \
            and all(memberships.values())
    pairwise = []
    for k in range(1, kmax + 1):
        for l in range(k + 1, kmax + 1):
            report = double_cosets_distinct(k, l)
            pairwise.append(report.to_json())
            all_ok = all_ok and report.distinct
    return Certificate(kmax, genus, tuple(records), tuple(pairwise), all_ok)
