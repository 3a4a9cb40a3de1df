"""Command-line front end for the certificate pipeline.

Five subcommands cover the library surface: ``verify`` builds and checks
the full infinite-generation certificate, ``eval`` evaluates a Laurent
expression, ``rho`` prints the representation matrix of a lift, ``tree``
answers distance/stabilizer/translation queries, and ``normal-form``
decomposes a matrix into alternating amalgam letters.

Exit codes are a stable contract: 0 on success (and a true verdict), 1
when verification fails, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from .amalgam import amalgam_normal_form, build_certificate
from .homology import EpsilonTable, LiftClass, canonical_lift
from .laurent import (
    LaurentRing,
    ParseError,
    parse_poly,
    single_variable_ring,
    surface_ring,
)
from .rep import Matrix2, h_form, rho
from .tree import (
    TreeVertex,
    act,
    ball_dot,
    canonical_vertex,
    distance,
    fixes_vertex,
    parse_vertex,
    series_ring,
    translation_length,
)


class UsageError(Exception):
    """A configuration problem; the process exits with code 2."""


@dataclass(frozen=True)
class CommandConfig:
    """Validated options for the certificate pipeline."""

    subcommand: str
    genus: int = 2
    kmax: int = 2
    fmt: str = "text"
    eps_table: str | None = None
    lift: str | None = None
    output: str | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.genus < 2:
            raise UsageError(f"genus must be at least 2, got {self.genus}")
        if self.subcommand == "verify" and self.kmax < 2:
            raise UsageError(f"kmax must be at least 2, got {self.kmax}")
        for path in (self.eps_table, self.lift):
            if path is not None and path != "-" and not Path(path).is_file():
                raise UsageError(f"cannot read {path}")


# -- input plumbing --------------------------------------------------------


def _read_source(source: str) -> str:
    """Resolve an argument that may be '-', a file path, or a literal."""
    if source == "-":
        return sys.stdin.read()
    path = Path(source)
    if path.is_file():
        return path.read_text()
    return source


def parse_matrix(text: str, ring: LaurentRing | None = None) -> Matrix2:
    """Parse ``[[a, b], [c, d]]`` with Laurent polynomial entries."""
    ring = ring or series_ring()
    body = text.strip()
    if body.startswith("{"):
        try:
            return Matrix2.from_json(ring, json.loads(body))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad matrix JSON: {exc.msg}", exc.pos) from None
    if not (body.startswith("[[") and body.endswith("]]")):
        raise ParseError("matrix literals look like [[a, b], [c, d]]", 0)
    rows = re.split(r"\]\s*,\s*\[", body[2:-2])
    cells = [cell for row in rows for cell in row.split(",")]
    if len(rows) != 2 or len(cells) != 4:
        raise ParseError("matrix literals need two rows of two entries", 0)
    return Matrix2.from_rows(ring, [cells[:2], cells[2:]])


def _vertex_from_spec(source: str) -> TreeVertex:
    """Read a vertex: 'base', '(a; r)' text, or a lattice basis matrix."""
    text = _read_source(source).strip()
    if text.startswith("[[") or text.startswith("{"):
        return canonical_vertex(*parse_matrix(text).entries())
    return parse_vertex(text)


def _lift_from_spec(source: str, genus: int) -> LiftClass:
    if source == "canonical-C":
        return canonical_lift(genus)
    try:
        data = json.loads(_read_source(source))
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad lift JSON: {exc}") from None
    return LiftClass.from_json(data)


def _ring_for_expression(expr: str, genus: int, domain: str) -> LaurentRing:
    """Pick the ring from the variable tokens that appear in expr."""
    names = set(re.findall(r"\b[st]\d+\b", expr))
    if not names:
        return single_variable_ring("t", domain)
    ring = surface_ring(genus, domain)
    unknown = names - set(ring.names)
    if unknown:
        raise UsageError(
            f"variable {sorted(unknown)[0]} is outside the genus-{genus} "
            "ring; raise --genus")
    return ring


# -- subcommands ------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    config = CommandConfig(
        "verify", genus=args.genus, kmax=args.kmax, fmt=args.format,
        eps_table=args.eps_table, lift=args.lift, output=args.output,
        seed=args.seed)
    eps = None
    if config.eps_table is not None:
        try:
            entries = json.loads(_read_source(config.eps_table))
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad pairing table JSON: {exc}") from None
        eps = EpsilonTable.from_entries(config.genus, entries)
    lift = None
    if config.lift is not None:
        lift = _lift_from_spec(config.lift, config.genus)
    try:
        cert = build_certificate(config.kmax, config.genus, eps=eps,
                                 base_lift=lift)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = cert.json_text()

    recheck_note = None
    if config.seed is not None:
        probe = EpsilonTable.random_skew(config.genus,
                                         random.Random(config.seed))
        if build_certificate(config.kmax, config.genus, eps=probe,
                             base_lift=lift).json_text() != text:
            recheck_note = (f"certificate depends on the pairing table "
                            f"(seed {config.seed})")

    if config.output is not None:
        Path(config.output).write_text(text + "\n")
    if config.fmt == "json":
        print(text)
    else:
        for line in cert.summary_lines():
            print(line)
        if config.seed is not None:
            print("pairing-table recheck: "
                  + ("failed" if recheck_note else "ok"))
    ok = cert.verdict and recheck_note is None
    if not ok:
        bad = _first_failure(cert)
        if bad is not None:
            print("failing record: " + json.dumps(bad, sort_keys=True))
        if recheck_note is not None:
            print("failing check: " + recheck_note)
    return 0 if ok else 1


def _first_failure(cert) -> dict | None:
    for record in cert.records:
        if "error" in record:
            return record
        checks = [record["conjugation_ok"], record["twist_consistency_ok"]]
        checks.extend(record["memberships"].values())
        if not all(checks):
            return record
    for entry in cert.pairwise:
        if not entry["distinct"]:
            return entry
    return None


def cmd_eval(args: argparse.Namespace) -> int:
    expr = _read_source(args.expression) if args.expression == "-" \
        else args.expression
    ring = _ring_for_expression(expr, args.genus, args.domain)
    print(parse_poly(expr, ring))
    return 0


def cmd_rho(args: argparse.Namespace) -> int:
    lift = _lift_from_spec(args.lift, args.genus)
    mat = rho(lift)
    report = h_form(mat)
    if args.format == "json":
        print(json.dumps({
            "matrix": mat.to_json(),
            "h_form": {"p1": str(report.p1), "q1": str(report.q1),
                       "q2": str(report.q2), "p2": str(report.p2)},
            "balanced": list(report.flags),
        }, indent=2, sort_keys=True))
        return 0
    print(mat)
    if report.all_balanced:
        print("balanced: yes x4")
    else:
        named = zip(("a - 1", "b", "c", "1 - d"), report.flags)
        print("balanced: " + ", ".join(
            f"{name} {'yes' if ok else 'no'}" for name, ok in named))
    return 0


def cmd_tree(args: argparse.Namespace) -> int:
    if args.query == "distance":
        print(distance(_vertex_from_spec(args.left),
                       _vertex_from_spec(args.right)))
        return 0
    if args.query == "fixes":
        mat = parse_matrix(_read_source(args.matrix))
        vertex = _vertex_from_spec(args.vertex)
        moved = act(mat, vertex)
        if fixes_vertex(mat, vertex):
            print(f"fixes {vertex}: yes")
        else:
            print(f"fixes {vertex}: no, moves it to {moved} "
                  f"at distance {distance(vertex, moved)}")
        return 0
    if args.query == "translation":
        mat = parse_matrix(_read_source(args.matrix))
        report = translation_length(mat, radius=args.ball_radius)
        flavor = "exact" if report.exact else "upper bound"
        print(f"translation length: {report.length} ({flavor})")
        print(f"note: {report.note}")
        return 0
    print(ball_dot(center=_vertex_from_spec(args.center),
                   radius=args.ball_radius))
    return 0


def cmd_normal_form(args: argparse.Namespace) -> int:
    mat = parse_matrix(_read_source(args.matrix))
    try:
        letters = amalgam_normal_form(mat)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        print(json.dumps(
            [{"side": l.side, "matrix": l.matrix.to_json()} for l in letters],
            indent=2, sort_keys=True))
        return 0
    for letter in letters:
        print(letter)
    print(f"letters: {len(letters)}")
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistcert",
        description="Exact certificates for separating twist subgroups.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    verify = sub.add_parser(
        "verify", help="build and check the full certificate")
    verify.add_argument("--genus", type=int, default=2)
    verify.add_argument("--kmax", type=int, default=10,
                        help="largest twist power to certify (default 10)")
    verify.add_argument("--format", choices=("text", "json"), default="text")
    verify.add_argument("--eps-table", metavar="PATH",
                        help="JSON list of intersection-pairing entries")
    verify.add_argument("--lift", metavar="PATH",
                        help="JSON lift record replacing the built-in curve")
    verify.add_argument("--output", metavar="PATH",
                        help="also write the certificate JSON here")
    verify.add_argument("--seed", type=int,
                        help="recheck with a seeded random pairing table")
    verify.set_defaults(handler=cmd_verify)

    ev = sub.add_parser("eval", help="evaluate a Laurent expression")
    ev.add_argument("expression", help="expression text, or - for stdin")
    ev.add_argument("--genus", type=int, default=2,
                    help="ring size when surface variables appear")
    ev.add_argument("--domain", choices=("Z", "Q"), default="Z")
    ev.set_defaults(handler=cmd_eval)

    rh = sub.add_parser(
        "rho", help="representation matrix of a lift, with balance report")
    rh.add_argument("lift",
                    help="lift JSON (path, inline, or -), or canonical-C")
    rh.add_argument("--genus", type=int, default=2)
    rh.add_argument("--format", choices=("text", "json"), default="text")
    rh.set_defaults(handler=cmd_rho)

    tree = sub.add_parser("tree", help="queries against the lattice tree")
    tree_sub = tree.add_subparsers(dest="query", required=True)
    dist = tree_sub.add_parser(
        "distance", help="distance between two vertices")
    dist.add_argument("left", help="'base', '(a; r)', or a basis matrix")
    dist.add_argument("right", help="'base', '(a; r)', or a basis matrix")
    fixes = tree_sub.add_parser(
        "fixes", help="whether a matrix fixes a vertex")
    fixes.add_argument("matrix")
    fixes.add_argument("vertex")
    trans = tree_sub.add_parser(
        "translation", help="minimal displacement of a matrix")
    trans.add_argument("matrix")
    trans.add_argument("--ball-radius", type=int, default=8,
                       help="how far from the base vertex to scan")
    ball = tree_sub.add_parser("ball", help="DOT drawing of a metric ball")
    ball.add_argument("center", nargs="?", default="base")
    ball.add_argument("--ball-radius", type=int, default=2)
    for query in (dist, fixes, trans, ball):
        query.set_defaults(handler=cmd_tree)

    nf = sub.add_parser(
        "normal-form", help="alternating letter decomposition")
    nf.add_argument("matrix", help="matrix literal, path, or - for stdin")
    nf.add_argument("--format", choices=("text", "json"), default="text")
    nf.set_defaults(handler=cmd_normal_form)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
