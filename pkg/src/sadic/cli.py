"""Command-line front end.

Exit codes: 0 success, 1 analysis inconclusive, 2 input error,
3 internal inconsistency (a hard combinatorial identity failed).
Output is deterministic: JSON with sorted keys and exact number strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .coboundary import coboundary_report
from .directive import DirectiveSequence
from .exactalg import bareiss_det
from .language import (
    InternalInconsistency,
    UnstableLanguage,
    connected_components,
    extension_graph,
    factors,
    graph_to_dot,
    second_difference_check,
)
from .measures import InexactMode
from .spectra import (
    INCONCLUSIVE,
    balanced_on_factors,
    balanced_on_letters,
    certify_eigenvalue,
    constant_length_spectrum,
    eigenvalue_dim_bounds,
    host_diagnostic,
    is_dendric_up_to,
    parse_alpha,
    verify_certificate,
)
from .words import MorphismError

EXIT_OK = 0
EXIT_INCONCLUSIVE = 1
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3


def _load(path: str) -> DirectiveSequence:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    from .directive import parse_directive_file

    ds, _ = parse_directive_file(text)
    return ds


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for key in sorted(payload):
            print(f"{key}: {payload[key]}")


def cmd_inspect(args) -> int:
    ds = _load(args.file)
    morphs = list(ds.explicit) if ds.explicit else list(ds.preperiod) + list(ds.period)
    report = {
        "schedule": "explicit" if ds.explicit else "eventually-periodic",
        "depth": ds.depth,
        "alphabets": [list(m.codomain.symbols) for m in morphs]
        + [list(morphs[-1].domain.symbols)],
        "determinants": [bareiss_det(m.incidence()) for m in morphs if m.is_endomorphism()],
        "left_proper": [m.is_left_proper() for m in morphs],
        "right_proper": [m.is_right_proper() for m in morphs],
        "constant_length": [m.constant_length() for m in morphs],
        "primitivity_witnesses": list(
            ds.primitivity_report(min(args.depth, ds.depth or args.depth)).witnesses
        ),
    }
    _emit(report, args.format)
    return EXIT_OK


def cmd_graph(args) -> int:
    ds = _load(args.file)
    alpha = ds.alphabet_at(args.level)
    word = tuple(alpha.index(s) for s in (args.word or ""))
    g = extension_graph(ds, args.level, word)
    part = connected_components(g)
    if args.format == "dot":
        print(graph_to_dot(g))
        return EXIT_OK
    report = {
        "level": args.level,
        "word": args.word or "",
        "left_vertices": sorted(alpha.symbols[a] for a in g.left_vertices),
        "right_vertices": sorted(alpha.symbols[b] for b in g.right_vertices),
        "edges": sorted(
            [alpha.symbols[a], alpha.symbols[b]] for a, b in g.edges
        ),
        "components": part.count,
        "left_classes": [[alpha.symbols[a] for a in c] for c in part.left_classes],
        "right_classes": [[alpha.symbols[a] for a in c] for c in part.right_classes],
    }
    _emit(report, args.format)
    return EXIT_OK


def cmd_coboundary(args) -> int:
    ds = _load(args.file)
    report = coboundary_report(ds, args.level, budget=args.budget)
    _emit(report, args.format)
    return EXIT_OK


def cmd_certify(args) -> int:
    ds = _load(args.file)
    alpha = parse_alpha(args.alpha)
    cert = certify_eigenvalue(ds, alpha, n_max=args.nmax)
    diag = host_diagnostic(ds, alpha, args.depth)
    report: dict = {"alpha": str(alpha), "diagnostics": diag.to_json_dict()}
    if cert is not None:
        ok, table, ratio = verify_certificate(cert, ds, depth=args.depth)
        report["verdict"] = "certified"
        report["certificate"] = cert.to_json_dict()
        report["decay_table"] = [[m, round(s, 12)] for m, s in table]
        report["decay_ratio"] = None if ratio is None else round(ratio, 12)
        report["verified"] = ok
        _emit(report, args.format)
        return EXIT_OK
    report["verdict"] = diag.verdict
    _emit(report, args.format)
    return EXIT_OK if diag.verdict != INCONCLUSIVE else EXIT_INCONCLUSIVE


def cmd_spectrum(args) -> int:
    ds = _load(args.file)
    rep = constant_length_spectrum(ds, depth=args.depth, budget=args.budget)
    _emit(rep.to_json_dict(), args.format)
    return EXIT_OK


def cmd_balance(args) -> int:
    ds = _load(args.file)
    verdicts = {}
    for k in range(1, args.length + 1):
        rep = balanced_on_letters(ds) if k == 1 else balanced_on_factors(ds, k)
        verdicts[str(k)] = rep.to_json_dict()
    _emit({"factor_lengths": verdicts}, args.format)
    return EXIT_OK


def cmd_complexity(args) -> int:
    ds = _load(args.file)
    table = factors(ds, 0, args.length + 2)
    if not table.stabilized:
        print("language did not stabilize within the horizon", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    p = [table.count(j) for j in range(1, args.length + 1)]
    second_difference_check(ds, 0, min(args.length + 2, 6))
    bounds = eigenvalue_dim_bounds(ds, 0, args.length)
    dendric, witness = is_dendric_up_to(ds, 0, min(args.length, 6))
    alpha = ds.alphabet_at(0)
    report = {
        "complexity": p,
        "second_difference_identity": True,
        "bounds": bounds.to_json_dict(),
        "dendric_up_to": min(args.length, 6),
        "dendric": dendric,
        "dendric_witness": None
        if witness is None
        else "".join(alpha.symbols[i] for i in witness),
    }
    _emit(report, args.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sadic",
        description="Exact analysis of substitution and S-adic subshifts",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_word=False):
        p.add_argument("file", help="morphism / directive-sequence file")
        p.add_argument("--depth", type=int, default=8)
        p.add_argument("--length", type=int, default=6)
        p.add_argument("--budget", type=int, default=4096)
        p.add_argument("--nmax", type=int, default=8)
        p.add_argument("--level", type=int, default=0)
        p.add_argument("--format", choices=("json", "text", "dot"), default="json")
        if needs_word:
            p.add_argument("--word", default="")

    p = sub.add_parser("inspect", help="alphabets, matrices, properness, primitivity")
    common(p)
    p.set_defaults(func=cmd_inspect)
    p = sub.add_parser("graph", help="extension graph and components")
    common(p, needs_word=True)
    p.set_defaults(func=cmd_graph)
    p = sub.add_parser("coboundary", help="coboundary basis, triviality, lattice")
    common(p)
    p.set_defaults(func=cmd_coboundary)
    p = sub.add_parser("certify", help="eigenvalue certificate / diagnostics")
    common(p)
    p.add_argument("--alpha", required=True, help="candidate: p/q, p + q*sqrt(d), golden, sqrt2")
    p.set_defaults(func=cmd_certify)
    p = sub.add_parser("spectrum", help="constant-length rational spectrum")
    common(p)
    p.set_defaults(func=cmd_spectrum)
    p = sub.add_parser("balance", help="balancedness on factor lengths 1..k")
    common(p)
    p.set_defaults(func=cmd_balance)
    p = sub.add_parser("complexity", help="complexity, second differences, dendricity")
    common(p)
    p.set_defaults(func=cmd_complexity)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (MorphismError, InexactMode, UnstableLanguage, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
