"""Command-line front end.

Exit codes: 0 the property holds, 1 it fails, 2 malformed input,
3 the two Verdier deciders disagree.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus
from .diagram import OpDiagram, constant_diagram, corep_sheaf, diagram_from_json, diagram_to_json, interval_unit, skyscraper
from .duality import (
    VerdictReport,
    dualize,
    is_gorenstein_star_poset,
    is_verdier,
    is_verdier_via_gorenstein,
    main_theorem_check,
)
from .errors import InputError, VerdierError
from .homotopy import gamma
from .linalg import parse_ring, ring_name
from .poset import FinitePoset, poset_from_json
from .simplicial import complex_to_json

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_INCONSISTENT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def canonical_json(obj) -> str:
    """Sorted keys, no floats, stable separators."""
    _reject_floats(obj)
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=1)


def _reject_floats(obj) -> None:
    if isinstance(obj, float):
        raise TypeError("reports must not contain floats")
    if isinstance(obj, dict):
        for v in obj.values():
            _reject_floats(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _reject_floats(v)


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _load_poset(path: str) -> FinitePoset:
    data = _read_json(path)
    if isinstance(data, dict) and "poset" in data and "elements" not in data:
        data = data["poset"]
    try:
        return poset_from_json(data)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, VerdierError):
            raise
        raise InputError(f"malformed poset in {path}: {exc}") from None


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def _emit_report(report: VerdictReport, fmt: str) -> None:
    if fmt == "json":
        _write(canonical_json(report.to_json()), None)
        return
    verdict = {True: "holds", False: "fails", None: "undecided"}[report.verdict]
    lines = [f"{report.property}: {verdict} (ring {report.ring}, {report.timing_ms} ms)"]
    if report.inconsistent:
        lines.append("INCONSISTENT: the two deciders disagree")
    if report.seed is not None:
        lines.append(f"seed: {report.seed}")
    for w in report.witnesses:
        lines.append("  " + json.dumps(w, sort_keys=True, ensure_ascii=False))
    _write("\n".join(lines), None)


def _exit_for(report: VerdictReport) -> int:
    if report.inconsistent:
        return EXIT_INCONSISTENT
    return EXIT_PASS if report.verdict else EXIT_FAIL


# -- commands ---------------------------------------------------------------


def cmd_check(args) -> int:
    P = _load_poset(args.path)
    modulus = parse_ring(args.ring)
    opts = dict(
        ring=modulus,
        jobs=args.jobs,
        full_check_bound=args.full_check_bound,
        sample_pairs=args.sample_pairs,
        seed=args.seed,
    )
    if args.which == "gorenstein":
        report = is_gorenstein_star_poset(P, modulus, args.jobs)
    elif args.which == "both":
        report = main_theorem_check(P, **opts)
    else:
        report = is_verdier(P, **opts)
        if report.verdict is None:
            # oversized and unsampled: decide through (ii), keep the skip marker
            ii = is_verdier_via_gorenstein(P, modulus, args.jobs)
            report = VerdictReport(
                "verdier",
                ii.verdict,
                report.witnesses + [{"check": "ii", **w} for w in ii.witnesses[:1]],
                report.timing_ms + ii.timing_ms,
                None,
                ii.ring,
            )
    _emit_report(report, args.format)
    return _exit_for(report)


def cmd_gamma(args) -> int:
    P = _load_poset(args.poset)
    modulus = parse_ring(args.ring)
    if args.interval:
        p, q = args.interval
        F = interval_unit(P, p, q, modulus=modulus)
        label = f"Z_[{p},{q}]"
    elif args.diagram:
        F = diagram_from_json(_read_json(args.diagram), P)
        if F.modulus != modulus and args.ring_given:
            raise InputError("diagram ring differs from --ring")
        modulus = F.modulus
        label = args.diagram
    else:
        F = constant_diagram(P, modulus=modulus)
        label = "constant"
    h = gamma(P, F).homology
    if args.format == "json":
        _write(canonical_json({"diagram": label, "ring": ring_name(modulus), "cohomology": h.to_json(cohomological=True)}), None)
    else:
        _write(f"Γ(P; {label}) over {ring_name(modulus)}: {h.format(cohomological=True)}", None)
    return EXIT_PASS


def cmd_dualize(args) -> int:
    P = _load_poset(args.poset)
    modulus = parse_ring(args.ring)
    if args.corep is not None:
        F = corep_sheaf(P, _known(P, args.corep), modulus=modulus)
    elif args.skyscraper is not None:
        F = skyscraper(P, _known(P, args.skyscraper), modulus=modulus)
    elif args.diagram:
        F = diagram_from_json(_read_json(args.diagram), P)
    else:
        raise UsageError("give a diagram file, --corep p or --skyscraper p")
    D: OpDiagram = dualize(F)
    table = {p: D.value(p).homology for p in P.elements}
    if args.out:
        _write(canonical_json(diagram_to_json(D)), args.out)
    if args.format == "json":
        _write(canonical_json({p: h.to_json(cohomological=True) for p, h in table.items()}), None)
    else:
        width = max((len(p) for p in P.elements), default=0)
        _write("\n".join(f"{p.ljust(width)}  {h.format(cohomological=True)}" for p, h in table.items()), None)
    return EXIT_PASS


def _known(P: FinitePoset, p: str) -> str:
    P.index(p)
    return p


def _int_param(params: list[str], k: int, name: str) -> int:
    try:
        return int(params[k])
    except (IndexError, ValueError):
        raise UsageError(f"expected integer parameter <{name}>") from None


GENERATORS = {
    "boundary-simplex": ("N", lambda ps: corpus.boundary_simplex_poset(_int_param(ps, 0, "N"))),
    "polygon": ("N", lambda ps: corpus.polygon_poset(_int_param(ps, 0, "N"))),
    "example-nonregular": ("", lambda ps: corpus.example_nonregular()),
    "fan": ("K", lambda ps: corpus.fan_poset(_int_param(ps, 0, "K"))),
    "antichain": ("N", lambda ps: corpus.antichain(_int_param(ps, 0, "N"))),
    "chain": ("N", lambda ps: corpus.chain(_int_param(ps, 0, "N"))),
    "poincare-face-poset": ("", lambda ps: corpus.poincare_face_poset()),
    "poincare-complex": ("", lambda ps: corpus.poincare_sphere_complex()),
    "random-graded": ("SEED SIZE", lambda ps: corpus.random_graded_poset(_int_param(ps, 0, "SEED"), _int_param(ps, 1, "SIZE"))),
    "random-poset": ("SEED SIZE", lambda ps: corpus.random_poset(_int_param(ps, 0, "SEED"), _int_param(ps, 1, "SIZE"))),
}


def cmd_generate(args) -> int:
    if args.kind == "random-diagram":
        if len(args.params) != 2:
            raise UsageError("random-diagram takes SEED POSET_FILE")
        P = _load_poset(args.params[1])
        obj = diagram_to_json(corpus.random_interval_diagram(_int_param(args.params, 0, "SEED"), P, modulus=parse_ring(args.ring)))
    elif args.kind == "suspension":
        if len(args.params) != 1:
            raise UsageError("suspension takes POSET_FILE")
        obj = corpus.suspension_poset(_load_poset(args.params[0])).to_json()
    else:
        if args.kind not in GENERATORS:
            raise UsageError(f"unknown kind {args.kind!r}; known: {', '.join(sorted(GENERATORS) + ['random-diagram', 'suspension'])}")
        spec, build = GENERATORS[args.kind]
        if len(args.params) != len(spec.split()):
            raise UsageError(f"{args.kind} takes {spec or 'no parameters'}")
        made = build(args.params)
        obj = made.to_json() if isinstance(made, FinitePoset) else complex_to_json(made)
    _write(canonical_json(obj), args.out)
    return EXIT_PASS


def cmd_corpus_verify(args) -> int:
    golden_dir = Path(args.golden_dir) if args.golden_dir else None
    if golden_dir is not None and not golden_dir.is_dir():
        raise InputError(f"golden directory {golden_dir} does not exist")
    modulus = parse_ring(args.ring)
    results = []
    worst = EXIT_PASS
    for entry in corpus.corpus_entries():
        if args.only and entry.name not in args.only:
            continue
        P = entry.poset()
        mt = main_theorem_check(
            P, modulus, args.jobs, args.full_check_bound, args.sample_pairs, args.seed
        )
        gor = is_gorenstein_star_poset(P, modulus, args.jobs)
        iii = next((w for w in mt.witnesses if w.get("check") == "iii"), {})
        row = {
            "name": entry.name,
            "size": len(P),
            "verdier": mt.verdict,
            "gorenstein": gor.verdict,
            "verdier_iii": "skipped" if "skipped" in iii else iii.get("verdict"),
            "expected": {"verdier": entry.verdier, "gorenstein": entry.gorenstein},
        }
        ok = mt.verdict == entry.verdier and gor.verdict == entry.gorenstein
        golden = _golden_record(entry, P)
        if golden_dir is not None:
            path = golden_dir / f"{entry.name}.json"
            if args.update:
                path.write_text(canonical_json(golden) + "\n", encoding="utf-8")
            elif not path.exists():
                ok = False
                row["golden"] = "missing"
            elif json.loads(path.read_text(encoding="utf-8")) != golden:
                ok = False
                row["golden"] = "differs"
        row["ok"] = ok
        if mt.inconsistent:
            worst = EXIT_INCONSISTENT
        elif not ok and worst == EXIT_PASS:
            worst = EXIT_FAIL
        results.append(row)
    if args.format == "json":
        _write(canonical_json({"entries": results, "ring": ring_name(modulus)}), None)
    else:
        for r in results:
            mark = "ok  " if r["ok"] else "FAIL"
            _write(
                f"{mark} {r['name']:<32} |P|={r['size']:<4} verdier={r['verdier']} (iii: {r['verdier_iii']}) "
                f"gorenstein={r['gorenstein']}" + (f" golden {r['golden']}" if "golden" in r else ""),
                None,
            )
    return worst


def _golden_record(entry: corpus.CorpusEntry, P: FinitePoset) -> dict:
    rec = {
        "name": entry.name,
        "size": len(P),
        "verdier": entry.verdier,
        "gorenstein": entry.gorenstein,
        "basis": entry.basis,
    }
    if len(P) <= 16:
        rec["poset"] = P.to_json()
    return rec


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", default="Z", help="coefficients: Z, F2, F3, ... (default Z)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--format", choices=["json", "text"], default="text")

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--sample-pairs", type=int, default=None,
                          help="check condition (iii) on this many seeded random pairs")
    sampling.add_argument("--seed", type=int, default=None, help="sampling seed (default 0)")
    sampling.add_argument("--full-check-bound", type=int, default=40,
                          help="largest poset on which (iii) runs on every pair (default 40)")

    parser = argparse.ArgumentParser(prog="verdier", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common, sampling], help="decide Verdier / Gorenstein* for a poset file")
    p.add_argument("path")
    p.add_argument("--which", choices=["verdier", "gorenstein", "both"], default="both")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gamma", parents=[common], help="cohomology of global sections")
    p.add_argument("poset")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--diagram")
    g.add_argument("--interval", nargs=2, metavar=("P", "Q"))
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("dualize", parents=[common], help="apply the duality functor to a diagram")
    p.add_argument("poset")
    p.add_argument("diagram", nargs="?")
    p.add_argument("--corep", metavar="P")
    p.add_argument("--skyscraper", metavar="P")
    p.add_argument("--out", help="write the dual diagram JSON here")
    p.set_defaults(func=cmd_dualize)

    p = sub.add_parser("generate", parents=[common], help="write a corpus object as JSON")
    p.add_argument("kind")
    p.add_argument("params", nargs="*")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("corpus-verify", parents=[common, sampling], help="re-derive corpus verdicts")
    p.add_argument("--golden-dir", help="directory of golden verdict files")
    p.add_argument("--update", action="store_true", help="rewrite golden files instead of comparing")
    p.add_argument("--only", nargs="*", help="restrict to these entry names")
    p.set_defaults(func=cmd_corpus_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    args.ring_given = any(a == "--ring" or a.startswith("--ring=") for a in argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
