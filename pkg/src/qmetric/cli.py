"""Command-line front end: load files, run a checker, write a deterministic report.

Exit status is 0 when every check passes, 1 when some check fails and 2 on
load errors or violated preconditions.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Optional

from qmetric import __version__
from qmetric import galois, io, omega, structures, vmetric
from qmetric.laws import check_quantale_laws
from qmetric.quantales import TOL, QuantaleError, get_quantale
from qmetric.report import CheckReport, render_json, render_text
from qmetric.sampling import SEED_ENV, default_seed


def _common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=None, help=f"sampling seed (default ${SEED_ENV} or 0)")
    p.add_argument("--tol", type=float, default=TOL, help="comparison tolerance for real-valued quantales")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--timing", action="store_true", help="print elapsed time to stderr")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qmetric", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"qmetric {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("laws", help="run the quantale law suite")
    p.add_argument("--quantale", required=True, help="truth, extreal, unit, errors, ddf or lattice:<path>")
    p.add_argument("--budget", type=int, default=10_000, help="samples per law")
    _common(p)

    space = sub.add_parser("space", help="metric space checks").add_subparsers(dest="action", required=True)
    p = space.add_parser("check", help="check the pseudometric axioms")
    p.add_argument("file")
    _common(p)
    p = space.add_parser("ball", help="open ball around a point")
    p.add_argument("file")
    p.add_argument("--center", required=True)
    p.add_argument("--eps", required=True)
    _common(p)
    p = space.add_parser("cauchy", help="Cauchy and convergence diagnostics for a point sequence")
    p.add_argument("file")
    p.add_argument("--seq", required=True, help="comma-separated points; the last one repeats")
    p.add_argument("--cycle", action="store_true", help="repeat the whole list instead of its last point")
    p.add_argument("--limit", help="also test convergence to this point")
    p.add_argument("--depth", type=int, default=vmetric.DEFAULT_DEPTH)
    _common(p)

    st = sub.add_parser("struct", help="structure checks").add_subparsers(dest="action", required=True)
    p = st.add_parser("check", help="check interpretations are nonexpanding")
    p.add_argument("file")
    _common(p)
    p = st.add_parser("embed", help="check a point map is an embedding")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--map", default=None, help="x:y pairs separated by commas (default: identity on names)")
    _common(p)

    cl = sub.add_parser("class", help="Galois-type engine on a toy class").add_subparsers(dest="action",
                                                                                      required=True)
    for name, text in (("ap", "amalgamation"), ("types", "Galois types over a base"),
                       ("dist", "type distances over a base"), ("ctp", "separation and CTP over a base"),
                       ("tame", "finite-scale tameness")):
        p = cl.add_parser(name, help=text)
        p.add_argument("file")
        if name in ("types", "dist", "ctp"):
            p.add_argument("--base", required=True, help="structure name")
        if name == "ctp":
            p.add_argument("--depth", type=int, default=16, help="number of SAFA terms")
        if name == "tame":
            p.add_argument("--kappa", type=int, required=True)
            p.add_argument("--eps", required=True)
            p.add_argument("--delta", default=None, help="defaults to eps (strong tameness)")
        _common(p)

    om = sub.add_parser("omega", help="partial spaces and Omega-sets").add_subparsers(dest="action", required=True)
    p = om.add_parser("check", help="check a partial space (and its dual) or an Omega-set")
    p.add_argument("file")
    p.add_argument("--separated", action="store_true", help="count separation as a check")
    _common(p)
    return ap


def _parse_value(q, literal: str):
    try:
        return q.parse(literal)
    except (QuantaleError, ValueError) as exc:
        raise QuantaleError(f"cannot read {literal!r} for quantale {q.name}: {exc}") from None


def _fmt_diag(q, diag) -> list:
    return [f"eps={q.format(e)}: " + ("not within depth" if n is None else f"N={n}") for e, n in diag.entries]


def _types_info(cls, base) -> dict:
    return {f"type {t.id}": f"{t.representative!r} ({len(t.members)} extensions)"
            for t in galois.types_over(cls, base)}


def run(args: argparse.Namespace) -> list:
    """Dispatch to the checker named by ``args``; returns the reports."""
    tol = args.tol
    cmd = args.command if args.command == "laws" else f"{args.command} {args.action}"
    if cmd == "laws":
        if args.budget <= 0:
            raise QuantaleError("--budget must be positive")
        return [check_quantale_laws(get_quantale(args.quantale, tol), args.budget, args.seed)]
    if cmd == "space check":
        return [vmetric.check_axioms(io.load_space(args.file, tol))]
    if cmd == "space ball":
        sp = io.load_space(args.file, tol)
        q = sp.quantale
        ball = vmetric.open_ball(sp, args.center, _parse_value(q, args.eps))
        return [CheckReport(f"ball {sp.name}", info={"center": args.center, "eps": args.eps,
                                                     "points": list(ball)})]
    if cmd == "space cauchy":
        sp = io.load_space(args.file, tol)
        pts = [p.strip() for p in args.seq.split(",") if p.strip()]
        if args.cycle:
            for p in pts:
                sp.index(p)
            seq = vmetric.PointSequence(sp, rule=lambda n: pts[n % len(pts)])
        else:
            seq = vmetric.PointSequence.from_table(sp, pts)
        if args.depth <= 0:
            raise QuantaleError("--depth must be positive")
        diag = vmetric.is_cauchy_prefix(seq, args.depth)
        rep = CheckReport(f"sequence in {sp.name}", info={"depth": args.depth, "cauchy N": _fmt_diag(sp.quantale, diag),
                                                          "conclusive": diag.conclusive})
        rep.add("Cauchy within depth", [] if diag.passed else
                [sp.quantale.format(e) for e, n in diag.entries if n is None])
        if args.limit:
            conv = vmetric.converges_to(seq, args.limit, args.depth)
            rep.info["convergence N"] = _fmt_diag(sp.quantale, conv)
            rep.add(f"converges to {args.limit} within depth", [] if conv.passed else
                    [sp.quantale.format(e) for e, n in conv.entries if n is None])
        return [rep]
    if cmd == "struct check":
        return [structures.check_structure(io.load_structure(args.file, tol))]
    if cmd == "struct embed":
        a, b = io.load_structure(args.source, tol), io.load_structure(args.target, tol)
        if args.map:
            pairs = [item.split(":") for item in args.map.split(",")]
            if any(len(p) != 2 for p in pairs):
                raise QuantaleError("--map takes x:y pairs separated by commas")
            mapping = {x.strip(): y.strip() for x, y in pairs}
        else:
            mapping = {p: p for p in a.points}
        return [structures.check_embedding(structures.Embedding(a, b, mapping))]
    if cmd.startswith("class"):
        cls = io.load_class(args.file, tol)
        if args.action == "ap":
            return [galois.check_AP(cls)]
        ap_report = galois.check_AP(cls)
        if args.action == "types":
            info = CheckReport(f"types over {args.base}", info=_types_info(cls, args.base))
            return [ap_report, info]
        if args.action == "dist":
            ts = galois.types_over(cls, args.base)
            q = cls.quantale
            table = {f"d(tp{p.id}, tp{r.id})": q.format(galois.type_distance(cls, p, r)) for p in ts for r in ts}
            rep = galois.check_type_pseudometric(cls, args.base)
            rep.info.update(_types_info(cls, args.base))
            rep.info.update(table)
            return [ap_report, rep]
        if args.action == "ctp":
            return [ap_report, galois.check_separation_and_ctp(cls, args.base, args.depth)]
        q = cls.quantale
        eps = _parse_value(q, args.eps)
        delta = None if args.delta is None else _parse_value(q, args.delta)
        return [ap_report, galois.check_tameness(cls, args.kappa, eps, delta)]
    if cmd == "omega check":
        obj = io.load_omega(args.file, tol)
        if isinstance(obj, omega.OmegaEqualitySet):
            return [omega.check_omega_laws(obj, args.separated)]
        reports = [omega.check_partial_axioms(obj)]
        reports.append(omega.check_omega_laws(omega.to_omega_set(obj), args.separated))
        return reports
    raise QuantaleError(f"unknown command {cmd!r}")


def main(argv: Optional[list] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    if args.seed is None:
        args.seed = default_seed()
    start = time.perf_counter()
    try:
        reports = run(args)
    except (QuantaleError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    header = {"toolkit": f"qmetric {__version__}", "command": " ".join(argv), "seed": args.seed}
    text = (render_json if args.format == "json" else render_text)(header, reports)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.timing:
        print(f"elapsed: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
