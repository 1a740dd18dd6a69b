"""Command-line front end.

Subcommands: table, folner, growth, kazhdan, lie, uf, validate.  Every
subcommand renders as ``human`` text, ``csv`` rows or a ``json`` document.
Exit status is 0 on success, 1 when a validation or check fails and 2 on a
usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .fusion import CustomModelError, FragmentBoundaryError, load_custom, validate_axioms
from .growth import growth_from_balls, uf_rate, uf_series_coefficients, uf_sphere_sizes, uf_sphere_sizes_exact
from .lie import build_root_system, uniform_growth
from .metric import build_balls, folner_closed_form, folner_scan, generating_set
from .models import SOModel, SUModel, UFModel, o_plus_q, q_from_F, so_param_from_N
from .qarith import laurent_eval
from .spectral import kazhdan_closed_form, truncated_kazhdan_estimate

__all__ = ["main", "run_table", "render", "fmt_float"]

SIG = 12
CSV_HEADERS = {
    "folner": ("radius", "size", "boundary_size", "inner_boundary_size", "outer_ratio", "inner_ratio"),
    "growth": ("n", "ball_size", "sphere_size", "nth_root", "ratio"),
    "uf": ("n", "sphere_size", "ratio"),
    "kazhdan": ("N", "estimate", "closed_form", "gap"),
    "lie": ("i", "pairing"),
    "table": ("model", "quantity", "closed_form", "scan", "gap"),
    "validate": ("check", "failures"),
}


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, doc):
        self.doc = doc


# ---------------------------------------------------------------- formatting


def fmt_float(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return f"{x:.{SIG}g}"
    return str(x)


def _clean(obj):
    """Round floats to 12 significant digits; make the document JSON-safe."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return str(obj)
        return float(f"{obj:.{SIG}g}")
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return str(obj)


def dump_json(doc) -> str:
    return json.dumps(_clean(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return dump_json(doc)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADERS[doc["command"]])
        for row in doc.get("rows", []):
            w.writerow([fmt_float(v) for v in row])
        return buf.getvalue()
    lines = [f"# {doc['command']}"]
    for k, v in doc["inputs"].items():
        lines.append(f"{k}: {fmt_float(v)}")
    lines.append("")
    for k, v in doc["results"].items():
        if isinstance(v, (list, tuple)):
            v = ", ".join(fmt_float(x) for x in v)
        lines.append(f"{k}: {fmt_float(v)}")
    if doc.get("rows"):
        lines.append("")
        header = CSV_HEADERS[doc["command"]]
        cells = [list(header)] + [[fmt_float(v) for v in row] for row in doc["rows"]]
        widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
        for r in cells:
            lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- helpers


def _threads() -> int:
    raw = os.environ.get("FUSIONLAB_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return max(1, min(4, os.cpu_count() or 1))


def _q_arg(args, *, allow_one=True) -> float:
    if args.q is None:
        raise UsageError("--q is required")
    if not (0 < args.q <= 1) or (not allow_one and args.q == 1):
        raise UsageError(f"q must lie in (0, 1], got {args.q}")
    return args.q


def _resolve_q(args) -> float:
    """q from --q, or from --N through O_N+ (su) or S_N+ (so)."""
    if args.q is not None and args.N is not None:
        raise UsageError("give either --q or --N, not both")
    if args.N is not None:
        try:
            return so_param_from_N(args.N) if args.model == "so" else o_plus_q(args.N)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return _q_arg(args)


def _model_and_gens(args):
    kind = args.model
    if kind == "custom":
        if not args.file:
            raise UsageError("--model custom needs --file")
        if not args.gens:
            raise UsageError("--model custom needs --gens")
        model = load_custom(Path(args.file))
        return model, generating_set(model, args.gens.split(","))
    q = _resolve_q(args)
    if kind == "su":
        m = SUModel(q)
        return m, generating_set(m, [1])
    if kind == "so":
        m = SOModel(q)
        return m, generating_set(m, [1])
    if kind == "uf":
        m = UFModel(q)
        return m, generating_set(m, m.generators())
    raise UsageError(f"model {kind!r} not supported by this subcommand")


def _doc(command, inputs, results, rows=(), trace=None):
    doc = {"command": command, "inputs": inputs, "results": results, "rows": [list(r) for r in rows]}
    if trace is not None:
        doc["trace"] = trace
    return doc


# ---------------------------------------------------------------- subcommands


def run_table(q: float | None = None, N_O: int | None = None, N_S: int | None = None, *, folner_max: int = 200, depth: int = 60, trunc: int = 2000) -> dict:
    """Closed-form and scanned invariants of SU_q(2), SO_q(3) and U_F+."""
    if sum(v is not None for v in (q, N_O, N_S)) != 1:
        raise UsageError("give exactly one of q, N_O, N_S")
    if N_O is not None:
        q = o_plus_q(N_O)
    elif N_S is not None:
        q = so_param_from_N(N_S)
    if not 0 < q <= 1:
        raise UsageError(f"q must lie in (0, 1], got {q}")

    def row(kind):
        model = SUModel(q) if kind == "su" else SOModel(q)
        fol, fol_inn = folner_closed_form(kind, q)
        omega = q**-2 if kind == "su" else q**-4
        kaz = kazhdan_closed_form(kind, q)
        scan = folner_scan(model, [1], "intervals", folner_max)
        g = growth_from_balls(build_balls(model, [1], depth))
        k = truncated_kazhdan_estimate(model, 1, trunc)
        return kind, [
            ("Fol", fol, scan.outer_infimum),
            ("Fol_inn", fol_inn, scan.inner_infimum),
            ("omega", omega, g.estimate),
            ("Kaz", kaz, k.estimate),
        ]

    with ThreadPoolExecutor(max_workers=_threads()) as ex:
        results = dict(ex.map(row, ["su", "so"]))
    cubic = uf_rate(q)
    uf_ratio = None
    if q < 1:
        s = uf_sphere_sizes(q, 31)
        uf_ratio = s[31] / s[30]
    rows = []
    res = {}
    for kind in ("su", "so"):
        for name, closed, scanned in results[kind]:
            rows.append((kind, name, closed, scanned, abs(scanned - closed)))
            res[f"{kind}_{name}"] = closed
    for name in ("Fol", "Fol_inn"):
        rows.append(("uf", name, "-", "-", "-"))
    rows.append(("uf", "omega", cubic.root, uf_ratio, None if uf_ratio is None else abs(uf_ratio - cubic.root)))
    rows.append(("uf", "Kaz", "-", "-", "-"))
    res["uf_omega"] = cubic.root
    inputs = {"q": q, "N_O": N_O, "N_S": N_S, "folner_max": folner_max, "depth": depth, "truncation": trunc}
    return _doc("table", inputs, res, rows)


def cmd_table(args):
    if args.model not in (None, "su", "so"):
        raise UsageError("table takes --model su (O_N+) or so (S_N+) with --N")
    if args.q is not None and args.N is not None:
        raise UsageError("give either --q or --N, not both")
    if args.N is not None:
        kw = {"N_S": args.N} if args.model == "so" else {"N_O": args.N}
        try:
            return run_table(**kw, folner_max=args.max or 200, depth=args.depth or 60)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return run_table(q=_q_arg(args), folner_max=args.max or 200, depth=args.depth or 60)


def cmd_folner(args):
    model, X = _model_and_gens(args)
    strategy = args.strategy or ("intervals" if args.model in ("su", "so") else "balls")
    steps = args.max if args.max is not None else 40
    fragment = None
    if strategy == "exhaustive":
        if args.model not in ("su", "so"):
            raise UsageError("exhaustive strategy runs on su/so over the fragment {0..max}")
        if steps + 1 > 20:
            raise UsageError("exhaustive fragment limited to 20 elements")
        fragment = list(range(steps + 1))
    try:
        scan = folner_scan(model, X, strategy, steps, fragment=fragment)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    res = {
        "outer_infimum": scan.outer_infimum,
        "inner_infimum": scan.inner_infimum,
        "last_outer_ratio": scan.last.outer_ratio,
        "last_inner_ratio": scan.last.inner_ratio,
        "extrapolated_outer": scan.extrapolated_outer,
        "extrapolated_inner": scan.extrapolated_inner,
    }
    if args.model in ("su", "so"):
        fol, fol_inn = folner_closed_form(args.model, model.q)
        res["closed_form_outer"], res["closed_form_inner"] = fol, fol_inn
    if strategy == "exhaustive":
        best = min(scan.rows, key=lambda r: r.inner_ratio)
        res["minimizer"] = best.descriptor
    inputs = {"model": args.model, "q": getattr(model, "q", None), "strategy": strategy, "max": steps}
    return _doc("folner", inputs, res, scan.csv_rows())


def cmd_growth(args):
    model, X = _model_and_gens(args)
    depth = args.depth or 60
    table = build_balls(model, X, depth, exact=args.exact)
    est = growth_from_balls(table)
    res = {
        "estimate": est.estimate,
        "method": est.method,
        "error": est.error,
        "guard": est.guard,
        "flagged": est.flagged,
        "subexponential": est.subexponential,
        "ratio_liminf": est.ratio_liminf,
        "ratio_limsup": est.ratio_limsup,
    }
    if args.model == "su":
        res["closed_form"] = model.q**-2
    elif args.model == "so":
        res["closed_form"] = model.q**-4
    elif args.model == "uf":
        res["closed_form"] = uf_rate(model.q).root
    if args.exact:
        dev = max(
            abs(laurent_eval(e, model.q) - f) / f if not isinstance(e, Fraction) else abs(float(e) - f) / f
            for e, f in zip(table.exact_ball_sizes, table.ball_sizes)
        )
        res["exact_float_max_rel_gap"] = dev
    inputs = {"model": args.model, "q": getattr(model, "q", None), "depth": depth, "exact": bool(args.exact)}
    return _doc("growth", inputs, res, est.csv_rows(table))


def cmd_kazhdan(args):
    if args.model not in ("su", "so"):
        raise UsageError("kazhdan supports --model su or so")
    q = _resolve_q(args)
    model = SUModel(q) if args.model == "su" else SOModel(q)
    trunc = args.trunc or 2000
    try:
        r = truncated_kazhdan_estimate(model, args.generator, trunc)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    res = {
        "closed_form": r.closed_form,
        "generator_bound": r.generator_bounds[args.generator],
        "estimate": r.estimate,
        "flagged": r.flagged,
    }
    inputs = {"model": args.model, "q": q, "N": args.N, "generator": args.generator, "truncation": trunc}
    return _doc("kazhdan", inputs, res, r.csv_rows())


def _lie_type(args):
    if not args.type:
        raise UsageError("--type is required")
    t = args.type.strip().upper()
    kind, rank = t[0], args.rank
    if len(t) > 1:
        try:
            inline = int(t[1:])
        except ValueError:
            raise UsageError(f"bad type {args.type!r}") from None
        if rank is not None and rank != inline:
            raise UsageError("--type and --rank disagree")
        rank = inline
    if rank is None:
        raise UsageError("--rank is required")
    return kind, rank


def cmd_lie(args):
    kind, rank = _lie_type(args)
    q = _q_arg(args)
    try:
        rs = build_root_system(kind, rank)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ug = uniform_growth(rs, q)
    res = {
        "type": rs.name,
        "positive_roots": len(rs.positive_roots),
        "symmetrizers": list(rs.symmetrizers),
        "rho_pairings": list(rs.rho_pairings),
        "exponent": ug.exponent,
        "rate": ug.rate,
        "canonical_generators": [str(w) for w in ug.generators],
        "amenable": ug.amenable,
    }
    rows = [(i + 1, p) for i, p in enumerate(rs.rho_pairings)]
    return _doc("lie", {"type": kind, "rank": rank, "q": q}, res, rows)


def cmd_uf(args):
    if args.F and args.q is not None:
        raise UsageError("give either --q or --F, not both")
    if args.F:
        try:
            F = json.loads(Path(args.F).read_text(encoding="utf-8"))
            q = q_from_F([[complex(x) if not isinstance(x, list) else complex(*x) for x in row] for row in F])
        except ValueError as exc:
            raise CheckFailed(_doc("uf", {"F": Path(args.F).name}, {"error": str(exc)})) from exc
    else:
        q = _q_arg(args)
    depth = args.depth or 30
    if depth > 200:
        raise UsageError("depth limited to 200")
    cubic = uf_rate(q)
    sizes = uf_sphere_sizes(q, depth)
    rows = [(n, s, sizes[n + 1] / s if n < depth else None) for n, s in enumerate(sizes)]
    res = {
        "rate": cubic.root,
        "residual": cubic.residual,
        "lower_bound": cubic.lower,
        "upper_bound": cubic.upper,
        "bounds_hold": cubic.sandwich_ok,
        "cubic": list(cubic.coefficients),
        "last_ratio": rows[-2][2] if depth >= 1 else None,
    }
    if args.exact:
        n = min(depth, 30)
        res["series_match_terms"] = n + 1
        res["series_match"] = uf_sphere_sizes_exact(n) == uf_series_coefficients(n)
    return _doc("uf", {"q": q, "depth": depth, "exact": bool(args.exact)}, res, rows)


def cmd_validate(args):
    if args.model in (None, "custom"):
        if not args.file:
            raise UsageError("validate needs --file for a custom model")
        try:
            model = load_custom(Path(args.file), validate=False)
        except CustomModelError as exc:
            doc = _doc("validate", {"file": Path(args.file).name}, {"ok": False, "problems": exc.problems},
                       [("structure", len(exc.problems))])
            raise CheckFailed(doc) from exc
        sample = list(model.irreducibles)
        inputs = {"file": Path(args.file).name}
    else:
        model, X = _model_and_gens(args)
        radius = args.max if args.max is not None else 3
        sample = list(build_balls(model, X, radius).ball(radius))
        inputs = {"model": args.model, "q": model.q, "radius": radius}
    rep = validate_axioms(model, sample, exact=True if args.exact else None)
    lab = model.label_str
    res = {
        "ok": rep.ok,
        "checked_triples": rep.checked_triples,
        "skipped": rep.skipped,
        "frobenius_failures": [[lab(x) for x in t] for t in rep.frobenius_failures],
        "dim_failures": [[str(x) for x in t] for t in rep.dim_failures],
        "involution_failures": [[str(x) for x in t] for t in rep.involution_failures],
        "unit_failures": [[str(x) for x in t] for t in rep.unit_failures],
    }
    rows = [
        ("frobenius", len(rep.frobenius_failures)),
        ("dimension", len(rep.dim_failures)),
        ("involution", len(rep.involution_failures)),
        ("unit", len(rep.unit_failures)),
    ]
    doc = _doc("validate", inputs, res, rows)
    if not rep.ok:
        raise CheckFailed(doc)
    return doc


COMMANDS = {
    "table": cmd_table,
    "folner": cmd_folner,
    "growth": cmd_growth,
    "kazhdan": cmd_kazhdan,
    "lie": cmd_lie,
    "uf": cmd_uf,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fusionlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"fusionlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--model", choices=["su", "so", "uf", "lie", "custom"])
        sp.add_argument("--q", type=float)
        sp.add_argument("--N", type=int, help="O_N+ parameter (su) or S_N+ parameter (so)")
        sp.add_argument("--type", help="Lie type letter, optionally with rank, e.g. E7")
        sp.add_argument("--rank", type=int)
        sp.add_argument("--depth", type=int)
        sp.add_argument("--strategy", choices=["balls", "intervals", "exhaustive"])
        sp.add_argument("--max", type=int, help="scan length, or fragment {0..max} for exhaustive")
        sp.add_argument("--format", choices=["human", "csv", "json"], default="human")
        sp.add_argument("--out", help="write output to this file instead of stdout")
        sp.add_argument("--exact", action="store_true", help="carry exact arithmetic where supported")
        sp.add_argument("--file", help="custom fusion document (JSON or YAML)")
        sp.add_argument("--gens", help="comma-separated generators for a custom model")
        sp.add_argument("--F", help="JSON file holding the matrix F (uf)")
        sp.add_argument("--generator", type=int, default=1, help="generator label for kazhdan")
        sp.add_argument("--trunc", type=int, help="truncation size for kazhdan")
    return p


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    defaults = {"folner": "su", "growth": "su", "kazhdan": "su", "validate": None, "table": None, "uf": "uf", "lie": "lie"}
    if args.model is None:
        args.model = defaults[args.command]
    try:
        doc = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"fusionlab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except CheckFailed as exc:
        _emit(render(exc.doc, args.format), args.out)
        return 1
    except (CustomModelError, FragmentBoundaryError) as exc:
        print(f"fusionlab {args.command}: {exc}", file=sys.stderr)
        return 1
    _emit(render(doc, args.format), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
