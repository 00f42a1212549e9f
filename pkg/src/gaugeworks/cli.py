"""Batch front-end: job files in, tables and machine-readable reports out.

A job file is one JSON document (matrices of exact rationals are arrays of
strings "num/den"; nothing ever passes through floating point):

    {"format": 1, "prime": 3, "kind": "filphi", "payload": {...},
     "outputs": [...]}            # outputs optional

Verbs: ``compute`` runs jobs and prints one deterministic text block per
job (optionally writing a JSON report mirroring the input with computed
fields), ``check`` validates without computing, ``table`` prints the built-
in reference tables for the twist families.  Exit codes: 0 success, 1 for
schema violations (the message names the field), 2 for mathematical law
violations (the message quotes the law).  Identical input bytes produce
identical output bytes; ``--jobs N`` only parallelizes across job files.

The environment variable GAUGEWORKS_SEED is reserved for randomized test
corpus generation and is never read by any computation here.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .beilinson import corners, fm_fibre, verify_cartesian
from .errors import LawViolation, SchemaError
from .exactlinalg import (FGModule, FpMat, ModuleMap, QMat, check_prime,
                          format_rational, parse_rational)
from .fgauge import (FCrystalPoint, FpGauge, extend_window,
                     gauge_from_fcrystal, hodge_tate_weights,
                     rational_realization, syntomic_cohomology, validate)
from .filphi import (FilteredPhiModule, FilteredSpace, hodge_number,
                     is_weakly_admissible, newton_number, rhom_mfphi, tate)
from .higgs import GradedHiggsModule, check_higgs, hodge_cohomology
from .redlocus import (A1Module, FilThetaModule, ReducedFGauge, bk_reduced,
                       reduced_syntomic_cohomology)

KINDS = ("filphi", "square", "fgauge", "reduced", "higgs")

DEFAULT_OUTPUTS = {
    "filphi": ("cohomology", "newton", "hodge", "admissible"),
    "square": ("corners", "residual", "fm"),
    "fgauge": ("validate", "cohomology", "weights", "realization"),
    "reduced": ("components", "cohomology"),
    "higgs": ("check", "cohomology"),
}


# ---------------------------------------------------------------------------
# schema helpers
# ---------------------------------------------------------------------------


def _need(payload: dict, field: str, path: str):
    if field not in payload:
        raise SchemaError(f"{path}.{field}", "missing required field")
    return payload[field]


def _as_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"expected an integer, got {value!r}")
    return value


def _rational_entry(value, path: str) -> Fraction:
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except ValueError as err:
            raise SchemaError(path, str(err)) from None
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise SchemaError(path, f"expected a rational string, got {value!r}")


def _rational_matrix(data, rows: int, cols: int, path: str) -> QMat:
    if not isinstance(data, list) or len(data) != rows:
        raise SchemaError(path, f"expected {rows} rows")
    out = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise SchemaError(f"{path}[{i}]", f"expected a row of length {cols}")
        out.append([_rational_entry(x, f"{path}[{i}][{j}]")
                    for j, x in enumerate(row)])
    return QMat(out, ncols=cols)


def _int_matrix(p: int, data, rows: int, cols: int, path: str) -> FpMat:
    if not isinstance(data, list) or len(data) != rows:
        raise SchemaError(path, f"expected {rows} rows")
    out = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise SchemaError(f"{path}[{i}]", f"expected a row of length {cols}")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise SchemaError(f"{path}[{i}][{j}]", "expected an integer mod p")
        out.append(row)
    return FpMat(p, out, ncols=cols)


def _format_matrix(m: QMat) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in m.rows]


# ---------------------------------------------------------------------------
# payload builders
# ---------------------------------------------------------------------------


def build_filphi(p: int, payload: dict) -> FilteredPhiModule:
    if "tate" in payload:
        return tate(_as_int(payload["tate"], "payload.tate"), p)
    dim = _as_int(_need(payload, "dim", "payload"), "payload.dim")
    frob = _rational_matrix(_need(payload, "frobenius", "payload"),
                            dim, dim, "payload.frobenius")
    fil = _need(payload, "filtration", "payload")
    window = _need(fil, "window", "payload.filtration")
    if not (isinstance(window, list) and len(window) == 2):
        raise SchemaError("payload.filtration.window", "expected [lo, hi]")
    lo, hi = (_as_int(window[0], "payload.filtration.window[0]"),
              _as_int(window[1], "payload.filtration.window[1]"))
    dims = _need(fil, "dims", "payload.filtration")
    if not isinstance(dims, list) or len(dims) != hi - lo + 1:
        raise SchemaError("payload.filtration.dims",
                          f"expected {hi - lo + 1} entries")
    dims = [_as_int(x, f"payload.filtration.dims[{k}]") for k, x in enumerate(dims)]
    if dims and dims[0] != dim:
        raise SchemaError("payload.filtration.dims[0]",
                          "must equal the underlying dimension")
    raw_trans = fil.get("transitions", [])
    if len(raw_trans) != max(hi - lo, 0):
        raise SchemaError("payload.filtration.transitions",
                          f"expected {hi - lo} matrices")
    transitions = tuple(
        _rational_matrix(t, dims[k], dims[k + 1],
                         f"payload.filtration.transitions[{k}]")
        for k, t in enumerate(raw_trans))
    try:
        fs = FilteredSpace(lo, hi, tuple(dims), transitions)
        return FilteredPhiModule(p, fs, frob)
    except LawViolation:
        raise
    except ValueError as err:
        raise SchemaError("payload.filtration", str(err)) from None


def _build_module(p: int, data, path: str) -> FGModule:
    free = _as_int(_need(data, "free", path), f"{path}.free")
    torsion = data.get("torsion", [])
    if not isinstance(torsion, list):
        raise SchemaError(f"{path}.torsion", "expected a list of exponents")
    torsion = tuple(_as_int(e, f"{path}.torsion[{k}]") for k, e in enumerate(torsion))
    try:
        return FGModule(p, free, torsion)
    except ValueError as err:
        raise SchemaError(path, str(err)) from None


def build_fgauge(p: int, payload: dict) -> FpGauge:
    if "fcrystal" in payload:
        fc = payload["fcrystal"]
        rank = _as_int(_need(fc, "rank", "payload.fcrystal"), "payload.fcrystal.rank")
        tau = _rational_matrix(_need(fc, "tau", "payload.fcrystal"),
                               rank, rank, "payload.fcrystal.tau")
        return gauge_from_fcrystal(FCrystalPoint(p, rank, tau))
    window = _need(payload, "window", "payload")
    a, b = (_as_int(window[0], "payload.window[0]"),
            _as_int(window[1], "payload.window[1]"))
    raw_modules = _need(payload, "modules", "payload")
    if not isinstance(raw_modules, list) or len(raw_modules) != b - a + 1:
        raise SchemaError("payload.modules", f"expected {b - a + 1} entries")
    modules = tuple(_build_module(p, m, f"payload.modules[{k}]")
                    for k, m in enumerate(raw_modules))

    def maps(field: str, sources, targets) -> tuple[ModuleMap, ...]:
        raw = _need(payload, field, "payload")
        if not isinstance(raw, list) or len(raw) != b - a:
            raise SchemaError(f"payload.{field}", f"expected {b - a} matrices")
        out = []
        for k, data in enumerate(raw):
            mat = _rational_matrix(data, targets[k].ngens, sources[k].ngens,
                                   f"payload.{field}[{k}]")
            try:
                out.append(ModuleMap(sources[k], targets[k], mat))
            except LawViolation:
                raise
        return tuple(out)

    ts = maps("t", modules[1:], modules[:-1])
    us = maps("u", modules[:-1], modules[1:])
    tau_mat = _rational_matrix(_need(payload, "tau", "payload"),
                               modules[0].ngens, modules[-1].ngens, "payload.tau")
    tau = ModuleMap(modules[-1], modules[0], tau_mat)
    return FpGauge(p, (a, b), modules, ts, us, tau)


def build_reduced(p: int, payload: dict) -> ReducedFGauge:
    if "bk" in payload:
        return bk_reduced(_as_int(payload["bk"], "payload.bk"), p)
    raw_htc = _need(payload, "htc", "payload")
    lo = _as_int(_need(raw_htc, "window", "payload.htc")[0], "payload.htc.window[0]")
    hi = _as_int(raw_htc["window"][1], "payload.htc.window[1]")
    dims = [_as_int(x, f"payload.htc.dims[{k}]")
            for k, x in enumerate(_need(raw_htc, "dims", "payload.htc"))]
    if len(dims) != hi - lo + 1:
        raise SchemaError("payload.htc.dims", f"expected {hi - lo + 1} entries")
    xs = tuple(_int_matrix(p, mat, dims[k + 1], dims[k], f"payload.htc.x[{k}]")
               for k, mat in enumerate(raw_htc.get("x", [])))
    ds = tuple(_int_matrix(p, mat, dims[k], dims[k + 1], f"payload.htc.d[{k}]")
               for k, mat in enumerate(raw_htc.get("d", [])))
    try:
        htc = A1Module(p, lo, hi, tuple(dims), xs, ds)
    except ValueError as err:
        raise SchemaError("payload.htc", str(err)) from None
    raw_drp = _need(payload, "drp", "payload")
    n = _as_int(_need(raw_drp, "dim", "payload.drp"), "payload.drp.dim")
    dlo = _as_int(_need(raw_drp, "window", "payload.drp")[0], "payload.drp.window[0]")
    dhi = _as_int(raw_drp["window"][1], "payload.drp.window[1]")
    raw_flags = _need(raw_drp, "flags", "payload.drp")
    if not isinstance(raw_flags, list) or len(raw_flags) != dhi - dlo + 1:
        raise SchemaError("payload.drp.flags", f"expected {dhi - dlo + 1} bases")
    flags = []
    for k, cols in enumerate(raw_flags):
        width = len(cols[0]) if cols else 0
        flags.append(_int_matrix(p, cols, n, width, f"payload.drp.flags[{k}]"))
    theta = _int_matrix(p, _need(raw_drp, "theta", "payload.drp"), n, n,
                        "payload.drp.theta")
    drp = FilThetaModule(p, n, dlo, dhi, tuple(flags), theta)
    alpha_dr_raw = _need(payload, "alpha_dr", "payload")
    dim_stable = htc.dim_at(htc.stable_level())
    alpha_dr = _int_matrix(p, alpha_dr_raw, n, dim_stable, "payload.alpha_dr")
    raw_hod = _need(payload, "alpha_hod", "payload")
    alpha_hod = {}
    for key, mat in raw_hod.items():
        try:
            deg = int(key)
        except ValueError:
            raise SchemaError("payload.alpha_hod", f"bad degree key {key!r}") from None
        rows = len(mat)
        cols = len(mat[0]) if rows else 0
        alpha_hod[deg] = _int_matrix(p, mat, rows, cols, f"payload.alpha_hod[{key}]")
    return ReducedFGauge(htc=htc, drp=drp, alpha_dr=alpha_dr, alpha_hod=alpha_hod)


def build_higgs(p: int, payload: dict) -> GradedHiggsModule:
    d = _as_int(_need(payload, "directions", "payload"), "payload.directions")
    raw_pieces = _need(payload, "pieces", "payload")
    dims = {}
    for key, v in raw_pieces.items():
        try:
            deg = int(key)
        except ValueError:
            raise SchemaError("payload.pieces", f"bad degree key {key!r}") from None
        dims[deg] = _as_int(v, f"payload.pieces[{key}]")
    fields = {}
    for kdir, per in payload.get("fields", {}).items():
        try:
            k = int(kdir)
        except ValueError:
            raise SchemaError("payload.fields", f"bad direction key {kdir!r}") from None
        if not 1 <= k <= d:
            raise SchemaError("payload.fields", f"direction {k} out of range 1..{d}")
        per_out = {}
        for key, mat in per.items():
            try:
                deg = int(key)
            except ValueError:
                raise SchemaError(f"payload.fields[{kdir}]",
                                  f"bad degree key {key!r}") from None
            per_out[deg] = _int_matrix(p, mat, dims.get(deg - 1, 0),
                                       dims.get(deg, 0),
                                       f"payload.fields[{kdir}][{key}]")
        fields[k] = per_out
    try:
        return GradedHiggsModule(p, d, dims, fields)
    except ValueError as err:
        raise SchemaError("payload", str(err)) from None


# ---------------------------------------------------------------------------
# job execution
# ---------------------------------------------------------------------------


def run_job(doc: dict, prime_flag: int | None):
    """Returns (text, report_dict).  Raises SchemaError / LawViolation."""
    if not isinstance(doc, dict):
        raise SchemaError("$", "job document must be a JSON object")
    fmt = doc.get("format")
    if fmt != 1:
        raise SchemaError("format", f"unsupported format {fmt!r}; expected 1")
    kind = _need(doc, "kind", "$")
    if kind not in KINDS:
        raise SchemaError("kind", f"unknown kind {kind!r}; expected one of {KINDS}")
    p = doc.get("prime", prime_flag)
    if p is None:
        raise SchemaError("prime", "missing prime (set it in the job or pass --prime)")
    if prime_flag is not None and "prime" in doc and doc["prime"] != prime_flag:
        raise SchemaError("prime", f"--prime {prime_flag} conflicts with job prime {doc['prime']}")
    p = _as_int(p, "prime")
    try:
        check_prime(p)
    except ValueError as err:
        raise SchemaError("prime", str(err)) from None
    payload = _need(doc, "payload", "$")
    outputs = tuple(doc.get("outputs", DEFAULT_OUTPUTS[kind]))
    for o in outputs:
        if o not in DEFAULT_OUTPUTS[kind]:
            raise SchemaError("outputs", f"unknown output {o!r} for kind {kind!r}")
    results: dict = {}
    lines = [f"kind: {kind}", f"prime: {p}"]

    if kind in ("filphi", "square"):
        obj = build_filphi(p, payload)
        if kind == "filphi":
            if "cohomology" in outputs:
                r = rhom_mfphi(obj)
                results["h0"], results["h1"] = r.dims
                lines.append(f"rhom h0 h1: {r.h0} {r.h1}")
            if "newton" in outputs:
                results["newton"] = newton_number(obj)
                lines.append(f"newton: {results['newton']}")
            if "hodge" in outputs:
                results["hodge"] = hodge_number(obj)
                lines.append(f"hodge: {results['hodge']}")
            if "admissible" in outputs:
                results["admissible"] = is_weakly_admissible(obj).value
                lines.append(f"weakly admissible: {results['admissible']}")
        else:
            sq = corners(obj)
            if "corners" in outputs:
                dims = sq.corner_dims()
                results["corners"] = {k: list(v) for k, v in sorted(dims.items())}
                for name in sorted(dims):
                    lines.append(f"corner {name} h0 h1: {dims[name][0]} {dims[name][1]}")
            if "residual" in outputs:
                res = verify_cartesian(sq)
                results["residual"] = list(res.h) + [res.chain_defect]
                lines.append(f"cartesian residual: {res.h[0]} {res.h[1]} {res.h[2]}"
                             f" defect {res.chain_defect}")
            if "fm" in outputs:
                fm = fm_fibre(obj)
                results["fm_h0"], results["fm_h1"] = fm.dims
                lines.append(f"twisted fibre h0 h1: {fm.h0} {fm.h1}")

    elif kind == "fgauge":
        g = build_fgauge(p, payload)
        if "validate" in outputs:
            rep = validate(g)
            results["valid"] = rep.ok
            results["violations"] = list(rep.violations)
            lines.append(f"valid: {str(rep.ok).lower()}")
            for v in rep.violations:
                lines.append(f"violation: {v}")
            if not rep.ok:
                raise LawViolation(rep.violations[0])
        if "cohomology" in outputs:
            work = g
            if not (g.a <= 0 <= g.b):
                work = extend_window(g, min(g.a, 0), max(g.b, 0))
            h0, h1 = syntomic_cohomology(work)
            results["h0"] = {"free": h0.free_rank, "torsion": list(h0.torsion)}
            results["h1"] = {"free": h1.free_rank, "torsion": list(h1.torsion)}
            lines.append(f"syntomic h0: {h0}")
            lines.append(f"syntomic h1: {h1}")
        if "weights" in outputs:
            w = hodge_tate_weights(g)
            results["weights"] = {str(k): v for k, v in sorted(w.items())}
            pretty = ", ".join(f"{k}:{v}" for k, v in sorted(w.items())) or "none"
            lines.append(f"hodge-tate weights: {pretty}")
        if "realization" in outputs:
            phi = rational_realization(g)
            results["realization_dim"] = phi.dim
            results["realization_frobenius"] = _format_matrix(phi.frobenius)
            lines.append(f"rational realization dim: {phi.dim}")

    elif kind == "reduced":
        g = build_reduced(p, payload)
        red = reduced_syntomic_cohomology(g)
        if "components" in outputs:
            results["components"] = {k: list(v) for k, v in sorted(red.components.items())}
            for name in sorted(red.components):
                h0, h1 = red.components[name]
                lines.append(f"component {name} h0 h1: {h0} {h1}")
        if "cohomology" in outputs:
            results["h"] = list(red.h)
            lines.append(f"reduced h0 h1 h2: {red.h[0]} {red.h[1]} {red.h[2]}")

    elif kind == "higgs":
        m = build_higgs(p, payload)
        if "check" in outputs:
            rep = check_higgs(m)
            results["valid"] = rep.ok
            results["violations"] = list(rep.violations)
            lines.append(f"valid: {str(rep.ok).lower()}")
            for v in rep.violations:
                lines.append(f"violation: {v}")
            if not rep.ok:
                raise LawViolation(rep.violations[0])
        if "cohomology" in outputs:
            weights = payload.get("weights")
            if weights is None:
                support = sorted(m.dims)
                weights = list(range(support[0], support[-1] + m.directions + 1)) \
                    if support else []
            weights = [_as_int(w, "payload.weights[]") for w in weights]
            results["cohomology"] = {}
            for i in weights:
                hs = hodge_cohomology(m, i)
                results["cohomology"][str(i)] = [h for _, h in hs]
                pretty = " ".join(str(h) for _, h in hs)
                lines.append(f"weight {i} koszul h: {pretty}")

    report = {"format": 1, "prime": p, "kind": kind, "payload": payload,
              "results": results}
    return "\n".join(lines) + "\n", report


def _run_file(path: str, prime_flag: int | None):
    """Worker: returns (status, text, report) with status in {0, 1, 2}."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as err:
            raise SchemaError("$", f"invalid JSON: {err}") from None
        text, report = run_job(doc, prime_flag)
        return 0, text, report
    except SchemaError as err:
        return 1, f"schema error: {err}\n", None
    except LawViolation as err:
        return 2, f"law violated: {err}\n", None


# ---------------------------------------------------------------------------
# reference tables
# ---------------------------------------------------------------------------


def table_tate(p: int, lo: int, hi: int) -> str:
    lines = [f"twist cohomology at p = {p}", "   n  h0  h1"]
    for n in range(lo, hi + 1):
        r = rhom_mfphi(tate(n, p))
        lines.append(f"{n:>4}  {r.h0:>2}  {r.h1:>2}")
    return "\n".join(lines) + "\n"


def table_bk(p: int) -> str:
    lines = [f"reduced twist cohomology at p = {p}", "   n  h0  h1  h2"]
    for n in range(-p, p + 1):
        r = reduced_syntomic_cohomology(bk_reduced(n, p))
        lines.append(f"{n:>4}  {r.h[0]:>2}  {r.h[1]:>2}  {r.h[2]:>2}")
    return "\n".join(lines) + "\n"


def table_weights(p: int, lo: int, hi: int) -> str:
    from .fgauge import twist_gauge
    lines = [f"twist gauge weights at p = {p}", "   n  weights"]
    for n in range(lo, hi + 1):
        w = hodge_tate_weights(twist_gauge(n, p))
        pretty = ", ".join(f"{k}:{v}" for k, v in sorted(w.items())) or "none"
        lines.append(f"{n:>4}  {pretty}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="gaugeworks",
        description="exact computations with filtered Frobenius modules, "
                    "F-gauges over F_p, reduced-locus data and Higgs modules")
    sub = parser.add_subparsers(dest="verb", required=True)

    pc = sub.add_parser("compute", help="run job files and print results")
    pc.add_argument("jobs", nargs="+", help="job files (JSON)")
    pc.add_argument("--prime", type=int, default=None,
                    help="prime override; errors if a job disagrees")
    pc.add_argument("--jobs-parallel", "--jobs", dest="nproc", type=int, default=1,
                    metavar="N", help="process up to N job files in parallel")
    pc.add_argument("--report", default=None,
                    help="write a JSON report (single job file only)")

    pk = sub.add_parser("check", help="validate job files without computing")
    pk.add_argument("jobs", nargs="+")
    pk.add_argument("--prime", type=int, default=None)

    pt = sub.add_parser("table", help="print built-in reference tables")
    pt.add_argument("family", choices=("tate", "bk", "weights"))
    pt.add_argument("--prime", type=int, required=True)
    pt.add_argument("--min", dest="lo", type=int, default=-5)
    pt.add_argument("--max", dest="hi", type=int, default=5)

    args = parser.parse_args(argv)

    if args.verb == "table":
        try:
            check_prime(args.prime)
        except ValueError as err:
            sys.stderr.write(f"schema error: prime: {err}\n")
            return 1
        if args.family == "tate":
            sys.stdout.write(table_tate(args.prime, args.lo, args.hi))
        elif args.family == "bk":
            sys.stdout.write(table_bk(args.prime))
        else:
            sys.stdout.write(table_weights(args.prime, args.lo, args.hi))
        return 0

    if args.verb == "check":
        code = 0
        for path in args.jobs:
            status, text, _ = _run_file(path, args.prime)
            if status == 0:
                sys.stdout.write(f"ok: {path}\n")
            else:
                sys.stderr.write(f"{path}: {text}")
                if code == 0:
                    code = status
        return code

    # compute
    if args.report is not None and len(args.jobs) != 1:
        sys.stderr.write("schema error: --report: needs exactly one job file\n")
        return 1
    if args.nproc > 1 and len(args.jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.nproc) as pool:
            outcomes = list(pool.map(_run_file, args.jobs,
                                     [args.prime] * len(args.jobs)))
    else:
        outcomes = [_run_file(path, args.prime) for path in args.jobs]
    code = 0
    for path, (status, text, report) in zip(args.jobs, outcomes):
        if status == 0:
            sys.stdout.write(f"== {path}\n{text}")
            if args.report is not None:
                with open(args.report, "w", encoding="utf-8") as fh:
                    json.dump(report, fh, sort_keys=True, indent=2)
                    fh.write("\n")
        else:
            sys.stderr.write(f"{path}: {text}")
            if code == 0:
                code = status
    return code


if __name__ == "__main__":
    sys.exit(main())
