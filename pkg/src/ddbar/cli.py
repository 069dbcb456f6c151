"""Command line interface.

Exit codes: 0 success, 1 a ``--expect`` assertion (or validation) failed,
2 input error, 3 internal inconsistency between equivalent characterizations.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .cohomology import CohomologyTable, cohomology_table
from .criteria import criteria_report
from .doublecomplex import ComplexError, DoubleComplex, load_raw_complex
from .exterior import parse_form
from .metrics import MetricError, check_metric, find_balanced
from .scalar import (
    DivisionByZero,
    ExpressionError,
    Scalar,
    UnboundParameter,
    format_scalar,
    parse_assignment,
    parse_scalar,
)
from .structure import (
    ManifoldSyntaxError,
    NonIntegrable,
    SingularChange,
    build_complex,
    parse_manifold,
    validate,
)

SCHEMA = "ddbar.report/1"

INPUT_ERRORS = (
    ManifoldSyntaxError,
    ExpressionError,
    UnboundParameter,
    DivisionByZero,
    ComplexError,
    NonIntegrable,
    SingularChange,
    MetricError,
    OSError,
)


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# reports

@dataclass
class ReportDocument:
    command: str
    input: dict
    params: dict
    validation: dict | None = None
    tables: dict | None = None
    criteria: dict | None = None
    metric: dict | None = None
    certificate: dict | None = None
    warnings: list = field(default_factory=list)
    error: str | None = None
    timing: float | None = None

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, **{k: getattr(self, k) for k in self.__dataclass_fields__}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        d = json.loads(text)
        if d.pop("schema", None) != SCHEMA:
            raise ValueError("not a ddbar report")
        return cls(**d)


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _params_out(a: dict) -> dict:
    return {k: format_scalar(v) for k, v in sorted(a.items())}


def load_input(path: str):
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".dcplx"):
        return "raw", load_raw_complex(text), text
    return "structure", parse_manifold(text), text


def _complex_for(kind, obj, assignment) -> tuple[DoubleComplex, dict | None]:
    if kind == "raw":
        return obj, None
    missing = sorted(obj.all_params() - set(assignment))
    if missing:
        raise UnboundParameter(missing[0])
    rep = validate(obj, assignment)
    if not rep.d_squared_zero:
        raise InputError(f"d^2 != 0: {rep.d_squared}")
    if not rep.integrable:
        obst = "; ".join(f"d eta{k} has (0,2) part {v}" for k, v in rep.obstruction.items())
        raise NonIntegrable(f"not integrable: {obst}")
    return build_complex(obj, assignment), rep.as_dict()


def evaluate_sample(text: str, path: str, assignment: dict, want: set, metric: str | None = None,
                    budget: int = 64, seed: int = 0, timing: bool = False) -> ReportDocument:
    """Compute the requested parts of a report; errors are captured in the document."""
    t0 = time.perf_counter()
    doc = ReportDocument(
        command="",
        input={"file": os.path.basename(path), "sha256": _digest(text)},
        params=_params_out(assignment),
    )
    try:
        if path.endswith(".dcplx"):
            kind, obj = "raw", load_raw_complex(text)
        else:
            kind, obj = "structure", parse_manifold(text)
        dc, val = _complex_for(kind, obj, assignment)
        doc.validation = val
        table = None
        if want & {"tables", "criteria"}:
            table = cohomology_table(dc)
            doc.tables = table.as_dict()
        if "criteria" in want:
            rep = criteria_report(dc, table)
            doc.criteria = rep.as_dict()
            doc.warnings.extend(rep.notes)
        if metric is not None:
            if kind == "raw":
                raise MetricError("metric checks need structure equations")
            omega = parse_form(metric, assignment, dc.n)
            doc.metric = check_metric(dc, omega).as_dict()
        if "certificate" in want:
            if kind == "raw":
                raise MetricError("certificate search needs structure equations")
            cert = find_balanced(dc, budget, seed)
            doc.certificate = None if cert is None else cert.as_dict()
    except (*INPUT_ERRORS, InputError) as exc:
        doc.error = f"{type(exc).__name__}: {exc}"
    if timing:
        doc.timing = round(time.perf_counter() - t0, 6)
    return doc


# ---------------------------------------------------------------------------
# expectations

def flat_values(doc: ReportDocument) -> dict:
    out = {}
    if doc.validation:
        out.update({
            "d2": doc.validation["d2_zero"],
            "integrable": doc.validation["integrable"],
            "abelian": doc.validation["abelian"],
            "unimodular": doc.validation["unimodular"],
        })
    if doc.tables:
        t = CohomologyTable.from_dict(doc.tables)
        for (p, q) in t.bc:
            out[f"dol{p}{q}"] = t.dolbeault[(p, q)]
            out[f"del{p}{q}"] = t.del_[(p, q)]
            out[f"bc{p}{q}"] = t.bc[(p, q)]
            out[f"a{p}{q}"] = t.a[(p, q)]
        for k, v in t.betti.items():
            out[f"b{k}"] = v
    if doc.criteria:
        c = doc.criteria
        out.update({
            "sgg": c["sgg"]["verdict"],
            "strong": c["strong"]["verdict"],
            "strong_numeric": c["strong"]["numeric"],
            "weak": c["weak"]["verdict"],
            "ddbar": c["ddbar_lemma"],
            "t_rank": c["t_rank"],
        })
        for k, v in c["delta"].items():
            out[f"delta{k}"] = v
    if doc.metric:
        m = doc.metric
        out.update({
            "positive": m["positive"],
            "balanced": m["balanced"],
            "gauduchon": m["gauduchon"],
            "sg": m["strongly_gauduchon"],
            "lcb": m["lcb"],
        })
    if doc.command == "find-balanced":
        out["certificate"] = doc.certificate is not None
    return out


def _parse_value(s: str):
    s = s.strip().lower()
    if s in ("true", "yes"):
        return True
    if s in ("false", "no"):
        return False
    if s in ("unknown", "none", "null"):
        return None
    try:
        return int(s)
    except ValueError:
        return s


def parse_expect(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise InputError(f"bad --expect item {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = _parse_value(v)
    return out


def check_expect(doc: ReportDocument, expect: dict) -> list[str]:
    vals = flat_values(doc)
    bad = []
    for k, want in expect.items():
        if k not in vals:
            bad.append(f"{k}: not computed")
        elif vals[k] != want:
            bad.append(f"{k}: expected {want}, got {vals[k]}")
    return bad


# ---------------------------------------------------------------------------
# human rendering

def _b(v) -> str:
    return {True: "yes", False: "no", None: "unknown"}.get(v, str(v))


def render_validation(v: dict) -> str:
    lines = [
        f"d^2 = 0      : {'pass' if v['d2_zero'] else 'FAIL'}",
        f"integrable   : {_b(v['integrable'])}",
        f"abelian      : {_b(v['abelian'])}",
        f"unimodular   : {_b(v['unimodular'])}",
    ]
    for k, s in v["d2_failures"].items():
        lines.append(f"  d(d eta{k}) = {s}")
    for k, s in v["obstruction"].items():
        lines.append(f"  (0,2) part of d eta{k}: {s}")
    return "\n".join(lines)


def render_tables(t: dict) -> str:
    tab = CohomologyTable.from_dict(t)
    lines = [f"{'(p,q)':>6} {'dim':>4} {'dbar':>5} {'del':>5} {'BC':>4} {'A':>4}"]
    for (p, q) in sorted(tab.bc):
        lines.append(
            f"{f'({p},{q})':>6} {tab.dims.get((p, q), 0):>4} {tab.dolbeault[(p, q)]:>5} "
            f"{tab.del_[(p, q)]:>5} {tab.bc[(p, q)]:>4} {tab.a[(p, q)]:>4}"
        )
    lines.append("betti: " + " ".join(f"b{k}={v}" for k, v in sorted(tab.betti.items())))
    return "\n".join(lines)


def render_criteria(c: dict) -> str:
    s = c["sgg"]
    lines = [
        "Delta^k      : " + " ".join(f"{k}:{v}" for k, v in c["delta"].items()),
        f"sGG          : {_b(s['verdict'])}  [(iii) {_b(s['iii_dolbeault_to_aeppli_injective'])}, "
        f"(iv) {_b(s['iv_t_vanishes'])}, (vi) {_b(s['vi_bc_equals_dolbeault'])}, (vii) {_b(s['vii_betti_equality'])}]",
        f"T rank       : {c['t_rank']}",
        f"strong lemma : {_b(c['strong']['verdict'])}  [direct {_b(c['strong']['direct'])}, "
        f"b1 = 2h_A^(0,1) {_b(c['strong']['numeric'])}]",
        f"weak lemma   : {_b(c['weak']['verdict'])}",
        f"ddbar-Lemma  : {_b(c['ddbar_lemma'])}",
    ]
    return "\n".join(lines)


def render_metric(m: dict) -> str:
    lines = [
        f"positive           : {_b(m['positive'])}",
        f"balanced           : {_b(m['balanced'])}",
        f"Gauduchon          : {_b(m['gauduchon'])}",
        f"strongly Gauduchon : {_b(m['strongly_gauduchon'])}",
        f"LCB                : {m['lcb']}" + (f" (theta = {m['lee_form']})" if m["lee_form"] is not None else ""),
        f"omega^(n-1)        : {m['power']}",
    ]
    return "\n".join(lines)


def render_doc(doc: ReportDocument) -> str:
    head = f"# {doc.input['file']}" + (
        "  " + ", ".join(f"{k}={v}" for k, v in doc.params.items()) if doc.params else ""
    )
    parts = [head]
    if doc.validation and doc.command == "validate":
        parts.append(render_validation(doc.validation))
    if doc.tables and doc.command in ("hodge",):
        parts.append(render_tables(doc.tables))
    if doc.criteria:
        parts.append(render_criteria(doc.criteria))
    if doc.metric:
        parts.append(render_metric(doc.metric))
    if doc.command == "find-balanced":
        if doc.certificate:
            parts.append(f"certificate (trial {doc.certificate['trial']}, {doc.certificate['method']}):")
            parts.append(f"  Omega = {doc.certificate['Omega']}")
        elif not doc.error:
            parts.append("unknown (budget exhausted)")
    for w in doc.warnings:
        parts.append(f"warning: {w}")
    if doc.timing is not None:
        parts.append(f"time: {doc.timing:.3f}s")
    return "\n".join(parts)


# ---------------------------------------------------------------------------
# sweeps

def parse_sweep(spec: str) -> tuple[str, list[Scalar]]:
    """``t=0,1/4,i/3`` or ``t=grid:re0:step:count[:im0:step:count]``."""
    if "=" not in spec:
        raise InputError(f"bad --sweep {spec!r}")
    name, rhs = spec.split("=", 1)
    name = name.strip()
    rhs = rhs.strip()
    if rhs.startswith("grid:"):
        parts = rhs[5:].split(":")
        if len(parts) not in (3, 6):
            raise InputError("grid needs re0:step:count or re0:step:count:im0:step:count")
        r0, rs = parse_scalar(parts[0]).re, parse_scalar(parts[1]).re
        rc = int(parts[2])
        ims = [Fraction(0)]
        if len(parts) == 6:
            i0, isz = parse_scalar(parts[3]).re, parse_scalar(parts[4]).re
            ims = [i0 + j * isz for j in range(int(parts[5]))]
        samples = [Scalar(r0 + j * rs, im) for j in range(rc) for im in ims]
    else:
        samples = [parse_scalar(s) for s in rhs.split(",") if s.strip()]
    if not samples:
        raise InputError("sweep needs at least one sample")
    if len(set(samples)) != len(samples):
        raise InputError("sweep samples must be distinct")
    return name, samples


def sweep_summary(docs: list[ReportDocument]) -> dict:
    """Quantities that change across samples; series are indexed like ``docs``."""
    vals = [None if d.error else flat_values(d) for d in docs]
    ok = [v for v in vals if v is not None]
    jumps, flips = {}, {}
    for k in sorted({k for v in ok for k in v}):
        seen = [v.get(k) for v in ok]
        if len(set(map(repr, seen))) > 1:
            series = [None if v is None else v.get(k) for v in vals]
            numeric = all(isinstance(x, int) and not isinstance(x, bool) for x in seen)
            (jumps if numeric else flips)[k] = series
    return {
        "samples": len(docs),
        "errors": sum(v is None for v in vals),
        "failed": [i for i, v in enumerate(vals) if v is None],
        "params": [d.params for d in docs],
        "jumps": jumps,
        "flips": flips,
    }


def _sweep_worker(args):
    text, path, assignment, want, metric, budget, seed, timing = args
    doc = evaluate_sample(text, path, assignment, want, metric, budget, seed, timing)
    doc.command = "sweep"
    return doc


# ---------------------------------------------------------------------------
# commands

def _emit(doc: ReportDocument, fmt: str, out) -> None:
    if fmt == "json":
        out.write(doc.to_json() + "\n")
    else:
        out.write(render_doc(doc) + "\n")


def _finish(doc: ReportDocument, args, out) -> int:
    _emit(doc, args.format, out)
    if args.report:
        Path(args.report).write_text(doc.to_json() + "\n", encoding="utf-8")
    if doc.error:
        return 2
    if doc.criteria and doc.criteria.get("inconsistent"):
        return 3
    bad = check_expect(doc, parse_expect(getattr(args, "expect", None)))
    if bad:
        for b in bad:
            print(f"expectation failed: {b}", file=sys.stderr)
        return 1
    return 0


def _single(args, want: set, command: str, metric: str | None = None, out=None) -> int:
    out = out or sys.stdout
    text = Path(args.file).read_text(encoding="utf-8")
    assignment = parse_assignment(args.params)
    doc = evaluate_sample(text, args.file, assignment, want, metric,
                          getattr(args, "budget", 64), args.seed, args.timing)
    doc.command = command
    if doc.error:
        print(doc.error, file=sys.stderr)
    return _finish(doc, args, out)


def cmd_validate(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    assignment = parse_assignment(args.params)
    doc = ReportDocument(
        command="validate",
        input={"file": os.path.basename(args.file), "sha256": _digest(text)},
        params=_params_out(assignment),
    )
    failed = False
    if args.file.endswith(".dcplx"):
        dc = load_raw_complex(text)
        doc.validation = None
        doc.warnings = [] if dc.has_conjugation else ["complex carries no conjugation"]
    else:
        se = parse_manifold(text)
        missing = sorted(se.all_params() - set(assignment))
        if missing:
            raise UnboundParameter(missing[0])
        rep = validate(se, assignment)
        doc.validation = rep.as_dict()
        failed = not rep.ok
    code = _finish(doc, args, sys.stdout)
    if args.format == "human" and not failed and code == 0:
        print("OK")
    return 1 if failed and code == 0 else code


def cmd_sweep(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    base = parse_assignment(args.params)
    name, samples = parse_sweep(args.sweep)
    want = {"tables", "criteria"}
    jobs = []
    for s in samples:
        a = dict(base)
        a[name] = s
        jobs.append((text, args.file, a, want, args.metric, 64, args.seed, args.timing))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            docs = list(ex.map(_sweep_worker, jobs))
    else:
        docs = [_sweep_worker(j) for j in jobs]
    summary = sweep_summary(docs)
    lines = [d.to_json() for d in docs] + [json.dumps({"schema": SCHEMA, "summary": summary})]
    if args.report:
        Path(args.report).write_text("\n".join(lines) + "\n", encoding="utf-8")
    if args.format == "json":
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        for d in docs:
            sys.stdout.write(render_sweep_row(d, name) + "\n")
        sys.stdout.write(render_summary(summary, name) + "\n")
    code = 0
    expect = parse_expect(args.expect)
    for d in docs:
        if d.criteria and d.criteria.get("inconsistent"):
            code = 3
        bad = check_expect(d, expect) if not d.error else []
        if bad and code == 0:
            for b in bad:
                print(f"expectation failed at {d.params}: {b}", file=sys.stderr)
            code = 1
    return code


def render_sweep_row(d: ReportDocument, name: str) -> str:
    label = f"{name}={d.params.get(name, '?')}"
    if d.error:
        return f"{label:>14}  error: {d.error}"
    v = flat_values(d)
    cells = [
        f"h01(dbar,BC,A)=({v['dol01']},{v['bc01']},{v['a01']})",
        f"bc22={v['bc22']}",
        f"b1={v['b1']}",
        f"D1={v['delta1']}",
        f"sGG={_b(v['sgg'])}",
        f"strong={_b(v['strong'])}",
        f"weak={_b(v['weak'])}",
    ]
    if "balanced" in v:
        cells.append(f"metric: positive={_b(v['positive'])} balanced={_b(v['balanced'])}")
    return f"{label:>14}  " + "  ".join(cells)


def render_summary(s: dict, name: str) -> str:
    lines = [f"samples: {s['samples']}, errors: {s['errors']}"]
    if not s["jumps"] and not s["flips"]:
        lines.append("no jumps or verdict flips")
    labels = [p.get(name, "?") for p in s["params"]]
    failed = set(s["failed"])

    def series_text(series, fmt):
        return ", ".join(
            f"{name}={lab}:{'error' if i in failed else fmt(v)}"
            for i, (lab, v) in enumerate(zip(labels, series))
        )

    for k, series in s["jumps"].items():
        lines.append(f"jump {k}: " + series_text(series, str))
    for k, series in s["flips"].items():
        lines.append(f"flip {k}: " + series_text(series, _b))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ddbar", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, expect=True):
        p.add_argument("file")
        p.add_argument("--params", default="", help="k=v,... (Gaussian rationals, e.g. t=1/2+i/3)")
        p.add_argument("--format", choices=("human", "json"), default="human")
        p.add_argument("--report", help="also write the JSON report to this path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--timing", action="store_true", help="record wall-clock time in reports")
        if expect:
            p.add_argument("--expect", help="assertions like strong=false,weak=true,delta1=2")

    common(sub.add_parser("validate", help="check d^2=0, integrability, Abelian, unimodular"))
    common(sub.add_parser("hodge", help="Dolbeault/Bott-Chern/Aeppli/Betti tables"))
    common(sub.add_parser("criteria", help="Delta^k, sGG, strong/weak (n-1,n) lemmas"))
    p = sub.add_parser("sweep", help="evaluate criteria over parameter samples")
    common(p)
    p.add_argument("--sweep", required=True, help="t=0,1/4,i/3 or t=grid:re0:step:count[:im0:step:count]")
    p.add_argument("--metric", help="optionally check this metric at every sample")
    p.add_argument("--jobs", type=int, default=1)
    p = sub.add_parser("check-metric", help="verify a Hermitian metric")
    common(p)
    p.add_argument("--metric", required=True)
    p = sub.add_parser("find-balanced", help="search for a closed positive (n-1,n-1)-form")
    common(p)
    p.add_argument("--budget", type=int, default=64)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return cmd_validate(args)
        if args.command == "hodge":
            return _single(args, {"tables"}, "hodge")
        if args.command == "criteria":
            return _single(args, {"tables", "criteria"}, "criteria")
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "check-metric":
            return _single(args, set(), "check-metric", metric=args.metric)
        if args.command == "find-balanced":
            return _single(args, {"certificate"}, "find-balanced")
    except (*INPUT_ERRORS, InputError) as exc:
        print(f"{type(exc).__name__}: {exc}" if not isinstance(exc, UnboundParameter) else str(exc), file=sys.stderr)
        return 2
    return 2  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
