"""``riccati`` command line.

Exit codes: 0 success, 2 invalid input, 3 classification failure, 4 I/O.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import jsonschema
import numpy as np
import yaml

from . import __version__
from .algebra import SignPolicy, discriminants
from .classify import (Catalog, build_catalog, canonical_catalog, classify, default_catalog_path,
                       fixture_form, table_row)
from .compactify import all_equilibria
from .errors import ClassificationError, InputValidationError, RiccatiError
from .fixtures import load_fixtures
from .flow import sample_orbits, trace_separatrices
from .normalform import FAMILIES, GeneralRiccati, NormalForm, normal_form, reduce
from .render import RenderSpec, render_disk

EXIT_OK, EXIT_INPUT, EXIT_CLASSIFY, EXIT_IO = 0, 2, 3, 4

_NUM = {"type": "number"}
INPUT_SCHEMA = {
    "type": "object",
    "oneOf": [
        {
            "properties": {
                "name": {"type": "string"},
                "family": {"enum": list(FAMILIES)},
                "params": {
                    "oneOf": [
                        {"type": "array", "items": _NUM, "minItems": 5, "maxItems": 5},
                        {"type": "object", "properties": {k: _NUM for k in "abcde"},
                         "required": list("abcde"), "additionalProperties": False},
                    ]
                },
            },
            "required": ["family", "params"],
            "additionalProperties": False,
        },
        {
            "properties": {
                "name": {"type": "string"},
                "alpha2": {"type": "array", "items": _NUM, "minItems": 1, "maxItems": 3},
                "k": _NUM,
                "beta1": {"type": "array", "items": _NUM, "maxItems": 2},
                "gamma2": {"type": "array", "items": _NUM, "maxItems": 3},
            },
            "required": ["alpha2", "k", "beta1", "gamma2"],
            "additionalProperties": False,
        },
    ],
}


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def load_input(path: str, policy: SignPolicy) -> NormalForm:
    """Normal form described by an input file (YAML or JSON)."""
    try:
        text = Path(path).read_text()
    except OSError as ex:
        raise CliError(EXIT_IO, f"cannot read {path}: {ex.strerror or ex}") from ex
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as ex:
        raise CliError(EXIT_INPUT, f"{path}: not valid YAML/JSON: {ex}") from ex
    try:
        jsonschema.validate(doc, INPUT_SCHEMA)
    except jsonschema.ValidationError as ex:
        raise CliError(EXIT_INPUT, f"{path}: invalid input: {_schema_message(doc, ex)}") from ex
    if "family" in doc:
        p = doc["params"]
        params = [p[k] for k in "abcde"] if isinstance(p, dict) else p
        return normal_form(doc["family"], params)
    raw = GeneralRiccati.from_coeffs(doc["alpha2"], doc["k"], doc["beta1"], doc["gamma2"])
    return reduce(raw, policy)


def _schema_message(doc, ex: jsonschema.ValidationError) -> str:
    if isinstance(doc, dict):
        known = {"name", "family", "params", "alpha2", "k", "beta1", "gamma2"}
        extra = sorted(set(doc) - known)
        if extra:
            return f"unknown field(s): {', '.join(map(str, extra))}"
        if "family" in doc and any(k in doc for k in ("alpha2", "k", "beta1", "gamma2")):
            return "give either family + params or raw coefficients, not both"
    best = jsonschema.exceptions.best_match([ex]) or ex
    return best.message


def _policy(args) -> SignPolicy:
    eps = args.epsilon if args.epsilon is not None else 1e-9
    if not math.isfinite(eps) or eps < 0:
        raise CliError(EXIT_INPUT, "--epsilon must be a non-negative number")
    return SignPolicy(epsilon=eps, mode=args.policy)


def _catalog(args) -> Catalog:
    path = getattr(args, "catalog", None)
    if path is None:
        return canonical_catalog()
    try:
        return Catalog.load(path)
    except OSError as ex:
        raise CliError(EXIT_IO, f"cannot read catalog {path}: {ex.strerror or ex}") from ex
    except (ValueError, KeyError, TypeError) as ex:
        raise CliError(EXIT_IO, f"catalog {path} is not a valid catalog file: {ex}") from ex


def _fmt(v) -> str:
    if isinstance(v, complex):
        return f"{v.real:.6g}{v.imag:+.6g}i"
    return f"{v:.6g}"


def _equilibrium_rows(eqs) -> list[dict]:
    rows = []
    for e in eqs:
        rows.append({
            "label": e.label,
            "infinite": e.infinite,
            "chart": e.chart,
            "location": [float(v) for v in e.location],
            "disk": [round(float(v), 9) for v in e.disk],
            "type": e.local_type.value,
            "hyperbolicity": e.hyperbolicity,
            "eigenvalues": [_fmt(v) for v in e.eigen.values()],
            "sectors": e.signature(),
        })
    return rows


def classification_report(nf: NormalForm, policy: SignPolicy, catalog: Catalog | None = None) -> dict:
    """Everything ``classify`` prints; raises on classification failure."""
    d = discriminants(nf.params)
    eqs = all_equilibria(nf, policy)
    report = {
        "version": __version__,
        "family": nf.family,
        "params": dict(zip("abcde", nf.params)),
        "discriminants": dict(zip(("dF1", "dF2", "dI1", "dI2"), d.as_tuple())),
        "signs": d.signs(policy),
        "policy": {"mode": policy.mode, "epsilon": policy.epsilon},
        "equilibria": _equilibrium_rows(eqs),
    }
    if not nf.change.is_identity():
        ch = nf.change
        report["reduction"] = {"x_shift": ch.x_shift, "x_scale": ch.x_scale, "y_scale": ch.y_scale,
                               "time_scale": ch.time_scale,
                               "orientation_reversed": ch.orientation_reversed}
    row = table_row(nf.family, d, policy)
    report["row"] = {"index": row.index, "conditions": row.describe(),
                     "candidates": [f"P{c}" for c in row.candidates]}
    cl = classify(nf, policy, catalog=catalog)
    report["evidence"] = cl.evidence()
    report["portrait"] = f"P{cl.portrait}"
    return report


def _text_report(rep: dict) -> str:
    out = io.StringIO()
    w = out.write
    w(f"family: {rep['family']}\n")
    w("parameters: " + " ".join(f"{k}={v:g}" for k, v in rep["params"].items()) + "\n")
    if "reduction" in rep:
        r = rep["reduction"]
        sh = r["x_shift"] + 0.0
        shift = "x" if sh == 0 else (f"x - {sh:g}" if sh > 0 else f"x + {-sh:g}")
        w(f"reduction: x1 = {r['x_scale']:g} ({shift}), y1 = {r['y_scale']:g} y, "
          f"time scale {r['time_scale']:g}" + (" (orientation reversed)" if r["orientation_reversed"] else "")
          + "\n")
    w("discriminants: " + " ".join(f"{k}={v:g}" for k, v in rep["discriminants"].items()) + "\n")
    w("equilibria:\n")
    for e in rep["equilibria"]:
        where = "infinite" if e["infinite"] else "finite"
        loc = ", ".join(f"{v:.6g}" for v in e["location"])
        w(f"  {e['label']:<5} {where:<8} {e['chart']:<6} ({loc})  {e['type']}  "
          f"eig [{', '.join(e['eigenvalues'])}]  sectors {e['sectors']}\n")
    row = rep["row"]
    w(f"table row: {rep['family']}.{row['index']} ({row['conditions']}) -> {', '.join(row['candidates'])}\n")
    ev = rep["evidence"]
    w(f"method: {ev['method']}\n")
    if "subcase" in ev:
        w("subcase: " + " ".join(f"{k}={_fmt(v) if isinstance(v, float) else v}"
                                 for k, v in ev["subcase"].items()) + "\n")
    if "matched" in ev:
        w(f"matched: {', '.join(ev['matched'])}\n")
    for n in ev.get("notes", []):
        w(f"note: {n}\n")
    w(f"portrait: {rep['portrait']}\n")
    return out.getvalue()


def cmd_classify(args) -> int:
    policy = _policy(args)
    nf = load_input(args.input, policy)
    rep = classification_report(nf, policy, _catalog(args) if args.catalog else None)
    if args.format == "json":
        print(json.dumps(rep, indent=2, sort_keys=True))
    else:
        sys.stdout.write(_text_report(rep))
    return EXIT_OK


def cmd_portrait(args) -> int:
    policy = _policy(args)
    nf = load_input(args.input, policy)
    out = Path(args.out)
    if not out.parent.is_dir():
        raise CliError(EXIT_IO, f"output directory {out.parent} does not exist")
    portrait = None
    try:
        portrait = classify(nf, policy, catalog=_catalog(args) if args.catalog else None).portrait
    except ClassificationError as ex:
        if not args.force:
            raise
        print(f"warning: {ex}; rendering anyway", file=sys.stderr)
    eqs = all_equilibria(nf, policy)
    skel = trace_separatrices(nf, eqs)
    skel.portrait = portrait
    spec = RenderSpec(size_px=args.size, orbit_grid=args.grid, show_labels=not args.no_labels)
    orbits = sample_orbits(nf, eqs, spec.orbit_grid)
    svg = render_disk(skel, orbits, spec)
    try:
        out.write_text(svg)
    except OSError as ex:
        raise CliError(EXIT_IO, f"cannot write {out}: {ex.strerror or ex}") from ex
    print(f"portrait: {'P%d' % portrait if portrait else 'unclassified'}")
    print(f"equilibria: {len(skel.nodes)}")
    for e in skel.nodes:
        print(f"  {e.label:<5} {e.local_type.value}")
    print(f"edges: {len(skel.edges)}")
    for e in skel.edges:
        print(f"  {e.source or '?'} -> {e.target or '?'}  {e.kind}")
    if skel.unresolved:
        print(f"unresolved: {', '.join(skel.unresolved)}")
    print(f"written: {out}")
    return EXIT_OK


# sweep ------------------------------------------------------------------

SWEEP_COLUMNS = ["index", "a", "b", "c", "d", "e", "dF1", "dF2", "dI1", "dI2", "row", "portrait",
                 "method", "error"]


def parse_range(text: str) -> list[float]:
    """``v`` (one value) or ``lo:hi:n`` (n evenly spaced values, n may be 0)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 0:
                raise ValueError
            if n == 1:
                return [lo]
            return [float(v) for v in np.linspace(lo, hi, n)]
    except ValueError:
        pass
    raise CliError(EXIT_INPUT, f"bad range {text!r}: expected VALUE or LO:HI:N")


def _sweep_point(job) -> list:
    idx, family, params, policy, catalog_path = job
    row = [":".join(map(str, idx)), *params]
    d = discriminants(params)
    row += list(d.as_tuple())
    try:
        r = table_row(family, d, policy)
        row.append(f"{family}.{r.index}")
    except Exception:  # noqa: BLE001 - recorded in the error column
        row.append("")
    try:
        nf = normal_form(family, params)
        cat = Catalog.load(catalog_path) if catalog_path else None
        cl = classify(nf, policy, catalog=cat)
        row += [f"P{cl.portrait}", cl.method, ""]
    except RiccatiError as ex:
        row += ["", "", f"{type(ex).__name__}: {ex}"]
    return row


def cmd_sweep(args) -> int:
    policy = _policy(args)
    axes = [parse_range(getattr(args, k)) for k in "abcde"]
    grids = [range(len(ax)) for ax in axes]
    import itertools

    catalog_path = args.catalog
    if catalog_path is None:
        # make sure the cache exists once, before any worker needs it
        canonical_catalog()
        catalog_path = str(default_catalog_path()) if default_catalog_path().exists() else None
    jobs = [(idx, args.family, tuple(axes[i][j] for i, j in enumerate(idx)), policy, catalog_path)
            for idx in itertools.product(*grids)]
    if args.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.workers) as ex:
            rows = list(ex.map(_sweep_point, jobs))
    else:
        rows = [_sweep_point(j) for j in jobs]
    text = io.StringIO()
    w = csv.writer(text, lineterminator="\r\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    if args.out:
        out = Path(args.out)
        if not out.parent.is_dir():
            raise CliError(EXIT_IO, f"output directory {out.parent} does not exist")
        try:
            out.write_text(text.getvalue(), newline="")
        except OSError as ex:
            raise CliError(EXIT_IO, f"cannot write {out}: {ex.strerror or ex}") from ex
    else:
        sys.stdout.write(text.getvalue())
    return EXIT_OK


# catalog and table checks -------------------------------------------------

def cmd_catalog_build(args) -> int:
    out = Path(args.out) if args.out else default_catalog_path()
    if args.out and not out.parent.is_dir():
        raise CliError(EXIT_IO, f"output directory {out.parent} does not exist")
    cat = build_catalog(search=not args.no_search, search_seconds=args.search_seconds,
                        workers=args.workers)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        cat.save(out)
    except OSError as ex:
        raise CliError(EXIT_IO, f"cannot write {out}: {ex.strerror or ex}") from ex
    found = [e for e in cat.entries.values() if e.source == "search"]
    print(f"catalog: {len(cat.entries)} portraits, {len(cat.gaps())} gaps -> {out}")
    for e in sorted(found, key=lambda e: e.pid):
        print(f"  P{e.pid} found by search at {e.family} {tuple(e.params)}")
    for pid in cat.gaps():
        print(f"  P{pid} unavailable: {cat.entries[pid].note}")
    return EXIT_OK


def cmd_verify_tables(args) -> int:
    policy = _policy(args)
    cat = _catalog(args)
    fixtures = load_fixtures()
    passed = failed = 0
    skipped = []
    for f in fixtures:
        if not f.complete:
            skipped.append(f)
            print(f"P{f.id:<3} {f.family:<3} skipped: {f.reason}")
            continue
        try:
            cl = classify(fixture_form(f), policy, catalog=cat)
            ok = cl.portrait == f.id
            msg = f"P{cl.portrait} via {cl.method}"
        except RiccatiError as ex:
            ok = False
            msg = f"{type(ex).__name__}: {ex}"
        passed += ok
        failed += not ok
        print(f"P{f.id:<3} {f.family:<3} {'pass' if ok else 'FAIL'}  {msg}")
    total = passed + failed
    names = ", ".join(f"P{f.id}" for f in skipped)
    print(f"{passed}/{total} complete fixtures pass, {len(skipped)} skipped ({names})")
    return EXIT_OK if failed == 0 else EXIT_CLASSIFY


# wiring -------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, catalog: bool = True) -> None:
    p.add_argument("--policy", choices=("strict", "tolerant"), default="strict",
                   help="sign decisions: exact decimals (strict) or |x| <= epsilon is zero (tolerant)")
    p.add_argument("--epsilon", type=float, default=None, help="zero band of the tolerant policy (1e-9)")
    if catalog:
        p.add_argument("--catalog", default=None, help="catalog file (default: the user cache)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="riccati", description="Phase portraits of quadratic Riccati systems")
    ap.add_argument("--version", action="version", version=f"riccati {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify the system in an input file")
    p.add_argument("input")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("portrait", help="draw the Poincaré disk as SVG")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true", help="render even if classification fails")
    p.add_argument("--grid", type=int, default=8, help="sample orbits per axis")
    p.add_argument("--size", type=int, default=800, help="width and height in pixels")
    p.add_argument("--no-labels", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_portrait)

    p = sub.add_parser("sweep", help="classify a grid of parameters into CSV")
    p.add_argument("--family", choices=FAMILIES, required=True)
    for k in "abcde":
        p.add_argument(f"-{k}", default="0", metavar="VALUE|LO:HI:N")
    p.add_argument("--out", default=None, help="CSV file (default: stdout)")
    p.add_argument("--workers", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("catalog", help="canonical skeleton catalog")
    csub = p.add_subparsers(dest="catalog_command", required=True)
    b = csub.add_parser("build", help="trace all fixtures and search the missing portraits")
    b.add_argument("--out", default=None, help="catalog file (default: the user cache)")
    b.add_argument("--no-search", action="store_true")
    b.add_argument("--search-seconds", type=float, default=60.0)
    b.add_argument("--workers", type=int, default=1)
    b.set_defaults(func=cmd_catalog_build)

    p = sub.add_parser("verify-tables", help="classify every fixture and compare")
    _add_common(p)
    p.set_defaults(func=cmd_verify_tables)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return ex.code
    except InputValidationError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_INPUT
    except ClassificationError as ex:
        print(f"error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return EXIT_CLASSIFY
    except ValueError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
