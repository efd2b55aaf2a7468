"""Command line: construct, verify, table, export-dual.

Exit codes: 0 ok, 1 verification failure, 2 bad parameters, 3 over budget.
"""

from __future__ import annotations

import argparse
import base64
import csv
import io
import itertools
import json
import os
import sys
import tempfile
import time
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import blocking, euclid, nikodym
from .errors import BudgetExceeded, FingeoError, ParameterError, VerificationFailed
from .ff import field_of_order, make_field
from .geom import (
    HyperplaneMatching,
    Matching,
    ProjPoint,
    find_hyperplane_violations,
    find_violations,
)
from .matchgen import REGISTRY, construct

OK, FAILED, BAD_PARAMS, OVER_BUDGET = 0, 1, 2, 3

NUMERIC_FLAGS = ("q", "p", "t", "d", "k", "n")


# artifacts

def _pointset_payload(ps: nikodym.PointSet) -> dict:
    return {
        "bits": base64.b64encode(ps.to_bytes()).decode("ascii"),
        "witnesses": ps.witness_json() if ps.directions else None,
    }


def _pointset_from(data: dict) -> nikodym.PointSet:
    ps = nikodym.PointSet.from_bytes(base64.b64decode(data["bits"]))
    if data.get("witnesses"):
        ps.load_witness_json(data["witnesses"])
    return ps


def encode_artifact(obj: Any) -> dict:
    if isinstance(obj, HyperplaneMatching):
        return {"kind": "hyperplane-matching", "data": obj.to_json()}
    if isinstance(obj, Matching):
        return {"kind": "matching", "data": obj.to_json()}
    if isinstance(obj, nikodym.PointSet):
        return {"kind": "pointset", "data": _pointset_payload(obj)}
    if isinstance(obj, blocking.LineCover):
        return {"kind": "cover", "data": obj.to_json()}
    if isinstance(obj, euclid.EuclidConfig):
        return {"kind": "euclid", "data": obj.to_json()}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def decode_artifact(doc: dict) -> tuple[str, Any]:
    try:
        kind, data = doc["kind"], doc["data"]
        if kind == "matching":
            return kind, Matching.from_json(data)
        if kind == "hyperplane-matching":
            return kind, HyperplaneMatching.from_json(data)
        if kind == "pointset":
            return kind, _pointset_from(data)
        if kind == "cover":
            return kind, blocking.LineCover.from_json(data)
        if kind == "euclid":
            return kind, euclid.EuclidConfig.from_json(data)
    except (KeyError, TypeError, ValueError) as e:
        raise ParameterError(f"malformed artifact: {e}") from None
    raise ParameterError(f"unknown artifact kind {kind!r}")


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fingeo-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


# constructions beyond the matching registry

def _field_from(params: dict):
    if "p" in params and "t" in params:
        return make_field(params["p"], params["t"])
    if "q" not in params:
        raise ParameterError("need --q or --p/--t")
    return field_of_order(params["q"])


def _tiny_config(n: int) -> nikodym.LatticeConfig:
    """d = 1 configuration: the whole box [n] x [2] with L = 2."""
    if n < 4:
        raise ParameterError("--n must be at least 4 so that N >= M L")
    pts = [(x, m) for x in range(1, n + 1) for m in (1, 2)]
    return nikodym.escape_config_from_points(pts, n, 2, 2, 1)


def _projection(params: dict, budget: int):
    q, n = params.get("q", 13), params.get("n", 4)
    cfg = _tiny_config(n)
    ps = nikodym.project_to_plane(cfg, q)
    check = nikodym.is_nikodym(ps, budget=budget)
    if not check:
        raise VerificationFailed(f"projection is not Nikodym at {check.failing}")
    return ps, {"size": ps.size, "bound": {"floor": q * q - len(cfg.points), "formula": "q^2 - |P|"}}


def _unitgrid(params: dict, budget: int):
    F = _field_from(params)
    ps = nikodym.PointSet.full(F, 2)
    zero_rows = [i for i in range(ps.bits.size) if 0 in ps.codes_of(i)]
    ps.bits[zero_rows] = False
    check = nikodym.is_weak_nikodym(ps, budget=budget)
    if not check:
        raise VerificationFailed(f"(F_q^*)^2 is not weak Nikodym at {check.failing}")
    ps = nikodym.attach(ps, check)
    return ps, {"size": ps.size, "bound": {"floor": (F.q - 1) ** 2, "formula": "(q-1)^2"}}


def _cover(params: dict, budget: int):
    ps, _ = _projection(params, budget)
    cover = blocking.minimalize_cover(blocking.nikodym_to_cover(ps))
    check = blocking.verify_minimal_cover(cover)
    if not check:
        raise VerificationFailed(f"cover is not minimal: {check}")
    q = ps.q
    return cover, {"size": len(cover), "bound": {"floor": q * q - ps.size, "formula": "q^2 - |N|"}}


def _euclid(params: dict, budget: int):
    cfg = euclid.ruzsa_lattice(params.get("q", 101))
    ec = euclid.lattice_to_euclid(cfg)
    return ec, {"size": len(ec), "bound": {"floor": f"1/{2 * cfg.N}", "formula": "1/(2N)"}}


EXTRA: dict[str, Callable[[dict, int], tuple[Any, dict]]] = {
    "projection": _projection,
    "unitgrid": _unitgrid,
    "cover": _cover,
    "euclid": _euclid,
}


def run_construct(method: str, params: dict, budget: int) -> tuple[Any, dict]:
    """Build and verify; returns (artifact object, report)."""
    if method in EXTRA:
        obj, rep = EXTRA[method](params, budget)
        report = {"method": method, "params": params, "verified": True, **rep}
        return obj, report
    if method not in REGISTRY:
        raise ParameterError(f"unknown method {method!r}; known: {', '.join([*REGISTRY, *EXTRA])}")
    rep = construct(method, params)
    return rep.matching, rep.summary()


# verification

def _violation_list(pairs) -> list:
    return [[v.i, v.j] for v in pairs]


def run_verify(kind: str, obj: Any, budget: int) -> dict:
    if kind == "matching":
        if isinstance(obj, HyperplaneMatching):
            bad = find_hyperplane_violations(obj, 10)
        elif isinstance(obj, Matching):
            bad = find_violations(obj, 10)
        else:
            raise ParameterError("artifact is not a matching")
        return {"ok": not bad, "size": obj.size, "violations": _violation_list(bad)}
    if kind in ("weak-nikodym", "nikodym"):
        if not isinstance(obj, nikodym.PointSet):
            raise ParameterError("artifact is not a point set")
        test = nikodym.is_weak_nikodym if kind == "weak-nikodym" else nikodym.is_nikodym
        check = test(obj, budget=budget)
        return {"ok": bool(check), "size": obj.size, "failing": None if check else list(check.failing)}
    if kind == "cover":
        if not isinstance(obj, blocking.LineCover):
            raise ParameterError("artifact is not a line cover")
        check = blocking.verify_minimal_cover(obj)
        out: dict = {"ok": check.ok, "size": len(obj)}
        if check.uncovered is not None:
            out["uncovered"] = list(check.uncovered.key())
        if check.redundant is not None:
            out["redundant"] = list(check.redundant.key())
        return out
    if kind == "separation":
        if not isinstance(obj, euclid.EuclidConfig):
            raise ParameterError("artifact is not a Euclidean configuration")
        floor = Fraction(1, 2 * int(obj.source["N"]))
        sep = euclid.certify_separation(obj, floor)
        out = {"ok": sep.ok, "size": len(obj), "floor": str(floor)}
        if not sep:
            out["violation"] = {"i": sep.i, "j": sep.j, "value": str(sep.value)}
        return out
    raise ParameterError(f"unknown verification kind {kind!r}")


DEFAULT_KIND = {
    "matching": "matching",
    "hyperplane-matching": "matching",
    "pointset": "nikodym",
    "cover": "cover",
    "euclid": "separation",
}


# tables

TABLE_COLUMNS = ["method", "params", "size", "floor", "formula", "ceiling", "ratio"]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def table_rows(method: str, ranges: dict[str, list[int]], budget: int) -> list[dict]:
    """One row per point of the parameter grid, in sorted grid order.
    An empty range anywhere gives no rows."""
    keys = sorted(ranges)
    rows = []
    for values in itertools.product(*(sorted(ranges[k]) for k in keys)):
        params = dict(zip(keys, values))
        _, rep = run_construct(method, params, budget)
        b = rep["bound"]
        ceiling = b.get("ceiling")
        rows.append(
            {
                "method": method,
                "params": " ".join(f"{k}={v}" for k, v in params.items()),
                "size": rep["size"],
                "floor": b.get("floor"),
                "formula": b.get("formula"),
                "ceiling": ceiling,
                "ratio": rep["size"] / ceiling if ceiling else None,
            }
        )
    return rows


def render_table(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return _dumps(rows)
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(TABLE_COLUMNS)
    for r in rows:
        out.writerow([_fmt(r[c]) for c in TABLE_COLUMNS])
    return buf.getvalue()


# dual export

def dual_points(cover: blocking.LineCover, *, check: bool = True) -> tuple[list[ProjPoint], bool | None]:
    pts = blocking.dualize(cover)
    ok = blocking.verify_minimal_blocking_set(pts, cover.field) if check else None
    return pts, ok


def render_dual(cover: blocking.LineCover, pts: list[ProjPoint], ok: bool | None, fmt: str) -> str:
    if fmt == "json":
        return _dumps(
            {
                "field": cover.field.to_json(),
                "blocking": ok,
                "points": [[list(c.coeffs) for c in p.coords] for p in pts],
            }
        )
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["x", "y", "z"])
    for p in pts:
        out.writerow(list(p.key()))
    return buf.getvalue()


# argument handling

def _add_numeric(parser: argparse.ArgumentParser, *, many: bool) -> None:
    for name in NUMERIC_FLAGS:
        if many:
            parser.add_argument(f"--{name}", type=int, nargs="*", default=None)
        else:
            parser.add_argument(f"--{name}", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fingeo", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build and verify an object")
    c.add_argument("method", help="one of: " + ", ".join([*REGISTRY, *EXTRA]))
    _add_numeric(c, many=False)
    c.add_argument("--budget", type=int, default=nikodym.DEFAULT_BUDGET)
    c.add_argument("--out", help="artifact path; the report goes next to it as <out>.report.json")
    c.add_argument("--format", choices=["json", "csv"], default="json")
    c.add_argument("--timing", action="store_true", help="add wall_time to the report")

    v = sub.add_parser("verify", help="check a saved artifact")
    v.add_argument("path")
    v.add_argument("--kind", choices=["matching", "weak-nikodym", "nikodym", "cover", "separation"])
    v.add_argument("--budget", type=int, default=nikodym.DEFAULT_BUDGET)
    v.add_argument("--format", choices=["json", "csv"], default="json")

    t = sub.add_parser("table", help="sizes against bounds over a parameter grid")
    t.add_argument("method")
    _add_numeric(t, many=True)
    t.add_argument("--budget", type=int, default=nikodym.DEFAULT_BUDGET)
    t.add_argument("--out")
    t.add_argument("--format", choices=["json", "csv"], default="csv")

    e = sub.add_parser("export-dual", help="dual blocking set of a saved cover")
    e.add_argument("path")
    e.add_argument("--out")
    e.add_argument("--format", choices=["json", "csv"], default="json")
    e.add_argument("--no-check", action="store_true", help="skip the blocking-set check")
    return ap


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _load(path: str) -> tuple[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ParameterError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ParameterError(f"{path} is not JSON: {e}") from None
    return decode_artifact(doc)


def _cmd_construct(args) -> int:
    params = {k: getattr(args, k) for k in NUMERIC_FLAGS if getattr(args, k) is not None}
    start = time.perf_counter()
    obj, report = run_construct(args.method, params, args.budget)
    if args.timing:
        report["wall_time"] = round(time.perf_counter() - start, 3)
    if args.out:
        write_atomic(args.out, _dumps(encode_artifact(obj)))
        write_atomic(args.out + ".report.json", _dumps(report))
    sys.stdout.write(_dumps(report))
    return OK


def _cmd_verify(args) -> int:
    kind, obj = _load(args.path)
    result = run_verify(args.kind or DEFAULT_KIND[kind], obj, args.budget)
    sys.stdout.write(_dumps(result))
    return OK if result["ok"] else FAILED


def _cmd_table(args) -> int:
    ranges = {k: getattr(args, k) for k in NUMERIC_FLAGS if getattr(args, k) is not None}
    rows = table_rows(args.method, ranges, args.budget)
    _emit(render_table(rows, args.format), args.out)
    return OK


def _cmd_export_dual(args) -> int:
    kind, obj = _load(args.path)
    if kind != "cover":
        raise ParameterError("export-dual needs a cover artifact")
    pts, ok = dual_points(obj, check=not args.no_check)
    _emit(render_dual(obj, pts, ok, args.format), args.out)
    return FAILED if ok is False else OK


COMMANDS = {
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "table": _cmd_table,
    "export-dual": _cmd_export_dual,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParameterError as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_PARAMS
    except BudgetExceeded as e:
        print(f"over budget: {e}", file=sys.stderr)
        return OVER_BUDGET
    except (VerificationFailed, FingeoError) as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
