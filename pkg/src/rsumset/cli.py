"""Command-line front end.

    rsumset construct --family fpmatch --p 23
    rsumset minimize --p 7 --a 0,2,4,5,6 --b 0,4,5,6 --constraint function-b
    rsumset scan --kind lev --p 7 --jobs 8 --out results.jsonl
    rsumset verify --what rprofile --p 7 --a 0,1,3 --f 0,1
    rsumset rectify --p 101 --set 1,50
    rsumset stability --p 8209 --synthesize --b-size 2 --r 0
    rsumset replay log.jsonl --jobs 8

Any command accepts --record LOG to append an experiment record (JSONL) that
`replay` can re-execute.  Exit status: 0 success, 1 verification failure,
2 usage or validation error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import random
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction
from importlib.metadata import PackageNotFoundError, version
from typing import Any, Callable

from . import constructions as cons
from .core import (
    IntegerSet,
    ModulusError,
    Relation,
    RelationConstraint,
    ResidueSet,
    is_prime,
    parse_relation_literal,
    parse_set_literal,
    restricted_sumset,
    sumset,
)
from .rectify import certify_rectifiable_pair, find_rectifying_dilation, green_ruzsa_check
from .search import ScanSpec, SCAN_KINDS, min_restricted_sumset
from .stability import (
    PartitionFailure,
    claim_expectations,
    constant_ledger,
    partition_interval,
    synthesize_instance,
)
from .verify import candidate_b_set, is_sidon, r_profile, staircase_witness, sum_bound_check


class UsageError(Exception):
    pass


def code_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def _prime(p) -> int:
    if p is None:
        raise UsageError("--p is required")
    if not is_prime(p):
        raise UsageError(f"modulus {p} is not prime")
    return p


def _set(text: str | None, p: int | None, name: str):
    if text is None:
        raise UsageError(f"--{name} is required")
    try:
        xs = parse_set_literal(text)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if not xs:
        raise UsageError(f"--{name} must be non-empty")
    return ResidueSet.of(p, xs) if p is not None else IntegerSet.of(xs)


def _relation(text: str | None, p: int | None) -> Relation:
    if not text:
        return Relation()
    try:
        return Relation.of(parse_relation_literal(text), p)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _budget(b) -> int | None:
    return None if b is None else int(float(b))


# ---- command handlers: params dict -> (payload, ok) ------------------------

def run_construct(a: dict[str, Any]) -> tuple[dict, bool]:
    fam = a["family"]
    try:
        if fam == "corner":
            out = cons.construct_interval_corner(a["n"], a["d"])
        elif fam == "zgap":
            out = cons.construct_z_gap(a["n"], a["d"])
        elif fam == "fpfun":
            out = cons.construct_fp_function(_prime(a["p"]), a["k"], a["ell"])
        elif fam == "fpmatch":
            out = cons.construct_fp_matching(_prime(a["p"]))
        elif fam == "fpunb":
            out = cons.construct_fp_unbalanced(_prime(a["p"]), Fraction(a["eps"]))
        else:
            A, wit = cons.pattern_window(a["n"] or 11)
            payload = {
                "family": "pattern",
                "A": list(A),
                "witnesses": {str(k): v for k, v in wit.items()},
                "valid": all(cons.check_pattern_witness(k, v) for k, v in wit.items()),
            }
            return payload, payload["valid"]
    except TypeError:
        raise UsageError(f"missing parameters for family {fam}") from None
    except cons.ConstructionError as e:
        raise UsageError(str(e)) from None
    payload = out.to_json()
    ok = out.audit_ok and payload["value"] == payload["predictedValue"]
    return payload, ok


def run_minimize(a: dict[str, Any]) -> tuple[dict, bool]:
    p = _prime(a["p"]) if a["p"] is not None else None
    A, B = _set(a["a"], p, "a"), _set(a["b"], p, "b")
    try:
        c = RelationConstraint.parse(a["constraint"])
    except ValueError as e:
        raise UsageError(str(e)) from None
    res = min_restricted_sumset(A, B, c, _budget(a["budget"]))
    payload = {
        "instance": {"p": p, "A": list(A), "B": list(B)},
        "constraint": c.label(),
        "sumsetSize": len(sumset(A, B)),
        "minValue": res.min_value,
        "optimal": res.optimal,
        "nodesExplored": res.nodes_explored,
        "budgetExhausted": res.budget_exhausted,
        "avoiding": list(res.avoiding.F),
        "witnessR": [list(x) for x in res.witness_r],
    }
    return payload, res.optimal


def _scan_spec(a: dict[str, Any]) -> ScanSpec:
    kind = a["kind"]
    if kind == "z_fiveDhalf":
        if not a["n"]:
            raise UsageError("--n is required for z_fiveDhalf")
        return ScanSpec(kind, n=a["n"], D=a["d"] or 1)
    p = _prime(a["p"])
    if p > 13:
        raise UsageError("exhaustive scans are limited to p <= 13")
    return ScanSpec(kind, p=p, k=a["k"] or 2)


def rows_jsonl(rows: list[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n" for r in rows)


def run_scan(a: dict[str, Any]) -> tuple[dict, bool]:
    from .search import scan_conjectures

    spec = _scan_spec(a)
    rep = scan_conjectures(spec, _budget(a["budget"]), jobs=a.get("jobs") or 1)
    rows = rep.pop("rows")
    text = rows_jsonl(rows)
    if a.get("out"):
        with open(a["out"], "w") as fh:
            fh.write(text)
    rep["rowsSha256"] = hashlib.sha256(text.encode()).hexdigest()
    rep["violatingInstances"] = [r["instance"] for r in rows if r["violation"]][:20]
    return rep, rep["violations"] == 0 and rep["complete"]


def run_verify(a: dict[str, Any]) -> tuple[dict, bool]:
    what = a["what"]
    if what == "staircase":
        A, B = _set(a["a"], None, "a"), _set(a["b"], None, "b")
        R = _relation(a["r"], None)
        try:
            w = staircase_witness(A, B, R, a["d"])
        except ValueError as e:
            raise UsageError(str(e)) from None
        S = set(restricted_sumset(A, B, R))
        ok = set(w["witness"]) <= S and len(w["witness"]) >= w["guaranteed"]
        return {"case": w["case"], "D": w["D"], "witness": list(w["witness"]),
                "guaranteed": w["guaranteed"], "restrictedSize": len(S), "ok": ok}, ok
    p = _prime(a["p"])
    if what == "sidon":
        F = _set(a["f"], p, "f")
        res = is_sidon(F)
        return {"p": p, "F": list(F), "sidon": res}, True
    if what == "rprofile":
        A, F = _set(a["a"], p, "a"), _set(a["f"], p, "f")
        prof = r_profile(A, F)
        return {"p": p, "k": prof.k, "r": list(prof.r), "identities": prof.identities_hold()}, prof.identities_hold()
    if what == "candidates":
        A, F = _set(a["a"], p, "a"), _set(a["f"], p, "f")
        C = candidate_b_set(A, F, a["d"] or 1)
        return {"p": p, "candidates": list(C), "size": len(C)}, True
    if what == "sumbound":
        A, B = _set(a["a"], p, "a"), _set(a["b"], p, "b")
        rep = sum_bound_check(A, B, a["k"] or 2, _budget(a["budget"]))
        return rep, rep["holds"]
    raise UsageError(f"unknown --what {what}")


def run_rectify(a: dict[str, Any]) -> tuple[dict, bool]:
    p = _prime(a["p"])
    X = _set(a["set"], p, "set")
    if a.get("set_b"):
        Y = _set(a["set_b"], p, "set-b")
        cert = certify_rectifiable_pair(X, Y)
        if cert is None:
            return {"p": p, "t": None, "verified": False}, True
        return {"p": p, "t": cert.t, "imageA": list(cert.image_a), "imageB": list(cert.image_b),
                "shiftA": cert.shift_a, "shiftB": cert.shift_b, "centered": cert.centered,
                "verified": True}, True
    cert = find_rectifying_dilation(X)
    K, alpha, gr = green_ruzsa_check(X, a.get("k") or 2)
    payload = {"p": p, "t": None if cert is None else cert.t,
               "image": None if cert is None else list(cert.image_a),
               "verified": cert is not None,
               "doubling": str(K), "density": str(alpha), "greenRuzsa": gr}
    return payload, True


def run_stability(a: dict[str, Any]) -> tuple[dict, bool]:
    if a.get("ledger"):
        L = constant_ledger(Fraction(a["eps"] or "1/2"), Fraction(a["gamma"] or "1/1024"),
                            a["t"] or 2**10 + 2 * (a["d"] or 1), a["d"] or 1)
        return L.to_json(), L.cross_check_ok
    if not a.get("synthesize"):
        raise UsageError("stability needs --synthesize or --ledger")
    p = _prime(a["p"])
    rng = random.Random(a["seed"])
    reports = []
    ok = True
    for _ in range(a["count"]):
        try:
            s = synthesize_instance(p, a["b_size"], a["r"], rng)
        except ValueError as e:
            raise UsageError(str(e)) from None
        try:
            part = partition_interval(s.A, s.I, s.J)
        except PartitionFailure as e:
            reports.append({"partition": "failed", "bestDensity": str(e.best_density)})
            ok = False
            continue
        rep = claim_expectations(s.A, part, s.B, s.q_l, s.q_r, r=s.r)
        rep["classSizes"] = part.class_sizes
        reports.append(rep)
        ok = ok and rep["claims_hold"] and not rep["hypothesis_violated"]
    return {"p": p, "bSize": a["b_size"], "r": a["r"], "seed": a["seed"],
            "instances": len(reports), "allHold": ok, "reports": reports}, ok


HANDLERS: dict[str, Callable[[dict], tuple[dict, bool]]] = {
    "construct": run_construct,
    "minimize": run_minimize,
    "scan": run_scan,
    "verify": run_verify,
    "rectify": run_rectify,
    "stability": run_stability,
}

# params that do not affect the result
VOLATILE = ("record", "format", "jobs", "out")


def record_id(command: str, params: dict[str, Any], ver: str) -> str:
    blob = json.dumps({"command": command, "params": params, "version": ver}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def render(payload: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k in sorted(payload):
            v = payload[k]
            w.writerow([k, v if isinstance(v, (int, str, bool)) or v is None else canonical(v)])
        return buf.getvalue()
    lines = []
    for k in sorted(payload):
        v = payload[k]
        lines.append(f"{k}: {v if isinstance(v, (int, str, bool)) or v is None else canonical(v)}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rsumset", description="Restricted sumsets over Z and Z/pZ.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--record", metavar="LOG", help="append an experiment record to LOG (JSONL)")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=float, default=None, help="branch-and-bound node limit")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common])
    c.add_argument("--family", choices=cons.FAMILIES, required=True)
    c.add_argument("--p", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--d", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--ell", type=int)
    c.add_argument("--eps")

    m = sub.add_parser("minimize", parents=[common])
    m.add_argument("--p", type=int, help="modulus; omit for subsets of Z")
    m.add_argument("--a", required=True)
    m.add_argument("--b", required=True)
    m.add_argument("--constraint", default="matching",
                   help="function-b | matching | degree-b:D | degree-both:D")

    s = sub.add_parser("scan", parents=[common])
    s.add_argument("--kind", choices=SCAN_KINDS, required=True)
    s.add_argument("--p", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--out")

    v = sub.add_parser("verify", parents=[common])
    v.add_argument("--what", choices=("rprofile", "sidon", "candidates", "sumbound", "staircase"), required=True)
    v.add_argument("--p", type=int)
    v.add_argument("--a")
    v.add_argument("--b")
    v.add_argument("--f")
    v.add_argument("--r", help="relation literal a:b;a:b")
    v.add_argument("--d", type=int)
    v.add_argument("--k", type=int)

    r = sub.add_parser("rectify", parents=[common])
    r.add_argument("--p", type=int, required=True)
    r.add_argument("--set", required=True)
    r.add_argument("--set-b", dest="set_b")
    r.add_argument("--k", type=int, default=2)

    st = sub.add_parser("stability", parents=[common])
    st.add_argument("--p", type=int)
    st.add_argument("--synthesize", action="store_true")
    st.add_argument("--b-size", dest="b_size", type=int, default=2)
    st.add_argument("--r", type=int, default=0)
    st.add_argument("--count", type=int, default=1)
    st.add_argument("--report", choices=("json",), default="json")
    st.add_argument("--ledger", action="store_true")
    st.add_argument("--eps")
    st.add_argument("--gamma")
    st.add_argument("--t", type=int)
    st.add_argument("--d", type=int)

    rp = sub.add_parser("replay")
    rp.add_argument("log")
    rp.add_argument("--jobs", type=int, default=None, help="override the recorded worker count")
    rp.add_argument("--format", choices=("json", "csv", "text"), default="json")
    return ap


def _params(ns: argparse.Namespace) -> dict[str, Any]:
    d = {k: v for k, v in vars(ns).items() if k != "command"}
    if d.get("budget") is not None:
        d["budget"] = int(d["budget"])
    return d


def execute(command: str, params: dict[str, Any]) -> tuple[dict, bool]:
    return HANDLERS[command](params)


def replay(path: str, jobs: int | None = None) -> tuple[dict, bool]:
    try:
        with open(path) as fh:
            records = [json.loads(line) for line in fh if line.strip()]
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read record log: {e}") from None
    ver = code_version()
    results = []
    for rec in records:
        params = dict(rec["params"])
        if jobs is not None:
            params["jobs"] = jobs
        params.pop("out", None)
        payload, _ = execute(rec["command"], params)
        same = canonical(payload) == canonical(rec["result"])
        entry = {"id": rec["id"], "command": rec["command"], "equal": same}
        if rec.get("version") != ver:
            entry["versionMismatch"] = {"recorded": rec.get("version"), "current": ver}
        results.append(entry)
    drift = [r["id"] for r in results if not r["equal"]]
    return {"records": len(results), "drift": drift, "allEqual": not drift, "results": results}, not drift


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)  # exits with status 2 on usage errors
    try:
        if ns.command == "replay":
            payload, ok = replay(ns.log, ns.jobs)
            sys.stdout.write(render(payload, ns.format))
            return 0 if ok else 1
        params = _params(ns)
        started = time.time()
        payload, ok = execute(ns.command, params)
        elapsed = time.time() - started
    except (UsageError, ModulusError) as e:
        print(f"rsumset {ns.command}: error: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(render(payload, ns.format))
    if ns.record:
        stable = {k: v for k, v in params.items() if k not in VOLATILE}
        ver = code_version()
        rec = {
            "id": record_id(ns.command, stable, ver),
            "command": ns.command,
            "params": params,
            "version": ver,
            "seed": params.get("seed", 0),
            "startedAt": datetime.fromtimestamp(started, timezone.utc).isoformat(),
            "elapsed": round(elapsed, 6),
            "result": payload,
        }
        with open(ns.record, "a") as fh:
            fh.write(canonical(rec) + "\n")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
