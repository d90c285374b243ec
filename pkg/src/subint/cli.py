"""Command line front-end: ``subint run <file>`` and ``subint schema``."""
from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Optional

import jsonschema

from . import __version__
from .algebra import (MonoidAlgebraExtension, MonomialExtension, SubalgebraExtension,
                      UnsupportedCharacteristic, intersection_lemma_check, nil_radical,
                      nil_radical_of_monoid_algebra, nilpotent_brute_force, parse_monoid_element,
                      subintegral_closure_ring, is_subintegrally_closed_ring, zr_transfer_check)
from .homotopy import GradedExtension, verify_homotopy_identities
from .ideals import (PreconditionViolated, canonical_pair_d1, canonical_pair_d2,
                     exact_sequence_check, non_surjectivity_check, tensor_identity_check)
from .library import build_extension, parse_monoid
from .linalg import Subspace
from .monoid import (AffineMonoid, closure_via_seminormalization, seminormalization,
                     subintegral_closure_monoid)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_SEED = 0
MAX_SAFE_INT = 2 ** 53


class InputError(Exception):
    pass


def load_schema(name: str) -> dict:
    text = resources.files("subint").joinpath(f"data/{name}.schema.json").read_text("utf-8")
    return json.loads(text)


# -- json helpers ----------------------------------------------------------

def _int(x: int):
    return x if -MAX_SAFE_INT < x < MAX_SAFE_INT else str(x)


def monoid_json(m: AffineMonoid) -> dict:
    return {"repr": repr(m), "rank": m.ambient_rank,
            "generators": [[_int(x) for x in g] for g in m.generators]}


def vec_json(F, v) -> list:
    return [F.to_json(x) for x in v]


def same_monoid(a: AffineMonoid, b: AffineMonoid) -> bool:
    return (a.ambient_rank == b.ambient_rank and all(b.contains(g) for g in a.generators)
            and all(a.contains(g) for g in b.generators))


# -- task environment --------------------------------------------------------

@dataclass
class Env:
    monoids: dict = field(default_factory=dict)
    extensions: dict = field(default_factory=dict)
    degree_bound: Optional[int] = None
    grid_bound: int = 2
    seed: int = DEFAULT_SEED
    _ext_cache: dict = field(default_factory=dict)

    def monoid(self, spec) -> AffineMonoid:
        return parse_monoid(spec, self.monoids)

    def ext(self, spec):
        key = json.dumps(spec, sort_keys=True)
        if key not in self._ext_cache:
            self._ext_cache[key] = build_extension(spec, self.monoids, self.extensions)
        return self._ext_cache[key]

    def finite_ext(self, task) -> SubalgebraExtension:
        e = self.ext(task["ext"])
        if not isinstance(e, SubalgebraExtension):
            raise InputError(f"task {task['kind']} needs a finite extension")
        return e

    def bound(self, task, default: Optional[int]) -> Optional[int]:
        if "D" in task:
            return task["D"]
        return self.degree_bound if self.degree_bound is not None else default

    def grid(self, task) -> int:
        return task.get("grid", self.grid_bound)


@dataclass
class Outcome:
    status: str
    result: dict
    facts: dict = field(default_factory=dict)


def _monoid_pair(env: Env, task, default_rank: int = 1):
    m = env.monoid(task["M"]) if "M" in task else AffineMonoid.free(default_rank)
    n = env.monoid(task["N"]) if "N" in task else m
    return m, n


# -- task kinds --------------------------------------------------------------

def task_monoid_closure(task, env: Env) -> Outcome:
    m = env.monoid(task["M"])
    n = env.monoid(task.get("N", f"Zplus^{m.ambient_rank}"))
    res = subintegral_closure_monoid(m, n, env.bound(task, None))
    return Outcome("pass" if res.exact else "uncertified", {
        "M": monoid_json(m), "N": monoid_json(n), "closure": monoid_json(res.monoid),
        "adjoined": [list(x) for x in res.adjoined], "certified": res.certified,
        "degreeBound": res.degree_bound,
    }, {"closure": res.monoid, "closed": not res.adjoined})


def task_monoid_seminormalize(task, env: Env) -> Outcome:
    m = env.monoid(task["M"])
    res = seminormalization(m, env.bound(task, None))
    return Outcome("pass" if res.exact else "uncertified", {
        "M": monoid_json(m), "seminormalization": monoid_json(res.monoid),
        "adjoined": [list(x) for x in res.adjoined], "certified": res.certified,
        "degreeBound": res.degree_bound,
    }, {"closure": res.monoid, "seminormal": not res.adjoined})


def task_monoid_check_closed(task, env: Env) -> Outcome:
    m = env.monoid(task["M"])
    n = env.monoid(task.get("N", f"Zplus^{m.ambient_rank}"))
    res = subintegral_closure_monoid(m, n, env.bound(task, None))
    closed = not res.adjoined
    # a found element is a proof of non-closedness
    status = "pass" if (res.exact or not closed) else "uncertified"
    return Outcome(status, {
        "M": monoid_json(m), "N": monoid_json(n), "closed": closed,
        "witness": list(res.adjoined[0]) if res.adjoined else None,
        "certified": "witness" if not closed else res.certified,
        "degreeBound": res.degree_bound,
    }, {"closed": closed})


def _monomial_closure(ext: MonomialExtension, env: Env, task) -> Outcome:
    res = subintegral_closure_monoid(ext.inner, ext.outer, env.bound(task, None))
    via_sn = closure_via_seminormalization(ext.inner, ext.outer, res.degree_bound)
    agree = same_monoid(res.monoid, via_sn)
    status = "fail" if not agree else ("pass" if res.exact else "uncertified")
    return Outcome(status, {
        "field": ext.field.name, "inner": monoid_json(ext.inner), "outer": monoid_json(ext.outer),
        "closure": monoid_json(res.monoid), "closureViaSeminormalization": monoid_json(via_sn),
        "agree": agree, "certified": res.certified, "degreeBound": res.degree_bound,
    }, {"closure": res.monoid, "closed": not res.adjoined})


def task_ring_closure(task, env: Env) -> Outcome:
    ext = env.ext(task["ext"])
    if isinstance(ext, MonomialExtension):
        return _monomial_closure(ext, env, task)
    res = subintegral_closure_ring(ext, env.grid(task), task.get("rounds"))
    B = ext.ambient
    F = B.field
    chain_ok = res.verify_chain(ext)
    certified = "exact" if res.extension.is_trivial() else res.certified
    status = "fail" if not chain_ok else ("pass" if certified == "exact" else "uncertified")
    return Outcome(status, {
        "dimA": ext.sub.dim, "dimB": B.dim, "dimClosure": res.extension.sub.dim,
        "closureBasis": [B.format(v) for v in res.extension.sub.rows],
        "chain": [B.format(v) for v in res.adjoined],
        "chainVerified": chain_ok, "certified": certified, "gridBound": res.grid_bound,
        "closureCoordinates": [vec_json(F, v) for v in res.extension.sub.rows],
    }, {"dim": res.extension.sub.dim, "closed": not res.adjoined,
        "isAmbient": res.extension.is_trivial()})


def task_ring_check_closed(task, env: Env) -> Outcome:
    ext = env.ext(task["ext"])
    if isinstance(ext, MonomialExtension):
        out = _monomial_closure(ext, env, task)
        closed = same_monoid(ext.inner, out.facts["closure"])
        out.result["closed"] = closed
        out.facts["closed"] = closed
        if not closed and out.status != "fail":
            out.status = "pass"
        return out
    closed, cert, chain = is_subintegrally_closed_ring(ext, env.grid(task), task.get("rounds"))
    B = ext.ambient
    if closed and ext.is_trivial():
        cert = "exact"
    status = "pass" if cert in ("exact", "witness") else "uncertified"
    return Outcome(status, {"closed": closed, "certified": cert,
                            "witness": B.format(chain[0]) if chain else None,
                            "gridBound": env.grid(task)}, {"closed": closed})


def _pair_outcome(cert, I, J) -> Outcome:
    return Outcome("pass" if cert.valid else "fail",
                   {"I": I.format(), "J": J.format(), "certificate": cert.to_json()},
                   {"valid": cert.valid})


def task_pair_d1(task, env: Env) -> Outcome:
    ext = env.finite_ext(task)
    m_exp = tuple(task["m"])
    M, N = _monoid_pair(env, task, len(m_exp))
    mext = MonoidAlgebraExtension(ext, M, N)
    b = ext.ambient.element(task["b"])
    I, J, cert = canonical_pair_d1(mext, b, m_exp, env.bound(task, 8))
    return _pair_outcome(cert, I, J)


def task_pair_d2(task, env: Env) -> Outcome:
    ext = env.finite_ext(task)
    rank = len(task["g"][0]["exp"]) if task["g"] else 1
    M, N = _monoid_pair(env, task, rank)
    mext = MonoidAlgebraExtension(ext, M, N)
    g = parse_monoid_element(ext.ambient, N.ambient_rank, task["g"])
    I, J, cert = canonical_pair_d2(mext, g, env.bound(task, 8))
    return _pair_outcome(cert, I, J)


def _report(rep, **extra) -> Outcome:
    return Outcome("pass" if rep.ok else "fail", dict(rep.details, **extra), {"ok": rep.ok})


def task_homotopy(task, env: Env) -> Outcome:
    ext = env.finite_ext(task)
    M, N = _monoid_pair(env, task)
    g = GradedExtension(MonoidAlgebraExtension(ext, M, N), env.bound(task, 6))
    inv = g.check_invariants()
    rep = verify_homotopy_identities(g, task.get("samples", 100), task.get("seed", env.seed))
    out = _report(rep, gradedInvariants=inv.details)
    if not inv.ok:
        out.status = "fail"
    return out


def task_exact_sequence(task, env: Env) -> Outcome:
    ext = env.finite_ext(task)
    M, _ = _monoid_pair(env, task)
    rep = exact_sequence_check(ext, M, env.bound(task, 4), task.get("samples", 8), env.grid(task))
    return _report(rep)


def task_tensor_identity(task, env: Env) -> Outcome:
    ext = env.finite_ext(task)
    M, _ = _monoid_pair(env, task)
    return _report(tensor_identity_check(ext, M, env.bound(task, 10)))


def task_nil_radical(task, env: Env) -> Outcome:
    ext = env.finite_ext(task)
    B = ext.ambient
    F = B.field
    nil = nil_radical(B)
    result = {"dimB": B.dim, "dim": nil.dim, "basis": [B.format(v) for v in nil.rows],
              "coordinates": [vec_json(F, v) for v in nil.rows]}
    ok = True
    if task.get("crossCheck", B.dim <= 4):
        grid = env.grid(task)
        found = nilpotent_brute_force(B, grid)
        agree = Subspace(F, B.dim, found) == nil and all(nil.contains(v) for v in found)
        result["bruteForce"] = {"grid": grid, "nilpotentsFound": len(found), "agree": agree}
        ok = ok and agree
    if "N" in task:
        graded = nil_radical_of_monoid_algebra(B, env.monoid(task["N"]), env.bound(task, 3),
                                               task.get("samples", 50), task.get("seed", env.seed))
        result["graded"] = dict(graded.consistency.details, ok=graded.consistency.ok,
                                componentDims={str(d): len(v)
                                               for d, v in sorted(graded.components.items())})
        ok = ok and graded.consistency.ok
    return Outcome("pass" if ok else "fail", result, {"dim": nil.dim, "ok": ok})


def task_units_quotient(task, env: Env) -> Outcome:
    ext = env.finite_ext(task)
    M = env.monoid(task["M"]) if "M" in task else AffineMonoid.free(1)
    N = env.monoid(task.get("N", f"Zplus^{M.ambient_rank}"))
    rep = non_surjectivity_check(ext, M, N, env.bound(task, 6), env.grid(task))
    out = _report(rep)
    out.facts["witness"] = rep.details.get("witness")
    return out


def task_zr_transfer(task, env: Env) -> Outcome:
    ext = env.finite_ext(task)
    rep = zr_transfer_check(ext, task.get("r", 1), env.grid(task), task.get("rounds"),
                            env.bound(task, 6))
    return _report(rep)


def task_intersection_lemma(task, env: Env) -> Outcome:
    ext = env.finite_ext(task)
    M, _ = _monoid_pair(env, task)
    return _report(intersection_lemma_check(ext, M, env.bound(task, 6)))


TASKS: dict[str, Callable[[dict, Env], Outcome]] = {
    "monoid-closure": task_monoid_closure,
    "monoid-seminormalize": task_monoid_seminormalize,
    "monoid-check-closed": task_monoid_check_closed,
    "ring-closure": task_ring_closure,
    "ring-check-closed": task_ring_check_closed,
    "verify-pair-d1": task_pair_d1,
    "verify-pair-d2": task_pair_d2,
    "homotopy-identities": task_homotopy,
    "exact-sequence": task_exact_sequence,
    "tensor-identity": task_tensor_identity,
    "nil-radical": task_nil_radical,
    "units-quotient-witness": task_units_quotient,
    "zr-transfer": task_zr_transfer,
    "intersection-lemma": task_intersection_lemma,
}


def check_expectations(task, env: Env, facts: dict) -> dict:
    """Compare the optional ``expect`` block with the task's facts."""
    out = {}
    for key, want in task.get("expect", {}).items():
        if key not in facts:
            out[key] = {"expected": want, "observed": None, "ok": False}
            continue
        got = facts[key]
        if isinstance(got, AffineMonoid):
            ok = same_monoid(got, env.monoid(want))
            got = repr(got)
        else:
            ok = got == want
        out[key] = {"expected": want, "observed": got, "ok": ok}
    return out


# -- driver ------------------------------------------------------------------

def read_instance(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: JSON parse error: {exc.msg}") from exc
    if isinstance(doc, dict):
        for k, t in enumerate(doc.get("tasks", []) or []):
            if isinstance(t, dict) and "kind" in t and t["kind"] not in TASKS:
                raise InputError(f"task {k}: unknown task kind {t['kind']!r}")
    try:
        jsonschema.validate(doc, load_schema("input"))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"{path}: schema violation at {where}: {exc.message}") from exc
    return doc


def prepare(doc: dict, env: Env):
    """Resolve every referenced name before running anything."""
    for k, t in enumerate(doc.get("tasks", [])):
        try:
            if "ext" in t:
                env.ext(t["ext"])
            for key in ("M", "N"):
                if key in t:
                    env.monoid(t[key])
        except (KeyError, ValueError) as exc:
            msg = exc.args[0] if exc.args else str(exc)
            raise InputError(f"task {k} ({t['kind']}): {msg}") from exc


def run_tasks(doc: dict, env: Env, reproducible: bool = False) -> list[dict]:
    entries = []
    for k, t in enumerate(doc.get("tasks", [])):
        t0 = time.perf_counter()
        entry = {"index": k, "kind": t["kind"]}
        if "name" in t:
            entry["name"] = t["name"]
        try:
            out = TASKS[t["kind"]](t, env)
            status, result = out.status, out.result
            exp = check_expectations(t, env, out.facts)
            if exp:
                entry["expectations"] = exp
                if not all(v["ok"] for v in exp.values()):
                    status = "fail"
        except (PreconditionViolated, UnsupportedCharacteristic, InputError, ValueError) as exc:
            status, result = "fail", {}
            entry["error"] = f"{type(exc).__name__}: {exc}"
        entry["status"] = status
        entry["result"] = result
        if not reproducible:
            entry["elapsed"] = round(time.perf_counter() - t0, 6)
        entries.append(entry)
    return entries


def build_report(path: str, doc: dict, env: Env, reproducible: bool = False) -> dict:
    t0 = time.perf_counter()
    tasks = run_tasks(doc, env, reproducible)
    counts = {s: sum(1 for t in tasks if t["status"] == s) for s in ("pass", "fail", "uncertified")}
    report = {
        "tool": "subint",
        "version": __version__,
        "seed": env.seed,
        "input": path,
        "degreeBound": env.degree_bound,
        "gridBound": env.grid_bound,
        "summary": dict(counts, total=len(tasks)),
        "tasks": tasks,
    }
    if not reproducible:
        report["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
        report["wallTime"] = round(time.perf_counter() - t0, 6)
    jsonschema.validate(report, load_schema("report"))
    return report


def exit_code(report: dict) -> int:
    return EXIT_FAIL if report["summary"]["fail"] else EXIT_OK


def summary_text(report: dict) -> str:
    lines = []
    for t in report["tasks"]:
        label = t["kind"] + (f" [{t['name']}]" if "name" in t else "")
        extra = f" ({t['elapsed']:.3f}s)" if "elapsed" in t else ""
        err = f"  {t['error']}" if "error" in t else ""
        lines.append(f"{t['status'].upper():<12}#{t['index']} {label}{extra}{err}")
    s = report["summary"]
    lines.append(f"{s['total']} tasks: {s['pass']} pass, {s['fail']} fail, "
                 f"{s['uncertified']} uncertified (seed {report['seed']})")
    return "\n".join(lines)


def resolve_seed(flag: Optional[int]) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("SUBINT_SEED")
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise InputError(f"SUBINT_SEED must be an integer, got {env!r}")
    return DEFAULT_SEED


def cmd_run(args) -> int:
    try:
        seed = resolve_seed(args.seed)
        doc = read_instance(args.file)
        env = Env(monoids=doc.get("monoids", {}), extensions=doc.get("extensions", {}),
                  degree_bound=args.degree_bound, grid_bound=args.grid_bound, seed=seed)
        prepare(doc, env)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = build_report(args.file, doc, env, args.reproducible)
    text = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    output = args.output
    if output is None and not args.json_only:
        stem = os.path.splitext(os.path.basename(args.file))[0]
        output = f"{stem}.report.json"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.json_only:
        sys.stdout.write(text)
    else:
        print(summary_text(report))
        print(f"report written to {output}")
    return exit_code(report)


def cmd_schema(args) -> int:
    doc = {"input": load_schema("input"), "report": load_schema("report")}
    if args.which:
        doc = doc[args.which]
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subint",
                                description="Subintegral closures, invertible modules and "
                                            "their certificates.")
    p.add_argument("--version", action="version", version=f"subint {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="execute the tasks of an instance file")
    r.add_argument("file")
    r.add_argument("--degree-bound", type=int, default=None,
                   help="default truncation / search degree for tasks without D")
    r.add_argument("--grid-bound", type=int, default=2,
                   help="coefficient range [-c, c] for element searches")
    r.add_argument("--seed", type=int, default=None, help="overrides SUBINT_SEED")
    r.add_argument("--json-only", action="store_true", help="print only the JSON report")
    r.add_argument("--reproducible", action="store_true",
                   help="omit timestamps and timings so reports are byte-identical")
    r.add_argument("--output", "-o", default=None,
                   help="report path (default: <input stem>.report.json in the working directory)")
    r.set_defaults(func=cmd_run)
    s = sub.add_parser("schema", help="print the input and report JSON schemas")
    s.add_argument("which", nargs="?", choices=["input", "report"])
    s.set_defaults(func=cmd_schema)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
