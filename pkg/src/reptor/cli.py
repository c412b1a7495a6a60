"""Batch front end: JSON problem specifications in, JSON reports out.

Exit codes::

    0  success (for ``tor``: the vanishing bound holds, or the claim is vacuous)
    1  usage, validation or hypothesis error
    2  resource budget exceeded (inconclusive)
    3  theorem inconsistency or regression mismatch (an implementation bug)
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import jsonschema

from .biquot import (
    EnlargementFailed,
    PairClassification,
    classify_pair,
    enlarge_torus,
    intersection_rank,
    vanishing_bound,
)
from .charlat import NotASubtorus, TorusSubgroup, subgroup_from_cocharacters
from .diagtor import RATIONAL_NOTE, TheoremInconsistency, ktheory_biquotient, tor_good_group, verify_theorem
from .grob import BudgetExceeded, parse_field
from .grob.core import DEFAULT_MAX_DEGREE, DEFAULT_MAX_SPAIRS
from .grob.koszul import HomologyDescriptor
from .toraltor import HypothesisFailed, TorGroup, toral_ktheory, toral_tor
from .weyl import GroupSpec, RootDatum, WeylGroupTooLarge, build_root_datum

__all__ = ["main", "run", "run_file", "parse_spec", "BiquotientSpec", "regress"]

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
COMMANDS = ("check", "tor", "ktheory", "enlarge")
EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INCONSISTENT = 0, 1, 2, 3
SAFE_INT = 2**53 - 1

DEFAULT_OPTIONS = {"field": "q", "seed": 0, "max_spairs": DEFAULT_MAX_SPAIRS, "max_degree": DEFAULT_MAX_DEGREE}


class SpecError(ValueError):
    pass


def load_schema(name: str) -> dict:
    return json.loads(resources.files("reptor.schemas").joinpath(f"{name}.schema.json").read_text())


def to_json(obj: Any) -> Any:
    """Make ``obj`` JSON-safe; integers beyond 53 bits become decimal strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > SAFE_INT else obj
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _format(obj: Any, indent: int) -> str:
    # like json.dumps(indent=2), but lists of scalars stay on one line
    pad = "  " * (indent + 1)
    if isinstance(obj, dict) and obj:
        items = [f"{pad}{json.dumps(k)}: {_format(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list) and obj and any(isinstance(v, (dict, list)) for v in obj):
        if all(isinstance(v, list) and not any(isinstance(x, (dict, list)) for x in v) for v in obj):
            return "[" + ", ".join(json.dumps(v, separators=(", ", ": ")) for v in obj) + "]"
        items = [pad + _format(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(obj, separators=(", ", ": "))


def dumps(report: Any) -> str:
    return _format(to_json(report), 0) + "\n"


@dataclass(frozen=True)
class BiquotientSpec:
    group: GroupSpec
    subgroup1: TorusSubgroup
    subgroup2: TorusSubgroup
    options: dict
    echo: dict


def _matrix(rows: list, r: int, what: str) -> list[list[int]]:
    out = [[int(x) for x in row] for row in rows]
    for row in out:
        if len(row) != r:
            raise SpecError(f"{what}: row of length {len(row)} in a rank-{r} group")
    return out


def _subgroup(entry, r: int, what: str) -> tuple[TorusSubgroup, Any]:
    if entry == "trivial":
        return TorusSubgroup.trivial(r), entry
    if entry == "maximal":
        return TorusSubgroup.maximal(r), entry
    if "cocharacters" in entry:
        rows = _matrix(entry["cocharacters"], r, what)
        return subgroup_from_cocharacters(r, rows), {"cocharacters": rows}
    rows = _matrix(entry["lattice"], r, what)
    return TorusSubgroup.from_lattice(r, rows), {"lattice": rows}


def parse_spec(doc: Any, overrides: dict | None = None) -> BiquotientSpec:
    """Validate a spec document; ``overrides`` (from command-line flags) win over its options."""
    try:
        jsonschema.validate(doc, load_schema("spec"))
    except jsonschema.ValidationError as exc:
        where = "/".join(map(str, exc.absolute_path)) or "<root>"
        raise SpecError(f"{where}: {exc.message}") from None
    try:
        group = GroupSpec.parse(doc["group"])
    except ValueError as exc:
        raise SpecError(f"group: {exc}") from None
    if not group.factors:
        raise SpecError("group: no factors")
    r = group.rank
    s1, e1 = _subgroup(doc["subgroup1"], r, "subgroup1")
    s2, e2 = _subgroup(doc["subgroup2"], r, "subgroup2")
    options = dict(DEFAULT_OPTIONS)
    options.update(doc.get("options", {}))
    options.update({k: v for k, v in (overrides or {}).items() if v is not None})
    options["seed"] = int(options["seed"])
    try:
        parse_field(options["field"])
    except ValueError as exc:
        raise SpecError(f"options/field: {exc}") from None
    echo = {
        "schema_version": SCHEMA_VERSION,
        "group": str(group),
        "subgroup1": e1,
        "subgroup2": e2,
        "options": options,
    }
    return BiquotientSpec(group, s1, s2, options, echo)


# ---------------------------------------------------------------------------
# report sections


def _subgroup_block(s: TorusSubgroup) -> dict:
    return {
        "rank": s.rank,
        "k_basis": [list(v) for v in s.k.basis],
        "connected": s.is_subtorus,
        "component_group": str(s.component_group()),
    }


def _classification_block(cls: PairClassification) -> dict:
    return {
        "verdict": cls.verdict.value,
        "witnesses": [
            {
                "weyl_matrix": [list(row) for row in w.weyl_matrix],
                "conjugate_k": [list(v) for v in w.conjugate_k],
                "sum_k": [list(v) for v in w.sum_k],
                "intersection_rank": w.intersection_rank,
                "component_invariants": list(w.component_invariants),
            }
            for w in cls.witnesses
        ],
    }


def _exact_degree(i: int, g: TorGroup) -> dict:
    out = {"degree": i, "zero": g.is_zero, "q_dim": 0 if g.is_zero else g.rational_dim()}
    out["exact"] = g.describe()
    return out


def _rational_degree(h: HomologyDescriptor) -> dict:
    return {"degree": h.degree, "zero": h.is_zero, "q_dim": h.finite_dim}


def _first_violation(degrees: list[dict], bound: int) -> dict | None:
    for d in degrees:
        if not d["zero"] and d["degree"] > bound:
            return d
    return None


def _witness(spec: BiquotientSpec, cls: PairClassification, bound: int, violation: dict) -> dict:
    # smallest reproducer: canonical lattices and the lowest offending degree
    return {
        "group": str(spec.group),
        "subgroup1": {"lattice": [list(v) for v in spec.subgroup1.k.basis]},
        "subgroup2": {"lattice": [list(v) for v in spec.subgroup2.k.basis]},
        "verdict": cls.verdict.value,
        "vanishing_bound": bound,
        "violation": violation,
    }


class _Inconsistent(Exception):
    def __init__(self, report: dict, witness: dict):
        super().__init__("theorem inconsistency")
        self.report = report
        self.witness = witness


def _base(datum: RootDatum, spec: BiquotientSpec) -> tuple[dict, PairClassification, int]:
    cls = classify_pair(datum, spec.subgroup1, spec.subgroup2)
    bound = vanishing_bound(datum, spec.subgroup1, spec.subgroup2)
    body = {
        "group": {"name": str(spec.group), "rank": datum.rank, "weyl_order": datum.weyl_order},
        "subgroups": [_subgroup_block(spec.subgroup1), _subgroup_block(spec.subgroup2)],
        "classification": _classification_block(cls),
        "intersection_rank": intersection_rank(datum, spec.subgroup1, spec.subgroup2),
        "vanishing_bound": bound,
    }
    return body, cls, bound


def _cmd_check(datum: RootDatum, spec: BiquotientSpec) -> dict:
    return _base(datum, spec)[0]


def _cmd_tor(datum: RootDatum, spec: BiquotientSpec) -> dict:
    body, cls, bound = _base(datum, spec)
    opts = spec.options
    field = parse_field(opts["field"])
    s1, s2 = spec.subgroup1, spec.subgroup2
    notes: list[str] = []
    consistent: bool | None
    if datum.is_torus:
        prof = toral_tor(datum.rank, s1, s2)
        degrees = [_exact_degree(i, prof.degree(i)) for i in range(datum.rank + 1)]
        tor = {"path": "toral-exact", "field": "Z", "degrees": degrees}
        diagnostics = {}
    elif field.modulus:
        res = tor_good_group(datum, s1, s2, field, opts["max_spairs"], opts["max_degree"])
        degrees = [_rational_degree(h) for h in res.degrees]
        tor = {"path": "diagonal", "field": field.name, "degrees": degrees}
        diagnostics = {k: v for k, v in res.diagnostics.items() if k != "note"}
        notes.append(res.diagnostics["note"])
        notes.append("theorem check skipped: it is only evaluated over Q")
    else:
        rep = verify_theorem(datum, s1, s2, opts["max_spairs"], opts["max_degree"])
        if rep.inconclusive:
            raise BudgetExceeded(rep.notes[0])
        degrees = [_rational_degree(h) for h in rep.tor.degrees]
        tor = {"path": "diagonal", "field": "QQ", "degrees": degrees}
        diagnostics = dict(rep.tor.diagnostics)
        notes.append(RATIONAL_NOTE)
    if field.modulus and not datum.is_torus:
        consistent = None
    else:
        violation = _first_violation(degrees, bound) if cls.satisfies_lax else None
        consistent = violation is None
    body.update(tor=tor, theorem_consistent=consistent, diagnostics=diagnostics, notes=notes)
    if consistent is False:
        raise _Inconsistent(body, _witness(spec, cls, bound, violation))
    return body


def _cmd_ktheory(datum: RootDatum, spec: BiquotientSpec) -> dict:
    body, _, _ = _base(datum, spec)
    s1, s2 = spec.subgroup1, spec.subgroup2
    if datum.is_torus:
        rep = toral_ktheory(datum.rank, s1, s2)
    else:
        rep = ktheory_biquotient(datum, s1, s2, spec.options["max_spairs"], spec.options["max_degree"])
    body["ktheory"] = {
        "k0": rep.k0,
        "k1": rep.k1,
        "strict": rep.strict,
        "rank_condition": rep.rank_condition,
        "maximal_rank": rep.maximal_rank,
        "exact": rep.exact,
    }
    body["notes"] = list(rep.notes)
    return body


def _cmd_enlarge(datum: RootDatum, spec: BiquotientSpec) -> dict:
    body, _, _ = _base(datum, spec)
    res = enlarge_torus(datum, spec.subgroup1, spec.subgroup2, seed=spec.options["seed"])
    body["enlarge"] = {
        "k_basis": [list(v) for v in res.subgroup.k.basis],
        "rank": res.subgroup.rank,
        "interrank": res.interrank,
        "attempts": res.attempts,
        "window": res.window,
        "checks": dict(res.checks),
    }
    return body


_HANDLERS = {"check": _cmd_check, "tor": _cmd_tor, "ktheory": _cmd_ktheory, "enlarge": _cmd_enlarge}


def _error(command: str, code: int, kind: str, message: str, echo: dict | None = None, **extra) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "command": command, "status": "error", "exit_code": code}
    if echo is not None:
        out["spec"] = echo
    out["error"] = {"kind": kind, "message": message, **extra}
    return out


def run(command: str, doc: Any, overrides: dict | None = None, timing: bool = False) -> tuple[int, dict]:
    """Execute one command on a parsed JSON document; returns ``(exit_code, report)``."""
    if command not in _HANDLERS:
        return EXIT_USAGE, _error(command, EXIT_USAGE, "usage", f"unknown command {command!r}")
    try:
        spec = parse_spec(doc, overrides)
    except SpecError as exc:
        return EXIT_USAGE, _error(command, EXIT_USAGE, "validation", str(exc))
    start = time.perf_counter()
    try:
        datum = build_root_datum(spec.group)
        body = _HANDLERS[command](datum, spec)
    except (HypothesisFailed, NotASubtorus) as exc:
        kind = "hypothesis" if isinstance(exc, HypothesisFailed) else "validation"
        return EXIT_USAGE, _error(command, EXIT_USAGE, kind, str(exc), spec.echo)
    except (BudgetExceeded, WeylGroupTooLarge, EnlargementFailed) as exc:
        return EXIT_BUDGET, _error(command, EXIT_BUDGET, "budget", str(exc), spec.echo)
    except _Inconsistent as exc:
        report = _error(command, EXIT_INCONSISTENT, "inconsistency", "Tor is nonzero above the vanishing bound",
                        spec.echo, witness=exc.witness)
        return EXIT_INCONSISTENT, report
    except TheoremInconsistency as exc:
        return EXIT_INCONSISTENT, _error(command, EXIT_INCONSISTENT, "inconsistency", str(exc), spec.echo,
                                         witness=exc.witness)
    report = {"schema_version": SCHEMA_VERSION, "command": command, "status": "ok", "exit_code": EXIT_OK,
              "spec": spec.echo}
    report.update(body)
    if timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return EXIT_OK, report


def run_file(command: str, path: str | Path, overrides: dict | None = None, timing: bool = False) -> tuple[int, dict]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        return EXIT_USAGE, _error(command, EXIT_USAGE, "usage", f"{path}: {exc}")
    return run(command, doc, overrides, timing)


def _run_job(args: tuple) -> tuple[int, dict]:
    return run_file(*args)


# ---------------------------------------------------------------------------
# bundled regression corpus


def _lookup(report: Any, pointer: str) -> Any:
    node = report
    for part in pointer.strip("/").split("/"):
        node = node[int(part)] if isinstance(node, list) else node[part]
    return node


def corpus_entries() -> list[tuple[str, dict]]:
    root = resources.files("reptor.corpus")
    names = sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))
    return [(n, json.loads(root.joinpath(n).read_text())) for n in names]


def regress(jobs: int = 1) -> tuple[int, dict]:
    """Run every bundled example and compare selected report fields with the recorded values."""
    entries = corpus_entries()
    work = [(e["command"], e["spec"]) for _, e in entries]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_run_doc, work))
    else:
        results = [_run_doc(w) for w in work]
    cases = []
    for (name, entry), (code, report) in zip(entries, results):
        mismatches = []
        if code != entry.get("exit_code", 0):
            mismatches.append({"field": "exit_code", "expected": entry.get("exit_code", 0), "got": code})
        for pointer, want in entry["expect"].items():
            try:
                got = to_json(_lookup(report, pointer))
            except (KeyError, IndexError, TypeError):
                got = "<missing>"
            if got != want:
                mismatches.append({"field": pointer, "expected": want, "got": got})
        cases.append({"name": name, "command": entry["command"], "passed": not mismatches, "mismatches": mismatches})
    ok = all(c["passed"] for c in cases)
    code = EXIT_OK if ok else EXIT_INCONSISTENT
    report = {"schema_version": SCHEMA_VERSION, "command": "regress", "status": "ok" if ok else "error",
              "exit_code": code, "cases": cases}
    return code, report


def _run_doc(args: tuple) -> tuple[int, dict]:
    return run(*args)


# ---------------------------------------------------------------------------


def _write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _field_tag(text: str) -> str:
    try:
        parse_field(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text.strip().lower()


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reptor", description="Biquotient checks, Tor and K-theory from JSON specs.")
    p.add_argument("command", choices=COMMANDS + ("regress", "schema"))
    p.add_argument("specs", nargs="*", metavar="spec.json",
                   help="problem files (for 'schema': the schema name, 'spec' or 'report')")
    p.add_argument("--field", type=_field_tag, help="q (default) or fp:<p> for a diagnostic prime field")
    p.add_argument("--seed", type=int, help="seed for randomized steps (default 0)")
    p.add_argument("--max-spairs", type=_positive, help=f"S-pair budget (default {DEFAULT_MAX_SPAIRS})")
    p.add_argument("--max-degree", type=_positive, help=f"degree budget (default {DEFAULT_MAX_DEGREE})")
    p.add_argument("--jobs", type=_positive, default=1, help="worker processes for several spec files")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--timing", action="store_true", help="add wall-clock timing (makes output non-reproducible)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)

    if args.command == "schema":
        name = args.specs[0] if args.specs else "spec"
        if name not in ("spec", "report"):
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        text, code = json.dumps(load_schema(name), indent=2) + "\n", EXIT_OK
    elif args.command == "regress":
        code, report = regress(args.jobs)
        text = dumps(report)
    else:
        if not args.specs:
            print(f"reptor {args.command}: at least one spec file is required", file=sys.stderr)
            return EXIT_USAGE
        overrides = {"field": args.field, "seed": args.seed, "max_spairs": args.max_spairs,
                     "max_degree": args.max_degree}
        work = [(args.command, path, overrides, args.timing) for path in args.specs]
        if args.jobs > 1 and len(work) > 1:
            with ProcessPoolExecutor(min(args.jobs, len(work))) as pool:
                results = list(pool.map(_run_job, work))
        else:
            results = [_run_job(w) for w in work]
        code = max(c for c, _ in results)
        reports = [r for _, r in results]
        text = dumps(reports[0] if len(reports) == 1 else reports)
        for c, r in results:
            if c:
                print(f"reptor: exit {c}: {r['error']['message']}", file=sys.stderr)

    if args.out:
        _write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
