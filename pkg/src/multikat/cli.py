"""Command line: ``multikat validate | ktheory | check-lemmas``.

Exit codes: 0 completed, 1 invalid input (or failed checks), 2 budget or
unreadable input, 3 internal invariant breach.  Every flag can also be set
through an environment variable ``MULTIKAT_<FLAG>``, e.g. ``MULTIKAT_LEVELS``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .cache import ResultCache, decode_level, encode_level
from .enumeration import DEFAULT_BUDGET, BudgetExceeded, HomCategory
from .gamma import DEFAULT_LEVELS, GammaObject, check_gamma_functoriality
from .homotopy import extract_binary_tensor, very_special_verdict
from .lemmas import FAIL, PASS, global_rows, lemma_rows
from .multicat import DEFAULT_ARITY_CAP, power_E, validate_multicategory
from .serialize import BUILTINS, InputError, UnreadableInput, builtin, digest, load

EXIT_OK, EXIT_INVALID, EXIT_RESOURCE, EXIT_INTERNAL = 0, 1, 2, 3
FUNCTORIALITY_ARROW_LIMIT = 20000
REPORT_VERSION = 1

log = logging.getLogger("multikat")


def _env(name: str, default, cast=str):
    raw = os.environ.get(f"MULTIKAT_{name}")
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise SystemExit(f"error: MULTIKAT_{name}={raw!r} is not a valid value") from None


def _budget(raw) -> int | None:
    if raw in (None, "none", "None", "0", 0):
        return None
    return int(float(raw))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--arity-cap", type=int, default=_env("ARITY_CAP", None, int),
                        help=f"maximum arity of stored arrows (default {DEFAULT_ARITY_CAP})")
    common.add_argument("--levels", type=int, default=_env("LEVELS", DEFAULT_LEVELS, int),
                        help=f"highest Gamma level computed (default {DEFAULT_LEVELS})")
    common.add_argument("--budget", type=_budget, default=_env("BUDGET", DEFAULT_BUDGET, _budget),
                        help="search-tree node budget per enumeration; 'none' disables it")
    common.add_argument("--out", default=_env("OUT", None), help="write the JSON report here")
    common.add_argument("--cache-dir", default=_env("CACHE_DIR", None), help="directory for cached enumerations")
    common.add_argument("--jobs", type=int, default=_env("JOBS", 1, int), help="worker threads")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="multikat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"multikat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="schema and axiom check of an input document")
    p.add_argument("path")

    p = sub.add_parser("ktheory", parents=[common], help="compute J(M) and its homotopy verdicts")
    p.add_argument("path")
    p.add_argument("--timing", action="store_true", help="add wall-clock timings (makes reports run-dependent)")

    p = sub.add_parser("check-lemmas", parents=[common], help="run the structural lemma checks")
    p.add_argument("paths", nargs="*")
    p.add_argument("--all-builtins", action="store_true")
    return parser


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    tmp = path.with_name(f".{path.name}.tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


# ------------------------------------------------------------------ validate


def cmd_validate(args) -> int:
    loaded = load(args.path, args.arity_cap)
    report = validate_multicategory(loaded.multicategory)
    doc = {"input": {"name": loaded.name, "type": loaded.kind, "digest": digest(loaded.document)}, **report.to_dict()}
    if args.out:
        _emit(doc, args.out)
    if report.ok:
        print(f"{args.path}: valid ({loaded.kind} {loaded.name}, arity cap {loaded.multicategory.arity_cap})")
        return EXIT_OK
    for line in report.structural:
        print(f"structural: {line}")
    for line in report.violations:
        print(f"violation: {line}")
    print(f"{args.path}: invalid ({len(report.structural)} structural, {len(report.violations)} violations)")
    return EXIT_INVALID


# ------------------------------------------------------------------ ktheory


def _levels(M, L: int, budget, jobs: int, cache: ResultCache | None, input_digest: str) -> dict[int, HomCategory]:
    cap = M.arity_cap

    def key(n: int) -> str:
        return ResultCache.key("level", input_digest, {"source": "E^n", "n": n, "arity_cap": cap}, cap)

    def build(n: int) -> tuple[HomCategory, bool]:
        S = power_E(n, cap)
        if cache is not None:
            data = cache.get(key(n))
            if data is not None:
                try:
                    return decode_level(S, M, data, budget), True
                except (KeyError, IndexError, TypeError, ValueError) as exc:
                    log.warning("cache entry for level %d is unusable (%s); recomputing", n, exc)
        try:
            H = HomCategory(S, M, budget)
            # force every hom-set so counts and cache entries are complete
            H.arrow_count()
        except BudgetExceeded as exc:
            raise BudgetExceeded(f"level {n}: {exc}") from exc
        return H, False

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            built = list(pool.map(build, range(L + 1)))
    else:
        built = [build(n) for n in range(L + 1)]
    if cache is not None:
        for n, (H, hit) in enumerate(built):
            if not hit:
                cache.put(key(n), encode_level(H))
    return {n: H for n, (H, _) in enumerate(built)}


def ktheory_report(loaded, *, levels: int, budget, jobs: int = 1, cache: ResultCache | None = None,
                   timing: bool = False, gamma: GammaObject | None = None) -> dict:
    """The report document; ``gamma`` may supply already computed levels ``0..levels``."""
    M = loaded.multicategory
    if M.arity_cap < levels + 1:
        raise InputError(f"levels up to {levels} need arity cap at least {levels + 1}")
    clock = {"start": time.perf_counter()}
    input_digest = digest(loaded.document)
    if gamma is None:
        X = GammaObject(M, _levels(M, levels, budget, jobs, cache, input_digest))
    else:
        X = GammaObject(M, {n: gamma.level(n) for n in range(levels + 1)})
    clock["levels"] = time.perf_counter()
    counts = [{"level": n, "objects": len(C.objects), "arrows": C.arrow_count()} for n, C in sorted(X.levels.items())]
    errors = check_gamma_functoriality(X, bound=min(levels, 3), arrow_limit=FUNCTORIALITY_ARROW_LIMIT)
    arrow_levels = [c["level"] for c in counts if c["arrows"] <= FUNCTORIALITY_ARROW_LIMIT and c["level"] <= 3]
    clock["functoriality"] = time.perf_counter()
    verdict = very_special_verdict(X, counts=counts)
    tensor = extract_binary_tensor(X, verdict.segal[2]) if levels >= 2 else None
    clock["verdicts"] = time.perf_counter()
    doc = {
        "report_version": REPORT_VERSION,
        "tool": f"multikat {__version__}",
        "input": {"name": loaded.name, "type": loaded.kind, "digest": input_digest},
        "config": {"arity_cap": M.arity_cap, "levels": levels, "budget": budget},
        "functoriality": {"ok": not errors, "errors": errors[:20], "arrows_checked_at_levels": arrow_levels},
        **verdict.to_dict(X),
        "tensor": tensor.to_dict() if tensor is not None else None,
    }
    doc["digest"] = digest(doc)
    if timing:
        marks = list(clock.items())
        doc["timing"] = {name: round(t - marks[i][1], 3) for i, (name, t) in enumerate(marks[1:])}
    return doc


def cmd_ktheory(args) -> int:
    loaded = load(args.path, args.arity_cap)
    cache = ResultCache(args.cache_dir) if args.cache_dir else None
    doc = ktheory_report(loaded, levels=args.levels, budget=args.budget, jobs=args.jobs, cache=cache, timing=args.timing)
    _emit(doc, args.out)
    if args.out:
        print(f"{args.path}: special={doc['special']} very_special={doc['very_special']} -> {args.out}", file=sys.stderr)
    return EXIT_OK


# ------------------------------------------------------------------ check-lemmas


def builtin_inputs(arity_cap: int) -> list[tuple[str, object]]:
    out = []
    for name in BUILTINS:
        if name == "E^n":
            out.append(("E^2", builtin(name, arity_cap, 2)))
        else:
            out.append((name, builtin(name, arity_cap)))
    return out


def cmd_check_lemmas(args) -> int:
    cap = args.arity_cap or DEFAULT_ARITY_CAP
    inputs: list[tuple[str, object]] = []
    if args.all_builtins:
        inputs.extend(builtin_inputs(cap))
    for path in args.paths:
        loaded = load(path, args.arity_cap)
        inputs.append((loaded.name, loaded.multicategory))
    if not inputs:
        raise InputError("give input files or --all-builtins")

    def rows_for(item):
        name, M = item
        return lemma_rows(name, M, levels=args.levels, budget=args.budget)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            groups = list(pool.map(rows_for, inputs))
    else:
        groups = [rows_for(item) for item in inputs]
    rows = [r for g in groups for r in g] + global_rows(3)
    width = max(len(r.input) for r in rows)
    for r in rows:
        print(f"{r.input:<{width}}  {r.lemma:<18} {r.status:<4}  {r.detail}")
    if args.out:
        _emit({"rows": [r.to_dict() for r in rows]}, args.out)
    statuses = {r.status for r in rows}
    if statuses == {PASS}:
        return EXIT_OK
    return EXIT_INVALID if FAIL in statuses else EXIT_RESOURCE


COMMANDS = {"validate": cmd_validate, "ktheory": cmd_ktheory, "check-lemmas": cmd_check_lemmas}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UnreadableInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InputError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except Exception as exc:  # noqa: BLE001 - anything else is a broken invariant
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
