"""Command-line front end.

    drinfeld count --d 2 --q 2 --m 2..4
    drinfeld verify lemma-aa --d 3 --q 2 --i 2
    drinfeld verify all --quick
    drinfeld enumerate dl --d 2 --q 2 --m 2
    drinfeld orbits --group U_I --i 1 --d 3 --q 2 --m 3

Data goes to stdout, logs to stderr.  Exit codes: 0 success, 1 a check
failed, 2 a budget was exceeded, 3 bad usage.

Points are printed as their integer encodings: an element of F_{p^n} with
coordinates c_0 + c_1 t + ... over the defining modulus is sum c_k p^k.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .counting import (
    component_classes,
    count_row,
    fiber_statistics,
    omega_count_closed,
    rows_to_csv,
    rows_to_json,
)
from .errors import BudgetExceeded, CheckFailed
from .fields import DEFAULT_FIELD_BUDGET, prime_power
from .geometry import (
    DEFAULT_POINT_BUDGET,
    DEFAULT_SYMBOLIC_CAP,
    VarietyCtx,
    enumerate_dl,
    enumerate_omega,
    factorization_check,
    iter_omega,
    projective_count,
)
from .groups import (
    DEFAULT_GROUP_BUDGET,
    SimpleRootSubset,
    elementary_generators,
    enumerate_subgroup,
    orbit_labels,
)
from .quotients import compactified_check, lemma_aa_certify, quotient_laws, roundtrip_check

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3

SUITES = ("lemma-aa", "factorization", "quotient", "compactified-quotient", "covering", "roundtrip")
GROUPS = ("U", "U_I", "V_I", "B", "P_I")

# determinant classes need three Moore evaluations per DL point
CLASS_LIMIT = 2_000_000

log = logging.getLogger("drinfeld")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def int_list(text: str) -> list[int]:
    """"5", "2..4" or "2,3,7"."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if lo > hi:
                raise argparse.ArgumentTypeError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer or range: {text!r}") from None


def coeff_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"modulus must be comma-separated integers: {text!r}") from None


@dataclass
class RunConfig:
    command: str
    target: str | None
    ds: list[int] | None
    qs: list[int] | None
    ms: list[int] | None
    i: list[int] | None
    fmt: str
    budget: int
    field_budget: int
    group_budget: int
    jobs: int
    modulus: tuple[int, ...] | None
    quick: bool

    def validate(self) -> None:
        for q in self.qs or ():
            try:
                prime_power(q)
            except ValueError:
                raise UsageError(f"q = {q} is not a prime power") from None
        if any(d < 1 for d in self.ds or ()):
            raise UsageError("d must be >= 1")
        if any(m < 1 for m in self.ms or ()):
            raise UsageError("m must be >= 1")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if self.modulus is not None:
            if not (self.qs and len(self.qs) == 1 and self.ms and len(self.ms) == 1):
                raise UsageError("--modulus needs a single --q and a single --m")
            p, f = prime_power(self.qs[0])
            if len(self.modulus) != f * self.ms[0] + 1:
                raise UsageError(f"--modulus must have {f * self.ms[0] + 1} coefficients (constant term first)")


# ---------------------------------------------------------------------------
# grids

def _m_default(suite: str, d: int, q: int, quick: bool) -> list[int]:
    if quick:
        return list(range(max(d, 2), 5))
    if suite in ("quotient", "compactified-quotient"):
        return [d, d + 1, 2 * d]
    # largest m with |P^{d-1}(F_{q^m})| within the default point budget
    out, m = [], 1
    while q**m <= DEFAULT_FIELD_BUDGET and projective_count(q**m, d) <= DEFAULT_POINT_BUDGET:
        out.append(m)
        m += 1
    if suite == "roundtrip":
        out = [m for m in out if m >= d]
    return out


def _symbolic_cases(cfg: RunConfig, suite: str) -> list[tuple[int, int, int]]:
    if cfg.ds or cfg.qs:
        pairs = [(d, q) for d in (cfg.ds or [3]) for q in (cfg.qs or [2])]
    elif cfg.quick or suite == "lemma-aa":
        pairs = [(3, 2), (3, 3), (4, 2)]
    else:
        pairs = [(d, q) for d in (2, 3) for q in (2, 3)] + [(4, 2)]
    return [(d, q, i) for d, q in pairs for i in range(1, d) if cfg.i is None or i in cfg.i]


def _point_cases(cfg: RunConfig, suite: str) -> list[tuple[int, int, int]]:
    """(d, q, m) cases; default grids drop cases outside the point budget."""
    if cfg.ds:
        ds = cfg.ds
    elif cfg.quick:
        ds = [2, 3]
    elif suite in ("quotient", "compactified-quotient"):
        ds = [2, 3, 4]
    else:
        ds = [1, 2, 3, 4]
    qs = cfg.qs or ([2, 3] if cfg.quick or suite in ("quotient", "compactified-quotient") else [2, 3, 4])
    out = []
    for d in ds:
        for q in qs:
            if suite == "compactified-quotient" and not cfg.ds and q**d > DEFAULT_SYMBOLIC_CAP:
                continue
            if cfg.ms:
                out.extend((d, q, m) for m in cfg.ms)
                continue
            for m in _m_default(suite, d, q, cfg.quick):
                if q**m <= cfg.field_budget and projective_count(q**m, d) <= cfg.budget:
                    out.append((d, q, m))
                else:
                    log.info("skipping d=%d q=%d m=%d: over budget", d, q, m)
    return out


# ---------------------------------------------------------------------------
# suite tasks (module level so worker processes can pickle them)

def _ctx(d, q, m, cfg_budget, field_budget, modulus):
    return VarietyCtx(d, q, m, point_budget=cfg_budget, field_budget=field_budget, modulus=modulus)


def _task_lemma(d, q, i, **_):
    c = lemma_aa_certify(d, q, i)
    return c.ok, c.lines()


def _task_factorization(d, q, i, **_):
    r = factorization_check(d, q, i)
    return r.ok, r.lines()


def _task_quotient(d, q, m, i, budget, field_budget, modulus):
    ctx = _ctx(d, q, m, budget, field_budget, modulus)
    om = enumerate_omega(ctx)
    ok, lines = True, []
    for k in ([*range(1, d), None] if i is None else i):
        if k is not None and not 1 <= k < d:
            continue
        r = quotient_laws(ctx, k, om)
        ok &= r.ok
        lines += r.lines()
    return ok, lines


def _task_compactified(d, q, m, i, budget, field_budget, modulus):
    ctx = _ctx(d, q, m, budget, field_budget, modulus)
    om = enumerate_omega(ctx)
    ok, lines = True, []
    for k in (range(1, d) if i is None else i):
        if not 1 <= k < d:
            continue
        r = compactified_check(ctx, k, omega=om)
        ok &= r.ok
        lines += r.lines()
    return ok, lines


def _task_covering(d, q, m, budget, field_budget, modulus, **_):
    f = fiber_statistics(d, q, m, budget, modulus=modulus)
    closed = omega_count_closed(d, q, m)
    ok = f.ok and f.omega == closed
    lines = [f"check=covering.omega-count d={d} q={q} m={m} enum={f.omega} closed={closed} "
             f"{'PASS' if f.omega == closed else 'FAIL'}"] + f.lines()
    if d == 2 and q == 2 and m == 2:
        good = f.dl == 6 and f.omega == 2
        ok &= good
        lines.append(f"check=covering.totals d=2 q=2 m=2 dl={f.dl} omega={f.omega} {'PASS' if good else 'FAIL'}")
    if f.dl <= CLASS_LIMIT:
        c = component_classes(d, q, m, budget, modulus=modulus)
        ok &= c.ok
        lines += c.lines()
        if (d, q, m) == (2, 3, 2):
            good = len(c.classes) == 2 and len(set(c.classes.values())) == 1
            ok &= good
            lines.append(f"check=classes.two-equal d=2 q=3 m=2 {'PASS' if good else 'FAIL'}")
    else:
        lines.append(f"stat=classes.skipped d={d} q={q} m={m} dl={f.dl} limit={CLASS_LIMIT}")
    return ok, lines


def _task_roundtrip(d, q, m, budget, field_budget, modulus, **_):
    ctx = _ctx(d, q, m, budget, field_budget, modulus)
    checks: dict[str, bool] = {}
    n = 0
    for X in iter_omega(ctx, budget):
        r = roundtrip_check(ctx, X)
        n += X.shape[0]
        for k, v in r.checks.items():
            checks[k] = checks.get(k, True) and v
    if not checks:
        checks = {"v-nonzero": True, "unitriangular": True, "recursion": True, "identity": True,
                  "image-in-omega": True}
    lines = [f"check=roundtrip.{k} d={d} q={q} m={m} {'PASS' if v else 'FAIL'}" for k, v in checks.items()]
    lines.append(f"stat=roundtrip d={d} q={q} m={m} points={n}")
    return all(checks.values()), lines


_TASKS: dict[str, Callable] = {
    "lemma-aa": _task_lemma,
    "factorization": _task_factorization,
    "quotient": _task_quotient,
    "compactified-quotient": _task_compactified,
    "covering": _task_covering,
    "roundtrip": _task_roundtrip,
}


def _call(job):
    name, kwargs = job
    return _TASKS[name](**kwargs)


def _jobs_for(cfg: RunConfig, suite: str) -> list[tuple[str, dict]]:
    if suite in ("lemma-aa", "factorization"):
        return [(suite, {"d": d, "q": q, "i": i}) for d, q, i in _symbolic_cases(cfg, suite)]
    common = {"budget": cfg.budget, "field_budget": cfg.field_budget, "modulus": cfg.modulus}
    return [(suite, {"d": d, "q": q, "m": m, "i": cfg.i, **common}) for d, q, m in _point_cases(cfg, suite)]


def _run(jobs: Sequence[tuple[str, dict]], n_workers: int) -> list[tuple[bool, list[str]]]:
    if n_workers == 1 or len(jobs) <= 1:
        return [_call(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(_call, jobs))


# ---------------------------------------------------------------------------
# output helpers

def _line_record(line: str) -> dict:
    head, *rest = line.split()
    kind, name = head.split("=", 1)
    rec: dict = {kind: name}
    for tok in rest:
        if "=" in tok:
            k, v = tok.split("=", 1)
            rec[k] = v
        else:
            rec["result"] = tok
    return rec


def _emit_lines(lines: Iterable[str], fmt: str, out) -> None:
    lines = list(lines)
    if fmt == "json":
        out.write(json.dumps([_line_record(l) for l in lines], indent=2) + "\n")
    else:
        out.write("".join(l + "\n" for l in lines))


def _emit_points(pts, fmt: str, out, label: Sequence[int] | None = None) -> None:
    d = pts.shape[1]
    if fmt == "json":
        if label is None:
            out.write(json.dumps(pts.tolist()) + "\n")
        else:
            groups: list[list] = [[] for _ in range(int(label.max()) + 1 if len(label) else 0)]
            for k, row in zip(label, pts.tolist()):
                groups[int(k)].append(row)
            out.write(json.dumps(groups) + "\n")
        return
    head = ([] if label is None else ["orbit"]) + [f"x{k}" for k in range(d)]
    out.write(",".join(head) + "\n")
    order = range(pts.shape[0]) if label is None else sorted(range(pts.shape[0]), key=lambda r: (label[r], r))
    for r in order:
        row = [str(int(x)) for x in pts[r]]
        if label is not None:
            row.insert(0, str(int(label[r])))
        out.write(",".join(row) + "\n")


# ---------------------------------------------------------------------------
# commands

def _single(cfg: RunConfig, name: str) -> tuple[int, int, int]:
    vals = []
    for flag, v in (("--d", cfg.ds), ("--q", cfg.qs), ("--m", cfg.ms)):
        if not v or len(v) != 1:
            raise UsageError(f"{name} needs a single value for {flag}")
        vals.append(v[0])
    return tuple(vals)


def cmd_count(cfg: RunConfig, out) -> int:
    if not (cfg.ds and cfg.qs and cfg.ms):
        raise UsageError("count needs --d, --q and --m")
    cases = [(d, q, m) for d in cfg.ds for q in cfg.qs for m in cfg.ms]
    jobs = [(d, q, m, cfg.budget, cfg.modulus) for d, q, m in cases]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_count_one, jobs))
    else:
        rows = [_count_one(j) for j in jobs]
    out.write(rows_to_json(rows) if cfg.fmt == "json" else rows_to_csv(rows))
    return EXIT_OK if all(r.ok for r in rows) else EXIT_FAIL


def _count_one(job):
    d, q, m, budget, modulus = job
    return count_row(d, q, m, budget, modulus=modulus)


def cmd_verify(cfg: RunConfig, out) -> int:
    suites = SUITES if cfg.target == "all" else (cfg.target,)
    jobs = [j for s in suites for j in _jobs_for(cfg, s)]
    log.info("verify: %d parameter sets", len(jobs))
    results = _run(jobs, cfg.jobs)
    _emit_lines((l for _, lines in results for l in lines), cfg.fmt, out)
    return EXIT_OK if all(ok for ok, _ in results) else EXIT_FAIL


def cmd_enumerate(cfg: RunConfig, out) -> int:
    d, q, m = _single(cfg, "enumerate")
    ctx = VarietyCtx(d, q, m, point_budget=cfg.budget, field_budget=cfg.field_budget, modulus=cfg.modulus)
    pts = enumerate_omega(ctx) if cfg.target == "omega" else enumerate_dl(ctx, budget=cfg.budget)
    _emit_points(pts, cfg.fmt, out)
    return EXIT_OK


def cmd_orbits(cfg: RunConfig, out) -> int:
    d, q, m = _single(cfg, "orbits")
    kind = cfg.target
    I = None
    if kind in ("U_I", "V_I", "P_I"):
        if not cfg.i or len(cfg.i) != 1 or not 1 <= cfg.i[0] < d:
            raise UsageError(f"--group {kind} needs a single --i in 1..{d - 1}")
        I = SimpleRootSubset.all_but(d, cfg.i[0])
    ctx = VarietyCtx(d, q, m, point_budget=cfg.budget, field_budget=cfg.field_budget, modulus=cfg.modulus)
    pts = enumerate_omega(ctx)
    if kind in ("U", "U_I", "V_I"):
        gens = elementary_generators(kind, d, q, I)
    else:
        gens = enumerate_subgroup(kind, d, q, I, budget=cfg.group_budget)
    labels, n = orbit_labels(pts, gens, ctx.big)
    log.info("%d points in %d orbits", pts.shape[0], n)
    _emit_points(pts, cfg.fmt, out, label=labels)
    return EXIT_OK


_COMMANDS = {"count": cmd_count, "verify": cmd_verify, "enumerate": cmd_enumerate, "orbits": cmd_orbits}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--d", type=int_list, help="rank, e.g. 3 or 2..4")
    common.add_argument("--q", type=int_list, help="base field size (prime power)")
    common.add_argument("--m", type=int_list, help="extension degree, e.g. 2..6")
    common.add_argument("--i", type=int_list, help="stratum index (maximal parabolic missing alpha_i)")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("--budget", type=int, default=DEFAULT_POINT_BUDGET,
                        help="max points of P^(d-1) to enumerate (default %(default)s)")
    common.add_argument("--field-budget", type=int, default=DEFAULT_FIELD_BUDGET)
    common.add_argument("--group-budget", type=int, default=DEFAULT_GROUP_BUDGET)
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--modulus", type=coeff_list,
                        help="defining polynomial of F_{q^m} over F_p, constant term first")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="drinfeld", description="Drinfeld space and its Deligne-Lusztig cover over finite fields")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("count", parents=[common], help="point counts of Ω and DL")
    v = sub.add_parser("verify", parents=[common], help="run a check suite")
    v.add_argument("target", metavar="suite", choices=SUITES + ("all",))
    v.add_argument("--quick", action="store_true", help="small default grid")
    e = sub.add_parser("enumerate", parents=[common], help="list rational points")
    e.add_argument("target", choices=("omega", "dl"))
    o = sub.add_parser("orbits", parents=[common], help="orbit partition of Ω")
    o.add_argument("--group", dest="target", choices=GROUPS, required=True)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    cfg = RunConfig(args.command, getattr(args, "target", None), args.d, args.q, args.m, args.i, args.fmt,
                    args.budget, args.field_budget, args.group_budget, args.jobs, args.modulus,
                    getattr(args, "quick", False))
    try:
        cfg.validate()
        return _COMMANDS[cfg.command](cfg, out)
    except UsageError as exc:
        print(f"drinfeld: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"drinfeld: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CheckFailed as exc:
        print(f"drinfeld: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        # bad modulus, out-of-range stratum and the like
        print(f"drinfeld: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
