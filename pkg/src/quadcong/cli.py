"""Experiment harness: deterministic CSV reports over the library.

Subcommands
-----------
solve         run the congruence solver over sampled forms per modulus
oracle        exhaustive minimal zero / square-value scans per modulus
weil-scan     shifted product sums vs their bounds over a prime range
grid-vanish   complete-grid character sums of nonsingular binary forms
exponent-fit  growth exponents of solver output norms (and the rank-2 family)
cop-count     coprime counts of the restriction determinant vs prediction
second-moment shift-parameter pair counts and their second moment

Configuration comes from an optional key=value file plus command-line
overrides.  Identical configuration produces byte-identical CSV, including
under --jobs > 1: tasks are scheduled per modulus and merged in a canonical
order independent of the pool schedule.

Exit codes: 0 all checks pass, 1 a hard per-row check failed (the row is
named on stderr), 2 configuration errors.
"""

import argparse
import hashlib
import math
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd, isqrt

from .charsum import (
    diff_products,
    form_shift_sum,
    full_grid_sum,
    minimal_lift,
    second_moment,
    shift_pair_counts,
    shifted_sum_bound,
    splits_mod,
)
from .errors import FitError, InvalidModulus, QuadCongError
from .modmath import Modulus, find_nonresidue, is_prime, make_modulus
from .oracle import oracle_scan, rank_two_family_min, restriction_coprime_count, sample_forms
from .qforms import BinaryForm
from .solver import solve_ternary

DEFAULTS = {
    "solve": {"qs": (15, 105, 1155), "samples": 3},
    "oracle": {"qs": (15, 105, 385), "samples": 3},
    "weil-scan": {"q_range": (3, 101), "samples": 10},
    "grid-vanish": {"qs": (15, 21, 35), "samples": 5},
    "exponent-fit": {"q_range": (1001, 100003), "samples": 25},
    "cop-count": {"qs": (15, 105), "samples": 12},
    "second-moment": {"qs": (15, 21, 35), "samples": 1},
}

COMMANDS = tuple(sorted(DEFAULTS))


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    qs: tuple = ()
    q_range: tuple = ()
    samples: int = 0
    seed: str = "0"
    budget: int = 10**8
    out: str = "-"
    jobs: int = 1


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual: float


def fit_exponent(rows) -> FitResult:
    """Least squares of log(value) against log(q); closed form, deterministic.

    Needs at least three distinct q and positive values throughout.
    """
    qs = [q for q, _ in rows]
    if len(set(qs)) < 3:
        raise FitError("need at least 3 distinct moduli")
    if any(v <= 0 or q <= 0 for q, v in rows):
        raise FitError("values and moduli must be positive")
    xs = [math.log(q) for q, _ in rows]
    ys = [math.log(v) for _, v in rows]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    if sxx == 0:
        raise FitError("degenerate abscissae")
    slope = sxy / sxx
    intercept = my - slope * mx
    residual = math.sqrt(sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys)))
    return FitResult(slope=slope, intercept=intercept, residual=residual)


def _hash_ints(vals) -> str:
    return hashlib.sha1(" ".join(str(v) for v in vals).encode()).hexdigest()[:12]


def nearest_odd_squarefree(n: int) -> int:
    """The valid modulus closest to n (ties toward smaller)."""
    n = max(n, 3)
    for d in range(0, 2 * n):
        for cand in (n - d, n + d):
            if cand < 3:
                continue
            try:
                make_modulus(cand)
                return cand
            except QuadCongError:
                continue
    raise ValueError("unreachable")


def _next_prime(n: int) -> int:
    c = max(n, 3)
    if c % 2 == 0:
        c += 1
    while not is_prime(c):
        c += 2
    return c


def _log_spaced(lo: int, hi: int, count: int):
    if count <= 1:
        return [lo]
    out = []
    for i in range(count):
        out.append(round(math.exp(math.log(lo) + (math.log(hi) - math.log(lo)) * i / (count - 1))))
    return out


def sample_binary_forms(mod: Modulus, count: int, seed) -> list:
    """Nonsingular binary forms mod q, coefficients uniform, reproducible."""
    rng = random.Random(f"{seed}:binary:{mod.q}")
    out = []
    while len(out) < count:
        f = BinaryForm(rng.randrange(mod.q), rng.randrange(mod.q), rng.randrange(mod.q))
        if gcd(f.det4(), mod.q) == 1:
            out.append(f)
    return out


# ------------------------------------------------------------------- workers
# one task per modulus (or prime); module level so the process pool can
# pickle them.  Each returns (rows, ok) with rows already in canonical order.


def _task_solve(args):
    q, samples, seed, budget = args
    mod = make_modulus(q)
    forms = sorted(sample_forms(mod, samples, seed), key=lambda f: _hash_ints(f.coeffs()))
    rows, ok = [], True
    for form in forms:
        try:
            tr = solve_ternary(form, mod)
            row_ok = form.evaluate(tr.solution) % q == 0 and tr.chain_ok()
        except QuadCongError:
            row_ok = False
            tr = None
        ok &= row_ok
        sol = tr.solution if tr else (0, 0, 0)
        rows.append(
            (q,)
            + form.coeffs()
            + (
                tr.witness_norm_sq() if tr else -1,
                tr.solution_norm_sq() if tr else -1,
                sol[0],
                sol[1],
                sol[2],
                int(row_ok),
            )
        )
    return rows, ok


def _task_oracle(args):
    q, samples, seed, budget = args
    mod = make_modulus(q)
    rows, ok = [], True
    scanned = oracle_scan(mod, samples, seed, budget=budget)
    for rec in sorted(scanned, key=lambda r: _hash_ints(r.form.coeffs())):
        row_ok = (
            rec.form.evaluate(rec.min_zero.witness) % q == 0
            and rec.min_square.norm_sq <= rec.min_zero.norm_sq
        )
        ok &= row_ok
        rows.append(
            (q,)
            + rec.form.coeffs()
            + (
                rec.min_zero.norm_sq,
                rec.min_square.norm_sq,
                rec.min_zero.witness[0],
                rec.min_zero.witness[1],
                rec.min_zero.witness[2],
                int(row_ok),
            )
        )
    return rows, ok


def _task_weil(args):
    p, samples, seed, budget = args
    rows, ok = [], True
    split_qt = BinaryForm(1, 1, 0)  # disc 1: factors over every F_p
    inert_qt = BinaryForm(1, 0, -find_nonresidue(p))
    assert splits_mod(split_qt, p) and not splits_mod(inert_qt, p)
    for r in (2, 3):
        for qt in (split_qt, inert_qt):
            rng = random.Random(f"{seed}:weil:{p}:{r}:{qt.row()}")
            for _ in range(samples):
                ns = tuple(rng.randrange(1, 2 * p + 1) for _ in range(2 * r))
                dp = diff_products(ns)
                val = form_shift_sum(p, ns, qt, check=True)
                bound = shifted_sum_bound(p, r, dp.overall_gcd)
                if dp.overall_gcd != 0 and dp.overall_gcd % p != 0:
                    # sharper conditional bounds apply off the degenerate set
                    bound = min(bound, 4 * r * r * p if splits_mod(qt, p) else 2 * r * p)
                row_ok = abs(val) <= bound
                ok &= row_ok
                rows.append(
                    (p, p, r, _hash_ints(ns), dp.overall_gcd, val, bound, int(row_ok))
                )
    return rows, ok


def _task_grid_vanish(args):
    q, samples, seed, budget = args
    mod = make_modulus(q)
    rows, ok = [], True
    for f in sorted(sample_binary_forms(mod, samples, seed), key=lambda f: _hash_ints((f.a, f.b, f.c))):
        val = full_grid_sum(f, mod)
        row_ok = val == 0
        ok &= row_ok
        rows.append((q, f.a, f.b, f.c, val, int(row_ok)))
    return rows, ok


def _task_cop_count(args):
    q, box, seed, budget = args
    mod = make_modulus(q)
    form = sample_forms(mod, 1, f"{seed}:cop")[0]
    res = restriction_coprime_count(form, mod, box, budget=budget)
    gap = float(res.relative_gap())
    rows = [
        (
            q,
            box,
            res.count,
            f"{res.prediction.numerator}/{res.prediction.denominator}",
            f"{gap:.6f}",
        )
    ]
    return rows, True


def _task_second_moment(args):
    q, samples, seed, budget = args
    mod = make_modulus(q)
    rows, ok = [], True
    for form in sample_binary_forms(mod, samples, seed):
        lift = minimal_lift(form.a, form.b, form.c, mod).form
        radius_sq = 4 * isqrt(q) ** 2
        shift_bound = max(2, isqrt(isqrt(q)) + 1)
        counts = shift_pair_counts(form, lift, mod, (0, 0), radius_sq, shift_bound)
        total = int(counts.sum()) if not isinstance(counts, dict) else sum(counts.values())
        moment = second_moment(counts)
        row_ok = moment >= 0 and total >= 0
        ok &= row_ok
        rows.append((q, form.a, form.b, form.c, radius_sq, shift_bound, total, moment, int(row_ok)))
    return rows, ok


# ----------------------------------------------------------------- commands


def _expand_moduli(cfg: ExperimentConfig):
    if cfg.qs:
        for q in cfg.qs:
            make_modulus(q)  # invalid explicit moduli are a configuration error
        return list(cfg.qs)
    if not cfg.q_range:
        return []
    lo, hi = cfg.q_range
    return [q for q in range(lo | 1, hi + 1, 2) if not _invalid_q(q)]


def _invalid_q(q: int) -> bool:
    try:
        make_modulus(q)
        return False
    except QuadCongError:
        return True


def _expand_primes(cfg: ExperimentConfig):
    if cfg.qs:
        bad = [p for p in cfg.qs if p < 3 or not is_prime(p)]
        if bad:
            raise ValueError(f"weil-scan moduli must be odd primes, got {bad}")
        return list(cfg.qs)
    if not cfg.q_range:
        return []
    lo, hi = cfg.q_range
    return [p for p in range(max(lo, 3) | 1, hi + 1, 2) if is_prime(p)]


def _run_tasks(task_fn, arglist, jobs):
    if jobs > 1 and len(arglist) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(task_fn, arglist))
    else:
        results = [task_fn(a) for a in arglist]
    rows, ok = [], True
    for r, o in results:
        rows.extend(r)
        ok &= o
    return rows, ok


def _cmd_solve(cfg):
    tasks = [(q, cfg.samples, cfg.seed, cfg.budget) for q in sorted(set(_expand_moduli(cfg)))]
    rows, ok = _run_tasks(_task_solve, tasks, cfg.jobs)
    cols = ["q", "f11", "f22", "f33", "f12", "f13", "f23", "witness_norm_sq", "solution_norm_sq", "x1", "x2", "x3", "ok"]
    head = ["norms are squared euclidean; ok = solution nonzero, divisible, chain bound holds"]
    return head, cols, rows, ok


def _cmd_oracle(cfg):
    tasks = [(q, cfg.samples, cfg.seed, cfg.budget) for q in sorted(set(_expand_moduli(cfg)))]
    rows, ok = _run_tasks(_task_oracle, tasks, cfg.jobs)
    cols = ["q", "f11", "f22", "f33", "f12", "f13", "f23", "min_zero_norm_sq", "min_square_norm_sq", "w1", "w2", "w3", "ok"]
    head = ["exhaustive scans; min_* are squared norms; witness columns give the minimal zero"]
    return head, cols, rows, ok


def _cmd_weil(cfg):
    tasks = [(p, cfg.samples, cfg.seed, cfg.budget) for p in _expand_primes(cfg)]
    rows, ok = _run_tasks(_task_weil, tasks, cfg.jobs)
    cols = ["q", "p", "r", "tuple-hash", "delta-gcd", "sum", "bound", "ok"]
    head = [
        "shifted complete product sums at prime moduli, dual-route checked",
        "bound: 4r^2 p gcd(p,delta) unconditionally, 4r^2 p (split) / 2rp (inert) off the degenerate set",
    ]
    return head, cols, rows, ok


def _cmd_grid_vanish(cfg):
    tasks = [(q, cfg.samples, cfg.seed, cfg.budget) for q in sorted(set(_expand_moduli(cfg)))]
    rows, ok = _run_tasks(_task_grid_vanish, tasks, cfg.jobs)
    cols = ["q", "a", "b", "c", "sum", "ok"]
    head = ["complete q x q grid character sums of nonsingular binary forms; must vanish"]
    return head, cols, rows, ok


def _cmd_exponent_fit(cfg):
    if cfg.qs:
        for q in cfg.qs:
            make_modulus(q)
        qs = cfg.qs
        lo, hi = min(qs), max(qs)
    elif cfg.q_range:
        lo, hi = cfg.q_range
        qs = tuple(nearest_odd_squarefree(t) for t in _log_spaced(lo, hi, cfg.samples))
    else:
        qs, lo, hi = (), 3, 3
    rows = []
    pipeline_pts = []
    for q in sorted(set(qs)):
        mod = make_modulus(q)
        form = sample_forms(mod, 1, f"{cfg.seed}:fit:{q}")[0]
        tr = solve_ternary(form, mod)
        val = math.sqrt(tr.solution_norm_sq())
        pipeline_pts.append((q, val))
        rows.append(("pipeline", q, f"{val:.6f}"))
    family_pts = []
    fam_lo, fam_hi = max(lo, 101), min(hi, 1800)
    fam_targets = _log_spaced(fam_lo, fam_hi, min(cfg.samples, 12)) if qs and fam_lo <= fam_hi else []
    for t in fam_targets:
        p = _next_prime(t)
        a = find_nonresidue(p)
        b = max(1, round(p ** (1 / 3)))
        res = rank_two_family_min(a, b, make_modulus(p), budget=cfg.budget)
        val = math.sqrt(res.norm_sq)
        family_pts.append((p, val))
        rows.append(("rank2-family", p, f"{val:.6f}"))
    head = ["series, modulus, norm of the found solution (euclidean)"]
    for name, pts in (("pipeline", pipeline_pts), ("rank2-family", sorted(set(family_pts)))):
        if len({q for q, _ in pts}) >= 3:
            fit = fit_exponent(pts)
            head.append(f"fit {name}: slope={fit.slope:.6f} intercept={fit.intercept:.6f} residual={fit.residual:.6f}")
    cols = ["series", "q", "value"]
    return head, cols, rows, True


def _cmd_cop_count(cfg):
    box = cfg.samples  # interpreted as the box edge for this command
    tasks = [(q, box, cfg.seed, cfg.budget) for q in sorted(set(_expand_moduli(cfg)))]
    rows, ok = _run_tasks(_task_cop_count, tasks, cfg.jobs)
    cols = ["q", "box", "count", "prediction", "relative_gap"]
    head = ["coprime counts of the 6-variable restriction determinant vs the per-prime product prediction"]
    return head, cols, rows, ok


def _cmd_second_moment(cfg):
    tasks = [(q, cfg.samples, cfg.seed, cfg.budget) for q in sorted(set(_expand_moduli(cfg)))]
    rows, ok = _run_tasks(_task_second_moment, tasks, cfg.jobs)
    cols = ["q", "a", "b", "c", "radius_sq", "shift_bound", "pairs", "second_moment", "ok"]
    head = ["shift-parameter collision counts over a disc of squared radius radius_sq"]
    return head, cols, rows, ok


RUNNERS = {
    "solve": _cmd_solve,
    "oracle": _cmd_oracle,
    "weil-scan": _cmd_weil,
    "grid-vanish": _cmd_grid_vanish,
    "exponent-fit": _cmd_exponent_fit,
    "cop-count": _cmd_cop_count,
    "second-moment": _cmd_second_moment,
}


# ------------------------------------------------------------- config plumbing


def parse_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key not in {"command", "q", "q_range", "samples", "seed", "budget", "out", "jobs"}:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = val
    return out


def _parse_int_list(text: str):
    return tuple(int(t) for t in text.replace(",", " ").split())


def _parse_range(text: str):
    parts = text.replace(":", " ").replace(",", " ").split()
    if len(parts) != 2:
        raise ValueError(f"expected lo:hi, got {text!r}")
    lo, hi = int(parts[0]), int(parts[1])
    if lo > hi:
        raise ValueError(f"empty range {text!r}")
    return lo, hi


def build_config(argv) -> ExperimentConfig:
    ap = argparse.ArgumentParser(prog="quadcong", description=__doc__.splitlines()[0])
    ap.add_argument("command", nargs="?", choices=COMMANDS)
    ap.add_argument("--config", help="key=value configuration file")
    ap.add_argument("--q", help="comma separated moduli (primes for weil-scan)")
    ap.add_argument("--q-range", dest="q_range", help="inclusive range lo:hi")
    ap.add_argument("--samples", type=int)
    ap.add_argument("--seed")
    ap.add_argument("--budget", type=int)
    ap.add_argument("--out", help="output path, - for stdout")
    ap.add_argument("--jobs", type=int)
    ns = ap.parse_args(argv)

    file_cfg = {}
    if ns.config:
        file_cfg = parse_config_file(ns.config)

    command = ns.command or file_cfg.get("command")
    if command not in RUNNERS:
        raise ValueError(f"no valid command (got {command!r})")
    base = DEFAULTS[command]
    qs = ()
    if ns.q is not None:
        qs = _parse_int_list(ns.q)
    elif "q" in file_cfg:
        qs = _parse_int_list(file_cfg["q"])
    q_range = ()
    if ns.q_range is not None:
        q_range = _parse_range(ns.q_range)
    elif "q_range" in file_cfg:
        q_range = _parse_range(file_cfg["q_range"])
    provided = ns.q is not None or ns.q_range is not None or "q" in file_cfg or "q_range" in file_cfg
    if not provided:
        # an explicitly empty --q stays empty (header-only report); only a
        # wholly absent selection falls back to the command defaults
        qs = base.get("qs", ())
        q_range = base.get("q_range", ())

    def pick(flag, key, default, conv):
        if flag is not None:
            return flag
        if key in file_cfg:
            return conv(file_cfg[key])
        return default

    samples = pick(ns.samples, "samples", base.get("samples", 5), int)
    seed = pick(ns.seed, "seed", "0", str)
    budget = pick(ns.budget, "budget", 10**8, int)
    out = pick(ns.out, "out", "-", str)
    jobs = pick(ns.jobs, "jobs", 1, int)
    if samples < 0 or budget < 1 or jobs < 1:
        raise ValueError("samples, budget and jobs must be positive")
    return ExperimentConfig(
        command=command, qs=qs, q_range=q_range, samples=samples,
        seed=seed, budget=budget, out=out, jobs=jobs,
    )


def render_report(cfg: ExperimentConfig, head, cols, rows) -> str:
    # jobs is a scheduling knob, not content: it must not appear in the output
    lines = [f"# quadcong {cfg.command} seed={cfg.seed} samples={cfg.samples}"]
    for h in head:
        lines.append(f"# {h}")
    lines.append(",".join(cols))
    for row in rows:
        lines.append(",".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def run(cfg: ExperimentConfig) -> int:
    try:
        head, cols, rows, ok = RUNNERS[cfg.command](cfg)
    except (ValueError, InvalidModulus) as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except QuadCongError as exc:
        sys.stderr.write(f"FAILED: {type(exc).__name__}: {exc}\n")
        return 1
    text = render_report(cfg, head, cols, rows)
    if cfg.out == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    if not ok:
        bad = [r for r in rows if str(r[-1]) == "0"]
        sys.stderr.write(f"FAILED: {len(bad)} row(s), first: {bad[0] if bad else '?'}\n")
        return 1
    return 0


def main(argv=None) -> int:
    try:
        cfg = build_config(sys.argv[1:] if argv is None else argv)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
