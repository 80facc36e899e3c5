"""Command line: ``verify``, ``grid`` and ``sweep``.

Values resolve as command-line flag > ``--config`` file > built-in default.
The config file is flat ``key = value`` text; ``#`` starts a comment.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__, husimi, oracle, quadrature, transfer
from .model import ModelParams

DEFAULTS = {
    "J": 1.0,
    "B": 0.0,
    "beta": 1.0,
    "N": 16,
    "thermo": False,
    "seed": 0,
    "tolerance": 1e-10,
    "max_n": 8,
    "trials": 25,
    "mode": "one",
    "sites": None,
    "resolution": 11,
    "param": "beta",
    "start": None,
    "stop": None,
    "steps": 50,
    "observables": "logZ,magnetization",
}

_FLOAT_KEYS = {"J", "B", "beta", "tolerance", "start", "stop"}
_INT_KEYS = {"N", "seed", "max_n", "trials", "resolution", "steps"}

SWEEP_PARAMS = ("beta", "B", "J")
OBSERVABLES = ("logZ", "magnetization", "pair:d", "slope", "pair_coeff:d")


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def read_config(path: str | Path) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _coerce(key, value)
    return values


def _coerce(key: str, value):
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
        if key == "thermo":
            return str(value).lower() in ("1", "true", "yes", "on")
        if key == "sites":
            return [int(v) for v in str(value).replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {value!r}") from exc
    return value


def resolve(args: argparse.Namespace) -> dict:
    settings = dict(DEFAULTS)
    if getattr(args, "config", None):
        settings.update(read_config(args.config))
    for key, value in vars(args).items():
        if key in DEFAULTS and value is not None:
            settings[key] = value
    return settings


def params_from(settings: dict, **overrides) -> ModelParams:
    values = {k: settings[k] for k in ("J", "B", "beta", "N")}
    values.update(overrides)
    try:
        return ModelParams(**values)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def header_lines(command: str, settings: dict, keys: Sequence[str]) -> list[str]:
    lines = [f"# husimi-ising {__version__}", f"# command = {command}"]
    for key in keys:
        value = settings[key]
        if isinstance(value, float):
            value = fmt(value)
        elif isinstance(value, list):
            value = " ".join(str(v) for v in value)
        lines.append(f"# {key} = {value}")
    return lines


# ---------------------------------------------------------------- verify


@dataclass
class Deviation:
    name: str
    max_abs: float = 0.0
    max_rel: float = 0.0
    relative: bool = False
    count: int = 0

    def add(self, got: float, want: float) -> None:
        err = abs(got - want)
        self.max_abs = max(self.max_abs, err)
        self.max_rel = max(self.max_rel, err / abs(want) if want != 0 else err)
        self.count += 1

    def worst(self) -> float:
        return self.max_rel if self.relative else self.max_abs

    def passed(self, tolerance: float) -> bool:
        return self.worst() <= tolerance


def run_verify(max_n: int, trials: int, seed: int, tolerance: float, out=None) -> bool:
    """Compare every closed form with enumeration on random parameter draws."""
    out = sys.stdout if out is None else out
    if max_n < 2 or max_n > oracle.DEFAULT_MAX_SITES:
        raise UsageError(f"max_n must be in [2, {oracle.DEFAULT_MAX_SITES}], got {max_n}")
    if trials < 1:
        raise UsageError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    checks = {
        name: Deviation(name, relative=(name == "log_partition"))
        for name in (
            "log_partition",
            "magnetization",
            "two_point",
            "husimi_expansion",
            "one_point_marginal",
            "joint_marginal",
            "generator_one_point",
            "generator_joint",
        )
    }
    rule = quadrature.gauss_legendre(2)
    for n in range(2, max_n + 1):
        for _ in range(trials):
            J, B = rng.uniform(-2.0, 2.0, size=2)
            beta = rng.uniform(0.0, 5.0)
            p = ModelParams(float(J), float(B), float(beta), n)

            checks["log_partition"].add(transfer.log_partition(p), oracle.log_partition_brute(p))
            mag = transfer.magnetization(p)
            checks["magnetization"].add(mag, oracle.correlator_brute(p, [1]))
            for j in range(2, n + 1):
                checks["two_point"].add(transfer.two_point(p, 1, j), oracle.correlator_brute(p, [1, j]))

            one = husimi.one_point(p)
            checks["generator_one_point"].add(quadrature.extract_correlator(one, [1], rule), mag)
            pair = husimi.joint(p, 1, n)
            checks["generator_joint"].add(
                quadrature.extract_correlator(pair, [1, n], rule), transfer.two_point(p, 1, n)
            )

            if n > 8:
                continue
            u = rng.uniform(-1.0, 1.0, size=(4, n))
            for got, want in zip(oracle.husimi_expansion(p, u), oracle.husimi_brute_u(p, u)):
                checks["husimi_expansion"].add(got, want)

            full = oracle.husimi_density(p)
            grid = np.linspace(-1.0, 1.0, 5)
            marg1 = quadrature.marginal(full, [1], rule)(grid[:, None])
            for got, want in zip(one(grid), marg1):
                checks["one_point_marginal"].add(got, want)
            pts = np.array([(a, b) for a in grid for b in grid])
            marg2 = quadrature.marginal(full, [1, n], rule)(pts)
            for got, want in zip(pair.evaluate(pts), marg2):
                checks["joint_marginal"].add(got, want)

    print(f"# husimi-ising {__version__} verify max_n={max_n} trials={trials} seed={seed}", file=out)
    print(f"# tolerance = {tolerance:.3g}", file=out)
    print("check,count,max_abs,max_rel,status", file=out)
    ok = True
    for d in checks.values():
        passed = d.passed(tolerance)
        ok &= passed
        status = "PASS" if passed else "FAIL"
        print(f"{d.name},{d.count},{d.max_abs:.3e},{d.max_rel:.3e},{status}", file=out)
    print("# overall: " + ("PASS" if ok else "FAIL"), file=out)
    return ok


# ---------------------------------------------------------------- grid


def run_grid(settings: dict, out=None) -> None:
    out = sys.stdout if out is None else out
    mode = settings["mode"]
    thermo = settings["thermo"]
    res = settings["resolution"]
    if res < 2:
        raise UsageError("resolution must be >= 2")
    p = params_from(settings)
    sites = settings["sites"]
    u = np.linspace(-1.0, 1.0, res)

    if mode == "one":
        density = husimi.one_point_thermo(p) if thermo else husimi.one_point(p)
        keys = ["J", "B", "beta", "N", "thermo", "mode", "resolution"]
        rows = [(fmt(x), fmt(density(x))) for x in u]
        columns = "u,density"
    elif mode == "joint":
        if not sites or len(sites) != 2:
            raise UsageError("joint mode needs --sites I J")
        i, j = sites
        if not (1 <= i < j) or (not thermo and j > p.N):
            raise UsageError(f"need 1 <= i < j <= N, got i={i}, j={j}, N={p.N}")
        density = husimi.joint_thermo(p, j - i) if thermo else husimi.joint(p, i, j)
        keys = ["J", "B", "beta", "N", "thermo", "mode", "sites", "resolution"]
        rows = [(fmt(a), fmt(b), fmt(density(a, b))) for a in u for b in u]
        columns = "u_i,u_j,density"
    else:
        raise UsageError(f"mode must be 'one' or 'joint', got {mode!r}")

    lines = header_lines("grid", settings, keys)
    lines.append(columns)
    lines.extend(",".join(r) for r in rows)
    out.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------- sweep


def _observable(name: str, n: int, thermo: bool) -> tuple[str, Callable[[ModelParams], float]]:
    base, _, arg = name.partition(":")
    if base in ("pair", "pair_coeff"):
        try:
            d = int(arg)
        except ValueError:
            raise UsageError(f"{name!r}: expected {base}:d with integer d >= 1") from None
        if d < 1 or (not thermo and d >= n):
            raise UsageError(f"{name!r}: distance must satisfy 1 <= d < N")
        if thermo:
            return name, lambda p: husimi.joint_thermo(p, d).pair_coeff
        if base == "pair":
            return name, lambda p: transfer.two_point(p, 1, 1 + d)
        return name, lambda p: husimi.joint(p, 1, 1 + d).pair_coeff
    if arg:
        raise UsageError(f"unknown observable {name!r}; valid: {', '.join(OBSERVABLES)}")
    if base == "logZ":
        if thermo:
            return "logZ_per_site", lambda p: transfer.spectral(p).log_lambda_plus
        return name, transfer.log_partition
    if base == "magnetization":
        if thermo:
            return name, lambda p: -transfer.spectral(p).cos2w
        return name, transfer.magnetization
    if base == "slope":
        if thermo:
            return name, lambda p: husimi.one_point_thermo(p).slope
        return name, lambda p: husimi.one_point(p).slope
    raise UsageError(f"unknown observable {name!r}; valid: {', '.join(OBSERVABLES)}")


def run_sweep(settings: dict, out=None) -> None:
    out = sys.stdout if out is None else out
    param = settings["param"]
    if param not in SWEEP_PARAMS:
        raise UsageError(f"param must be one of {', '.join(SWEEP_PARAMS)}, got {param!r}")
    start, stop, steps = settings["start"], settings["stop"], settings["steps"]
    if start is None or stop is None:
        raise UsageError("sweep needs --start and --stop")
    if not start < stop:
        raise UsageError("need start < stop")
    if steps < 2:
        raise UsageError("steps must be >= 2")
    thermo = settings["thermo"]
    base = params_from(settings)
    names = [s.strip() for s in settings["observables"].split(",") if s.strip()]
    if not names:
        raise UsageError(f"no observables given; valid: {', '.join(OBSERVABLES)}")
    columns = [_observable(name, base.N, thermo) for name in names]

    values = np.linspace(start, stop, steps)
    points = [params_from(settings, **{param: float(v)}) for v in values]

    keys = ["J", "B", "beta", "N", "thermo", "param", "start", "stop", "steps", "observables"]
    lines = header_lines("sweep", settings, keys)
    lines.append(",".join([param] + [c[0] for c in columns]))
    for v, p in zip(values, points):
        lines.append(",".join([fmt(v)] + [fmt(f(p)) for _, f in columns]))
    out.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------- entry


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--J", type=float, help="coupling (default 1)")
    shared.add_argument("--B", type=float, help="longitudinal field (default 0)")
    shared.add_argument("--beta", type=float, help="inverse temperature (default 1)")
    shared.add_argument("--N", type=int, help="ring length (default 16)")
    shared.add_argument("--thermo", action="store_true", default=None, help="use N -> infinity forms")
    shared.add_argument("--config", help="flat 'key = value' file; flags take precedence")
    shared.add_argument("--seed", type=int, help="RNG seed (default 0)")
    shared.add_argument("--tolerance", type=float, help="verification tolerance (default 1e-10)")

    parser = argparse.ArgumentParser(
        prog="husimi-ising",
        description="Exact Husimi distributions of the periodic 1D Ising chain.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[shared], help="closed forms vs brute-force enumeration")
    v.add_argument("--max-n", dest="max_n", type=int)
    v.add_argument("--trials", type=int)

    g = sub.add_parser("grid", parents=[shared], help="tabulate a Husimi marginal as CSV")
    g.add_argument("--mode", choices=["one", "joint"])
    g.add_argument("--sites", type=int, nargs="+", metavar="K")
    g.add_argument("--resolution", type=int)

    s = sub.add_parser("sweep", parents=[shared], help="observables across a parameter range")
    s.add_argument("--param", choices=SWEEP_PARAMS)
    s.add_argument("--start", type=float)
    s.add_argument("--stop", type=float)
    s.add_argument("--steps", type=int)
    s.add_argument("--observables", help="comma list of " + ", ".join(OBSERVABLES))
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = resolve(args)
        if args.command == "verify":
            ok = run_verify(settings["max_n"], settings["trials"], settings["seed"], settings["tolerance"])
            return 0 if ok else 1
        if args.command == "grid":
            run_grid(settings)
        else:
            run_sweep(settings)
    except (UsageError, OSError) as exc:
        print(f"husimi-ising: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
