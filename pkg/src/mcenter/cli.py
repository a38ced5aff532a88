"""``mcenter`` command line: one computation per invocation, JSON report out."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import central, generators, isometry, metric, sampler, transport
from .quotient import quotient as quotient_of
from .quotient import quotient_dual_distance, quotient_tower
from .serialize import digest, fmt, parse_rational, read_space, space_to_dict

COMMANDS = (
    "validate",
    "iso",
    "quotient",
    "tower",
    "chebyshev",
    "kantorovich",
    "central",
    "lambda",
    "canonical",
    "explore-interval",
)


class CommandError(Exception):
    pass


def parse_params(items) -> dict[str, str]:
    out = {}
    for item in items or ():
        for part in item.split(","):
            if not part:
                continue
            key, sep, value = part.partition("=")
            if not sep:
                raise CommandError(f"parameter {part!r} is not key=value")
            out[key.strip()] = value.strip()
    return out


def generate(kind: str, params: dict, seed: int | None = None) -> metric.FiniteMetricSpace:
    """Build one of the named spaces; ``params`` values are strings."""

    def need(key, cast=int):
        if key not in params:
            raise CommandError(f"generator {kind!r} needs parameter {key}=...")
        return cast(params[key])

    if kind == "grid":
        return generators.grid(need("n"))
    if kind == "cycle":
        return generators.cycle(need("n"))
    if kind == "equilateral":
        return generators.equilateral(need("n"), parse_rational(params.get("side", "1")))
    if kind == "random":
        s = seed if seed is not None else params.get("seed")
        if s is None:
            raise CommandError("random spaces need --seed or seed=...")
        return generators.random_space(
            need("n"), int(s), int(params.get("dim", 2)), int(params.get("side", 4))
        )
    if kind == "group":
        if "file" in params:
            data = json.loads(Path(params["file"]).read_text())
            weights = {int(k): parse_rational(v) for k, v in data["weights"].items()}
            return generators.word_metric(data["table"], weights, data.get("labels"))
        name = params.get("name", "cyclic")
        if name == "cyclic":
            return generators.cyclic_group(need("order"))
        if name == "symmetric":
            return generators.symmetric_group(int(params.get("degree", 3)))
        raise CommandError(f"unknown group {name!r}")
    raise CommandError(f"unknown generator {kind!r}")


def _measure_arg(text: str | None, X, name: str) -> transport.Measure:
    if text is None:
        raise CommandError(f"kantorovich needs --{name}")
    weights = [parse_rational(v) for v in text.split(",")]
    return transport.Measure(X, tuple(weights))


def _fmt_vec(v):
    return [fmt(x) for x in v]


def _subspace(S: metric.Subspace):
    return {"members": list(S.members), "labels": list(S.labels)}


def cmd_validate(X, args, checks):
    checks.append("metric_axioms")
    report = metric.weak_convexity_check(X)
    return {
        "n": X.n,
        "diameter": fmt(metric.diameter(X)),
        "weakly_convex": report.convex,
        "convexity_failures": [list(p) for p in report.failures],
    }


def cmd_iso(X, args, checks):
    G = isometry.enumerate_isometries(X)
    checks.append("group_closed")
    part = isometry.orbits(G)
    for x in range(X.n):
        orbit = part.orbits[part.orbit_of[x]]
        assert len(orbit) * len(isometry.stabilizer(G, x)) == len(G)
    checks.append("orbit_stabilizer")
    return {
        "order": len(G),
        "elements": [list(p) for p in G.elements],
        "orbits": [list(o) for o in part.orbits],
        "transitive": isometry.is_transitive(G),
    }


def cmd_quotient(X, args, checks):
    Q = quotient_of(X)
    for x in range(X.n):
        for y in range(X.n):
            assert Q.space.dist[Q.projection[x]][Q.projection[y]] <= X.dist[x][y]
    checks.append("projection_nonexpansive")
    for a in range(Q.space.n):
        for b in range(a + 1, Q.space.n):
            assert quotient_dual_distance(Q, a, b) == Q.space.dist[a][b]
    checks.append("dual_distance_agrees")
    return {"projection": list(Q.projection), "orbits": [list(o) for o in Q.partition.orbits], "space": space_to_dict(Q.space)}


def cmd_tower(X, args, checks):
    T = quotient_tower(X)
    checks.append("diameters_nonincreasing")
    return {
        "sizes": [L.n for L in T.levels],
        "diameters": _fmt_vec(T.diameters),
        "quasi_nilpotent": T.quasi_nilpotent,
        "terminal": space_to_dict(T.terminal),
    }


def cmd_chebyshev(X, args, checks):
    T = metric.chebyshev_tower(X)
    for lvl, r in zip(T.levels, T.radii):
        assert r <= metric.diameter(lvl) <= 2 * r
    checks.append("radius_diameter_bounds")
    return {
        "levels": [_subspace(L) for L in T.levels],
        "radii": _fmt_vec(T.radii),
        "terminal_singleton": len(T.terminal) == 1,
    }


def cmd_kantorovich(X, args, checks):
    mu = _measure_arg(args.mu, X, "mu")
    nu = _measure_arg(args.nu, X, "nu")
    res = transport.kantorovich(mu, nu)
    checks.append("zero_duality_gap")
    return {
        "value": fmt(res.value),
        "plan": [_fmt_vec(r) for r in res.plan.matrix],
        "potential": _fmt_vec(res.potential.values),
    }


def _central_payload(res: central.CentralMeasureResult):
    return {
        "measure": _fmt_vec(res.measure.weights),
        "exact": res.exact,
        "residual_diameter": fmt(res.residual_diameter),
        "levels": [
            {
                "vertices": [_fmt_vec(v) for v in lvl.vertices.vertices],
                "radius": fmt(lvl.radius),
                "w_diameter": fmt(lvl.w_diameter),
            }
            for lvl in res.levels
        ],
    }


def cmd_central(X, args, checks):
    res = central.central_measure(X, max_iter=args.max_iter, size_limit=args.size_limit or central.DEFAULT_SIZE_LIMIT)
    checks.append("tower_monotone")
    if res.exact:
        G = isometry.enumerate_isometries(X)
        for p in G.elements:
            assert transport.pushforward(res.measure, p).weights == res.measure.weights
        checks.append("isometry_invariant")
    return _central_payload(res)


def cmd_lambda(X, args, checks):
    lam = central.lambda_measure(X)
    assert central.is_invariant(lam)
    checks.append("isometry_invariant")
    return {"measure": _fmt_vec(lam.weights)}


def cmd_canonical(X, args, checks):
    order = sampler.canonical_metric(X, size_limit=args.size_limit or sampler.DEFAULT_SIZE_LIMIT)
    checks.append("row_independence")
    reps = sampler.representations(X, order)
    assert len(reps) == len(isometry.enumerate_isometries(X))
    checks.append("representations_match_isometries")
    return {
        "rho": [_fmt_vec(r) for r in order.rho],
        "representation": list(order.representation),
        "representations": len(reps),
        "orbit_sequence": sampler.canonical_orbit_sequence(X, order),
    }


def explore_interval(sizes, max_iter: int = central.DEFAULT_MAX_ITER, size_limit: int = central.DEFAULT_SIZE_LIMIT):
    rows = []
    for n in sizes:
        if n > size_limit:
            raise CommandError(f"grid({n}) exceeds the central-measure size limit {size_limit}")
        X = generators.grid(n)
        res = central.central_measure(X, max_iter=max_iter, size_limit=size_limit)
        uni = transport.Measure.uniform(X)
        lam = central.lambda_measure(X)
        rows.append(
            {
                "n": n,
                "measure": _fmt_vec(res.measure.weights),
                "exact": res.exact,
                "residual_diameter": fmt(res.residual_diameter),
                "w_to_uniform": fmt(transport.kantorovich(res.measure, uni).value),
                "w_to_lambda": fmt(transport.kantorovich(res.measure, lam).value),
            }
        )
    return {"label": "evidence, not proof", "grids": rows}


HANDLERS = {
    "validate": cmd_validate,
    "iso": cmd_iso,
    "quotient": cmd_quotient,
    "tower": cmd_tower,
    "chebyshev": cmd_chebyshev,
    "kantorovich": cmd_kantorovich,
    "central": cmd_central,
    "lambda": cmd_lambda,
    "canonical": cmd_canonical,
}


def run(command: str, space, args) -> dict:
    """Dispatch one command and build its report (raises on failure)."""
    if command not in COMMANDS:
        raise CommandError(f"unknown command {command!r}")
    checks: list[str] = []
    start = time.perf_counter()
    if command == "explore-interval":
        sizes = args.sizes or [3, 4, 5]
        result = explore_interval(sizes, args.max_iter, args.size_limit or central.DEFAULT_SIZE_LIMIT)
        report = {"command": command, "input_digest": None, "result": result}
    else:
        if space is None:
            raise CommandError(f"{command} needs --space FILE or --gen KIND")
        result = HANDLERS[command](space, args, checks)
        report = {"command": command, "input_digest": digest(space), "result": result}
    report["assertions_passed"] = checks
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    return report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mcenter", description=__doc__)
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--space", help="JSON or CSV distance matrix")
    src.add_argument("--gen", choices=("grid", "cycle", "equilateral", "random", "group"))
    p.add_argument("--params", nargs="*", default=[], help="generator parameters, key=value")
    p.add_argument("--seed", type=int)
    p.add_argument("--max-iter", type=int, default=central.DEFAULT_MAX_ITER)
    p.add_argument("--size-limit", type=int, help="override the per-command point-count guard")
    p.add_argument("--mu", help="comma separated weights, e.g. 1/2,1/2")
    p.add_argument("--nu")
    p.add_argument("--sizes", type=int, nargs="*", help="grid sizes for explore-interval")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true", help="include wall time (breaks byte stability)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        space = None
        if args.space:
            space = read_space(args.space)
        elif args.gen:
            space = generate(args.gen, parse_params(args.params), args.seed)
        report = run(args.command, space, args)
        code = 0
    except Exception as exc:  # every failure becomes a JSON error report
        report = {
            "command": args.command,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        code = 1
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
