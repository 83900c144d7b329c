"""Command-line front end: ``paulirecon <command> [options]``.

Each command prints one JSON report on stdout (or writes it to ``--out``)
and exits with status 0 iff the report passes. ``continuum chirp`` is
informational and always exits 0.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import constructions as con
from . import gaussian as gs
from . import solvers as sv
from .measurement import FrameSet, embedding_obstruction, forward
from .reports import ExperimentReport
from .statespace import CharacterFrame, GridFunction, projective_distance, random_frame, standard_frame


def _csv_list(text: str, cast):
    return [cast(t) for t in text.split(",") if t.strip()]


def _write_csv(csv_dir, name: str, text: str) -> str | None:
    if csv_dir is None:
        return None
    path = Path(csv_dir)
    path.mkdir(parents=True, exist_ok=True)
    (path / name).write_text(text)
    return str(path / name)


# ---------------------------------------------------------------------------
# Commands


def cmd_gauss_check(primes, tol: float = 1e-12) -> ExperimentReport:
    bad = [p for p in primes if not con.is_odd_prime(p)]
    if bad:
        raise ValueError(f"not odd primes: {bad}")
    rows = [con.verify_prop2(p, tol) for p in primes]
    return ExperimentReport("gauss-check", {"primes": list(primes), "tol": tol},
                            {"results": rows}, all(r.passed for r in rows))


def cmd_obstruction(n_min: int = 2, n_max: int = 16) -> ExperimentReport:
    if n_max < n_min or n_min < 2:
        raise ValueError("need 2 <= n_min <= n_max")
    table = [embedding_obstruction(n) for n in range(n_min, n_max + 1)]
    large = [r for r in table if r.n >= 9]
    small_failures = [r.n for r in table if r.n < 9 and not r.inequality_holds]
    return ExperimentReport(
        "obstruction", {"n_min": n_min, "n_max": n_max},
        {
            "table": table,
            "fails_for_all_n_ge_9": all(not r.inequality_holds for r in large),
            "failures_below_9": small_failures,
        },
        all(not r.inequality_holds for r in large),
    )


def cmd_gaussian_orbits(mu, tol: float = 1e-10, seed: int = 0, conjugates: int = 3) -> ExperimentReport:
    data = gs.GaussianMagnitudeData(mu)
    orbits = gs.solve_gaussian_pauli(data)
    checks = [gs.check_gaussian_solution(r, data, tol) for r in orbits.representatives]
    rng = sv.rng_for(seed)
    conj_checks = []
    for k in range(len(orbits.representatives)):
        if orbits.orbit_dimension(k) == 0:
            continue
        for _ in range(conjugates):
            a2 = orbits.member(k, orbits.random_commutant(rng))
            conj_checks.append({"representative": k, **vars(gs.check_gaussian_solution(a2, data, tol))})
    outputs = {
        "mu": data.mu, "lambda": data.lam, "b": data.b,
        "count": len(orbits.representatives),
        "sign_patterns": orbits.sign_patterns,
        "representatives": orbits.representatives,
        "orbit_dimensions": [orbits.orbit_dimension(k) for k in range(len(orbits.representatives))],
        "commutant_blocks": [{"indices": b.indices, "mu": b.mu, "lambda": b.lam, "group_dim": b.group_dim}
                             for b in orbits.commutant_blocks],
        "verification": checks,
        "conjugate_checks": conj_checks,
    }
    passed = all(c.passed for c in checks) and all(c["passed"] for c in conj_checks)
    return ExperimentReport("gaussian-orbits", {"mu": list(mu), "tol": tol}, outputs, passed, seed=seed)


def _normalized(g: GridFunction) -> GridFunction:
    return GridFunction(g.values / g.l2_norm(), g.extent)


def even_chirped_gaussian(x):
    return np.exp(-x ** 2 / 2) * np.exp(1j * (x - x ** 2))


CONJECTURE_STATES = {
    "even-chirp": even_chirped_gaussian,
    "gaussian": lambda x: np.exp(-x ** 2 / 2) + 0j,
    "shifted": lambda x: np.exp(-(x - 1) ** 2 / 2) * np.exp(1j * x ** 2 / 2),
}


def cmd_continuum(which: str, points: int | None = None, extent: float | None = None, alpha: float = 1.0,
                  alpha1: float = 1.0, alpha2: float = 1.0, angle: float = np.pi / 2,
                  tol: float | None = None) -> ExperimentReport:
    params = {"which": which, "alpha": alpha, "alpha1": alpha1, "alpha2": alpha2, "angle": angle}
    if which == "chirp":
        points, extent = points or 4096, extent or 40.0
        res = con.chirp(con.ChirpSpec(alpha), points, extent)
        rep = con.chirp_flatness(res)
        outputs = {"flatness": rep, "informational": True,
                   "note": "chirp is not square integrable; flatness on a finite box is qualitative"}
        passed = True
    elif which == "reflect":
        points, extent, tol = points or 1024, extent or 12.0, tol or 1e-8
        g = GridFunction.from_function(even_chirped_gaussian, points, extent)
        rep = con.certify_reflection(g, tol)
        outputs, passed = {"report": rep}, rep.passed
    elif which == "kontsevich":
        points, extent, tol = points or 32, extent or 6.0, tol or 1e-6
        spec = con.KontsevichSpec(alpha1, alpha2, con.rotation_x1(angle))
        rep = con.certify_kontsevich(con.kontsevich_pair(spec, points, extent), tol)
        outputs, passed = {"report": rep}, rep.passed and rep.distance > 0.1
    elif which == "spherical":
        points, extent, tol = points or 32, extent or 6.0, tol or 1e-8
        pair = con.spherical_conjugate_pair(lambda r: np.exp(-r ** 2 / 2 + 1j * r ** 2), points, extent)
        rep = con.certify_spherical(pair, tol)
        outputs, passed = {"report": rep}, rep.passed
    else:
        raise ValueError(f"unknown construction {which!r}")
    params.update(points=points, extent=extent, tol=tol)
    return ExperimentReport("continuum", params, outputs, passed)


def build_frames(dim: int, names, seed: int = 0) -> FrameSet:
    frames = []
    for i, name in enumerate(names):
        if name == "standard":
            frames.append(standard_frame(dim))
        elif name == "character":
            frames.append(CharacterFrame(dim))
        elif name == "random":
            frames.append(random_frame(dim, sv.rng_for(seed, 7919, i), label=f"random{i}"))
        else:
            raise ValueError(f"unknown frame {name!r}")
    return FrameSet(tuple(frames))


def cmd_solve(dim: int = 7, frames=("standard", "character"), seed: int = 0, max_iters: int = 500,
              restarts: int = 20, tol: float = 1e-6, method: str = "alternating", threads: int = 1,
              csv_dir=None) -> ExperimentReport:
    fs = build_frames(dim, frames, seed)
    planted = sv.random_state(dim, sv.rng_for(seed, 999))
    b = forward(planted, fs)
    cfg = sv.SolverConfig(max_iters, tol, restarts, seed)
    run = sv.reconstruct(fs, b, cfg, threads=threads, method=method)
    _write_csv(csv_dir, "profile.csv", b.to_csv())
    outputs = {
        "converged": run.converged, "residual": run.residual, "iterations": run.iterations,
        "restart": run.restart, "total_iterations": run.total_iterations,
        "distance_to_plant": projective_distance(planted, run.state),
        "state": run.state,
    }
    params = {"dim": dim, "frames": list(frames), "max_iters": max_iters, "restarts": restarts,
              "tol": tol, "method": method}
    return ExperimentReport("solve", params, outputs, run.converged, seed=seed)


def cmd_ambiguity(dim: int = 7, frames=("standard", "character"), seed: int = 0, trials: int = 1,
                  flat: bool = False, max_iters: int = 500, restarts: int = 20, tol: float = 1e-6,
                  threshold: float = 1e-2, method: str = "alternating", csv_dir=None) -> ExperimentReport:
    fs = build_frames(dim, frames, seed)
    cfg = sv.SolverConfig(max_iters, tol, restarts, seed, threshold)
    outputs: dict = {}
    passed = True
    profile = None
    if flat:
        if list(frames) != ["standard", "character"] or not con.is_odd_prime(dim):
            raise ValueError("--flat needs frames standard,character and an odd prime dimension")
        members, pairs = sv.gauss_witnesses(dim)
        certified = [sv.certify_witness(w, fs, tol, threshold) for w in pairs]
        profile = pairs[0].profile if pairs else forward(members[0], fs)
        outputs["generated_members"] = len(members)
        outputs["generated_pairs_certified"] = sum(certified)
        outputs["generated_pair_distances"] = sorted({round(w.distance, 12) for w in pairs})
        passed = len(members) >= dim - 1 and all(certified)
    found = sv.ambiguity_search(fs, cfg, trials, profile=profile, method=method)
    outputs["search_witnesses"] = len(found)
    outputs["search_all_certified"] = all(sv.certify_witness(w, fs, tol, threshold) for w in found)
    outputs["search_distances"] = [w.distance for w in found]
    outputs["note"] = "an empty search result is absence of evidence, not a uniqueness proof"
    for k, w in enumerate(found):
        _write_csv(csv_dir, f"witness_{k:03d}.csv", w.to_csv())
    passed = passed and outputs["search_all_certified"]
    params = {"dim": dim, "frames": list(frames), "trials": trials, "flat": flat, "max_iters": max_iters,
              "restarts": restarts, "tol": tol, "threshold": threshold, "method": method}
    return ExperimentReport("ambiguity", params, outputs, passed, seed=seed)


def cmd_conjecture(state: str = "even-chirp", points: int = 64, extent: float = 6.0, seed: int = 0,
                   runs: int = 50, max_iters: int = 2000, tol: float = 1e-6, threshold: float = 1e-2,
                   method: str = "alternating") -> ExperimentReport:
    fn = CONJECTURE_STATES[state]
    psi = _normalized(GridFunction.from_function(fn, points, extent))
    cfg = sv.SolverConfig(max_iters, tol, runs, seed, threshold)
    rep = sv.conjecture_probe(psi, cfg, psi_fn=fn, method=method)
    outputs = {"counts": rep.counts, "psi1_residual": rep.psi1_residual, "flagged": rep.flagged,
               "confirmed_other": rep.confirmed, "runs": rep.runs}
    passed = not rep.confirmed
    params = {"state": state, "points": points, "extent": extent, "runs": runs, "max_iters": max_iters,
              "tol": tol, "threshold": threshold, "method": method}
    return ExperimentReport("conjecture", params, outputs, passed, seed=seed)


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paulirecon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        if seed:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gauss-check", help="flatness of Gauss states on Z/pZ")
    p.add_argument("--primes", default="3,5,7,11,13")
    p.add_argument("--tol", type=float, default=1e-12)
    common(p, seed=False)

    p = sub.add_parser("obstruction", help="table of the three-basis embedding inequality")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=16)
    common(p, seed=False)

    p = sub.add_parser("gaussian-orbits", help="all Gaussian states with given magnitude data")
    p.add_argument("--mu", default="0.6,0.8")
    p.add_argument("--tol", type=float, default=1e-10)
    common(p)

    p = sub.add_parser("continuum", help="grid experiments for the continuum constructions")
    p.add_argument("which", choices=["chirp", "reflect", "kontsevich", "spherical"])
    p.add_argument("--points", type=int)
    p.add_argument("--extent", type=float)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--alpha1", type=float, default=1.0)
    p.add_argument("--alpha2", type=float, default=1.0)
    p.add_argument("--angle", type=float, default=np.pi / 2)
    p.add_argument("--tol", type=float)
    common(p, seed=False)

    for name, helptext in (("solve", "reconstruct a planted state from its profile"),
                           ("ambiguity", "search for distinct states with a common profile")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--dim", type=int, default=7)
        p.add_argument("--frames", default="standard,character")
        p.add_argument("--max-iters", type=int, default=500)
        p.add_argument("--restarts", type=int, default=20)
        p.add_argument("--tol", type=float, default=1e-6)
        p.add_argument("--method", choices=["alternating", "raar"], default="alternating")
        p.add_argument("--csv-dir")
        common(p)
        if name == "solve":
            p.add_argument("--threads", type=int, default=1)
        else:
            p.add_argument("--trials", type=int, default=1)
            p.add_argument("--flat", action="store_true", help="use the flat profile of the Gauss states")
            p.add_argument("--threshold", type=float, default=1e-2)

    p = sub.add_parser("conjecture", help="classify reconstructions from position and momentum moduli")
    p.add_argument("--state", choices=sorted(CONJECTURE_STATES), default="even-chirp")
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--extent", type=float, default=6.0)
    p.add_argument("--runs", type=int, default=50)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--threshold", type=float, default=1e-2)
    p.add_argument("--method", choices=["alternating", "raar"], default="alternating")
    common(p)
    return parser


def run(args: argparse.Namespace) -> ExperimentReport:
    c = args.command
    if c == "gauss-check":
        return cmd_gauss_check(_csv_list(args.primes, int), args.tol)
    if c == "obstruction":
        return cmd_obstruction(args.n_min, args.n_max)
    if c == "gaussian-orbits":
        return cmd_gaussian_orbits(_csv_list(args.mu, float), args.tol, args.seed)
    if c == "continuum":
        return cmd_continuum(args.which, args.points, args.extent, args.alpha, args.alpha1, args.alpha2,
                             args.angle, args.tol)
    if c == "solve":
        return cmd_solve(args.dim, _csv_list(args.frames, str), args.seed, args.max_iters, args.restarts,
                         args.tol, args.method, args.threads, args.csv_dir)
    if c == "ambiguity":
        return cmd_ambiguity(args.dim, _csv_list(args.frames, str), args.seed, args.trials, args.flat,
                             args.max_iters, args.restarts, args.tol, args.threshold, args.method,
                             args.csv_dir)
    if c == "conjecture":
        return cmd_conjecture(args.state, args.points, args.extent, args.seed, args.runs, args.max_iters,
                              args.tol, args.threshold, args.method)
    raise ValueError(f"unknown command {c!r}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report = run(args)
    except ValueError as exc:
        print(f"paulirecon {args.command}: error: {exc}", file=sys.stderr)
        return 2
    report.runtime_ms = int(round((time.perf_counter() - start) * 1000))
    text = report.to_json()
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
