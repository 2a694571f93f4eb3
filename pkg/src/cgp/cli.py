"""Command-line front end: ``cgp {dephasing,partial,lindblad,random,bound,oracle}``.

Angles are in radians. Reports are JSON carrying ``"schema": 1`` and the seed;
tables are CSV with 17 significant digits. The exit code is 1 when any
internal check fails, with the failures listed under ``"failures"``.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import attainment, closed_forms, io, lindblad, montecarlo, random_dephasing
from .config import DEFAULT_SAMPLES, DEFAULT_SEED
from .core import Channel, InvalidProjectorFamily, ProjectorFamily, check_unitary

SCHEMA = 1
MEASURE_NAMES = {"c2": "c2", "rel": "c_rel"}


@dataclass
class Result:
    report: dict
    columns: list[str] | None = None
    rows: list = field(default_factory=list)

    @property
    def failures(self) -> list:
        return self.report.setdefault("failures", [])


def _header(command: str, seed: int | None = None) -> dict:
    out = {"schema": SCHEMA, "command": command}
    if seed is not None:
        out["seed"] = seed
    return out


def _family(path, d: int | None = None) -> ProjectorFamily:
    if path is None:
        if d is None:
            raise ValueError("dimension unknown")
        return ProjectorFamily.computational(d)
    family = io.family_from_json(io.read_json(path))
    if not family.is_maximal:
        raise ValueError("reference basis must be maximal")
    if d is not None and family.dim != d:
        raise ValueError(f"basis has dimension {family.dim}, expected {d}")
    return family


def _unitary(args) -> np.ndarray:
    if args.unitary is not None:
        return check_unitary(io.matrix_from_json(io.read_json(args.unitary)))
    return closed_forms.qubit_basis(args.qubit_theta, args.qubit_phi)


def _measures(name: str) -> list[str]:
    return ["c2", "rel"] if name == "both" else [name]


def _estimate_json(est: montecarlo.MCEstimate, closed: float) -> dict:
    out = est.to_json()
    out["target"] = closed
    out["agrees"] = est.agrees(closed)
    return out


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_dephasing(args) -> Result:
    u = _unitary(args)
    family = _family(args.basis, u.shape[0])
    res = Result({**_header("dephasing", args.seed if args.mc else None), "d": u.shape[0]})
    values = {}
    for m in _measures(args.measure):
        values[m] = (
            closed_forms.cgp2_max_dephasing(u, family) if m == "c2" else closed_forms.cgp_rel_max_dephasing(u, family)
        )
    res.report["cgp"] = values
    res.report["cgp2_max"] = closed_forms.cgp2_max_bound(u.shape[0]) if u.shape[0] > 1 else 0.0
    if args.mc:
        channel = Channel.dephasing(ProjectorFamily.from_basis(u @ family.basis()))
        res.report["mc"] = {}
        for m, closed in values.items():
            est = montecarlo.cgp_mc(channel, family, MEASURE_NAMES[m], args.mc, args.seed)
            res.report["mc"][m] = _estimate_json(est, closed)
            if not est.agrees(closed):
                res.failures.append({"check": f"mc_{m}", "closed_form": closed, "mc": est.mean, "stderr": est.stderr})
    return res


def cmd_partial(args) -> Result:
    if args.family is not None:
        partial = io.family_from_json(io.read_json(args.family))
        family = _family(args.basis, partial.dim)
        z = closed_forms.z_matrix(partial, family)
        res = Result({**_header("partial"), "d": partial.dim, "cgp": closed_forms.cgp2_partial_dephasing(partial, family)})
        res.report["Z"] = z.tolist()
        return res
    theta1, theta2 = args.two_qubit
    family = _family(args.basis, 4)
    _, partial = closed_forms.two_qubit_families(theta1, theta2, args.phi1, args.phi2)
    value = closed_forms.cgp2_partial_dephasing(partial, family)
    res = Result({**_header("partial"), "d": 4, "theta1": theta1, "theta2": theta2, "cgp": value})
    res.report["Z"] = closed_forms.z_matrix(partial, family).tolist()
    if args.theta2_grid:
        res.columns = ["theta2", "cgp2"]
        for t2 in np.linspace(0.0, np.pi, args.theta2_grid):
            _, p = closed_forms.two_qubit_families(theta1, t2, args.phi1, args.phi2)
            res.rows.append((t2, closed_forms.cgp2_partial_dephasing(p, family)))
        spread = float(np.ptp([r[1] for r in res.rows]))
        res.report["theta2_variation"] = spread
        if spread > 1e-12:
            res.failures.append({"check": "theta2_independence", "variation": spread})
    return res


def _parse_grid(text: str | None, default_stop: float, default_num: int = 101) -> np.ndarray:
    if text is None:
        return np.linspace(0.0, default_stop, default_num)
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("t-grid must be start:stop:num")
    start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
    if start < 0 or stop < start or num < 1:
        raise ValueError("t-grid needs 0 <= start <= stop and num >= 1")
    return np.linspace(start, stop, num)


def _curve_rows(gen, family, ts, t_star=None):
    rows = []
    for row in lindblad.cgp2_curve(gen, family, ts):
        rows.append(tuple(row) if t_star is None else (t_star, *row))
    return rows


def _limit_check(res: Result, gen, family, ts) -> None:
    if not gen.maximal:
        return
    t_sat = lindblad.saturation_time(gen)
    if ts[-1] < t_sat:
        return
    u = family.basis().conj().T @ gen.basis.basis()
    limit = closed_forms.cgp2_from_unistochastic(np.abs(u) ** 2)
    final = lindblad.cgp2_time(gen, family, float(ts[-1]))
    res.report["limit"] = {"t": float(ts[-1]), "cgp2": final, "max_dephasing": float(limit)}
    if abs(final - limit) > 1e-10:
        res.failures.append({"check": "long_time_limit", "cgp2": final, "expected": float(limit)})


def cmd_lindblad(args) -> Result:
    res = Result(_header("lindblad"), columns=["t", "cgp2", "cgp2_normalized"])
    if args.recipe == "qubit-preset":
        if not args.t_star:
            raise ValueError("qubit-preset needs --t-star")
        family = _family(args.basis, 2)
        res.columns = ["t_star", *res.columns]
        peaks = []
        for t_star in args.t_star:
            gen = lindblad.qubit_preset(t_star)
            ts = _parse_grid(args.t_grid, 4 * t_star, 401)
            rows = _curve_rows(gen, family, ts, t_star)
            res.rows.extend(rows)
            peak = max(rows, key=lambda r: r[3])
            peaks.append({"t_star": t_star, "t_peak": peak[1], "peak": peak[3]})
        res.report.update(d=2, recipe="qubit-preset", peaks=peaks)
        if sorted(args.t_star) == list(args.t_star):
            values = [p["peak"] for p in peaks]
            if any(b <= a for a, b in zip(values, values[1:])):
                res.failures.append({"check": "peaks_increase", "peaks": values})
        return res

    if args.recipe == "fourier":
        if args.dim is None or args.theta_d is None:
            raise ValueError("fourier recipe needs --dim and --theta-d")
        gen, t_star = lindblad.recipe_fourier_phases(args.dim, args.theta_d)
        bound = lindblad.fourier_bound(args.dim, args.theta_d)
        res.report.update(recipe="fourier", theta_d=args.theta_d, maximal=gen.maximal)
    elif args.recipe == "mub-root":
        if args.t_star is None or len(args.t_star) != 1:
            raise ValueError("mub-root needs a single --t-star")
        t_star = args.t_star[0]
        if args.unitary is not None:
            w = io.matrix_from_json(io.read_json(args.unitary))
        elif args.dim is not None:
            w = closed_forms.fourier_matrix(args.dim)
        else:
            raise ValueError("mub-root needs --unitary or --dim")
        gen = lindblad.recipe_mub_root(w, t_star)
        bound = lindblad.mub_root_bound(gen.dim, t_star)
        res.report["recipe"] = "mub-root"
    else:
        if args.file is None:
            raise ValueError("give a Lindbladian file or a --recipe")
        h, ls = io.lindbladian_from_json(io.read_json(args.file))
        target = _family(args.target_basis, h.shape[0])
        try:
            gen = lindblad.validate_dephasing(h, ls, target)
        except lindblad.DephasingConditionError as exc:
            res.report["d"] = h.shape[0]
            res.columns = None
            failure = {"check": "validation", "condition": exc.condition, "message": str(exc)}
            if exc.index is not None:
                failure["operator"] = exc.index
            if exc.pair is not None:
                failure["pair"] = [exc.pair[0] + 1, exc.pair[1] + 1]
            res.failures.append(failure)
            return res
        t_star = bound = None

    d = gen.dim
    family = _family(args.basis, d)
    default_stop = 2 * t_star if t_star is not None else lindblad.saturation_time(gen, 50.0)
    ts = _parse_grid(args.t_grid, default_stop)
    res.report["d"] = d
    res.rows = _curve_rows(gen, family, ts)
    if t_star is not None:
        value = closed_forms.normalized_unital(lindblad.cgp2_time(gen, family, t_star), d)
        res.report.update(t_star=t_star, cgp2_normalized_at_t_star=value, bound=bound, holds=abs(value - 1) <= bound)
        if abs(value - 1) > bound:
            res.failures.append({"check": "near_optimality", "value": value, "bound": bound})
    _limit_check(res, gen, family, ts)
    return res


def cmd_random(args) -> Result:
    samples = random_dephasing.sample_cgp(args.dim, args.samples, args.seed)
    ks = random_dephasing.ks_distance(samples) if args.dim == 2 else None
    res = Result(
        {**_header("random", args.seed), **samples.summary(ks)},
        columns=["bin_left", "bin_right", "density"] + (["pdf"] if args.dim == 2 else []),
    )
    levy = random_dephasing.levy_check(args.dim, args.samples, samples=samples)
    res.report["levy"] = levy.to_json()
    res.rows = [tuple(r) for r in random_dephasing.histogram(samples.values, args.bins, analytic_pdf=args.dim == 2)]
    if samples.mean() > random_dephasing.mean_bound(args.dim) + 3 * samples.stderr():
        res.failures.append({"check": "mean_bound", "mean": samples.mean(), "M_d": random_dephasing.mean_bound(args.dim)})
    if not levy.holds:
        res.failures.append({"check": "levy", **levy.to_json()})
    if ks is not None and args.samples >= 10_000 and ks > 0.02:
        res.failures.append({"check": "ks_distance", "ks_distance": ks})
    return res


def cmd_bound(args) -> Result:
    d = args.dim
    res = Result({**_header("bound"), "d": d, "bound": closed_forms.cgp2_max_bound(d)})
    if d <= attainment.MAX_CERTIFIABLE_DIM:
        cert = attainment.certify_attainment(d, args.phi0)
        res.report.update(cert.to_json())
        if not cert.attained:
            res.failures.append({"check": "attainment", "cgp": cert.cgp, "bound": cert.bound})
    else:
        res.report["attained"] = "unknown"
    return res


def cmd_oracle(args) -> Result:
    u = _unitary(args)
    d = u.shape[0]
    family = _family(args.basis, d)
    target = ProjectorFamily.from_basis(u @ family.basis())
    measure = MEASURE_NAMES[args.measure]
    if args.channel == "dephasing":
        channel = Channel.dephasing(target)
        closed = (
            closed_forms.cgp2_max_dephasing(u, family)
            if args.measure == "c2"
            else closed_forms.cgp_rel_max_dephasing(u, family)
        )
    else:
        channel = Channel.unitary(u)
        closed = closed_forms.cgp2_unitary(u, family) if args.measure == "c2" else None
    if args.estimator == "simplex":
        est = montecarlo.cgp_mc(channel, family, measure, args.samples, args.seed)
    elif args.estimator == "haar":
        est = montecarlo.cgp_mc_haar(channel, family, measure, args.samples, args.seed)
    else:
        # average coherence of Haar states dephased in the image basis
        est = montecarlo.avg_coherence_of_dephased_haar_states(family, target, measure, args.samples, args.seed)
        closed = closed_forms.cgp2_unitary(u, family) if args.measure == "c2" else None
    res = Result({**_header("oracle", args.seed), "d": d, "estimator": args.estimator, "measure": args.measure})
    res.report["estimate"] = est.to_json()
    if closed is not None:
        res.report["closed_form"] = closed
        res.report["agrees"] = est.agrees(closed)
        if not est.agrees(closed):
            res.failures.append({"check": "mc_vs_closed_form", "mean": est.mean, "stderr": est.stderr, "closed_form": closed})
    return res


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_unitary(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--unitary", help="matrix JSON of U (B' = U B)")
    src.add_argument("--qubit-theta", type=float, help="Bloch polar angle of the qubit basis (radians)")
    p.add_argument("--qubit-phi", type=float, default=0.0, help="Bloch azimuth (radians)")
    p.add_argument("--basis", help="reference basis as matrix or family JSON (default computational)")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", "-o", help="write the main output here instead of stdout")
    p.add_argument("--format", choices=["json", "csv"], default="json", help="json report or csv table")
    p.add_argument("--summary", help="with --format csv, also write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cgp", description="Coherence generating power of dephasing processes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dephasing", help="CGP of maximal dephasing onto B' = U B")
    _add_unitary(p)
    p.add_argument("--measure", choices=["c2", "rel", "both"], default="c2")
    p.add_argument("--mc", type=int, default=0, metavar="N", help="also run an N-sample Monte-Carlo check")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_output(p)
    p.set_defaults(run=cmd_dephasing)

    p = sub.add_parser("partial", help="2-norm CGP of a partial dephasing")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", help="projector family JSON")
    src.add_argument("--two-qubit", nargs=2, type=float, metavar=("THETA1", "THETA2"), help="two-qubit coarse-grained family")
    p.add_argument("--phi1", type=float, default=0.0)
    p.add_argument("--phi2", type=float, default=0.0)
    p.add_argument("--theta2-grid", type=int, default=0, metavar="N", help="sweep theta2 over N points of [0, pi]")
    p.add_argument("--basis", help="reference basis JSON (default computational)")
    _add_output(p)
    p.set_defaults(run=cmd_partial)

    p = sub.add_parser("lindblad", help="CGP(t) of a maximally dephasing Lindbladian")
    p.add_argument("file", nargs="?", help="Lindbladian JSON {dim, H, Ls}")
    p.add_argument("--target-basis", help="basis the generator dephases to (default computational)")
    p.add_argument("--recipe", choices=["fourier", "mub-root", "qubit-preset"])
    p.add_argument("--dim", type=int)
    p.add_argument("--theta-d", type=float)
    p.add_argument("--t-star", type=float, nargs="+")
    p.add_argument("--unitary", help="matrix JSON of W for the mub-root recipe (default Fourier)")
    p.add_argument("--t-grid", help="start:stop:num")
    p.add_argument("--basis", help="reference basis JSON (default computational)")
    _add_output(p)
    p.set_defaults(run=cmd_lindblad)

    p = sub.add_parser("random", help="statistics of CGP for Haar-random dephasing bases")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--bins", type=int, default=50)
    _add_output(p)
    p.set_defaults(run=cmd_random)

    p = sub.add_parser("bound", help="the dephasing ceiling and its attaining construction")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--phi0", type=float, default=0.0)
    _add_output(p)
    p.set_defaults(run=cmd_bound)

    p = sub.add_parser("oracle", help="raw Monte-Carlo estimate against the closed form")
    _add_unitary(p)
    p.add_argument("--channel", choices=["dephasing", "unitary"], default="dephasing")
    p.add_argument("--estimator", choices=["simplex", "haar", "dephased-haar"], default="simplex")
    p.add_argument("--measure", choices=["c2", "rel"], default="c2")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_output(p)
    p.set_defaults(run=cmd_oracle)
    return parser


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        res = args.run(args)
    except InvalidProjectorFamily as exc:
        sys.stderr.write(io.dumps({**_header(args.command), "error": str(exc), "invariant": exc.invariant}))
        return 2
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        sys.stderr.write(io.dumps({**_header(args.command), "error": str(exc)}))
        return 2

    report = res.report
    report["failures"] = report.get("failures", [])
    if args.format == "csv" and res.columns is not None:
        _emit(io.format_csv(res.columns, res.rows), args.output)
        if args.summary:
            io.write_json(args.summary, report)
    else:
        if res.columns is not None:
            report["table"] = {"columns": res.columns, "rows": [list(map(float, r)) for r in res.rows]}
        _emit(io.dumps(report), args.output)
    if report["failures"]:
        sys.stderr.write(io.dumps({"failures": report["failures"]}))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
