"""Command-line entry point.

Exit codes: 0 all asserted checks pass, 1 an asserted check failed,
2 usage / invalid config, 3 leapfrog stability violation, 4 memory budget.

Config precedence: command-line flags, then ``--config`` file, then the
subcommand defaults. Every run writes ``manifest.yaml`` to the output
directory; passing it back as ``--config`` reproduces the run.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import BasisError, DomainError, MemoryBudgetError, StabilityError
from .export import (
    load_config,
    write_csv,
    write_json,
    write_kv_report,
    write_manifest,
    write_records,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_STABILITY, EXIT_BUDGET = 0, 1, 2, 3, 4

COMMON_DEFAULTS = {
    "units": "fundamental",
    "hbar": 1.0,
    "c": 1.0,
    "l": 1.0,
    "nu": 1.0,
    "out": "out",
    "format": "csv",
    "memory_budget_mb": 1024.0,
    "tolerances": {},
}

DEFAULTS = {
    "ops-check": {"nmax": 64},
    "oscillator": {
        "nmax": 64,
        "eigenfunctions": [0, 1, 2],
        "grid_min": -5.0,
        "grid_max": 5.0,
        "grid_points": 101,
        "quadrature": "adaptive",
        "n_ortho": 12,
    },
    "kg": {
        "nmax": 6,
        "mass": 1.0,
        "dt": 0.01,
        "steps": 1000,
        "initial": "eigenmode",
        "mode": 0,
        "seed": 0,
        "stride": 10,
        "width": 1.0,
    },
    "poincare": {
        "nmax": 6,
        "mass": 1.0,
        "dt": 0.01,
        "steps": 400,
        "mode": 1,
        "translation": [0.1, 0.2, 0.0, 0.05],
        "omega": [0.05, 0.0, 0.05, 0.05, 0.0, 0.05],
        "margin": 4,
        "seed": 0,
    },
    "geometry": {
        "orbits": [0, 1, 2, 3, 4],
        "ellipse": [0.5],
        "cylinder": [0],
        "t_min": 0.0,
        "t_max": 1.0,
        "samples": 256,
        "samples_t": 64,
    },
}

TOLERANCES = {
    "commutator": None,  # max(1e-14, 4 eps n_max) unless overridden
    "spectrum": 1e-10,
    "overlap": 1e-10,
    "orthonormality": 1e-8,
    "ode_residual": 1e-5,
    "energy_drift": 1e-6,
    "amplitude": 1e-4,
    "reversal": 1e-10,
    "casimir": 1e-12,
    "translation": 1e-10,
    "orthogonality": 1e-12,
    "identity": 0.0,
    "boost_slope": 1.9,
    "radius": 1e-10,
}


class UsageError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    out = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _float_list(text: str) -> list[float]:
    text = text.strip()
    return [float(x) for x in text.split(",")] if text else []


def _tol_pair(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError("expected NAME=VALUE")
    k, v = text.split("=", 1)
    return k.strip(), float(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("common options")
    g.add_argument("--config", help="flat key-value YAML config file")
    g.add_argument("--nmax", type=int, help="largest lattice index per axis")
    g.add_argument("--mass", type=float)
    g.add_argument("--dt", type=float)
    g.add_argument("--steps", type=int)
    g.add_argument("--units", choices=["fundamental", "explicit"])
    g.add_argument("--hbar", type=float)
    g.add_argument("--c", type=float)
    g.add_argument("--l", type=float)
    g.add_argument("--nu", type=float)
    g.add_argument("--out", help="output directory")
    g.add_argument("--format", choices=["csv", "json"], help="report format")
    g.add_argument("--memory-budget-mb", type=float, dest="memory_budget_mb")
    g.add_argument("--tol", type=_tol_pair, action="append", metavar="NAME=VALUE",
                   help="override a named tolerance; repeatable")

    p = argparse.ArgumentParser(prog="phasecell", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("ops-check", parents=[common], help="difference-operator identities")

    s = sub.add_parser("oscillator", parents=[common], help="Planck oscillator spectra")
    s.add_argument("--eigenfunctions", type=_int_list, help="levels to tabulate, e.g. 0,1,2 or 0..4")
    s.add_argument("--grid-min", type=float, dest="grid_min")
    s.add_argument("--grid-max", type=float, dest="grid_max")
    s.add_argument("--grid-points", type=int, dest="grid_points")
    s.add_argument("--quadrature", choices=["adaptive", "gauss-hermite"])
    s.add_argument("--n-ortho", type=int, dest="n_ortho", help="top level of the orthonormality check")

    s = sub.add_parser("kg", parents=[common], help="3+1 Klein-Gordon evolution")
    s.add_argument("--initial", choices=["eigenmode", "gaussian", "random", "zero"])
    s.add_argument("--mode", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--stride", type=int)
    s.add_argument("--width", type=float)

    s = sub.add_parser("poincare", parents=[common], help="Poincare invariance checks")
    s.add_argument("--translation", type=_float_list, help="c^0,c^1,c^2,c^3 (axis 3 time-like)")
    s.add_argument("--omega", type=_float_list,
                   help="omega^{01},^{02},^{03},^{12},^{13},^{23} (axis 3 time-like)")
    s.add_argument("--margin", type=int)
    s.add_argument("--mode", type=int, help="eigenmode used by the 3+1 boost check")
    s.add_argument("--seed", type=int)

    s = sub.add_parser("geometry", parents=[common], help="orbit point sets")
    s.add_argument("--orbits", type=_int_list)
    s.add_argument("--ellipse", type=_float_list, help="E/(hbar nu) levels")
    s.add_argument("--cylinder", type=_int_list)
    s.add_argument("--t-min", type=float, dest="t_min")
    s.add_argument("--t-max", type=float, dest="t_max")
    s.add_argument("--samples", type=int)
    s.add_argument("--samples-t", type=int, dest="samples_t")
    return p


@dataclass
class RunConfig:
    command: str
    values: dict
    tolerances: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    @property
    def out(self) -> Path:
        return Path(self.values["out"])

    @property
    def budget(self) -> int:
        return int(self.values["memory_budget_mb"] * 2**20)

    def tol(self, name: str) -> float:
        value = self.tolerances.get(name, TOLERANCES[name])
        if value is None and name == "commutator":
            from .lattice_ops import commutator_tolerance

            return commutator_tolerance(self.values["nmax"])
        return float(value)

    def constants(self):
        from .oscillator import PhysicalConstants

        v = self.values
        if v["units"] == "fundamental":
            return PhysicalConstants.fundamental(nu=v["nu"])
        return PhysicalConstants.explicit(v["hbar"], v["c"], v["l"], v["nu"])

    def as_dict(self) -> dict:
        d = {"command": self.command, **self.values}
        d["tolerances"] = dict(self.tolerances)
        return d


def resolve_config(args: argparse.Namespace) -> RunConfig:
    command = args.command
    values = {**COMMON_DEFAULTS, **DEFAULTS[command]}
    if args.config:
        try:
            file_values = load_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        file_cmd = file_values.pop("command", command)
        if file_cmd != command:
            raise UsageError(f"config is for '{file_cmd}', not '{command}'")
        unknown = set(file_values) - set(values)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        values.update(file_values)
    for key in values:
        if key == "tolerances":
            continue
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    tolerances = dict(values.pop("tolerances") or {})
    if args.tol:
        tolerances.update(dict(args.tol))
    unknown = set(tolerances) - set(TOLERANCES)
    if unknown:
        raise UsageError(f"unknown tolerance names: {sorted(unknown)}")
    cfg = RunConfig(command, values, tolerances)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    v = cfg.values
    for key in ("hbar", "c", "l", "nu", "memory_budget_mb"):
        if not float(v[key]) > 0:
            raise UsageError(f"{key} must be positive")
    if v["units"] == "fundamental" and (v["hbar"], v["c"], v["l"]) != (1.0, 1.0, 1.0):
        raise UsageError("--units fundamental requires hbar = c = l = 1; use --units explicit")
    if "nmax" in v and int(v["nmax"]) < 2:
        raise UsageError(f"nmax must be >= 2, got {v['nmax']}")
    if "mass" in v and float(v["mass"]) < 0:
        raise UsageError("mass must be non-negative")
    if "dt" in v and not float(v["dt"]) > 0:
        raise UsageError("dt must be positive")
    if "steps" in v and int(v["steps"]) < 0:
        raise UsageError("steps must be non-negative")
    if cfg.command == "oscillator":
        if v["grid_points"] < 1 or v["grid_max"] < v["grid_min"]:
            raise UsageError("invalid eigenfunction grid")
        if any(n < 0 for n in v["eigenfunctions"]):
            raise UsageError("eigenfunction levels must be non-negative")
    if cfg.command == "kg" and v["stride"] < 1:
        raise UsageError("stride must be >= 1")
    if cfg.command == "poincare":
        if len(v["translation"]) != 4:
            raise UsageError("translation needs 4 components")
        if len(v["omega"]) != 6:
            raise UsageError("omega needs 6 components")
        if v["nmax"] < 3:
            raise UsageError("poincare needs nmax >= 3")
        if v["nmax"] - v["margin"] < 0:
            raise UsageError("margin leaves an empty interior block")
    if cfg.command == "geometry":
        if not v["orbits"] and not v["ellipse"] and not v["cylinder"]:
            raise UsageError("nothing to do: orbit, ellipse and cylinder lists are all empty")
        if "orbits" in v and not v["orbits"]:
            raise UsageError("orbit list (--orbits) is empty")
        if any(n < 0 for n in v["orbits"] + v["cylinder"]):
            raise UsageError("orbit indices must be non-negative")
        if v["samples"] < 3 or v["samples_t"] < 2:
            raise UsageError("need samples >= 3 and samples_t >= 2")
        if not v["t_min"] < v["t_max"]:
            raise UsageError("t_min must be smaller than t_max")


def _finish(cfg: RunConfig, records, extra_files=()) -> int:
    write_records(cfg.out / "report", records, cfg["format"])
    write_kv_report(cfg.out / "report.txt", records)
    failed = [r["test"] for r in records if r.get("asserted", True) and not r["pass"]]
    for r in records:
        flag = "PASS" if r["pass"] else ("FAIL" if r.get("asserted", True) else "info")
        print(f"[{flag}] {r['test']}: interior={r['norm_interior']:.3e} "
              f"full={r['norm_full']:.3e} tol={r['tolerance']:.1e}")
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _record(test, norm_interior, tolerance, n_max, margin, norm_full=None, asserted=True, compare="lt"):
    norm_full = norm_interior if norm_full is None else norm_full
    ok = norm_interior <= tolerance if compare == "le" else norm_interior < tolerance
    return {
        "test": test,
        "n_max": n_max,
        "margin": margin,
        "norm_interior": float(norm_interior),
        "norm_full": float(norm_full),
        "tolerance": float(tolerance),
        "pass": bool(ok),
        "asserted": asserted,
    }


# --- subcommands ----------------------------------------------------------------


def cmd_ops_check(cfg: RunConfig) -> int:
    from .lattice_ops import (
        TruncatedBasis, build_delta, build_delta_circ, build_delta_prime, build_delta_sharp,
        commutator, identity, interior_norm, max_norm,
    )

    n = cfg["nmax"]
    basis = TruncatedBasis(n)
    m = basis.interior_margin
    S, C = build_delta_sharp(basis), build_delta_circ(basis)
    D, Dp = build_delta(basis), build_delta_prime(basis)
    canon = commutator(S, C) - identity(basis)
    shift = commutator(D, Dp)
    tol = cfg.tol("commutator")
    records = [
        _record("[delta_sharp,delta_circ]-I", interior_norm(canon), tol, n, m, max_norm(canon)),
        # nonzero only in row 0, where zero padding cuts the backward difference
        _record("[delta,delta_prime]", interior_norm(shift), tol, n, m, max_norm(shift), asserted=False),
        _record("delta_sharp+delta_sharp^T", max_norm(S + S.T), 0.0, n, 0, compare="le"),
        _record("delta_circ-delta_circ^T", max_norm(C - C.T), 0.0, n, 0, compare="le"),
    ]
    return _finish(cfg, records)


def cmd_oscillator(cfg: RunConfig) -> int:
    from .lattice_ops import TruncatedBasis, commutator, identity, interior_norm, max_norm
    from .oscillator import (
        build_momentum_operator_1d, build_position_operator_1d, continuum_eigenstate_q,
        gram_matrix, solve_discrete_spectrum, spectrum_table, tabulate, y_ode_residual,
    )

    n = cfg["nmax"]
    basis = TruncatedBasis(n)
    const = cfg.constants()
    rows = spectrum_table(basis, const)
    write_csv(cfg.out / "spectrum.csv", ("N", "E_q", "E_y", "E_discrete"), rows)

    grid = np.linspace(cfg["grid_min"], cfg["grid_max"], cfg["grid_points"])
    ef_rows = []
    for level in cfg["eigenfunctions"]:
        for x, psi in tabulate(continuum_eigenstate_q(level, const), grid):
            ef_rows.append((level, x, psi))
    write_csv(cfg.out / "eigenfunctions.csv", ("N", "x", "psi"), ef_rows)

    hnu = const.hbar_nu
    exact = np.array([(r[0] + 0.5) * hnu for r in rows])
    table = np.array([r[1:] for r in rows])
    spec_dev = float(np.max(np.abs(table - exact[:, None]))) / hnu
    states = solve_discrete_spectrum(basis, const)
    overlap_dev = max(1.0 - abs(s.vector.flat()[s.N]) for s in states if s.interior)

    P, Q = build_momentum_operator_1d(basis, const), build_position_operator_1d(basis, const)
    canon = commutator(P, Q) - identity(basis) * (-1j * const.hbar)
    n_ortho = cfg["n_ortho"]
    gram = gram_matrix(n_ortho, const, method=cfg["quadrature"])
    ortho_dev = float(np.max(np.abs(gram - np.eye(n_ortho + 1))))
    from .oscillator import continuum_eigenstate_y

    ode = max(y_ode_residual(continuum_eigenstate_y(k, const)) for k in range(min(n_ortho, 8) + 1))
    m = basis.interior_margin
    records = [
        _record("spectrum_agreement", spec_dev, cfg.tol("spectrum"), n, m),
        _record("eigenvector_overlap", overlap_dev, cfg.tol("overlap"), n, m),
        _record("[P,Q]+i*hbar", interior_norm(canon), cfg.tol("commutator") * max(1.0, const.hbar),
                n, m, max_norm(canon)),
        _record("hermite_orthonormality", ortho_dev, cfg.tol("orthonormality"), n_ortho, 0),
        _record("y_ode_residual", ode, cfg.tol("ode_residual"), min(n_ortho, 8), 0),
    ]
    return _finish(cfg, records)


def cmd_kg(cfg: RunConfig) -> int:
    from .klein_gordon import (
        evolve_leapfrog, initial_state, kg_residual_3plus1, run_trajectory, trajectory_rows,
    )
    from .lattice_ops import TruncatedBasis

    n, mass, dt, steps = cfg["nmax"], cfg["mass"], cfg["dt"], cfg["steps"]
    bases = (TruncatedBasis(n),) * 3
    state = initial_state(bases, mass, cfg["initial"], cfg["mode"], cfg["seed"], cfg["width"])
    traj = run_trajectory(state, dt, steps)

    write_csv(
        cfg.out / "trajectory.csv",
        ("t", "n1", "n2", "n3", "re_phi", "im_phi"),
        trajectory_rows(traj, cfg["stride"]),
    )
    e = traj.energies()
    es = traj.staggered_energies()
    es_col = np.concatenate([es, [np.nan]]) if len(es) else np.full(len(e), np.nan)
    write_csv(cfg.out / "energy.csv", ("t", "energy", "staggered_energy"),
              zip(traj.times, e, es_col))

    def rel_spread(x):
        if len(x) == 0:
            return 0.0
        scale = abs(x[0])
        spread = float(np.max(x) - np.min(x))
        return spread / scale if scale > 0 else spread

    back = evolve_leapfrog(traj.final_state, -dt, steps)
    rev = float(np.max(np.abs(back.phi.flat() - state.phi.flat())))
    resid = kg_residual_3plus1(traj) if steps >= 2 else 0.0
    records = [
        _record("energy_drift_relative", rel_spread(es), cfg.tol("energy_drift"), n, 0),
        _record("energy_oscillation_relative", rel_spread(e), cfg.tol("energy_drift"), n, 0, asserted=False),
        _record("time_reversal", rev, cfg.tol("reversal"), n, 0),
        _record("kg_residual_max", resid, cfg.tol("reversal"), n, 0, asserted=False),
    ]
    if cfg["initial"] == "eigenmode":
        from .klein_gordon import eigenmodes

        omega, _ = eigenmodes(bases, mass)
        w = omega[cfg["mode"]]
        expected = np.cos(w * (traj.times - traj.times[0]))[:, None] * state.phi.flat()[None, :]
        amp = float(np.max(np.abs(traj.phis - expected)))
        records.append(_record("eigenmode_amplitude", amp, cfg.tol("amplitude"), n, 0,
                               asserted=bool(w * dt <= 0.05)))
    return _finish(cfg, records)


def cmd_poincare(cfg: RunConfig) -> int:
    from .klein_gordon import assemble_kg_operator_4d, initial_state, run_trajectory
    from .lattice_ops import TruncatedBasis, check_dense_budget
    from .poincare import (
        PoincareParams, build_finite_transform, build_generators, check_boost_invariance_3plus1,
        check_casimir_commutation, check_kg_invariance_4d, identity_defect, interior_test_vector,
    )

    n, margin = cfg["nmax"], cfg["margin"]
    bases4 = (TruncatedBasis(n, margin),) * 4
    check_dense_budget(bases4, cfg.budget)
    gens = build_generators(bases4, cfg.budget)
    records = [r.as_dict() for r in check_casimir_commutation(gens, margin, cfg.tol("casimir"))]

    params = PoincareParams.from_upper(cfg["translation"], cfg["omega"])
    translation = PoincareParams(params.c_mu)
    kg4 = assemble_kg_operator_4d(bases4, cfg["mass"], cfg.budget)
    vec = interior_test_vector(bases4, margin, cfg["seed"])

    u0 = build_finite_transform(gens, PoincareParams(), cfg.budget)
    records.append(_record("U(0)=I", identity_defect(u0), cfg.tol("identity"), n, 0, compare="le"))
    ut = build_finite_transform(gens, translation, cfg.budget)
    records.append(_record("translation_orthogonality", ut.orthogonality_defect,
                           cfg.tol("orthogonality"), n, 0))
    records.append(check_kg_invariance_4d(kg4, ut, vec, margin, cfg.tol("translation")).as_dict())
    if not params.is_translation:
        ug = build_finite_transform(gens, params, cfg.budget)
        records.append(_record("general_orthogonality", ug.orthogonality_defect,
                               cfg.tol("orthogonality"), n, 0))
        records.append(check_kg_invariance_4d(kg4, ug, vec, margin, 1e-8, asserted=False).as_dict())

    bases3 = (TruncatedBasis(n),) * 3
    state = initial_state(bases3, cfg["mass"], "eigenmode", cfg["mode"])
    traj = run_trajectory(state, cfg["dt"], cfg["steps"])
    boost = check_boost_invariance_3plus1(traj, params, cfg["dt"], min_slope=cfg.tol("boost_slope"))
    b = boost.as_dict()
    records.append({
        "test": "boost_3plus1_slope",
        "n_max": n,
        "margin": 2,
        "norm_interior": b["slope"],
        "norm_full": b["base_residual"],
        "tolerance": b["tolerance"],
        "pass": b["pass"],
        "asserted": True,
    })
    write_json(cfg.out / "boost_3plus1.json", b)
    return _finish(cfg, records)


def cmd_geometry(cfg: RunConfig) -> int:
    from .geometry import classical_ellipse, orbit_circle, orbit_rows, worldsheet_cylinder

    const = cfg.constants()
    orbits = [orbit_circle(k, cfg["samples"]) for k in cfg["orbits"]]
    ellipses = [classical_ellipse(e, const, cfg["samples"]) for e in cfg["ellipse"]]
    cylinders = [
        worldsheet_cylinder(k, cfg["t_min"], cfg["t_max"], cfg["samples"], cfg["samples_t"])
        for k in cfg["cylinder"]
    ]
    write_csv(cfg.out / "orbits.csv", ("kind", "N", "q", "p"), orbit_rows(orbits + ellipses))
    write_csv(cfg.out / "radii.csv", ("N", "radius", "radius_squared"),
              ((o.N, o.radius, o.radius**2) for o in orbits))
    if cylinders:
        write_csv(cfg.out / "cylinders.csv", ("kind", "N", "q", "p", "t"), orbit_rows(cylinders))
    write_json(cfg.out / "geometry_manifest.json", {
        "orbits": [{"N": o.N, "radius": o.radius, "samples": len(o.points)} for o in orbits],
        "ellipses": [{"level": e.level, "semi_axes": list(e.semi_axes), "samples": len(e.points)}
                     for e in ellipses],
        "cylinders": [{"N": c.N, "radius": c.radius, "t_min": cfg["t_min"], "t_max": cfg["t_max"],
                       "samples_theta": cfg["samples"], "samples_t": cfg["samples_t"]} for c in cylinders],
        "constants": {"hbar": const.hbar, "c": const.c, "l": const.l, "nu": const.nu, "mode": const.mode},
    })
    records = []
    for o in orbits + cylinders:
        dev = float(np.max(np.abs(np.sum(o.points[:, :2] ** 2, axis=1) - (2 * o.N + 1))))
        records.append(_record(f"{o.kind}_{o.N}_radius_law", dev, cfg.tol("radius"), o.N, 0))
    from .geometry import ellipse_level

    for e in ellipses:
        dev = float(np.max(np.abs(ellipse_level(e.points, const) - e.level)))
        records.append(_record(f"ellipse_{e.level:g}_level_set", dev, cfg.tol("radius"), 0, 0))
    return _finish(cfg, records)


COMMANDS = {
    "ops-check": cmd_ops_check,
    "oscillator": cmd_oscillator,
    "kg": cmd_kg,
    "poincare": cmd_poincare,
    "geometry": cmd_geometry,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (UsageError, BasisError, DomainError, ValueError, TypeError) as exc:
        print(f"phasecell {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    meta = {"version": __version__, "created": _dt.datetime.now(_dt.timezone.utc).isoformat()}
    write_manifest(cfg.out / "manifest.yaml", cfg.as_dict(), {**meta, "status": "running"})
    try:
        code = COMMANDS[cfg.command](cfg)
    except StabilityError as exc:
        print(f"phasecell {cfg.command}: stability: {exc}", file=sys.stderr)
        code = EXIT_STABILITY
    except MemoryBudgetError as exc:
        print(f"phasecell {cfg.command}: memory budget: {exc}", file=sys.stderr)
        code = EXIT_BUDGET
    except (BasisError, DomainError) as exc:
        print(f"phasecell {cfg.command}: error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    write_manifest(cfg.out / "manifest.yaml", cfg.as_dict(), {**meta, "status": "done", "exit_code": code})
    return code


if __name__ == "__main__":
    sys.exit(main())
