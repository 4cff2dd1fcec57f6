"""Command-line front end: run an example end to end and write reports and plot data.

Exit status: 0 when the orbit count meets the category bound (or, for
``regularity-so4``, when condition (R) holds), 2 when it does not, 1 on errors.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, config, lie, models, pendulum, reduction, solver
from .errors import SymbreakError
from .report import PersistenceReport, from_critical_set

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2


def write_csv(path: Path, title: str, header, rows, timestamp: bool = True) -> Path:
    with Path(path).open("w", newline="") as fh:
        if timestamp:
            fh.write(f"# symbreak {__version__} {title} generated {_dt.datetime.now().isoformat()}\n")
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) + "" if isinstance(v, (float, np.floating)) else v for v in row])
    return Path(path)


def _num(v):
    return float(v) + 0.0


# --------------------------------------------------------------------------
# problem setup


def family_for(example: str, p: dict):
    if example == "cylinder":
        return models.CylinderCos(p["n"])
    if example == "rigid-fluid-added":
        return models.BodyFluidAdded(p["m"], p["I_B"], p["A"], p["B"])
    if example == "rigid-fluid-shape":
        return models.BodyFluidShape(p["m"], p["I_B"], p["B"], p["rho"])
    if example == "pendulum":
        return models.PendulumGravity()
    raise SymbreakError(f"no family for {example}")


def seed_and_mode(example: str, p: dict):
    if example == "cylinder":
        return models.PhasePoint.cylinder(0.0, 0.0), solver.EQUILIBRIA
    if example.startswith("rigid-fluid"):
        return models.PhasePoint.se2_dual([0.0, np.sqrt(p["casimir"]), 0.0]), solver.EQUILIBRIA
    s = p["s"]
    mode = solver.RelativeEquilibria(lie.CoalgebraVector(lie.SO2, [s]), lie.AlgebraVector(lie.SO2, [s]))
    return models.PhasePoint.tstar_sphere([1.0, 0.0, 0.0], [0.0, s, 0.0]), mode


def _solver_kwargs(p):
    return {"tube_radius": p["tube"], "multistart_count": p["seeds"], "rng_seed": p["seed"], "tol": p["tol"]}


def _flags_for(example, fam, seed, mode) -> dict:
    if isinstance(mode, solver.RelativeEquilibria):
        return solver.assumption_flags(fam, seed, mode.xi0)
    return {}


def solve(example: str, p: dict, lam: float):
    fam = family_for(example, p)
    seed, mode = seed_and_mode(example, p)
    req = solver.SolveRequest(fam, lam, seed, mode=mode, **_solver_kwargs(p))
    cs = solver.find_relative_equilibria(req) if req.relative else solver.find_equilibria(req)
    return fam, seed, mode, cs


# --------------------------------------------------------------------------
# runners; each returns (exit code, report object)


def _verdict_code(verdict: str) -> int:
    return {"satisfied": EXIT_OK, "violated": EXIT_VIOLATION}.get(verdict, EXIT_ERROR)


def _equilibria_rows(cs, label_fn=None):
    for k, cluster in enumerate(cs.clusters):
        for i in cluster:
            pt = cs.points[i]
            row = [k, *(_num(v) for v in pt.point.coords), _num(pt.energy), " ".join(map(str, pt.signature)), pt.residual]
            if pt.velocity is not None:
                row += [_num(v) for v in pt.velocity.coords]
            if label_fn is not None:
                row.append(label_fn(pt))
            yield row


def run_cylinder(cfg: config.RunConfig, out: Path):
    p = cfg.params
    fam, seed, mode, cs = solve("cylinder", p, p["lambda"])
    rep = from_critical_set("cylinder", cs, params=p, defaulted=cfg.defaulted, extra={"diagnostics": cs.diagnostics})
    write_csv(out / "equilibria.csv", "equilibria", ["orbit", "theta", "z", "energy", "signature", "residual"],
              _equilibria_rows(cs))
    rep.write(out)
    return _verdict_code(rep.verdict), rep


def run_fluid(cfg: config.RunConfig, out: Path):
    p, ex = cfg.params, cfg.example
    lam = p["lambda"]
    fam, seed, mode, cs = solve(ex, p, lam)

    def kind(pt):
        return reduction.classify_fixed_point(fam, lam, pt.point.coords).kind

    write_csv(out / "equilibria.csv", "equilibria", ["orbit", "x", "alpha1", "alpha2", "energy", "signature", "residual", "type"],
              _equilibria_rows(cs, kind))
    traj = reduction.integrate(fam, lam, p["nu0"], p["T"], p["dt"])
    traj.to_csv(out / "trajectory.csv")
    het = reduction.detect_heteroclinic(fam, lam, p["casimir"], offset=p["offset"], ball=p["ball"])
    extra = {
        "diagnostics": cs.diagnostics,
        "fixed_point_types": [kind(cs.points[c[0]]) for c in cs.clusters],
        "heteroclinic_connections": het.count if het.applicable else None,
        "heteroclinic_note": het.note,
        "saddle_energy_gap": het.energy_gap,
        "trajectory_energy_drift": traj.energy_drift,
        "trajectory_casimir_drift": traj.casimir_drift,
    }
    rep = from_critical_set(ex, cs, params=p, defaulted=cfg.defaulted, extra=extra)
    rep.write(out)
    return _verdict_code(rep.verdict), rep


def run_pendulum(cfg: config.RunConfig, out: Path):
    p = cfg.params
    lam, s = p["lambda"], p["s"]
    fam, seed, mode, cs = solve("pendulum", p, lam)
    r = pendulum.solve_r(s, lam)
    write_csv(out / "equilibria.csv", "relative equilibria",
              ["orbit", "x1", "x2", "x3", "y1", "y2", "y3", "energy", "signature", "residual", "velocity"],
              _equilibria_rows(cs))
    pendulum.emit_diagram(lam, np.geomspace(p["s_min"], p["s_max"], p["samples"]), out / "bifurcation.csv")
    extra = {
        "diagnostics": cs.diagnostics,
        "velocity_closed_form": r,
        "height_closed_form": -lam / r**2,
        "rank_zero": [[pt.energy, pt.momentum, label] for pt, label in pendulum.rank_zero_points(lam)],
    }
    rep = from_critical_set("pendulum", cs, flags=_flags_for("pendulum", fam, seed, mode), params=p,
                            defaulted=cfg.defaulted, extra=extra)
    rep.write(out)
    return _verdict_code(rep.verdict), rep


def regularity_so4(subalgebra: str, chi, rho, xi=None) -> dict:
    """Condition (R) for so(3)_rot or so(3)_diag inside so(4) at mu = (chi, rho)."""
    emb = lie.SO3_ROT_IN_SO4 if subalgebra == "rot" else lie.SO3_DIAG_IN_SO4
    mu = lie.CoalgebraVector(lie.SO4, list(chi) + list(rho))
    h_mu = lie.sub_stabilizer(mu, emb)
    if xi is None:
        # generic element of h_mu: irrational weights avoid accidental extra symmetry
        w = np.sqrt([2.0, 3.0, 5.0])[: h_mu.shape[1]]
        xi_h = h_mu @ w if h_mu.size else np.zeros(3)
    else:
        xi_h = np.asarray(xi, dtype=float)
    xi_g = emb(lie.AlgebraVector(lie.SO3, xi_h))
    res = lie.check_R(mu, xi_g)
    return {
        "example": "regularity-so4",
        "subalgebra": subalgebra,
        "chi": [float(v) for v in chi],
        "rho": [float(v) for v in rho],
        "xi": [_num(v) for v in xi_g.coords],
        "xi_given": xi is not None,
        "R": "holds" if res.holds else "fails",
        "dim_g_mu": res.dims[0],
        "dim_g_xi": res.dims[1],
        "dim_h_mu": int(h_mu.shape[1]),
        "witness": None if res.witness is None else [_num(v) for v in res.witness],
    }


def run_regularity(cfg: config.RunConfig, out: Path):
    p = cfg.params
    rep = regularity_so4(p["subalgebra"], p["chi"], p["rho"], p["xi"])
    (out / "report.json").write_text(json.dumps(rep, indent=2, sort_keys=True) + "\n")
    lines = [f"{k}: {v}" for k, v in rep.items()]
    (out / "report.txt").write_text("\n".join(lines) + "\n")
    return (EXIT_OK if rep["R"] == "holds" else EXIT_VIOLATION), rep


def run_sweep(cfg: config.RunConfig, out: Path):
    p = dict(cfg.params)
    ex = p["example"]
    fam = family_for(ex, p)
    seed, mode = seed_and_mode(ex, p)
    cont = solver.continuation(fam, p["lambda_grid"], seed, mode=mode, **_solver_kwargs(p))
    flags = _flags_for(ex, fam, seed, mode)
    nodes, rows, first_change = [], [], None
    for lam, cs in zip(cont.lambdas, cont.sets):
        if cs.skipped:
            rows.append([lam, "", "", "", "skipped", 0])
            nodes.append(None)
            continue
        rep = from_critical_set(ex, cs, flags=flags, params={})
        changed = int(cs.orbit_count != cont.predicted)
        if changed and first_change is None:
            first_change = lam
        rows.append([lam, len(cs.points), cs.orbit_count, cs.bound, cs.verdict, changed])
        nodes.append(rep.to_dict())
    write_csv(out / "sweep.csv", f"sweep {ex}", ["lambda", "points", "orbits", "bound", "verdict", "count_changed"], rows)
    params = {k: v for k, v in p.items()}
    summary = {
        "example": "sweep",
        "target": ex,
        "params": params,
        "defaulted": cfg.defaulted,
        "predicted_orbits": cont.predicted,
        "persists_until": cont.persists_until,
        "first_change": first_change,
        "notices": cont.notices,
        "nodes": nodes,
    }
    (out / "report.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    txt = [f"sweep of {ex} over {len(cont.lambdas)} lambda values"]
    txt += [f"lambda {r[0]!r}: points {r[1]}, orbits {r[2]}, bound {r[3]}, {r[4]}" for r in rows]
    txt.append(f"count constant up to lambda = {cont.persists_until}")
    if first_change is not None:
        txt.append(f"count first changes at lambda = {first_change}")
    txt += cont.notices
    (out / "report.txt").write_text("\n".join(txt) + "\n")
    violated = any(n is not None and n["verdict"] != "satisfied" for n in nodes)
    return (EXIT_VIOLATION if violated else EXIT_OK), summary


RUNNERS = {
    "cylinder": run_cylinder,
    "rigid-fluid-added": run_fluid,
    "rigid-fluid-shape": run_fluid,
    "pendulum": run_pendulum,
    "regularity-so4": run_regularity,
    "sweep": run_sweep,
}


# --------------------------------------------------------------------------
# argument parsing


def _flag(key: str) -> list[str]:
    names = ["--" + key.replace("_", "-")]
    if "_" in key:
        names.append("--" + key)
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symbreak", description="Persistence of (relative) equilibria under symmetry breaking.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    all_keys = {}
    for ex in config.SWEEPABLE:
        all_keys.update(config.SCHEMA[ex])
    schemas = dict(config.SCHEMA)
    schemas["sweep"] = {"example": None, "lambda_grid": None, **{k: v for k, v in all_keys.items() if k != "lambda"}}
    for ex in config.EXAMPLES:
        sp = sub.add_parser(ex)
        sp.add_argument("--config", help="INI file with a section per example")
        sp.add_argument("--out", default=".", help="output directory (created if missing)")
        for key in schemas[ex]:
            sp.add_argument(*_flag(key), dest=key, default=None, metavar="VALUE")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    ex = args.command
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "out")}
    try:
        file_values = config.read_section(args.config, ex) if args.config else {}
        cfg = config.build(ex, file_values, flags, args.out)
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        code, rep = RUNNERS[ex](cfg, cfg.output_dir)
    except SymbreakError as exc:
        problems = getattr(exc, "problems", None) or [str(exc)]
        for msg in problems:
            print(f"symbreak: error: {msg}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError) as exc:
        print(f"symbreak: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if isinstance(rep, PersistenceReport):
        sys.stdout.write(rep.summary())
    else:
        sys.stdout.write((cfg.output_dir / "report.txt").read_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
