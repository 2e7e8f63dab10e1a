"""Command-line entry point.

Every subcommand prints one canonical JSON document on stdout; diagnostics go
to stderr. Exit codes: 0 success, 1 input error, 2 domain error (an
incompatible measurement context), 3 golden mismatch. Output is byte-stable:
orderings are canonical, floats carry 17 significant digits, and the bundled
scenarios ship golden copies checked via ``scenario NAME --check``.
"""

from __future__ import annotations

import functools
import sys
from dataclasses import dataclass

import click
import numpy as np

from . import context as ctx_mod
from . import pretopology, scenarios, sigma_measure, spinlab, star_gns
from .dynsys import DynamicalSystem, Subset, Universe, reach
from .errors import (
    ContextIncompatible,
    EmergentSpaceError,
    GoldenMismatch,
    NotSelfAdjoint,
    SchemaError,
    UnknownScenario,
)
from .io import (
    canonical_json,
    parse_matrix_file,
    parse_properties_file,
    parse_subset_arg,
    parse_system_file,
    parse_weights_file,
    write_csv,
)

__all__ = ["main"]


@dataclass(frozen=True)
class ToleranceProfile:
    hermiticity: float
    commutation: float
    rank_cut: float
    orbit: float


PROFILES = {
    "default": ToleranceProfile(1e-10, 1e-10, 1e-9, 1e-6),
    "strict": ToleranceProfile(1e-12, 1e-12, 1e-12, 1e-9),
}


@dataclass
class CliConfig:
    seed: int
    profile: ToleranceProfile


def emit(payload: dict, out: str | None = None) -> None:
    text = canonical_json(payload) + "\n"
    click.echo(text, nl=False)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def cli_errors(fn):
    """Map package errors to the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ContextIncompatible as exc:
            emit(
                {
                    "error": "ContextIncompatible",
                    "i": exc.i,
                    "j": exc.j,
                    "commutator_norm": exc.commutator_norm,
                }
            )
            sys.exit(2)
        except GoldenMismatch as exc:
            click.echo(str(exc), err=True)
            sys.exit(3)
        except (SchemaError, UnknownScenario, EmergentSpaceError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except (FileNotFoundError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


@click.group()
@click.option("--seed", default=0, show_default=True, help="Seed for seeded retries and sampling.")
@click.option(
    "--tolerance-profile",
    type=click.Choice(sorted(PROFILES)),
    default="default",
    show_default=True,
    help="Validation tolerances used by the numeric subcommands.",
)
@click.pass_context
def main(ctx, seed, tolerance_profile):
    """Spatial structure from dynamics and observation.

    Reachability pre-topologies of finite dynamical systems, sigma-algebras
    from observational distinctions, GNS representations of matrix
    *-algebras, observable-induced measure contexts, and a spin-precession
    laboratory.
    """
    ctx.obj = CliConfig(seed=seed, profile=PROFILES[tolerance_profile])


def _system_and_horizon(system: str, horizon: int | None) -> tuple[DynamicalSystem, int]:
    sys_ = parse_system_file(system)
    return sys_, sys_.time.horizon if horizon is None else horizon


def _subset_json(s: Subset) -> list[str]:
    return list(s.labels())


@main.command("reach")
@click.option("--system", required=True, type=click.Path(), help="System JSON file.")
@click.option("--subset", "subset_arg", default=None, help='Initial region, e.g. "1,2,3".')
@click.option("--trajectory", "trajectory_of", default=None,
              help="Emit the ordered orbit of one state instead.")
@click.option("--horizon", type=int, default=None, help="Time horizon (default: the system's).")
@click.option("--out", type=click.Path(), default=None, help="Also write the JSON to this file.")
@click.pass_obj
@cli_errors
def reach_cmd(cfg, system, subset_arg, trajectory_of, horizon, out):
    """Reachability domain of a region, or the trajectory of a point."""
    sys_, horizon = _system_and_horizon(system, horizon)
    if trajectory_of is not None:
        orbit = sys_.trajectory(trajectory_of.strip(), horizon)
        emit(
            {
                "elements": list(sys_.labels),
                "horizon": horizon,
                "start": trajectory_of.strip(),
                "trajectory": list(orbit),
                "visited": _subset_json(sys_.subset(set(orbit))),
            },
            out,
        )
        return
    if subset_arg is None:
        raise SchemaError("/", "--subset or --trajectory", "nothing")
    region = parse_subset_arg(sys_.universe, subset_arg)
    r = reach(sys_, region, horizon)
    emit(
        {
            "elements": list(sys_.labels),
            "horizon": horizon,
            "source": _subset_json(region),
            "closure": _subset_json(r.members),
            "is_closed": r.members.mask == region.mask,
        },
        out,
    )


#: closed families larger than this are summarized by their count only
_FAMILY_EMIT_CAP = 256


def _verdict_json(v: pretopology.TopologyVerdict) -> dict:
    out = {
        "horizon": v.horizon,
        "classification": v.classification.value,
        "closure_idempotent": v.closure_idempotent,
        "axioms": {
            "empty_closed": v.axioms.empty_closed,
            "full_closed": v.axioms.full_closed,
            "closed_under_intersection": v.axioms.closed_under_intersection,
            "closed_under_union": v.axioms.closed_under_union,
        },
        "closed_set_count": len(v.closed_family),
        "exhaustive": v.exhaustive,
        "double_closure_is_double_horizon": v.double_closure_is_double_horizon,
    }
    if len(v.closed_family) <= _FAMILY_EMIT_CAP:
        out["closed_family"] = [_subset_json(s) for s in v.closed_family]
    return out


@main.command("topology")
@click.option("--system", required=True, type=click.Path())
@click.option("--horizon", type=int, default=None)
@click.option("--subset", "subset_arg", default=None, help="Classify one region instead.")
@click.option("--saturate", is_flag=True, help="Also report the verdict at horizon |X|.")
@click.option("--sample", type=int, default=None, help="Sampled verdict for large state spaces.")
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
@cli_errors
def topology_cmd(cfg, system, horizon, subset_arg, saturate, sample, out):
    """Closed/open classification or the full topology verdict."""
    sys_, horizon = _system_and_horizon(system, horizon)
    if subset_arg is not None:
        region = parse_subset_arg(sys_.universe, subset_arg)
        rep = pretopology.classify_subset(sys_, region, horizon)
        payload = {
            "horizon": horizon,
            "subset": _subset_json(rep.subset),
            "closure": _subset_json(rep.closure),
            "is_closed": rep.is_closed,
            "is_open": rep.is_open,
            "interior": _subset_json(rep.interior),
        }
    else:
        verdict = pretopology.check_axioms(
            sys_, horizon, sample_limit=sample, seed=cfg.seed
        )
        payload = _verdict_json(verdict)
        if saturate:
            sat = pretopology.check_axioms(
                sys_, sys_.size, sample_limit=sample, seed=cfg.seed
            )
            payload["saturated"] = _verdict_json(sat)
    emit(payload, out)


def _algebra_json(algebra: sigma_measure.SigmaAlgebra, include_sets: bool) -> dict:
    payload = {
        "universe": list(algebra.universe.labels),
        "atoms": [_subset_json(a) for a in algebra.atoms],
        "set_count": algebra.n_sets,
    }
    if include_sets:
        payload["sets"] = [_subset_json(s) for s in algebra.sets()]
    return payload


@main.command("sigma")
@click.option("--system", type=click.Path(), default=None)
@click.option("--universe", "universe_arg", default=None, help='Ground set, e.g. "1,2,3,4,5".')
@click.option("--properties", type=click.Path(), multiple=True, help="Property JSON file(s).")
@click.option("--from-reachability", is_flag=True, help="Generate from reachability domains.")
@click.option("--horizon", type=int, default=None)
@click.option("--sets", "include_sets", is_flag=True, help="Include the full member list.")
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
@cli_errors
def sigma_cmd(cfg, system, universe_arg, properties, from_reachability, horizon, include_sets, out):
    """Sigma-algebra from properties or from reachability domains."""
    if from_reachability:
        if system is None:
            raise SchemaError("/", "--system file with --from-reachability", "nothing")
        sys_, horizon = _system_and_horizon(system, horizon)
        algebra = sigma_measure.sigma_from_reachability(sys_, horizon)
    else:
        if system is not None:
            universe = parse_system_file(system).universe
        elif universe_arg is not None:
            universe = Universe.of([s.strip() for s in universe_arg.split(",") if s.strip()])
        else:
            raise SchemaError("/", "--system or --universe", "nothing")
        props = [p for path in properties for p in parse_properties_file(path)]
        algebra = sigma_measure.generate_sigma(props, universe)
    emit(_algebra_json(algebra, include_sets), out)


@main.command("measure")
@click.option("--system", type=click.Path(), default=None)
@click.option("--universe", "universe_arg", default=None)
@click.option("--properties", type=click.Path(), multiple=True)
@click.option("--discrete", is_flag=True, help="Use the power-set algebra (each element its own atom).")
@click.option("--weights", "weights_path", required=True, type=click.Path(),
              help="Point-weight JSON file; weights sum within atoms.")
@click.option("--expect", "expect_path", type=click.Path(), default=None,
              help="Real function JSON ({label: value}); adds its expectation.")
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
@cli_errors
def measure_cmd(cfg, system, universe_arg, properties, discrete, weights_path, expect_path, out):
    """Validate a measure on a property algebra; optionally take an expectation."""
    if system is not None:
        universe = parse_system_file(system).universe
    elif universe_arg is not None:
        universe = Universe.of([s.strip() for s in universe_arg.split(",") if s.strip()])
    else:
        raise SchemaError("/", "--system or --universe", "nothing")
    if discrete:
        atoms = tuple(Subset.from_labels(universe, [lab]) for lab in universe.labels)
        algebra = sigma_measure.SigmaAlgebra(universe, atoms)
    else:
        if not properties:
            raise SchemaError("/", "--properties or --discrete", "nothing")
        props = [p for path in properties for p in parse_properties_file(path)]
        algebra = sigma_measure.generate_sigma(props, universe)
    weights = parse_weights_file(weights_path)
    m = sigma_measure.Measure.from_point_weights(algebra, weights)
    report = sigma_measure.validate_measure(m)
    payload = {
        "atoms": [_subset_json(a) for a in algebra.atoms],
        "atom_weights": [float(w) for w in m.weights],
        "total": m.total,
        "report": {
            "non_negative": report.non_negative,
            "min_weight": report.min_weight,
            "additive": report.additive,
            "additivity_deviation": report.additivity_deviation,
            "normalization_deviation": report.normalization_deviation,
        },
    }
    if expect_path is not None:
        fvals = parse_weights_file(expect_path)
        payload["expectation"] = sigma_measure.expectation(fvals, m)
    emit(payload, out)


@main.command("gns")
@click.option("--algebra", "algebra_path", type=click.Path(), default=None,
              help='JSON file {"generators": [matrix, ...]}.')
@click.option("--state", "state_path", type=click.Path(), default=None,
              help="Density-matrix JSON file.")
@click.option("--oscillator", "oscillator_n", type=int, default=None,
              help="Run the truncated ladder demo with N levels instead.")
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
@cli_errors
def gns_cmd(cfg, algebra_path, state_path, oscillator_n, out):
    """GNS construction: quotient dimension, residuals, and the cyclic vector."""
    if oscillator_n is not None:
        osc = star_gns.truncated_oscillator(oscillator_n)
        alg, st, rep = osc.algebra, osc.state, osc.representation
        extra = {
            "levels": oscillator_n,
            "ground_number_expectation": float(st.omega(osc.raising @ osc.lowering).real),
            "pi_a_omega_norm": float(np.linalg.norm(rep.pi(osc.lowering) @ rep.omega_vec)),
        }
    else:
        if algebra_path is None or state_path is None:
            raise SchemaError("/", "--algebra and --state (or --oscillator N)", "nothing")
        import json as _json

        with open(algebra_path, "r", encoding="utf-8") as fh:
            obj = _json.load(fh)
        if not isinstance(obj, dict) or "generators" not in obj:
            raise SchemaError("/generators", "array of matrices", repr(type(obj).__name__))
        from .io import parse_matrix

        gens = [
            parse_matrix(g, f"/generators/{i}/") for i, g in enumerate(obj["generators"])
        ]
        alg = star_gns.star_algebra(gens)
        rho, _name = parse_matrix_file(state_path)
        st = star_gns.AlgState(alg, rho)
        rep = star_gns.gns(alg, st, rank_tolerance=cfg.profile.rank_cut)
        extra = {}

    probe = alg.basis[: min(alg.size, 12)]
    hom_defect = 0.0
    adj_defect = 0.0
    for a in probe:
        pa = rep.pi(a)
        adj_defect = max(adj_defect, float(np.abs(rep.pi(a.conj().T) - pa.conj().T).max()))
        for b in probe:
            hom_defect = max(
                hom_defect, float(np.abs(rep.pi(a @ b) - pa @ rep.pi(b)).max())
            )
    payload = {
        "algebra_size": alg.size,
        "quotient_dim": rep.quotient_dim,
        "omega_norm": float(np.linalg.norm(rep.omega_vec)),
        "reproduction_defect": rep.reproduction_defect(),
        "homomorphism_defect": hom_defect,
        "adjoint_defect": adj_defect,
        "omega_vec": [[float(c.real), float(c.imag)] for c in rep.omega_vec],
        **extra,
    }
    emit(payload, out)


def _context_json(c: ctx_mod.SpectralContext) -> dict:
    payload = {
        "observables": [o.name for o in c.observables],
        "points": [list(p) for p in c.points],
        "weights": list(c.weights),
    }
    if len(c.observables) == 1:
        payload["expectation"] = c.expectation()
    else:
        payload["expectations"] = [c.expectation(i) for i in range(len(c.observables))]
    return payload


@main.command("context")
@click.option("--state", "state_path", type=click.Path(), default=None,
              help="Density-matrix JSON file (not needed with --gelfand).")
@click.option("--observables", "observable_paths", type=click.Path(), multiple=True, required=True)
@click.option("--joint", is_flag=True, help="Build the joint context of all observables.")
@click.option("--gelfand", is_flag=True,
              help="Emit only the joint-eigenvalue points (characters) of the family.")
@click.option("--plot", "plot_path", type=click.Path(), default=None,
              help="Render the weights as a bar chart to this file.")
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
@cli_errors
def context_cmd(cfg, state_path, observable_paths, joint, gelfand, plot_path, out):
    """Observable-induced measure space(s) for a fixed state."""
    obs = []
    for path in observable_paths:
        m, name = parse_matrix_file(path)
        defect = star_gns.hermiticity_defect(m)
        if defect > cfg.profile.hermiticity:
            raise NotSelfAdjoint(defect, name)
        obs.append(ctx_mod.Observable(m, name))
    if gelfand:
        points = ctx_mod.gelfand_points(obs, tol=cfg.profile.commutation, seed=cfg.seed)
        emit(
            {
                "observables": [o.name for o in obs],
                "points": [list(p) for p in points],
            },
            out,
        )
        return
    if state_path is None:
        raise SchemaError("/", "--state file (or --gelfand)", "nothing")
    rho, _ = parse_matrix_file(state_path)
    if joint:
        c = ctx_mod.joint_context(obs, rho, tol=cfg.profile.commutation, seed=cfg.seed)
        payload = _context_json(c)
        to_plot = c
    else:
        solos = [ctx_mod.spectral_context(o, rho) for o in obs]
        payload = {"contexts": [_context_json(c) for c in solos]}
        to_plot = solos[0]
    if plot_path:
        from .plotting import plot_context_weights

        plot_context_weights(to_plot, plot_path)
        payload["figure"] = plot_path
    emit(payload, out)


_STATE0_CHOICES = {
    "down": lambda: spinlab.SpinState.down(),
    "up": lambda: spinlab.SpinState.up(),
    "plus1": lambda: spinlab.SpinState.pauli_eigenstate(1, +1),
    "minus1": lambda: spinlab.SpinState.pauli_eigenstate(1, -1),
    "plus2": lambda: spinlab.SpinState.pauli_eigenstate(2, +1),
    "minus2": lambda: spinlab.SpinState.pauli_eigenstate(2, -1),
}


def _parse_state0(arg: str) -> spinlab.SpinState:
    if arg in _STATE0_CHOICES:
        return _STATE0_CHOICES[arg]()
    parts = [s.strip() for s in arg.split(",")]
    if len(parts) != 4:
        raise SchemaError(
            "/state0", "one of " + "|".join(sorted(_STATE0_CHOICES)) + ' or "re0,im0,re1,im1"', arg
        )
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise SchemaError("/state0", "four numbers", arg) from None
    return spinlab.SpinState((complex(vals[0], vals[1]), complex(vals[2], vals[3])))


@main.command("spin")
@click.option("--field", "field_arg", required=True, help='Magnetic field, e.g. "0,0,1".')
@click.option("--g", "g_factor", type=float, default=2.0, show_default=True)
@click.option("--mass", type=float, default=1.0, show_default=True)
@click.option("--hbar", type=float, default=1.0, show_default=True)
@click.option("--charge", type=float, default=1.0, show_default=True)
@click.option("--state0", default=None, help="Initial state (default depends on --context).")
@click.option("--dt", type=float, default=None, help="Sample spacing (default 0.01/rate).")
@click.option("--steps", type=int, default=700, show_default=True)
@click.option("--context", "scenario_kind", type=click.Choice(["psi3", "psi2", "corotating"]),
              default="psi3", show_default=True,
              help="Measurement scenario: which observable fixes the initial state.")
@click.option("--out", type=click.Path(), default=None, help="Write t,bx,by,bz CSV here.")
@click.option("--plot", "plot_path", type=click.Path(), default=None,
              help="Render the orbit figure to this file.")
@click.pass_obj
@cli_errors
def spin_cmd(cfg, field_arg, g_factor, mass, hbar, charge, state0, dt, steps,
             scenario_kind, out, plot_path):
    """Sample a precession orbit; emit a CSV trajectory and a JSON report."""
    try:
        field = tuple(float(s) for s in field_arg.split(","))
    except ValueError:
        raise SchemaError("/field", 'three numbers "bx,by,bz"', field_arg) from None
    if len(field) != 3:
        raise SchemaError("/field", 'three numbers "bx,by,bz"', field_arg)
    sys_ = spinlab.SpinSystem(field, g=g_factor, mass=mass, hbar=hbar, charge=charge)
    if state0 is not None:
        psi0 = _parse_state0(state0)
    elif scenario_kind == "psi2":
        psi0 = spinlab.SpinState.pauli_eigenstate(2, +1)
    else:
        psi0 = spinlab.SpinState.down()
    dt = 0.01 / sys_.rate if dt is None else dt
    report = spinlab.reachability_orbit(sys_, psi0, dt=dt, steps=steps,
                                        tol=cfg.profile.orbit)
    payload = {
        "rate": sys_.rate,
        "cycle_time": sys_.cycle_time,
        "axis": list(report.plane_axis),
        "classification": report.classification.value,
        "period_estimate": report.period_estimate,
        "axis_offset": report.axis_offset,
        "radius": report.radius,
        "max_norm_deviation": report.max_norm_deviation(),
        "samples": len(report.times),
    }
    if scenario_kind == "corotating":
        residuals = [spinlab.corotating_eigencheck(sys_, t) for t in report.times]
        payload["corotating_max_residual"] = max(residuals)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            write_csv(
                fh,
                ("t", "bx", "by", "bz"),
                (
                    (t, b[0], b[1], b[2])
                    for t, b in zip(report.times, report.bloch_samples)
                ),
            )
        payload["csv"] = out
    if plot_path:
        from .plotting import plot_orbit

        plot_orbit(report, plot_path)
        payload["figure"] = plot_path
    emit(payload)


@main.command("scenario")
@click.argument("name", required=False)
@click.option("--list", "list_all", is_flag=True, help="List scenario names.")
@click.option("--check", is_flag=True, help="Compare byte-for-byte against the golden file.")
@click.option("--N", "n_param", type=int, default=None,
              help="Level count for the oscillator scenario.")
@click.option("--write-golden", is_flag=True,
              help="Regenerate every golden file in place.")
@click.pass_obj
@cli_errors
def scenario_cmd(cfg, name, list_all, check, n_param, write_golden):
    """Run a named demonstration scenario (golden-checked with --check)."""
    if write_golden:
        written = scenarios.write_golden_files()
        emit({"written": written})
        return
    if list_all or name is None:
        emit({"scenarios": sorted(scenarios.SCENARIOS)})
        return
    overrides = {}
    if n_param is not None:
        overrides["N"] = n_param
    if check:
        registered = scenarios.SCENARIOS.get(name)
        if overrides and (registered is None or overrides != registered.params):
            raise SchemaError("/check", "default parameters under --check", repr(overrides))
        rendered = scenarios.check_scenario(name)
        click.echo(rendered, nl=False)
        return
    payload = scenarios.run_scenario(name, **overrides)
    emit(payload)
