"""Canned demonstration scenarios with byte-stable golden outputs.

Each scenario rebuilds one of the package's reference computations from
fixed inputs and emits a canonical JSON payload. Golden copies live in the
``golden/`` package directory (override with EMERGENT_SPACE_GOLDEN_DIR);
``--check`` re-runs a scenario and demands byte identity with its golden
file, which is what the determinism guarantee of the CLI is tested against.
"""

from __future__ import annotations

import difflib
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

import numpy as np

from . import context as ctx_mod
from . import pretopology, sigma_measure, spinlab, star_gns
from .dynsys import Subset, TimeModel, Universe, build_system, reach
from .errors import ContextIncompatible, GoldenMismatch, UnknownScenario
from .io import canonical_json, matrix_json

__all__ = [
    "Scenario",
    "SCENARIOS",
    "run_scenario",
    "check_scenario",
    "golden_path",
    "write_golden_files",
]


def _cyclic5():
    return build_system(
        [1, 2, 3, 4, 5], {1: 2, 2: 3, 3: 4, 4: 5, 5: 1}, TimeModel()
    )


def _shift2_on4():
    return build_system([1, 2, 3, 4], {1: 3, 2: 4, 3: 1, 4: 2}, TimeModel())


def _labels(s: Subset) -> list[str]:
    return list(s.labels())


# ---------------------------------------------------------------------------
# scenario payload builders


def _sc_system() -> dict:
    sys = _cyclic5()
    return {
        "elements": list(sys.labels),
        "transitions": {lab: sys.labels[sys.step[i]] for i, lab in enumerate(sys.labels)},
        "time_kind": sys.time.kind.value,
        "wraps_around": sys.evolve("5", 1) == "1",
    }


def _sc_evolve() -> dict:
    sys = _cyclic5()
    return {"start": "3", "steps": 1, "result": sys.evolve("3", 1)}


def _sc_reach() -> dict:
    sys = _cyclic5()
    r = reach(sys, sys.subset([1, 2, 3]), 1)
    return {"closure": _labels(r.members)}


def _sc_invariant() -> dict:
    sys = _shift2_on4()
    region = sys.subset([2, 4])
    r = reach(sys, region, 1)
    return {
        "source": _labels(region),
        "closure": _labels(r.members),
        "is_closed": r.members.mask == region.mask,
    }


def _sc_clopen() -> dict:
    sys = _shift2_on4()
    rep = pretopology.classify_subset(sys, sys.subset([2, 4]), 1)
    return {
        "subset": _labels(rep.subset),
        "is_closed": rep.is_closed,
        "is_open": rep.is_open,
        "interior": _labels(rep.interior),
    }


def _sc_interior() -> dict:
    sys = _cyclic5()
    rep = pretopology.classify_subset(sys, sys.subset([1, 2, 3]), 1)
    return {
        "subset": _labels(rep.subset),
        "closure": _labels(rep.closure),
        "is_open": rep.is_open,
        "interior": _labels(rep.interior),
    }


#: the reference member list quoted for the even/prime example; closure
#: under complement and union necessarily adds three more sets
_QUOTED_MEMBERS = (
    (),
    ("2", "4"),
    ("1", "3", "5"),
    ("2", "3", "5"),
    ("2", "3", "4", "5"),
    ("2",),
    ("1", "2", "3", "5"),
    ("1", "2", "4"),
    ("1", "3", "4", "5"),
    ("1",),
    ("3", "5"),
    ("4",),
    ("1", "2", "3", "4", "5"),
)


def _even_prime_algebra():
    u5 = Universe.of([1, 2, 3, 4, 5])
    p_even = sigma_measure.PropertyFn.from_predicate("even", u5, lambda l: int(l) % 2 == 0)
    p_prime = sigma_measure.PropertyFn.from_predicate("prime", u5, lambda l: int(l) in (2, 3, 5))
    return u5, p_even, p_prime, sigma_measure.generate_sigma([p_even, p_prime], u5)


def _sc_sigma() -> dict:
    u5, p_even, p_prime, algebra = _even_prime_algebra()
    members = {s.labels() for s in algebra.sets()}
    quoted_present = all(q in members for q in _QUOTED_MEMBERS)
    extras = sorted(
        (m for m in members if m not in _QUOTED_MEMBERS),
        key=lambda t: (len(t), t),
    )
    even_and_not_prime = (
        p_even.support(u5) & p_prime.support(u5).complement()
    )
    return {
        "atoms": [_labels(a) for a in algebra.atoms],
        "set_count": algebra.n_sets,
        "quoted_members_present": quoted_present,
        "quoted_member_count": len(_QUOTED_MEMBERS),
        "closure_extras": [list(t) for t in extras],
        "even_and_not_prime": _labels(even_and_not_prime),
    }


def _sc_even() -> dict:
    u5 = Universe.of([1, 2, 3, 4, 5])
    p_even = sigma_measure.PropertyFn.from_predicate("even", u5, lambda l: int(l) % 2 == 0)
    algebra = sigma_measure.generate_sigma([p_even], u5)
    return {
        "atoms": [_labels(a) for a in algebra.atoms],
        "sets": [_labels(s) for s in algebra.sets()],
    }


def _sc_commutator() -> dict:
    s1, s2, s3 = spinlab.PAULI
    comm = star_gns.commutator(s1, s2)
    residual = float(np.abs(comm - 2j * s3).max())
    return {
        "commutator": matrix_json(comm),
        "residual_vs_2i_sigma3": residual,
    }


def _sc_gns_m2() -> dict:
    alg = star_gns.full_matrix_algebra(2)
    out = {}
    for key, rho in (
        ("vector_state", np.array([[1, 0], [0, 0]], dtype=complex)),
        ("tracial_state", np.eye(2, dtype=complex) / 2),
    ):
        st = star_gns.AlgState(alg, rho)
        rep = star_gns.gns(alg, st)
        out[key] = {
            "quotient_dim": rep.quotient_dim,
            "omega_norm": float(np.linalg.norm(rep.omega_vec)),
            "reproduction_defect": rep.reproduction_defect(),
        }
    return out


def _sc_oscillator(N: int = 4) -> dict:
    osc = star_gns.truncated_oscillator(N)
    rep = osc.representation
    ground = osc.state.omega(osc.raising @ osc.lowering)
    pi_a_omega = float(np.linalg.norm(rep.pi(osc.lowering) @ rep.omega_vec))
    ladder = [rep.omega_vec]
    pi_up = rep.pi(osc.raising)
    for n in range(1, N - 1):
        ladder.append(pi_up @ ladder[-1] / math.sqrt(n))
    gram = np.array([[si.conj() @ sj for sj in ladder] for si in ladder])
    ortho_defect = float(np.abs(gram - np.eye(len(ladder))).max())
    corner = star_gns.commutator(osc.lowering, osc.raising)[N - 1, N - 1]
    return {
        "levels": N,
        "algebra_size": osc.algebra.size,
        "quotient_dim": rep.quotient_dim,
        "ground_number_expectation": float(ground.real),
        "pi_a_omega_norm": pi_a_omega,
        "ladder_orthonormality_defect": ortho_defect,
        "commutator_corner": float(corner.real),
    }


def _sc_context_spin3() -> dict:
    psi3 = spinlab.spin_operator(3)
    rho = np.array([[1, 0], [0, 0]], dtype=complex)
    c = ctx_mod.spectral_context(ctx_mod.Observable(psi3, "spin3"), rho)
    return {
        "points": [list(p) for p in c.points],
        "weights": list(c.weights),
        "expectation": c.expectation(),
    }


def _sc_incompatible() -> dict:
    s1 = ctx_mod.Observable(spinlab.spin_operator(1), "spin1")
    s2 = ctx_mod.Observable(spinlab.spin_operator(2), "spin2")
    rho = np.array([[1, 0], [0, 0]], dtype=complex)
    solo = [ctx_mod.spectral_context(o, rho) for o in (s1, s2)]
    try:
        ctx_mod.joint_context([s1, s2], rho)
        joint_error = None
        commutator_norm = 0.0
    except ContextIncompatible as exc:
        joint_error = type(exc).__name__
        commutator_norm = exc.commutator_norm
    return {
        "commutes": ctx_mod.commutes(s1, s2),
        "solo_weights": [list(c.weights) for c in solo],
        "joint_error": joint_error,
        "commutator_norm": commutator_norm,
    }


def _precession_system() -> spinlab.SpinSystem:
    return spinlab.SpinSystem(b_field=(1.0, 1.0, 1.0))


def _sc_corotating() -> dict:
    sys = _precession_system()
    probe_times = [0.0, 1.7 / sys.rate, sys.cycle_time]
    grid = [sys.cycle_time * k / 100.0 for k in range(101)]
    residuals = [spinlab.corotating_eigencheck(sys, t) for t in probe_times]
    return {
        "probe_times": probe_times,
        "residuals": residuals,
        "max_grid_residual": max(spinlab.corotating_eigencheck(sys, t) for t in grid),
    }


def _orbit_payload(sys: spinlab.SpinSystem, psi0: spinlab.SpinState) -> dict:
    dt = 0.01 / sys.rate
    report = spinlab.reachability_orbit(sys, psi0, dt=dt, steps=700)
    return {
        "classification": report.classification.value,
        "period_estimate": report.period_estimate,
        "cycle_time": sys.cycle_time,
        "period_error": abs(report.period_estimate - sys.cycle_time),
        "plane_axis": list(report.plane_axis),
        "axis_offset": report.axis_offset,
        "radius": report.radius,
        "max_norm_deviation": report.max_norm_deviation(),
    }


def _sc_orbit() -> dict:
    sys = spinlab.SpinSystem(b_field=(1.0, 0.0, 0.0))
    return _orbit_payload(sys, spinlab.SpinState.down())


def _sc_orbit_psi2() -> dict:
    sys = spinlab.SpinSystem(b_field=(1.0, 1.0, 1.0))
    down = _orbit_payload(sys, spinlab.SpinState.down())
    psi2 = _orbit_payload(sys, spinlab.SpinState.pauli_eigenstate(2, +1))
    return {
        "down_orbit": down,
        "spin2_outcome_orbit": psi2,
        "distinct_circles": abs(down["axis_offset"] - psi2["axis_offset"]) > 1e-6,
    }


def _sc_precession() -> dict:
    sys = _precession_system()
    t0 = 0.9 / sys.rate
    coupling = sys.g * sys.charge / (2.0 * sys.mass)
    b = np.asarray(sys.b_field)
    eps = np.zeros((3, 3, 3))
    for a, bb, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[a, bb, c] = 1.0
        eps[a, c, bb] = -1.0

    def residual(h: float) -> float:
        worst = 0.0
        for i in (1, 2, 3):
            d = (spinlab.heisenberg_spin(sys, i, t0 + h)
                 - spinlab.heisenberg_spin(sys, i, t0 - h)) / (2.0 * h)
            rhs = -coupling * sum(
                eps[i - 1, j, k] * b[j] * spinlab.heisenberg_spin(sys, k + 1, t0)
                for j in range(3)
                for k in range(3)
            )
            worst = max(worst, float(np.abs(d - rhs).max()))
        return worst

    hs = [1e-2, 1e-3, 1e-4]
    res = [residual(h) for h in hs]
    orders = [
        math.log(res[i] / res[i + 1]) / math.log(hs[i] / hs[i + 1])
        for i in range(len(hs) - 1)
    ]

    rot_residual = 0.0
    for t in (0.3 / sys.rate, 1.1 / sys.rate):
        rot = spinlab.rotation_matrix(sys.axis, -2.0 * sys.rate * t)
        for i in (1, 2, 3):
            expected = sum(rot[i - 1, j] * spinlab.spin_operator(j + 1, sys.hbar) for j in range(3))
            rot_residual = max(
                rot_residual,
                float(np.abs(spinlab.heisenberg_spin(sys, i, t) - expected).max()),
            )
    return {
        "fd_steps": hs,
        "fd_residuals": res,
        "fd_orders": orders,
        "rotation_residual": rot_residual,
    }


@dataclass(frozen=True)
class Scenario:
    """A named canned computation with a golden output."""

    name: str
    build: Callable[..., dict]
    params: dict = field(default_factory=dict)

    def run(self, **overrides) -> dict:
        kwargs = dict(self.params)
        kwargs.update(overrides)
        return self.build(**kwargs)


SCENARIOS: dict[str, Scenario] = {
    s.name: s
    for s in (
        Scenario("paper-2.3-system", _sc_system),
        Scenario("paper-2.3-evolve", _sc_evolve),
        Scenario("paper-2.3-reach", _sc_reach),
        Scenario("paper-2.5-invariant", _sc_invariant),
        Scenario("paper-2.6-clopen", _sc_clopen),
        Scenario("paper-2.6-interior", _sc_interior),
        Scenario("paper-3.1-sigma", _sc_sigma),
        Scenario("paper-3.1-even", _sc_even),
        Scenario("paper-3.4-incompatible", _sc_incompatible),
        Scenario("paper-3.5-commutator", _sc_commutator),
        Scenario("paper-3.5-context-spin3", _sc_context_spin3),
        Scenario("paper-3.5-corotating", _sc_corotating),
        Scenario("paper-3.5-orbit", _sc_orbit),
        Scenario("paper-3.5-orbit-psi2", _sc_orbit_psi2),
        Scenario("paper-3.5-precession", _sc_precession),
        Scenario("paper-A-gns-m2", _sc_gns_m2),
        Scenario("paper-A-oscillator", _sc_oscillator, {"N": 4}),
    )
}


def run_scenario(name: str, **overrides) -> dict:
    if name not in SCENARIOS:
        raise UnknownScenario(name, tuple(sorted(SCENARIOS)))
    return SCENARIOS[name].run(**overrides)


def golden_path(name: str) -> str:
    """Location of a scenario's golden file (env override for testing)."""
    override = os.environ.get("EMERGENT_SPACE_GOLDEN_DIR")
    if override:
        return os.path.join(override, f"{name}.json")
    return str(resources.files("emergent_space").joinpath("golden", f"{name}.json"))


def check_scenario(name: str, **overrides) -> str:
    """Run a scenario and compare byte-for-byte against its golden file."""
    payload = run_scenario(name, **overrides)
    rendered = canonical_json(payload) + "\n"
    path = golden_path(name)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            golden = fh.read()
    except FileNotFoundError:
        raise GoldenMismatch(name, f"golden file missing: {path}") from None
    if rendered != golden:
        diff = "\n".join(
            difflib.unified_diff(
                golden.splitlines(), rendered.splitlines(),
                fromfile="golden", tofile="current", lineterm="",
            )
        )
        raise GoldenMismatch(name, diff)
    return rendered


def write_golden_files(directory: str | None = None) -> list[str]:
    """Regenerate every golden file; returns the paths written."""
    written = []
    for name in sorted(SCENARIOS):
        payload = run_scenario(name)
        rendered = canonical_json(payload) + "\n"
        if directory is not None:
            path = os.path.join(directory, f"{name}.json")
        else:
            path = golden_path(name)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(rendered)
        written.append(path)
    return written
