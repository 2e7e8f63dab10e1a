"""Spin-1/2 precession in a static magnetic field, solved in closed form.

The ordered basis is (spin-down, spin-up): the third spin component acts as
diag(-hbar/2, +hbar/2), so the down state is its -hbar/2 eigenstate and the
closed-form spinor for the evolved down state is
(cos(Bt) - i n3 sin(Bt), i (n1 - i n2) sin(Bt)) with B the reduced field
strength. The evolution operator is

    U(t) = I cos(B t) + i (n . sigma) sin(B t),

a one-parameter unitary group with period 2 pi / B. Conjugation by U rotates
the spin operators about the field axis n by angle 2 B t (clockwise about n
in the right-handed convention, i.e. the rotation matrix is evaluated at
-2 B t), which is the rotation-by-twice-the-angle rule of the spinor
representation; the Bloch vector of any state therefore closes its circle
already at pi / B, while the state vector itself first returns at 2 pi / B.

Orbits are reported as reachability samples on the Bloch sphere: either a
fixed point (field-axis eigenstates, phase-only evolution) or a circle around
the field axis, with the return period estimated from the state-vector
trajectory by nearest return plus quadratic interpolation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadAxis, HorizonTooShort, ZeroField

__all__ = [
    "PAULI",
    "spin_operator",
    "rotation_matrix",
    "SpinSystem",
    "SpinState",
    "evolution_operator",
    "evolve_state",
    "heisenberg_spin",
    "corotating_spin",
    "corotating_eigencheck",
    "OrbitClass",
    "OrbitReport",
    "reachability_orbit",
]

#: Pauli matrices in the ordered basis (down, up): sigma3 = diag(-1, +1),
#: so [s_i, s_j] = 2i eps_ijk s_k still holds.
PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, 1j], [-1j, 0]], dtype=complex),
    np.array([[-1, 0], [0, 1]], dtype=complex),
)


def spin_operator(axis: int, hbar: float = 1.0) -> np.ndarray:
    """The spin component hbar/2 sigma_axis, axis in {1, 2, 3}."""
    if axis not in (1, 2, 3):
        raise BadAxis(axis)
    return 0.5 * hbar * PAULI[axis - 1]


def rotation_matrix(axis, angle: float) -> np.ndarray:
    """Right-handed rotation by ``angle`` about the (normalized) ``axis``."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    k = np.array(
        [[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]]
    )
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


@dataclass(frozen=True)
class SpinSystem:
    """A spin-1/2 in a static field, in natural units by default.

    The reduced field is g * charge * B / (4 mass): its magnitude sets the
    precession rate and its direction the rotation axis. Physical constants
    can be restored by passing SI values for g, mass, charge and hbar.
    """

    b_field: tuple[float, float, float]
    g: float = 2.0
    mass: float = 1.0
    hbar: float = 1.0
    charge: float = 1.0

    def __post_init__(self):
        b = tuple(float(x) for x in self.b_field)
        if len(b) != 3:
            raise ZeroField("field must be a 3-vector")
        object.__setattr__(self, "b_field", b)
        if self.rate <= 0.0:
            raise ZeroField("zero magnetic field: no precession axis")

    @property
    def reduced_field(self) -> np.ndarray:
        """The scaled field vector g * charge * B / (4 mass)."""
        return (
            self.g * self.charge / (4.0 * self.mass)
        ) * np.asarray(self.b_field, dtype=float)

    @property
    def rate(self) -> float:
        """Magnitude of the reduced field (the spinor angular rate)."""
        return float(np.linalg.norm(self.reduced_field))

    @property
    def axis(self) -> np.ndarray:
        """Unit precession axis."""
        return self.reduced_field / self.rate

    @property
    def cycle_time(self) -> float:
        """First return time of the evolution operator, 2 pi over the rate."""
        return 2.0 * math.pi / self.rate


@dataclass(frozen=True)
class SpinState:
    """A normalized two-component spinor in the (down, up) basis."""

    amplitudes: tuple[complex, complex]

    def __post_init__(self):
        amps = tuple(complex(a) for a in self.amplitudes)
        object.__setattr__(self, "amplitudes", amps)
        if abs(self.norm - 1.0) > 1e-10:
            raise ValueError(f"state norm {self.norm!r} is not 1")

    @classmethod
    def down(cls) -> "SpinState":
        return cls((1.0, 0.0))

    @classmethod
    def up(cls) -> "SpinState":
        return cls((0.0, 1.0))

    @classmethod
    def pauli_eigenstate(cls, axis: int, sign: int) -> "SpinState":
        """The sign = +1 or -1 eigenstate of sigma_axis."""
        if axis not in (1, 2, 3):
            raise BadAxis(axis)
        if sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign}")
        vals, vecs = np.linalg.eigh(PAULI[axis - 1])
        col = int(np.argmin(np.abs(vals - sign)))
        v = vecs[:, col]
        # fix the phase: make the largest component real positive
        k = int(np.argmax(np.abs(v)))
        v = v * (abs(v[k]) / v[k])
        return cls((v[0], v[1]))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def bloch(self) -> np.ndarray:
        """Expectation 3-vector of the Pauli operators."""
        v = self.vector
        return np.array([float((v.conj() @ (s @ v)).real) for s in PAULI])


def evolution_operator(sys: SpinSystem, t: float) -> np.ndarray:
    """U(t) = I cos(Bt) + i (n . sigma) sin(Bt): unitary, U(0) = I, group law."""
    bt = sys.rate * t
    n = sys.axis
    n_sigma = n[0] * PAULI[0] + n[1] * PAULI[1] + n[2] * PAULI[2]
    return np.eye(2, dtype=complex) * math.cos(bt) + 1j * math.sin(bt) * n_sigma


def evolve_state(sys: SpinSystem, psi0: SpinState, t: float) -> SpinState:
    """Apply U(t); unitarity keeps the result normalized."""
    v = evolution_operator(sys, t) @ psi0.vector
    return SpinState((v[0], v[1]))


def heisenberg_spin(sys: SpinSystem, axis: int, t: float) -> np.ndarray:
    """The evolved spin component U(t)^dag (hbar/2 sigma_axis) U(t).

    Equals the rotation of the spin triple about the field axis by twice the
    spinor angle: sum_j R(-2Bt)[axis, j] (hbar/2 sigma_j) with R the
    right-handed rotation matrix about n.
    """
    u = evolution_operator(sys, t)
    return u.conj().T @ spin_operator(axis, sys.hbar) @ u


def corotating_spin(sys: SpinSystem, axis: int, t: float) -> np.ndarray:
    """The observable rotated in synchrony with the state: U(t) psi_axis U(t)^dag."""
    u = evolution_operator(sys, t)
    return u @ spin_operator(axis, sys.hbar) @ u.conj().T


def corotating_eigencheck(sys: SpinSystem, t: float) -> float:
    """Residual of the co-rotating measurement invariance.

    The down state starts as the -hbar/2 eigenstate of the third spin
    component; rotating that observable along with the precession keeps the
    evolved state an exact eigenstate, so the returned norm
    || psi3(t) |Psi(t)> + hbar/2 |Psi(t)> || stays at rounding level for
    every t.
    """
    psi_t = evolve_state(sys, SpinState.down(), t).vector
    op = corotating_spin(sys, 3, t)
    return float(np.linalg.norm(op @ psi_t + 0.5 * sys.hbar * psi_t))


class OrbitClass(enum.Enum):
    FIXED_POINT = "fixed-point"
    CIRCLE = "circle"


@dataclass(frozen=True, eq=False)
class OrbitReport:
    """Sampled reachability orbit on the Bloch sphere.

    ``period_estimate`` is the first return time of the state vector
    (2 pi over the reduced field strength, up to sampling error); the Bloch
    point itself closes its circle in half that time. ``axis_offset`` and
    ``radius`` fix the circle geometry relative to the field axis.
    """

    times: tuple[float, ...]
    bloch_samples: tuple[tuple[float, float, float], ...]
    period_estimate: float | None
    classification: OrbitClass
    plane_axis: tuple[float, float, float]
    axis_offset: float
    radius: float

    def max_norm_deviation(self) -> float:
        arr = np.asarray(self.bloch_samples)
        return float(np.abs(np.linalg.norm(arr, axis=1) - 1.0).max())


def _refine_return(times: np.ndarray, sq_dist: np.ndarray, k: int) -> tuple[float, float]:
    """Vertex of the parabola through three squared-distance samples at k."""
    if k == 0 or k + 1 >= len(times):
        return float(times[k]), float(max(sq_dist[k], 0.0))
    t0, t1, t2 = times[k - 1], times[k], times[k + 1]
    y0, y1, y2 = sq_dist[k - 1], sq_dist[k], sq_dist[k + 1]
    denom = (y0 - 2.0 * y1 + y2)
    if denom <= 0.0:
        return float(t1), float(max(y1, 0.0))
    dt = t1 - t0
    shift = 0.5 * dt * (y0 - y2) / denom
    t_star = float(t1 + shift)
    y_star = float(y1 - 0.125 * (y0 - y2) ** 2 / denom)
    return t_star, max(y_star, 0.0)


def reachability_orbit(
    sys: SpinSystem,
    psi0: SpinState,
    dt: float,
    steps: int,
    tol: float = 1e-6,
) -> OrbitReport:
    """Sample the Bloch orbit and detect its return period.

    The sampled span must cover one full state-vector cycle (2 pi / rate),
    otherwise :class:`HorizonTooShort` is raised. Classification compares the
    Bloch diameter of the sample cloud against ``tol``: a field-axis
    eigenstate only acquires phase (fixed point), anything else precesses on
    a circle around the axis.
    """
    if dt <= 0.0:
        raise HorizonTooShort(f"dt must be positive, got {dt}")
    if steps * dt < sys.cycle_time:
        raise HorizonTooShort(
            f"span {steps * dt:.6g} is shorter than one cycle {sys.cycle_time:.6g}"
        )

    times = np.arange(steps + 1) * dt
    psi0_vec = psi0.vector
    # closed-form batch evolution: U(t) psi0 for all sample times
    bt = sys.rate * times
    n = sys.axis
    n_sigma = n[0] * PAULI[0] + n[1] * PAULI[1] + n[2] * PAULI[2]
    base = psi0_vec
    rotated = n_sigma @ psi0_vec
    states = (
        np.cos(bt)[:, None] * base[None, :]
        + 1j * np.sin(bt)[:, None] * rotated[None, :]
    )

    bloch = np.empty((len(times), 3))
    for i, s in enumerate(PAULI):
        bloch[:, i] = np.real(np.einsum("ki,ij,kj->k", states.conj(), s, states))

    # classification from the Bloch diameter
    ptp = bloch.max(axis=0) - bloch.min(axis=0)
    max_ptp = float(ptp.max())
    if max_ptp > tol:
        classification = OrbitClass.CIRCLE
    elif max_ptp <= tol / math.sqrt(3.0):
        classification = OrbitClass.FIXED_POINT
    else:
        diff = bloch[:, None, :] - bloch[None, :, :]
        diameter = float(np.sqrt((diff**2).sum(-1)).max())
        classification = (
            OrbitClass.FIXED_POINT if diameter <= tol else OrbitClass.CIRCLE
        )

    # first state-vector return: nearest sample past the departure region,
    # refined on the squared distance (a clean parabola near the return);
    # the candidate is accepted on the true distance at the refined time,
    # not the interpolated one, so the tolerance is meaningful
    sq_dist = np.sum(np.abs(states - psi0_vec[None, :]) ** 2, axis=1)
    depart = sq_dist >= 0.5 * float(sq_dist.max())
    first_departed = int(np.argmax(depart))

    def distance_at(t: float) -> float:
        s = math.cos(sys.rate * t) * base + 1j * math.sin(sys.rate * t) * rotated
        return float(np.linalg.norm(s - psi0_vec))

    period = None
    k = first_departed
    while 0 < k < len(times) - 1:
        if sq_dist[k] <= sq_dist[k - 1] and sq_dist[k] <= sq_dist[k + 1]:
            t_star, _ = _refine_return(times, sq_dist, k)
            if distance_at(t_star) <= tol:
                period = t_star
                break
        k += 1

    along = bloch @ n
    axis_offset = float(along.mean())
    radial = bloch - np.outer(along, n)
    radius = float(np.linalg.norm(radial, axis=1).mean())

    return OrbitReport(
        times=tuple(float(t) for t in times),
        bloch_samples=tuple((float(b[0]), float(b[1]), float(b[2])) for b in bloch),
        period_estimate=period,
        classification=classification,
        plane_axis=(float(n[0]), float(n[1]), float(n[2])),
        axis_offset=axis_offset,
        radius=radius,
    )
