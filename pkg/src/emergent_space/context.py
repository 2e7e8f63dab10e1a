"""Observable-induced measure spaces: spectral contexts and Born weights.

Choosing a self-adjoint observable against a fixed density matrix singles
out a finite classical space: the eigenvalues are its points, the power set
its sigma-algebra, and the Born weights trace(rho P_i) its measure. Commuting
families share an eigenbasis and induce one joint context whose points are
eigenvalue tuples; a non-commuting pair admits no joint context at all, which
is the operational content of contextuality.

For a commuting family the joint eigenvalue tuples are also the characters
of the generated commutative algebra, realizing it as functions on a finite
set of points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    ContextIncompatible,
    DimMismatch,
    EmergentSpaceError,
    NotAState,
    NotSelfAdjoint,
)
from .star_gns import AlgState, _as_matrix, commutator, hermiticity_defect

__all__ = [
    "Observable",
    "SpectralContext",
    "spectral_context",
    "commutes",
    "joint_context",
    "gelfand_points",
    "marginal_context",
]

#: retries of the random-combination eigenbasis search before giving up
_MAX_RETRIES = 8


def _degeneracy_tol(eigenvalues: np.ndarray) -> float:
    """Scale-aware threshold for merging nearby eigenvalues."""
    spread = float(eigenvalues.max() - eigenvalues.min()) if eigenvalues.size else 0.0
    return max(1e-8 * spread, 1e-12)


def _as_density(rho) -> np.ndarray:
    """Accept an AlgState or a raw matrix; raw input must be a valid density."""
    if isinstance(rho, AlgState):
        return rho.density
    rho = _as_matrix(rho)
    defect = hermiticity_defect(rho)
    if defect > 1e-10:
        raise NotAState(f"density is not hermitian (defect {defect:.3e})")
    eigs = np.linalg.eigvalsh(rho)
    if float(eigs.min()) < -1e-10:
        raise NotAState(f"density has negative eigenvalue {eigs.min():.3e}")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > 1e-10:
        raise NotAState(f"density trace {tr!r} is not 1")
    return rho


@dataclass(frozen=True, eq=False)
class Observable:
    """A named self-adjoint matrix."""

    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        m = _as_matrix(self.matrix)
        defect = hermiticity_defect(m)
        if defect > 1e-10:
            raise NotSelfAdjoint(defect, self.name)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _as_observable(a, name: str = "") -> Observable:
    return a if isinstance(a, Observable) else Observable(_as_matrix(a), name)


@dataclass(frozen=True, eq=False)
class SpectralContext:
    """The measure space induced by measuring a commuting family in a state.

    ``points[k]`` is a tuple of eigenvalues (one entry per observable) naming
    the k-th joint eigenspace; ``projectors[k]`` its orthogonal projector;
    ``weights[k] = trace(rho P_k)`` the Born weight. Projectors are mutually
    orthogonal idempotents summing to the identity, and weights sum to one.
    """

    observables: tuple[Observable, ...]
    points: tuple[tuple[float, ...], ...]
    projectors: tuple[np.ndarray, ...]
    weights: tuple[float, ...]

    @property
    def eigenvalues(self) -> tuple[tuple[float, ...], ...]:
        return self.points

    def expectation(self, index: int = 0) -> float:
        """Sum of eigenvalue times weight for the selected observable."""
        return float(sum(p[index] * w for p, w in zip(self.points, self.weights)))

    def completeness_defect(self) -> float:
        dim = self.projectors[0].shape[0]
        total = sum(self.projectors)
        return float(np.abs(total - np.eye(dim)).max())

    def orthogonality_defect(self) -> float:
        out = 0.0
        for i, p in enumerate(self.projectors):
            for j, q in enumerate(self.projectors):
                if i != j:
                    out = max(out, float(np.abs(p @ q).max()))
        return out


def _group_columns(
    values: Sequence[np.ndarray], tol_per_obs: Sequence[float]
) -> list[list[int]]:
    """Group column indices whose eigenvalue tuples agree within tolerance."""
    n_cols = len(values[0])
    groups: list[list[int]] = []
    reps: list[tuple[float, ...]] = []
    for c in range(n_cols):
        tup = tuple(float(v[c]) for v in values)
        placed = False
        for g, rep in enumerate(reps):
            if all(abs(tup[i] - rep[i]) <= tol_per_obs[i] for i in range(len(tup))):
                groups[g].append(c)
                placed = True
                break
        if not placed:
            groups.append([c])
            reps.append(tup)
    return groups


def _finalize(
    observables: tuple[Observable, ...],
    basis: np.ndarray,
    per_obs_values: list[np.ndarray],
    rho: np.ndarray | None,
) -> SpectralContext:
    tols = [_degeneracy_tol(v) for v in per_obs_values]
    groups = _group_columns(per_obs_values, tols)

    entries = []
    for cols in groups:
        vecs = basis[:, cols]
        proj = vecs @ vecs.conj().T
        proj = 0.5 * (proj + proj.conj().T)
        point = tuple(
            float(np.mean([per_obs_values[i][c] for c in cols]))
            for i in range(len(observables))
        )
        weight = float(np.trace(rho @ proj).real) if rho is not None else 0.0
        entries.append((point, proj, weight))

    entries.sort(key=lambda e: e[0])
    return SpectralContext(
        observables=observables,
        points=tuple(e[0] for e in entries),
        projectors=tuple(e[1] for e in entries),
        weights=tuple(e[2] for e in entries),
    )


def spectral_context(a, rho) -> SpectralContext:
    """Measure space of a single observable: eigenvalues, projectors, Born weights.

    Eigenvalues closer than the scale-aware degeneracy tolerance are merged
    into one point, so the expectation through the context always equals
    trace(rho a).
    """
    obs = _as_observable(a)
    density = _as_density(rho)
    if density.shape != obs.matrix.shape:
        raise DimMismatch(density.shape, obs.matrix.shape)
    eigvals, eigvecs = np.linalg.eigh(obs.matrix)
    return _finalize((obs,), eigvecs, [eigvals], density)


def commutes(a, b, tol: float = 1e-10) -> bool:
    """True when the commutator vanishes within ``tol`` (max-entry norm)."""
    a, b = _as_observable(a), _as_observable(b)
    if a.matrix.shape != b.matrix.shape:
        raise DimMismatch(a.matrix.shape, b.matrix.shape)
    return float(np.abs(commutator(a.matrix, b.matrix)).max()) <= tol


def _require_commuting(obs: Sequence[Observable], tol: float):
    for i in range(len(obs)):
        for j in range(i + 1, len(obs)):
            norm = float(np.abs(commutator(obs[i].matrix, obs[j].matrix)).max())
            if norm > tol:
                raise ContextIncompatible(i, j, norm)


def _joint_diagonalization(
    obs: Sequence[Observable], seed: int
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Common eigenbasis and per-observable eigenvalues of a commuting family.

    A single observable is eigendecomposed directly. Otherwise a random real
    linear combination is eigendecomposed; when an unlucky coefficient draw
    collides distinct joint eigenspaces, the off-diagonal residual betrays it
    and a reseeded retry separates them.
    """
    if len(obs) == 1:
        vals, basis = np.linalg.eigh(obs[0].matrix)
        return basis, [vals]
    scale = max(
        max(float(np.abs(o.matrix).max()), 1e-300) for o in obs
    )
    for attempt in range(_MAX_RETRIES):
        rng = np.random.default_rng(seed + attempt)
        coeffs = rng.standard_normal(len(obs))
        combo = sum(c * o.matrix for c, o in zip(coeffs, obs))
        _, basis = np.linalg.eigh(combo)
        per_obs = []
        ok = True
        for o in obs:
            transformed = basis.conj().T @ o.matrix @ basis
            off = transformed - np.diag(np.diag(transformed))
            if float(np.abs(off).max()) > 1e-8 * scale:
                ok = False
                break
            per_obs.append(np.real(np.diag(transformed)))
        if ok:
            return basis, per_obs
    raise EmergentSpaceError(
        "random-combination eigenbasis failed to separate joint eigenspaces "
        f"after {_MAX_RETRIES} seeded retries"
    )


def joint_context(observables: Sequence, rho, tol: float = 1e-10, seed: int = 0) -> SpectralContext:
    """Joint measure space of a pairwise commuting family.

    Points are joint eigenvalue tuples; marginalizing over one observable
    reproduces that observable's solo context. A non-commuting pair raises
    :class:`ContextIncompatible` carrying the offending indices and
    commutator norm.
    """
    obs = tuple(_as_observable(o, f"obs{i}") for i, o in enumerate(observables))
    if not obs:
        raise ValueError("need at least one observable")
    dim = obs[0].matrix.shape[0]
    for o in obs:
        if o.matrix.shape != (dim, dim):
            raise DimMismatch(o.matrix.shape, (dim, dim))
    density = _as_density(rho)
    if density.shape != (dim, dim):
        raise DimMismatch(density.shape, (dim, dim))
    _require_commuting(obs, tol)
    basis, per_obs = _joint_diagonalization(obs, seed)
    return _finalize(obs, basis, per_obs, density)


def gelfand_points(
    observables: Sequence, tol: float = 1e-10, seed: int = 0
) -> tuple[tuple[float, ...], ...]:
    """Characters of the commutative algebra generated by the family.

    Each point is a joint eigenvalue tuple; evaluating any polynomial in the
    observables at a point matches the polynomial's own joint eigenvalue
    there, which is what makes the family an algebra of functions on these
    points.
    """
    obs = tuple(_as_observable(o, f"obs{i}") for i, o in enumerate(observables))
    if not obs:
        raise ValueError("need at least one observable")
    _require_commuting(obs, tol)
    basis, per_obs = _joint_diagonalization(obs, seed)
    ctx = _finalize(obs, basis, per_obs, None)
    return ctx.points


def marginal_context(ctx: SpectralContext, index: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Collapse a joint context onto one observable: (values, summed weights).

    Values are merged with the same scale-aware tolerance used when the
    context was built, so the result is comparable to the solo context of
    that observable.
    """
    values = np.array([p[index] for p in ctx.points])
    tol = _degeneracy_tol(values)
    merged_vals: list[float] = []
    merged_wts: list[float] = []
    for v, w in sorted(zip(values, ctx.weights)):
        if merged_vals and abs(v - merged_vals[-1]) <= tol:
            merged_wts[-1] += w
        else:
            merged_vals.append(float(v))
            merged_wts.append(float(w))
    return tuple(merged_vals), tuple(merged_wts)
