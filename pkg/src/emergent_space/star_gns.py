"""Finite-dimensional *-algebras of complex matrices and the GNS construction.

An algebra is a matrix span closed under products and adjoints; a state is a
positive normalized linear functional, realized by a density matrix through
omega(x) = trace(rho x). From the pair (algebra, state) the GNS construction
builds a Hilbert space out of the algebra itself: omega(x^dag y) is an inner
product on the span, null directions are quotiented away, left multiplication
becomes a *-representation pi, and the class of the identity is a cyclic unit
vector Omega with omega(x) = <Omega, pi(x) Omega>.

Everything here is exact linear algebra at machine precision; no norm
completion is attempted (the spaces are already finite-dimensional).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DimMismatch, NonClosedAlgebra, NotAState

__all__ = [
    "adjoint",
    "commutator",
    "anticommutator",
    "is_self_adjoint",
    "hermiticity_defect",
    "StarAlgebra",
    "star_algebra",
    "full_matrix_algebra",
    "AlgState",
    "GnsRepresentation",
    "gns",
    "ladder_matrices",
    "TruncatedOscillator",
    "truncated_oscillator",
]

#: span-membership tolerance for closure checks (relative to matrix scale)
CLOSURE_TOL = 1e-10


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimMismatch(m.shape, m.shape)
    return m


def _check_dims(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise DimMismatch(a.shape, b.shape)


def adjoint(a) -> np.ndarray:
    """Conjugate transpose; applying it twice returns the original matrix."""
    return _as_matrix(a).conj().T


def commutator(a, b) -> np.ndarray:
    a, b = _as_matrix(a), _as_matrix(b)
    _check_dims(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a, b = _as_matrix(a), _as_matrix(b)
    _check_dims(a, b)
    return a @ b + b @ a


def hermiticity_defect(a) -> float:
    """Largest entry of a - a^dag in absolute value."""
    a = _as_matrix(a)
    return float(np.abs(a - a.conj().T).max())


def is_self_adjoint(a, tol: float = 1e-10) -> bool:
    return hermiticity_defect(a) <= tol


def _orthonormal_extend(
    basis_vecs: list[np.ndarray], candidate: np.ndarray, tol: float
) -> np.ndarray | None:
    """Residual of ``candidate`` against the current orthonormal span, or None.

    Two Gram-Schmidt passes keep the basis orthonormal to machine precision.
    """
    scale = np.linalg.norm(candidate)
    if scale == 0.0:
        return None
    v = candidate
    for _ in range(2):
        for b in basis_vecs:
            v = v - (b.conj() @ v) * b
    nrm = np.linalg.norm(v)
    if nrm <= tol * max(scale, 1.0):
        return None
    return v / nrm


@dataclass(frozen=True, eq=False)
class StarAlgebra:
    """A *-closed, product-closed span of d x d complex matrices.

    ``basis`` is orthonormal in the Hilbert-Schmidt inner product
    trace(a^dag b). Use :func:`star_algebra` to complete an arbitrary
    generating set; :meth:`verify_closed` rank-tests closure of a basis
    supplied directly.
    """

    dim: int
    basis: tuple[np.ndarray, ...]
    contains_identity: bool

    def __post_init__(self):
        for b in self.basis:
            if b.shape != (self.dim, self.dim):
                raise DimMismatch(b.shape, (self.dim, self.dim))
        # stacked views used by the vectorized hot paths
        stack = np.stack(self.basis) if self.basis else np.zeros((0, self.dim, self.dim))
        object.__setattr__(self, "_stack", stack)
        object.__setattr__(self, "_vecs", stack.reshape(len(self.basis), -1))

    @property
    def size(self) -> int:
        return len(self.basis)

    def coefficients(self, m, tol: float = CLOSURE_TOL) -> np.ndarray:
        """Expansion coefficients of ``m`` in the orthonormal basis.

        Raises :class:`NonClosedAlgebra` when ``m`` is not in the span.
        """
        m = _as_matrix(m)
        if m.shape != (self.dim, self.dim):
            raise DimMismatch(m.shape, (self.dim, self.dim))
        vecs = self._vecs  # type: ignore[attr-defined]
        coeffs = vecs.conj() @ m.reshape(-1)
        resid = np.linalg.norm(m.reshape(-1) - coeffs @ vecs)
        if resid > tol * max(np.linalg.norm(m), 1.0):
            raise NonClosedAlgebra(
                f"matrix lies outside the span (residual {resid:.3e})"
            )
        return coeffs

    def contains(self, m, tol: float = CLOSURE_TOL) -> bool:
        try:
            self.coefficients(m, tol)
            return True
        except NonClosedAlgebra:
            return False

    def left_multiplication(self, x) -> np.ndarray:
        """Matrix of b |-> x b in basis coefficients (validates membership)."""
        self.coefficients(x)
        x = _as_matrix(x)
        stack = self._stack  # type: ignore[attr-defined]
        prods = (x[None, :, :] @ stack).reshape(self.size, -1)
        vecs = self._vecs  # type: ignore[attr-defined]
        # column j holds the coefficients of x @ basis[j]
        return vecs.conj() @ prods.T

    def verify_closed(self, tol: float = CLOSURE_TOL):
        """Rank test: adjoints and pairwise products must stay in the span."""
        if not self.contains(np.eye(self.dim), tol):
            raise NonClosedAlgebra("identity matrix is not in the span")
        for b in self.basis:
            if not self.contains(b.conj().T, tol):
                raise NonClosedAlgebra("span is not closed under adjoints")
        for a in self.basis:
            for b in self.basis:
                if not self.contains(a @ b, tol):
                    raise NonClosedAlgebra("span is not closed under products")


def star_algebra(generators: Iterable, tol: float = CLOSURE_TOL) -> StarAlgebra:
    """Complete generators to a *-closed, product-closed span.

    The identity is always adjoined, then adjoints and pairwise products are
    folded in by iterated rank extension until the span stabilizes (at most
    d**2 basis elements).
    """
    gens = [_as_matrix(g) for g in generators]
    if not gens:
        raise NonClosedAlgebra("at least one generator is required")
    dim = gens[0].shape[0]
    for g in gens:
        if g.shape != (dim, dim):
            raise DimMismatch(g.shape, (dim, dim))

    vecs: list[np.ndarray] = []
    mats: list[np.ndarray] = []

    def absorb(m: np.ndarray) -> bool:
        v = _orthonormal_extend(vecs, m.reshape(-1), tol)
        if v is None:
            return False
        vecs.append(v)
        mats.append(v.reshape(dim, dim))
        return True

    absorb(np.eye(dim, dtype=complex))
    for g in gens:
        absorb(g)
        absorb(g.conj().T)

    cap = dim * dim
    grew = True
    while grew and len(mats) < cap:
        grew = False
        snapshot = list(mats)
        for a in snapshot:
            grew |= absorb(a.conj().T)
        for a in snapshot:
            for b in snapshot:
                grew |= absorb(a @ b)
                if len(mats) >= cap:
                    break
            if len(mats) >= cap:
                break

    alg = StarAlgebra(dim=dim, basis=tuple(mats), contains_identity=True)
    alg.verify_closed(max(tol, 1e-9))
    return alg


def full_matrix_algebra(dim: int) -> StarAlgebra:
    """All d x d matrices, with the matrix-unit basis."""
    basis = []
    for i in range(dim):
        for j in range(dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[i, j] = 1.0
            basis.append(e)
    return StarAlgebra(dim=dim, basis=tuple(basis), contains_identity=True)


@dataclass(frozen=True, eq=False)
class AlgState:
    """A state on a matrix *-algebra, given by a density matrix.

    omega(x) = trace(density x); positivity and unit trace make omega a
    positive normalized functional with omega(1) = 1.
    """

    algebra: StarAlgebra
    density: np.ndarray

    def __post_init__(self):
        rho = _as_matrix(self.density)
        if rho.shape != (self.algebra.dim, self.algebra.dim):
            raise DimMismatch(rho.shape, (self.algebra.dim, self.algebra.dim))
        defect = hermiticity_defect(rho)
        if defect > 1e-10:
            raise NotAState(f"density is not hermitian (defect {defect:.3e})")
        eigs = np.linalg.eigvalsh(rho)
        if eigs.min() < -1e-10:
            raise NotAState(f"density has negative eigenvalue {eigs.min():.3e}")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > 1e-10:
            raise NotAState(f"density trace {tr!r} is not 1")
        object.__setattr__(self, "density", rho)

    def omega(self, x) -> complex:
        """Expectation trace(rho x)."""
        x = _as_matrix(x)
        _check_dims(x, self.density)
        return complex(np.trace(self.density @ x))


@dataclass(frozen=True, eq=False)
class GnsRepresentation:
    """Hilbert space, representation and cyclic vector built from a state.

    ``gram[i, j] = omega(b_i^dag b_j)`` over the algebra basis. The quotient
    space keeps the eigendirections of the Gram matrix above the relative
    rank cut; ``quotient_basis`` columns give, in algebra-basis coefficients,
    representatives of an orthonormal basis of classes. ``omega_vec`` is the
    class of the identity, with <Omega, Omega> = omega(1) = 1.
    """

    algebra: StarAlgebra
    state: AlgState
    gram: np.ndarray
    quotient_dim: int
    quotient_basis: np.ndarray  # (algebra.size, quotient_dim) coefficient columns
    omega_vec: np.ndarray  # (quotient_dim,)
    _to_quotient: np.ndarray  # (quotient_dim, algebra.size): coords of a class

    def class_vector(self, x) -> np.ndarray:
        """Quotient coordinates of the class [x]."""
        return self._to_quotient @ self.algebra.coefficients(x)

    def pi(self, x) -> np.ndarray:
        """The represented operator: left multiplication by x on classes."""
        left = self.algebra.left_multiplication(x)
        return self._to_quotient @ left @ self.quotient_basis

    def represent(self, x) -> np.ndarray:
        return self.pi(x)

    def reproduction_defect(self) -> float:
        """max over basis x of |omega(x) - <Omega, pi(x) Omega>|."""
        out = 0.0
        for b in self.algebra.basis:
            lhs = self.state.omega(b)
            rhs = complex(self.omega_vec.conj() @ self.pi(b) @ self.omega_vec)
            out = max(out, abs(lhs - rhs))
        return out


def gns(alg: StarAlgebra, st: AlgState, rank_tolerance: float = 1e-9) -> GnsRepresentation:
    """Run the GNS construction for (algebra, state).

    The Gram matrix of omega(x^dag y) over the basis is hermitian positive
    semidefinite; its null space is the left ideal of null vectors. Non-null
    eigenvectors, scaled to unit Gram norm, give an orthonormal basis of the
    quotient, and left multiplication compresses to the representation pi.
    The rank cut is relative (eigenvalues above rank_tolerance times the
    largest), so the quotient is scale invariant.
    """
    if st.algebra is not alg:
        st = AlgState(alg, st.density)
    alg.verify_closed()
    stack = np.stack(alg.basis)
    vecs = stack.reshape(alg.size, -1)
    # gram[i, j] = trace(rho b_i^dag b_j) = <vec(b_i), vec(b_j rho)>
    right = (stack @ st.density).reshape(alg.size, -1)
    gram = vecs.conj() @ right.T
    gram = 0.5 * (gram + gram.conj().T)

    eigvals, eigvecs = np.linalg.eigh(gram)
    cut = rank_tolerance * max(float(eigvals.max()), 0.0)
    keep = eigvals > cut
    kept_vals = eigvals[keep]
    kept_vecs = eigvecs[:, keep]
    quotient_dim = int(keep.sum())

    # columns: representatives of orthonormal classes; rows map coefficients
    # to quotient coordinates (G-weighted projection)
    quotient_basis = kept_vecs / np.sqrt(kept_vals)
    to_quotient = (kept_vecs * np.sqrt(kept_vals)).conj().T

    identity_coeffs = alg.coefficients(np.eye(alg.dim))
    omega_vec = to_quotient @ identity_coeffs

    return GnsRepresentation(
        algebra=alg,
        state=st,
        gram=gram,
        quotient_dim=quotient_dim,
        quotient_basis=quotient_basis,
        omega_vec=omega_vec,
        _to_quotient=to_quotient,
    )


def ladder_matrices(levels: int) -> tuple[np.ndarray, np.ndarray]:
    """Lowering and raising operators truncated to the given level count.

    a maps level n to sqrt(n) times level n-1; the raising operator is its
    adjoint. The commutator [a, a^dag] equals the identity except for the
    (N-1, N-1) corner entry 1-N, the unavoidable truncation artifact.
    """
    if levels < 2:
        raise ValueError(f"need at least 2 levels, got {levels}")
    a = np.zeros((levels, levels), dtype=complex)
    for n in range(1, levels):
        a[n - 1, n] = np.sqrt(n)
    return a, a.conj().T


@dataclass(frozen=True, eq=False)
class TruncatedOscillator:
    """Ladder algebra on N levels with the ground state, plus its GNS data."""

    levels: int
    lowering: np.ndarray
    raising: np.ndarray
    algebra: StarAlgebra
    state: AlgState
    representation: GnsRepresentation


def truncated_oscillator(levels: int) -> TruncatedOscillator:
    """Ladder operators on N levels, the ground state, and its GNS representation.

    The ground-state functional kills the lowering operator's class, so
    pi(a) Omega = 0, and repeated application of pi(a^dag) to Omega rebuilds
    the orthonormal level basis (exact below the truncation corner).
    """
    a, adag = ladder_matrices(levels)
    alg = star_algebra([a])
    rho = np.zeros((levels, levels), dtype=complex)
    rho[0, 0] = 1.0
    st = AlgState(alg, rho)
    rep = gns(alg, st)
    return TruncatedOscillator(
        levels=levels,
        lowering=a,
        raising=adag,
        algebra=alg,
        state=st,
        representation=rep,
    )
