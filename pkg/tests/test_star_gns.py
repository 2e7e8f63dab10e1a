from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import random_density, random_hermitian
from emergent_space.errors import DimMismatch, NonClosedAlgebra, NotAState
from emergent_space.star_gns import (
    AlgState,
    StarAlgebra,
    adjoint,
    anticommutator,
    commutator,
    full_matrix_algebra,
    gns,
    hermiticity_defect,
    is_self_adjoint,
    ladder_matrices,
    star_algebra,
    truncated_oscillator,
)
from oracles import gram_rank

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)


class TestMatrixOps:
    def test_adjoint_is_involution(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert np.allclose(adjoint(adjoint(a)), a)

    def test_product_adjoint_reverses(self):
        rng = np.random.default_rng(2)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert np.allclose(adjoint(a @ b), adjoint(b) @ adjoint(a))

    def test_pauli_commutator(self):
        assert np.abs(commutator(SIGMA1, SIGMA2) - 2j * SIGMA3).max() < 1e-15
        assert np.abs(anticommutator(SIGMA1, SIGMA2)).max() < 1e-15

    def test_self_commutator_vanishes(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert np.abs(commutator(a, a)).max() == 0.0

    def test_self_adjoint_check(self):
        assert is_self_adjoint(SIGMA2)
        assert not is_self_adjoint(SIGMA2 + 1e-6 * SIGMA1 * 1j)
        assert hermiticity_defect(np.array([[0, 1], [0, 0]], complex)) == 1.0

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            commutator(SIGMA1, np.eye(3))


class TestStarAlgebra:
    def test_single_matrix_unit_generates_full_m2(self):
        e01 = np.array([[0, 1], [0, 0]], dtype=complex)
        alg = star_algebra([e01])
        assert alg.size == 4
        for m in (SIGMA1, SIGMA2, SIGMA3, np.eye(2)):
            assert alg.contains(m)

    def test_diagonal_generators_stay_commutative(self):
        alg = star_algebra([np.diag([1.0, 2.0, 5.0]).astype(complex)])
        assert alg.size == 3  # diagonal algebra of a nondegenerate matrix
        assert alg.contains(np.diag([1.0, 1.0, 1.0]))
        assert not alg.contains(np.diag([1.0, 2.0, 5.0]) + SIGMA1_3())

    def test_ladder_generates_full_algebra(self):
        a, _ = ladder_matrices(4)
        assert star_algebra([a]).size == 16

    def test_unclosed_span_detected(self):
        e01 = np.array([[0, 1], [0, 0]], dtype=complex)
        bad = StarAlgebra(
            dim=2,
            basis=(np.eye(2, dtype=complex) / math.sqrt(2), e01),
            contains_identity=True,
        )
        with pytest.raises(NonClosedAlgebra):
            bad.verify_closed()

    def test_coefficients_roundtrip(self):
        alg = full_matrix_algebra(3)
        rng = np.random.default_rng(4)
        m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        coeffs = alg.coefficients(m)
        recon = sum(c * b for c, b in zip(coeffs, alg.basis))
        assert np.allclose(recon, m)


def SIGMA1_3() -> np.ndarray:
    out = np.zeros((3, 3), dtype=complex)
    out[0, 1] = out[1, 0] = 1.0
    return out


class TestAlgState:
    def test_rejects_non_hermitian(self):
        alg = full_matrix_algebra(2)
        with pytest.raises(NotAState):
            AlgState(alg, np.array([[1, 1], [0, 0]], dtype=complex))

    def test_rejects_negative_eigenvalue(self):
        alg = full_matrix_algebra(2)
        with pytest.raises(NotAState):
            AlgState(alg, np.diag([1.5, -0.5]).astype(complex))

    def test_rejects_bad_trace(self):
        alg = full_matrix_algebra(2)
        with pytest.raises(NotAState):
            AlgState(alg, np.diag([0.7, 0.7]).astype(complex))

    def test_omega_of_identity_is_one(self):
        alg = full_matrix_algebra(3)
        rng = np.random.default_rng(5)
        st = AlgState(alg, random_density(rng, 3))
        assert st.omega(np.eye(3)) == pytest.approx(1.0, abs=1e-12)


class TestGns:
    def test_m2_vector_state_quotient(self):
        alg = full_matrix_algebra(2)
        st = AlgState(alg, np.array([[1, 0], [0, 0]], dtype=complex))
        rep = gns(alg, st)
        # oracle: Gram rank over the matrix-unit basis by brute eigensolve
        assert gram_rank(list(alg.basis), st.density) == 2
        assert rep.quotient_dim == 2

    def test_m2_tracial_state_quotient(self):
        alg = full_matrix_algebra(2)
        st = AlgState(alg, np.eye(2, dtype=complex) / 2)
        rep = gns(alg, st)
        assert gram_rank(list(alg.basis), st.density) == 4
        assert rep.quotient_dim == 4
        # the Gram matrix is half the identity on the matrix-unit basis
        assert np.allclose(rep.gram, np.eye(4) / 2)

    def test_cyclic_vector_is_normalized(self):
        rng = np.random.default_rng(6)
        for dim in (2, 3):
            alg = full_matrix_algebra(dim)
            st = AlgState(alg, random_density(rng, dim))
            rep = gns(alg, st)
            assert np.linalg.norm(rep.omega_vec) == pytest.approx(1.0, abs=1e-10)

    def test_reproduction_and_homomorphism_random(self):
        rng = np.random.default_rng(7)
        for trial in range(20):
            dim = int(rng.integers(2, 5))
            flavor = trial % 3
            if flavor == 0:
                alg = full_matrix_algebra(dim)
            elif flavor == 1:
                alg = star_algebra([random_hermitian(rng, dim)])
            else:
                alg = star_algebra(
                    [random_hermitian(rng, dim), random_hermitian(rng, dim)]
                )
            rank = int(rng.integers(1, dim + 1))
            st = AlgState(alg, random_density(rng, dim, rank))
            rep = gns(alg, st)

            assert rep.quotient_dim == gram_rank(list(alg.basis), st.density)
            assert rep.reproduction_defect() <= 1e-9

            eigs = np.linalg.eigvalsh(rep.gram)
            assert eigs.min() >= -1e-9

            pis = [rep.pi(b) for b in alg.basis]
            for i, a in enumerate(alg.basis):
                assert np.abs(rep.pi(a.conj().T) - pis[i].conj().T).max() <= 1e-9
                for j, b in enumerate(alg.basis):
                    assert np.abs(rep.pi(a @ b) - pis[i] @ pis[j]).max() <= 1e-9

            # cyclicity: the orbit of Omega under the represented basis spans
            orbit = np.column_stack([p @ rep.omega_vec for p in pis])
            assert np.linalg.matrix_rank(orbit, tol=1e-8) == rep.quotient_dim

    def test_cauchy_schwarz_of_states(self):
        rng = np.random.default_rng(8)
        alg = full_matrix_algebra(3)
        st = AlgState(alg, random_density(rng, 3))
        for _ in range(50):
            x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            y = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            lhs = abs(st.omega(x.conj().T @ y)) ** 2
            rhs = st.omega(x.conj().T @ x).real * st.omega(y.conj().T @ y).real
            assert lhs <= rhs + 1e-9


class TestTruncatedOscillator:
    def test_commutator_corner_artifact(self):
        for levels in (4, 8):
            a, adag = ladder_matrices(levels)
            comm = commutator(a, adag)
            expected = np.eye(levels, dtype=complex)
            expected[levels - 1, levels - 1] = 1 - levels
            assert np.abs(comm - expected).max() < 1e-12

    def test_ground_state_kills_lowering(self):
        osc = truncated_oscillator(4)
        rep = osc.representation
        assert osc.state.omega(osc.raising @ osc.lowering) == 0
        assert np.linalg.norm(rep.pi(osc.lowering) @ rep.omega_vec) <= 1e-10

    def test_first_ladder_state_normalized(self):
        osc = truncated_oscillator(4)
        rep = osc.representation
        one = rep.pi(osc.raising) @ rep.omega_vec
        assert np.linalg.norm(one) == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("levels", [4, 8])
    def test_ladder_orthonormal_below_truncation(self, levels):
        osc = truncated_oscillator(levels)
        rep = osc.representation
        pi_up = rep.pi(osc.raising)
        states = [rep.omega_vec]
        for n in range(1, levels - 1):
            states.append(pi_up @ states[-1] / math.sqrt(n))
        gram = np.array([[si.conj() @ sj for sj in states] for si in states])
        assert np.abs(gram - np.eye(len(states))).max() <= 1e-10

    def test_quotient_is_level_count(self):
        for levels in (3, 5):
            osc = truncated_oscillator(levels)
            assert osc.representation.quotient_dim == levels
            assert osc.algebra.size == levels * levels
