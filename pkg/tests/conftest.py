from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from emergent_space.dynsys import TimeKind, TimeModel, build_system


@pytest.fixture
def cyclic5():
    """Five states on a ring, each step shifts one position."""
    return build_system([1, 2, 3, 4, 5], {1: 2, 2: 3, 3: 4, 4: 5, 5: 1})


@pytest.fixture
def shift2_on4():
    """Four states, each step jumps two positions (two disjoint 2-cycles)."""
    return build_system([1, 2, 3, 4], {1: 3, 2: 4, 3: 1, 4: 2})


@pytest.fixture
def identity3():
    return build_system([1, 2, 3], {1: 1, 2: 2, 3: 3})


@st.composite
def small_systems(draw, max_states: int = 8, group: bool = False):
    n = draw(st.integers(min_value=1, max_value=max_states))
    labels = [str(i + 1) for i in range(n)]
    if group:
        images = draw(st.permutations(range(n)))
    else:
        images = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    trans = {labels[i]: labels[images[i]] for i in range(n)}
    kind = TimeKind.GROUP if group else TimeKind.MONOID
    return build_system(labels, trans, TimeModel(kind))


def step_map_of(sys):
    """Label-level transition dict, for feeding the set-based oracles."""
    return {lab: sys.labels[sys.step[i]] for i, lab in enumerate(sys.labels)}


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    """Random density matrix; optionally rank-deficient (pure for rank=1)."""
    rank = dim if rank is None else rank
    a = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (a + a.conj().T)
