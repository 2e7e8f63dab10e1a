"""Finite dynamical systems: states, unit-step evolution, trajectories and
reachability domains.

A system is a triple (X, U, T): an ordered finite set of labeled states, a
total unit-step map U(., 1), and a discrete time model (monoid steps, or
group steps when the map is a bijection). Subsets of X are bitsets over the
element ordering, which makes reachability a few integer operations and keeps
every enumeration deterministic.

All values are immutable after construction and every operation is a pure
function, so concurrent reads are safe.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import (
    DuplicateLabel,
    InvalidSubset,
    MissingTransition,
    NegativeTimeInMonoid,
    NotInvertible,
    UnknownLabel,
    UnsupportedTimeStructure,
)

__all__ = [
    "TimeKind",
    "TimeModel",
    "Universe",
    "Subset",
    "DynamicalSystem",
    "ReachabilitySet",
    "build_system",
    "evolve",
    "trajectory",
    "reach",
    "point_reach_masks",
    "reach_table",
    "normalize_label",
]


def normalize_label(label) -> str:
    """Normalize a state label to its string form (integers allowed)."""
    if isinstance(label, bool):
        raise UnknownLabel(repr(label))
    if isinstance(label, int):
        return str(label)
    if isinstance(label, str):
        return label
    raise UnknownLabel(repr(label))


class TimeKind(enum.Enum):
    """Algebraic structure of the time parameter."""

    MONOID = "monoid"  # forward composition only
    GROUP = "group"  # step map invertible, negative times allowed


@dataclass(frozen=True)
class TimeModel:
    """Discrete time: a kind (monoid or group steps) and a default horizon."""

    kind: TimeKind = TimeKind.MONOID
    horizon: int = 1

    def __post_init__(self):
        if not isinstance(self.kind, TimeKind):
            raise UnsupportedTimeStructure(
                f"time kind must be TimeKind.MONOID or TimeKind.GROUP, got {self.kind!r}"
            )
        if self.horizon < 0:
            raise ValueError(f"horizon must be >= 0, got {self.horizon}")


@dataclass(frozen=True)
class Universe:
    """An ordered tuple of distinct state labels; the ground set of a system."""

    labels: tuple[str, ...]

    def __post_init__(self):
        index: dict[str, int] = {}
        for i, lab in enumerate(self.labels):
            if lab in index:
                raise DuplicateLabel(lab)
            index[lab] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def of(cls, labels: Iterable) -> "Universe":
        return cls(tuple(normalize_label(x) for x in labels))

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        lab = normalize_label(label)
        try:
            return self._index[lab]  # type: ignore[attr-defined]
        except KeyError:
            raise UnknownLabel(lab) from None

    def __contains__(self, label) -> bool:
        try:
            self.index(label)
            return True
        except UnknownLabel:
            return False

    def full_mask(self) -> int:
        return (1 << self.size) - 1


@dataclass(frozen=True)
class Subset:
    """A subset of a universe, stored as a bitset over element indices.

    Bit i set means the i-th element of ``parent.labels`` is a member. Python
    integers grow as needed, so there is no hard cap on the universe size;
    exhaustive family enumerations are capped separately where they occur.
    """

    parent: Universe
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.parent.size:
            raise InvalidSubset(
                f"mask {self.mask:#x} references indices outside a "
                f"{self.parent.size}-element universe"
            )

    @classmethod
    def from_labels(cls, parent: Universe, labels: Iterable) -> "Subset":
        mask = 0
        for lab in labels:
            mask |= 1 << parent.index(lab)
        return cls(parent, mask)

    @classmethod
    def empty(cls, parent: Universe) -> "Subset":
        return cls(parent, 0)

    @classmethod
    def full(cls, parent: Universe) -> "Subset":
        return cls(parent, parent.full_mask())

    def labels(self) -> tuple[str, ...]:
        """Members in universe order."""
        return tuple(
            lab for i, lab in enumerate(self.parent.labels) if self.mask >> i & 1
        )

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels())

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, label) -> bool:
        return bool(self.mask >> self.parent.index(label) & 1)

    def __le__(self, other: "Subset") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def __or__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.parent, self.mask | other.mask)

    def __and__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.parent, self.mask & other.mask)

    def complement(self) -> "Subset":
        return Subset(self.parent, self.parent.full_mask() & ~self.mask)

    def _check(self, other: "Subset"):
        if other.parent != self.parent:
            raise InvalidSubset("subsets belong to different universes")


@dataclass(frozen=True)
class DynamicalSystem:
    """Ordered state set, total unit-step map, and a time model.

    ``step[i]`` is the index of U(x_i, 1). Construct through
    :func:`build_system`, which validates totality, label uniqueness and
    (for group time) invertibility; the identity U(x, 0) = x and the monoid
    law U(x, s + t) = U(U(x, t), s) then hold by construction.
    """

    universe: Universe
    step: tuple[int, ...]
    time: TimeModel = field(default_factory=TimeModel)

    def __post_init__(self):
        n = self.universe.size
        if len(self.step) != n or any(not 0 <= i < n for i in self.step):
            raise InvalidSubset("step table does not match the universe")
        if self.time.kind is TimeKind.GROUP and len(set(self.step)) != n:
            raise NotInvertible(
                "group time requires the step map to be a bijection"
            )

    @property
    def labels(self) -> tuple[str, ...]:
        return self.universe.labels

    @property
    def size(self) -> int:
        return self.universe.size

    def subset(self, labels: Iterable) -> Subset:
        return Subset.from_labels(self.universe, labels)

    def evolve(self, x, t: int) -> str:
        return evolve(self, x, t)

    def trajectory(self, x0, horizon: int) -> tuple[str, ...]:
        return trajectory(self, x0, horizon)

    def reach(self, region: Subset, horizon: int) -> "ReachabilitySet":
        return reach(self, region, horizon)


@dataclass(frozen=True)
class ReachabilitySet:
    """The union of all trajectories from ``source`` over times 0..horizon."""

    source: Subset
    horizon: int
    members: Subset

    def labels(self) -> tuple[str, ...]:
        return self.members.labels()


def build_system(
    labels: Iterable,
    transitions: Mapping,
    time: TimeModel | None = None,
) -> DynamicalSystem:
    """Validate and assemble a finite dynamical system.

    ``transitions`` maps each label to its image under the unit step; it must
    be total on ``labels`` and mention no other states. With group time the
    map must additionally be a bijection.
    """
    time = time or TimeModel()
    universe = Universe.of(labels)
    norm_trans = {normalize_label(k): normalize_label(v) for k, v in transitions.items()}
    for k in norm_trans:
        if k not in universe:
            raise UnknownLabel(k)
    step = []
    for lab in universe.labels:
        if lab not in norm_trans:
            raise MissingTransition(lab)
        step.append(universe.index(norm_trans[lab]))
    return DynamicalSystem(universe, tuple(step), time)


def _indexed_evolve(sys: DynamicalSystem, i: int, t: int) -> int:
    if t >= 0:
        for _ in range(t):
            i = sys.step[i]
        return i
    if sys.time.kind is not TimeKind.GROUP:
        raise NegativeTimeInMonoid(
            f"t = {t} < 0 requires group time (an invertible step map)"
        )
    inverse = [0] * sys.size
    for j, img in enumerate(sys.step):
        inverse[img] = j
    for _ in range(-t):
        i = inverse[i]
    return i


def evolve(sys: DynamicalSystem, x, t: int) -> str:
    """Apply the step map t times to state x; U(x, 0) = x."""
    i = sys.universe.index(x)
    return sys.labels[_indexed_evolve(sys, i, t)]


def trajectory(sys: DynamicalSystem, x0, horizon: int) -> tuple[str, ...]:
    """The ordered orbit [U(x0, 0), ..., U(x0, T)]; revisits are preserved."""
    if horizon < 0:
        raise NegativeTimeInMonoid(f"trajectory horizon must be >= 0, got {horizon}")
    i = sys.universe.index(x0)
    out = [sys.labels[i]]
    for _ in range(horizon):
        i = sys.step[i]
        out.append(sys.labels[i])
    return tuple(out)


def _step_mask(sys: DynamicalSystem, mask: int) -> int:
    out = 0
    m = mask
    while m:
        low = m & -m
        out |= 1 << sys.step[low.bit_length() - 1]
        m ^= low
    return out


def reach(sys: DynamicalSystem, region: Subset, horizon: int) -> ReachabilitySet:
    """Reachability domain: every state attainable from ``region`` within T steps.

    Contains ``region`` (t = 0), is monotone in both T and the region, and
    distributes over unions.
    """
    if region.parent != sys.universe:
        raise InvalidSubset("subset does not belong to this system")
    if horizon < 0:
        raise NegativeTimeInMonoid(f"reach horizon must be >= 0, got {horizon}")
    members = frontier = region.mask
    for _ in range(horizon):
        frontier = _step_mask(sys, frontier)
        if frontier & ~members == 0:
            break
        members |= frontier
    return ReachabilitySet(region, horizon, Subset(sys.universe, members))


def point_reach_masks(sys: DynamicalSystem, horizon: int) -> list[int]:
    """Reach masks of each singleton; generators for every other reach set."""
    masks = []
    for i in range(sys.size):
        members = frontier = 1 << i
        for _ in range(horizon):
            frontier = _step_mask(sys, frontier)
            if frontier & ~members == 0:
                break
            members |= frontier
        masks.append(members)
    return masks


def reach_table(sys: DynamicalSystem, horizon: int) -> list[int]:
    """Reach mask of every subset, indexed by subset bitmask.

    Since reachability distributes over unions, the table is assembled from
    the singleton masks with one OR per subset. Size is 2**n entries; callers
    enforce their own caps.
    """
    points = point_reach_masks(sys, horizon)
    n = sys.size
    table = [0] * (1 << n)
    for m in range(1, 1 << n):
        low = m & -m
        table[m] = table[m ^ low] | points[low.bit_length() - 1]
    return table
