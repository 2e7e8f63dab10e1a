"""Observation as distinction: property-generated sigma-algebras and measures.

A binary property splits the ground set in two; several properties jointly
fingerprint each element, and the fingerprint classes are the atoms of the
generated sigma-algebra. On a finite set every sigma-algebra is determined by
its atom partition, so algebras are stored by atoms and the full member list
(all 2**k unions) is materialized only on demand.

Measures assign non-negative weight to atoms and extend additively; a
probabilistic measure is normalized to total mass one and induces expectation
values of real functions on the ground set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .dynsys import (
    DynamicalSystem,
    Subset,
    Universe,
    normalize_label,
    point_reach_masks,
)
from .errors import (
    NotAnAtom,
    NotMeasurable,
    NotProbabilistic,
    PartialFunction,
    PartialProperty,
    StateSpaceTooLarge,
)
from .pretopology import ENUMERATION_CAP

__all__ = [
    "PropertyFn",
    "SigmaAlgebra",
    "Measure",
    "MeasureReport",
    "generate_sigma",
    "sigma_from_reachability",
    "expectation",
    "validate_measure",
]

#: absolute tolerance for comparing sums of weights
WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class PropertyFn:
    """A named binary property: 1 on elements satisfying it, 0 otherwise."""

    name: str
    truth: Mapping[str, int]

    @classmethod
    def from_predicate(
        cls, name: str, universe: Universe, predicate: Callable[[str], bool]
    ) -> "PropertyFn":
        return cls(name, {lab: int(bool(predicate(lab))) for lab in universe.labels})

    def truth_vector(self, universe: Universe) -> tuple[int, ...]:
        """Truth values in universe order; the property must be total."""
        out = []
        for lab in universe.labels:
            if lab not in self.truth:
                raise PartialProperty(self.name, lab)
            out.append(1 if self.truth[lab] else 0)
        return tuple(out)

    def support(self, universe: Universe) -> Subset:
        """The preimage of 1."""
        vec = self.truth_vector(universe)
        mask = 0
        for i, v in enumerate(vec):
            mask |= v << i
        return Subset(universe, mask)


@dataclass(frozen=True)
class SigmaAlgebra:
    """A finite sigma-algebra stored by its atom partition.

    Atoms are disjoint, nonempty, cover the universe, and are kept in
    canonical order (cardinality, then bitset value). Members are exactly the
    unions of atoms: 2**len(atoms) sets in total.
    """

    universe: Universe
    atoms: tuple[Subset, ...]

    def __post_init__(self):
        seen = 0
        for a in self.atoms:
            if a.parent != self.universe or a.mask == 0 or a.mask & seen:
                raise NotAnAtom("atoms must be disjoint nonempty subsets")
            seen |= a.mask
        if seen != self.universe.full_mask():
            raise NotAnAtom("atoms must cover the universe")

    @property
    def n_sets(self) -> int:
        return 1 << len(self.atoms)

    def atom_of(self, label) -> Subset:
        i = self.universe.index(label)
        for a in self.atoms:
            if a.mask >> i & 1:
                return a
        raise NotMeasurable(f"no atom contains {label!r}")  # unreachable

    def contains(self, s: Subset) -> bool:
        """Membership test: s must be a union of atoms."""
        if s.parent != self.universe:
            return False
        covered = 0
        for a in self.atoms:
            if a.mask & s.mask:
                if a.mask & ~s.mask:
                    return False
                covered |= a.mask
        return covered == s.mask

    def sets(self, cap: int = ENUMERATION_CAP) -> tuple[Subset, ...]:
        """All members, canonically ordered; guarded against 2**k blowup."""
        k = len(self.atoms)
        if k > cap:
            raise StateSpaceTooLarge(k, cap)
        masks = []
        for pick in range(1 << k):
            m = 0
            p = pick
            while p:
                low = p & -p
                m |= self.atoms[low.bit_length() - 1].mask
                p ^= low
            masks.append(m)
        masks.sort(key=lambda m: (m.bit_count(), m))
        return tuple(Subset(self.universe, m) for m in masks)

    def indicator_properties(self) -> list[PropertyFn]:
        """One 0/1 property per atom; regenerating from these reproduces self."""
        out = []
        for i, a in enumerate(self.atoms):
            out.append(
                PropertyFn(
                    f"atom_{i}",
                    {lab: int(lab in a) for lab in self.universe.labels},
                )
            )
        return out


def _atoms_from_fingerprints(
    universe: Universe, fingerprints: Sequence[tuple]
) -> tuple[Subset, ...]:
    classes: dict[tuple, int] = {}
    for i, fp in enumerate(fingerprints):
        classes[fp] = classes.get(fp, 0) | (1 << i)
    masks = sorted(classes.values(), key=lambda m: (m.bit_count(), m))
    return tuple(Subset(universe, m) for m in masks)


def generate_sigma(
    properties: Iterable[PropertyFn], universe: Universe
) -> SigmaAlgebra:
    """Smallest sigma-algebra distinguishing elements by the given properties.

    Atoms are the classes of the joint truth-value fingerprint; with no
    properties the result is the trivial algebra {empty, X}.
    """
    vectors = [p.truth_vector(universe) for p in properties]
    fingerprints = [
        tuple(vec[i] for vec in vectors) for i in range(universe.size)
    ]
    return SigmaAlgebra(universe, _atoms_from_fingerprints(universe, fingerprints))


def sigma_from_reachability(sys: DynamicalSystem, horizon: int) -> SigmaAlgebra:
    """Smallest sigma-algebra containing every reachability domain.

    Single-point domains suffice as generators: reachability distributes over
    unions, so every other domain is already a union of these.
    """
    if sys.size > ENUMERATION_CAP:
        raise StateSpaceTooLarge(sys.size, ENUMERATION_CAP)
    points = point_reach_masks(sys, horizon)
    fingerprints = [
        tuple(pm >> i & 1 for pm in points) for i in range(sys.size)
    ]
    return SigmaAlgebra(sys.universe, _atoms_from_fingerprints(sys.universe, fingerprints))


@dataclass(frozen=True)
class Measure:
    """Non-negative weights on the atoms of a sigma-algebra, extended additively.

    ``weights[i]`` belongs to ``algebra.atoms[i]``. When ``probabilistic`` the
    total mass is expected to be 1 (validated by callers that need it, and
    reported by :func:`validate_measure`).
    """

    algebra: SigmaAlgebra
    weights: tuple[float, ...]
    probabilistic: bool = True

    def __post_init__(self):
        if len(self.weights) != len(self.algebra.atoms):
            raise NotAnAtom(
                f"{len(self.weights)} weights for {len(self.algebra.atoms)} atoms"
            )

    @classmethod
    def from_atom_weights(
        cls,
        algebra: SigmaAlgebra,
        atom_weights: Mapping,
        probabilistic: bool = True,
    ) -> "Measure":
        """Weights keyed by an atom's member tuple (or any single member label).

        Keys naming sets that are not atoms of the algebra are rejected:
        defining a measure directly on a non-atom would leave it ill-defined.
        """
        by_mask: dict[int, float] = {}
        for key, w in atom_weights.items():
            if isinstance(key, (str, int)):
                atom = algebra.atom_of(key)
                if len(atom) != 1:
                    raise NotAnAtom(
                        f"label {key!r} names a non-singleton atom {atom.labels()}; "
                        "key it by the full member tuple"
                    )
                mask = atom.mask
            else:
                s = Subset.from_labels(algebra.universe, key)
                if not any(a.mask == s.mask for a in algebra.atoms):
                    raise NotAnAtom(f"{tuple(key)!r} is not an atom of the algebra")
                mask = s.mask
            by_mask[mask] = by_mask.get(mask, 0.0) + float(w)
        weights = tuple(by_mask.get(a.mask, 0.0) for a in algebra.atoms)
        return cls(algebra, weights, probabilistic)

    @classmethod
    def from_point_weights(
        cls,
        algebra: SigmaAlgebra,
        point_weights: Mapping,
        probabilistic: bool = True,
    ) -> "Measure":
        """Per-element weights, summed within each atom."""
        acc = [0.0] * len(algebra.atoms)
        for label, w in point_weights.items():
            lab = normalize_label(label)
            i = algebra.universe.index(lab)
            for k, a in enumerate(algebra.atoms):
                if a.mask >> i & 1:
                    acc[k] += float(w)
                    break
        return cls(algebra, tuple(acc), probabilistic)

    @classmethod
    def uniform(cls, algebra: SigmaAlgebra) -> "Measure":
        """Mass 1 split equally over elements, then summed within atoms."""
        n = algebra.universe.size
        return cls.from_point_weights(
            algebra, {lab: 1.0 / n for lab in algebra.universe.labels}
        )

    def mu(self, s: Subset) -> float:
        """Measure of a member set (the sum of its atoms' weights)."""
        if not self.algebra.contains(s):
            raise NotMeasurable(f"{s.labels()!r} is not in the sigma-algebra")
        return sum(
            w for a, w in zip(self.algebra.atoms, self.weights) if a.mask & s.mask
        )

    @property
    def total(self) -> float:
        return sum(self.weights)


def expectation(f, m: Measure) -> float:
    """Expectation of a real function under a probabilistic measure.

    ``f`` is a mapping or callable on element labels. Each element carries an
    equal share of its atom's weight, so for functions measurable with
    respect to the algebra this is the usual integral; it is linear in ``f``
    and monotone.
    """
    if not m.probabilistic or abs(m.total - 1.0) > WEIGHT_TOL:
        raise NotProbabilistic(
            f"expectation requires total mass 1, got {m.total!r}"
        )

    def value(label: str) -> float:
        if callable(f):
            return float(f(label))
        if label not in f:
            raise PartialFunction(label)
        return float(f[label])

    out = 0.0
    for atom, w in zip(m.algebra.atoms, m.weights):
        share = w / len(atom)
        for lab in atom.labels():
            out += value(lab) * share
    return out


@dataclass(frozen=True)
class MeasureReport:
    """Diagnostic record from :func:`validate_measure`."""

    non_negative: bool
    min_weight: float
    additive: bool
    additivity_deviation: float
    normalization_deviation: float
    probabilistic_ok: bool


def validate_measure(m: Measure, pair_cap: int = 8) -> MeasureReport:
    """Check non-negativity, additivity on disjoint members, and normalization.

    Additivity is verified exhaustively over disjoint member pairs when the
    algebra has at most ``pair_cap`` atoms; beyond that only the atom
    decomposition of the full set is cross-checked.
    """
    min_w = min(m.weights) if m.weights else 0.0
    dev = 0.0
    if len(m.algebra.atoms) <= pair_cap:
        sets = m.algebra.sets()
        values = {s.mask: m.mu(s) for s in sets}
        for a in sets:
            for b in sets:
                if a.mask & b.mask == 0:
                    dev = max(
                        dev, abs(values[a.mask | b.mask] - values[a.mask] - values[b.mask])
                    )
    else:
        full = Subset.full(m.algebra.universe)
        dev = abs(m.mu(full) - m.total)
    norm_dev = abs(m.total - 1.0)
    return MeasureReport(
        non_negative=min_w >= -WEIGHT_TOL,
        min_weight=min_w,
        additive=dev <= WEIGHT_TOL,
        additivity_deviation=dev,
        normalization_deviation=norm_dev,
        probabilistic_ok=(not m.probabilistic) or norm_dev <= WEIGHT_TOL,
    )
