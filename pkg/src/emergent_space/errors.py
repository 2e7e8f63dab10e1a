"""Exception hierarchy shared by all emergent_space modules.

Errors fall into two families mirrored by the CLI exit codes: input errors
(bad labels, partial maps, malformed files -> exit 1) and domain errors
(mathematically meaningful impossibilities such as an incompatible
measurement context -> exit 2).
"""

from __future__ import annotations


class EmergentSpaceError(Exception):
    """Base class for every error raised by this package."""


# ---------------------------------------------------------------------------
# dynamical systems


class DuplicateLabel(EmergentSpaceError):
    def __init__(self, label: str):
        super().__init__(f"duplicate state label {label!r}")
        self.label = label


class MissingTransition(EmergentSpaceError):
    def __init__(self, label: str):
        super().__init__(f"no transition defined for state {label!r}")
        self.label = label


class UnknownLabel(EmergentSpaceError):
    def __init__(self, label: str):
        super().__init__(f"unknown state label {label!r}")
        self.label = label


class NotInvertible(EmergentSpaceError):
    """Group-time step maps must be bijections."""


class NegativeTimeInMonoid(EmergentSpaceError):
    """Monoid time admits only forward evolution (t >= 0)."""


class UnsupportedTimeStructure(EmergentSpaceError):
    """Time structures other than monoid or group steps are rejected."""


class InvalidSubset(EmergentSpaceError):
    """Subset does not belong to the system's element ordering."""


class StateSpaceTooLarge(EmergentSpaceError):
    def __init__(self, size: int, cap: int):
        super().__init__(
            f"state space has {size} elements; exhaustive enumeration capped at {cap}"
        )
        self.size = size
        self.cap = cap


# ---------------------------------------------------------------------------
# sigma-algebras and measures


class PartialProperty(EmergentSpaceError):
    def __init__(self, name: str, label: str):
        super().__init__(f"property {name!r} is undefined on element {label!r}")
        self.name = name
        self.label = label


class PartialFunction(EmergentSpaceError):
    def __init__(self, label: str):
        super().__init__(f"function is undefined on element {label!r}")
        self.label = label


class NotAnAtom(EmergentSpaceError):
    """Measure weights may only be assigned to atoms of the algebra."""


class NotMeasurable(EmergentSpaceError):
    """Set is not a member of the sigma-algebra."""


class NotProbabilistic(EmergentSpaceError):
    """Operation requires a measure normalized to total mass one."""


# ---------------------------------------------------------------------------
# matrix algebras, states, representations


class DimMismatch(EmergentSpaceError):
    def __init__(self, a: tuple, b: tuple):
        super().__init__(f"matrix dimensions {a} and {b} do not match")


class NotSelfAdjoint(EmergentSpaceError):
    def __init__(self, defect: float, name: str = ""):
        what = f"{name!r} " if name else ""
        super().__init__(
            f"matrix {what}is not self-adjoint (max asymmetry {defect:.3e})"
        )
        self.defect = defect


class NotAState(EmergentSpaceError):
    """Density matrix fails hermiticity, positivity, or unit trace."""


class NonClosedAlgebra(EmergentSpaceError):
    """Span is not closed under products / adjoints within tolerance."""


class ContextIncompatible(EmergentSpaceError):
    """Two observables fail to commute, so no joint measurement context exists."""

    def __init__(self, i: int, j: int, commutator_norm: float):
        super().__init__(
            f"observables {i} and {j} do not commute "
            f"(commutator max-norm {commutator_norm:.6g}); "
            "no simultaneous measurement context exists"
        )
        self.i = i
        self.j = j
        self.commutator_norm = commutator_norm


# ---------------------------------------------------------------------------
# spin lab


class ZeroField(EmergentSpaceError):
    """Spin precession requires a nonzero magnetic field."""


class BadAxis(EmergentSpaceError):
    def __init__(self, axis: int):
        super().__init__(f"axis index must be 1, 2 or 3, got {axis}")


class HorizonTooShort(EmergentSpaceError):
    """Sampled time span does not cover one full evolution cycle."""


# ---------------------------------------------------------------------------
# CLI / files


class SchemaError(EmergentSpaceError):
    def __init__(self, path: str, expected: str, got: str):
        super().__init__(f"at {path}: expected {expected}, got {got}")
        self.path = path
        self.expected = expected
        self.got = got


class UnknownScenario(EmergentSpaceError):
    def __init__(self, name: str, known: tuple[str, ...]):
        super().__init__(
            f"unknown scenario {name!r}; known scenarios: {', '.join(known)}"
        )
        self.name = name


class GoldenMismatch(EmergentSpaceError):
    def __init__(self, name: str, diff: str):
        super().__init__(f"scenario {name!r} output differs from golden file:\n{diff}")
        self.name = name
        self.diff = diff


#: errors that represent a meaningful mathematical outcome rather than bad input
DOMAIN_ERRORS = (ContextIncompatible,)
