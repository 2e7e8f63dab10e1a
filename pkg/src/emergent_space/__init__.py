"""Space from dynamics and observation.

Subpackages build, in order: finite dynamical systems and reachability
(:mod:`~emergent_space.dynsys`), the induced pre-topology and topology test
(:mod:`~emergent_space.pretopology`), sigma-algebras and measures from
observational distinctions (:mod:`~emergent_space.sigma_measure`), matrix
*-algebras with the GNS construction (:mod:`~emergent_space.star_gns`),
observable-induced measurement contexts (:mod:`~emergent_space.context`),
and a closed-form spin-precession laboratory (:mod:`~emergent_space.spinlab`).
"""

from .context import (
    Observable,
    SpectralContext,
    commutes,
    gelfand_points,
    joint_context,
    marginal_context,
    spectral_context,
)
from .dynsys import (
    DynamicalSystem,
    ReachabilitySet,
    Subset,
    TimeKind,
    TimeModel,
    Universe,
    build_system,
    evolve,
    reach,
    trajectory,
)
from .errors import EmergentSpaceError
from .pretopology import (
    Classification,
    ClosureReport,
    TopologyVerdict,
    check_axioms,
    classify_subset,
    closed_family,
    interior,
)
from .sigma_measure import (
    Measure,
    PropertyFn,
    SigmaAlgebra,
    expectation,
    generate_sigma,
    sigma_from_reachability,
    validate_measure,
)
from .spinlab import (
    OrbitClass,
    OrbitReport,
    SpinState,
    SpinSystem,
    corotating_eigencheck,
    evolution_operator,
    evolve_state,
    heisenberg_spin,
    reachability_orbit,
)
from .star_gns import (
    AlgState,
    GnsRepresentation,
    StarAlgebra,
    adjoint,
    commutator,
    gns,
    is_self_adjoint,
    star_algebra,
    truncated_oscillator,
)

__version__ = "0.1.0"
