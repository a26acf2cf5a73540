"""Problem instances, their validation and the radial majorant."""

from enum import Enum

from typing import (
    Any,
    Dict,
    List,
    Optional,
    Union,
)

import numpy as np

from ..debug import Debug

from ..errors import (
    PotentialEvaluationError,
    UnsupportedInstanceError,
)

from ..util import (
    class_str,
    log_info,
    log_warning,
)

from .potentials import (
    PotentialSpec,
    Radii,
    sphere_cosines,
)

######################################################################

# Size and extent of the sign audit grid.
AUDIT_POINTS = 512
AUDIT_RADIUS = 1.0e4

def audit_grid() -> np.ndarray:
    """Deterministic grid on which the potentials are audited.

    The origin followed by log-spaced points up to the audit radius.

    """
    logs = np.logspace(-6.0, np.log10(AUDIT_RADIUS), AUDIT_POINTS - 1)
    return np.concatenate(([0.0], logs))

######################################################################

class Problem:
    """Instance of -Laplacian(u) + q |grad u|^a = p u^(-gamma) in R^N."""

    def __init__(
            self,
            dimension: int,
            gamma: float,
            a: float,
            p_spec: PotentialSpec,
            q_spec: PotentialSpec,
            phi_spec: Optional[PotentialSpec] = None,
            p_radial: Optional[bool] = None,
    ):
        """Initialize the instance.

        The radial character of p is taken from the potential unless
        it is given explicitly.  Declaring an expression non-radial
        means that it describes p along some ray only, so that a
        majorant has to be supplied.

        """
        self._dimension = dimension
        self._gamma = gamma
        self._a = a
        self._p_spec = p_spec
        self._q_spec = q_spec
        self._phi_spec = phi_spec
        if p_radial is None:
            p_radial = p_spec.is_radial
        self._p_radial = p_radial and p_spec.is_radial

    def __repr__(self) -> str:
        """Represent as string."""
        content = (
            f"N={self._dimension}, gamma={self._gamma}, a={self._a}, "
            f"p={self._p_spec.source!r}, q={self._q_spec.source!r}"
        )
        return class_str(self, content)

    @property
    def dimension(self) -> int:
        """Spatial dimension N."""
        return self._dimension

    @property
    def gamma(self) -> float:
        """Singularity exponent."""
        return self._gamma

    @property
    def a(self) -> float:
        """Gradient exponent."""
        return self._a

    @property
    def p_spec(self) -> PotentialSpec:
        """Source potential p."""
        return self._p_spec

    @property
    def q_spec(self) -> PotentialSpec:
        """Gradient coefficient q."""
        return self._q_spec

    @property
    def phi_spec(self) -> Optional[PotentialSpec]:
        """User-supplied radial majorant of p, if any."""
        return self._phi_spec

    @property
    def p_radial(self) -> bool:
        """True if p is a radial function."""
        return self._p_radial

######################################################################

class Violation:
    """One failed condition of a problem instance."""

    DIMENSION_TOO_SMALL = 'dimension-too-small'
    NONPOSITIVE_EXPONENT = 'nonpositive-exponent'
    POTENTIAL_SIGN = 'potential-sign-violation'
    POTENTIAL_EVALUATION = 'potential-evaluation-failure'
    MAJORANT = 'majorant-violation'

    def __init__(self, kind: str, message: str, witness: Optional[float] = None):
        """Initialize with the kind, a description and a witness radius."""
        self.kind = kind
        self.message = message
        self.witness = witness

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, f"{self.kind}: {self.message}")

class ValidationReport:
    """Collection of the violated conditions of a problem."""

    def __init__(self, problem: Problem, violations: List[Violation]):
        """Initialize with the problem and what is wrong with it."""
        self._problem = problem
        self._violations = list(violations)

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, self.describe())

    def __str__(self) -> str:
        """Describe the violations."""
        return self.describe()

    @property
    def problem(self) -> Problem:
        """The problem that was validated."""
        return self._problem

    @property
    def violations(self) -> List[Violation]:
        """Violated conditions."""
        return list(self._violations)

    def kinds(self) -> List[str]:
        """Kinds of the violated conditions."""
        return [violation.kind for violation in self._violations]

    def describe(self) -> str:
        """Return a one-line description."""
        return "; ".join(v.message for v in self._violations)

def validate_problem(problem: Problem) -> Union[Problem, ValidationReport]:
    """Check the standing assumptions of the problem.

    Returns the problem itself if N >= 3, gamma > 0, a > 0, p > 0 and
    q >= 0 hold on the audit grid, otherwise a report naming every
    violated condition with a witness radius.

    """
    violations: List[Violation] = []
    if problem.dimension < 3:
        violations.append(Violation(
            Violation.DIMENSION_TOO_SMALL,
            f"dimension N={problem.dimension} is smaller than 3",
        ))
    for name, value in (('gamma', problem.gamma), ('a', problem.a)):
        if not value > 0:
            violations.append(Violation(
                Violation.NONPOSITIVE_EXPONENT,
                f"exponent {name}={value} is not positive",
            ))
    radii = audit_grid()
    violations.extend(_audit_sign('p', problem.p_spec, radii, strict=True))
    violations.extend(_audit_sign('q', problem.q_spec, radii, strict=False))
    phi_spec = problem.phi_spec
    if phi_spec is not None and not problem.p_radial:
        violations.extend(_audit_sign('phi', phi_spec, radii, strict=True))
        violations.extend(_audit_majorant(problem, phi_spec, radii))
    if violations:
        return ValidationReport(problem, violations)
    if Debug.is_enabled():
        log_info(f"Problem {problem} passed validation")
    return problem

def _audit_sign(
        name: str,
        spec: PotentialSpec,
        radii: np.ndarray,
        strict: bool,
) -> List[Violation]:
    """Check that the potential is positive (or nonnegative) on the grid."""
    try:
        values = spec.sphere_values(radii, sphere_cosines()).min(axis=-1)
    except PotentialEvaluationError as err:
        return [Violation(Violation.POTENTIAL_EVALUATION, f"{name}: {err}")]
    if strict:
        bad = np.flatnonzero(values <= 0.0)
        # A value that underflowed to zero is still positive.
        bad = np.array([i for i in bad
                        if not (values[i] == 0.0 and spec.is_radial and
                                spec.underflows(float(radii[i])))],
                       dtype=int)
        relation = "positive"
    else:
        bad = np.flatnonzero(values < 0.0)
        relation = "nonnegative"
    if len(bad) == 0:
        return []
    witness = float(radii[bad[0]])
    value = float(values[bad[0]])
    message = f"{name} is not {relation}: {name}({witness:.6g}) = {value:.6g}"
    return [Violation(Violation.POTENTIAL_SIGN, message, witness)]

def _audit_majorant(
        problem: Problem,
        phi_spec: PotentialSpec,
        radii: np.ndarray,
) -> List[Violation]:
    """Check that the supplied majorant dominates p on the audit grid."""
    try:
        bound = np.asarray(phi_spec.evaluate(radii))
        sphere_max = problem.p_spec.sphere_values(
            radii, sphere_cosines()).max(axis=-1)
    except PotentialEvaluationError as err:
        return [Violation(Violation.POTENTIAL_EVALUATION, str(err))]
    bad = np.flatnonzero(bound < sphere_max)
    if len(bad) == 0:
        return []
    witness = float(radii[bad[0]])
    message = f"phi does not dominate p at r={witness:.6g}"
    return [Violation(Violation.MAJORANT, message, witness)]

######################################################################

class Provenance(Enum):
    """Where a majorant comes from."""
    RADIAL_P = 'radial-p'
    USER_SUPPLIED = 'user-supplied'
    SPHERE_SAMPLED = 'sphere-sampled'

class MajorantProfile:
    """Radial majorant Phi(r) of the source potential."""

    def __init__(self, spec: PotentialSpec, provenance: Provenance):
        """Initialize with the potential giving Phi and its provenance."""
        self._spec = spec
        self._provenance = provenance

    def __repr__(self) -> str:
        """Represent as string."""
        content = f"{self._spec.source!r}, {self._provenance.value}"
        return class_str(self, content)

    def __call__(self, r: Radii) -> Radii:
        """Evaluate Phi at the given radii."""
        return self.phi(r)

    def phi(self, r: Radii) -> Radii:
        """Evaluate Phi at the given radii."""
        return self._spec.evaluate(r)

    @property
    def spec(self) -> PotentialSpec:
        """Potential that evaluates Phi."""
        return self._spec

    @property
    def provenance(self) -> Provenance:
        """Origin of the majorant."""
        return self._provenance

class SphereMaximum(PotentialSpec):
    """Maximum of a non-radial potential over sampled spheres."""

    def __init__(self, spec: PotentialSpec):
        """Initialize with the non-radial potential."""
        self._spec = spec

    @property
    def source(self) -> Dict[str, Any]:
        """Configuration form of the underlying potential."""
        return {'sphere-max': self._spec.source}

    def _compute(self, radii: np.ndarray) -> np.ndarray:
        """Take the maximum over the sampled polar angles."""
        return self._spec.sphere_values(radii, sphere_cosines()).max(axis=-1)

def majorant(problem: Problem) -> MajorantProfile:
    """Return the radial majorant Phi(r) = max of p over the sphere |x| = r."""
    if problem.p_radial:
        if problem.phi_spec is not None:
            log_warning("p is radial; ignoring the supplied majorant")
        return MajorantProfile(problem.p_spec, Provenance.RADIAL_P)
    if problem.phi_spec is not None:
        return MajorantProfile(problem.phi_spec, Provenance.USER_SUPPLIED)
    if not problem.p_spec.is_radial:
        spec = SphereMaximum(problem.p_spec)
        return MajorantProfile(spec, Provenance.SPHERE_SAMPLED)
    raise UnsupportedInstanceError(
        "p is declared non-radial: supply its radial majorant as phi")

def solve_potential(problem: Problem, phi: MajorantProfile) -> PotentialSpec:
    """Potential used in place of p by the radial ball solves.

    Radial p is used as it is; for non-radial p the radial solves use
    the majorant, whose solution dominates the true one.

    """
    if problem.p_radial:
        return problem.p_spec
    return phi.spec
