"""Run configurations and their construction from nested mappings."""

from typing import (
    Any,
    Callable,
    Dict,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

from ..errors import (
    ConfigError,
    MissingKeyError,
    UnknownKeyError,
    UnsupportedInstanceError,
)

from ..util import class_str

from .potentials import (
    PotentialSource,
    make_potential,
)

from .problem import Problem

######################################################################

# A definition is a mapping from names to other definitions or, at the
# lowest level, values.
Definition = Mapping[str, Any]

# Line numbers of the keys, indexed by their path in the definition.
LineMap = Mapping[Tuple[str, ...], int]

# Output formats that can be requested.
FORMATS = ('csv', 'json', 'svg')

######################################################################

class ProblemSettings:
    """The problem section: dimension, exponents and potentials."""

    def __init__(
            self,
            N: int,
            gamma: float,
            a: float,
            p: PotentialSource,
            q: PotentialSource,
            phi: Optional[PotentialSource] = None,
            p_radial: Optional[bool] = None,
    ):
        """Initialize the settings."""
        self.N = N
        self.gamma = gamma
        self.a = a
        self.p = p
        self.q = q
        self.phi = phi
        self.p_radial = p_radial

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, self.as_mapping())

    def as_mapping(self) -> Dict[str, Any]:
        """Plain data form; unset optional keys are left out."""
        result: Dict[str, Any] = {
            'N': self.N,
            'gamma': self.gamma,
            'a': self.a,
            'p': _plain(self.p),
            'q': _plain(self.q),
        }
        if self.phi is not None:
            result['phi'] = _plain(self.phi)
        if self.p_radial is not None:
            result['p_radial'] = self.p_radial
        return result

    def make_problem(self) -> Problem:
        """Compile the potentials into a problem instance."""
        def potential(source: PotentialSource, name: str) -> Any:
            try:
                return make_potential(source, self.N, self.gamma, self.a)
            except KeyError as err:
                raise MissingKeyError(
                    f"potential '{name}' lacks parameter {err}") from err
            except UnsupportedInstanceError as err:
                raise ConfigError(f"potential '{name}': {err}") from err
        p_spec = potential(self.p, 'p')
        q_spec = potential(self.q, 'q')
        phi_spec = None if self.phi is None else potential(self.phi, 'phi')
        return Problem(self.N, self.gamma, self.a, p_spec, q_spec,
                       phi_spec, self.p_radial)

class SolverSettings:
    """The solver section: grid spacing, radius schedule and tolerances."""

    def __init__(
            self,
            h: float = 0.01,
            R0: float = 5.0,
            terms: int = 8,
            radii: Optional[Sequence[float]] = None,
            cauchy_tol: float = 2e-3,
            tail_tol: float = 0.25,
            newton_tol: float = 1e-9,
            max_iter: int = 100,
            quad_tol: float = 1e-8,
            eigen_tol: float = 1e-12,
            eigen_radius: Optional[float] = None,
            slack_factor: float = 2.0,
            gradient_eps: float = 1e-12,
    ):
        """Initialize the settings."""
        self.h = h
        self.R0 = R0
        self.terms = terms
        self.radii = None if radii is None else [float(r) for r in radii]
        self.cauchy_tol = cauchy_tol
        self.tail_tol = tail_tol
        self.newton_tol = newton_tol
        self.max_iter = max_iter
        self.quad_tol = quad_tol
        self.eigen_tol = eigen_tol
        self.eigen_radius = eigen_radius
        self.slack_factor = slack_factor
        self.gradient_eps = gradient_eps

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, self.as_mapping())

    def schedule(self) -> List[float]:
        """Radius schedule: the explicit radii or R0 2^k."""
        if self.radii is not None:
            return list(self.radii)
        return [self.R0 * 2.0 ** k for k in range(self.terms)]

    def as_mapping(self) -> Dict[str, Any]:
        """Plain data form; unset optional keys are left out."""
        result: Dict[str, Any] = {
            'h': self.h,
            'R0': self.R0,
            'terms': self.terms,
        }
        if self.radii is not None:
            result['radii'] = list(self.radii)
        result.update({
            'cauchy_tol': self.cauchy_tol,
            'tail_tol': self.tail_tol,
            'newton_tol': self.newton_tol,
            'max_iter': self.max_iter,
            'quad_tol': self.quad_tol,
            'eigen_tol': self.eigen_tol,
        })
        if self.eigen_radius is not None:
            result['eigen_radius'] = self.eigen_radius
        result.update({
            'slack_factor': self.slack_factor,
            'gradient_eps': self.gradient_eps,
        })
        return result

class OutputSettings:
    """The output section: where to write and in which formats."""

    def __init__(
            self,
            directory: str = ".",
            formats: Sequence[str] = ('csv', 'json'),
    ):
        """Initialize the settings."""
        self.directory = directory
        self.formats = list(formats)

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, self.as_mapping())

    def wants(self, fmt: str) -> bool:
        """Answer whether the format was requested."""
        return fmt in self.formats

    def as_mapping(self) -> Dict[str, Any]:
        """Plain data form."""
        return {
            'directory': self.directory,
            'formats': list(self.formats),
        }

class RunConfig:
    """Complete configuration of a run."""

    def __init__(
            self,
            problem: ProblemSettings,
            solver: Optional[SolverSettings] = None,
            output: Optional[OutputSettings] = None,
    ):
        """Initialize with the three sections; missing ones get defaults."""
        self.problem = problem
        self.solver = solver or SolverSettings()
        self.output = output or OutputSettings()

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, self.as_mapping())

    def __eq__(self, other: object) -> bool:
        """Configurations are equal when all their fields are."""
        if not isinstance(other, RunConfig):
            return False
        return self.as_mapping() == other.as_mapping()

    def as_mapping(self) -> Dict[str, Any]:
        """Plain data form, with every default made explicit."""
        return {
            'problem': self.problem.as_mapping(),
            'solver': self.solver.as_mapping(),
            'output': self.output.as_mapping(),
        }

    def with_problem(self, **changes: Any) -> 'RunConfig':
        """Copy with some problem settings replaced."""
        values = self.problem.as_mapping()
        values.update(changes)
        problem = ProblemSettings(**values)
        return RunConfig(problem, self.solver, self.output)

    def with_directory(self, directory: str) -> 'RunConfig':
        """Copy writing its output to another directory."""
        output = OutputSettings(directory, self.output.formats)
        return RunConfig(self.problem, self.solver, output)

def _plain(source: Any) -> Any:
    """Copy mappings into plain dictionaries."""
    if isinstance(source, Mapping):
        return dict(source)
    return source

######################################################################

# Marks a key without a default.
_REQUIRED = object()

def _to_int(value: Any) -> int:
    """Accept integers only."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"expected an integer, got {value!r}")
    return value

def _to_float(value: Any) -> float:
    """Accept numbers, including exponent forms YAML reads as strings."""
    if isinstance(value, bool):
        raise ValueError(f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            pass
    raise ValueError(f"expected a number, got {value!r}")

def _to_bool(value: Any) -> bool:
    """Accept booleans only."""
    if not isinstance(value, bool):
        raise ValueError(f"expected true or false, got {value!r}")
    return value

def _to_str(value: Any) -> str:
    """Accept strings only."""
    if not isinstance(value, str):
        raise ValueError(f"expected a string, got {value!r}")
    return value

def _to_potential(value: Any) -> PotentialSource:
    """Accept expressions, numbers and family mappings."""
    if isinstance(value, bool):
        raise ValueError(f"expected an expression, got {value!r}")
    if isinstance(value, (str, int, float)):
        return value
    if isinstance(value, Mapping) and 'family' in value:
        return dict(value)
    raise ValueError(f"expected an expression, got {value!r}")

def _to_expression(value: Any) -> PotentialSource:
    """Accept expressions and numbers."""
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise ValueError(f"expected an expression, got {value!r}")
    return value

def _to_float_list(value: Any) -> List[float]:
    """Accept a list of numbers."""
    if not isinstance(value, list):
        raise ValueError(f"expected a list of numbers, got {value!r}")
    return [_to_float(item) for item in value]

def _to_formats(value: Any) -> List[str]:
    """Accept a list of known output formats."""
    if not isinstance(value, list):
        raise ValueError(f"expected a list of formats, got {value!r}")
    for item in value:
        if item not in FORMATS:
            raise ValueError(f"unknown output format {item!r}")
    return list(value)

# Converter and default of every key of every section.
_SECTIONS: Dict[str, Dict[str, Tuple[Callable[[Any], Any], Any]]] = {
    'problem': {
        'N': (_to_int, _REQUIRED),
        'gamma': (_to_float, _REQUIRED),
        'a': (_to_float, _REQUIRED),
        'p': (_to_potential, _REQUIRED),
        'q': (_to_expression, _REQUIRED),
        'phi': (_to_expression, None),
        'p_radial': (_to_bool, None),
    },
    'solver': {
        'h': (_to_float, 0.01),
        'R0': (_to_float, 5.0),
        'terms': (_to_int, 8),
        'radii': (_to_float_list, None),
        'cauchy_tol': (_to_float, 2e-3),
        'tail_tol': (_to_float, 0.25),
        'newton_tol': (_to_float, 1e-9),
        'max_iter': (_to_int, 100),
        'quad_tol': (_to_float, 1e-8),
        'eigen_tol': (_to_float, 1e-12),
        'eigen_radius': (_to_float, None),
        'slack_factor': (_to_float, 2.0),
        'gradient_eps': (_to_float, 1e-12),
    },
    'output': {
        'directory': (_to_str, "."),
        'formats': (_to_formats, ['csv', 'json']),
    },
}

class Builder:
    """Create a run configuration out of a nested mapping.

    Every section and key must be known.  The line numbers, when
    available, go into the error messages.

    """

    def __init__(self, lines: Optional[LineMap] = None):
        """Initialize with the line numbers of the keys."""
        self._lines: LineMap = lines or {}

    def build(self, top_def: Optional[Definition]) -> RunConfig:
        """Build the configuration from the top-level definition."""
        if top_def is None:
            raise MissingKeyError("missing section 'problem'")
        if not isinstance(top_def, Mapping):
            raise ConfigError("expected a mapping of sections", 1)
        for name in top_def:
            if name not in _SECTIONS:
                raise UnknownKeyError(
                    f"unknown section '{name}'", self._line(name))
        if 'problem' not in top_def:
            raise MissingKeyError("missing section 'problem'")
        problem = ProblemSettings(**self._section(top_def, 'problem'))
        solver = SolverSettings(**self._section(top_def, 'solver'))
        output = OutputSettings(**self._section(top_def, 'output'))
        return RunConfig(problem, solver, output)

    def _line(self, *path: str) -> Optional[int]:
        """Line of the key at the path, if known."""
        return self._lines.get(tuple(path))

    def _section(self, top_def: Definition, name: str) -> Dict[str, Any]:
        """Convert the keys of a section, filling in the defaults."""
        section_def = top_def.get(name)
        if section_def is None:
            section_def = {}
        if not isinstance(section_def, Mapping):
            raise ConfigError(
                f"section '{name}' must be a mapping", self._line(name))
        keys = _SECTIONS[name]
        for key in section_def:
            if key not in keys:
                raise UnknownKeyError(
                    f"unknown key '{key}' in section '{name}'",
                    self._line(name, str(key)))
        result: Dict[str, Any] = {}
        for key, (convert, default) in keys.items():
            if key not in section_def or section_def[key] is None:
                if default is _REQUIRED:
                    raise MissingKeyError(
                        f"missing key '{key}' in section '{name}'",
                        self._line(name))
                result[key] = default
                continue
            try:
                result[key] = convert(section_def[key])
            except ValueError as err:
                raise ConfigError(
                    f"key '{key}' in section '{name}': {err}",
                    self._line(name, key)) from err
        return result
