"""Problem definitions: potentials, problem instances and configuration."""

from .config import (
    Builder,
    OutputSettings,
    ProblemSettings,
    RunConfig,
    SolverSettings,
)

from .expression import (
    Node,
    parse_expression,
    pretty_print,
)

from .load import (
    ConfigFile,
    SectionedConfigFile,
    dump_config,
    dump_sectioned,
    is_sectioned,
    load_config,
    parse_config,
    save_config,
)

from .potentials import (
    DipolePotential,
    ExpressionPotential,
    ManufacturedPotential,
    PotentialSpec,
    make_potential,
    parse_potential,
    sphere_cosines,
)

from .problem import (
    MajorantProfile,
    Problem,
    Provenance,
    ValidationReport,
    Violation,
    audit_grid,
    majorant,
    solve_potential,
    validate_problem,
)
