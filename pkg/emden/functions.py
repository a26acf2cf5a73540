"""Functions for running configurations and the command line."""

import argparse
import concurrent.futures as cf
import itertools
import os

from typing import (
    Any,
    Dict,
    List,
    Optional,
    Sequence,
    Tuple,
)

from .barrier import (
    IntegrabilityVerdict,
    check_integrability,
    compute_barrier,
    verify_supersolution,
)

from .debug import Debug

from .define import (
    Problem,
    RunConfig,
    SolverSettings,
    ValidationReport,
    load_config,
    majorant,
    save_config,
    validate_problem,
)

from .discretize import (
    EigenPair,
    RadialGrid,
    first_eigenpair,
)

from .draw import (
    output_path,
    write_barrier_csv,
    write_eigen_csv,
    write_json,
    write_solution_csv,
    write_svg,
)

from .errors import (
    DivergentPotentialError,
    EmdenError,
    InvalidProblemError,
)

from .solve import (
    EntireSolution,
    ExhaustionConfig,
    ProbeReport,
    Setup,
    solve_entire,
    uniqueness_probe,
    verify_manufactured,
)

from .solve.exhaust import verdict_dict

from .solve.manufactured import VERIFY_RADIUS

from .util import (
    log_error,
    log_info,
)

######################################################################

# Exit codes.
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2

def exhaustion_config(solver: SolverSettings) -> ExhaustionConfig:
    """Exhaustion settings out of the solver section of a configuration."""
    return ExhaustionConfig(
        solver.schedule(),
        h=solver.h,
        cauchy_tol=solver.cauchy_tol,
        tail_tol=solver.tail_tol,
        newton_tol=solver.newton_tol,
        max_iter=solver.max_iter,
        quad_tol=solver.quad_tol,
        eigen_tol=solver.eigen_tol,
        slack_factor=solver.slack_factor,
        gradient_eps=solver.gradient_eps,
    )

def make_problem(config: RunConfig) -> Problem:
    """Compile and validate the problem of a configuration."""
    problem = config.problem.make_problem()
    checked = validate_problem(problem)
    if isinstance(checked, ValidationReport):
        raise InvalidProblemError(checked)
    return problem

######################################################################

def run_check(config: RunConfig) -> IntegrabilityVerdict:
    """Classify the decay of the majorant of the configured problem."""
    problem = make_problem(config)
    verdict = check_integrability(majorant(problem), config.solver.quad_tol)
    output = config.output
    if output.wants('json'):
        path = output_path(output.directory, "check.json")
        write_json(path, verdict_dict(verdict))
    return verdict

def run_barrier(config: RunConfig, radius: Optional[float] = None) -> Dict[str, Any]:
    """Compute the barrier on a ball and its supersolution margins.

    The ball radius defaults to the first radius of the schedule.

    """
    problem = make_problem(config)
    solver = config.solver
    setup = Setup(problem, exhaustion_config(solver))
    if radius is None:
        radius = solver.schedule()[0]
    grid = RadialGrid.with_spacing(radius, solver.h)
    data = compute_barrier(
        setup.phi, problem.dimension, problem.gamma, grid,
        solver.quad_tol, setup.constants)
    report = verify_supersolution(data, setup.phi, grid, solver.slack_factor)
    output = config.output
    if output.wants('csv'):
        path = output_path(output.directory, "barrier.csv")
        write_barrier_csv(path, grid.nodes, data.w.values, data.v.values,
                          report.margins)
    summary = {
        'radius': radius,
        'K': data.K,
        'K_nested': data.K_nested,
        'c': data.c,
        'v_at_radius': float(data.v.values[-1]),
        'supersolution': report.passed,
        'worst_node': report.worst_node,
        'worst_excess': report.worst_excess,
    }
    if output.wants('json'):
        write_json(output_path(output.directory, "barrier.json"), summary)
    return summary

def run_eigen(config: RunConfig, radius: Optional[float] = None) -> EigenPair:
    """First Dirichlet eigenpair on a ball of the configured dimension."""
    solver = config.solver
    if radius is None:
        radius = solver.eigen_radius or solver.R0
    grid = RadialGrid.with_spacing(radius, solver.h)
    eig = first_eigenpair(grid, config.problem.N, solver.eigen_tol)
    output = config.output
    if output.wants('csv'):
        path = output_path(output.directory, "eigen.csv")
        write_eigen_csv(path, grid.nodes, eig.phi1.values)
    if output.wants('json'):
        path = output_path(output.directory, "eigen.json")
        write_json(path, {
            'radius': radius,
            'lambda1': eig.lambda1,
            'iterations': eig.iterations,
        })
    return eig

def run_solve(config: RunConfig) -> EntireSolution:
    """Run the exhaustion and write the requested outputs."""
    problem = make_problem(config)
    solution = solve_entire(problem, exhaustion_config(config.solver))
    write_solution(solution, config)
    return solution

def write_solution(solution: EntireSolution, config: RunConfig) -> None:
    """Write profile, report and plot of a solution."""
    output = config.output
    directory = output.directory
    r = solution.profile.grid.nodes
    u = solution.profile.values
    v = solution.barrier.v.values
    if output.wants('csv'):
        write_solution_csv(output_path(directory, "solution.csv"), r, u, v)
    if output.wants('json'):
        report = solution.as_dict()
        report['config'] = config.as_mapping()
        write_json(output_path(directory, "report.json"), report)
    if output.wants('svg'):
        write_svg(output_path(directory, "solution.svg"), r, [
            ('u', u, (0.12, 0.37, 0.70)),
            ('v', v, (0.80, 0.25, 0.15)),
        ], title="entire solution and barrier")

def run_verify(config: RunConfig, radius: Optional[float] = None) -> Dict[str, Any]:
    """Manufactured-solution self test of the configured problem."""
    problem = make_problem(config)
    study = verify_manufactured(
        problem, exhaustion_config(config.solver),
        VERIFY_RADIUS if radius is None else radius)
    result = study.as_dict()
    output = config.output
    if output.wants('json'):
        write_json(output_path(output.directory, "verify.json"), result)
    return result

def run_probe(config: RunConfig) -> ProbeReport:
    """Uniqueness probe of the configured problem."""
    problem = make_problem(config)
    report = uniqueness_probe(problem, exhaustion_config(config.solver))
    output = config.output
    if output.wants('json'):
        write_json(output_path(output.directory, "probe.json"), report.as_dict())
    return report

######################################################################

def sweep_configs(
        config: RunConfig,
        gammas: Optional[Sequence[float]],
        exponents: Optional[Sequence[float]],
) -> List[RunConfig]:
    """One configuration per combination, each with its own directory."""
    gammas = gammas or [config.problem.gamma]
    exponents = exponents or [config.problem.a]
    base = config.output.directory
    result: List[RunConfig] = []
    for gamma, a in itertools.product(gammas, exponents):
        name = f"gamma={gamma:g}_a={a:g}"
        changed = config.with_problem(gamma=gamma, a=a)
        result.append(changed.with_directory(os.path.join(base, name)))
    return result

def _solve_job(config: RunConfig, debug: bool) -> Tuple[str, int]:
    """Worker of a sweep: solve one configuration, return its exit code."""
    with Debug.scoped(debug):
        try:
            solution = run_solve(config)
            save_config(config, "config.yaml", config.output.directory)
        except DivergentPotentialError as err:
            log_error(f"{config.output.directory}: {err}")
            return config.output.directory, EXIT_NEGATIVE
        except (EmdenError, OSError, ValueError) as err:
            log_error(f"{config.output.directory}: {err}")
            return config.output.directory, EXIT_ERROR
    code = EXIT_OK if solution.certified else EXIT_NEGATIVE
    return config.output.directory, code

def run_sweep(configs: Sequence[RunConfig], workers: Optional[int] = None) -> int:
    """Solve independent configurations in a process pool.

    The exit code is the worst one of the runs: errors over
    uncertified runs over certified ones.

    """
    codes: Dict[str, int] = {}
    debug = Debug.is_enabled()
    with cf.ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(_solve_job, config, debug) for config in configs]
        for future in cf.as_completed(futures):
            directory, code = future.result()
            codes[directory] = code
            print(f"{directory}: exit {code}")
    if EXIT_ERROR in codes.values():
        return EXIT_ERROR
    return max(codes.values(), default=EXIT_OK)

######################################################################

def _parser() -> argparse.ArgumentParser:
    """Build the command line parser."""
    desc = "Entire solutions of singular Emden-Fowler equations with a gradient term."
    parser = argparse.ArgumentParser(prog="emden", description=desc)
    parser.add_argument(
        "-d", "--debug",
        action='store_true',
        help="print progress and debug information while running",
        dest='debug',
    )
    parser.add_argument(
        "-o", "--out",
        metavar='DIR',
        help="write output files to this directory (overrides the configuration)",
        dest='out_dir',
    )
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True
    helps = {
        'check': "classify the decay of the majorant",
        'barrier': "compute K, c and the barrier with its supersolution margins",
        'eigen': "first Dirichlet eigenpair on a ball",
        'solve': "solve on an exhausting sequence of balls",
        'verify': "self test against the manufactured solution",
        'probe': "check that the final ball solve does not depend on the start",
    }
    for name, text in helps.items():
        sub = commands.add_parser(name, help=text, description=text)
        sub.add_argument(
            'config_file',
            metavar='CONFIG',
            help="path of the configuration file (YAML)",
        )
        if name in ('barrier', 'eigen', 'verify'):
            sub.add_argument(
                "--radius",
                type=float,
                help="radius of the ball",
            )
        if name == 'solve':
            sub.add_argument(
                "--sweep-gamma",
                type=float,
                nargs='+',
                metavar='GAMMA',
                help="solve once for each of these values of gamma",
            )
            sub.add_argument(
                "--sweep-a",
                type=float,
                nargs='+',
                metavar='A',
                help="solve once for each of these gradient exponents",
            )
            sub.add_argument(
                "--workers",
                type=int,
                help="number of worker processes of a sweep",
            )
    return parser

def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return the exit code."""
    args = _parser().parse_args(argv)
    Debug.set_debug(args.debug)
    try:
        config = load_config(args.config_file)
        if args.out_dir:
            config = config.with_directory(args.out_dir)
        return _dispatch(args, config)
    except DivergentPotentialError as err:
        print(f"divergent: {err}")
        return EXIT_NEGATIVE
    except EmdenError as err:
        log_error(str(err))
        return EXIT_ERROR
    except (OSError, ValueError) as err:
        log_error(str(err))
        return EXIT_ERROR

def _dispatch(args: argparse.Namespace, config: RunConfig) -> int:
    """Run one subcommand."""
    command = args.command
    if command == 'check':
        verdict = run_check(config)
        print(verdict.classification.value)
        print(f"estimate {verdict.value_estimate:.12g}")
        return EXIT_OK if verdict.is_convergent else EXIT_NEGATIVE
    if command == 'barrier':
        summary = run_barrier(config, args.radius)
        print(f"K {summary['K']:.12g}")
        print(f"c {summary['c']:.12g}")
        status = "holds" if summary['supersolution'] else "fails"
        print(f"supersolution {status}")
        return EXIT_OK if summary['supersolution'] else EXIT_NEGATIVE
    if command == 'eigen':
        eig = run_eigen(config, args.radius)
        print(f"lambda1 {eig.lambda1:.12g}")
        return EXIT_OK
    if command == 'solve':
        if args.sweep_gamma or args.sweep_a:
            configs = sweep_configs(config, args.sweep_gamma, args.sweep_a)
            return run_sweep(configs, args.workers)
        solution = run_solve(config)
        status = "certified" if solution.certified else "uncertified"
        print(f"{status} at R={solution.radii_used[-1]:g}")
        if Debug.is_enabled():
            log_info(f"Outputs in '{config.output.directory}'")
        return EXIT_OK if solution.certified else EXIT_NEGATIVE
    if command == 'verify':
        result = run_verify(config, args.radius)
        print(f"errors {result['errors']}")
        print(f"order {result['order']:.4g}")
        return EXIT_OK
    assert command == 'probe'
    report = run_probe(config)
    print(f"probe {report}")
    return EXIT_OK if report.passed else EXIT_NEGATIVE
