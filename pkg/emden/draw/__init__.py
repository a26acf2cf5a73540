"""Write profiles, reports and plots."""

from .export import (
    output_path,
    write_barrier_csv,
    write_columns,
    write_eigen_csv,
    write_json,
    write_solution_csv,
)

from .plot import write_svg
