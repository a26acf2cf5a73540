"""Command line application entry point."""

import sys

from .functions import run_cli

def _main() -> None:
    """Entry point of program."""
    result = run_cli()
    sys.exit(result)

if __name__ == '__main__':
    _main()
