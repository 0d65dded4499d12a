#!/usr/bin/env python3
"""
pipemeta - Main Entry Point

Preprocessing pipeline benchmark and metalearning workbench. See
``src/pipemeta/cli.py`` for the subcommands.
"""

import logging
import sys
import warnings

# sklearn convergence chatter is surfaced through pipeline records instead
warnings.filterwarnings("ignore", module="sklearn")

from src.pipemeta.cli import main


def main_sync():
    """Synchronous entry point for the script."""
    basic_logger = logging.getLogger("pipemeta.startup")
    try:
        logging.basicConfig(level=logging.WARNING)
        sys.exit(main(sys.argv[1:]))
    except KeyboardInterrupt:
        basic_logger.info("Interrupted by user; completed records are kept for resume")
        sys.exit(130)
    except Exception as e:
        basic_logger.error(f"Fatal error: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main_sync()
