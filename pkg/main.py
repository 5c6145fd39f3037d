#!/usr/bin/env python3
"""
fb – Main Entry Point
Configures logging, then hands argv to the command-line front end.
"""
import sys, os, logging

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from core.config import APP_DIR, LOG_FILE, APP_NAME


def _setup_logging():
    fmt = "%(asctime)s  [%(levelname)-8s] %(name)s: %(message)s"
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    file_error = None
    try:
        os.makedirs(APP_DIR, exist_ok=True)
        handlers.append(logging.FileHandler(LOG_FILE, encoding="utf-8"))
    except OSError as exc:
        file_error = exc
    logging.basicConfig(level=logging.INFO, format=fmt, handlers=handlers, force=True)
    if file_error is not None:
        logging.getLogger(APP_NAME).warning("log file disabled: %s", file_error)


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    from cli.app import run

    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
