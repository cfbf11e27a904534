#!/usr/bin/env python3
"""Recompute every reference worked example and print the table.

Equivalent to ``keysec --format text report``; kept as a script so the
numbers can be regenerated without the console entry point installed.
"""

import sys

from keysec.cli import main

if __name__ == "__main__":
    sys.exit(main(["--format", "text", "report"]))
