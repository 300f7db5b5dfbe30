#!/usr/bin/env python3
"""Reproduce the bundled demonstration instance end to end.

Writes the before/after range figures plus report.json into out/example/
and exits nonzero if any reference-value check fails.
"""

import sys

from nrsteer.cli import main

if __name__ == "__main__":
    sys.exit(main(["example", "--out-dir", "out/example"]))
