"""Batch reference generator for the binding equivalence tests.

Executes a manifest of CLI invocations (argv arrays) inside one process so
the test suite does not pay interpreter start-up once per reference, and
captures each invocation's stdout next to its outputs.
"""

import contextlib
import io
import json
import sys

from eulergrid.cli import main


def run(manifest_path: str) -> int:
    with open(manifest_path) as fh:
        entries = json.load(fh)
    for entry in entries:
        buffer = io.StringIO()
        with contextlib.redirect_stdout(buffer):
            code = main(entry["argv"])
        if code != 0:
            print(f"reference invocation failed ({code}): {entry}", file=sys.stderr)
            return code
        if entry.get("stdout"):
            with open(entry["stdout"], "w") as fh:
                fh.write(buffer.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(run(sys.argv[1]))
