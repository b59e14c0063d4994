"""Regenerate the golden CLI transcripts in tests/golden/.

Each case in tests/golden/cases.json is run from fixtures/ in machine
mode; the transcript records the output and the exit status.  Review
the diff before committing.
"""

import io
import json
import os
from pathlib import Path

from diop.cli import run

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"


def transcript(argv) -> str:
    buf = io.StringIO()
    cwd = os.getcwd()
    os.chdir(ROOT / "fixtures")
    try:
        status = run(["--machine"] + list(argv), out=buf)
    finally:
        os.chdir(cwd)
    return buf.getvalue() + f"exit={status}\n"


def main():
    cases = json.loads((GOLDEN / "cases.json").read_text())
    for name, argv in cases.items():
        text = transcript(argv)
        (GOLDEN / f"{name}.out").write_text(text)
        print(f"{name}: {text.splitlines()[-1]}")


if __name__ == "__main__":
    main()
