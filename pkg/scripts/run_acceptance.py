"""Print one PASS/FAIL line per acceptance criterion (all, or those named on the command line)."""

import runpy
import sys
from pathlib import Path

if __name__ == "__main__":
    tests = Path(__file__).resolve().parent.parent / "tests"
    sys.path.insert(0, str(tests))
    sys.argv = [str(tests / "test_acceptance.py"), *sys.argv[1:]]
    runpy.run_path(sys.argv[0], run_name="__main__")
