"""Run every documented CLI case and store its output under tests/golden/."""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def run_case(case: dict) -> tuple[str, int]:
    cmd = [sys.executable, "-m", "perfcx", case["command"], "--input", case["bundle"], *case["flags"]]
    proc = subprocess.run(cmd, cwd=ROOT, capture_output=True, text=True)
    return proc.stdout, proc.returncode


def main():
    cases = json.loads((ROOT / "bundles" / "cases.json").read_text())
    out_dir = ROOT / "tests" / "golden"
    out_dir.mkdir(exist_ok=True)
    for name, case in cases.items():
        out, code = run_case(case)
        if code != case["exit"]:
            raise SystemExit(f"{name}: exit {code}, expected {case['exit']}\n{out}")
        (out_dir / f"{name}.json").write_text(out)
        print(f"{name}: exit {code}")


if __name__ == "__main__":
    main()
