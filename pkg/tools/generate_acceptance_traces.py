"""Pre-populate the acceptance-test trace cache.

The acceptance tests in tests/test_acceptance.py call run_matrix on the same
cache directory with the same configs; existing valid traces are skipped, so
running this script first makes the test session fast. Safe to re-run: it
resumes where it left off.
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from acceptance_matrix import CACHE_DIR, MATRICES  # noqa: E402

from aegis.harness import run_matrix  # noqa: E402


def main():
    for name, cfg in MATRICES.items():
        print(f"=== {name} ===", flush=True)
        manifest = run_matrix(cfg, CACHE_DIR)
        if manifest["failed"]:
            print(f"{name}: {len(manifest['failed'])} failure(s)", flush=True)


if __name__ == "__main__":
    main()
