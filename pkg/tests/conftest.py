from pathlib import Path

import numpy as np
import pytest

from lassopath import io
from lassopath.datagen import generate
from lassopath.homotopy import compute_path

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def seed42():
    """The canonical n=3, p=5 instance (generate --synthetic 3,5,2,0.1 --seed 42)."""
    X = io.read_matrix(GOLDEN / "gen" / "design.csv")
    y = io.read_vector(GOLDEN / "gen" / "response.csv")
    return X, y


@pytest.fixture(scope="session")
def seed42_path(seed42):
    return compute_path(*seed42)


@pytest.fixture
def identity():
    return np.eye(2), np.array([3.0, 1.0])


@pytest.fixture(scope="session")
def identity_path():
    return compute_path(np.eye(2), np.array([3.0, 1.0]), lambda_min=0.01)


def gaussian_batch(count, n, p, s=3, sigma=0.1, offset=0):
    return [generate(n, p, s, sigma, offset + k) for k in range(count)]


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" not in rep.nodeid or rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], outcome.upper()[:4], props.get("detail", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for crit, outcome, detail in sorted(lines):
            terminalreporter.write_line(f"[{outcome}] {crit}: {detail}")


GOLDEN_STEPS = (
    ["generate", "--synthetic", "3,5,2,0.1", "--seed", "42", "--out", "gen"],
    ["path", "--design", "gen/design.csv", "--response", "gen/response.csv", "--out", "path"],
    ["audit", "--design", "gen/design.csv", "--response", "gen/response.csv", "--out", "audit",
     "--svg"],
    ["check-gpc", "--design", "gen/design.csv", "--response", "gen/response.csv", "--out", "gpc",
     "--exhaustive"],
)


def run_golden_pipeline(root, monkeypatch):
    """Reproduce tests/golden under root; returns the exit codes."""
    from lassopath.cli import main

    root.mkdir(parents=True, exist_ok=True)
    with monkeypatch.context() as m:
        m.chdir(root)
        return [main(argv) for argv in GOLDEN_STEPS]


def tree_bytes(root):
    return {str(f.relative_to(root)): f.read_bytes() for f in sorted(root.rglob("*")) if f.is_file()}
