"""Shared generators for random models and families, plus acceptance reporting.

All randomness is seeded per test via fresh numpy Generators so runs are
deterministic.  The terminal-summary hook prints one PASS/FAIL line per
acceptance criterion after the run.
"""

import numpy as np
import pytest

from slhkit import BlockPartition, ScaledSLHFamily, SLHModel
from slhkit.operators import dagger


def random_complex(rng, rows, cols, scale=1.0):
    return scale * (rng.standard_normal((rows, cols))
                    + 1j * rng.standard_normal((rows, cols)))


def random_hermitian(rng, dim, scale=1.0):
    G = random_complex(rng, dim, dim, scale)
    return 0.5 * (G + dagger(G))


def random_unitary(rng, dim):
    Q, R = np.linalg.qr(random_complex(rng, dim, dim))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_model(rng, n_inputs, dim, coupling_scale=1.0):
    """Random valid SLH model: Haar-ish unitary S, Gaussian L, Hermitian H."""
    return SLHModel(
        S=random_unitary(rng, n_inputs * dim),
        L=random_complex(rng, n_inputs * dim, dim, coupling_scale),
        H=random_hermitian(rng, dim),
    )


def random_family(rng, n_inputs, n_slow, n_fast, contiguous=True):
    """Random scaled family satisfying the structural assumptions.

    A_ff is pushed away from singularity with a Hamiltonian offset so that
    check_assumptions passes for every draw.
    """
    m = n_slow + n_fast
    nm = n_inputs * m
    if contiguous:
        slow = tuple(range(n_slow))
    else:
        slow = tuple(sorted(rng.choice(m, size=n_slow, replace=False).tolist()))
    part = BlockPartition(dim=m, slow_indices=slow)
    fast = np.array(part.fast_indices, dtype=int)
    slow_arr = np.array(part.slow_indices, dtype=int)

    L0 = random_complex(rng, nm, m)
    L1 = random_complex(rng, nm, m)
    L1[:, slow_arr] = 0.0
    H0 = random_hermitian(rng, m)
    H1 = random_hermitian(rng, m)
    H1[np.ix_(slow_arr, slow_arr)] = 0.0
    H2 = np.zeros((m, m), dtype=complex)
    H2[np.ix_(fast, fast)] = random_hermitian(rng, n_fast) + 2.0 * np.eye(n_fast)
    return ScaledSLHFamily(
        S=random_unitary(rng, nm), L0=L0, L1=L1, H0=H0, H1=H1, H2=H2,
        partition=part,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


# ---------------------------------------------------------------------------
# One PASS/FAIL line per acceptance criterion at the end of the run.
# ---------------------------------------------------------------------------


def _criterion_lines(terminalreporter):
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid or report.when != "call":
                continue
            name = nodeid.split("::")[-1]
            if not name.startswith("test_c"):
                continue
            label = name[len("test_"):]
            status = "PASS" if outcome == "passed" else "FAIL"
            lines[label] = status
    return lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = _criterion_lines(terminalreporter)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(lines):
        terminalreporter.write_line(f"{lines[label]}  {label}")
