import numpy as np
import pytest

from lindspect import kernels

BACKENDS = [kernels.python_backend] + ([kernels.compiled_backend] if kernels.compiled_backend else [])
BACKEND_IDS = ["python"] + (["compiled"] if kernels.compiled_backend else [])


@pytest.fixture(params=BACKENDS, ids=BACKEND_IDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_matrix(rng, rows, cols=None):
    cols = rows if cols is None else cols
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_hermitian(rng, d):
    a = random_matrix(rng, d)
    return 0.5 * (a + a.conj().T)


def random_density(rng, d, rank=None):
    a = random_matrix(rng, d, rank or d)
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


# --- acceptance summary --------------------------------------------------------

_CRITERIA = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rpartition("::")[2]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _CRITERIA[name] = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda n: int(n.split("_")[2])):
        _, _, num, *label = name.split("_")
        terminalreporter.write_line(f"criterion {num} ({' '.join(label)}): {_CRITERIA[name]}")
