"""Named, parameterized models with their known block partitions.

Spin conventions: each qubit has the basis ``(|down>, |up>)`` (index 0 is
``|down>``, matching the listing order of the three-qubit computational
basis), the Pauli matrices are the standard ones in that index order, and
``sigma^- = |down><up| = [[0, 1], [0, 0]]``. For the dephasing chain the
single-qubit basis is ``(|e>, |g>)`` so that ``sigma^z |e> = +|e>``. Qubit 1
is always the leftmost Kronecker factor.
"""

from __future__ import annotations

import inspect
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Dict, Mapping, Optional, Tuple

import numpy as np

from .errors import InvalidModel
from .model import DensityMatrix, JumpChannel, LindbladModel
from .structure import BlockPartition

SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SM = np.array([[0, 1], [0, 0]], dtype=np.complex128)
I2 = np.eye(2, dtype=np.complex128)

PAULI = {"x": SX, "y": SY, "z": SZ, "-": SM}


def site_op(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """``op`` on qubit ``site`` (1-based) of an ``n_sites``-qubit register."""
    factors = [I2] * n_sites
    factors[site - 1] = op
    return reduce(np.kron, factors)


def pauli_string(spec: Mapping[int, str], n_sites: int) -> np.ndarray:
    """Product such as ``{1: "z", 3: "x"}`` -> ``sigma^z_1 sigma^x_3``."""
    factors = [PAULI[spec[k]] if k in spec else I2 for k in range(1, n_sites + 1)]
    return reduce(np.kron, factors)


# --- Example 0: dephasing oscillator ----------------------------------------

def dephasing_oscillator(nu: float = 2.0, gamma: float = 1.0, d: int = 10) -> LindbladModel:
    """``H = nu N``, ``L = (N - 1)^2`` on the Fock space truncated to ``d`` levels.

    Both operators are diagonal, so truncation never couples ``|0>`` and
    ``|2>`` to the discarded levels.
    """
    d = int(d)
    if d < 3:
        raise InvalidModel("dephasing_oscillator needs d >= 3 so that |2> exists")
    n = np.arange(d, dtype=float)
    return LindbladModel(np.diag(nu * n), [JumpChannel(np.diag((n - 1.0) ** 2), gamma)])


def laguerre_values(x: float, d: int) -> np.ndarray:
    """``G_0(x) .. G_{d-1}(x)`` from the three-term recurrence."""
    d = int(d)
    if d < 1:
        raise InvalidModel("laguerre_dephasing needs d >= 1")
    g = np.empty(d)
    g[0] = 1.0
    if d > 1:
        g[1] = 1.0 - x
    for k in range(1, d - 1):
        g[k + 1] = ((2 * k + 1 - x) * g[k] - k * g[k - 1]) / (k + 1)
    return g


def laguerre_dephasing(x: float, d: int) -> np.ndarray:
    """Diagonal jump operator ``sum_N G_N(x) |N><N|``."""
    return np.diag(laguerre_values(x, d)).astype(np.complex128)


def laguerre_oscillator(x: float = 4.0, nu: float = 2.0, gamma: float = 1.0, d: int = 10) -> LindbladModel:
    """``H = nu N`` with the Laguerre jump. At ``x = 4``, ``G_0 = G_2 = 1``."""
    n = np.arange(int(d), dtype=float)
    return LindbladModel(np.diag(nu * n), [JumpChannel(laguerre_dephasing(x, d), gamma)])


# --- Example 1: dephasing chain ---------------------------------------------

def dephasing_chain(
    chi: float = 0.3, j12: float = 0.9, j23: float = 1.0, g1: float = 1.0, g2: float = 1.0
) -> LindbladModel:
    h = (
        chi * pauli_string({1: "z", 2: "z", 3: "z"}, 3)
        + j12 * pauli_string({1: "z", 2: "z"}, 3)
        + j23 * pauli_string({2: "z", 3: "z"}, 3)
    )
    return LindbladModel(
        h, [JumpChannel(site_op(SZ, 1, 3), g1), JumpChannel(site_op(SZ, 3, 3), g2)]
    )


# --- Example 2 and the periodic XYZ chain ------------------------------------

def coupled_basis() -> np.ndarray:
    """The coupled three-qubit basis as columns: two doublets, then the quartet."""
    e = np.eye(8, dtype=np.complex128)
    s2, s3, s6 = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(6.0)
    cols = [
        (e[1] - e[4]) / s2,
        (e[3] - e[6]) / s2,
        -(e[1] + e[4] - 2 * e[2]) / s6,
        (e[3] + e[6] - 2 * e[5]) / s6,
        e[0],
        (e[1] + e[2] + e[4]) / s3,
        (e[3] + e[5] + e[6]) / s3,
        e[7],
    ]
    return np.column_stack(cols)


def coupled_partition() -> BlockPartition:
    return BlockPartition(coupled_basis(), (2, 2, 4))


def collective_lowering() -> np.ndarray:
    return sum(site_op(SM, k, 3) for k in (1, 2, 3))


def _field(hx, hy, hz) -> np.ndarray:
    return sum(hx * site_op(SX, k, 3) + hy * site_op(SY, k, 3) + hz * site_op(SZ, k, 3) for k in (1, 2, 3))


def _bond(i: int, j: int, jx, jy, jz) -> np.ndarray:
    return (
        jx * pauli_string({i: "x", j: "x"}, 3)
        + jy * pauli_string({i: "y", j: "y"}, 3)
        + jz * pauli_string({i: "z", j: "z"}, 3)
    )


def xxx_hamiltonian(j: float, hx: float, hy: float, hz: float) -> np.ndarray:
    """Open-boundary Heisenberg XXX chain of three qubits in a uniform field."""
    return _bond(1, 2, j, j, j) + _bond(2, 3, j, j, j) + _field(hx, hy, hz)


def xxx_collective(
    j: float = 5.0, hx: float = 5.0, hy: float = 5.0, hz: float = 5.0, gamma: float = 1.0
) -> Tuple[LindbladModel, BlockPartition]:
    model = LindbladModel(xxx_hamiltonian(j, hx, hy, hz), [JumpChannel(collective_lowering(), gamma)])
    return model, coupled_partition()


def xyz_hamiltonian(jx, jy, jz, hx, hy, hz, omega) -> np.ndarray:
    """Periodic XYZ ring of three qubits plus the ``-omega/4`` boundary exchange on bond (1, 3)."""
    ring = _bond(1, 2, jx, jy, jz) + _bond(2, 3, jx, jy, jz) + _bond(3, 1, jx, jy, jz)
    return ring + _field(hx, hy, hz) - 0.25 * omega * _bond(1, 3, 1.0, 1.0, 1.0)


def xyz_periodic(
    jx: float = 5.0,
    jy: float = 5.0,
    jz: float = 5.0,
    hx: float = 5.0,
    hy: float = 5.0,
    hz: float = 5.0,
    omega: float = 20.0,
    gamma: float = 1.0,
) -> Tuple[LindbladModel, BlockPartition]:
    h = xyz_hamiltonian(jx, jy, jz, hx, hy, hz, omega)
    return LindbladModel(h, [JumpChannel(collective_lowering(), gamma)]), coupled_partition()


# --- Example 3: tunable two-qubit model -------------------------------------

def two_qubit_tunable(e: float = 1.0, g1: float = 1.0, g2: float = 8.0) -> LindbladModel:
    def op(spec):
        return pauli_string(spec, 2)

    h = e * (3 * op({1: "z"}) + 6 * op({2: "x"}) + op({2: "y"}) + op({1: "z", 2: "y"}))
    eye = np.eye(4)
    l1 = 2 * eye + 1j * op({2: "x"}) - op({2: "z"})
    l2 = 0.5 * (3 * eye + 1j * op({2: "x"}) + op({2: "y"}) - op({2: "z"}))
    return LindbladModel(h, [JumpChannel(l1, g1), JumpChannel(l2, g2)])


# --- registry ----------------------------------------------------------------

@dataclass(frozen=True)
class ZooEntry:
    name: str
    builder: Callable
    description: str
    known_partition: Optional[Callable[[], BlockPartition]] = None
    integer_params: Tuple[str, ...] = ()

    @property
    def params(self) -> Dict[str, float]:
        sig = inspect.signature(self.builder)
        return {k: p.default for k, p in sig.parameters.items()}

    def build(self, params: Optional[Mapping[str, float]] = None):
        """``(model, partition or None)`` for the given parameter overrides."""
        merged = dict(self.params)
        for k, v in (params or {}).items():
            if k not in merged:
                raise InvalidModel(f"{self.name} has no parameter {k!r}; expected one of {sorted(merged)}")
            merged[k] = v
        for k in self.integer_params:
            val = float(merged[k])
            if val != int(val):
                raise InvalidModel(f"{self.name} parameter {k} must be an integer, got {merged[k]!r}")
            merged[k] = int(val)
        out = self.builder(**{k: (v if k in self.integer_params else float(v)) for k, v in merged.items()})
        if isinstance(out, tuple):
            return out
        part = self.known_partition() if self.known_partition else None
        return out, part


def _two_qubit_partition() -> BlockPartition:
    return BlockPartition.identity(4, 2)


REGISTRY: Dict[str, ZooEntry] = {
    e.name: e
    for e in (
        ZooEntry("dephasing_oscillator", dephasing_oscillator,
                 "harmonic oscillator, H = nu N, L = (N - 1)^2", integer_params=("d",)),
        ZooEntry("laguerre_dephasing", laguerre_oscillator,
                 "harmonic oscillator with a Laguerre-polynomial dephasing jump", integer_params=("d",)),
        ZooEntry("dephasing_chain", dephasing_chain,
                 "three-qubit z-chain with boundary dephasing"),
        ZooEntry("xxx_collective", xxx_collective,
                 "open XXX chain with collective lowering"),
        ZooEntry("two_qubit_tunable", two_qubit_tunable,
                 "two qubits with rate-tunable oscillatory modes", known_partition=_two_qubit_partition),
        ZooEntry("xyz_periodic", xyz_periodic,
                 "periodic XYZ ring with a boundary term and collective lowering"),
    )
}


def build(name: str, params: Optional[Mapping[str, float]] = None):
    try:
        entry = REGISTRY[name]
    except KeyError:
        raise InvalidModel(f"unknown builtin model {name!r}; choose from {sorted(REGISTRY)}") from None
    return entry.build(params)


# --- named initial states ----------------------------------------------------

def _fock(d: int, *levels: int) -> np.ndarray:
    psi = np.zeros(d, dtype=np.complex128)
    psi[list(levels)] = 1.0
    return psi


def example0_osc(d: int = 10) -> DensityMatrix:
    """``(|0> + |2>) / sqrt(2)``."""
    return DensityMatrix.pure(_fock(d, 0, 2))


def example0_damp(d: int = 10) -> DensityMatrix:
    """``(|0> + |1> + |2> + |3>) / 2``."""
    return DensityMatrix.pure(_fock(d, 0, 1, 2, 3))


def example2_osc(model: LindbladModel, partition: BlockPartition) -> DensityMatrix:
    """``(1/2) [[R*, R*, 0], [R*, R*, 0], [0, 0, 0]]`` in the partition basis."""
    from .structure import solve_rstar, verify_block_form

    rstar = solve_rstar(verify_block_form(model, partition), model.rates).r_star
    n, d = partition.n, model.dim
    x = np.zeros((d, d), dtype=np.complex128)
    for rows in (slice(0, n), slice(n, 2 * n)):
        for cols in (slice(0, n), slice(n, 2 * n)):
            x[rows, cols] = 0.5 * rstar
    return DensityMatrix(partition.from_partition_basis(x))


def example2_damp() -> DensityMatrix:
    """``|down down up><down down up|``."""
    return DensityMatrix.pure(np.eye(8)[1])


INITIAL_STATES = ("example0_osc", "example0_damp", "example2_osc", "example2_damp")


def initial_state(label: str, model: LindbladModel, partition: Optional[BlockPartition] = None) -> DensityMatrix:
    """Resolve a named initial state against the model it will be evolved under."""
    if label in ("example0_osc", "example0_damp"):
        if model.dim < 4:
            raise InvalidModel(f"{label} needs at least 4 levels, model has {model.dim}")
        return example0_osc(model.dim) if label == "example0_osc" else example0_damp(model.dim)
    if label in ("example2_osc", "example2_damp"):
        if model.dim != 8:
            raise InvalidModel(f"{label} is a three-qubit state, model has dimension {model.dim}")
        if label == "example2_damp":
            return example2_damp()
        return example2_osc(model, partition if partition is not None else coupled_partition())
    raise InvalidModel(f"unknown initial state {label!r}; choose from {list(INITIAL_STATES)}")
