"""Lindblad models, dissipators, the master-equation right-hand side and fidelity."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .errors import DimensionMismatch, InvalidModel, InvalidState
from .linalg import as_cmatrix, dagger, eig_hermitian, psd_eigh

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class JumpChannel:
    """A jump operator together with its damping rate (inverse time)."""

    operator: np.ndarray
    rate: float = 1.0

    def __post_init__(self):
        op = as_cmatrix(self.operator)
        if op.shape[0] != op.shape[1]:
            raise DimensionMismatch(f"jump operator must be square, got {op.shape}")
        rate = float(self.rate)
        if not np.isfinite(rate) or rate < 0:
            raise InvalidModel(f"rate must be a finite non-negative number, got {self.rate!r}")
        op.setflags(write=False)
        object.__setattr__(self, "operator", op)
        object.__setattr__(self, "rate", rate)


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian (hbar = 1) plus a list of jump channels.

    The Hamiltonian must be Hermitian to within ``1e-10 * ||H||``; the
    stored copy is exactly Hermitian.
    """

    hamiltonian: np.ndarray
    channels: Tuple[JumpChannel, ...] = field(default_factory=tuple)

    def __post_init__(self):
        h = as_cmatrix(self.hamiltonian)
        if h.shape[0] != h.shape[1]:
            raise InvalidModel(f"Hamiltonian must be square, got {h.shape}")
        scale = max(float(np.abs(h).max(initial=0.0)), 1e-300)
        asym = float(np.abs(h - dagger(h)).max(initial=0.0))
        if asym > HERMITIAN_TOL * scale:
            raise InvalidModel(f"Hamiltonian is not Hermitian (max |H - H^dag| = {asym:.3e})")
        h = 0.5 * (h + dagger(h))
        h.setflags(write=False)
        channels = tuple(
            c if isinstance(c, JumpChannel) else JumpChannel(*c) for c in self.channels
        )
        for i, c in enumerate(channels):
            if c.operator.shape != h.shape:
                raise InvalidModel(
                    f"channel {i} operator has shape {c.operator.shape}, expected {h.shape}"
                )
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "channels", channels)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    @property
    def rates(self) -> List[float]:
        return [c.rate for c in self.channels]

    @property
    def jump_operators(self) -> List[np.ndarray]:
        return [c.operator for c in self.channels]

    def effective_hamiltonian(self) -> np.ndarray:
        """``H - (i/2) sum_i rate_i L_i^dag L_i``."""
        heff = np.array(self.hamiltonian, dtype=np.complex128)
        for c in self.channels:
            heff -= 0.5j * c.rate * (dagger(c.operator) @ c.operator)
        return heff

    def transformed(self, unitary) -> "LindbladModel":
        """The same model written in the basis given by the columns of ``unitary``."""
        u = as_cmatrix(unitary)
        ud = dagger(u)
        return LindbladModel(
            ud @ self.hamiltonian @ u,
            [JumpChannel(ud @ c.operator @ u, c.rate) for c in self.channels],
        )


class DensityMatrix:
    """A validated density matrix.

    Construction symmetrizes the input. Eigenvalues in ``[-tol, 0)`` are
    clamped to zero and a trace within ``tol`` of one is renormalized;
    anything worse raises :class:`InvalidState`.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix, tol: float = 1e-8):
        m = as_cmatrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise InvalidState(f"density matrix must be square, got {m.shape}")
        if float(np.abs(m - dagger(m)).max(initial=0.0)) > tol:
            raise InvalidState("density matrix is not Hermitian")
        m = 0.5 * (m + dagger(m))
        tr = np.trace(m).real
        if abs(tr - 1.0) > tol:
            raise InvalidState(f"density matrix has trace {tr:.12g}")
        w, u = eig_hermitian(m, tol=1.0)
        if w[0] < -tol:
            raise InvalidState(f"density matrix has eigenvalue {w[0]:.3e}")
        if w[0] < 0:
            w = np.clip(w, 0.0, None)
            m = (u * w) @ dagger(u)
            m = 0.5 * (m + dagger(m))
        m = m / np.trace(m).real
        m.setflags(write=False)
        self.matrix = m

    @classmethod
    def pure(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=np.complex128).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, np.conj(psi)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return as_cmatrix(rho)


def dissipator(channel, rho) -> np.ndarray:
    """``L rho L^dag - (1/2) {L^dag L, rho}`` for the channel's operator.

    The rate is *not* applied.
    """
    op = channel.operator if isinstance(channel, JumpChannel) else as_cmatrix(channel)
    r = _as_matrix(rho)
    if op.shape != r.shape:
        raise DimensionMismatch(f"operator {op.shape} and state {r.shape} differ")
    ldl = dagger(op) @ op
    return op @ r @ dagger(op) - 0.5 * (ldl @ r + r @ ldl)


def master_rhs(model: LindbladModel, rho) -> np.ndarray:
    """``-i[H, rho] + sum_i rate_i D_i[rho]``."""
    r = _as_matrix(rho)
    if r.shape != model.hamiltonian.shape:
        raise DimensionMismatch(f"state {r.shape} does not match model dimension {model.dim}")
    h = model.hamiltonian
    out = -1j * (h @ r - r @ h)
    for c in model.channels:
        if c.rate:
            out = out + c.rate * dissipator(c, r)
    return out


def fidelity(rho1, rho2, tol: float = 1e-10) -> float:
    """Uhlmann-Jozsa fidelity ``(Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2``.

    Evaluated as the squared trace norm of ``S1^dag S2`` where
    ``S S^dag = rho`` is built from each state's eigenvectors on its
    numerical support. No square root of a round-off eigenvalue is ever
    taken, so the result is symmetric and accurate for rank-deficient
    (e.g. pure) states.
    """
    a = _as_matrix(rho1)
    b = _as_matrix(rho2)
    if a.shape != b.shape:
        raise DimensionMismatch(f"states have shapes {a.shape} and {b.shape}")
    factors = []
    for m in (a, b):
        w, u = psd_eigh(m, tol)
        keep = w > 0
        factors.append(u[:, keep] * np.sqrt(w[keep]))
    if factors[0].shape[1] == 0 or factors[1].shape[1] == 0:
        return 0.0
    sv = np.linalg.svd(dagger(factors[0]) @ factors[1], compute_uv=False)
    f = float(np.sum(sv) ** 2)
    return min(max(f, 0.0), 1.0)


# --- model files -----------------------------------------------------------

def matrix_to_json(m) -> list:
    """Nested row-major ``[re, im]`` pairs."""
    m = np.asarray(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ValueError("matrix must be a nested list of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def model_to_dict(model: LindbladModel) -> dict:
    return {
        "hamiltonian": matrix_to_json(model.hamiltonian),
        "channels": [
            {"operator": matrix_to_json(c.operator), "rate": c.rate} for c in model.channels
        ],
    }


def model_from_dict(data: dict) -> LindbladModel:
    """Build a model from the JSON model-file layout.

    Accepts either ``{"builtin": name, "params": {...}}`` or explicit
    ``{"hamiltonian": ..., "channels": [{"operator": ..., "rate": r}, ...]}``.
    """
    has_builtin = "builtin" in data
    has_explicit = "hamiltonian" in data
    if has_builtin == has_explicit:
        raise ValueError("model file needs exactly one of 'builtin' or 'hamiltonian'")
    if has_builtin:
        from .zoo import build

        return build(data["builtin"], data.get("params", {}))[0]
    channels = [
        JumpChannel(matrix_from_json(c["operator"]), float(c.get("rate", 1.0)))
        for c in data.get("channels", [])
    ]
    return LindbladModel(matrix_from_json(data["hamiltonian"]), channels)


def load_model(path) -> LindbladModel:
    with open(path) as fh:
        return model_from_dict(json.load(fh))


def save_model(model: LindbladModel, path) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh)
