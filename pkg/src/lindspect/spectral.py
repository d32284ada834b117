"""Liouvillian superoperator, its classified eigenspectrum, and time evolution.

Vectorization is column stacking throughout, so the superoperator of the
master equation is

    S = -i (I kron H - H^T kron I)
        + sum_i rate_i [conj(L_i) kron L_i - 1/2 I kron L_i^dag L_i - 1/2 (L_i^dag L_i)^T kron I].
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import kernels
from .errors import Defective, DimensionMismatch, StepTooLarge
from .linalg import cluster_values, dagger, eig_general, norm2, unvec, vec
from .model import DensityMatrix, LindbladModel, _as_matrix

CLUSTER_REL_TOL = 1e-7
CLASS_REL_TOL = 1e-8
BIORTH_FAIL_TOL = 1e-6
DRIFT_TOL = 1e-6


class ModeClass(enum.Enum):
    PERSISTENT_OSCILLATORY = "PersistentOscillatory"
    STEADY = "Steady"
    UNDERDAMPED = "Underdamped"
    OVERDAMPED = "Overdamped"

    def __str__(self) -> str:
        return self.value


def build_superoperator(model: LindbladModel) -> np.ndarray:
    """The ``d^2 x d^2`` matrix of the Liouvillian acting on ``vec(rho)``."""
    d = model.dim
    eye = np.eye(d, dtype=np.complex128)
    h = model.hamiltonian
    s = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for c in model.channels:
        if not c.rate:
            continue
        op = c.operator
        ldl = dagger(op) @ op
        s += c.rate * (np.kron(np.conj(op), op) - 0.5 * np.kron(eye, ldl) - 0.5 * np.kron(ldl.T, eye))
    return s


def classify(value: complex, eps_re: float, eps_im: float) -> ModeClass:
    """Place one eigenvalue in its quadrant of the decay-rate/frequency table."""
    if eps_re <= 0 or eps_im <= 0:
        raise ValueError("classification tolerances must be positive")
    re, im = value.real, value.imag
    if abs(re) <= eps_re:
        return ModeClass.PERSISTENT_OSCILLATORY if abs(im) > eps_im else ModeClass.STEADY
    if re < -eps_re and abs(im) > eps_im:
        return ModeClass.UNDERDAMPED
    return ModeClass.OVERDAMPED


@dataclass(frozen=True)
class SpectralMode:
    value: complex
    right: np.ndarray
    left: Optional[np.ndarray]
    mode_class: ModeClass

    @property
    def decay_rate(self) -> float:
        return -self.value.real

    @property
    def frequency(self) -> float:
        return self.value.imag


@dataclass(frozen=True)
class Spectrum:
    """All ``d^2`` Liouvillian eigenmodes of a model.

    ``right_vectors`` / ``left_vectors`` hold the vectorized modes as
    columns; when the spectrum is not defective ``left^H right = I``.
    """

    modes: List[SpectralMode]
    dim: int
    eps_re: float
    eps_im: float
    superoperator: np.ndarray
    right_vectors: np.ndarray
    left_vectors: Optional[np.ndarray]
    defective: bool
    biorthogonality_residual: float

    @property
    def values(self) -> np.ndarray:
        return np.array([m.value for m in self.modes])

    def counts(self) -> dict:
        out = {c: 0 for c in ModeClass}
        for m in self.modes:
            out[m.mode_class] += 1
        return out

    def of_class(self, cls: ModeClass) -> List[SpectralMode]:
        return [m for m in self.modes if m.mode_class is cls]

    def summary(self) -> str:
        c = self.counts()
        return (
            f"oscillatory={c[ModeClass.PERSISTENT_OSCILLATORY]} steady={c[ModeClass.STEADY]} "
            f"underdamped={c[ModeClass.UNDERDAMPED]} overdamped={c[ModeClass.OVERDAMPED]}"
        )

    def contains(self, value: complex, tol: float = 1e-8) -> bool:
        return bool(np.min(np.abs(self.values - value)) <= tol)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    k = int(np.argmax(mags >= (1.0 - 1e-8) * mags.max()))
    return v * (np.conj(v[k]) / mags[k])


def spectrum(
    model: LindbladModel,
    eps_re: Optional[float] = None,
    eps_im: Optional[float] = None,
    allow_defective: bool = False,
) -> Spectrum:
    """Diagonalize the Liouvillian and classify every mode.

    Right modes have unit Frobenius norm with their largest entry real and
    positive. Left modes are eigenvectors of ``S^dag``; inside each cluster
    of (numerically) degenerate eigenvalues they are recombined by the
    inverse of the cluster overlap matrix, giving ``Tr[l_j^dag r_k] = delta_jk``.

    Raises:
        Defective: if the overlap matrix of some cluster is singular, unless
            ``allow_defective`` is set (then ``left`` is ``None``).
    """
    s = build_superoperator(model)
    d = model.dim
    dec, wl = eig_general(s, tol=1e-9, left=True)
    values = dec.values
    vr = np.column_stack([_fix_phase(dec.vectors[:, k]) for k in range(len(values))])
    snorm = norm2(s)
    if eps_re is None or eps_im is None:
        radius = float(np.abs(values).max(initial=0.0))
        default = CLASS_REL_TOL * max(1.0, radius)
        eps_re = default if eps_re is None else eps_re
        eps_im = default if eps_im is None else eps_im

    clusters = cluster_values(values, CLUSTER_REL_TOL * max(1.0, snorm))
    defective = dec.possibly_defective
    left = np.zeros_like(vr)
    for idx in clusters:
        overlap = dagger(wl[:, idx]) @ vr[:, idx]
        sv = np.linalg.svd(overlap, compute_uv=False)
        if sv[-1] <= sv[0] * 1e-8 or sv[-1] == 0.0:
            defective = True
            continue
        left[:, idx] = wl[:, idx] @ dagger(np.linalg.inv(overlap))
    resid = np.inf
    if not defective:
        resid = float(np.abs(dagger(left) @ vr - np.eye(len(values))).max(initial=0.0))
        if resid > BIORTH_FAIL_TOL:
            defective = True
    if defective and not allow_defective:
        raise Defective("Liouvillian is (numerically) not diagonalizable")

    order = sorted(range(len(values)), key=lambda k: (-values[k].real, values[k].imag, k))
    modes = []
    for k in order:
        modes.append(
            SpectralMode(
                complex(values[k]),
                unvec(vr[:, k], d),
                None if defective else unvec(left[:, k], d),
                classify(complex(values[k]), eps_re, eps_im),
            )
        )
    return Spectrum(
        modes=modes,
        dim=d,
        eps_re=eps_re,
        eps_im=eps_im,
        superoperator=s,
        right_vectors=vr[:, order],
        left_vectors=None if defective else left[:, order],
        defective=defective,
        biorthogonality_residual=resid,
    )


def project(spec: Spectrum, rho0) -> np.ndarray:
    """Amplitudes ``c_k = Tr[l_k^dag rho0]`` in mode order."""
    if spec.defective:
        raise Defective("no biorthonormal left modes for a defective Liouvillian")
    r = _as_matrix(rho0)
    if r.shape != (spec.dim, spec.dim):
        raise DimensionMismatch(f"state {r.shape} does not match spectrum dimension {spec.dim}")
    return dagger(spec.left_vectors) @ vec(r)


def reconstruct(spec: Spectrum, coefficients) -> np.ndarray:
    return unvec(spec.right_vectors @ np.asarray(coefficients), spec.dim)


def evolve_expansion(spec: Spectrum, rho0, times: Sequence[float]) -> List[DensityMatrix]:
    """``rho(t) = sum_k c_k exp(Lambda_k t) r_k`` at each requested time."""
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise ValueError("times must be non-negative")
    c = project(spec, rho0)
    lam = spec.values
    out = []
    for t in times:
        m = unvec(spec.right_vectors @ (c * np.exp(lam * t)), spec.dim)
        out.append(DensityMatrix(m, tol=DRIFT_TOL))
    return out


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    trace_drift: float
    hermiticity_drift: float
    backend: str

    def density_matrices(self) -> List[DensityMatrix]:
        return [DensityMatrix(m, tol=DRIFT_TOL) for m in self.states]


def evolve_rk4(
    model: LindbladModel,
    rho0,
    t_end: float,
    dt: float,
    record_every: int = 1,
    backend=None,
) -> Trajectory:
    """Fixed-step classical Runge-Kutta integration of the master equation.

    The number of steps is ``round(t_end / dt)``; ``t_end`` must be an
    integer multiple of ``dt`` to within 1e-9 relative. States are recorded
    every ``record_every`` steps, starting with ``rho0``.

    Raises:
        StepTooLarge: if the trace, Hermiticity or norm drifts by more than 1e-6.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < 0:
        raise ValueError("t_end must be non-negative")
    n_steps = int(round(t_end / dt))
    if abs(n_steps * dt - t_end) > 1e-9 * max(1.0, t_end):
        raise ValueError("t_end must be an integer multiple of dt")
    if record_every < 1 or (n_steps and n_steps % record_every):
        raise ValueError("record_every must divide the number of steps")
    r0 = _as_matrix(rho0)
    if r0.shape != (model.dim, model.dim):
        raise DimensionMismatch(f"state {r0.shape} does not match model dimension {model.dim}")
    be = backend if backend is not None else kernels.backend
    d = model.dim
    jumps = np.array([c.operator for c in model.channels], dtype=np.complex128).reshape(-1, d, d)
    rates = np.array(model.rates, dtype=np.float64)
    states = be.rk4_propagate(model.effective_hamiltonian(), jumps, rates, r0, float(dt), n_steps, record_every)
    times = np.arange(states.shape[0]) * (dt * record_every)

    traces = np.trace(states, axis1=1, axis2=2)
    tr0 = np.trace(r0)
    trace_drift = float(np.abs(traces - tr0).max())
    herm = float(np.abs(states - np.conj(np.swapaxes(states, 1, 2))).max())
    norms = np.linalg.norm(states, axis=(1, 2))
    limit = max(1.0, float(np.linalg.norm(r0))) * (1.0 + DRIFT_TOL)
    if not np.all(np.isfinite(states)) or trace_drift > DRIFT_TOL or herm > DRIFT_TOL or norms.max() > limit:
        raise StepTooLarge(
            f"RK4 drift too large (trace {trace_drift:.2e}, hermiticity {herm:.2e}, "
            f"max norm {norms.max():.3e}); reduce dt"
        )
    name = "compiled" if be is kernels.compiled_backend else "python"
    return Trajectory(times, states, trace_drift, herm, name)


# --- export ----------------------------------------------------------------

def _g17(x: float) -> str:
    return format(float(x) + 0.0, ".17g")


def spectrum_csv(spec: Spectrum) -> str:
    buf = io.StringIO(newline="")
    buf.write("re,im,class,decay_rate,frequency\n")
    for m in spec.modes:
        buf.write(
            ",".join(
                [_g17(m.value.real), _g17(m.value.imag), m.mode_class.value, _g17(m.decay_rate), _g17(m.frequency)]
            )
            + "\n"
        )
    return buf.getvalue()


def spectrum_records(spec: Spectrum) -> list:
    return [
        {
            "re": m.value.real,
            "im": m.value.imag,
            "class": m.mode_class.value,
            "decay_rate": m.decay_rate,
            "frequency": m.frequency,
        }
        for m in spec.modes
    ]


def trajectory_csv(times, fidelities, observables: Optional[dict] = None) -> str:
    observables = observables or {}
    buf = io.StringIO(newline="")
    buf.write(",".join(["t", "fidelity", *observables]) + "\n")
    for i, t in enumerate(times):
        row = [_g17(t), _g17(fidelities[i])] + [_g17(v[i]) for v in observables.values()]
        buf.write(",".join(row) + "\n")
    return buf.getvalue()
