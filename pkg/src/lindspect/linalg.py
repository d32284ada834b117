"""Dense complex linear algebra used throughout the package.

Everything here is a thin, checked layer over numpy/LAPACK. Matrices are plain
``numpy.ndarray`` objects of dtype ``complex128``; vectorization is
column-stacking, ``vec(A X B) = (B^T kron A) vec(X)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Optional

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NonConvergence, NotPSD

DEFAULT_NULL_TOL = 1e-9
DEFECTIVE_COND = 1e8


def as_cmatrix(m) -> np.ndarray:
    """Return ``m`` as a finite 2-D complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def kron(a, b) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray, d: Optional[int] = None) -> np.ndarray:
    """Inverse of :func:`vec` for a square ``d x d`` matrix."""
    v = np.asarray(v)
    if d is None:
        d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise DimensionMismatch(f"vector of length {v.size} is not a vectorized square matrix")
    return v.reshape(d, d, order="F")


def norm2(m: np.ndarray) -> float:
    """Spectral norm (largest singular value)."""
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    return bool(np.abs(m - dagger(m)).max(initial=0.0) <= tol * scale)


@dataclass(frozen=True)
class EigenPair:
    value: complex
    right_vector: np.ndarray


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues and unit-norm right eigenvectors (as columns) of a square matrix.

    ``possibly_defective`` is set when the eigenvector matrix is so badly
    conditioned that the eigenvectors do not form a usable basis.
    """

    values: np.ndarray
    vectors: np.ndarray
    condition: float
    possibly_defective: bool

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[EigenPair]:
        for k in range(len(self.values)):
            yield EigenPair(complex(self.values[k]), self.vectors[:, k])

    def __getitem__(self, k: int) -> EigenPair:
        return EigenPair(complex(self.values[k]), self.vectors[:, k])


def _eig_condition(vectors: np.ndarray) -> float:
    if vectors.size == 0:
        return 1.0
    s = np.linalg.svd(vectors, compute_uv=False)
    if s[-1] == 0.0:
        return np.inf
    return float(s[0] / s[-1])


def eig_general(m, tol: float = 1e-10, left: bool = False):
    """Eigendecomposition of a general complex square matrix.

    LAPACK ``zgeev`` (Hessenberg reduction followed by shifted QR, i.e. a
    complex Schur form) does the work. Eigenvectors are returned with unit
    Euclidean norm; the residual ``||M v - lambda v|| <= tol ||M||`` is checked
    for every pair.

    Args:
        m: square matrix.
        tol: relative residual tolerance.
        left: also return the left eigenvectors ``w`` (``w^H M = lambda w^H``)
            as a second return value.

    Raises:
        NonConvergence: if LAPACK fails or a residual check fails.
    """
    a = as_cmatrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"eig_general needs a square matrix, got {a.shape}")
    try:
        if left:
            values, vl, vr = scipy.linalg.eig(a, left=True, right=True)
        else:
            values, vr = scipy.linalg.eig(a)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NonConvergence(str(exc)) from exc
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(vr))):
        raise NonConvergence("eigendecomposition produced non-finite output")
    vr = vr / np.linalg.norm(vr, axis=0, keepdims=True)
    scale = max(norm2(a), np.finfo(float).tiny)
    resid = np.linalg.norm(a @ vr - vr * values, axis=0)
    if resid.size and resid.max() > tol * scale and resid.max() > 1e-13:
        raise NonConvergence(f"eigenpair residual {resid.max():.3e} exceeds {tol:g}*||M||")
    cond = _eig_condition(vr)
    dec = EigenDecomposition(values, vr, cond, cond > DEFECTIVE_COND)
    if left:
        vl = vl / np.linalg.norm(vl, axis=0, keepdims=True)
        return dec, vl
    return dec


def eig_hermitian(m, tol: float = 1e-10):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix."""
    a = as_cmatrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"eig_hermitian needs a square matrix, got {a.shape}")
    if not is_hermitian(a, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    try:
        return np.linalg.eigh(0.5 * (a + dagger(a)))
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc


def psd_eigh(m, tol: float = 1e-12):
    """Eigendecomposition of a Hermitian PSD matrix with noise-level eigenvalues zeroed.

    Eigenvalues with ``|lambda| <= tol * ||m||`` become exactly 0; anything more
    negative raises :class:`NotPSD`.
    """
    a = as_cmatrix(m)
    w, u = eig_hermitian(a, tol=max(tol, 1e-10))
    scale = max(float(np.abs(w).max(initial=0.0)), np.finfo(float).tiny)
    if w.size and w[0] < -tol * scale:
        raise NotPSD(f"eigenvalue {w[0]:.3e} below -{tol:g}*||m||")
    w = np.where(np.abs(w) <= tol * scale, 0.0, w)
    return np.clip(w, 0.0, None), u


def sqrt_psd(m, tol: float = 1e-12) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix."""
    w, u = psd_eigh(m, tol)
    return (u * np.sqrt(w)) @ dagger(u)


def null_space(m, tol: float = DEFAULT_NULL_TOL, scale: Optional[float] = None) -> List[np.ndarray]:
    """Orthonormal basis of the numerical null space of ``m``.

    Singular values at or below ``tol * scale`` count as zero. ``scale``
    defaults to the largest singular value of ``m``; callers that know the
    natural size of the problem (e.g. ``||A||`` when ``m = A B`` for an
    isometry ``B``) should pass it, because a relative cutoff is meaningless
    for a matrix that is zero up to round-off.
    """
    a = as_cmatrix(m)
    rows, cols = a.shape
    if cols == 0:
        return []
    if rows == 0:
        return list(np.eye(cols, dtype=np.complex128).T)
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    ref = s[0] if scale is None else scale
    rank = int(np.sum(s > tol * ref)) if ref > 0 else 0
    basis = np.conj(vh[rank:]).T
    return [basis[:, k] for k in range(basis.shape[1])]


def null_space_matrix(m, tol: float = DEFAULT_NULL_TOL, scale: Optional[float] = None) -> np.ndarray:
    """:func:`null_space` with the basis vectors as columns of one array."""
    vs = null_space(m, tol, scale)
    n = as_cmatrix(m).shape[1]
    if not vs:
        return np.zeros((n, 0), dtype=np.complex128)
    return np.column_stack(vs)


def cluster_values(values, tol: float) -> List[List[int]]:
    """Single-linkage clusters of complex numbers closer than ``tol``.

    Clusters are ordered by ascending real part (quantized to ``tol``), then
    imaginary part, of their mean; indices inside a cluster are ascending.
    """
    values = np.asarray(values, dtype=np.complex128)
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    order = np.lexsort((values.imag, values.real))
    for a_pos in range(n):
        i = order[a_pos]
        for b_pos in range(a_pos + 1, n):
            j = order[b_pos]
            if values[j].real - values[i].real > tol:
                break
            if abs(values[i] - values[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    clusters = [sorted(g) for g in groups.values()]

    # real parts that agree within tol count as equal, so round-off cannot flip the order
    means = [values[g].mean() for g in clusters]
    keys = [(np.floor(m.real / tol + 0.5) if tol > 0 else m.real, m.imag) for m in means]
    order = sorted(range(len(clusters)), key=lambda k: keys[k])
    return [clusters[k] for k in order]


def orthonormal_columns(m: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (columns) for the column span of ``m``."""
    if m.shape[1] == 0:
        return m.astype(np.complex128)
    return scipy.linalg.orth(m, rcond=tol)
