"""Block-diagonal structure, decoherence-free subspaces and persistent oscillatory modes.

A model has the structure exploited here when, in some orthonormal basis
with block sizes ``(n, n, m)``,

    H   = diag(H_a, H_b, H_res),
    L_i = diag(Xi_i, Xi_i, M_i)        for every channel.

The steady mode ``R*`` of the reduced Lindbladian built from ``H_a`` and the
``Xi_i`` then yields oscillatory modes whenever ``Delta_H = H_a - H_b`` acts
on ``R*`` as a real scalar.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .errors import ConditionFailed, DimensionMismatch, NoSteadyMode, NotStructured
from .linalg import (
    as_cmatrix,
    cluster_values,
    dagger,
    norm2,
    null_space_matrix,
    psd_eigh,
    unvec,
)
from .model import JumpChannel, LindbladModel, dissipator, master_rhs, matrix_to_json
from .spectral import build_superoperator

OMEGA_REAL_TOL = 1e-9


class Condition(enum.Enum):
    STRONG = "strong"
    WEAK = "weak"
    NONE = "none"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BlockPartition:
    """Orthonormal basis (as columns) and block sizes ``(n, n, m)``."""

    basis: np.ndarray
    block_sizes: Tuple[int, int, int]

    def __post_init__(self):
        u = as_cmatrix(self.basis)
        d = u.shape[0]
        if u.shape != (d, d):
            raise DimensionMismatch(f"partition basis must be square, got {u.shape}")
        sizes = tuple(int(s) for s in self.block_sizes)
        if len(sizes) == 2:
            sizes = (sizes[0], sizes[1], d - sizes[0] - sizes[1])
        n1, n2, m = sizes
        if n1 != n2 or n1 < 1 or m < 0 or n1 + n2 + m != d:
            raise ValueError(f"block sizes {sizes} do not describe (n, n, m) with 2n + m = {d}")
        if np.abs(dagger(u) @ u - np.eye(d)).max() > 1e-10:
            raise ValueError("partition basis is not unitary")
        u.setflags(write=False)
        object.__setattr__(self, "basis", u)
        object.__setattr__(self, "block_sizes", sizes)

    @property
    def n(self) -> int:
        return self.block_sizes[0]

    @property
    def m(self) -> int:
        return self.block_sizes[2]

    def slices(self) -> Tuple[slice, slice, slice]:
        n = self.n
        return slice(0, n), slice(n, 2 * n), slice(2 * n, 2 * n + self.m)

    def to_partition_basis(self, op) -> np.ndarray:
        return dagger(self.basis) @ as_cmatrix(op) @ self.basis

    def from_partition_basis(self, op) -> np.ndarray:
        return self.basis @ as_cmatrix(op) @ dagger(self.basis)

    @classmethod
    def identity(cls, d: int, n: int) -> "BlockPartition":
        return cls(np.eye(d, dtype=np.complex128), (n, n, d - 2 * n))


@dataclass
class StructureReport:
    xi: List[np.ndarray]
    m_blocks: List[np.ndarray]
    h_a: np.ndarray
    h_b: np.ndarray
    h_res: np.ndarray
    max_offblock_residual: float
    max_xi_mismatch: float
    structured: bool
    tol: float
    residuals: List[dict] = field(default_factory=list)

    @property
    def delta_h(self) -> np.ndarray:
        return self.h_a - self.h_b

    @property
    def n(self) -> int:
        return self.h_a.shape[0]


def _offblock(op: np.ndarray, sl) -> float:
    mask = np.ones(op.shape, dtype=bool)
    for s in sl:
        mask[s, s] = False
    return float(np.abs(op[mask]).max(initial=0.0))


def verify_block_form(
    model: LindbladModel, partition: BlockPartition, tol: float = 1e-9, strict: bool = True
) -> StructureReport:
    """Check that ``H`` and every ``L_i`` are block diagonal in ``partition``.

    Residuals are the largest off-block entry (and, for the jumps, the largest
    entry of the difference of the two leading blocks) relative to the
    operator's largest entry.

    Raises:
        NotStructured: when ``strict`` and a residual exceeds ``tol``. The
            exception carries the populated report.
    """
    if partition.basis.shape[0] != model.dim:
        raise DimensionMismatch(f"partition of dimension {partition.basis.shape[0]} for a {model.dim}-level model")
    sa, sb, sr = partition.slices()
    residuals = []
    worst = (0.0, None)

    def rel(x, op):
        scale = float(np.abs(op).max(initial=0.0))
        return x / scale if scale > 0 else 0.0

    h = partition.to_partition_basis(model.hamiltonian)
    h_off = rel(_offblock(h, (sa, sb, sr)), h)
    residuals.append({"operator": "hamiltonian", "offblock": h_off, "xi_mismatch": 0.0})
    if h_off > worst[0]:
        worst = (h_off, None)
    xi, m_blocks = [], []
    max_off, max_mis = h_off, 0.0
    for i, c in enumerate(model.channels):
        op = partition.to_partition_basis(c.operator)
        off = rel(_offblock(op, (sa, sb, sr)), op)
        mis = rel(float(np.abs(op[sa, sa] - op[sb, sb]).max(initial=0.0)), op)
        residuals.append({"operator": f"channel[{i}]", "offblock": off, "xi_mismatch": mis})
        xi.append(0.5 * (op[sa, sa] + op[sb, sb]))
        m_blocks.append(op[sr, sr].copy())
        max_off, max_mis = max(max_off, off), max(max_mis, mis)
        if max(off, mis) > worst[0]:
            worst = (max(off, mis), i)
    structured = max(max_off, max_mis) <= tol
    report = StructureReport(
        xi=xi,
        m_blocks=m_blocks,
        h_a=h[sa, sa].copy(),
        h_b=h[sb, sb].copy(),
        h_res=h[sr, sr].copy(),
        max_offblock_residual=max_off,
        max_xi_mismatch=max_mis,
        structured=structured,
        tol=tol,
        residuals=residuals,
    )
    if strict and not structured:
        who = "hamiltonian" if worst[1] is None else f"channel {worst[1]}"
        raise NotStructured(
            f"{who} is not block diagonal in the partition (residual {worst[0]:.3e} > {tol:g})",
            residual=worst[0],
            operator_index=worst[1],
            report=report,
        )
    return report


# --- reduced Lindbladian and Delta_H conditions ---------------------------

@dataclass(frozen=True)
class RStarSolution:
    r_star: np.ndarray
    omega: Optional[float]
    condition: Condition
    sharp_residual: float
    multiplicity: int
    delta_h: np.ndarray


def sharp_model(report: StructureReport, rates: Sequence[float]) -> LindbladModel:
    """The reduced Lindblad model with Hamiltonian ``H_a`` and jumps ``Xi_i``."""
    if len(rates) != len(report.xi):
        raise DimensionMismatch(f"{len(rates)} rates for {len(report.xi)} channels")
    h_a = 0.5 * (report.h_a + dagger(report.h_a))
    return LindbladModel(h_a, [JumpChannel(x, g) for x, g in zip(report.xi, rates)])


def _select_hermitian(null_basis: np.ndarray, n: int) -> np.ndarray:
    if null_basis.shape[1] == 1:
        r = unvec(null_basis[:, 0], n)
        r = r / np.trace(r)
        return 0.5 * (r + dagger(r))
    best, best_score = None, -np.inf
    for k in range(null_basis.shape[1]):
        r = unvec(null_basis[:, k], n)
        for cand in (0.5 * (r + dagger(r)), 0.5j * (dagger(r) - r)):
            norm = np.linalg.norm(cand)
            if norm < 1e-12:
                continue
            for sign in (1.0, -1.0):
                c = sign * cand / norm
                w = np.linalg.eigvalsh(c)
                score = float(np.clip(w, 0.0, None).sum())
                if abs(np.trace(c).real) > 1e-9 and score > best_score + 1e-12:
                    best, best_score = c, score
    if best is None:
        raise NoSteadyMode("no Hermitian element of the reduced null space has non-zero trace")
    return best / np.trace(best).real


def check_strong(delta_h, tol: float = 1e-9) -> Optional[float]:
    """``omega`` when ``Delta_H = omega * I`` (``omega`` may be zero), else ``None``."""
    dh = as_cmatrix(delta_h)
    n = dh.shape[0]
    if dh.shape != (n, n):
        raise DimensionMismatch("Delta_H must be square")
    mean = np.trace(dh) / n
    if abs(mean.imag) > OMEGA_REAL_TOL * (1.0 + abs(mean.real)):
        return None
    omega = float(mean.real)
    scale = tol * max(1.0, norm2(dh))
    if norm2(dh - omega * np.eye(n)) <= scale:
        return 0.0 if abs(omega) <= scale else omega
    return None


def check_weak(delta_h, r_star, tol: float = 1e-9, eps_im: Optional[float] = None) -> Optional[float]:
    """``omega`` when ``Delta_H R* = omega R*`` for a real, non-zero ``omega``.

    ``omega`` is the Rayleigh-type quotient ``Tr[R*^dag Delta_H R*] / Tr[R*^dag R*]``;
    values with ``|omega| <= eps_im`` count as a regression to a steady mode
    and return ``None``.
    """
    dh = as_cmatrix(delta_h)
    r = as_cmatrix(r_star)
    if dh.shape[1] != r.shape[0]:
        raise DimensionMismatch(f"Delta_H {dh.shape} and R* {r.shape} do not conform")
    denom = np.vdot(r, r).real
    if denom == 0.0:
        return None
    omega = np.vdot(r, dh @ r) / denom
    if abs(omega.imag) > OMEGA_REAL_TOL * (1.0 + abs(omega)):
        return None
    w = float(omega.real)
    if eps_im is None:
        eps_im = 1e-8 * max(1.0, norm2(dh))
    if abs(w) <= eps_im:
        return None
    resid = np.linalg.norm(dh @ r - w * r)
    if resid <= tol * max(norm2(dh), 1.0) * np.linalg.norm(r):
        return w
    return None


def solve_rstar(report: StructureReport, rates: Sequence[float], tol: float = 1e-9) -> RStarSolution:
    """Hermitian, trace-one steady mode of the reduced Lindbladian and the verdict.

    When the null space is degenerate, each basis element is split into its
    Hermitian and anti-Hermitian parts and the candidate with the largest
    positive-part trace wins; ``multiplicity`` records the null-space
    dimension.
    """
    sharp = sharp_model(report, rates)
    s = build_superoperator(sharp)
    n = report.n
    basis = null_space_matrix(s, tol=tol)
    if basis.shape[1] == 0:
        raise NoSteadyMode(f"reduced Lindbladian has no null vector at tol={tol:g}")
    r = _select_hermitian(basis, n)
    resid = float(np.linalg.norm(master_rhs(sharp, r)))
    dh = report.delta_h
    omega = check_strong(dh, tol)
    if omega is not None:
        cond = Condition.STRONG
    else:
        omega = check_weak(dh, r, tol)
        cond = Condition.WEAK if omega is not None else Condition.NONE
    return RStarSolution(r, omega, cond, resid, basis.shape[1], dh)


# --- explicit modes ----------------------------------------------------------

class ConstructedMode(NamedTuple):
    value: complex
    matrix: np.ndarray
    label: str


def _liouvillian_scale(model: LindbladModel) -> float:
    s = 2.0 * norm2(model.hamiltonian)
    for c in model.channels:
        s += 2.0 * c.rate * norm2(c.operator) ** 2
    return max(1.0, s)


def mode_residual(model: LindbladModel, value: complex, mode) -> float:
    m = as_cmatrix(mode)
    return float(np.linalg.norm(master_rhs(model, m) - value * m))


def construct_modes(
    model: LindbladModel, partition: BlockPartition, solution: RStarSolution, tol: float = 1e-8
) -> List[ConstructedMode]:
    """Embed ``R*`` into the oscillatory pair and the two steady modes.

    ``R*`` in the lower-left block has eigenvalue ``+i omega``; its
    conjugate in the upper-right block has ``-i omega``; ``R*`` on either
    diagonal block is steady. With no condition satisfied only the diagonal
    embeddings that pass the residual check are returned.

    Raises:
        ConditionFailed: if a mode implied by the condition fails its check.
    """
    d = model.dim
    sa, sb, _ = partition.slices()
    r = solution.r_star
    scale = _liouvillian_scale(model)

    def embed(rows, cols, block):
        x = np.zeros((d, d), dtype=np.complex128)
        x[rows, cols] = block
        return partition.from_partition_basis(x)

    candidates = []
    if solution.condition is not Condition.NONE:
        w = float(solution.omega)
        kind = "oscillatory" if w != 0.0 else "steady"
        candidates.append((1j * w, embed(sb, sa, r), f"{kind}_ba", True))
        candidates.append((-1j * w, embed(sa, sb, dagger(r)), f"{kind}_ab", True))
    candidates.append((0j, embed(sa, sa, r), "steady_aa", True))
    candidates.append((0j, embed(sb, sb, r), "steady_bb", solution.condition is not Condition.NONE))

    out = []
    for value, mat, label, required in candidates:
        res = mode_residual(model, value, mat)
        if res > tol * scale * np.linalg.norm(mat):
            if required:
                raise ConditionFailed(f"{label} mode residual {res:.3e} exceeds tolerance")
            continue
        out.append(ConstructedMode(value, mat, label))
    return out


def dissipator_residual(model: LindbladModel, mode) -> float:
    """Frobenius norm of ``sum_i rate_i D_i[mode]``."""
    m = as_cmatrix(mode)
    total = np.zeros_like(m)
    for c in model.channels:
        if c.rate:
            total = total + c.rate * dissipator(c, m)
    return float(np.linalg.norm(total))


# --- decoherence-free subspaces ---------------------------------------------

def canonical_basis(columns: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Deterministic orthonormal basis of ``span(columns)``.

    Gram-Schmidt on the projections of the standard basis vectors, in order;
    each resulting vector has a real positive component on the standard
    vector that generated it.
    """
    q = scipy.linalg.orth(columns) if columns.shape[1] else columns
    k = q.shape[1]
    if k == 0:
        return q.astype(np.complex128)
    p = q @ dagger(q)
    out = []
    for j in range(p.shape[0]):
        v = p[:, j].copy()
        for u in out:
            v -= np.vdot(u, v) * u
        nv = np.linalg.norm(v)
        if nv > tol:
            out.append(v / nv)
            if len(out) == k:
                break
    return np.column_stack(out)


@dataclass(frozen=True)
class DfsSubspace:
    basis: np.ndarray
    xi: Tuple[complex, ...]
    hamiltonian: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ dagger(self.basis)

    def energies(self) -> np.ndarray:
        return np.linalg.eigvalsh(0.5 * (self.hamiltonian + dagger(self.hamiltonian)))

    def frequencies(self, tol: float = 1e-9) -> List[float]:
        """Distinct non-zero ``lambda_u - lambda_v`` over pairs of restricted energies."""
        e = self.energies()
        vals = sorted({round(float(a - b), 12) for a in e for b in e if abs(a - b) > tol})
        return vals


@dataclass(frozen=True)
class DfsResult:
    subspaces: List[DfsSubspace]

    def __len__(self) -> int:
        return len(self.subspaces)

    def __iter__(self):
        return iter(self.subspaces)


def _eigen_clusters(op: np.ndarray) -> List[complex]:
    scale = max(1.0, norm2(op))
    normal = np.abs(op @ dagger(op) - dagger(op) @ op).max(initial=0.0) <= 1e-10 * scale**2
    vals = np.linalg.eigvals(op)
    # a size-k Jordan block spreads its eigenvalue by ~eps**(1/k)
    ctol = (1e-8 if normal else 1e-3) * scale
    return [complex(vals[g].mean()) for g in cluster_values(vals, ctol)]


def find_dfs(model: LindbladModel, tol: float = 1e-9) -> DfsResult:
    """All maximal subspaces on which every jump acts as a scalar and which ``H`` preserves.

    Joint eigenspaces of the jumps are intersected channel by channel, then
    each is shrunk to its largest subspace that is ``H``-invariant and on
    which ``L_i^dag`` acts as ``conj(xi_i)``. For ``xi_i = 0`` the adjoint
    constraint is dropped: ``L_i w = 0`` already kills every dissipator term,
    which admits dark states such as the ground state of pure decay.
    """
    d = model.dim
    ops = model.jump_operators
    scale = max([1.0, norm2(model.hamiltonian)] + [norm2(o) for o in ops])
    pieces = [(np.eye(d, dtype=np.complex128), ())]
    for op in ops:
        nxt = []
        values = _eigen_clusters(op)
        for b, xis in pieces:
            for xi in values:
                n = null_space_matrix((op - xi * np.eye(d)) @ b, tol=tol, scale=scale)
                if n.shape[1]:
                    nxt.append((b @ n, xis + (xi,)))
        pieces = nxt

    eye = np.eye(d)
    found = []
    for b, xis in pieces:
        while b.shape[1]:
            blocks = [(eye - b @ dagger(b)) @ model.hamiltonian @ b]
            for op, xi in zip(ops, xis):
                if abs(xi) > tol * scale:
                    blocks.append((dagger(op) - np.conj(xi) * eye) @ b)
            n = null_space_matrix(np.vstack(blocks), tol=tol, scale=scale)
            if n.shape[1] == b.shape[1]:
                break
            b = b @ n if n.shape[1] else b[:, :0]
        if b.shape[1]:
            basis = canonical_basis(b)
            clean = tuple(_clean_complex(x, tol * scale) for x in xis)
            found.append(DfsSubspace(basis, clean, dagger(basis) @ model.hamiltonian @ basis))
    return DfsResult(found)


def _clean_complex(z: complex, tol: float) -> complex:
    re = 0.0 if abs(z.real) <= tol else z.real
    im = 0.0 if abs(z.imag) <= tol else z.imag
    return complex(re, im)


def dfs_modes(dfs: DfsResult, model: LindbladModel, tol: float = 1e-9) -> List[ConstructedMode]:
    """Modes ``|u><v|`` built from eigenvectors of ``H`` restricted to each subspace.

    The eigenvalue of ``|u><v|`` is ``-i (lambda_u - lambda_v)``.
    """
    scale = _liouvillian_scale(model)
    out = []
    for k, sub in enumerate(dfs):
        e, v = np.linalg.eigh(0.5 * (sub.hamiltonian + dagger(sub.hamiltonian)))
        vecs = sub.basis @ v
        for a in range(sub.dim):
            for b in range(sub.dim):
                lam = -1j * (e[a] - e[b])
                if abs(lam) <= tol * scale:
                    lam = 0j
                mat = np.outer(vecs[:, a], np.conj(vecs[:, b]))
                res = mode_residual(model, lam, mat)
                if res > tol * scale:
                    raise ConditionFailed(f"subspace {k} mode ({a},{b}) residual {res:.3e}")
                label = "steady" if lam == 0 else "oscillatory"
                out.append(ConstructedMode(lam, mat, f"{label}_W{k}_{a}{b}"))
    return out


# --- partition discovery -----------------------------------------------------

def commutant_basis(ops: Sequence[np.ndarray], tol: float = 1e-9) -> List[np.ndarray]:
    """Basis of ``{X : [X, A] = 0 for every A in ops}``."""
    d = ops[0].shape[0]
    eye = np.eye(d)
    rows = [np.kron(eye, a) - np.kron(a.T, eye) for a in ops]
    scale = max(1.0, max(norm2(a) for a in ops))
    basis = null_space_matrix(np.vstack(rows), tol=tol, scale=scale)
    return [unvec(basis[:, k], d) for k in range(basis.shape[1])]


def _hermitian_spanning_set(mats: Sequence[np.ndarray]) -> List[np.ndarray]:
    out = []
    for c in mats:
        for h in (0.5 * (c + dagger(c)), 0.5j * (dagger(c) - c)):
            if np.linalg.norm(h) > 1e-10:
                out.append(h)
    return out


def _intertwiner(a_blocks, b_blocks, tol) -> Optional[np.ndarray]:
    n = a_blocks[0].shape[0] if a_blocks else None
    if n is None:
        return None
    eye = np.eye(n)
    rows = []
    for a, b in zip(a_blocks, b_blocks):
        rows.append(np.kron(eye, b) - np.kron(a.T, eye))
        rows.append(np.kron(eye, dagger(b)) - np.kron(np.conj(a), eye))
    scale = max(1.0, max(norm2(x) for x in a_blocks + b_blocks))
    basis = null_space_matrix(np.vstack(rows), tol=tol, scale=scale)
    if basis.shape[1] == 0:
        return None
    w = unvec(basis[:, 0], n)
    u, _ = scipy.linalg.polar(w)
    tr = np.trace(u)
    if abs(tr) > 1e-8:
        u = u * (np.conj(tr) / abs(tr))
    return u


def _first_index(basis: np.ndarray) -> int:
    weights = np.linalg.norm(basis, axis=1)
    return int(np.argmax(weights > 1e-8))


def discover_partition(
    model: LindbladModel,
    trials: int = 20,
    tol: float = 1e-9,
    seed: int = 0,
) -> Optional[BlockPartition]:
    """Search for a basis that puts the model in the ``(n, n, m)`` block form.

    Each trial draws a random Hermitian element of the commutant of
    ``{H, L_i, L_i^dag}``; its eigenspaces reduce every operator. Pairs of
    equal-dimension groups of eigenspaces are tried as the two leading
    blocks (smallest ``n`` first), with the second block's basis rotated by
    the unitary intertwiner that makes the two ``Xi`` blocks coincide. The
    first pairing that passes :func:`verify_block_form` is returned.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    d = model.dim
    gens = [model.hamiltonian]
    for c in model.channels:
        gens += [c.operator, dagger(c.operator)]
    comm = commutant_basis(gens, tol)
    herm = _hermitian_spanning_set(comm)
    if len(comm) <= 1 or not herm:
        return None
    streams = np.random.SeedSequence(seed).spawn(trials)
    ops = model.jump_operators
    for ss in streams:
        rng = np.random.default_rng(ss)
        x = sum(rng.standard_normal() * h for h in herm)
        w, v = np.linalg.eigh(0.5 * (x + dagger(x)))
        spread = max(1.0, float(np.abs(w).max()))
        groups = cluster_values(w.astype(complex), 1e-6 * spread)
        spaces = [canonical_basis(v[:, g]) for g in groups]
        spaces.sort(key=_first_index)
        if len(spaces) < 2:
            continue
        for part in _candidate_pairs(spaces):
            a_idx, b_idx = part
            va = canonical_basis(np.hstack([spaces[i] for i in a_idx]))
            vb = canonical_basis(np.hstack([spaces[i] for i in b_idx]))
            rest_idx = [i for i in range(len(spaces)) if i not in a_idx and i not in b_idx]
            a_blocks = [dagger(va) @ op @ va for op in ops]
            b_blocks = [dagger(vb) @ op @ vb for op in ops]
            if ops:
                wmat = _intertwiner(a_blocks, b_blocks, tol)
                if wmat is None:
                    continue
                vb = vb @ wmat
            cols = [va, vb]
            if rest_idx:
                cols.append(canonical_basis(np.hstack([spaces[i] for i in rest_idx])))
            u = np.hstack(cols)
            n = va.shape[1]
            try:
                partition = BlockPartition(u, (n, n, d - 2 * n))
            except ValueError:
                continue
            report = verify_block_form(model, partition, tol=max(tol, 1e-8), strict=False)
            if report.structured:
                return partition
    return None


def _candidate_pairs(spaces: List[np.ndarray]):
    dims = [s.shape[1] for s in spaces]
    k = len(spaces)
    singles = []
    for i, j in itertools.combinations(range(k), 2):
        if dims[i] == dims[j]:
            singles.append((dims[i], (i,), (j,)))
    seen = {(a, b) for _, a, b in singles}
    multi = []
    if k <= 8:
        for labels in itertools.product((0, 1, 2), repeat=k):
            a = tuple(i for i in range(k) if labels[i] == 1)
            b = tuple(i for i in range(k) if labels[i] == 2)
            if not a or not b or a[0] > b[0] or (a, b) in seen:
                continue
            da = sum(dims[i] for i in a)
            if da == sum(dims[i] for i in b):
                multi.append((da, a, b))
    cands = sorted(singles + multi, key=lambda t: (t[0], len(t[1]), t[1], t[2]))
    for _, a, b in cands:
        yield a, b


# --- export ----------------------------------------------------------------

def report_to_dict(report: StructureReport, solution: Optional[RStarSolution] = None) -> dict:
    out = {
        "structured": report.structured,
        "tol": report.tol,
        "max_offblock_residual": report.max_offblock_residual,
        "max_xi_mismatch": report.max_xi_mismatch,
        "residuals": report.residuals,
        "blocks": {
            "xi": [matrix_to_json(x) for x in report.xi],
            "m": [matrix_to_json(x) for x in report.m_blocks],
            "h_a": matrix_to_json(report.h_a),
            "h_b": matrix_to_json(report.h_b),
            "h_res": matrix_to_json(report.h_res),
            "delta_h": matrix_to_json(report.delta_h),
        },
    }
    if solution is not None:
        out["condition"] = solution.condition.value
        out["omega"] = solution.omega
        out["r_star"] = matrix_to_json(solution.r_star)
        out["rstar_multiplicity"] = solution.multiplicity
        out["sharp_residual"] = solution.sharp_residual
    else:
        out["condition"] = Condition.NONE.value
        out["omega"] = None
    return out


def partition_to_dict(partition: BlockPartition) -> dict:
    return {"basis": matrix_to_json(partition.basis), "block_sizes": list(partition.block_sizes)}


def partition_from_dict(data: dict) -> BlockPartition:
    from .model import matrix_from_json

    return BlockPartition(matrix_from_json(data["basis"]), tuple(data["block_sizes"]))
