"""Pure-numpy twin of the compiled ``_rk4`` extension (same signatures)."""

import numpy as np


def lindblad_rhs(heff, jumps, rates, rho):
    """Evaluate the master-equation right-hand side at ``rho``."""
    out = -1j * (heff @ rho - rho @ np.conj(heff).T)
    if len(rates):
        out = out + np.einsum("k,kij->ij", rates, jumps @ rho @ np.conj(np.swapaxes(jumps, 1, 2)))
    return out


def rk4_propagate(heff, jumps, rates, rho0, dt, n_steps, stride):
    """Classical RK4 with ``n_steps`` steps of size ``dt``.

    Returns an array of shape ``(n_steps // stride + 1, d, d)`` holding the
    state at steps ``0, stride, 2*stride, ...``.
    """
    heff = np.asarray(heff, dtype=np.complex128)
    heff_dag = np.conj(heff).T
    rates = np.asarray(rates, dtype=np.float64)
    active = rates != 0.0
    jumps = np.asarray(jumps, dtype=np.complex128)[active]
    rates = rates[active]
    jumps_dag = np.conj(np.swapaxes(jumps, 1, 2))
    scaled = jumps * rates[:, None, None]

    def f(r):
        out = -1j * (heff @ r - r @ heff_dag)
        for k in range(len(rates)):
            out += scaled[k] @ r @ jumps_dag[k]
        return out

    d = heff.shape[0]
    records = np.empty((n_steps // stride + 1, d, d), dtype=np.complex128)
    rho = np.array(rho0, dtype=np.complex128)
    records[0] = rho
    r = 1
    half = 0.5 * dt
    for step in range(1, n_steps + 1):
        k1 = f(rho)
        k2 = f(rho + half * k1)
        k3 = f(rho + half * k2)
        k4 = f(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if step % stride == 0:
            records[r] = rho
            r += 1
    return records
