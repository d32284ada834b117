"""End-to-end acceptance checks, one test per criterion.

Each test's outcome is echoed as a single ``criterion N: PASS|FAIL`` line in
the terminal summary (see ``conftest.py``). Run on its own with::

    python3 -m pytest tests/test_acceptance.py
"""

import inspect
import time

import numpy as np
import pytest

from lindspect import zoo
from lindspect.linalg import dagger, norm2, null_space
from lindspect.model import JumpChannel, LindbladModel, fidelity
from lindspect.spectral import ModeClass, build_superoperator, evolve_expansion, evolve_rk4, spectrum
from lindspect.structure import (
    Condition,
    check_weak,
    construct_modes,
    discover_partition,
    dissipator_residual,
    find_dfs,
    solve_rstar,
    verify_block_form,
)

XI = np.array([[0, 1], [0, 0]])


def oscillatory_values(spec):
    values = np.array([m.value for m in spec.of_class(ModeClass.PERSISTENT_OSCILLATORY)])
    return values[np.argsort(values.imag)]


def rk4_exact_end(model, rho0, t_end, dt):
    """RK4 with step ``dt`` up to the last grid point below ``t_end``, then one short step."""
    n = int(np.floor(t_end / dt + 1e-9))
    traj = evolve_rk4(model, rho0, n * dt, dt)
    states, times = list(traj.states), list(traj.times)
    rest = t_end - n * dt
    if rest > 1e-12:
        states.append(evolve_rk4(model, states[-1], rest, rest).states[-1])
        times.append(t_end)
    return np.array(times), np.array(states), traj.trace_drift


def test_criterion_1_example0_spectrum():
    start = time.perf_counter()
    spec = spectrum(zoo.dephasing_oscillator(nu=2, gamma=1, d=4))
    elapsed = time.perf_counter() - start
    osc = oscillatory_values(spec)
    counts = spec.counts()
    assert len(osc) == 2
    assert np.abs(osc - np.array([-4j, 4j])).max() <= 1e-9
    assert counts[ModeClass.STEADY] == 4
    assert counts[ModeClass.UNDERDAMPED] + counts[ModeClass.OVERDAMPED] == 10
    assert elapsed < 1.0


def test_criterion_2_example0_dynamics():
    model = zoo.dephasing_oscillator(2, 1, 10)
    rho0 = zoo.example0_osc(10)
    spec = spectrum(model)

    times, states, drift = rk4_exact_end(model, rho0, np.pi, 1e-3)
    f_rk4 = np.array([fidelity(rho0, s) for s in states])
    assert np.abs(f_rk4 - np.cos(2 * times) ** 2).max() <= 1e-7
    assert times[-1] == np.pi

    grid = np.linspace(0, np.pi, 1001)
    f_exp = np.array([fidelity(rho0, s) for s in evolve_expansion(spec, rho0, grid)])
    assert np.abs(f_exp - np.cos(2 * grid) ** 2).max() <= 1e-7

    (half,) = evolve_expansion(spec, rho0, [0.5 * np.pi])
    assert abs(fidelity(rho0, half) - 1) <= 1e-8
    _, half_rk4, _ = rk4_exact_end(model, rho0, 0.5 * np.pi, 1e-3)
    assert abs(fidelity(rho0, half_rk4[-1]) - 1) <= 1e-8


def test_criterion_3_example1():
    chi, j12, j23 = 0.3, 0.9, 1.0
    model = zoo.dephasing_chain(chi, j12, j23, 1.0, 1.0)
    spec = spectrum(model)
    osc = oscillatory_values(spec)
    expected = np.array([-4.4j, -3.2j, -0.8j, -0.4j, 0.4j, 0.8j, 3.2j, 4.4j])
    assert len(osc) == 8
    assert np.abs(osc - expected).max() <= 1e-9
    assert len(null_space(build_superoperator(model))) == 8

    table = {
        (1, 1): chi + j12 + j23,
        (-1, 1): -chi - j12 + j23,
        (1, -1): -chi + j12 - j23,
        (-1, -1): chi - j12 - j23,
    }
    dfs = find_dfs(model)
    assert len(dfs) == 4
    found = {}
    for sub in dfs:
        assert sub.dim == 2
        xi = tuple(int(round(x.real)) for x in sub.xi)
        assert np.abs(np.array(sub.xi) - xi).max() <= 1e-12
        found[xi] = sub
    assert set(found) == set(table)
    for xi, c in table.items():
        h = found[xi].hamiltonian
        # H|_W = c sigma^z with |e..> ordering inside each subspace
        assert np.abs(h - c * np.diag([1.0, -1.0])).max() <= 1e-12


def _example2_modes(gamma):
    model, part = zoo.xxx_collective(5, 5, 5, 5, gamma)
    report = verify_block_form(model, part)
    sol = solve_rstar(report, model.rates)
    return model, report, sol, construct_modes(model, part, sol)


def test_criterion_4_example2_structure():
    model, report, sol, modes = _example2_modes(1.0)
    assert report.structured
    assert np.abs(report.xi[0] - XI).max() <= 1e-12
    assert np.abs(report.delta_h - 20 * np.eye(2)).max() <= 1e-12
    assert sol.condition is Condition.STRONG
    spec = spectrum(model)
    osc = [m for m in modes if m.label.startswith("oscillatory")]
    assert sorted(m.value.imag for m in osc) == pytest.approx([-20, 20], abs=1e-12)
    for m in osc:
        assert spec.contains(m.value, 1e-8)
        assert dissipator_residual(model, m.matrix) > 1e-3
    for gamma in (0.1, 10.0):
        *_, other = _example2_modes(gamma)
        values = sorted(m.value.imag for m in other if m.label.startswith("oscillatory"))
        assert np.abs(np.array(values) - [-20, 20]).max() <= 1e-9


def test_criterion_5_example2_dynamics():
    model, part = zoo.xxx_collective()
    rho0 = zoo.example2_osc(model, part)
    r_star = solve_rstar(verify_block_form(model, part), model.rates).r_star
    period = 0.1 * np.pi
    spec = spectrum(model)
    half, full = evolve_expansion(spec, rho0, [period / 2, period])
    assert abs(fidelity(rho0, full) - 1) <= 1e-7
    expected = np.zeros((8, 8), dtype=complex)
    expected[:2, :2] = expected[2:4, 2:4] = 0.5 * r_star
    expected[:2, 2:4] = expected[2:4, :2] = -0.5 * r_star
    assert np.abs(part.to_partition_basis(half.matrix) - expected).max() <= 1e-7

    dt = period / 2000
    traj = evolve_rk4(model, rho0, period, dt, record_every=1000)
    assert abs(fidelity(rho0, traj.states[-1]) - 1) <= 1e-7
    assert np.abs(part.to_partition_basis(traj.states[1]) - expected).max() <= 1e-7


def test_criterion_6_example3():
    m8, part = zoo.build("two_qubit_tunable", {"e": 1, "g1": 1, "g2": 8})
    rep8 = verify_block_form(m8, part)
    sol8 = solve_rstar(rep8, m8.rates)
    assert np.abs(sol8.r_star - 0.5 * np.array([[1, 1j], [-1j, 1]])).max() <= 1e-9
    assert check_weak(rep8.delta_h, sol8.r_star) == pytest.approx(4.0, abs=1e-9)
    spec8 = spectrum(m8)
    assert spec8.contains(4j, 1e-8) and spec8.contains(-4j, 1e-8)

    m1, part = zoo.build("two_qubit_tunable", {"e": 1, "g1": 1, "g2": 1})
    rep1 = verify_block_form(m1, part)
    sol1 = solve_rstar(rep1, m1.rates)
    expected = np.array([[73, -70 + 52j], [-70 - 52j, 178]]) / 251
    assert np.abs(sol1.r_star - expected).max() <= 1e-9
    assert check_weak(rep1.delta_h, sol1.r_star) is None
    assert not spectrum(m1).of_class(ModeClass.PERSISTENT_OSCILLATORY)


def test_criterion_7_periodic_xyz():
    model, part = zoo.xyz_periodic(omega=0.0)
    assert norm2(verify_block_form(model, part).delta_h) <= 1e-12

    model, part = zoo.xyz_periodic(omega=3.0)
    spec = spectrum(model)
    osc = oscillatory_values(spec)
    assert np.abs(osc - np.array([-3j, 3j])).max() <= 1e-8
    sol = solve_rstar(verify_block_form(model, part), model.rates)
    assert sol.omega == pytest.approx(3.0, abs=1e-9)

    h_xyz = zoo.xyz_hamiltonian(5, 5, 5, 5, 5, 5, 20)
    h_xxx = zoo.xxx_hamiltonian(5, 5, 5, 5)
    assert np.abs(h_xyz - h_xxx).max() <= 1e-12


RATE_PARAMS = {"gamma", "g1", "g2"}


def _draw_params(entry, rng):
    params = {}
    for name in inspect.signature(entry.builder).parameters:
        if name in entry.integer_params:
            params[name] = int(rng.integers(3, 7))
        elif name in RATE_PARAMS:
            params[name] = float(rng.uniform(0, 10))
        else:
            params[name] = float(rng.uniform(-10, 10))
    return params


def _random_state(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = a @ dagger(a)
    return rho / np.trace(rho).real


def test_criterion_8_property_suite():
    rng = np.random.default_rng(20240601)
    failures = []
    for name, entry in sorted(zoo.REGISTRY.items()):
        for _ in range(3):
            params = _draw_params(entry, rng)
            model = entry.build(params)[0]
            spec = spectrum(model)
            s = spec.superoperator
            values = spec.values
            snorm = norm2(s)
            checks = {
                "non-positive real part": values.real.max() <= 1e-9 * snorm,
                "conjugate closed": all(np.min(np.abs(values - np.conj(z))) <= 1e-8 * max(1.0, snorm) for z in values),
                "steady mode": bool(spec.of_class(ModeClass.STEADY)),
                "biorthonormal": spec.biorthogonality_residual <= 1e-7,
            }
            # step so that dt * spectral radius ~ 0.015, capped at 20000 steps
            radius = float(np.abs(values).max())
            n_steps = 20 * max(1, int(np.ceil(radius / (0.015 * 20))))
            t_end = 1.0 if n_steps <= 20000 else 20000 * 0.015 / radius
            n_steps = min(n_steps, 20000)
            rho0 = _random_state(rng, model.dim)
            traj = evolve_rk4(model, rho0, t_end, t_end / n_steps, record_every=n_steps // 20)
            expanded = evolve_expansion(spec, rho0, traj.times)
            checks["rk4 trace"] = traj.trace_drift <= 1e-8
            checks["expansion vs rk4"] = max(
                np.linalg.norm(a - b.matrix) for a, b in zip(traj.states, expanded)
            ) <= 1e-6
            failures += [f"{name} {params}: {k}" for k, ok in checks.items() if not ok]
    assert not failures, "\n".join(failures)


def test_criterion_9_discover_partition():
    model, _ = zoo.xxx_collective()
    bare = LindbladModel(
        np.array(model.hamiltonian), [JumpChannel(np.array(c.operator), c.rate) for c in model.channels]
    )
    part = discover_partition(bare, trials=20)
    assert part is not None
    assert part.block_sizes == (2, 2, 4)
    assert verify_block_form(bare, part).structured
