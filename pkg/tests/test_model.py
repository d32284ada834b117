import json

import numpy as np
import pytest

from lindspect import zoo
from lindspect.errors import DimensionMismatch, InvalidModel, InvalidState
from lindspect.model import (
    DensityMatrix,
    JumpChannel,
    LindbladModel,
    dissipator,
    fidelity,
    load_model,
    master_rhs,
    model_from_dict,
    model_to_dict,
    save_model,
)

from conftest import random_density, random_hermitian, random_matrix

SM = np.array([[0, 1], [0, 0]], dtype=complex)
DOWN, UP = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])


def ket(d, *levels):
    v = np.zeros(d, dtype=complex)
    v[list(levels)] = 1
    return v / np.linalg.norm(v)


def test_channel_rejects_negative_rate():
    with pytest.raises(InvalidModel):
        JumpChannel(np.eye(2), -1.0)


def test_channel_operator_is_read_only():
    c = JumpChannel(np.eye(2), 1.0)
    with pytest.raises(ValueError):
        c.operator[0, 0] = 5


def test_model_rejects_non_hermitian_hamiltonian():
    with pytest.raises(InvalidModel):
        LindbladModel([[0, 1], [0, 0]])


def test_model_rejects_mismatched_channel():
    with pytest.raises(InvalidModel):
        LindbladModel(np.eye(2), [JumpChannel(np.eye(3))])


def test_model_symmetrizes_tiny_asymmetry():
    h = np.array([[1.0, 1e-13], [0.0, -1.0]])
    m = LindbladModel(h)
    np.testing.assert_array_equal(m.hamiltonian, m.hamiltonian.conj().T)


def test_density_matrix_validation():
    with pytest.raises(InvalidState):
        DensityMatrix(np.diag([0.5, 0.6]))
    with pytest.raises(InvalidState):
        DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(InvalidState):
        DensityMatrix([[0.5, 0.5], [0.0, 0.5]])
    rho = DensityMatrix(np.diag([1.0 + 1e-10, -1e-10]))
    assert np.all(np.linalg.eigvalsh(rho.matrix) >= 0)
    assert abs(np.trace(rho.matrix) - 1) < 1e-15


def test_dissipator_decay_of_excited_state():
    out = dissipator(JumpChannel(SM), UP)
    np.testing.assert_allclose(out, DOWN - UP, atol=1e-15)


def test_dissipator_vanishes_on_dark_fock_state():
    n = np.arange(3.0)
    out = dissipator(JumpChannel(np.diag((n - 1) ** 2)), np.outer(ket(3, 0), ket(3, 0)))
    np.testing.assert_array_equal(out, np.zeros((3, 3)))


def test_dissipator_is_traceless(rng):
    rho = random_density(rng, 4)
    out = dissipator(random_matrix(rng, 4), rho)
    assert abs(np.trace(out)) <= 1e-12 * max(1.0, np.linalg.norm(out))


def test_dissipator_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        dissipator(JumpChannel(SM), np.eye(3) / 3)


def test_master_rhs_example0():
    model = zoo.dephasing_oscillator(2.0, 1.0, 4)
    np.testing.assert_allclose(master_rhs(model, np.outer(ket(4, 0), ket(4, 0))), 0, atol=1e-15)
    r02 = np.zeros((4, 4), dtype=complex)
    r02[0, 2] = 1
    np.testing.assert_allclose(master_rhs(model, r02), 4j * r02, atol=1e-14)


def test_master_rhs_trivial_model(rng):
    model = LindbladModel(np.zeros((3, 3)))
    np.testing.assert_array_equal(master_rhs(model, random_matrix(rng, 3)), 0)


def test_master_rhs_traceless_and_adjoint_symmetric(rng):
    model = LindbladModel(random_hermitian(rng, 3), [JumpChannel(random_matrix(rng, 3), 0.7)])
    x = random_matrix(rng, 3)
    out = master_rhs(model, x)
    assert abs(np.trace(out)) < 1e-12 * np.linalg.norm(out)
    np.testing.assert_allclose(master_rhs(model, x.conj().T), out.conj().T, atol=1e-12)


def test_fidelity_examples(rng):
    rho = random_density(rng, 3)
    assert abs(fidelity(rho, rho) - 1) < 1e-12
    assert fidelity(np.diag([1.0, 0, 0]), np.diag([0, 0, 1.0])) == 0.0


def test_fidelity_pure_states_overlap(rng):
    a, b = random_matrix(rng, 4, 1)[:, 0], random_matrix(rng, 4, 1)[:, 0]
    a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
    f = fidelity(np.outer(a, a.conj()), np.outer(b, b.conj()))
    assert abs(f - abs(np.vdot(a, b)) ** 2) < 1e-12


def test_fidelity_symmetric(rng):
    a, b = random_density(rng, 4), random_density(rng, 4, rank=2)
    assert abs(fidelity(a, b) - fidelity(b, a)) < 1e-9


def test_fidelity_example0_evolution():
    nu = 2.0
    for t in np.linspace(0, np.pi, 7):
        s0 = ket(4, 0, 2)
        st = (ket(4, 0) + np.exp(-2j * nu * t) * ket(4, 2)) / np.sqrt(2)
        f = fidelity(np.outer(s0, s0.conj()), np.outer(st, st.conj()))
        assert abs(f - np.cos(nu * t) ** 2) < 1e-12


def test_model_file_round_trip(tmp_path, rng):
    model = LindbladModel(random_hermitian(rng, 3), [JumpChannel(random_matrix(rng, 3), 0.25)])
    path = tmp_path / "m.json"
    save_model(model, path)
    back = load_model(path)
    np.testing.assert_array_equal(back.hamiltonian, model.hamiltonian)
    np.testing.assert_array_equal(back.channels[0].operator, model.channels[0].operator)
    assert back.rates == [0.25]
    assert model_to_dict(back) == json.loads(path.read_text())


def test_model_file_builtin():
    m = model_from_dict({"builtin": "dephasing_oscillator", "params": {"d": 5}})
    assert m.dim == 5
    with pytest.raises(ValueError):
        model_from_dict({"builtin": "dephasing_oscillator", "hamiltonian": [[[0, 0]]]})
