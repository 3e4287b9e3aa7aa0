"""Characteristic operator: three routes, sweeps, vacuum expectations,
perturbation series, and the covariance/invariance properties."""

import numpy as np
import pytest

from slhkit import (
    FrequencyGrid,
    ResolventSingular,
    SLHModel,
    char_op,
    char_op_allpass,
    char_op_stratonovich,
    dagger,
    gauge,
    identity,
    inverse,
    ito_to_stratonovich,
    k_operator,
    kron,
    max_abs,
    pauli,
    perturbation_series,
    rotate,
    coefficients_from_parts,
    sweep,
    transfer_function,
    unitarity_check,
    vacuum_expectation_char,
)
from slhkit import zoo
from conftest import random_model, random_unitary


def test_char_op_lossless_is_constant_scattering(rng):
    model = zoo.build("lossless", dim=3, n_inputs=2, phase=0.7, h_scale=2.0)
    for s in (0.5, 2.0 + 1j, 10.0 - 3j):
        assert max_abs(char_op(model, s).data - model.S) <= 1e-14


def test_char_op_thermal_qubit_point_value():
    model = zoo.build("thermal_qubit", gamma=1.0, n=0.0, omega=0.0)
    T = char_op(model, 1.0).data
    assert max_abs(T - np.diag([1.0, 1.0 / 3.0])) <= 1e-14


def test_char_op_detuned_two_level_displayed_resolvent():
    # independent evaluation of the displayed 2x2 resolvent product at k = 1
    g, k_, d, b, w0 = 1.1, 0.6, 2.0, 0.8 - 0.3j, 0.9
    fam = zoo.build("detuned_two_level", gamma=g, kappa=k_, delta=d,
                    beta=b, omega0=w0)
    from slhkit import assemble_k
    model = assemble_k(fam, 1.0)
    s = 0.7 + 0.25j
    L = np.array([[np.sqrt(g), 0], [np.sqrt(k_), -np.sqrt(g)]], dtype=complex)
    M = np.array([
        [s + 0.5 * (g + k_) + 1j * d + 1j * w0, -0.5 * np.sqrt(k_ * g) + 1j * b],
        [-0.5 * np.sqrt(k_ * g) + 1j * np.conj(b), s + 0.5 * g + 1j * w0],
    ])
    expected = identity(2) - L @ inverse(M) @ dagger(L)
    assert max_abs(char_op(model, s).data - expected) <= 1e-12


def test_char_op_raises_on_spectrum():
    model = zoo.build("lossless", dim=2, n_inputs=1, phase=0.0, h_scale=1.0)
    # K = -iH with H = diag(0, 1); s = -i is in the spectrum
    with pytest.raises(ResolventSingular):
        char_op(model, -1j)


def test_allpass_matches_direct_and_qnd_form(rng):
    model = random_model(rng, 2, 3)
    s = 0.8 + 0.4j
    assert max_abs(char_op_allpass(model, s).data - char_op(model, s).data) <= 1e-10

    # QND case [L, H] = 0: (s - LL*/2 + iH)(s + LL*/2 + iH)^-1 S
    g, w = 1.3, 0.7
    L = np.sqrt(g) * pauli("z")
    H = w * pauli("z")
    qnd = SLHModel(S=random_unitary(rng, 2), L=L, H=H)
    T = char_op_allpass(qnd, s).data
    num = s * identity(2) - 0.5 * L @ dagger(L) + 1j * H
    den = s * identity(2) + 0.5 * L @ dagger(L) + 1j * H
    assert max_abs(T - num @ inverse(den) @ qnd.S) <= 1e-12


def test_allpass_lossless_gives_scattering(rng):
    model = zoo.build("lossless", dim=2, n_inputs=2, phase=0.3)
    assert max_abs(char_op_allpass(model, 1.5).data - model.S) <= 1e-14


def test_stratonovich_zero_coefficients_give_identity():
    E = coefficients_from_parts(E00=np.zeros((2, 2)), El0=np.zeros((2, 2)),
                                Ell=np.zeros((2, 2)))
    assert max_abs(char_op_stratonovich(E, 0.9).data - identity(2)) == 0.0


def test_stratonovich_high_frequency_limit_is_cayley(rng):
    from slhkit import cayley
    model = random_model(rng, 1, 3)
    E = ito_to_stratonovich(model)
    T = char_op_stratonovich(E, 1e8).data
    assert max_abs(T - cayley(E.Ell)) <= 1e-6


def test_stratonovich_route_agrees_on_thermal_qubit():
    model = zoo.build("thermal_qubit", gamma=0.9, n=0.35, omega=1.2,
                      phi_plus=0.4, phi_minus=2.0)
    E = ito_to_stratonovich(model)
    for s in (0.5, 1.0 + 0.8j, 3.0 - 0.2j):
        assert max_abs(char_op_stratonovich(E, s).data
                       - char_op(model, s).data) <= 1e-9


def test_transfer_function_examples():
    A = np.array([[-0.5]], dtype=complex)
    B = np.array([[1.0, 0.0]], dtype=complex)
    C = np.zeros((2, 1), dtype=complex)
    D = np.diag([2.0, 3.0]).astype(complex)
    assert max_abs(transfer_function((A, B, C, D), 1.0) - D) == 0.0

    # single passive mode: T(s) = 1 - gamma / (s + gamma/2 + i delta)
    g, d = 1.4, 0.6
    A = np.array([[-(0.5 * g + 1j * d)]])
    B = np.array([[-np.sqrt(g)]])
    C = np.array([[np.sqrt(g)]])
    D = np.array([[1.0]])
    s = 0.8 + 0.1j
    want = 1.0 - g / (s + 0.5 * g + 1j * d)
    assert abs(transfer_function((A, B, C, D), s)[0, 0] - want) <= 1e-14
    assert abs(transfer_function((A, B, C, D), 1e9)[0, 0] - 1.0) <= 1e-8


def test_unitarity_on_axis_examples(rng):
    model = zoo.build("lossless", dim=2, n_inputs=1, phase=1.0, h_scale=0.0)
    ok, res = unitarity_check(model, 0.7, 1e-12)
    assert ok and res <= 1e-14

    thermal = zoo.build("thermal_qubit", gamma=1.0, n=0.5, omega=0.9)
    ok, res = unitarity_check(thermal, 0.37, 1e-10)
    assert ok

    model = random_model(rng, 3, 2)
    for omega in rng.uniform(-5, 5, size=50):
        ok, _ = unitarity_check(model, omega, 1e-9)
        assert ok


def test_vacuum_expectation_lossless_returns_scattering_scalars():
    model = zoo.build("lossless", dim=3, n_inputs=2, phase=0.4)
    V = vacuum_expectation_char(model, 1.0, dims=(3,))
    assert V.shape == (2, 2)
    assert max_abs(V - np.exp(0.4j) * identity(2)) <= 1e-14


def test_vacuum_expectation_matches_transfer_function():
    g, d, n_max = 1.0, 0.0, 6
    model = zoo.build("linear_passive", gamma=g, delta=d, n_max=n_max)
    Amat = np.array([[-(0.5 * g + 1j * d)]])
    Bmat = np.array([[-np.sqrt(g)]])
    Cmat = np.array([[np.sqrt(g)]])
    Dmat = np.array([[1.0]])
    s = 1.0
    vac = vacuum_expectation_char(model, s, dims=(n_max + 1,))
    assert abs(vac[0, 0] - transfer_function((Amat, Bmat, Cmat, Dmat), s)[0, 0]) <= 1e-8


def test_vacuum_expectation_partial_contraction_optomech():
    params = dict(gamma=1.0, delta=0.4, omega0=0.0, g=0.3,
                  n_max_cavity=3, n_max_mirror=4)
    model = zoo.build("optomech", **params)
    s = 0.9 + 0.2j
    dims = (params["n_max_cavity"] + 1, params["n_max_mirror"] + 1)
    mirror_op = vacuum_expectation_char(model, s, dims=dims, vacuum_modes=(0,))
    oracle = zoo.closed_form_char("optomech", params, s)
    assert max_abs(mirror_op - oracle) <= 1e-10


def test_perturbation_series_examples():
    model = zoo.build("thermal_qubit", gamma=1.0, n=0.2, omega=0.6)
    V = pauli("x")
    s = 1.0 + 0.3j

    T0 = perturbation_series(model, V, lam=0.0, order=5, s=s).data
    assert max_abs(T0 - char_op(model, s).data) <= 1e-14

    lam = 0.01
    exact = char_op(SLHModel(S=model.S, L=model.L, H=model.H + lam * V), s).data
    T8 = perturbation_series(model, V, lam=lam, order=8, s=s).data
    assert max_abs(T8 - exact) <= 1e-9

    # first-order term enters with +i lam L R0 V R0 L* S
    R0 = inverse(s * identity(2) - k_operator(model))
    first = (char_op(model, s).data
             + 1j * lam * model.L @ R0 @ V @ R0 @ dagger(model.L) @ model.S)
    T1 = perturbation_series(model, V, lam=lam, order=1, s=s).data
    assert max_abs(T1 - first) <= 1e-14


def test_sweep_thermal_qubit_clean_and_consistent():
    model = zoo.build("thermal_qubit", gamma=1.0, n=0.4, omega=0.8)
    grid = FrequencyGrid(axis="imaginary", points=np.linspace(0.1, 10, 50))
    direct = sweep(model, grid, method="direct")
    assert direct.n_failed == 0
    assert max(direct.unitarity_residuals) <= 1e-9

    allpass = sweep(model, grid, method="allpass")
    worst = max(
        max_abs(a.data - b.data)
        for a, b in zip(direct.values, allpass.values)
    )
    assert worst <= 1e-9


def test_sweep_single_point_and_failure_capture():
    model = zoo.build("thermal_qubit")
    grid = FrequencyGrid(axis="real", points=np.array([1.0]))
    res = sweep(model, grid)
    assert len(res.values) == 1 and res.n_failed == 0

    # lossless with H = diag(0, 1): omega = -1 hits the spectrum of K = -iH
    lossy = zoo.build("lossless", dim=2, n_inputs=1, h_scale=1.0)
    grid = FrequencyGrid(axis="imaginary", points=np.array([-1.0, 0.5]))
    res = sweep(lossy, grid)
    assert res.n_failed == 1
    assert res.values[0] is None and res.values[1] is not None


def test_rotation_covariance_and_gauge_invariance(rng):
    model = random_model(rng, 2, 3)
    V = random_unitary(rng, 3)
    s = 0.6 + 0.9j
    T = char_op(model, s).data
    Vn = kron(identity(2), V)
    T_rot = char_op(rotate(model, V), s).data
    assert max_abs(T_rot - dagger(Vn) @ T @ Vn) <= 1e-10
    T_gauge = char_op(gauge(model, V), s).data
    assert max_abs(T_gauge - T) <= 1e-10


def test_high_frequency_limit_returns_scattering(rng):
    model = random_model(rng, 2, 3)
    s = 1e6
    bound = 10 * max_abs(model.L) ** 2 / s
    assert max_abs(char_op(model, s).data - model.S) <= bound


def test_cascade_characteristic_operator_not_multiplicative():
    # pinned witness pair: characteristic operators do not tensor-multiply
    B = zoo.build("thermal_qubit", gamma=1.0, n=0.0, omega=0.5)
    A = zoo.build("thermal_qubit", gamma=0.6, n=0.3, omega=-0.2)
    from slhkit import series_product
    s = 1.0
    T_casc = char_op(series_product(B, A), s).data
    T_tensor = kron(char_op(B, s).data, char_op(A, s).data)
    assert max_abs(T_casc - T_tensor) > 0.01
