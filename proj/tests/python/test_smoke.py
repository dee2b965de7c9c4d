"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import pmns


@pytest.fixture(scope="module")
def lattice():
    return pmns.FrequencyLattice(2, 64)


@pytest.fixture(scope="module")
def window():
    return pmns.build_window()


def test_lattice_and_field_round_trip(lattice):
    coeffs = np.zeros((64, 64), dtype=complex)
    coeffs[1, 0] = 1.0 + 0.5j
    field = pmns.field_from_array(lattice, coeffs)
    assert field.l2_norm() == pytest.approx(abs(1.0 + 0.5j))
    back = field.to_array()
    assert back[1, 0] == 1.0 + 0.5j
    assert np.count_nonzero(back) == 1


def test_heat_semigroup_damps(lattice):
    coeffs = np.zeros((64, 64), dtype=complex)
    coeffs[1, 0] = 1.0
    field = pmns.field_from_array(lattice, coeffs)
    out = pmns.heat_semigroup(field, 0.25)
    expected = math.exp(-0.25 * (2 * math.pi) ** 2)
    assert out.to_array()[1, 0].real == pytest.approx(expected, rel=1e-12)


def test_window_values(window):
    assert window.scaling_symbol(0.0) == 1.0
    assert window.annulus_symbol(math.pi) == pytest.approx(math.sqrt(0.5))


def test_parameter_index():
    idx = pmns.parameter_index(0.2, 5)
    assert idx.level == 2
    clamped = pmns.parameter_index(4.0, 5)
    assert clamped.raw_level == -1
    assert clamped.truncated


def test_analyze_parseval(lattice, window):
    field = pmns.random_field(lattice, 42, 3, True)
    coeffs = pmns.analyze(field, window, 0, 3)
    energy = field.l2_norm() ** 2
    assert coeffs.total_energy() == pytest.approx(energy, rel=1e-10)
    back = pmns.synthesize(coeffs, window, lattice)
    diff = np.abs(back.to_array() - field.to_array()).max()
    assert diff < 1e-10 * field.max_abs()


def test_besov_single_atom(lattice, window):
    atom = pmns.atom_spectrum(window, 1, 2, [0, 0], lattice)
    coeffs = pmns.analyze(atom.spectrum, window, 0, 3)
    # Critical index with n = 2, p = 4: a unit coefficient has unit norm.
    assert pmns.besov_norm(coeffs, 2.0 / 4.0 - 1.0, 4.0, 4.0) == pytest.approx(
        1.0, rel=1e-10
    )


def test_leray_divergence(lattice):
    comps = [pmns.random_field(lattice, seed, 2, True) for seed in (1, 2)]
    projected = pmns.leray_project(comps)
    assert pmns.divergence_ratio(projected) <= 1e-10


def test_picard_solve_smoke(lattice, window):
    comps = pmns.initial_data_preset("single-atom", window, lattice, 1e-3, 4.0, 1, 1)
    state = pmns.picard_solve_dict(
        comps, window, p=4.0, m=1.0, shell_lo=0, shell_hi=2,
        samples_per_shell=8, max_iterations=8,
    )
    assert state["status"] == "converged"
    assert state["residual"] < 1e-4
    assert all(r < 0.5 for r in state["ratios"])


def test_basis_suite_dict():
    report = pmns.run_basis_suite_dict(2, 32, 1, 20)
    assert report["pass"] is True
    names = {check["name"] for check in report["checks"]}
    assert "gram-deviation" in names
