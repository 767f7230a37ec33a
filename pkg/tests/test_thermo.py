import math

import mpmath
import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from qfermions import thermo
from qfermions.thermo import GasState

qs = st.floats(min_value=0.05, max_value=1.0)
temps = st.floats(min_value=0.05, max_value=20.0)
log_ys = st.floats(min_value=-20.0, max_value=60.0)


def fd_oracle(nu, log_y):
    # f_nu(y) = -Li_nu(-y)
    with mpmath.workdps(30):
        return float(-mpmath.polylog(nu, -mpmath.exp(log_y)).real)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([0.5, 1.5, 2.5, 3.5]), log_ys)
def test_f_nu_matches_polylog(nu, log_y):
    want = fd_oracle(nu, log_y)
    got = thermo.f_nu(nu, log_y=log_y)
    assert got.value == pytest.approx(want, rel=1e-12, abs=2e-14)


@pytest.mark.parametrize("nu", [1.5, 2.5])
@pytest.mark.parametrize("y", [0.01, 0.1, 0.5, 0.9, 1.0])
def test_series_and_integral_agree(nu, y):
    a = thermo.f_nu(nu, y, method="series")
    b = thermo.f_nu(nu, y, method="integral")
    assert abs(a.value - b.value) < 1e-10
    assert a.method == "series" and b.method == "integral"


def test_f_nu_huge_argument_does_not_overflow():
    r = thermo.f_nu(1.5, log_y=1e4)
    assert r.value == pytest.approx(thermo.sommerfeld_f32(1e4), rel=1e-8)


@pytest.mark.parametrize("nu", [0.5, 1.5, 2.5])
@pytest.mark.parametrize("log_y", [0.0, -1e-3, -1e-6])
def test_accelerated_series_near_unit_argument(nu, log_y):
    r = thermo.f_nu(nu, log_y=log_y, method="series")
    assert r.value == pytest.approx(fd_oracle(nu, log_y), rel=1e-14)
    assert r.terms_used < 100


def test_f_nu_series_rejects_large_y():
    with pytest.raises((ValueError, thermo.ConvergenceError)):
        thermo.f_nu(1.5, 3.0, method="series")


def test_f_nu_argument_validation():
    with pytest.raises(TypeError):
        thermo.f_nu(1.5)
    with pytest.raises(TypeError):
        thermo.f_nu(1.5, 0.5, log_y=0.1)
    with pytest.raises(ValueError):
        thermo.f_nu(-1.0, 0.5)


@given(qs, temps, st.floats(min_value=1e-3, max_value=50.0))
def test_results_depend_on_z_only_through_y(q, T, z):
    s = GasState(q, T, z)
    s1 = GasState(1.0, T, log_z=s.log_y)
    assert thermo.pressure(s) == thermo.pressure(s1)
    assert thermo.density(s) == thermo.density(s1)
    shift = thermo.entropy_per_particle(s) - thermo.entropy_per_particle(s1)
    assert shift == pytest.approx(math.log(1 / q), abs=1e-10)


@given(qs, temps, st.floats(min_value=1e-3, max_value=50.0), st.floats(0.1, 10.0))
def test_energy_pressure_relation(q, T, z, V):
    s = GasState(q, T, z)
    assert thermo.internal_energy(s, V) == 1.5 * thermo.pressure(s) * V


@settings(deadline=None)
@given(qs, temps, st.floats(min_value=1e-2, max_value=20.0))
def test_density_is_log_derivative_of_pressure(q, T, z):
    h = 1e-5
    s = GasState(q, T, z)
    p = lambda lz: thermo.pressure(GasState(q, T, log_z=lz)) / T
    fd = (p(s.log_z + h) - p(s.log_z - h)) / (2 * h)
    assert fd == pytest.approx(thermo.density(s), rel=1e-7)


def test_ground_mode_term():
    s = GasState(0.5, 1.0, 0.4)
    extra = thermo.grand_potential(s, include_ground_mode=True) - thermo.grand_potential(s)
    assert extra == pytest.approx(-s.T / s.lambda3 * math.log1p(s.y), rel=1e-14)


@given(qs, st.floats(-30, 30))
def test_occupations_consistent(q, x):
    s = GasState(q, 1.0, 1.0)
    g = thermo.occupation_paper(s, x)
    n = thermo.occupation_arcsin(s, x)
    assert math.sin(math.pi * n / 2) ** 2 == pytest.approx(g, abs=1e-12)
    assert 0.0 <= g <= 1.0 and 0.0 <= n <= 1.0


def test_occupation_at_mu():
    s = GasState(0.5, 1.0, 1.0)
    assert thermo.occupation_paper(s, 0.0) == pytest.approx(2 / 3, abs=1e-15)


def test_series_oracle_against_closed_arcsin():
    g = 0.04
    exact = 2 / math.pi * math.asin(math.sqrt(g))
    assert abs(thermo.occupation_series_oracle(g, 3) - exact) < 5e-6
    assert abs(thermo.occupation_series_oracle(g, 12) - exact) < 1e-14
    with pytest.raises(ValueError):
        thermo.occupation_series_oracle(1.2, 3)


def test_log_partition_matches_direct_sum():
    s = GasState(0.7, 2.0, 0.3)
    energies = [0.0, 0.5, 1.0, 4.0]
    direct = sum(math.log(1 + 0.3 / 0.7 * math.exp(-E / 2.0)) for E in energies)
    assert thermo.log_partition(s, energies) == pytest.approx(direct, rel=1e-14)
    assert thermo.log_partition(s, []) == 0.0


@settings(max_examples=40, deadline=None)
@given(qs, st.floats(min_value=1e-8, max_value=1e4))
def test_fugacity_solver_roundtrip(q, target):
    z = thermo.solve_fugacity(target, q)
    assume(math.isfinite(z))
    assert thermo.density(GasState(q, 1.0, z)) * thermo.thermal_lambda3(1.0) == pytest.approx(target, rel=1e-10)


def test_solver_rejects_nonpositive_density():
    with pytest.raises((ValueError, thermo.SolverError)):
        thermo.solve_log_y(0.0)


def test_virial_exact_values():
    a = thermo.virial_coefficients(3, 1, exact=True)
    assert a[0] == 1
    assert sympy.simplify(a[1] - sympy.Integer(2) ** sympy.Rational(-5, 2)) == 0
    assert sympy.simplify(a[2] - (sympy.Rational(1, 8) - 2 * sympy.Integer(3) ** sympy.Rational(-5, 2))) == 0


@given(qs)
def test_virial_q_independent(q):
    ref = thermo.virial_coefficients(4, 1.0)
    assert thermo.virial_coefficients(4, q) == pytest.approx(ref, abs=1e-8)


def test_virial_order_validation():
    with pytest.raises(ValueError):
        thermo.virial_coefficients(5, 0.5)


def test_virial_reproduces_equation_of_state_at_low_density():
    q, z = 0.6, 0.02
    s = GasState(q, 1.0, z)
    rho = thermo.density(s) * s.lambda3
    a = thermo.virial_coefficients(4, q)
    series = sum(c * rho**k for k, c in enumerate(a))
    assert thermo.pressure(s) / (thermo.density(s) * s.T) == pytest.approx(series, abs=1e-7)


@pytest.mark.parametrize("q", [0.5, 1.0])
def test_chemical_potential_degenerate(q):
    T = 0.02
    exact = thermo.chemical_potential(T, 1.0, q)
    som = thermo.chemical_potential(T, 1.0, q, method="sommerfeld2")
    assert exact == pytest.approx(som, rel=1e-5)
    # the leading low-temperature shift is -T ln(1/q)
    assert thermo.chemical_potential(1e-4, 1.0, q) - 1.0 == pytest.approx(-1e-4 * math.log(1 / q), abs=1e-8)


@given(st.floats(0.01, 5.0), qs)
def test_shifted_chemical_potential_q_independent(T, q):
    mu1 = thermo.chemical_potential(T, 1.0, 1.0)
    muq = thermo.chemical_potential(T, 1.0, q) + T * math.log(1 / q)
    assert muq == pytest.approx(mu1, abs=1e-10)


def test_chemical_potential_validation():
    with pytest.raises(ValueError):
        thermo.chemical_potential(0.5, 1.0, 0.5, method="sommerfeld2")
    with pytest.raises(ValueError):
        thermo.chemical_potential(0.1, 1.0, 0.5, method="bogus")
    with pytest.raises(ValueError):
        thermo.chemical_potential(-1.0, 1.0, 0.5)


def test_gas_state_construction():
    with pytest.raises(TypeError):
        GasState(0.5, 1.0)
    with pytest.raises(TypeError):
        GasState(0.5, 1.0, 0.3, log_z=-1.0)
    with pytest.raises(ValueError):
        GasState(0.5, -1.0, 0.3)
    s = GasState.from_mu(0.5, 2.0, 1.0)
    assert s.z == pytest.approx(math.exp(0.5), rel=1e-15)
    assert s.y == pytest.approx(2 * math.exp(0.5), rel=1e-15)
