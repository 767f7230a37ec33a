"""Runtime invariant checks behind ``qfermions selftest``.

Each check returns ``(passed, detail)``. Float tolerances are multiplied by
``tol_scale`` so a caller can force failures; exact checks ignore it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import fock, jackson, qcore, thermo
from .fock import AlgebraKind
from .jackson import DerivKind, PolyFunc
from .qcore import Q, LaurentPoly, basic_boson, basic_fermion

RATIONAL_QS = (Fraction(1, 3), Fraction(1, 2), Fraction(9, 10))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _recurrence(_):
    for n in range(31):
        if basic_fermion(n + 1) != Q**-n - Q * basic_fermion(n):
            return False, f"fails at n={n}"
    return True, "n=0..30 exact"


def _skew_symmetry(_):
    for n in range(31):
        sign = 1 if n % 2 else -1
        if basic_fermion(n).invert_variable() != sign * basic_fermion(n):
            return False, f"fails at n={n}"
    return True, "n=0..30 exact"


def _boson_symmetry(_):
    ok = all(basic_boson(n).invert_variable() == basic_boson(n) for n in range(31))
    return ok, "n=0..30 exact"


def _fermi_limit(tol):
    # even n approach 0 linearly, odd n approach 1 quadratically
    eps = [Fraction(1, 10**k) for k in (3, 4, 5)]
    lowest = math.inf
    for n in range(21):
        d = [abs(basic_fermion(n).evaluate(1 - e) - qcore.fermi_limit_basic(n)) for e in eps]
        if max(d) == 0:
            continue
        slope = np.polyfit(np.log([float(e) for e in eps]), np.log([float(x) for x in d]), 1)[0]
        lowest = min(lowest, slope)
    ok = lowest >= 1 - 0.05 * tol and basic_fermion(2).evaluate(1) == 0
    return ok, f"slowest order {lowest:.3f}"


def _closed_forms(_):
    A = fock.solve_recurrence("A", 31).values
    B = fock.solve_recurrence("B", 31).values
    for n in range(31):
        beta = LaurentPoly.monomial(-n + 1) if n % 2 else LaurentPoly.zero()
        if A[n] != beta or B[n] != basic_fermion(n):
            return False, f"fails at n={n}"
    return True, "n<=30 exact"


def _exclusion(_):
    if not fock.build_state_norm("A", 2).is_zero():
        return False, "(a†)^2|0> has non-zero norm"
    for n in range(2, 11):
        if fock.build_state_norm("B", n).evaluate(1) != 0:
            return False, f"B state {n} survives at q=1"
        if not all(fock.build_state_norm("B", n).evaluate(q) > 0 for q in RATIONAL_QS):
            return False, f"B state {n} vanishes for q<1"
    return True, "A closes at dim 2; B exclusion only at q=1"


def _exact_residuals(_):
    for dim in range(1, 17):
        for name, M in fock.algebra_relations(fock.build_rep("B", dim)).items():
            if any(not e.is_zero() for row in M for e in row):
                return False, f"B dim={dim} relation {name}"
    for dim in (1, 2):
        for name, M in fock.algebra_relations(fock.build_rep("A", dim)).items():
            if any(not e.is_zero() for row in M for e in row):
                return False, f"A dim={dim} relation {name}"
    return True, "dims 1..16 exact"


def _float_residuals(tol):
    worst = 0.0
    for q in (0.3, 0.5, 0.7, 0.9, 1.0):
        for dim in range(1, 17):
            worst = max(worst, fock.algebra_residual(fock.build_rep("B", dim), q, relative=True))
        worst = max(worst, fock.algebra_residual(fock.build_rep("A", 2), q))
    return worst < 1e-12 * tol, f"max relative residual {worst:.2e}"


def _trace_q_independent(_):
    diffs = [abs(fock.exact_trace_occupation(0.3, x) - fock.exact_trace_occupation(1.0, x)) for x in (-3, 0, 1, 7)]
    return max(diffs) == 0, "exact"


def _jd_monomials(_):
    for q in RATIONAL_QS:
        for n in range(21):
            f = PolyFunc.monomial(n, Fraction(1))
            fd = jackson.jd_apply("fermionic", f, q)
            bd = jackson.jd_apply("bosonic", f, q)
            want_f = PolyFunc.monomial(n - 1, basic_fermion(n).evaluate(q)) if n else PolyFunc((0,))
            want_b = PolyFunc.monomial(n - 1, basic_boson(n).evaluate(q)) if n else PolyFunc((0,))
            if fd != want_f or bd != want_b:
                return False, f"n={n}, q={q}"
    return True, "n<=20 exact"


def _jd_linearity(_):
    rng = np.random.default_rng(7)
    for _ in range(20):
        f = PolyFunc(tuple(Fraction(int(c)) for c in rng.integers(-9, 10, 6)))
        g = PolyFunc(tuple(Fraction(int(c)) for c in rng.integers(-9, 10, 4)))
        a, b = Fraction(int(rng.integers(-5, 6))), Fraction(int(rng.integers(-5, 6)))
        q = RATIONAL_QS[int(rng.integers(0, 3))]
        for kind in DerivKind:
            lhs = jackson.jd_apply(kind, f.scale(a) + g.scale(b), q)
            rhs = jackson.jd_apply(kind, f, q).scale(a) + jackson.jd_apply(kind, g, q).scale(b)
            if lhs != rhs:
                return False, f"kind={kind.value}"
    return True, "exact on 20 random pairs"


def _jd_pointwise(tol):
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(100):
        f = PolyFunc(tuple(rng.uniform(-2, 2, int(rng.integers(1, 7)))))
        x = float(rng.uniform(0.2, 2.0) * rng.choice([-1, 1]))
        q = float(rng.uniform(0.2, 0.95))
        for kind in ("fermionic", "bosonic"):
            coef = jackson.jd_apply(kind, f, q)(x)
            point = jackson.jd_apply_pointwise(kind, f, x, q)
            worst = max(worst, abs(coef - point) / max(abs(point), 1.0))
    return worst < 1e-10 * tol, f"max relative diff {worst:.2e}"


def _shift_identity(_):
    f = PolyFunc((Fraction(3), Fraction(-1), Fraction(2), Fraction(5)))
    for q in RATIONAL_QS:
        if jackson.shift_op("+", f.times_x(), q) != jackson.shift_op("+", f, q).times_x().scale(q):
            return False, f"q={q}"
    return True, "exact"


def _y_dependence(_):
    rng = np.random.default_rng(3)
    for _ in range(50):
        q = float(rng.uniform(0.1, 1.0))
        z = float(rng.uniform(0.01, 5.0))
        T = float(rng.uniform(0.1, 10.0))
        s = thermo.GasState(q, T, z)
        s1 = thermo.GasState(1.0, T, log_z=s.log_y)
        if thermo.pressure(s) != thermo.pressure(s1) or thermo.density(s) != thermo.density(s1):
            return False, f"q={q}, z={z}"
        # S/Nk = 5/2 f52/f32 - ln z: only the ln z term sees q directly
        shift = thermo.entropy_per_particle(s) - thermo.entropy_per_particle(s1)
        if abs(shift - math.log(1 / q)) > 1e-12:
            return False, f"entropy q={q}, z={z}"
    return True, "50 random points; P, n exact, S shift ln(1/q)"


def _series_vs_integral(tol):
    worst = 0.0
    for nu in (1.5, 2.5):
        for y in (0.1, 0.5, 0.9):
            a = thermo.f_nu(nu, y, method="series").value
            b = thermo.f_nu(nu, y, method="integral").value
            worst = max(worst, abs(a - b))
    return worst < 1e-10 * tol, f"max diff {worst:.2e}"


def _partition_derivative(tol):
    worst = 0.0
    energies = [0.3, 1.1, 2.0]
    for q in (0.4, 1.0):
        z, h = 0.8, 1e-5
        lnz = lambda zz: thermo.log_partition(thermo.GasState(q, 1.0, zz), energies)
        n_fd = z * (lnz(z * (1 + h)) - lnz(z * (1 - h))) / (2 * z * h)
        s = thermo.GasState(q, 1.0, z)
        n = sum(thermo.occupation_paper(s, E - s.mu) for E in energies)
        worst = max(worst, abs(n_fd - n) / n)
    return worst < 1e-7 * tol, f"max relative diff {worst:.2e}"


def _occupation_consistency(tol):
    worst = 0.0
    for q in (0.3, 0.5, 1.0):
        s = thermo.GasState(q, 1.0, 1.0)
        for x in np.linspace(-8, 8, 33):
            g = thermo.occupation_paper(s, x)
            n = thermo.occupation_arcsin(s, x)
            worst = max(worst, abs(math.sin(math.pi * n / 2) ** 2 - g))
    return worst < 1e-12 * tol, f"max diff {worst:.2e}"


def _virial_independence(tol):
    ref = thermo.virial_coefficients(3, 1.0)
    worst = max(
        abs(a - b) for q in (0.3, 0.7) for a, b in zip(thermo.virial_coefficients(3, q), ref)
    )
    return worst < 1e-8 * tol, f"max deviation {worst:.2e}"


def _step_limit(tol):
    E_F, T = 1.0, 1e-3
    worst = 0.0
    for q in (0.5, 1.0):
        mu = thermo.chemical_potential(T, E_F, q)
        s = thermo.GasState.from_mu(q, T, mu)
        for E in np.linspace(0.0, 2.0, 2001):
            if abs(E - E_F) <= 5 * T:
                continue
            step = 1.0 if E < E_F else 0.0
            worst = max(worst, abs(thermo.occupation_paper(s, E - mu) - step))
    return worst < 1e-2 * tol, f"max deviation outside window {worst:.2e}"


CHECKS: list[tuple[str, Callable]] = [
    ("qcore.recurrence", _recurrence),
    ("qcore.skew_symmetry", _skew_symmetry),
    ("qcore.boson_symmetry", _boson_symmetry),
    ("qcore.fermi_limit", _fermi_limit),
    ("fock.closed_forms", _closed_forms),
    ("fock.exclusion", _exclusion),
    ("fock.exact_residuals", _exact_residuals),
    ("fock.float_residuals", _float_residuals),
    ("fock.trace_q_independent", _trace_q_independent),
    ("jackson.monomial_rules", _jd_monomials),
    ("jackson.linearity", _jd_linearity),
    ("jackson.pointwise_consistency", _jd_pointwise),
    ("jackson.shift_identity", _shift_identity),
    ("thermo.y_dependence", _y_dependence),
    ("thermo.series_vs_integral", _series_vs_integral),
    ("thermo.partition_derivative", _partition_derivative),
    ("thermo.occupation_consistency", _occupation_consistency),
    ("thermo.virial_q_independence", _virial_independence),
    ("thermo.step_limit", _step_limit),
]


def run(tol_scale: float = 1.0) -> list[CheckResult]:
    results = []
    for name, check in CHECKS:
        t0 = time.perf_counter()
        try:
            passed, detail = check(tol_scale)
        except Exception as exc:  # a crashing check is a failed check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - t0))
    return results
