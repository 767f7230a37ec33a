"""Grand-canonical thermostatistics of the exclusion-obeying q-fermion gas.

Reduced units throughout: ``k = h = m = 1``, so ``beta = 1/T`` and the
thermal wavelength cubed is ``lambda^3 = (2 pi T)^(-3/2)`` unless given.
Every bulk quantity depends on ``(q, z)`` only through ``y = z / q``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate, optimize, special

from . import powerseries
from .qcore import Deformation, as_q

__all__ = [
    "GasState",
    "SeriesResult",
    "ConvergenceError",
    "SolverError",
    "thermal_lambda3",
    "f_nu",
    "occupation_paper",
    "occupation_arcsin",
    "occupation_series_oracle",
    "log_partition",
    "grand_potential",
    "pressure",
    "density",
    "solve_fugacity",
    "solve_log_y",
    "virial_coefficients",
    "internal_energy",
    "entropy_per_particle",
    "chemical_potential",
    "sommerfeld_f32",
    "fermi_energy_target",
]


class ConvergenceError(RuntimeError):
    """Tolerance not reached; ``best`` holds the last estimate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class SolverError(RuntimeError):
    pass


def thermal_lambda3(T: float) -> float:
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")
    return (2.0 * math.pi * T) ** -1.5


@dataclass(frozen=True, init=False)
class GasState:
    """State point ``(q, T, z, lambda^3)``.

    The fugacity is stored as ``log_z``; pass either ``z`` or ``log_z``
    (deeply degenerate states have ``z`` beyond float range).
    ``lambda3`` defaults to ``(2 pi T)^(-3/2)``.
    """

    q: Deformation
    T: float
    log_z: float
    lambda3: float

    def __init__(self, q, T: float, z: float | None = None, lambda3: float | None = None, *, log_z: float | None = None):
        if not T > 0:
            raise ValueError(f"temperature must be positive, got {T}")
        if (z is None) == (log_z is None):
            raise TypeError("pass exactly one of z and log_z")
        if z is not None:
            if not z > 0:
                raise ValueError(f"fugacity must be positive, got {z}")
            log_z = math.log(z)
        elif not math.isfinite(log_z):
            raise ValueError(f"log_z must be finite, got {log_z}")
        if lambda3 is None:
            lambda3 = thermal_lambda3(T)
        elif not lambda3 > 0:
            raise ValueError(f"lambda3 must be positive, got {lambda3}")
        object.__setattr__(self, "q", as_q(q))
        object.__setattr__(self, "T", float(T))
        object.__setattr__(self, "log_z", float(log_z))
        object.__setattr__(self, "lambda3", float(lambda3))

    @classmethod
    def from_mu(cls, q, T, mu, lambda3=None) -> "GasState":
        return cls(q, T, lambda3=lambda3, log_z=mu / T)

    @property
    def z(self) -> float:
        return math.exp(self.log_z)

    @property
    def beta(self) -> float:
        return 1.0 / self.T

    @property
    def mu(self) -> float:
        return self.T * self.log_z

    @property
    def log_y(self) -> float:
        """``ln(z/q)``, the argument every f_nu call sees."""
        return self.log_z - math.log(float(self.q.q))

    @property
    def y(self) -> float:
        return math.exp(self.log_y)


@dataclass(frozen=True)
class SeriesResult:
    value: float
    abs_err_estimate: float
    terms_used: int
    method: str

    def __float__(self):
        return float(self.value)


# ---------------------------------------------------------------------------
# generalized Fermi-Dirac functions
# ---------------------------------------------------------------------------

_LOG_SERIES_AUTO_MAX_Y = math.log(0.5)
_QUAD_MIN_EPSREL = 2e-14  # quadpack floor is 50 * machine eps


_DIRECT_MAX_TERMS = 2000


def _f_accelerated(nu, log_y, tol):
    # Cohen-Villegas-Zagier acceleration; valid because y^r / r^nu is a
    # totally monotone sequence for 0 < y <= 1. Relative error <= 2 / 5.83^n.
    n = max(4, math.ceil(math.log(2.0 / tol) / math.log(3.0 + math.sqrt(8.0))) + 1)
    d = (3.0 + math.sqrt(8.0)) ** n
    d = (d + 1.0 / d) / 2.0
    b, c, total = -1.0, -d, 0.0
    for k in range(n):
        c = b - c
        total += c * math.exp((k + 1) * log_y - nu * math.log(k + 1))
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0))
    value = total / d
    return SeriesResult(value, 2.0 * value / (3.0 + math.sqrt(8.0)) ** n, n, "series")


def _f_series(nu, log_y, tol, max_terms):
    if log_y > 0:
        raise ValueError(f"the alternating series diverges for y > 1 (ln y={log_y})")
    # direct summation needs r with y^r / r^nu <= tol; accelerate if that is large
    if log_y > math.log(tol) / _DIRECT_MAX_TERMS and nu * math.log(_DIRECT_MAX_TERMS) < -math.log(tol):
        return _f_accelerated(nu, log_y, tol)
    total = 0.0
    comp = 0.0  # Neumaier compensation
    for r in range(1, max_terms + 1):
        term = math.exp(r * log_y - nu * math.log(r))
        signed = term if r % 2 else -term
        t = total + signed
        comp += (total - t) + signed if abs(total) >= abs(signed) else (signed - t) + total
        total = t
        nxt = math.exp((r + 1) * log_y - nu * math.log(r + 1))
        if nxt <= tol:
            return SeriesResult(total + comp, nxt, r, "series")
    best = SeriesResult(total + comp, nxt, max_terms, "series")
    raise ConvergenceError(f"series for f_{nu}(exp({log_y})) did not reach tol={tol} in {max_terms} terms", best)


def _f_integral(nu, log_y, tol):
    # f_nu(y) = 1/Gamma(nu) int_0^inf t^(nu-1) / (e^t / y + 1) dt, with t = u^2
    p = 2.0 * nu - 1.0

    def integrand(u):
        return 2.0 * u**p * special.expit(log_y - u * u)

    edge = max(log_y, 0.0)
    breaks = sorted({0.0, math.sqrt(max(edge - 36.0, 0.0)), math.sqrt(edge), math.sqrt(edge + 36.0)})
    total, err = 0.0, 0.0
    pieces = list(zip(breaks, breaks[1:])) + [(breaks[-1], math.inf)]
    for lo, hi in pieces:
        if hi <= lo:
            continue
        # quadpack's roundoff warning is superseded by the error check below
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, e = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=max(tol, _QUAD_MIN_EPSREL), limit=400)
        total += val
        err += e
    g = special.gamma(nu)
    value, err = total / g, err / g
    if err > max(1e3 * tol * abs(value), 1e-300):
        raise ConvergenceError(f"quadrature for f_{nu}(exp({log_y})) reported error {err:.3g}", SeriesResult(value, err, 0, "integral"))
    return SeriesResult(value, err, len(pieces), "integral")


def f_nu(
    nu: float,
    y: float | None = None,
    tol: float = 1e-14,
    method: str = "auto",
    max_terms: int = 200_000,
    log_y: float | None = None,
) -> SeriesResult:
    """Fermi-Dirac function ``f_nu(y) = sum_r (-1)^(r+1) y^r / r^nu``.

    Parameters
    ----------
    nu : float
        Index, ``nu > 0`` (3/2 and 5/2 for the gas).
    y : float
        Shifted fugacity ``z / q``, must be positive.  Deeply degenerate
        arguments can be passed as ``log_y`` instead.
    tol : float
        Absolute tolerance of the series (alternating-series bound) or
        relative tolerance requested from the quadrature.
    method : {"auto", "series", "integral"}
        ``auto`` sums the series for ``y <= 0.5`` and integrates otherwise.
        The series is only defined for ``y <= 1``.

    Returns
    -------
    SeriesResult

    Raises
    ------
    ConvergenceError
        If the tolerance is not met; ``exc.best`` carries the estimate.
    """
    if not nu > 0:
        raise ValueError(f"nu must be positive, got {nu}")
    if (y is None) == (log_y is None):
        raise TypeError("pass exactly one of y and log_y")
    if log_y is None:
        if not y > 0:
            raise ValueError(f"f_nu requires y > 0, got {y}")
        log_y = math.log(y)
    log_y = float(log_y)
    if math.isnan(log_y):
        raise ValueError("log_y must not be NaN")
    if method == "auto":
        method = "series" if log_y <= _LOG_SERIES_AUTO_MAX_Y else "integral"
    if method == "series":
        return _f_series(nu, log_y, tol, max_terms)
    if method == "integral":
        return _f_integral(nu, log_y, tol)
    raise ValueError(f"unknown method {method!r}")


def _f(nu, y) -> float:
    return f_nu(nu, y).value


def _f_log(nu, log_y) -> float:
    return f_nu(nu, log_y=log_y).value


# ---------------------------------------------------------------------------
# distribution functions
# ---------------------------------------------------------------------------


def occupation_paper(state: GasState, E_minus_mu: float) -> float:
    """``n = q^-1 / (exp(beta (E - mu)) + q^-1)``, evaluated without overflow."""
    return float(special.expit(-(state.beta * E_minus_mu + math.log(float(state.q.q)))))


def occupation_arcsin(state: GasState, E_minus_mu: float) -> float:
    """``n = (2/pi) arcsin(sqrt(g))`` with ``g`` the simplified occupation."""
    g = occupation_paper(state, E_minus_mu)
    return 2.0 / math.pi * math.asin(math.sqrt(g))


def _arcsin_coefficients(order):
    # arcsin(s) = sum_k (2k)! / (4^k (k!)^2 (2k+1)) s^(2k+1)
    return [Fraction(math.comb(2 * k, k), 4**k * (2 * k + 1)) for k in range(order)]


def occupation_series_oracle(g: float, order: int) -> float:
    """Truncated Taylor series of ``(2/pi) arcsin(sqrt(g))``.

    ``order`` is the number of non-zero terms kept (powers ``g^(1/2)``,
    ``g^(3/2)``, ...).
    """
    if not 0 < g < 1:
        raise ValueError(f"g must lie in (0, 1), got {g}")
    if order < 1:
        raise ValueError("order must be at least 1")
    s = math.sqrt(g)
    total = math.fsum(float(c) * s ** (2 * k + 1) for k, c in enumerate(_arcsin_coefficients(order)))
    return 2.0 / math.pi * total


# ---------------------------------------------------------------------------
# partition function and equation of state
# ---------------------------------------------------------------------------


def log_partition(state: GasState, energies) -> float:
    """``ln Z = sum_i ln(1 + z/q exp(-beta E_i))`` over discrete modes."""
    E = np.asarray(energies, dtype=float)
    if E.size == 0:
        return 0.0
    return float(np.sum(np.logaddexp(0.0, state.log_y - state.beta * E)))


def grand_potential(state: GasState, include_ground_mode: bool = False) -> float:
    """Grand potential in the per-``lambda^3`` normalisation.

    ``-T/lambda^3 f_{5/2}(y)``, plus ``-T/lambda^3 ln(1 + y)`` for the
    separated zero-momentum mode when ``include_ground_mode`` is set.
    """
    pref = state.T / state.lambda3
    omega = -pref * _f_log(2.5, state.log_y)
    if include_ground_mode:
        omega -= pref * float(np.logaddexp(0.0, state.log_y))
    return omega


def pressure(state: GasState) -> float:
    return state.T / state.lambda3 * _f_log(2.5, state.log_y)


def density(state: GasState) -> float:
    """Number density ``n/V = f_{3/2}(y) / lambda^3``."""
    return _f_log(1.5, state.log_y) / state.lambda3


def internal_energy(state: GasState, V: float = 1.0) -> float:
    if not V > 0:
        raise ValueError("volume must be positive")
    # U = (3/2) P V, written that way so the identity holds bit for bit
    return 1.5 * pressure(state) * V


def entropy_per_particle(state: GasState) -> float:
    """``S/Nk = (5/2) f_{5/2}(y) / f_{3/2}(y) - ln z``."""
    ly = state.log_y
    return 2.5 * _f_log(2.5, ly) / _f_log(1.5, ly) - state.log_z


def solve_fugacity(target_nlambda3: float, q, max_expansions: int = 200) -> float:
    """Fugacity ``z`` with ``f_{3/2}(z/q) = target``."""
    q = as_q(q)
    return float(q.q) * math.exp(solve_log_y(target_nlambda3, max_expansions))


def solve_log_y(target_nlambda3: float, max_expansions: int = 200) -> float:
    """``ln y`` with ``f_{3/2}(y) = target``.

    Brent's method on ``t = ln y``; the bracket starts from
    ``f_{3/2}(y) < y`` (so ``t = ln target - 1`` is below the root) and the upper
    end is pushed out until it brackets.
    """
    if not target_nlambda3 > 0:
        raise ValueError(f"target must be positive, got {target_nlambda3}")

    def resid(t):
        return _f_log(1.5, t) - target_nlambda3

    lo = math.log(target_nlambda3) - 1.0
    degenerate = (0.75 * math.sqrt(math.pi) * target_nlambda3) ** (2.0 / 3.0)
    hi = max(lo, degenerate) + 1.0
    for _ in range(max_expansions):
        if resid(hi) > 0:
            break
        hi = hi + max(1.0, abs(hi))
    else:
        raise SolverError(f"could not bracket n lambda^3 = {target_nlambda3}")
    if resid(lo) >= 0:
        raise SolverError("lower bracket does not bound the root")
    t = optimize.brentq(resid, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    if abs(resid(t)) > 1e-10 * target_nlambda3:
        raise SolverError(f"relative residual above 1e-10 for target {target_nlambda3}")
    return t


def virial_coefficients(order: int, q, exact: bool = False) -> list:
    """Virial coefficients ``a_1 .. a_order`` of ``Pv/kT = sum a_k (lambda^3/v)^(k-1)``.

    Both ``P lambda^3 / T`` and ``n lambda^3`` are expanded in ``z`` (with
    the q-dependent coefficients ``(1/q)^r``), the density series is
    reverted and composed into the pressure series. With ``exact=True`` the
    arithmetic is done in sympy and returns exact algebraic numbers.
    """
    if isinstance(order, bool) or not isinstance(order, int) or not 2 <= order <= 4:
        raise ValueError(f"order must be an integer in 2..4, got {order!r}")
    q = as_q(q)
    n = order + 1
    if exact:
        import sympy

        qs = sympy.Rational(Fraction(q.q).numerator, Fraction(q.q).denominator)

        def coef(r, power):
            return sympy.Integer(-1) ** (r + 1) * qs ** (-r) * sympy.Integer(r) ** power

        half = sympy.Rational(1, 2)
        dens = [sympy.Integer(0)] + [coef(r, -3 * half) for r in range(1, n)]
        pres = [sympy.Integer(0)] + [coef(r, -5 * half) for r in range(1, n)]
    else:
        qi = 1.0 / float(q.q)
        dens = [0.0] + [(-1) ** (r + 1) * qi**r / r**1.5 for r in range(1, n)]
        pres = [0.0] + [(-1) ** (r + 1) * qi**r / r**2.5 for r in range(1, n)]
    z_of_rho = powerseries.revert(dens, n)
    p_of_rho = powerseries.compose(pres, z_of_rho, n)
    coeffs = p_of_rho[1:n]
    if exact:
        coeffs = [sympy.nsimplify(sympy.radsimp(sympy.expand(c))) for c in coeffs]
    return coeffs


# ---------------------------------------------------------------------------
# degenerate limit
# ---------------------------------------------------------------------------


def sommerfeld_f32(nu_arg: float, order: int = 2) -> float:
    """Degenerate expansion ``f_{3/2} ~ 4/(3 sqrt(pi)) L^(3/2) (1 + pi^2/8 L^-2)``.

    ``nu_arg`` is ``L = ln(z/q)``; ``order`` 0 drops the correction.
    """
    if order not in (0, 2):
        raise ValueError("order must be 0 or 2")
    if not nu_arg > 1:
        raise ValueError(f"Sommerfeld expansion needs ln y > 1, got {nu_arg}")
    corr = 1.0 + (math.pi**2 / 8.0) / nu_arg**2 if order == 2 else 1.0
    return 4.0 / (3.0 * math.sqrt(math.pi)) * nu_arg**1.5 * corr


def fermi_energy_target(T: float, E_F: float) -> float:
    """``n lambda^3`` of the gas whose Fermi energy is ``E_F``.

    From ``E_F = (3 n / (4 pi g))^(2/3) / 2`` and ``N/V = g f_{3/2}/lambda^3``
    the multiplicity cancels: ``f_{3/2}(y) = (4 pi / 3) (E_F / (pi T))^(3/2)``.
    """
    return 4.0 * math.pi / 3.0 * (E_F / (math.pi * T)) ** 1.5


SOMMERFELD_MAX_T_OVER_EF = 0.3


def chemical_potential(T: float, E_F: float, q, method: str = "exact", multiplicity: float = 1.0) -> float:
    """Chemical potential at temperature ``T`` for Fermi energy ``E_F``.

    ``exact`` inverts the density equation numerically; ``sommerfeld0``
    is ``E_F - T ln(1/q)``; ``sommerfeld2`` adds ``-(pi^2/12) T^2/E_F``.
    The multiplicity factor drops out of the density equation and only
    exists so callers can pass it explicitly.
    """
    if not T > 0 or not E_F > 0:
        raise ValueError("T and E_F must be positive")
    if not multiplicity > 0:
        raise ValueError("multiplicity must be positive")
    q = as_q(q)
    ln_qinv = -math.log(float(q.q))
    if method == "exact":
        # mu = T ln z = T (ln y + ln q); never forms z, which overflows as T -> 0
        return T * (solve_log_y(fermi_energy_target(T, E_F)) - ln_qinv)
    if method in ("sommerfeld0", "sommerfeld2"):
        if T / E_F > SOMMERFELD_MAX_T_OVER_EF:
            raise ValueError(f"Sommerfeld expansion invalid for T/E_F = {T / E_F:.3g} > {SOMMERFELD_MAX_T_OVER_EF}")
        if method == "sommerfeld0":
            return E_F - T * ln_qinv
        return -T * ln_qinv + E_F * (1.0 - math.pi**2 / 12.0 * (T / E_F) ** 2)
    raise ValueError(f"unknown method {method!r}")
