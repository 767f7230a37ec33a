"""Finite Fock-space representations of the two deformed fermion algebras.

Algebra ``A``:  a a† + q^-1 a† a = q^-N   (closes on |0>, |1>)
Algebra ``B``:  f f† + q f† f = q^-N      (Parthasarathy-Viswanathan)

Ladder-operator entries are square roots of Laurent polynomials. In exact
mode they are carried as :class:`Surd` values ``coef * sqrt(r1 * r2 ...)``,
so products such as ``a a†`` collapse back to plain Laurent polynomials and
every algebraic identity can be checked with zero tolerance.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .qcore import Q, Deformation, LaurentPoly, as_q, basic_fermion

__all__ = [
    "AlgebraKind",
    "EigenSeq",
    "FockRep",
    "RelationReport",
    "RepresentationError",
    "Surd",
    "solve_recurrence",
    "build_rep",
    "algebra_relations",
    "algebra_residual",
    "number_operator_relations",
    "build_state_norm",
    "pv_spectrum",
    "exact_trace_occupation",
]


class RepresentationError(ValueError):
    """Requested representation does not exist (truncation or negative norm)."""


class AlgebraKind(enum.Enum):
    A = "A"
    B = "B"

    @classmethod
    def parse(cls, kind) -> "AlgebraKind":
        if isinstance(kind, cls):
            return kind
        try:
            return cls(str(kind).upper())
        except ValueError:
            raise ValueError(f"algebra kind must be 'A' or 'B', got {kind!r}") from None

    @property
    def number_coefficient(self) -> LaurentPoly:
        """Coefficient of ``a† a`` in the defining relation."""
        return Q**-1 if self is AlgebraKind.A else Q


# ---------------------------------------------------------------------------
# exact radicals
# ---------------------------------------------------------------------------


def _poly_key(p: LaurentPoly):
    return tuple(p.items())


class Surd:
    """``coef * sqrt(prod(radicand))`` with Laurent-polynomial pieces.

    Repeated radicand factors are pulled out of the root, so
    ``Surd.root(v) * Surd.root(v) == Surd(v)``.
    """

    __slots__ = ("coef", "radicand")

    def __init__(self, coef: LaurentPoly, radicand=()):
        coef = coef if isinstance(coef, LaurentPoly) else LaurentPoly.const(coef)
        counts = Counter()
        factors = {}
        for r in radicand:
            if r.is_zero():
                coef = LaurentPoly.zero()
                break
            if r == 1:
                continue
            key = _poly_key(r)
            counts[key] += 1
            factors[key] = r
        if coef.is_zero():
            self.coef, self.radicand = LaurentPoly.zero(), ()
            return
        rest = []
        for key in sorted(counts):
            pairs, odd = divmod(counts[key], 2)
            if pairs:
                coef = coef * factors[key] ** pairs
            if odd:
                rest.append(factors[key])
        self.coef = coef
        self.radicand = tuple(rest) if not coef.is_zero() else ()

    @classmethod
    def root(cls, value: LaurentPoly) -> "Surd":
        return cls(LaurentPoly.one(), (value,))

    @classmethod
    def zero(cls) -> "Surd":
        return cls(LaurentPoly.zero())

    def is_zero(self) -> bool:
        return self.coef.is_zero()

    def __mul__(self, other):
        if isinstance(other, Surd):
            return Surd(self.coef * other.coef, self.radicand + other.radicand)
        if isinstance(other, (LaurentPoly, int)):
            return Surd(self.coef * other, self.radicand)
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, Surd):
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.radicand != other.radicand:
            raise ArithmeticError("cannot add surds with different radicands")
        return Surd(self.coef + other.coef, self.radicand)

    def __neg__(self):
        return Surd(-self.coef, self.radicand)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if isinstance(other, Surd):
            return self.coef == other.coef and self.radicand == other.radicand
        if isinstance(other, (LaurentPoly, int)):
            return not self.radicand and self.coef == other
        return NotImplemented

    def __hash__(self):
        return hash((self.coef, self.radicand))

    def as_poly(self) -> LaurentPoly:
        if self.radicand:
            raise ArithmeticError(f"{self} is not a Laurent polynomial")
        return self.coef

    def evaluate(self, q) -> float:
        if self.is_zero():
            return 0.0
        rad = 1.0
        for r in self.radicand:
            rad *= float(r.evaluate(q))
        return float(self.coef.evaluate(q)) * math.sqrt(rad)

    def __repr__(self):
        if not self.radicand:
            return f"Surd({self.coef})"
        inner = " * ".join(f"({r})" for r in self.radicand)
        return f"Surd({self.coef} * sqrt({inner}))"


def _matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = [[Surd.zero() for _ in range(p)] for _ in range(n)]
    for i in range(n):
        for k in range(m):
            a = A[i][k]
            if a.is_zero():
                continue
            row = B[k]
            for j in range(p):
                if not row[j].is_zero():
                    out[i][j] = out[i][j] + a * row[j]
    return out


def _combine(*terms):
    """Entrywise sum of ``(scale, matrix)`` pairs."""
    dim = len(terms[0][1])
    out = [[Surd.zero() for _ in range(dim)] for _ in range(dim)]
    for scale, M in terms:
        for i in range(dim):
            for j in range(dim):
                if not M[i][j].is_zero():
                    out[i][j] = out[i][j] + M[i][j] * scale
    return out


def _diag(entries):
    dim = len(entries)
    out = [[Surd.zero() for _ in range(dim)] for _ in range(dim)]
    for i, e in enumerate(entries):
        out[i][i] = e if isinstance(e, Surd) else Surd(e)
    return out


# ---------------------------------------------------------------------------
# eigenvalue sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenSeq:
    """Eigenvalues of ``a† a`` on |0>, |1>, ... (beta_n for A, alpha_n for B)."""

    kind: AlgebraKind
    values: tuple

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]

    def evaluate(self, q) -> list[float]:
        return [float(v.evaluate(as_q(q).q)) for v in self.values]


def solve_recurrence(kind, count: int) -> EigenSeq:
    """Iterate the eigenvalue recurrence from the vacuum value 0.

    ``A``: ``beta_{n+1} = q^-n - q^-1 beta_n``;
    ``B``: ``alpha_{n+1} = q^-n - q alpha_n``.
    Returns the first ``count`` values (n = 0 .. count-1).
    """
    kind = AlgebraKind.parse(kind)
    if isinstance(count, bool) or not isinstance(count, int) or count < 1:
        raise ValueError(f"count must be a positive integer, got {count!r}")
    c = kind.number_coefficient
    values = [LaurentPoly.zero()]
    for n in range(count - 1):
        values.append(Q**-n - c * values[n])
    return EigenSeq(kind, tuple(values))


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FockRep:
    """Truncated matrix representation of ``{a, a†, N}``.

    Only the squared norms on the superdiagonal are stored
    (``squared_norms[k] = <k|a a†|k> = values[k+1]``); the matrices are
    produced on demand, exactly (:class:`Surd` entries) or as floats.
    """

    kind: AlgebraKind
    dim: int
    eigen: EigenSeq = field(repr=False)

    @property
    def squared_norms(self) -> tuple:
        return tuple(self.eigen.values[1 : self.dim])

    @property
    def number_diagonal(self) -> tuple:
        return tuple(range(self.dim))

    # exact matrices
    def lowering(self):
        M = [[Surd.zero() for _ in range(self.dim)] for _ in range(self.dim)]
        for k, v in enumerate(self.squared_norms):
            M[k][k + 1] = Surd.root(v)
        return M

    def raising(self):
        low = self.lowering()
        return [[low[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def number(self):
        return _diag([LaurentPoly.const(n) for n in self.number_diagonal])

    # float matrices
    def lowering_float(self, q) -> np.ndarray:
        q = as_q(q)
        norms = np.array([float(v.evaluate(q.q)) for v in self.squared_norms])
        if np.any(norms < 0):
            bad = [k + 1 for k, v in enumerate(norms) if v < 0]
            raise RepresentationError(f"negative squared norm at n={bad} for q={q.q}")
        return np.diag(np.sqrt(norms), k=1) if self.dim > 1 else np.zeros((1, 1))

    def raising_float(self, q) -> np.ndarray:
        return self.lowering_float(q).T.copy()

    def number_float(self) -> np.ndarray:
        return np.diag(np.arange(self.dim, dtype=float))


def build_rep(kind, dim: int, q=None) -> FockRep:
    """Build the ``dim``-state representation.

    Algebra A closes on two states, so ``dim > 2`` is rejected. For
    algebra B, passing ``q`` checks that every ``alpha_n`` used is strictly
    positive there; a zero or negative value means |n> does not exist as
    a normalisable state.
    """
    kind = AlgebraKind.parse(kind)
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ValueError(f"dim must be a positive integer, got {dim!r}")
    if kind is AlgebraKind.A and dim > 2:
        raise RepresentationError(
            f"algebra A has only the states |0>, |1>: (a†)^2|0> = 0, so dim={dim} > 2 is invalid"
        )
    eigen = solve_recurrence(kind, dim)
    rep = FockRep(kind, dim, eigen)
    if q is not None:
        qv = as_q(q).q
        bad = [k + 1 for k, v in enumerate(rep.squared_norms) if v.evaluate(qv) <= 0]
        if bad:
            raise RepresentationError(f"algebra {kind.value}: alpha_n <= 0 at q={qv} for n={bad}")
    return rep


def _interior_rows(rep: FockRep, relation: str) -> int:
    # the last row of the defining relation sees the truncated a†|dim-1> = 0;
    # algebra A at dim 2 is the full space and has no truncated row
    if relation == "defining" and not (rep.kind is AlgebraKind.A and rep.dim == 2):
        return rep.dim - 1
    return rep.dim


def algebra_relations(rep: FockRep) -> dict:
    """Exact residual matrices of every defining relation.

    Keys: ``defining`` (a a† + c a† a - q^-N), ``number_lowering``
    ([N, a] + a), ``number_raising`` ([N, a†] - a†), and for algebra B
    ``number_raising_b`` (Ñ f† + q f† Ñ - f† q^-N with Ñ = f† f). Rows
    spoiled by truncation are dropped.
    """
    a, ad, N = rep.lowering(), rep.raising(), rep.number()
    qN = _diag([Q**-n for n in range(rep.dim)])
    c = rep.kind.number_coefficient
    one = LaurentPoly.one()
    out = {
        "defining": _combine((one, _matmul(a, ad)), (c, _matmul(ad, a)), (-one, qN)),
        "number_lowering": _combine((one, _matmul(N, a)), (-one, _matmul(a, N)), (one, a)),
        "number_raising": _combine((one, _matmul(N, ad)), (-one, _matmul(ad, N)), (-one, ad)),
    }
    if rep.kind is AlgebraKind.B:
        Nt = _matmul(ad, a)
        out["number_raising_b"] = _combine(
            (one, _matmul(Nt, ad)), (Q, _matmul(ad, Nt)), (-one, _matmul(ad, qN))
        )
    return {name: M[: _interior_rows(rep, name)] for name, M in out.items()}


def _float_relations(rep: FockRep, q: Deformation) -> dict:
    """Float residual matrices, each paired with the entrywise magnitude of its terms."""
    qv = float(q.q)
    a, ad, N = rep.lowering_float(q), rep.raising_float(q), rep.number_float()
    qN = np.diag(qv ** -np.arange(rep.dim, dtype=float))
    c = 1 / qv if rep.kind is AlgebraKind.A else qv
    terms = {
        "defining": (a @ ad, c * ad @ a, -qN),
        "number_lowering": (N @ a, -(a @ N), a),
        "number_raising": (N @ ad, -(ad @ N), -ad),
    }
    if rep.kind is AlgebraKind.B:
        Nt = ad @ a
        terms["number_raising_b"] = (Nt @ ad, qv * ad @ Nt, -(ad @ qN))
    out = {}
    for name, parts in terms.items():
        rows = _interior_rows(rep, name)
        out[name] = (sum(parts)[:rows], sum(np.abs(p) for p in parts)[:rows])
    return out


def algebra_residual(rep: FockRep, q, exact: bool = False, relative: bool = False) -> float:
    """Max-norm residual of the defining relations at ``q``.

    In exact mode each residual entry is simplified symbolically first, so
    an identity that holds returns exactly ``0.0``. With ``relative=True``
    (float mode only) each relation's residual is divided by the largest
    magnitude among its terms; at small q and large ``dim`` the entries
    grow like ``q^(-3 dim / 2)`` and only the relative size is meaningful.
    """
    q = as_q(q)
    if exact:
        worst = 0.0
        for M in algebra_relations(rep).values():
            for row in M:
                for e in row:
                    if not e.is_zero():
                        worst = max(worst, abs(e.evaluate(q.q)))
        return worst
    worst = 0.0
    for R, scale in _float_relations(rep, q).values():
        if not R.size:
            continue
        r = float(np.max(np.abs(R)))
        if relative:
            r /= max(float(np.max(scale)), np.finfo(float).tiny)
        worst = max(worst, r)
    return worst


@dataclass
class RelationReport:
    checks: dict
    diagonals: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _diagonal_or_none(M):
    dim = len(M)
    for i in range(dim):
        for j in range(dim):
            if i != j and not M[i][j].is_zero():
                return None
    return tuple(M[i][i].as_poly() for i in range(dim))


def number_operator_relations(rep: FockRep) -> RelationReport:
    """Check ``a† a`` and ``a a†`` against their closed forms, exactly.

    Algebra A: ``a† a = (1-(-1)^N)/2 q^{-N+1}`` and ``a a† = q^-N - q^-1 N̂``.
    Algebra B: ``f† f = [N]`` and ``f f† = [N+1]`` (the latter on rows not
    touched by truncation).
    """
    a, ad = rep.lowering(), rep.raising()
    ada = _diagonal_or_none(_matmul(ad, a))
    aad = _diagonal_or_none(_matmul(a, ad))
    dim = rep.dim
    checks = {"raising_lowering_diagonal": ada is not None, "lowering_raising_diagonal": aad is not None}
    if ada is not None:
        checks["raising_lowering_is_eigenseq"] = list(ada) == list(rep.eigen.values[:dim])
    if rep.kind is AlgebraKind.A:
        closed = [LaurentPoly.monomial(-n + 1) if n % 2 else LaurentPoly.zero() for n in range(dim)]
        if ada is not None:
            checks["number_closed_form"] = list(ada) == closed
        if aad is not None:
            # closed at dim 2; a one-state truncation has no complete row
            rows = dim if dim == 2 else dim - 1
            target = [Q**-n - Q**-1 * closed[n] for n in range(rows)]
            checks["lowering_raising_identity"] = list(aad[:rows]) == target
    else:
        if ada is not None:
            checks["number_closed_form"] = list(ada) == [basic_fermion(n) for n in range(dim)]
        if aad is not None:
            checks["lowering_raising_identity"] = list(aad[: dim - 1]) == [
                basic_fermion(n + 1) for n in range(dim - 1)
            ]
    return RelationReport(checks, {"raising_lowering": ada, "lowering_raising": aad})


def build_state_norm(kind, n: int) -> LaurentPoly:
    """Squared norm of ``(a†)^n |0>``: the product ``values[1] ... values[n]``.

    Zero means the state does not exist.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    values = solve_recurrence(kind, n + 1).values
    out = LaurentPoly.one()
    for v in values[1:]:
        out = out * v
    return out


def pv_spectrum(n_max: int, q, hbar_omega: float = 1.0) -> list[float]:
    """Levels ``E_n = hbar_omega/2 ([n] - [n+1])`` for n = 0 .. n_max."""
    if isinstance(n_max, bool) or not isinstance(n_max, int) or n_max < 0:
        raise ValueError(f"n_max must be a non-negative integer, got {n_max!r}")
    if not hbar_omega > 0:
        raise ValueError("hbar_omega must be positive")
    qv = float(as_q(q).q)
    basic = [basic_fermion(n).evaluate(qv) for n in range(n_max + 2)]
    return [0.5 * hbar_omega * (basic[n] - basic[n + 1]) for n in range(n_max + 1)]


def exact_trace_occupation(q, beta_eps: float) -> float:
    """``Tr(e^{-beta H} a† a) / Tr(e^{-beta H})`` over the two states of algebra A.

    ``beta_eps`` is ``beta (E - mu)``. The Boltzmann weights are shifted by
    their maximum exponent so infinities are handled.
    """
    betas = solve_recurrence(AlgebraKind.A, 2).evaluate(q)
    if math.isnan(beta_eps):
        raise ValueError("beta_eps must not be NaN")
    if math.isinf(beta_eps):
        weights = [1.0, 0.0] if beta_eps > 0 else [0.0, 1.0]
    else:
        exponents = [0.0, -beta_eps]
        top = max(exponents)
        weights = [math.exp(e - top) for e in exponents]
    return sum(b * w for b, w in zip(betas, weights)) / sum(weights)
