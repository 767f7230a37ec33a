"""Command-line front end: every operation family as a CSV/JSON table.

Exit codes: 0 success, 1 numeric or self-test failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import fock, jackson, qcore, selftest, thermo
from .qcore import Deformation

UNITS = "k=h=m=1"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument types
# ---------------------------------------------------------------------------


def _q_arg(text: str) -> Deformation:
    try:
        value = float(text)
        return Deformation(value)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"invalid q {text!r}: {exc}") from None


def _q_list(text: str) -> list:
    return [_q_arg(t) for t in text.split(",") if t.strip()]


def _float_list(text: str) -> list:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _precision(text: str) -> int:
    p = int(text)
    if not 3 <= p <= 17:
        raise argparse.ArgumentTypeError("precision must be in 3..17")
    return p


def _nonneg_int(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return n


@dataclass(frozen=True)
class SweepSpec:
    """``VAR:MIN:MAX:POINTS[:linear|log]``"""

    variable: str
    min: float
    max: float
    points: int
    scale: str = "linear"

    VARIABLES = ("T", "z", "E", "q", "n")

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise argparse.ArgumentTypeError(f"sweep must look like VAR:MIN:MAX:POINTS[:SCALE], got {text!r}")
        var = parts[0]
        if var not in cls.VARIABLES:
            raise argparse.ArgumentTypeError(f"sweep variable must be one of {', '.join(cls.VARIABLES)}")
        try:
            lo, hi, pts = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad numbers in sweep {text!r}") from None
        scale = parts[4] if len(parts) == 5 else "linear"
        if scale not in ("linear", "log"):
            raise argparse.ArgumentTypeError("sweep scale must be linear or log")
        if not lo < hi:
            raise argparse.ArgumentTypeError("sweep needs min < max")
        if pts < 2:
            raise argparse.ArgumentTypeError("sweep needs at least 2 points")
        if scale == "log" and lo <= 0:
            raise argparse.ArgumentTypeError("log sweep needs min > 0")
        return cls(var, lo, hi, pts, scale)

    def values(self) -> list[float]:
        if self.scale == "log":
            return [float(v) for v in np.geomspace(self.min, self.max, self.points)]
        return [float(v) for v in np.linspace(self.min, self.max, self.points)]


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _round(x: float, precision: int) -> float:
    return float(f"{x:.{precision}g}")


def format_cell(x, precision: int) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, Fraction, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(_round(x, precision))
    return str(x)


def _json_cell(x, precision: int):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, Fraction, np.floating)):
        x = float(x)
        return None if not math.isfinite(x) else _round(x, precision)
    return str(x)


@dataclass
class Table:
    columns: list
    rows: list
    failed: bool = False

    def render(self, fmt: str, precision: int) -> str:
        if fmt == "json":
            records = [{c: _json_cell(v, precision) for c, v in zip(self.columns, row)} for row in self.rows]
            return json.dumps(records, indent=2) + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_cell(v, precision) for v in row])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_betas(args) -> Table:
    seq = fock.solve_recurrence(args.algebra, args.n_max + 1)
    q = args.q.q
    cols = ["n"] + (["laurent"] if args.exact else []) + ["value"]
    rows = []
    for n, v in enumerate(seq.values):
        rows.append([n] + ([str(v)] if args.exact else []) + [float(v.evaluate(q))])
    return Table(cols, rows)


def cmd_basic(args) -> Table:
    number = qcore.basic_fermion if args.kind == "fermion" else qcore.basic_boson
    q = args.q.q
    cols = ["n"] + (["laurent"] if args.exact else []) + ["value", "factorial"]
    rows = []
    fact = qcore.LaurentPoly.one()
    for n in range(args.n_max + 1):
        b = number(n)
        if n:
            fact = fact * b
        rows.append([n] + ([str(b)] if args.exact else []) + [float(b.evaluate(q)), float(fact.evaluate(q))])
    return Table(cols, rows)


def cmd_spectrum(args) -> Table:
    energies = fock.pv_spectrum(args.n_max, args.q, args.hbar_omega)
    return Table(["n", "energy"], [[n, e] for n, e in enumerate(energies)])


def cmd_jd(args) -> Table:
    f = jackson.PolyFunc(tuple(args.coeffs))
    if args.eps:
        rep = jackson.limit_check(args.kind, f, args.eps)
        rows = [[e, d, ld] for e, d, ld in zip(rep.eps, rep.distances, rep.limit_distances)]
        rows.append(["order", _or_nan(rep.order), _or_nan(rep.limit_order)])
        return Table(["eps", "distance_to_ordinary", "distance_to_q1"], rows)
    if args.kind == "bosonic" and args.q.q == 1:
        raise UsageError("bosonic Jackson derivative is singular at q=1; use --kind ordinary")
    d = jackson.jd_apply(args.kind, f, args.q)
    if args.x:
        rows = []
        for x in args.x:
            point = jackson.jd_apply_pointwise(args.kind, f, x, args.q) if x != 0 else math.nan
            rows.append([x, float(d(x)), point])
        return Table(["x", "polynomial", "pointwise"], rows)
    padded = list(d.coeffs) + [0.0] * (len(f.coeffs) - 1 - len(d.coeffs))
    return Table(["power", "coeff"], [[k, float(c)] for k, c in enumerate(padded)])


def _or_nan(x):
    return math.nan if x is None else x


def cmd_fermifn(args) -> Table:
    sweep = args.sweep
    if sweep.variable != "z":
        raise UsageError("fermifn sweeps the fugacity: use --sweep z:MIN:MAX:POINTS")
    qv = float(args.q.q)
    rows, failed = [], False
    for z in sweep.values():
        y = z / qv
        try:
            r = thermo.f_nu(args.nu, y, tol=args.tol, method=args.method)
            rows.append([z, y, r.value, r.abs_err_estimate, r.terms_used, r.method, "ok"])
        except (thermo.ConvergenceError, ValueError):
            failed = True
            rows.append([z, y, math.nan, math.nan, 0, args.method, "error"])
    return Table(["z", "y", "f", "abs_err", "terms", "method", "status"], rows, failed)


def cmd_dist(args) -> Table:
    sweep = args.sweep
    if sweep.variable != "E":
        raise UsageError("dist sweeps E - mu: use --sweep E:MIN:MAX:POINTS")
    state = thermo.GasState(args.q, args.T, 1.0)
    rows = []
    for x in sweep.values():
        rows.append(
            [
                x,
                thermo.occupation_paper(state, x),
                thermo.occupation_arcsin(state, x),
                fock.exact_trace_occupation(args.q, x / args.T),
            ]
        )
    return Table(["E_minus_mu", "simplified", "arcsin", "exact_trace"], rows)


_QUANTITIES = {
    "P": lambda s, V: thermo.pressure(s),
    "U": lambda s, V: thermo.internal_energy(s, V),
    "S": lambda s, V: thermo.entropy_per_particle(s),
    "n": lambda s, V: thermo.density(s),
}


def cmd_thermo(args) -> Table:
    sweep = args.sweep
    qty = args.quantity
    rows, failed = [], False
    if qty == "mu":
        if sweep.variable != "T":
            raise UsageError("--quantity mu needs a temperature sweep (--sweep T:...)")
        for T in sweep.values():
            try:
                rows.append([float(args.q.q), T, args.E_F, thermo.chemical_potential(T, args.E_F, args.q), UNITS, "ok"])
            except (thermo.SolverError, thermo.ConvergenceError, ValueError):
                failed = True
                rows.append([float(args.q.q), T, args.E_F, math.nan, UNITS, "error"])
        return Table(["q", "T", "E_F", "mu", "units", "status"], rows, failed)

    for v in sweep.values():
        q, T, z = args.q, args.T, args.z
        status = "ok"
        try:
            if sweep.variable == "z":
                z = v
            elif sweep.variable == "T":
                T = v
            elif sweep.variable == "q":
                q = Deformation(v)
            elif sweep.variable == "n":
                z = thermo.solve_fugacity(v, q)
            else:
                raise UsageError("thermo sweeps z, T, q or n (n lambda^3)")
            value = _QUANTITIES[qty](thermo.GasState(q, T, z), args.V)
        except UsageError:
            raise
        except (thermo.SolverError, thermo.ConvergenceError, ValueError):
            value, status, failed = math.nan, "error", True
        qv = float(q.q) if isinstance(q, Deformation) else v
        rows.append([qv, T, z, value, UNITS, status])
    return Table(["q", "T", "z", qty, "units", "status"], rows, failed)


def cmd_virial(args) -> Table:
    if not 2 <= args.order <= 4:
        raise UsageError("--order must be in 2..4")
    cols = ["q"] + [f"a{k}" for k in range(1, args.order + 1)]
    table = [thermo.virial_coefficients(args.order, q) for q in args.q_list]
    rows = [[float(q.q)] + list(coeffs) for q, coeffs in zip(args.q_list, table)]
    dev = [max(c[k] for c in table) - min(c[k] for c in table) for k in range(args.order)]
    rows.append(["max_dev"] + dev)
    return Table(cols, rows)


def cmd_mu(args) -> Table:
    sweep = args.sweep
    if sweep.variable != "T":
        raise UsageError("mu sweeps temperature: use --sweep T:MIN:MAX:POINTS")
    methods = ["exact", "sommerfeld0", "sommerfeld2"] if args.method == "all" else [args.method]
    rows, failed = [], False
    for T in sweep.values():
        row, status = [T, T / args.E_F], "ok"
        for m in methods:
            try:
                row.append(thermo.chemical_potential(T, args.E_F, args.q, method=m))
            except ValueError:
                # Sommerfeld beyond its validity range is a blank, not a failure
                if m == "exact":
                    failed, status = True, "error"
                row.append(math.nan)
            except (thermo.SolverError, thermo.ConvergenceError):
                failed, status = True, "error"
                row.append(math.nan)
        rows.append(row + [status])
    return Table(["T", "T_over_EF"] + [f"mu_{m}" for m in methods] + ["status"], rows, failed)


def cmd_selftest(args) -> int:
    results = selftest.run(args.tolerance_scale)
    out = _open_out(args.out)
    try:
        for r in results:
            out.write(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}\n")
        n_fail = sum(not r.passed for r in results)
        out.write(f"{len(results) - n_fail}/{len(results)} invariants passed\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0 if n_fail == 0 else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--precision", type=_precision, default=12, help="significant digits (3..17)")
    common.add_argument("--out", default=None, help="output path (default: stdout)")

    with_q = argparse.ArgumentParser(add_help=False)
    with_q.add_argument("--q", type=_q_arg, default=Deformation(0.5), help="deformation parameter in (0, 1]")

    p = argparse.ArgumentParser(prog="qfermions", description="q-deformed fermion algebra and thermostatistics")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("betas", parents=[common, with_q], help="eigenvalue sequence of a† a")
    s.add_argument("--algebra", choices=("A", "B"), default="A")
    s.add_argument("--n-max", type=_nonneg_int, default=10)
    s.add_argument("--exact", action="store_true", help="also print the Laurent polynomial")
    s.set_defaults(func=cmd_betas)

    s = sub.add_parser("basic", parents=[common, with_q], help="basic numbers and factorials")
    s.add_argument("--kind", choices=("fermion", "boson"), default="fermion")
    s.add_argument("--n-max", type=_nonneg_int, default=10)
    s.add_argument("--exact", action="store_true")
    s.set_defaults(func=cmd_basic)

    s = sub.add_parser("spectrum", parents=[common, with_q], help="PV Hamiltonian levels")
    s.add_argument("--n-max", type=_nonneg_int, default=10)
    s.add_argument("--hbar-omega", type=float, default=1.0)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("jd", parents=[common, with_q], help="Jackson derivative of a polynomial")
    s.add_argument("--kind", choices=("fermionic", "bosonic", "ordinary"), default="fermionic")
    s.add_argument("--coeffs", type=_float_list, required=True, help="c0,c1,c2,... in ascending powers")
    s.add_argument("--x", type=_float_list, default=None, help="evaluate at these points")
    s.add_argument("--eps", type=_float_list, default=None, help="run the q->1 limit check at q=1-eps")
    s.set_defaults(func=cmd_jd)

    s = sub.add_parser("fermifn", parents=[common], help="generalized Fermi-Dirac function f_nu(z/q)")
    s.add_argument("--q", type=_q_arg, default=Deformation(1.0))
    s.add_argument("--nu", type=float, default=1.5)
    s.add_argument("--sweep", type=SweepSpec.parse, required=True)
    s.add_argument("--method", choices=("auto", "series", "integral"), default="auto")
    s.add_argument("--tol", type=float, default=1e-14)
    s.set_defaults(func=cmd_fermifn)

    s = sub.add_parser("dist", parents=[common, with_q], help="occupation numbers vs E - mu")
    s.add_argument("--T", type=float, default=1.0)
    s.add_argument("--sweep", type=SweepSpec.parse, required=True)
    s.set_defaults(func=cmd_dist)

    s = sub.add_parser("thermo", parents=[common, with_q], help="thermodynamic sweeps")
    s.add_argument("--quantity", choices=("P", "U", "S", "n", "mu"), required=True)
    s.add_argument("--sweep", type=SweepSpec.parse, required=True)
    s.add_argument("--T", type=float, default=1.0)
    s.add_argument("--z", type=float, default=0.5)
    s.add_argument("--E-F", dest="E_F", type=float, default=1.0)
    s.add_argument("--V", type=float, default=1.0)
    s.set_defaults(func=cmd_thermo)

    s = sub.add_parser("virial", parents=[common], help="virial coefficients for several q")
    s.add_argument("--q-list", type=_q_list, default=_q_list("0.3,0.7,1.0"))
    s.add_argument("--order", type=int, default=3)
    s.set_defaults(func=cmd_virial)

    s = sub.add_parser("mu", parents=[common, with_q], help="chemical potential vs temperature")
    s.add_argument("--E-F", dest="E_F", type=float, default=1.0)
    s.add_argument("--sweep", type=SweepSpec.parse, required=True)
    s.add_argument("--method", choices=("all", "exact", "sommerfeld0", "sommerfeld2"), default="all")
    s.set_defaults(func=cmd_mu)

    s = sub.add_parser("selftest", help="run the invariant suite")
    s.add_argument("--out", default=None)
    s.add_argument("--tolerance-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    s.set_defaults(func=None)
    return p


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "selftest":
        return cmd_selftest(args)
    try:
        table = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with code 2
    text = table.render(args.format, args.precision)
    out = _open_out(args.out)
    try:
        out.write(text)
    finally:
        if out is not sys.stdout:
            out.close()
    return 1 if table.failed else 0


if __name__ == "__main__":
    sys.exit(main())
