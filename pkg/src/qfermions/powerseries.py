"""Truncated power series arithmetic over any field-like number type.

A series is a list ``c`` meaning ``sum_k c[k] t^k`` truncated after
``len(c)`` terms. Works with floats, Fractions or sympy numbers.
"""

from __future__ import annotations


def mul(a, b, n):
    out = [a[0] * 0] * n
    for i, ai in enumerate(a[:n]):
        for j, bj in enumerate(b[: n - i]):
            out[i + j] = out[i + j] + ai * bj
    return out


def compose(outer, inner, n):
    """``outer(inner(t))``; ``inner`` must have no constant term."""
    if inner[0] != 0:
        raise ValueError("inner series must vanish at t=0")
    zero = outer[0] * 0
    out = [zero] * n
    out[0] = outer[0]
    power = [zero] * n
    power[0] = zero + 1
    for k in range(1, min(len(outer), n)):
        power = mul(power, inner, n)
        for i in range(n):
            out[i] = out[i] + outer[k] * power[i]
    return out


def revert(s, n):
    """Compositional inverse of ``s`` (``s[0] = 0``, ``s[1] != 0``).

    Coefficients are fixed one order at a time: with ``r`` correct through
    ``t^(k-1)``, the ``t^k`` coefficient of ``s(r(t))`` is off by
    ``s[1] * r[k]``.
    """
    if s[0] != 0 or s[1] == 0:
        raise ValueError("series must have s[0] = 0 and s[1] != 0")
    zero = s[1] * 0
    r = [zero] * n
    r[1] = 1 / s[1]
    for k in range(2, n):
        err = compose(s, r, k + 1)[k]
        r[k] = -err / s[1]
    return r
