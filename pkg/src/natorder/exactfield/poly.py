"""Dense univariate polynomials over an exact field.

Polynomials are lists of coefficients, lowest degree first. Coefficients may be
``Fraction`` or :class:`~natorder.exactfield.field.FieldElement`; anything that
supports ``+ - * /`` and comparison against ``0``.
"""

from __future__ import annotations


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def add(p, q):
    n = max(len(p), len(q))
    out = []
    for k in range(n):
        if k < len(p) and k < len(q):
            out.append(p[k] + q[k])
        elif k < len(p):
            out.append(p[k])
        else:
            out.append(q[k])
    return trim(out)


def sub(p, q):
    return add(p, [-c for c in q])


def mul(p, q):
    if not p or not q:
        return []
    out = [None] * (len(p) + len(q) - 1)
    for a, pa in enumerate(p):
        if pa == 0:
            continue
        for b, qb in enumerate(q):
            t = pa * qb
            out[a + b] = t if out[a + b] is None else out[a + b] + t
    zero = p[0] - p[0]
    return trim([zero if c is None else c for c in out])


def divmod_(p, q):
    """Euclidean division ``p = quot*q + rem`` with ``deg rem < deg q``."""
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = trim(p)
    lead_inv = 1 / q[-1] if not hasattr(q[-1], "inverse") else q[-1].inverse()
    zero = q[-1] - q[-1]
    quot = [zero] * max(len(rem) - len(q) + 1, 0)
    while len(rem) >= len(q):
        shift = len(rem) - len(q)
        c = rem[-1] * lead_inv
        quot[shift] = c
        for k, qk in enumerate(q):
            rem[shift + k] = rem[shift + k] - c * qk
        rem = trim(rem)
    return trim(quot), rem


def xgcd(a, b):
    """Return ``(g, s, t)`` with ``s*a + t*b = g``; ``g`` is not normalised."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    return r0, s0, t0


def evaluate(p, x):
    """Horner evaluation; ``x`` may live in any ring the coefficients coerce into."""
    acc = None
    for c in reversed(p):
        acc = c if acc is None else acc * x + c
    return 0 if acc is None else acc
