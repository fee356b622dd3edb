"""Arithmetic in the four-element field and polynomials over it.

Elements are the integers 0..3: 0 and 1 are the prime subfield, 2 and 3 are
the two roots of x^2 + x + 1.  Addition is bitwise XOR; multiplication comes
from a fixed 16-entry table derived from that irreducible polynomial.
"""

from __future__ import annotations

from .errors import ValidationError

ELEMENTS = (0, 1, 2, 3)

# Multiplication table for GF(4) built on x^2 + x + 1:
#   2 * 2 = 3,  2 * 3 = 1,  3 * 3 = 2.
MUL_TABLE = (
    (0, 0, 0, 0),
    (0, 1, 2, 3),
    (0, 2, 3, 1),
    (0, 3, 1, 2),
)

# Multiplicative inverses of 1, 2, 3 (index 0 unused).
INV_TABLE = (0, 1, 3, 2)


def _check(a: int) -> int:
    if a not in (0, 1, 2, 3):
        raise ValidationError(f"{a!r} is not a field element (expected 0..3)")
    return a


def add(a: int, b: int) -> int:
    """Field addition; the field has characteristic 2, so this is XOR."""
    return _check(a) ^ _check(b)


def sub(a: int, b: int) -> int:
    """Subtraction coincides with addition in characteristic 2."""
    return add(a, b)


def mul(a: int, b: int) -> int:
    return MUL_TABLE[_check(a)][_check(b)]


def inv(a: int) -> int:
    if _check(a) == 0:
        raise ZeroDivisionError("0 has no multiplicative inverse")
    return INV_TABLE[a]


def div(a: int, b: int) -> int:
    return mul(a, inv(b))


def power(a: int, exponent: int) -> int:
    if exponent < 0:
        return power(inv(a), -exponent)
    out = 1
    for _ in range(exponent):
        out = mul(out, a)
    return out


# --- polynomials, as tuples of ascending coefficients ------------------

Poly = tuple[int, ...]


def poly_trim(p) -> Poly:
    """Drop trailing zero coefficients; the zero polynomial becomes ()."""
    coeffs = [_check(int(c)) for c in p]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def poly_degree(p: Poly) -> int:
    """Degree, with the zero polynomial assigned -1."""
    return len(poly_trim(p)) - 1


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    out = [0] * n
    for i, c in enumerate(p):
        out[i] ^= _check(c)
    for i, c in enumerate(q):
        out[i] ^= _check(c)
    return poly_trim(out)


def poly_mul(p: Poly, q: Poly) -> Poly:
    p = poly_trim(p)
    q = poly_trim(q)
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] ^= MUL_TABLE[a][b]
    return poly_trim(out)


def poly_divmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    """Quotient and remainder of p by q, deg(remainder) < deg(q)."""
    q = poly_trim(q)
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(poly_trim(p))
    dq = len(q) - 1
    lead_inv = inv(q[-1])
    quot = [0] * max(len(rem) - dq, 0)
    while len(rem) - 1 >= dq and rem:
        shift = len(rem) - 1 - dq
        factor = mul(rem[-1], lead_inv)
        quot[shift] = factor
        for i, c in enumerate(q):
            rem[shift + i] ^= MUL_TABLE[factor][c]
        while rem and rem[-1] == 0:
            rem.pop()
    return poly_trim(quot), poly_trim(rem)


def poly_mod(p: Poly, q: Poly) -> Poly:
    return poly_divmod(p, q)[1]


def poly_eval(p: Poly, x: int) -> int:
    out = 0
    for c in reversed(poly_trim(p)):
        out = mul(out, x) ^ c
    return out


def x_pow_n_plus_one(n: int) -> Poly:
    """The polynomial x^n + 1 (equal to x^n - 1 in characteristic 2)."""
    if n < 1:
        raise ValidationError("n must be at least 1")
    coeffs = [0] * (n + 1)
    coeffs[0] = 1
    coeffs[n] = 1
    return tuple(coeffs)
