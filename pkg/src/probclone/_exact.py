"""Small exact-arithmetic helpers shared across the package.

Complex rationals are represented as ``(re, im)`` pairs of ``Fraction``;
the handful of operations needed for 3x3 Hermitian matrices are spelled
out here rather than pulling in a symbolic-algebra dependency.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

RationalLike = (int, Fraction)


def is_rational(x) -> bool:
    return isinstance(x, RationalLike)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", "-1", "0.25" (and similar) into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def exact_sqrt(x: Fraction) -> Fraction | None:
    """Square root of a nonnegative rational, or None when irrational."""
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


# --- complex rationals as (re, im) Fraction pairs ---

QC = tuple  # (Fraction, Fraction)


def qc(re, im=0) -> QC:
    return (as_fraction(re), as_fraction(im))


def qc_mul(u: QC, v: QC) -> QC:
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def qc_conj(u: QC) -> QC:
    return (u[0], -u[1])


def qc_abs2(u: QC) -> Fraction:
    return u[0] * u[0] + u[1] * u[1]


def qc_to_complex(u: QC) -> complex:
    return complex(float(u[0]), float(u[1]))
