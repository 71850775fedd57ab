"""Exact rational arithmetic helpers.

All correctness-critical arithmetic (channel validation, LP pivoting,
witness verification) runs on exact rationals.  gmpy2.mpq is used when
available because it is several times faster than fractions.Fraction;
set LPLAB_NO_GMPY2=1 to force the pure-Python Fraction backend.
"""
from __future__ import annotations

import os
from decimal import Decimal
from fractions import Fraction

if os.environ.get("LPLAB_NO_GMPY2"):
    HAVE_GMPY2 = False
else:
    try:
        from gmpy2 import mpq as _mpq

        HAVE_GMPY2 = True
    except ImportError:  # pragma: no cover
        HAVE_GMPY2 = False

if HAVE_GMPY2:
    def Q(num=0, den=None):
        return _mpq(num) if den is None else _mpq(num, den)
else:
    def Q(num=0, den=None):
        return Fraction(num) if den is None else Fraction(num, den)

QZERO = Q(0)
QONE = Q(1)
QHALF = Q(1, 2)

#: grid used when float LLR vectors are rounded to rationals before decoding
LLR_GRID_BITS = 40


def rat(x) -> Fraction:
    """Exact Fraction from ints, strings, Decimals, Fractions or floats.

    Floats convert to their exact binary value; use strings for decimal
    literals ("0.145" -> 29/200).
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str, Decimal)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(int(x.numerator), int(x.denominator))  # mpq and friends


def decimal_rat(x) -> Fraction:
    """Like rat() but floats are read as the decimal literal they print as.

    Meant for user-supplied parameters such as crossover probabilities,
    where bsc(0.1) should mean exactly 1/10.
    """
    if isinstance(x, float):
        return Fraction(str(x))
    return rat(x)


def quantize(x: float, bits: int = LLR_GRID_BITS):
    """Round a float onto the 2**-bits grid, returned as an exact rational."""
    scale = 1 << bits
    return Q(round(x * scale), scale)


def quantize_vector(values, bits: int = LLR_GRID_BITS) -> tuple:
    return tuple(quantize(float(v), bits) for v in values)


_BACKEND_TYPE = type(Q(0))


def exactify(x):
    """Exact rational (backend type) from any rational-like or float input."""
    if isinstance(x, _BACKEND_TYPE):
        return x
    if isinstance(x, float):
        return Q(Fraction(x))
    if isinstance(x, (int, Fraction)):
        return Q(x)
    r = rat(x)
    return Q(int(r.numerator), int(r.denominator))
