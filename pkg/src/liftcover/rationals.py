"""Exact rational scalars.

Every geometric quantity in this package is an exact rational; nothing is
ever rounded.  The scalar type is gmpy2.mpq when available (roughly an
order of magnitude faster) and fractions.Fraction otherwise.  Both store
values in lowest terms with a positive denominator, and both expose
``numerator``/``denominator`` as Python ints, which is all the helpers
below rely on.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

try:
    from gmpy2 import mpq as _mpq

    _HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _mpq = None
    _HAVE_GMPY2 = False

Rat = Union[int, Fraction] if not _HAVE_GMPY2 else object
BACKEND = "gmpy2" if _HAVE_GMPY2 else "fractions"

_maker = _mpq if _HAVE_GMPY2 else Fraction

ZERO = _maker(0)
ONE = _maker(1)


def rat(value, den=None):
    """Coerce ``value`` (int, str "p/q", Fraction, mpq, or pair) to a rational."""
    if type(value) is _maker and den is None:
        return value
    if den is not None:
        return _maker(value, den)
    if isinstance(value, str):
        return _maker(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass an int, string, or rational")
    return _maker(value)


def rat_str(x) -> str:
    """Render in lowest terms: "p/q", or "p" when the denominator is 1."""
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def qfloor(x) -> int:
    return x.numerator // x.denominator


def qceil(x) -> int:
    return -((-x).numerator // (-x).denominator) if x.numerator else 0


def qsign(x) -> int:
    n = x.numerator if not isinstance(x, int) else x
    return (n > 0) - (n < 0)


def is_integer(x) -> bool:
    return rat(x).denominator == 1
