"""Exact rational scalars.

Every coefficient in the engine is an exact rational number.  gmpy2's mpq is
used when available (it is substantially faster on the solver hot path);
otherwise the stdlib Fraction provides the same semantics.  Both types reduce
automatically, keep a positive denominator, hash and compare identically and
print as ``p/q`` (or ``p`` for integers), so nothing downstream depends on
which backend is active.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as Q  # type: ignore[import-not-found]

    GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Q = Fraction
    GMPY2 = False

ZERO = Q(0)
ONE = Q(1)


def rat(x) -> "Q":
    """Coerce ``x`` (int, Fraction, mpq or a ``p/q`` string) to a rational.

    Floats are rejected: exactness is the whole point.
    """
    if isinstance(x, bool):
        raise ValueError("boolean is not a rational scalar")
    if isinstance(x, float):
        raise ValueError(f"refusing float {x!r}; write it as p/q")
    if isinstance(x, str):
        s = x.strip()
        try:
            if "/" in s:
                num, den = s.split("/", 1)
                return Q(int(num), int(den))
            return Q(int(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {x!r}") from exc
    try:
        return Q(x)
    except TypeError as exc:
        raise ValueError(f"cannot interpret {x!r} as a rational") from exc


def rat_str(q) -> str:
    """Canonical string form: ``3``, ``-1/2``."""
    return str(q)
