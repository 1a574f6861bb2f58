"""Exact digit arithmetic on arbitrary-precision naturals.

This is the kernel the rest of the package stands on: indicator windows,
digit extraction, digit counts, radix conversion, and digit-string
concatenation. Words in a substitution system grow to thousands of
digits, far past the point where ``math.log`` can be trusted to order
powers correctly, so every digit-count and every concatenation exponent
here is computed by integer comparison against exact powers. No
floating-point logarithms, anywhere.

Conventions:

* digit index ``k = 0`` is the least significant digit;
* a radix ``p`` must be >= 2 for every positional operation, with the
  single exception of :func:`digit`, which admits the degenerate radix
  ``p = 1`` (every digit is 0) for completeness;
* the number 0 is given one digit, ``[0]``, so that the zero word is
  displayable like any other.
"""

from __future__ import annotations

from typing import Sequence

__all__ = [
    "sign",
    "bfunc",
    "digit",
    "ilog",
    "num_digits",
    "to_digits",
    "from_digits",
    "concat",
    "concat_exponent",
]

# Below this many digits, plain Horner/divmod loops beat the recursive
# splitting; above it, splitting keeps bignum work near multiplication cost.
_SPLIT_CUTOFF = 64


def sign(x) -> int:
    """Sign of ``x`` with ``sign(0) = 0``."""
    return (x > 0) - (x < 0)


def bfunc(x, y) -> float:
    """Rectangular window ``(sign(x + y) - sign(x - y)) / 2``.

    For ``y > 0`` this equals 1 when ``|x| < y``, 1/2 on the borders
    ``|x| = y``, and 0 outside; at the origin it is 0. Evaluated at
    half-integer width, ``bfunc(n - m, 0.5)`` over integers ``n, m`` is
    the Kronecker delta, which is what lets a rule table be selected by
    a sum instead of a branch (see ``engine.step_string_reference``).
    """
    return (sign(x + y) - sign(x - y)) / 2


def _check_radix(p: int) -> None:
    if p < 2:
        raise ValueError(f"radix must be >= 2, got {p}")


def _check_natural(a: int, name: str = "value") -> None:
    if a < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {a}")


def digit(p: int, k: int, a: int) -> int:
    """The ``k``-th radix-``p`` digit of ``a``: ``floor(a/p^k) - p*floor(a/p^(k+1))``.

    ``p = 1`` is admitted as a degenerate radix whose digits are all 0;
    it does not correspond to a positional numeral system.
    """
    if p < 1:
        raise ValueError(f"radix must be >= 1, got {p}")
    if k < 0:
        raise ValueError(f"digit index must be >= 0, got {k}")
    _check_natural(a)
    if p == 1:
        return 0
    return (a // p**k) % p


def ilog(p: int, a: int) -> int:
    """``floor(log_p(a))`` for ``a >= 1``, by exact integer arithmetic.

    Works by repeated squaring: find the powers ``p^(2^i)`` not exceeding
    ``a``, then peel them off most-significant-first, accumulating the
    binary digits of the exponent.
    """
    _check_radix(p)
    if a < 1:
        raise ValueError(f"ilog requires a >= 1, got {a}")
    if a < p:
        return 0
    squares = [p]
    while squares[-1] * squares[-1] <= a:
        squares.append(squares[-1] * squares[-1])
    e = 0
    for s in reversed(squares):
        e <<= 1
        if s <= a:
            a //= s
            e |= 1
    return e


def num_digits(p: int, a: int) -> int:
    """Number of radix-``p`` digits of ``a``: ``1 + floor(log_p(a))``, and 1 for ``a = 0``."""
    _check_radix(p)
    _check_natural(a)
    if a == 0:
        return 1
    return 1 + ilog(p, a)


def _digits_into(p: int, a: int, n: int, out: list) -> None:
    # Emit exactly n digits of a (a < p^n), least significant first.
    if n <= _SPLIT_CUTOFF:
        for _ in range(n):
            a, r = divmod(a, p)
            out.append(r)
        return
    k = n >> 1
    hi, lo = divmod(a, p**k)
    _digits_into(p, lo, k, out)
    _digits_into(p, hi, n - k, out)


def to_digits(p: int, a: int) -> list[int]:
    """Radix-``p`` digits of ``a``, least significant first; ``[0]`` for ``a = 0``.

    Large operands are split around ``p^(n/2)`` recursively, so
    conversion cost stays near bignum-division cost instead of going
    quadratic in the digit count.
    """
    _check_radix(p)
    _check_natural(a)
    if a == 0:
        return [0]
    out: list[int] = []
    _digits_into(p, a, num_digits(p, a), out)
    return out


def _from_digits_range(p: int, ds: Sequence[int], lo: int, hi: int) -> int:
    n = hi - lo
    if n <= _SPLIT_CUTOFF:
        acc = 0
        for i in range(hi - 1, lo - 1, -1):
            acc = acc * p + ds[i]
        return acc
    mid = lo + (n >> 1)
    return _from_digits_range(p, ds, lo, mid) + p ** (mid - lo) * _from_digits_range(
        p, ds, mid, hi
    )


def from_digits(p: int, ds: Sequence[int]) -> int:
    """Assemble ``sum(p^k * ds[k])`` from digits given least significant first.

    The empty sequence is the empty sum, 0. Every entry must lie in
    ``[0, p - 1]``; the first offending index is reported otherwise.
    """
    _check_radix(p)
    ds = [int(d) for d in ds]
    for i, d in enumerate(ds):
        if not 0 <= d < p:
            raise ValueError(f"digit {d} at index {i} out of range for radix {p}")
    return _from_digits_range(p, ds, 0, len(ds))


def concat(p: int, a: int, b: int) -> int:
    """Concatenation ``b * p^num_digits(p, a) + a``: b's digits stacked above a's."""
    _check_radix(p)
    _check_natural(a, "a")
    _check_natural(b, "b")
    return b * p ** num_digits(p, a) + a


def concat_exponent(p: int, a: int, b: int) -> int:
    """Exact integer ``log_p((concat(p, a, b) - a) / b)`` for ``b >= 1``.

    The quotient is a pure power of ``p`` by construction, and the
    returned exponent equals ``num_digits(p, a)``. Computed through the
    defining quotient (not the shortcut) so the identity stays checkable.
    """
    _check_radix(p)
    _check_natural(a, "a")
    if b < 1:
        raise ValueError(f"concat_exponent requires b >= 1, got {b}")
    q, r = divmod(concat(p, a, b) - a, b)
    e = ilog(p, q)
    if r != 0 or p**e != q:
        raise ArithmeticError(
            f"concatenation quotient {q} (remainder {r}) is not a power of {p}"
        )
    return e
