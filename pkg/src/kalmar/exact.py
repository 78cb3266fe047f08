"""Exact evaluation of the Kalmar function K(n) over arbitrary-precision ints.

K(n) counts ordered factorizations n = x_1 x_2 ... x_r with every x_i >= 2,
summed over all r, with K(1) = 1.  It depends only on the prime signature of
n (the multiset of exponents), which is the sole input type here: a tuple of
positive integers sorted non-increasing, () standing for n = 1.

Three independent methods are provided and must agree everywhere:

  * kalmar_macmahon   - MacMahon's closed formula (the workhorse),
  * kalmar_recursive  - the divisor recursion K(n) = sum_{d|n, d>=2} K(n/d),
  * kalmar_series_bounds - exact rational bracketing of the Dirichlet-series
    expansion K(n) = (1/2) sum_r tau_r(n)/2^r.

Everything in this module is exact; no floating point anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Iterable

from .errors import KalmarError, PreconditionError, ResourceLimitError
from .primes import factorize

__all__ = [
    "Signature",
    "canonical_signature",
    "signature_of",
    "big_omega",
    "small_omega",
    "tau_r",
    "kalmar_macmahon",
    "kalmar_recursive",
    "kalmar_series_bounds",
    "kalmar_series_exact",
    "kp_multinomial",
    "signatures_with_omega",
    "eulerian_row",
    "eulerian_checksum",
]

Signature = tuple[int, ...]


def canonical_signature(exponents: Iterable[int]) -> Signature:
    """Sorted non-increasing tuple of positive exponents; zeros are dropped."""
    sig = tuple(sorted((int(e) for e in exponents if e != 0), reverse=True))
    if sig and sig[-1] < 1:
        raise PreconditionError(f"signature entries must be >= 1, got {sig}")
    return sig


def signature_of(n: int) -> Signature:
    """Prime signature of a positive integer."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    return canonical_signature(e for _, e in factorize(n))


def big_omega(sig: Signature) -> int:
    return sum(sig)


def small_omega(sig: Signature) -> int:
    return len(sig)


# binomial C(alpha + m - 1, alpha), cached: MacMahon's formula is the hot
# path of champion enumeration and hits the same small (alpha, m) pairs
_BINOM: dict[tuple[int, int], int] = {}


def _stars_bars(alpha: int, m: int) -> int:
    key = (alpha, m)
    v = _BINOM.get(key)
    if v is None:
        v = _BINOM[key] = math.comb(alpha + m - 1, alpha)
    return v


# _W[om][m] = sum_{j=m}^{om} (-1)^(j-m) C(j, m); row 0 is a placeholder
_W: list[list[int]] = [[0]]


def _w_row(om: int) -> list[int]:
    while len(_W) <= om:
        n = len(_W)
        prev = _W[n - 1]
        row = [0] * (n + 1)
        sign = -1 if (n - 1) % 2 else 1   # (-1)^(n-m) at m = 1
        for m in range(1, n):
            row[m] = prev[m] + sign * math.comb(n, m)
            sign = -sign
        row[n] = 1
        _W.append(row)
    return _W[om]


def kalmar_macmahon(sig: Iterable[int]) -> int:
    """Exact K(n) from the signature by MacMahon's formula.

    The double sum  sum_{j=1}^{Om} sum_{i=0}^{j-1} (-1)^i C(j,i) tau*_{j-i}
    is evaluated grouped by m = j - i, where tau*_m = prod_h C(a_h+m-1, a_h)
    counts ordered m-tuples of factors >= 1 with the given product:

        K = sum_{m=1}^{Om} tau*_m * sum_{j=m}^{Om} (-1)^(j-m) C(j, m).

    This is the same formula with O(Om) big-integer terms instead of O(Om^2).
    """
    sig = canonical_signature(sig)
    om = sum(sig)
    if om == 0:
        return 1
    w = _w_row(om)
    total = 0
    for m in range(1, om + 1):
        g = 1
        for a in sig:
            g *= _stars_bars(a, m)
        total += g * w[m]
    return total


_MEMO: dict[Signature, int] = {(): 1}


def kalmar_recursive(sig: Iterable[int], max_memo: int = 4_000_000) -> int:
    """Exact K(n) by the divisor recursion, memoized on canonical signatures.

    Divisors of the signature are exponent sub-vectors, re-canonicalized; the
    memo key collapses the divisor lattice by permutation symmetry.
    """
    return _krec(canonical_signature(sig), max_memo)


def _krec(sig: Signature, cap: int) -> int:
    got = _MEMO.get(sig)
    if got is not None:
        return got
    if len(_MEMO) >= cap:
        raise ResourceLimitError(f"recursion memo exceeded {cap} entries")
    total = 0
    for sub in product(*(range(a + 1) for a in sig)):
        if sum(sub) == sum(sig):          # sub == sig: the divisor d = 1
            continue
        total += _krec(canonical_signature(sub), cap)
    _MEMO[sig] = total
    return total


def tau_r(sig: Iterable[int], r: int) -> int:
    """Number of ordered r-tuples of factors >= 1 with product n.

    Multiplicative: tau_r(p^a) = C(a+r-1, a).  tau_0 = [n == 1], tau_1 = 1.
    """
    if r < 0:
        raise PreconditionError("r must be >= 0")
    sig = canonical_signature(sig)
    out = 1
    for a in sig:
        out *= math.comb(a + r - 1, a)
    return out


def kalmar_series_bounds(sig: Iterable[int], R: int) -> tuple[Fraction, Fraction]:
    """Exact rational bracket of K(n) from the truncated series
    (1/2) sum_{r<=R} tau_r(n)/2^r.

    Tail bound: tau_r(n) <= r^Om since C(a+r-1, a) = prod_{j<=a} (r-1+j)/j
    <= r^a, and for r > R the terms r^Om/2^r decay at ratio at most
    q = ((R+2)/(R+1))^Om / 2, so the tail is a geometric series once q < 1.
    """
    sig = canonical_signature(sig)
    om = sum(sig)
    if R < om:
        raise PreconditionError(f"need R >= Omega(sig) = {om}, got {R}")
    q = Fraction(R + 2, R + 1) ** om / 2
    if q >= 1:
        raise PreconditionError(f"R = {R} too small: tail ratio {q} >= 1")
    lower = Fraction(0)
    for r in range(R + 1):
        lower += Fraction(tau_r(sig, r), 2 ** (r + 1))
    first_omitted = Fraction((R + 1) ** om, 2 ** (R + 1))
    tail = first_omitted / (1 - q) / 2
    return lower, lower + tail


def kalmar_series_exact(sig: Iterable[int]) -> int:
    """K(n) pinned by tightening the series bracket until it holds a single
    integer; independent of the other two methods."""
    sig = canonical_signature(sig)
    om = sum(sig)
    r = max(2 * om + 16, 64)
    while True:
        lo, hi = kalmar_series_bounds(sig, r)
        if math.ceil(lo) == math.floor(hi):
            return math.floor(hi)
        r *= 2


def kp_multinomial(sig: Iterable[int]) -> int:
    """Ordered factorizations into primes: the multinomial Om! / prod a_i!."""
    sig = canonical_signature(sig)
    out = math.factorial(sum(sig))
    for a in sig:
        out //= math.factorial(a)
    return out


def signatures_with_omega(om: int, max_part: int | None = None):
    """All canonical signatures with big_omega == om (integer partitions)."""
    if om == 0:
        yield ()
        return
    if max_part is None:
        max_part = om
    for first in range(min(om, max_part), 0, -1):
        for rest in signatures_with_omega(om - first, first):
            yield (first,) + rest


def eulerian_row(n: int) -> list[int]:
    """Row n of the Eulerian triangle: A(n, k) for k = 0..n-1."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    row = [1]
    for m in range(2, n + 1):
        new = [0] * m
        for k in range(m):
            new[k] = (k + 1) * (row[k] if k < m - 1 else 0) \
                   + (m - k) * (row[k - 1] if k >= 1 else 0)
        row = new
    return row


def eulerian_checksum(n: int) -> tuple[int, int]:
    """Check sum_k A(n,k) 2^k == K(q_1 q_2 ... q_n) for n distinct primes.

    Returns (lhs, rhs); raises if they differ (they never should).
    """
    if not 1 <= n <= 200:
        raise PreconditionError("n must be in 1..200")
    lhs = sum(a << k for k, a in enumerate(eulerian_row(n)))
    rhs = kalmar_macmahon((1,) * n)
    if lhs != rhs:
        raise KalmarError(f"Eulerian identity failed at n={n}: {lhs} != {rhs}")
    return lhs, rhs
