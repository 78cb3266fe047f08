"""The analytic machinery behind the asymptotic estimate of K(n).

For a vector x of non-negative reals (the prime-signature relaxed to reals):

    c(x)  - unique c > 0 with prod (1 + x_j/c) = 2; c(0) = 0 by convention
    T(x)  = sum x_i / (c + x_i), always in [1/2, 1]
    F(x)  = sum x_j log(1 + c(x)/x_j), concave, with 0 log 0 = 0
    A(x)  = (1/(2 sqrt 2)) e^(-Omega) prod (c + x_i)^(x_i) / Gamma(x_i + 1)
          = (1/(2 sqrt 2)) exp(F(x)) prod 1/s(x_j)
    B(x)  = sqrt(2 c(x) / T(x))
    s(x)  = Gamma(x+1) / (x^x e^(-x)), the Stirling correction

and the Evans estimate K(n) ~ sqrt(pi) A B for n with signature x.  A and the
estimate are carried as logarithms (F exceeds 700 at champion scale).

Appending zeros changes none of c, T, F; zero entries are dropped before
solving and A is assembled through the exp(F)/s form, where s(0) = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ConvergenceError, DomainError, KalmarError, ResourceLimitError
from .exact import kalmar_macmahon, signatures_with_omega

__all__ = [
    "solve_c",
    "t_of",
    "grad_c",
    "f_of",
    "grad_f",
    "hessian_form",
    "log_stirling_s",
    "stirling_s",
    "EvansEstimate",
    "evans_estimate",
    "RatioRow",
    "ratio_scan",
]

LOG2 = math.log(2.0)
_LOG_2SQRT2 = 1.5 * LOG2


def _checked(x: Iterable[float]) -> tuple[float, ...]:
    x = tuple(float(v) for v in x)
    if any(v < 0.0 for v in x):
        raise DomainError(f"vector entries must be >= 0, got {x}")
    return x


def solve_c(x: Sequence[float], rel_tol: float = 1e-12) -> float:
    """Unique c > 0 with prod (1 + x_j/c) = 2; returns 0.0 for the zero vector.

    Bisection on H(t) = sum log(1 + x_j/t) - log 2 over the guaranteed
    bracket [Omega, Omega/log 2], then Newton to machine accuracy (Newton is
    pushed past rel_tol so finite-difference users get full precision).
    """
    pos = [v for v in _checked(x) if v > 0.0]
    if not pos:
        return 0.0
    if len(pos) == 1:
        return pos[0]
    om = math.fsum(pos)
    lo, hi = om, om / LOG2

    def h(t: float) -> float:
        return math.fsum(math.log1p(v / t) for v in pos) - LOG2

    for _ in range(25):
        mid = 0.5 * (lo + hi)
        if h(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    for _ in range(12):
        slope = -math.fsum(v / (t + v) for v in pos) / t
        dt = h(t) / slope
        t -= dt
        if abs(dt) <= max(rel_tol, 1e-15) * t:
            slope = -math.fsum(v / (t + v) for v in pos) / t
            t -= h(t) / slope
            break
    return t


def t_of(x: Sequence[float]) -> float:
    """T(x) = sum x_i/(c + x_i), in [1/2, 1]."""
    x = _checked(x)
    c = solve_c(x)
    if c == 0.0:
        raise DomainError("T is undefined on the zero vector")
    return math.fsum(v / (c + v) for v in x)


def grad_c(x: Sequence[float], i: int) -> float:
    """dc/dx_i = (1/T) c/(c + x_i), 0-based coordinate; lies in [0, 2]."""
    x = _checked(x)
    c = solve_c(x)
    if c == 0.0:
        raise DomainError("gradient of c is undefined on the zero vector")
    t = math.fsum(v / (c + v) for v in x)
    return c / ((c + x[i]) * t)


def f_of(x: Sequence[float]) -> float:
    """F(x) = sum x_j log(1 + c(x)/x_j) with the 0 log 0 = 0 convention."""
    x = _checked(x)
    c = solve_c(x)
    return math.fsum(v * math.log1p(c / v) for v in x if v > 0.0)


def grad_f(x: Sequence[float], i: int) -> float:
    """dF/dx_i = log((c + x_i)/x_i), 0-based; domain error at x_i = 0."""
    x = _checked(x)
    if x[i] == 0.0:
        raise DomainError("dF/dx_i diverges at x_i = 0")
    c = solve_c(x)
    return math.log((c + x[i]) / x[i])


def hessian_form(x: Sequence[float], h: Sequence[float]) -> float:
    """Quadratic form of the second derivatives of F at x applied to h:

        (c/T) (sum h_i/(c+x_i))^2 - sum c h_i^2 / (x_i (c+x_i))

    Non-positive everywhere (F is concave).  Requires all x_i > 0.
    """
    x = _checked(x)
    if any(v == 0.0 for v in x):
        raise DomainError("Hessian form needs strictly positive entries")
    if len(h) != len(x):
        raise DomainError("h must have the same length as x")
    c = solve_c(x)
    t = math.fsum(v / (c + v) for v in x)
    cross = math.fsum(hi / (c + v) for hi, v in zip(h, x))
    diag = math.fsum(c * hi * hi / (v * (c + v)) for hi, v in zip(h, x))
    return (c / t) * cross * cross - diag


def log_stirling_s(x: float) -> float:
    """log of s(x) = Gamma(x+1)/(x^x e^(-x)); s(0) = 1 by the Gamma limit."""
    if x < 0.0:
        raise DomainError("s(x) needs x >= 0")
    if x == 0.0:
        return 0.0
    return math.lgamma(x + 1.0) - x * math.log(x) + x


def stirling_s(x: float) -> float:
    """Stirling correction s(x), between sqrt(2 pi x) and e sqrt(x) for x >= 1."""
    return math.exp(log_stirling_s(x))


def _exp_or_inf(v: float) -> float:
    return math.exp(v) if v < 709.0 else math.inf


@dataclass(frozen=True)
class EvansEstimate:
    c: float
    t: float              # T(x)
    f: float              # F(x)
    log_a: float          # log A(x)
    b: float              # B(x)
    log_estimate: float   # log(sqrt(pi) A B)

    @property
    def a(self) -> float:
        return _exp_or_inf(self.log_a)

    @property
    def estimate(self) -> float:
        return _exp_or_inf(self.log_estimate)


def evans_estimate(x: Sequence[float]) -> EvansEstimate:
    """Assemble c, T, F, log A, B and the estimate sqrt(pi) A B at x.

    A is computed through exp(F) * prod 1/s(x_j); on strictly positive input
    it is cross-checked against the defining product form to 1e-10 relative.
    """
    x = _checked(x)
    pos = [v for v in x if v > 0.0]
    if not pos:
        raise DomainError("the estimate needs a nonzero vector")
    c = solve_c(pos)
    om = math.fsum(pos)
    t = math.fsum(v / (c + v) for v in pos)
    f = math.fsum(v * math.log1p(c / v) for v in pos)
    log_a = -_LOG_2SQRT2 + f - math.fsum(log_stirling_s(v) for v in pos)
    if len(pos) == len(x):
        direct = -_LOG_2SQRT2 - om + math.fsum(
            v * math.log(c + v) - math.lgamma(v + 1.0) for v in pos
        )
        if abs(direct - log_a) > 1e-10 * max(1.0, abs(log_a)):
            raise ConvergenceError(
                f"log A disagreement: {log_a} (Stirling form) vs {direct} (direct)"
            )
    b = math.sqrt(2.0 * c / t)
    est = EvansEstimate(
        c=c, t=t, f=f, log_a=log_a, b=b,
        log_estimate=0.5 * math.log(math.pi) + log_a + math.log(b),
    )
    eps = 1e-9 * max(1.0, om)
    if not (om - eps <= c <= om / LOG2 + eps):
        raise ConvergenceError(f"c = {c} escaped [Omega, Omega/log 2]")
    if not (0.5 - 1e-12 <= t <= 1.0 + 1e-12):
        raise ConvergenceError(f"T = {t} escaped [1/2, 1]")
    if not (math.sqrt(2 * c) * (1 - 1e-12) <= b <= 2 * math.sqrt(c) * (1 + 1e-12)):
        raise ConvergenceError(f"B = {b} escaped [sqrt(2c), 2 sqrt(c)]")
    return est


@dataclass(frozen=True)
class RatioRow:
    omega: int
    min_ratio: float
    argmin: tuple[int, ...]
    max_ratio: float
    argmax: tuple[int, ...]


def ratio_scan(omega_max: int, max_signatures: int = 1_000_000) -> list[RatioRow]:
    """Extremes of K / (sqrt(pi) A B) over all signatures of each weight r.

    Verifies that the minimum sits at (r) and the maximum at (1, ..., 1)
    for every r <= omega_max, raising if the pattern ever breaks.
    """
    if omega_max < 1:
        raise DomainError("omega_max must be >= 1")
    rows = []
    seen = 0
    for r in range(1, omega_max + 1):
        best = worst = None
        for sig in signatures_with_omega(r):
            seen += 1
            if seen > max_signatures:
                raise ResourceLimitError(
                    f"signature count exceeded {max_signatures} at omega = {r}"
                )
            ratio = math.exp(math.log(kalmar_macmahon(sig))
                             - evans_estimate(sig).log_estimate)
            if best is None or ratio < best[0]:
                best = (ratio, sig)
            if worst is None or ratio > worst[0]:
                worst = (ratio, sig)
        if best[1] != (r,):
            raise KalmarError(f"ratio minimum at omega={r} is {best[1]}, expected ({r},)")
        if worst[1] != (1,) * r:
            raise KalmarError(f"ratio maximum at omega={r} is {worst[1]}, expected (1,)*{r}")
        rows.append(RatioRow(r, best[0], best[1], worst[0], worst[1]))
    return rows
