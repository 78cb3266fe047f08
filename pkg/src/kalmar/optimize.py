"""Constrained maximization of F over the domain sum x_i log p_i <= A.

The maximum is closed-form: with rho_k and a_k the truncated root and scale,

    x_i* = a_k A / (p_i^rho_k - 1),     c(x*) = a_k A,    F(x*) = rho_k A,

the budget constraint is tight and dF/dx_i(x*) = rho_k log p_i.  optimum()
builds the point and verifies all of these numerically.  deficit_check()
evaluates the quadratic penalty that any other point of the domain pays,
and witness_m() carries out the rounding construction that turns the
optimum into an actual integer m with n/2 < m <= n and a certified lower
bound on log K(m).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .constants import lagrange_scale, model_constants, solve_rho
from .errors import ConvergenceError, DomainError, PreconditionError, ResourceLimitError
from .evans import f_of, solve_c
from .exact import canonical_signature, kalmar_macmahon
from .primes import first_primes

__all__ = [
    "OptimumPoint",
    "optimum",
    "DeficitReport",
    "deficit_check",
    "ChosenK",
    "choose_k",
    "largest_divisor_leq",
    "WitnessResult",
    "witness_m",
]


@dataclass(frozen=True)
class OptimumPoint:
    k: int
    budget: float           # A; log n when derived from an integer
    rho_k: float
    a_k: float
    x_star: tuple[float, ...]
    c_star: float           # a_k * A
    f_star: float           # rho_k * A


def optimum(k: int, budget: float, tol: float = 1e-12) -> OptimumPoint:
    """The maximizer of F on {sum x_i log p_i <= A} over the first k primes.

    The closed form is verified on the spot: budget residual, c residual via
    solve_c, F residual via f_of, and the gradient condition, all to 1e-8
    relative.  A failure indicates a tolerance misconfiguration upstream.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    if not budget > 0.0:
        raise DomainError("the budget A must be positive")
    rho_k = solve_rho(k, tol)
    a_k = lagrange_scale(k, tol)
    primes = first_primes(k)
    logs = [math.log(p) for p in primes]
    x_star = tuple(a_k * budget / (math.exp(rho_k * lp) - 1.0) for lp in logs)
    c_star = a_k * budget
    f_star = rho_k * budget

    budget_resid = abs(math.fsum(x * lp for x, lp in zip(x_star, logs)) - budget)
    c_num = solve_c(x_star)
    f_num = f_of(x_star)
    grad_resid = max(
        abs(math.log((c_num + x) / x) - rho_k * lp) / (rho_k * lp)
        for x, lp in zip(x_star, logs)
    )
    checks = (
        budget_resid / budget,
        abs(c_num - c_star) / c_star,
        abs(f_num - f_star) / f_star,
        grad_resid,
    )
    if max(checks) > 1e-8:
        raise ConvergenceError(f"optimum residuals too large: {checks}")
    return OptimumPoint(k=k, budget=budget, rho_k=rho_k, a_k=a_k,
                        x_star=x_star, c_star=c_star, f_star=f_star)


@dataclass(frozen=True)
class DeficitReport:
    f_alpha: float
    f_star: float
    deficit: float          # (sum_{i<k} |a_i - x_i*| log p_i)^2 / (4 A log p_k)
    deficit_weak: float     # sum_{i<k} (a_i - x_i*)^2 log^2 p_i / (4 A log p_k)
    bound: float            # f_star - deficit
    bound_weak: float       # f_star - deficit_weak
    slack: float            # bound - f_alpha  (>= 0 up to rounding)
    slack_weak: float


def deficit_check(alpha: Sequence[float], k: int, budget: float) -> DeficitReport:
    """How far below F(x*) a point alpha of the domain must sit.

    Both penalty forms are reported; the squared-sum form is the stronger
    one.  The sums deliberately stop at index k-1: the last coordinate is
    absorbed by the constraint.
    """
    opt = optimum(k, budget)
    alpha = [float(v) for v in alpha]
    if len(alpha) > k:
        raise PreconditionError(f"alpha has {len(alpha)} entries, k = {k}")
    alpha += [0.0] * (k - len(alpha))
    if any(v < 0.0 for v in alpha):
        raise PreconditionError("alpha entries must be >= 0")
    logs = [math.log(p) for p in first_primes(k)]
    used = math.fsum(a * lp for a, lp in zip(alpha, logs))
    if used > budget * (1.0 + 1e-12) + 1e-12:
        raise PreconditionError(f"alpha uses {used} > budget {budget}")
    f_alpha = f_of(alpha)
    dev = [abs(a - x) * lp for a, x, lp in zip(alpha[: k - 1], opt.x_star, logs)]
    denom = 4.0 * budget * logs[-1]
    deficit = math.fsum(dev) ** 2 / denom
    deficit_weak = math.fsum(d * d for d in dev) / denom
    return DeficitReport(
        f_alpha=f_alpha,
        f_star=opt.f_star,
        deficit=deficit,
        deficit_weak=deficit_weak,
        bound=opt.f_star - deficit,
        bound_weak=opt.f_star - deficit_weak,
        slack=opt.f_star - deficit - f_alpha,
        slack_weak=opt.f_star - deficit_weak - f_alpha,
    )


class ChosenK(NamedTuple):
    k: int
    clamped: bool   # the floor formula gave < 2 and was raised to 2


def choose_k(log_n: float, kappa: float = 1.5) -> ChosenK:
    """k = floor(kappa (log n)^(1/rho) / log log n), clamped up to 2.

    kappa must stay below kappa_max = rho a^(1/rho); above it the last
    optimum coordinate x_k* eventually drops under 1 and the witness
    construction breaks down.
    """
    tab = model_constants()
    if not log_n > math.e:
        raise DomainError("need log n > e so that log log n > 1")
    if not 0.0 < kappa < tab.kappa_max:
        raise DomainError(f"kappa must lie in (0, {tab.kappa_max:.6f}), got {kappa}")
    raw = kappa * log_n ** (1.0 / tab.rho) / math.log(log_n)
    k = int(raw)
    if k < 2:
        return ChosenK(2, True)
    return ChosenK(k, False)


def largest_divisor_leq(k: int, bound, max_k: int = 40) -> int:
    """Largest divisor of p_1 p_2 ... p_k that is <= bound.

    Meet in the middle over the 2^k squarefree divisors: subset products of
    two prime halves, one side sorted, the other binary-searched.  bound may
    be an int, Fraction or float; comparisons are exact (floats are taken at
    their binary value).
    """
    if not 1 <= k <= 64:
        raise DomainError("k must be in 1..64")
    if k > max_k:
        raise ResourceLimitError(f"k = {k} exceeds the configured limit {max_k}")
    frac = Fraction(bound)
    if frac < 1:
        raise DomainError("bound must be >= 1")
    num, den = frac.numerator, frac.denominator
    primes = first_primes(k)
    half = k // 2

    def subset_products(ps):
        out = [1]
        for p in ps:
            out += [v * p for v in out]
        return out

    left = subset_products(primes[:half])
    right = sorted(subset_products(primes[half:]))
    best = 1
    for a in left:
        cap = num // (den * a)          # largest integer <= bound / a
        if cap < 1:
            continue
        i = bisect_right(right, cap)
        if i and a * right[i - 1] > best:
            best = a * right[i - 1]
    return best


@dataclass(frozen=True)
class WitnessResult:
    n_log: float
    k: int
    kappa: float
    x_star: tuple[float, ...]
    exponents: tuple[int, ...]      # per prime p_1 .. p_k
    m_signature: tuple[int, ...]    # canonical form of the exponents
    ratio_n_over_m: float           # in [1, 2)
    log_k_lower: float              # log K(m), exact or certified lower bound
    exact: bool                     # True when log_k_lower is exact log K(m)


def witness_m(log_n: float, kappa: float = 1.5, exact_omega_cap: int = 60,
              c3_fitted: float = 1.0, max_k: int = 40) -> WitnessResult:
    """Round the optimum to an integer witness m with 1 <= n/m < 2.

    m0 = prod p_i^floor(x_i*); d is the largest divisor of p_1...p_k below
    n/m0, and m = m0 d, so each exponent is floor(x_i*) or floor(x_i*) + 1.
    log K(m) is computed exactly while Omega(m) <= exact_omega_cap and
    otherwise replaced by the lower bound
    log(c3_fitted) + F(alpha) - k - (1/2) sum log alpha_i.
    """
    k, _ = choose_k(log_n, kappa)
    rho_k = solve_rho(k)
    a_k = lagrange_scale(k)
    primes = first_primes(k)
    logs = [math.log(p) for p in primes]
    x_star = tuple(a_k * log_n / (math.exp(rho_k * lp) - 1.0) for lp in logs)
    if x_star[-1] <= 1.0:
        raise PreconditionError(
            f"x_k* = {x_star[-1]:.4f} <= 1 at log n = {log_n}; "
            "raise log_n or lower kappa"
        )
    floors = [int(x) for x in x_star]
    m0_log = math.fsum(f * lp for f, lp in zip(floors, logs))
    d = largest_divisor_leq(k, math.exp(log_n - m0_log), max_k=max_k)
    exps = tuple(f + (1 if d % p == 0 else 0) for f, p in zip(floors, primes))
    m_log = math.fsum(e * lp for e, lp in zip(exps, logs))
    ratio = math.exp(log_n - m_log)
    if not 1.0 - 1e-9 <= ratio < 2.0 * (1.0 + 1e-9):
        raise ConvergenceError(f"witness ratio n/m = {ratio} escaped [1, 2)")
    sig = canonical_signature(exps)
    if sum(sig) <= exact_omega_cap:
        log_k_lower = float(math.log(kalmar_macmahon(sig)))
        exact = True
    else:
        log_k_lower = (math.log(c3_fitted) + f_of([float(e) for e in exps])
                       - k - 0.5 * math.fsum(math.log(e) for e in exps))
        exact = False
    return WitnessResult(
        n_log=log_n, k=k, kappa=kappa, x_star=x_star, exponents=exps,
        m_signature=sig, ratio_n_over_m=ratio, log_k_lower=log_k_lower,
        exact=exact,
    )
