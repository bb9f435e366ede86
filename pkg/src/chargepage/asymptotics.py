"""Exact state counting, closed-form large-N expressions and unconstrained baselines."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Sequence

import numpy as np
from scipy.special import digamma, gammaln

Model = Literal["noncommuting", "commuting"]

# exact big-integer arithmetic up to this N, log-gamma above
EXACT_LIMIT = 20


def multinomial(n: int, ks: Sequence[int]) -> int:
    if sum(ks) != n or any(k < 0 for k in ks):
        raise ValueError(f"invalid multinomial ({n}; {tuple(ks)})")
    out = math.factorial(n)
    for k in ks:
        out //= math.factorial(k)
    return out


def log_multinomial(n: int, ks: Sequence[int]) -> float:
    return float(gammaln(n + 1) - sum(gammaln(k + 1) for k in ks))


def catalan(a: int, b: int) -> int:
    """Catalan-triangle entry ((a - b + 1) / (a + 1)) * binom(a + b, b)."""
    if b < 0 or a < b:
        raise ValueError(f"catalan({a}, {b}) requires a >= b >= 0")
    return (a - b + 1) * math.comb(a + b, b) // (a + 1)


def log_catalan(a: int, b: int) -> float:
    if b < 0 or a < b:
        raise ValueError(f"catalan({a}, {b}) requires a >= b >= 0")
    return (math.log(a - b + 1) - math.log(a + 1)
            + float(gammaln(a + b + 1) - gammaln(b + 1) - gammaln(a + 1)))


def unconstrained_page(n_a: int, n_b: int, d: int = 4) -> float:
    """N_A log d - d^(N_A - N_B) / 2, valid for N_A <= N_B."""
    if n_a > n_b:
        raise ValueError("unconstrained_page requires n_a <= n_b")
    return n_a * math.log(d) - 0.5 * float(d) ** (n_a - n_b)


def exact_page(dim_a: int, dim_b: int) -> float:
    """Page's exact Haar average of the entanglement entropy for a dim_a x dim_b split."""
    m, n = sorted((dim_a, dim_b))
    if m * n <= 10 ** 6:
        harmonic = math.fsum(1.0 / k for k in range(n + 1, m * n + 1))
    else:
        harmonic = float(digamma(m * n + 1) - digamma(n + 1))
    return harmonic - (m - 1) / (2 * n)


def page_baseline(n_a: int, n_sites: int, kind: str = "eq4", d: int = 4) -> float:
    """Unconstrained reference curve, mirrored about N/2 so it is defined for every N_A."""
    n_b = n_sites - n_a
    if kind == "eq4":
        return unconstrained_page(min(n_a, n_b), max(n_a, n_b), d)
    if kind == "exact-page":
        return exact_page(d ** n_a, d ** n_b)
    raise ValueError(f"unknown baseline {kind!r}")


@dataclass(frozen=True)
class CountingTermResult:
    value: float
    method: str
    model: str
    n_sites: int
    n_a: int


def _commuting_terms(n_sites: int, n_a: int):
    q = n_sites // 4
    for a1 in range(min(q, n_a) + 1):
        for a2 in range(min(q, n_a - a1) + 1):
            for a3 in range(min(q, n_a - a1 - a2) + 1):
                a4 = n_a - a1 - a2 - a3
                if 0 <= a4 <= q:
                    yield (a1, a2, a3, a4), (q - a1, q - a2, q - a3, q - a4)


def exact_counting_commuting(n_sites: int, n_a: int) -> CountingTermResult:
    """Entropy of the reduced maximally mixed state of the commuting microcanonical sector.

    Reduced-state eigenvalue D_B / D with multiplicity d_A for every split of the
    Bell populations between A and B.
    """
    if n_sites % 4:
        raise ValueError("commuting microcanonical sector needs N divisible by 4")
    if not 0 <= n_a <= n_sites:
        raise ValueError("n_a out of range")
    n_b = n_sites - n_a
    q = n_sites // 4
    total = 0.0
    if n_sites <= EXACT_LIMIT:
        big_d = multinomial(n_sites, [q] * 4)
        log_d = math.log(big_d)
        for a_pops, b_pops in _commuting_terms(n_sites, n_a):
            d_a = multinomial(n_a, a_pops)
            d_b = multinomial(n_b, b_pops)
            weight = Fraction(d_a * d_b, big_d)
            total -= float(weight) * (math.log(d_b) - log_d)
    else:
        log_d = log_multinomial(n_sites, [q] * 4)
        for a_pops, b_pops in _commuting_terms(n_sites, n_a):
            log_da = log_multinomial(n_a, a_pops)
            log_db = log_multinomial(n_b, b_pops)
            total -= math.exp(log_da + log_db - log_d) * (log_db - log_d)
    return CountingTermResult(total, "exact-sum", "commuting", n_sites, n_a)


def exact_counting_noncommuting(n_sites: int, n_a: int) -> CountingTermResult:
    """Entropy of the reduced maximally mixed state of the noncommuting microcanonical sector.

    s_A runs over integers when N_A is even and half-integers when N_A is odd,
    up to min(N_A, N_B) / 2; the b-qubits add N_A log 2.
    """
    if n_sites % 2:
        raise ValueError("noncommuting microcanonical sector needs even N")
    if not 0 <= n_a <= n_sites:
        raise ValueError("n_a out of range")
    n_b = n_sites - n_a
    half = n_sites // 2
    total = n_a * math.log(2)
    exact = n_sites <= EXACT_LIMIT
    big_d = catalan(half, half)
    log_d = math.log(big_d) if exact else log_catalan(half, half)
    for s2 in range(n_a % 2, min(n_a, n_b) + 1, 2):
        ia, ib = (n_a - s2) // 2, (n_b - s2) // 2
        if exact:
            d_a = catalan(ia + s2, ia)
            d_b = catalan(ib + s2, ib)
            weight = float(Fraction(d_a * d_b, big_d))
            log_ratio = math.log(d_b) - log_d - math.log(s2 + 1)
        else:
            log_da = log_catalan(ia + s2, ia)
            log_db = log_catalan(ib + s2, ib)
            weight = math.exp(log_da + log_db - log_d)
            log_ratio = log_db - log_d - math.log(s2 + 1)
        total -= weight * log_ratio
    return CountingTermResult(total, "exact-sum", "noncommuting", n_sites, n_a)


def exact_counting(model: Model, n_sites: int, n_a: int) -> CountingTermResult:
    if model == "noncommuting":
        return exact_counting_noncommuting(n_sites, n_a)
    if model == "commuting":
        return exact_counting_commuting(n_sites, n_a)
    raise ValueError(f"unknown model {model!r}")


def leading_counting_term(n_sites: int, n_a: int, d: int = 4) -> float:
    """Common O(N^0) part: N_A log d - (3/2) log(N / N_B) + 3 N_A / (2N)."""
    n_b = n_sites - n_a
    return n_a * math.log(d) - 1.5 * math.log(n_sites / n_b) + 1.5 * n_a / n_sites


def closed_form_counting(model: Model, n_sites: int, n_a: int) -> CountingTermResult:
    """Large-N state-counting term through O(1/N); the models differ in the sign of
    N_A^2 / (2 N^2 N_B)."""
    n_b = n_sites - n_a
    if n_a < 1 or n_b < 1:
        raise ValueError("closed form needs N_A >= 1 and N_B >= 1")
    sign = {"noncommuting": 1, "commuting": -1}.get(model)
    if sign is None:
        raise ValueError(f"unknown model {model!r}")
    value = (leading_counting_term(n_sites, n_a) + 3 * n_a / (4 * n_sites ** 2)
             + sign * n_a ** 2 / (2 * n_sites ** 2 * n_b))
    return CountingTermResult(value, "closed-form", model, n_sites, n_a)


def closed_form_gap(n_sites: int, n_a: int) -> float:
    """Noncommuting minus commuting closed form, N_A^2 / (N^2 N_B)."""
    return n_a ** 2 / (n_sites ** 2 * (n_sites - n_a))


def convergence_exponent(sizes: Iterable[float], errors: Iterable[float]) -> float:
    """Least-squares slope of log|error| against log N."""
    x = np.log(np.asarray(list(sizes), dtype=float))
    y = np.log(np.abs(np.asarray(list(errors), dtype=float)))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def additivity_curve(n_sites: int, n_a: int, single_charge, baseline: float) -> float:
    """baseline - 3 (baseline - single-charge curve).

    ``single_charge`` is either a number or a page-curve estimate providing
    ``mean(n_a)``.
    """
    value = single_charge.mean(n_a) if hasattr(single_charge, "mean") else float(single_charge)
    return baseline - 3.0 * (baseline - value)


@dataclass(frozen=True)
class AdditivityComparison:
    n_a: int
    ansatz: float
    noncommuting: float
    commuting: float

    @property
    def noncommuting_superadditive(self) -> bool:
        return self.noncommuting > self.ansatz

    @property
    def commuting_subadditive(self) -> bool:
        return self.commuting < self.ansatz
