"""Exact combinatorics and base-2 log-domain probability arithmetic.

Counts are plain Python integers: arbitrary precision, never silently
approximated.  Probabilities are carried as base-2 logarithms (floats
<= 0, with -inf standing for probability zero) because per-string values
like p**w * (1-p)**(n-w) underflow IEEE doubles near n ~ 1100 at p = 0.1.
Linear-domain probabilities only appear after aggregation over a class.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import DomainError

LOG_ZERO = float("-inf")

#: tolerance for "these probabilities sum to one"
PROB_SUM_TOL = 1e-12


def binomial(n: int, w: int) -> int:
    """Exact n-choose-w."""
    if n < 0:
        raise DomainError(f"binomial needs n >= 0, got n={n}")
    if not 0 <= w <= n:
        raise DomainError(f"binomial weight {w} outside [0, {n}]")
    return math.comb(n, w)


def multinomial(counts: Sequence[int], total: int | None = None) -> int:
    """Exact n!/(c_1! ... c_k!) with n = sum(counts).

    When ``total`` is given it must equal sum(counts); a mismatch means the
    caller's weight vector is inconsistent with its string length.
    """
    if any(c < 0 for c in counts):
        raise DomainError(f"negative count in {tuple(counts)!r}")
    n = sum(counts)
    if total is not None and total != n:
        raise DomainError(f"counts {tuple(counts)!r} sum to {n}, expected {total}")
    out = 1
    seen = 0
    for c in counts:
        seen += c
        out *= math.comb(seen, c)
    return out


def check_prob_vector(probs: Sequence[float]) -> None:
    """Reject vectors that are not a probability distribution."""
    if any(p < 0.0 for p in probs):
        raise DomainError(f"negative probability in {tuple(probs)!r}")
    total = math.fsum(probs)
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise DomainError(f"probabilities sum to {total!r}, not 1")


def string_logprob(counts: Sequence[int], probs: Sequence[float]) -> float:
    """log2 of prod_i p_i**n_i: the probability of one string with symbol
    counts ``counts`` under an i.i.d. symbol distribution ``probs``.

    A zero-probability symbol with a nonzero count gives -inf, not an error.
    """
    if len(counts) != len(probs):
        raise DomainError(f"{len(counts)} counts for {len(probs)} symbols")
    if any(c < 0 for c in counts):
        raise DomainError(f"negative count in {tuple(counts)!r}")
    check_prob_vector(probs)
    lp = 0.0
    for c, p in zip(counts, probs):
        if c == 0:
            continue
        if p == 0.0:
            return LOG_ZERO
        lp += c * math.log2(p)
    return lp


def weight_class_logprob(n: int, w: int, p: float) -> float:
    """log2 of C(n, w) * p**w * (1-p)**(n-w): total probability of the
    weight-w class of a binary-alphabet string distribution."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"symbol probability {p!r} outside (0, 1)")
    return math.log2(binomial(n, w)) + w * math.log2(p) + (n - w) * math.log2(1.0 - p)


def logprob_sum(values: Iterable[float]) -> float:
    """log2 of the summed probabilities behind ``values`` (base-2 logs).

    Sorts descending and accumulates offsets from the maximum with Kahan
    compensation, so the result is insensitive to input order well below
    the 1e-12 relative level.
    """
    finite = sorted((v for v in values if v != LOG_ZERO), reverse=True)
    if not finite:
        return LOG_ZERO
    top = finite[0]
    total = 0.0
    carry = 0.0
    for v in finite:
        term = 2.0 ** (v - top)
        y = term - carry
        t = total + y
        carry = (t - total) - y
        total = t
    return top + math.log2(total)


def exp2(lp: float) -> float:
    """Linear-domain probability of a base-2 log; underflows to 0.0."""
    return 2.0 ** lp


def binary_entropy(x: float) -> float:
    """h2(x) in bits, with h2(0) = h2(1) = 0 by continuity."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy argument {x!r} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def shannon_entropy(probs: Sequence[float]) -> float:
    """H(p_1 ... p_k) in bits."""
    check_prob_vector(probs)
    return -math.fsum(p * math.log2(p) for p in probs if p > 0.0)
