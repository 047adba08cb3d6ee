"""Secrecy metrics and upper bounds.

Secrecy is evaluated as total-variation distance between the key-averaged
syndrome distribution the codec induces and the distribution the emulated
channel would produce.  For a nondegenerate code, distinct typical errors
send the codeword to orthogonal subspaces, so the trace distance between
Eve's averaged state and the channel output reduces to exactly this
classical distance for classical-message encodings; the exact quantum
counterpart at small scale lives in fivequbit.eve_reduced_state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import ChannelModel, asymptotic_entropy_per_qubit, symbols_logprob
from .codec import Codebook, rank_in_class
from .errors import (
    AtypicalStringError,
    DomainError,
    IntegrityError,
    NotACodewordError,
)
from .probmath import binary_entropy, exp2

_LN2 = math.log(2.0)


def _mass(log2_count: float, lp: float) -> float:
    """count * 2**lp without leaving the representable range."""
    return exp2(log2_count + lp)


def _l1_term(log2_count: float, lp_a: float, lp_b: float) -> float:
    """count * |2**lp_a - 2**lp_b|, exactly zero on equal logs."""
    if lp_a == lp_b:
        return 0.0
    hi, lo = (lp_a, lp_b) if lp_a > lp_b else (lp_b, lp_a)
    return _mass(log2_count, hi) * -math.expm1((lo - hi) * _LN2)


@dataclass(frozen=True)
class InducedClass:
    """Key-and-message-averaged mass in one kept class."""

    counts: tuple[int, ...]
    covered: int
    string_log2p: float  # induced per-covered-string log2 mass


def induced_distribution(book: Codebook) -> tuple[InducedClass, ...]:
    """Closed-form induced distribution, one entry per kept class.

    A covered string of class c carries 1/(C_total * n_subsets(c)); the
    leftover strings of each class, dropped classes, and atypical strings
    carry nothing.  Total mass is exactly 1: sum_c covered_c/(C*n_c) =
    sum_c C_c/C.
    """
    return tuple(
        InducedClass(c.counts, c.covered, -math.log2(book.c_total * c.n_subsets))
        for c in book.classes
    )


@dataclass(frozen=True)
class SecrecyReport:
    tv_distance: float
    truncation_mass: float
    rounding_residual: float
    delta_param: float
    classes_dropped: int

    def as_dict(self) -> dict:
        return {
            "tv_distance": self.tv_distance,
            "truncation_mass": self.truncation_mass,
            "rounding_residual": self.rounding_residual,
            "delta_param": self.delta_param,
            "classes_dropped": self.classes_dropped,
        }


def tv_to_channel(book: Codebook) -> SecrecyReport:
    """Exact TV distance between induced and channel string distributions.

    Computed class-by-class: each covered string contributes
    |1/(C*n_c) - p_c|, each uncovered-but-typical string p_c, each atypical
    string p_c (their total is the table's truncation mass); no string
    enumeration happens.  The decomposition tv = (truncation + rounding)/2
    is exact because the induced distribution is supported on covered
    strings only.
    """
    rounding = []
    for cls, ind in zip(book.classes, induced_distribution(book)):
        if ind.counts != cls.counts:
            raise IntegrityError("class order diverged between book and induced law")
        rounding.append(_l1_term(math.log2(cls.covered), ind.string_log2p, cls.string_log2p))
        leftover = cls.size - cls.covered
        if leftover:
            rounding.append(_mass(math.log2(leftover), cls.string_log2p))
    for cls in book.dropped:
        rounding.append(_mass(math.log2(cls.size), cls.string_log2p))
    rounding_residual = math.fsum(rounding)
    tv = 0.5 * (book.truncation_mass + rounding_residual)
    return SecrecyReport(
        tv_distance=tv,
        truncation_mass=book.truncation_mass,
        rounding_residual=rounding_residual,
        delta_param=book.window.delta,
        classes_dropped=len(book.dropped),
    )


def string_llr(book: Codebook, symbols) -> float:
    """log2 P_induced(e) - log2 P_channel(e); -inf when e is never emitted.

    This is the statistic an optimal distinguisher thresholds on.
    """
    lp_ch = symbols_logprob(book.channel, symbols)
    try:
        cls = book.class_of_counts(book.counts_of(symbols))
    except (AtypicalStringError, NotACodewordError):
        return -math.inf
    if rank_in_class(book.channel, book.n, cls.counts, symbols) >= cls.covered:
        return -math.inf
    return -math.log2(book.c_total * cls.n_subsets) - lp_ch


def entropy_sigma_e(channel: ChannelModel, n: int) -> float:
    """Entropy (bits) of Eve's channel-output state, N * H(single qubit).

    Exact maximum over pure inputs for the bit flip channel; for the
    depolarizing and random-unitary channels this is the nondegenerate-code
    operating value, not a proven maximum.
    """
    if n < 1:
        raise DomainError(f"block length {n} must be positive")
    return n * asymptotic_entropy_per_qubit(channel)


def g_term(n: int, delta: float) -> float:
    """Secrecy penalty delta*N + h2(delta)."""
    if not 0.0 <= delta <= 1.0:
        raise DomainError(f"delta {delta!r} outside [0, 1]")
    return delta * n + binary_entropy(delta)


def f_term(n: int, eps: float) -> float:
    """Recoverability penalty eps*N + (1+eps)*h2(eps/(1+eps))."""
    if not 0.0 <= eps <= 1.0:
        raise DomainError(f"eps {eps!r} outside [0, 1]")
    return eps * n + (1.0 + eps) * binary_entropy(eps / (1.0 + eps))


@dataclass(frozen=True)
class BoundReport:
    h_sigma_e: float
    g_term: float
    f_term: float
    m_upper: float
    m_achieved: float

    def as_dict(self) -> dict:
        return {
            "H_sigmaE": self.h_sigma_e,
            "g_term": self.g_term,
            "f_term": self.f_term,
            "M_upper": self.m_upper,
            "M_achieved": self.m_achieved,
        }


def upper_bound(
    channel: ChannelModel, n: int, delta: float, eps: float, m_achieved: float
) -> BoundReport:
    """M <= H(sigma_E) + g(N, delta) + f(N, eps); violation flags a codec bug."""
    h = entropy_sigma_e(channel, n)
    g = g_term(n, delta)
    f = f_term(n, eps)
    upper = h + g + f
    if m_achieved > upper:
        raise IntegrityError(
            f"achieved rate {m_achieved} exceeds the converse bound {upper}; "
            f"the codec is emitting more than the channel entropy supports"
        )
    return BoundReport(h, g, f, upper, m_achieved)


@dataclass(frozen=True)
class AlphaBound:
    alpha_diag: tuple[float, ...]
    bound_bits: float
    completeness: float  # sum of raw alpha_kk before renormalization


def kl_alpha_bound(
    kraus_ops, projector, tol: float = 1e-8
) -> AlphaBound:
    """Error-entropy bound from the correctability matrix.

    Verifies P E_i^dag E_j P = alpha_ij P for all pairs, diagonalizes the
    Hermitian alpha, renormalizes the diagonal when the Kraus set is a
    truncation (completeness < 1), and returns -sum a_k log2 a_k.
    """
    ops = [np.asarray(e, dtype=complex) for e in kraus_ops]
    p = np.asarray(projector, dtype=complex)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise DomainError("projector must be a square matrix")
    if np.max(np.abs(p @ p - p)) > tol or np.max(np.abs(p - p.conj().T)) > tol:
        raise DomainError("projector is not an orthogonal projector")
    dim = np.trace(p).real
    if dim < 0.5:
        raise DomainError("projector has (near) zero rank")
    m = len(ops)
    alpha = np.empty((m, m), dtype=complex)
    worst = 0.0
    worst_pair = (0, 0)
    for i in range(m):
        for j in range(m):
            block = p @ ops[i].conj().T @ ops[j] @ p
            a = np.trace(block) / dim
            alpha[i, j] = a
            resid = np.max(np.abs(block - a * p))
            if resid > worst:
                worst, worst_pair = resid, (i, j)
    if worst > tol:
        raise DomainError(
            f"not correctable on this code: Knill-Laflamme residual {worst:.3e} "
            f"at Kraus pair {worst_pair} exceeds {tol:.1e}"
        )
    if np.max(np.abs(alpha - alpha.conj().T)) > tol:
        raise DomainError("alpha matrix is not Hermitian within tolerance")
    eigs = np.linalg.eigvalsh((alpha + alpha.conj().T) / 2.0)
    if eigs.min() < -tol:
        raise DomainError(f"alpha has a negative eigenvalue {eigs.min():.3e}")
    diag = np.clip(eigs, 0.0, None)
    completeness = float(diag.sum())
    if completeness <= 0.0:
        raise DomainError("alpha diagonal sums to zero")
    normed = diag / completeness
    bound = float(-math.fsum(a * math.log2(a) for a in normed if a > 0.0))
    return AlphaBound(tuple(float(a) for a in normed), bound, completeness)
