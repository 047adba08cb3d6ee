"""Compile weight-class tables into a message <-> error-string codec.

The codebook fixes, per admitted class, a capacity C_c proportional to the
class' per-string probability (floored exactly), and partitions each class
into n_c = floor(size_c / C_c) disjoint rank-interval subsets of C_c strings.
A uniform message picks a class and an offset; the shared key picks the
subset.  Key-averaged, every covered string carries mass 1/(C_total * n_c),
which is the closest floor-respecting approximation to the channel statistics.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .channels import (
    DEFAULT_ENUMERATION_CAP,
    SYMBOL_LETTERS,
    ChannelModel,
    TypicalWindow,
    WeightClass,
    WeightClassTable,
    asymptotic_entropy_per_qubit,
    build_table,
    full_window,
    make_window,
)
from .errors import (
    AtypicalStringError,
    DomainError,
    IntegrityError,
    NotACodewordError,
)
from .probmath import exp2, multinomial

#: exact-rational capacity arithmetic below this block length; above it the
#: log-space path with a 1-ulp-down bias keeps floors conservative
_EXACT_N = 64


@dataclass(frozen=True)
class CodebookClass:
    """An admitted class that survived capacity flooring."""

    counts: tuple[int, ...]
    size: int
    string_log2p: float
    capacity: int
    n_subsets: int
    msg_start: int

    @property
    def covered(self) -> int:
        """Strings reachable by some (message, key) pair."""
        return self.capacity * self.n_subsets


@dataclass(frozen=True)
class Codebook:
    channel: ChannelModel
    n: int
    window: TypicalWindow
    classes: tuple[CodebookClass, ...]
    dropped: tuple[WeightClass, ...]
    truncation_mass: float
    q_log: float
    c_total: int
    m_bits: float

    @property
    def n_subsets_max(self) -> int:
        return max(c.n_subsets for c in self.classes)

    @property
    def otp_bits(self) -> int:
        """Largest b with 2**b <= C_total: the XOR-closed message subspace
        used by one-time-pad mode."""
        return self.c_total.bit_length() - 1

    @cached_property
    def _class_index(self) -> dict[tuple[int, ...], int]:
        return {c.counts: i for i, c in enumerate(self.classes)}

    @cached_property
    def _dropped_counts(self) -> frozenset[tuple[int, ...]]:
        return frozenset(c.counts for c in self.dropped)

    @cached_property
    def _msg_starts(self) -> tuple[int, ...]:
        return tuple(c.msg_start for c in self.classes)

    def class_of_message(self, m: int) -> CodebookClass:
        if not 0 <= m < self.c_total:
            raise DomainError(f"message {m} outside [0, {self.c_total})")
        return self.classes[bisect_right(self._msg_starts, m) - 1]

    def class_of_counts(self, counts: tuple[int, ...]) -> CodebookClass:
        i = self._class_index.get(counts)
        if i is None:
            if counts in self._dropped_counts:
                raise NotACodewordError(
                    f"weight class {counts} was dropped at compile time "
                    f"(capacity floored to zero); no codeword lives there"
                )
            raise AtypicalStringError(
                f"weight class {counts} lies outside the typical window"
            )
        return self.classes[i]

    def counts_of(self, symbols: Sequence[int]) -> tuple[int, ...]:
        """Weight vector of an error string in this book's class coordinates."""
        if len(symbols) != self.n:
            raise DomainError(f"string length {len(symbols)} != block length {self.n}")
        full = [0] * self.channel.k
        for s in symbols:
            if not 0 <= s < self.channel.k:
                raise DomainError(f"symbol {s} outside alphabet of size {self.channel.k}")
            full[s] += 1
        if self.channel.grouped:
            return (full[0], self.n - full[0])
        return tuple(full)

    def summary(self) -> dict:
        return {
            "N": self.n,
            "channel": self.channel.spec_string(),
            "delta": self.window.delta,
            "C_total_log2": self.m_bits,
            "M_bits": self.m_bits,
            "classes": len(self.classes),
            "dropped_classes": len(self.dropped),
            "truncation_mass": self.truncation_mass,
        }


def _exact_capacity(
    channel: ChannelModel,
    n: int,
    cls: WeightClass,
    ref: WeightClass,
) -> int:
    """floor(size * p_class / p_ref), never above size."""
    if cls.counts == ref.counts:
        return cls.size
    if n <= _EXACT_N:
        fracs = channel.coordinate_fractions()
        ratio = Fraction(1)
        for f, c, rc in zip(fracs, cls.counts, ref.counts):
            if c != rc:
                if f == 0:
                    return 0
                ratio *= f ** (c - rc)
        return min(cls.size, (cls.size * ratio.numerator) // ratio.denominator)
    diff = cls.string_log2p - ref.string_log2p
    if diff == 0.0:
        return cls.size
    if diff > 0.0:
        # float dust promoted a non-reference class; clamp rather than trust it
        return cls.size
    ratio = math.nextafter(exp2(diff), 0.0)
    if ratio == 0.0:
        return 0
    fr = Fraction(ratio)
    return min(cls.size, (cls.size * fr.numerator) // fr.denominator)


def compile_codebook(
    channel: ChannelModel,
    n: int,
    coverage: float | None = None,
    *,
    window: TypicalWindow | None = None,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> Codebook:
    """Build the codec for one block length.

    Pass ``coverage`` (the window constant D) or an explicit ``window``;
    ``coverage=math.inf`` means the full, untruncated window.
    """
    if (coverage is None) == (window is None):
        raise DomainError("pass exactly one of coverage and window")
    if window is None:
        assert coverage is not None
        window = full_window(channel, n) if math.isinf(coverage) else make_window(channel, n, coverage)
    table = build_table(channel, n, window, enumeration_cap)
    ref = max(table.classes, key=lambda c: (c.string_log2p, c.counts))
    kept: list[CodebookClass] = []
    dropped: list[WeightClass] = []
    start = 0
    for cls in table.classes:
        cap = _exact_capacity(channel, n, cls, ref)
        if cap == 0:
            dropped.append(cls)
            continue
        kept.append(
            CodebookClass(cls.counts, cls.size, cls.string_log2p, cap, cls.size // cap, start)
        )
        start += cap
    if start < 2:
        raise DomainError(
            "rate zero: every admitted class floors to capacity 0 or 1 total; "
            "degenerate parameters (grow N or the window)"
        )
    return Codebook(
        channel=channel,
        n=n,
        window=window,
        classes=tuple(kept),
        dropped=tuple(dropped),
        truncation_mass=table.truncation_mass,
        q_log=ref.string_log2p,
        c_total=start,
        m_bits=math.log2(start),
    )


# --- canonical in-class bijections ------------------------------------------
#
# Grouped channels: rank = pos_rank * letters**w + letter_rank, where pos_rank
# ranks the ascending error-position tuple lexicographically (rank 0 puts all
# errors leftmost) and letter_rank reads the non-identity letters as base-
# `letters` digits, leftmost error position most significant.
# Random-unitary channels: lexicographic rank over whole symbol strings.


def _rank_positions(positions: Sequence[int], n: int, w: int) -> int:
    r = 0
    prev = -1
    for i, s in enumerate(positions):
        for v in range(prev + 1, s):
            r += math.comb(n - 1 - v, w - 1 - i)
        prev = s
    return r


def _unrank_positions(r: int, n: int, w: int) -> list[int]:
    out = []
    v = 0
    for i in range(w):
        c = math.comb(n - 1 - v, w - 1 - i)
        while r >= c:
            r -= c
            v += 1
            c = math.comb(n - 1 - v, w - 1 - i)
        out.append(v)
        v += 1
    return out


def rank_in_class(
    channel: ChannelModel, n: int, counts: tuple[int, ...], symbols: Sequence[int]
) -> int:
    if channel.grouped:
        w = counts[1]
        positions = [i for i, s in enumerate(symbols) if s != 0]
        if len(positions) != w:
            raise DomainError(f"string weight {len(positions)} does not match class {counts}")
        letters = channel.letters_per_error
        letter_rank = 0
        for i in positions:
            letter_rank = letter_rank * letters + (symbols[i] - 1)
        return _rank_positions(positions, n, w) * letters**w + letter_rank
    rem = list(counts)
    if len(symbols) != n or len(rem) != channel.k:
        raise DomainError("class shape does not match the channel")
    t = multinomial(rem)
    r = 0
    for pos, s in enumerate(symbols):
        total = n - pos
        if rem[s] == 0:
            raise DomainError(f"string does not match class {counts} at position {pos}")
        for u in range(s):
            if rem[u]:
                r += t * rem[u] // total
        t = t * rem[s] // total
        rem[s] -= 1
    return r


def unrank_in_class(
    channel: ChannelModel, n: int, counts: tuple[int, ...], rank: int
) -> tuple[int, ...]:
    if rank < 0:
        raise DomainError(f"rank {rank} negative")
    if channel.grouped:
        w = counts[1]
        letters = channel.letters_per_error
        block = letters**w
        pos_rank, letter_rank = divmod(rank, block)
        if pos_rank >= math.comb(n, w):
            raise DomainError(f"rank {rank} outside class of size {math.comb(n, w) * block}")
        positions = _unrank_positions(pos_rank, n, w)
        out = [0] * n
        for i in reversed(positions):
            letter_rank, digit = divmod(letter_rank, letters)
            out[i] = 1 + digit
        return tuple(out)
    rem = list(counts)
    t = multinomial(rem)
    if rank >= t:
        raise DomainError(f"rank {rank} outside class of size {t}")
    out = []
    for pos in range(n):
        total = n - pos
        for s in range(channel.k):
            if rem[s] == 0:
                continue
            cnt = t * rem[s] // total
            if rank < cnt:
                t = cnt
                rem[s] -= 1
                out.append(s)
                break
            rank -= cnt
        else:
            raise IntegrityError("unrank walked off the class")
    return tuple(out)


def encode(book: Codebook, m: int, key) -> tuple[int, ...]:
    """Map message m to an error string using the key's subset choice."""
    cls = book.class_of_message(m)
    r = m - cls.msg_start
    j = key.draw_subset_index(cls.n_subsets, book.n_subsets_max)
    return unrank_in_class(book.channel, book.n, cls.counts, j * cls.capacity + r)


def decode(book: Codebook, symbols: Sequence[int], key) -> int:
    """Invert encode; the key stream must sit at the same block position."""
    cls = book.class_of_counts(book.counts_of(symbols))
    j = key.draw_subset_index(cls.n_subsets, book.n_subsets_max)
    rank = rank_in_class(book.channel, book.n, cls.counts, symbols)
    r = rank - j * cls.capacity
    if not 0 <= r < cls.capacity:
        raise NotACodewordError(
            f"string rank {rank} falls outside keyed subset {j} of class {cls.counts}"
        )
    return cls.msg_start + r


@dataclass(frozen=True)
class RateReport:
    m_bits: float
    asymptote_bits: float

    @property
    def ratio(self) -> float:
        return self.m_bits / self.asymptote_bits if self.asymptote_bits else math.inf


def achievable_rate(
    channel: ChannelModel,
    n: int,
    coverage: float,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[RateReport, Codebook]:
    """Compiled M_bits next to the N * H asymptote it converges to."""
    book = compile_codebook(channel, n, coverage, enumeration_cap=enumeration_cap)
    return RateReport(book.m_bits, n * asymptotic_entropy_per_qubit(channel)), book


def string_to_letters(symbols: Sequence[int]) -> str:
    return "".join(SYMBOL_LETTERS[s] for s in symbols)


def letters_to_string(text: str) -> tuple[int, ...]:
    try:
        return tuple(SYMBOL_LETTERS.index(ch) for ch in text.upper())
    except ValueError:
        raise DomainError(f"unknown error letter in {text!r}") from None
