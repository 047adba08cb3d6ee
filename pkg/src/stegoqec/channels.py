"""Single-qubit channel models, typical windows, and weight-class tables.

A channel is the probability vector of its single-qubit error alphabet,
identity first.  Bit-flip and depolarizing channels class strings by total
error weight w (the depolarizing class keeps a 3**w letter multiplicity);
random-unitary channels keep the full per-symbol weight vector.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CapacityError, DomainError
from .probmath import LOG_ZERO, check_prob_vector, exp2, multinomial, shannon_entropy

BIT_FLIP = "bitflip"
DEPOLARIZING = "depol"
RANDOM_UNITARY = "ru"

_KINDS = (BIT_FLIP, DEPOLARIZING, RANDOM_UNITARY)

#: letters used to render error strings; index 0 is the identity outcome
SYMBOL_LETTERS = "IXYZABCDEFGHJKLMNOPQRSTUVW"

#: float dust in n*p*(1 +/- delta) must not move an integer window edge
_EDGE_SNAP = 1e-9

DEFAULT_ENUMERATION_CAP = 10_000_000


@dataclass(frozen=True)
class ChannelModel:
    """An i.i.d. single-qubit error channel to be emulated."""

    kind: str
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise DomainError(f"unknown channel kind {self.kind!r}")
        if len(self.probs) < 2:
            raise DomainError("a channel needs at least two outcomes")
        check_prob_vector(self.probs)
        if self.kind == BIT_FLIP and len(self.probs) != 2:
            raise DomainError("bit-flip channel has exactly two outcomes")
        if self.kind == DEPOLARIZING and len(self.probs) != 4:
            raise DomainError("depolarizing channel has exactly four outcomes")
        if len(self.probs) > len(SYMBOL_LETTERS):
            raise DomainError(f"at most {len(SYMBOL_LETTERS)} outcomes supported")

    @classmethod
    def bit_flip(cls, p: float) -> "ChannelModel":
        if not 0.0 < p < 1.0:
            raise DomainError(f"bit-flip probability {p!r} outside (0, 1)")
        return cls(BIT_FLIP, (1.0 - p, p))

    @classmethod
    def depolarizing(cls, p: float) -> "ChannelModel":
        if not 0.0 < p < 1.0:
            raise DomainError(f"depolarizing probability {p!r} outside (0, 1)")
        return cls(DEPOLARIZING, (1.0 - p, p / 3.0, p / 3.0, p / 3.0))

    @classmethod
    def random_unitary(cls, probs: Iterable[float]) -> "ChannelModel":
        return cls(RANDOM_UNITARY, tuple(float(p) for p in probs))

    @property
    def k(self) -> int:
        return len(self.probs)

    @property
    def error_prob(self) -> float:
        """Total probability of a non-identity outcome on one qubit."""
        return math.fsum(self.probs[1:])

    @property
    def grouped(self) -> bool:
        """True when string classes collapse to the total error weight."""
        return self.kind in (BIT_FLIP, DEPOLARIZING)

    @property
    def letters_per_error(self) -> int:
        # distinct error letters sharing one weight coordinate
        return 3 if self.kind == DEPOLARIZING else 1

    def coordinate_logprobs(self) -> tuple[float, ...]:
        """log2 symbol probability per class coordinate.

        Grouped channels use two coordinates (identity count, error weight),
        the error coordinate carrying the per-letter probability; random
        unitary channels use one coordinate per symbol.
        """
        if self.grouped:
            return (math.log2(self.probs[0]), math.log2(self.probs[1]))
        return tuple(math.log2(p) if p > 0.0 else LOG_ZERO for p in self.probs)

    def coordinate_fractions(self) -> tuple[Fraction, ...]:
        """Exact rational per-coordinate symbol probabilities (of the stored
        float values, which are exact binary rationals)."""
        if self.grouped:
            return (Fraction(self.probs[0]), Fraction(self.probs[1]))
        return tuple(Fraction(p) for p in self.probs)

    def spec_string(self) -> str:
        if self.kind == BIT_FLIP:
            return f"bitflip:p={self.probs[1]:g}"
        if self.kind == DEPOLARIZING:
            return f"depol:p={self.error_prob:g}"
        return "ru:p=" + ",".join(f"{p:g}" for p in self.probs)


def parse_channel(spec: str) -> ChannelModel:
    """Parse 'bitflip:p=0.1', 'depol:p=0.1', or 'ru:p=0.7,0.2,0.1'."""
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise DomainError(f"bad channel spec {spec!r}: expected '<kind>:p=...'")
    if not rest.startswith("p="):
        raise DomainError(f"bad channel spec {spec!r}: parameters must start with 'p='")
    body = rest[2:]
    try:
        values = [float(tok) for tok in body.split(",")]
    except ValueError:
        raise DomainError(f"bad channel spec {spec!r}: {body!r} is not a number list") from None
    if kind == BIT_FLIP:
        if len(values) != 1:
            raise DomainError(f"bitflip takes one probability, got {body!r}")
        return ChannelModel.bit_flip(values[0])
    if kind == DEPOLARIZING:
        if len(values) != 1:
            raise DomainError(f"depol takes one probability, got {body!r}")
        return ChannelModel.depolarizing(values[0])
    if kind == RANDOM_UNITARY:
        return ChannelModel.random_unitary(values)
    raise DomainError(f"unknown channel kind {kind!r}")


def asymptotic_entropy_per_qubit(channel: ChannelModel) -> float:
    """Shannon entropy (bits) of the single-qubit outcome distribution.

    This is h(p) for the bit flip channel, -p*log2(p/3) - (1-p)*log2(1-p)
    for the depolarizing channel, and H(p_1 ... p_k) in general: the
    asymptotic per-qubit hiding rate.
    """
    return shannon_entropy(channel.probs)


def symbols_logprob(channel: ChannelModel, symbols: Sequence[int]) -> float:
    """log2 channel probability of an explicit error string."""
    lp = 0.0
    for s in symbols:
        if not 0 <= s < channel.k:
            raise DomainError(f"symbol {s} outside alphabet of size {channel.k}")
        p = channel.probs[s]
        if p == 0.0:
            return LOG_ZERO
        lp += math.log2(p)
    return lp


@dataclass(frozen=True)
class TypicalWindow:
    """Integer bands on weight coordinates that define the admitted classes.

    ``ranges`` holds one inclusive (lo, hi) band per class coordinate: the
    single error-weight coordinate for grouped channels, or one band per
    symbol for random-unitary channels.  ``clamped`` records that a raw band
    hit the [0, n] boundary, which happens once delta >= 1 (small n*p); the
    construction stays usable there, only the typicality guarantee loosens.
    """

    delta: float
    coverage: float
    ranges: tuple[tuple[int, int], ...]
    grouped: bool
    clamped: bool = False

    @property
    def weight_range(self) -> tuple[int, int]:
        if not self.grouped:
            raise DomainError("per-symbol window has no single weight range")
        return self.ranges[0]

    @property
    def is_full(self) -> bool:
        return all(lo == 0 for lo, _hi in self.ranges) and all(
            hi >= self._n_hint() for _lo, hi in self.ranges
        )

    def _n_hint(self) -> int:
        # full-cover test only ever compares against hi itself; ranges are
        # already clipped to [0, n] at construction
        return max(hi for _lo, hi in self.ranges)


def _band(np_: float, delta: float, n: int) -> tuple[int, int, bool]:
    raw_lo = np_ * (1.0 - delta)
    raw_hi = np_ * (1.0 + delta)
    lo = math.ceil(raw_lo - _EDGE_SNAP)
    hi = math.floor(raw_hi + _EDGE_SNAP)
    # the raw band carries the clamping information; ceil already swallows
    # small negative overhangs
    clamped = raw_lo < 0.0 or raw_hi > n
    return max(lo, 0), min(hi, n), clamped


def make_window(channel: ChannelModel, n: int, coverage: float) -> TypicalWindow:
    """Typical window of relative half-width delta = coverage * sqrt((1-p)/(p*n)).

    Grouped channels put one band on the total error weight, with p the
    total error probability.  Random-unitary channels band every symbol
    count, taking the widest (most conservative) delta over the symbols.
    """
    if n < 1:
        raise DomainError(f"block length {n} must be positive")
    if not (coverage > 0.0 and math.isfinite(coverage)):
        raise DomainError(f"coverage constant {coverage!r} must be positive and finite")
    if channel.grouped:
        p = channel.error_prob
        if p <= 0.0:
            raise DomainError("channel has no error mass to hide in")
        delta = coverage * math.sqrt((1.0 - p) / (p * n))
        lo, hi, clamped = _band(n * p, delta, n)
        if lo > hi:
            raise DomainError(
                f"typical window is empty on the error-weight coordinate "
                f"(n*p = {n * p:g}, delta = {delta:g})"
            )
        return TypicalWindow(delta, coverage, ((lo, hi),), True, clamped)
    positive = [p for p in channel.probs if p > 0.0]
    if len(positive) < 2:
        raise DomainError("random-unitary window needs at least two possible symbols")
    delta = max(coverage * math.sqrt((1.0 - p) / (p * n)) for p in positive)
    ranges: list[tuple[int, int]] = []
    clamped_any = False
    for i, p in enumerate(channel.probs):
        if p == 0.0:
            ranges.append((0, 0))
            continue
        lo, hi, clamped = _band(n * p, delta, n)
        if lo > hi:
            raise DomainError(
                f"typical window is empty for symbol {i} "
                f"(n*p_i = {n * p:g}, delta = {delta:g})"
            )
        ranges.append((lo, hi))
        clamped_any = clamped_any or clamped
    return TypicalWindow(delta, coverage, tuple(ranges), False, clamped_any)


def full_window(channel: ChannelModel, n: int) -> TypicalWindow:
    """Window admitting every weight vector: no truncation, delta = inf."""
    if n < 1:
        raise DomainError(f"block length {n} must be positive")
    width = 1 if channel.grouped else channel.k
    return TypicalWindow(math.inf, math.inf, ((0, n),) * width, channel.grouped, True)


@dataclass(frozen=True)
class WeightClass:
    """One admitted string class: a weight vector, its exact string count,
    and the shared per-string log probability."""

    counts: tuple[int, ...]
    size: int
    string_log2p: float


@dataclass(frozen=True)
class WeightClassTable:
    channel: ChannelModel
    n: int
    window: TypicalWindow
    classes: tuple[WeightClass, ...]
    truncation_mass: float


def build_table(
    channel: ChannelModel,
    n: int,
    window: TypicalWindow,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> WeightClassTable:
    """Enumerate the admitted classes with exact sizes and log probabilities.

    Grouped channels get one entry per total weight w, of size
    C(n, w) * letters**w.  Random-unitary channels get one entry per
    admitted weight vector; the enumeration is refused above the cap.
    """
    if any(hi > n or lo < 0 for lo, hi in window.ranges):
        raise DomainError("window ranges exceed the block length")
    if channel.grouped != window.grouped:
        raise DomainError("window was built for a different channel shape")
    classes: list[WeightClass] = []
    if channel.grouped:
        lp_id, lp_err = channel.coordinate_logprobs()
        variants = channel.letters_per_error
        lo, hi = window.weight_range
        for w in range(lo, hi + 1):
            size = math.comb(n, w) * variants**w
            classes.append(WeightClass((n - w, w), size, w * lp_err + (n - w) * lp_id))
    else:
        widths = [hi - lo + 1 for lo, hi in window.ranges]
        dep = widths.index(max(widths))
        bound = 1
        for i, wd in enumerate(widths):
            if i != dep:
                bound *= wd
        if bound > enumeration_cap:
            raise CapacityError(
                f"{bound} candidate weight vectors exceed the enumeration cap "
                f"{enumeration_cap}; use sampling-based estimates instead"
            )
        lps = channel.coordinate_logprobs()
        others = [i for i in range(channel.k) if i != dep]
        dep_lo, dep_hi = window.ranges[dep]
        for combo in itertools.product(*(range(*_incl(window.ranges[i])) for i in others)):
            n_dep = n - sum(combo)
            if not dep_lo <= n_dep <= dep_hi:
                continue
            counts = [0] * channel.k
            counts[dep] = n_dep
            for i, c in zip(others, combo):
                counts[i] = c
            lp = 0.0
            possible = True
            for c, l in zip(counts, lps):
                if c == 0:
                    continue
                if l == LOG_ZERO:
                    possible = False
                    break
                lp += c * l
            if not possible:
                continue
            classes.append(WeightClass(tuple(counts), multinomial(counts), lp))
        if not classes:
            raise DomainError("typical window admits no weight vector")
    classes.sort(key=lambda c: c.counts)
    if all(lo == 0 and hi == n for lo, hi in window.ranges):
        truncation = 0.0
    else:
        mass = math.fsum(exp2(math.log2(c.size) + c.string_log2p) for c in classes)
        truncation = max(0.0, 1.0 - mass)
    return WeightClassTable(channel, n, window, tuple(classes), truncation)


def _incl(rng: tuple[int, int]) -> tuple[int, int]:
    return rng[0], rng[1] + 1


def effective_entropy(class_entries: Iterable[tuple[float, int]], n: int) -> float:
    """Shannon entropy per position, in bits, of a string distribution given
    as (per-string log2 probability, multiplicity) class entries.

    Strings not listed contribute nothing.  Over a full-support table this
    reproduces the single-symbol entropy exactly, for any n.
    """
    if n < 1:
        raise DomainError(f"block length {n} must be positive")
    entries = [(lp, m) for lp, m in class_entries if m > 0 and lp != LOG_ZERO]
    if any(m < 0 for _lp, m in entries):
        raise DomainError("negative multiplicity")
    total = math.fsum(exp2(math.log2(m) + lp) for lp, m in entries)
    if total > 1.0 + 1e-9:
        raise DomainError(f"listed classes carry probability {total!r} > 1")
    return -math.fsum(exp2(math.log2(m) + lp) * lp for lp, m in entries) / n
