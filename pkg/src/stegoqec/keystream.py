"""Shared-secret key modeling: bit generation, subset draws, accounting.

Both parties hold the same 256-bit seed and must consume bits in the same
order.  The per-block schedule is: one cached subset draw of
B = ceil(log2 n_subsets_max) + 32 bits first, then (optionally) the one-time
pad.  The generator is SHA-256 in counter mode; reproducibility across runs
and languages matters more here than cryptographic review, and the interface
allows swapping in a vetted generator.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from .channels import ChannelModel
from .codec import Codebook, compile_codebook
from .errors import DomainError, IntegrityError, KeyUnderflowError

#: extra bits per subset draw; modulo bias is then at most 2**-32
_BIAS_MARGIN = 32


def ceil_log2(x: int) -> int:
    if x < 1:
        raise DomainError(f"ceil_log2 of nonpositive {x}")
    return (x - 1).bit_length()


class KeyStream:
    """Deterministic bit stream shared by Alice and Bob.

    Bits come MSB-first from SHA-256(seed || counter_be64).  ``budget_bits``
    optionally enforces a hard key budget; drawing past it raises.
    """

    def __init__(self, seed: bytes | str, budget_bits: int | None = None) -> None:
        if isinstance(seed, str):
            try:
                seed = bytes.fromhex(seed)
            except ValueError:
                raise DomainError("seed must be hex") from None
        if len(seed) != 32:
            raise DomainError(f"seed must be 32 bytes, got {len(seed)}")
        self._seed = bytes(seed)
        self._hash_counter = 0
        self._buf = 0
        self._buf_bits = 0
        self.bits_consumed = 0
        self.budget_bits = budget_bits
        self._block_draw: tuple[int, int] | None = None  # (B, value)

    def _refill(self) -> None:
        block = hashlib.sha256(
            self._seed + self._hash_counter.to_bytes(8, "big")
        ).digest()
        self._hash_counter += 1
        self._buf = (self._buf << 256) | int.from_bytes(block, "big")
        self._buf_bits += 256

    def draw_bits(self, nbits: int) -> int:
        if nbits < 0:
            raise DomainError(f"cannot draw {nbits} bits")
        if self.budget_bits is not None and self.bits_consumed + nbits > self.budget_bits:
            raise KeyUnderflowError(
                f"key budget exhausted: {self.bits_consumed} used, "
                f"{nbits} requested, budget {self.budget_bits}"
            )
        while self._buf_bits < nbits:
            self._refill()
        self._buf_bits -= nbits
        value = self._buf >> self._buf_bits
        self._buf &= (1 << self._buf_bits) - 1
        self.bits_consumed += nbits
        return value

    def begin_block(self) -> None:
        """Forget the cached subset draw; call once per transmitted block."""
        self._block_draw = None

    def prime_block(self, n_subsets_max: int) -> None:
        """Force the block's subset draw now (used before OTP bits)."""
        self._ensure_block_draw(n_subsets_max)

    def _ensure_block_draw(self, n_subsets_max: int) -> int:
        b = ceil_log2(n_subsets_max) + _BIAS_MARGIN
        if self._block_draw is None:
            self._block_draw = (b, self.draw_bits(b))
        elif self._block_draw[0] != b:
            raise IntegrityError(
                f"subset draws of widths {self._block_draw[0]} and {b} "
                f"inside one block; codebooks mixed up"
            )
        return self._block_draw[1]

    def draw_subset_index(self, n_subsets: int, n_subsets_max: int) -> int:
        """Keyed subset index in [0, n_subsets); one cached draw per block.

        Every class in a block shares the same B-bit draw, so total key use
        per block is B bits regardless of which class the message landed in.
        """
        if not 1 <= n_subsets <= n_subsets_max:
            raise DomainError(
                f"n_subsets {n_subsets} outside [1, n_subsets_max={n_subsets_max}]"
            )
        return self._ensure_block_draw(n_subsets_max) % n_subsets


def otp_encrypt(m: int, key: KeyStream, n_bits: int) -> int:
    """XOR the message with n_bits fresh key bits.

    The message space must be the full n_bits-bit cube or XOR leaves it;
    callers pass the codebook's otp_bits and restrict messages accordingly.
    """
    if n_bits < 1:
        raise DomainError(f"pad width {n_bits} must be positive")
    if not 0 <= m < (1 << n_bits):
        raise DomainError(f"message {m} outside the {n_bits}-bit pad space")
    return m ^ key.draw_bits(n_bits)


def otp_decrypt(m: int, key: KeyStream, n_bits: int) -> int:
    return otp_encrypt(m, key, n_bits)


@dataclass(frozen=True)
class KeyBudgetReport:
    k_formula: float
    k_measured: int
    n_subsets_max: int

    def as_dict(self) -> dict:
        return {
            "K_formula": self.k_formula,
            "K_measured": self.k_measured,
            "n_subsets_max": self.n_subsets_max,
        }


def key_cost(
    channel: ChannelModel,
    n: int,
    coverage: float,
    book: Codebook | None = None,
) -> KeyBudgetReport:
    """Closed-form vs measured per-block key consumption.

    The closed form K = 2*N*p*delta*log2((1-p)/p_letter) is the log of the
    subset-count ratio across the typical window: p_letter is p for the bit
    flip channel and p/3 for the depolarizing channel.  No closed form is
    defined for general random-unitary channels.
    """
    if not channel.grouped:
        raise DomainError("closed-form key budget exists only for weight-banded channels")
    p = channel.error_prob
    delta = coverage * math.sqrt((1.0 - p) / (p * n))
    p_letter = channel.probs[1]
    k_formula = 2.0 * n * p * delta * math.log2((1.0 - p) / p_letter)
    if book is None:
        book = compile_codebook(channel, n, coverage)
    k_measured = ceil_log2(book.n_subsets_max) + _BIAS_MARGIN
    return KeyBudgetReport(k_formula, k_measured, book.n_subsets_max)
