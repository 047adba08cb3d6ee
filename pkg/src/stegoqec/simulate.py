"""End-to-end Monte Carlo: Alice -> noiseless channel -> Bob, with Eve tapping.

Eve gets the strongest position short of the key: she knows the channel, the
block length, and the whole codebook construction, and runs the exact
likelihood-ratio test between the induced and emulated distributions.  Her
empirical best-threshold advantage therefore converges to the exact TV
distance computed in closed form by the secrecy module, which is what the
acceptance checks pin it against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import ChannelModel
from .codec import Codebook, compile_codebook, decode, encode
from .errors import DomainError, IntegrityError
from .keystream import KeyStream, otp_decrypt, otp_encrypt
from .secrecy import induced_distribution


@dataclass(frozen=True)
class SimConfig:
    channel: ChannelModel
    n: int
    coverage: float
    blocks: int
    seed: str  # 64 hex chars, shared by the key stream and the RNG substreams
    otp: bool = False
    eve_test: bool = True

    def __post_init__(self) -> None:
        if self.blocks < 1:
            raise DomainError(f"blocks {self.blocks} must be >= 1")


@dataclass(frozen=True)
class SimResult:
    blocks: int
    blocks_ok: int
    key_bits_used: int
    m_bits: float
    eve_llr_mean: float | None
    eve_llr_var: float | None
    eve_advantage: float | None

    def as_dict(self) -> dict:
        return {
            "blocks": self.blocks,
            "blocks_ok": self.blocks_ok,
            "key_bits_used": self.key_bits_used,
            "M_bits": self.m_bits,
            "eve_llr_mean": self.eve_llr_mean,
            "eve_llr_var": self.eve_llr_var,
            "eve_advantage": self.eve_advantage,
        }


def sample_channel(
    channel: ChannelModel, n: int, rng: np.random.Generator
) -> np.ndarray:
    """One i.i.d. error string as an int array of symbol indices."""
    cum = np.cumsum(channel.probs)
    idx = np.searchsorted(cum, rng.random(n), side="right")
    return np.minimum(idx, channel.k - 1)


def _uniform_below(rng: np.random.Generator, bound: int) -> int:
    """Exactly uniform integer in [0, bound), rejection on raw key-free bits."""
    nbits = bound.bit_length()
    nbytes = (nbits + 7) // 8
    shift = 8 * nbytes - nbits
    while True:
        v = int.from_bytes(rng.bytes(nbytes), "big") >> shift
        if v < bound:
            return v


def _block_rng(seed_int: int, block: int) -> np.random.Generator:
    # (seed, block) substream: serial and parallel schedules agree exactly
    return np.random.default_rng([seed_int, block])


def _class_llr_map(book: Codebook) -> dict[tuple[int, ...], float]:
    return {
        ind.counts: ind.string_log2p - cls.string_log2p
        for cls, ind in zip(book.classes, induced_distribution(book))
    }


def _counts_of_array(channel: ChannelModel, symbols: np.ndarray) -> tuple[int, ...]:
    if channel.grouped:
        w = int(np.count_nonzero(symbols))
        return (len(symbols) - w, w)
    return tuple(int(c) for c in np.bincount(symbols, minlength=channel.k))


def _best_threshold_advantage(llr_stego: np.ndarray, llr_cal: np.ndarray) -> float:
    """max_t [ P_hat_stego(llr >= t) - P_hat_cal(llr >= t) ] over atom thresholds."""
    s = np.sort(llr_stego)
    c = np.sort(llr_cal)
    atoms = np.unique(np.concatenate([s, c]))
    frac_s = 1.0 - np.searchsorted(s, atoms, side="left") / len(s)
    frac_c = 1.0 - np.searchsorted(c, atoms, side="left") / len(c)
    return max(0.0, float(np.max(frac_s - frac_c)))


def run(config: SimConfig, trace_path: str | None = None) -> SimResult:
    book = compile_codebook(config.channel, config.n, config.coverage)
    key_alice = KeyStream(config.seed)
    key_bob = KeyStream(config.seed)
    seed_int = int.from_bytes(bytes.fromhex(config.seed), "big")
    n_max = book.n_subsets_max
    msg_bound = 1 << book.otp_bits if config.otp else book.c_total
    class_llr = _class_llr_map(book)
    llr_stego = np.empty(config.blocks) if config.eve_test else None
    llr_cal = np.empty(config.blocks) if config.eve_test else None
    blocks_ok = 0
    trace = open(trace_path, "w", encoding="utf-8") if trace_path else None
    try:
        if trace:
            trace.write("block,weight,llr,key_bits\n")
        for b in range(config.blocks):
            rng = _block_rng(seed_int, b)
            m = _uniform_below(rng, msg_bound)
            key_alice.begin_block()
            key_bob.begin_block()
            if config.otp:
                key_alice.prime_block(n_max)
                m_sent = otp_encrypt(m, key_alice, book.otp_bits)
            else:
                m_sent = m
            e = encode(book, m_sent, key_alice)
            # channel is noiseless: Bob receives e verbatim
            m_got = decode(book, e, key_bob)
            if config.otp:
                m_got = otp_decrypt(m_got, key_bob, book.otp_bits)
            if m_got != m:
                raise IntegrityError(
                    f"block {b}: decoded {m_got} != sent {m} on a noiseless channel"
                )
            blocks_ok += 1
            if config.eve_test:
                assert llr_stego is not None and llr_cal is not None
                llr_stego[b] = class_llr[book.counts_of(e)]
                cal = sample_channel(config.channel, config.n, rng)
                llr_cal[b] = class_llr.get(_counts_of_array(config.channel, cal), -math.inf)
            if trace:
                w = sum(1 for s in e if s != 0)
                lv = llr_stego[b] if config.eve_test else math.nan
                trace.write(f"{b},{w},{lv:.9g},{key_alice.bits_consumed}\n")
    finally:
        if trace:
            trace.close()
    if key_alice.bits_consumed != key_bob.bits_consumed:
        raise IntegrityError(
            f"key desync: Alice used {key_alice.bits_consumed} bits, "
            f"Bob used {key_bob.bits_consumed}"
        )
    if config.eve_test:
        assert llr_stego is not None and llr_cal is not None
        eve_mean = float(np.mean(llr_stego))
        eve_var = float(np.var(llr_stego))
        eve_adv = _best_threshold_advantage(llr_stego, llr_cal)
    else:
        eve_mean = eve_var = eve_adv = None
    return SimResult(
        blocks=config.blocks,
        blocks_ok=blocks_ok,
        key_bits_used=key_alice.bits_consumed,
        m_bits=book.m_bits,
        eve_llr_mean=eve_mean,
        eve_llr_var=eve_var,
        eve_advantage=eve_adv,
    )
