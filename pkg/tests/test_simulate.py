"""End-to-end Monte Carlo: determinism, key accounting, Eve's statistics."""

import csv
import math

import numpy as np
import pytest

from stegoqec.channels import ChannelModel
from stegoqec.codec import compile_codebook
from stegoqec.errors import DomainError
from stegoqec.keystream import ceil_log2
from stegoqec.secrecy import tv_to_channel
from stegoqec.simulate import SimConfig, SimResult, run, sample_channel

SEED = "00" * 32
ALT_SEED = "ab" * 32


def _config(**kw) -> SimConfig:
    base = dict(
        channel=ChannelModel.bit_flip(0.1),
        n=20,
        coverage=2.0,
        blocks=200,
        seed=SEED,
    )
    base.update(kw)
    return SimConfig(**base)


def test_all_blocks_decode_on_noiseless_channel():
    res = run(_config())
    assert res.blocks == res.blocks_ok == 200
    assert res.m_bits == pytest.approx(math.log2(6), rel=1e-15)


def test_key_accounting_subset_draw_only():
    book = compile_codebook(ChannelModel.bit_flip(0.1), 20, 2.0)
    b = ceil_log2(book.n_subsets_max) + 32
    assert b == 43
    res = run(_config(blocks=150))
    assert res.key_bits_used == 150 * b


def test_key_accounting_with_otp():
    book = compile_codebook(ChannelModel.bit_flip(0.1), 20, 2.0)
    b = ceil_log2(book.n_subsets_max) + 32
    plain = run(_config(blocks=100))
    padded = run(_config(blocks=100, otp=True))
    assert padded.blocks_ok == 100
    assert padded.key_bits_used == plain.key_bits_used + 100 * book.otp_bits
    assert padded.key_bits_used == 100 * (b + 2)


def test_replay_is_bit_for_bit_deterministic():
    a = run(_config(blocks=300))
    b = run(_config(blocks=300))
    assert a == b
    c = run(_config(blocks=300, seed=ALT_SEED))
    assert c.eve_llr_mean != a.eve_llr_mean


def test_eve_fields_absent_when_disabled():
    res = run(_config(eve_test=False))
    assert res.eve_llr_mean is None
    assert res.eve_llr_var is None
    assert res.eve_advantage is None
    d = res.as_dict()
    assert d["eve_advantage"] is None
    assert d["M_bits"] == res.m_bits


def test_perfect_emulation_leaves_eve_nothing():
    # p = 1/2 with the full window induces exactly the channel law: every
    # llr is 0 and the best threshold advantage is exactly zero
    cfg = _config(channel=ChannelModel.bit_flip(0.5), n=12, coverage=math.inf, blocks=400)
    res = run(cfg)
    assert res.eve_llr_mean == 0.0
    assert res.eve_llr_var == 0.0
    assert res.eve_advantage == 0.0


def test_eve_advantage_approaches_exact_tv():
    book = compile_codebook(ChannelModel.bit_flip(0.1), 20, 2.0)
    tv = tv_to_channel(book).tv_distance
    res = run(_config(blocks=4000))
    # two-sided DKW band at 4000 samples per arm, alpha roomy for CI stability
    assert abs(res.eve_advantage - tv) < 0.06
    assert res.eve_llr_mean is not None and res.eve_llr_var > 0.0


def test_trace_file(tmp_path):
    path = tmp_path / "trace.csv"
    res = run(_config(blocks=25), trace_path=str(path))
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 25
    assert set(rows[0]) == {"block", "weight", "llr", "key_bits"}
    assert [int(r["block"]) for r in rows] == list(range(25))
    win_lo, win_hi = compile_codebook(ChannelModel.bit_flip(0.1), 20, 2.0).window.weight_range
    for i, r in enumerate(rows):
        assert win_lo <= int(r["weight"]) <= win_hi
        assert int(r["key_bits"]) == 43 * (i + 1)  # cumulative draw
        float(r["llr"])  # parses
    assert res.key_bits_used == 43 * 25


def test_otp_matches_plain_deliveries():
    # the pad changes which strings fly, never whether Bob recovers m
    plain = run(_config(blocks=80))
    padded = run(_config(blocks=80, otp=True))
    assert plain.blocks_ok == padded.blocks_ok == 80


def test_sim_config_validation():
    with pytest.raises(DomainError):
        _config(blocks=0)


def test_sample_channel_moments():
    rng = np.random.default_rng(42)
    ch = ChannelModel.bit_flip(0.3)
    n, reps = 400, 50
    weights = [int(np.count_nonzero(sample_channel(ch, n, rng))) for _ in range(reps)]
    mean = np.mean(weights)
    sigma = math.sqrt(n * 0.3 * 0.7 / reps)
    assert abs(mean - n * 0.3) < 4 * sigma

    ru = ChannelModel.random_unitary([0.7, 0.2, 0.1])
    s = sample_channel(ru, 20000, rng)
    counts = np.bincount(s, minlength=3) / 20000
    for got, want in zip(counts, ru.probs):
        assert abs(got - want) < 4 * math.sqrt(want * (1 - want) / 20000)


def test_sample_channel_values_in_alphabet():
    rng = np.random.default_rng(0)
    s = sample_channel(ChannelModel.depolarizing(0.9), 5000, rng)
    assert s.min() >= 0 and s.max() <= 3
    assert isinstance(run(_config(blocks=1)), SimResult)
