"""Secrecy metrics against exact rational oracles, plus the entropy bounds."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from stegoqec.channels import ChannelModel
from stegoqec.codec import compile_codebook, rank_in_class
from stegoqec.errors import (
    AtypicalStringError,
    DomainError,
    IntegrityError,
    NotACodewordError,
)
from stegoqec.secrecy import (
    AlphaBound,
    entropy_sigma_e,
    f_term,
    g_term,
    induced_distribution,
    kl_alpha_bound,
    string_llr,
    tv_to_channel,
    upper_bound,
)


def _string_prob(book, counts) -> Fraction:
    fracs = book.channel.coordinate_fractions()
    p = Fraction(1)
    for f, c in zip(fracs, counts):
        p *= f**c
    return p


def _class_level_tv(book) -> Fraction:
    """Independent TV oracle: exact rationals per class, no log-domain math."""
    l1 = Fraction(0)
    window_mass = Fraction(0)
    for cls in book.classes:
        p_str = _string_prob(book, cls.counts)
        window_mass += cls.size * p_str
        induced = Fraction(1, book.c_total * cls.n_subsets)
        l1 += cls.covered * abs(induced - p_str)
        l1 += (cls.size - cls.covered) * p_str
    for cls in book.dropped:
        p_str = _string_prob(book, cls.counts)
        window_mass += cls.size * p_str
        l1 += cls.size * p_str
    atypical = 1 - window_mass
    assert atypical >= 0
    return (l1 + atypical) / 2


def _string_level_tv(book) -> Fraction:
    """Fully independent oracle: walk every string, decide coverage by rank."""
    induced_total = Fraction(0)
    l1 = Fraction(0)
    for s in itertools.product(range(book.channel.k), repeat=book.n):
        p_str = Fraction(1)
        for sym in s:
            p_str *= Fraction(book.channel.probs[sym])
        induced = Fraction(0)
        try:
            cls = book.class_of_counts(book.counts_of(s))
        except (AtypicalStringError, NotACodewordError):
            cls = None
        if cls is not None and rank_in_class(book.channel, book.n, cls.counts, s) < cls.covered:
            induced = Fraction(1, book.c_total * cls.n_subsets)
        induced_total += induced
        l1 += abs(induced - p_str)
    assert induced_total == 1
    return l1 / 2


@pytest.mark.parametrize(
    "ch,n,d,pin,tol",
    [
        (ChannelModel.bit_flip(0.1), 12, 2.0, 0.340997748211, 1e-9),
        (ChannelModel.bit_flip(0.3), 12, 1.5, 0.268357810456, 1e-9),
        (ChannelModel.bit_flip(0.45), 12, 1.2, 0.424792646746642, 1e-12),
        (ChannelModel.depolarizing(0.1), 10, 2.0, 0.2639010709, 1e-8),
        (ChannelModel.depolarizing(0.3), 8, 1.5, 0.12601199, 5e-8),
    ],
)
def test_tv_matches_exact_rational_oracle(ch, n, d, pin, tol):
    book = compile_codebook(ch, n, d)
    report = tv_to_channel(book)
    oracle = _class_level_tv(book)
    assert report.tv_distance == pytest.approx(float(oracle), abs=1e-12)
    assert report.tv_distance == pytest.approx(pin, abs=tol)


@pytest.mark.parametrize(
    "ch,n,d",
    [
        (ChannelModel.bit_flip(0.2), 8, 1.5),
        (ChannelModel.bit_flip(0.1), 10, 2.0),
        (ChannelModel.depolarizing(0.3), 6, 1.5),
    ],
)
def test_tv_matches_string_level_oracle(ch, n, d):
    # the string walk decides coverage through the actual rank bijection, so
    # it would catch a layout that differs from the closed-form accounting
    book = compile_codebook(ch, n, d)
    report = tv_to_channel(book)
    assert report.tv_distance == pytest.approx(float(_string_level_tv(book)), abs=1e-12)


def test_tv_anchor_n20():
    report = tv_to_channel(compile_codebook(ChannelModel.bit_flip(0.1), 20, 2.0))
    assert report.tv_distance == pytest.approx(0.15640652814386666, abs=1e-14)
    assert report.truncation_mass == pytest.approx(0.04317449528446238, abs=1e-14)
    assert report.rounding_residual == pytest.approx(0.26963856100327094, abs=1e-14)
    assert report.classes_dropped == 1


def test_tv_decomposition_identity():
    for ch, n, d in [
        (ChannelModel.bit_flip(0.1), 50, 2.0),
        (ChannelModel.depolarizing(0.2), 40, 1.5),
        (ChannelModel.random_unitary([0.7, 0.2, 0.1]), 40, 1.5),
    ]:
        report = tv_to_channel(compile_codebook(ch, n, d))
        assert report.tv_distance == 0.5 * (report.truncation_mass + report.rounding_residual)
        assert report.rounding_residual >= 0.0
        assert 0.0 <= report.tv_distance <= 1.0
        d = report.as_dict()
        assert set(d) == {
            "tv_distance",
            "truncation_mass",
            "rounding_residual",
            "delta_param",
            "classes_dropped",
        }


def test_symmetric_channel_full_window_is_exactly_secret():
    # at p = 1/2 every string has probability 2**-n, capacities equal sizes,
    # and the induced law reproduces the channel with zero error
    for n in [10, 14]:
        book = compile_codebook(ChannelModel.bit_flip(0.5), n, math.inf)
        report = tv_to_channel(book)
        assert report.tv_distance == 0.0
        assert report.truncation_mass == 0.0
        assert report.rounding_residual == 0.0
        assert book.m_bits == float(n)


def test_tv_shrinks_with_wider_window():
    ch = ChannelModel.bit_flip(0.1)
    tvs = [tv_to_channel(compile_codebook(ch, 200, d)).tv_distance for d in [1.0, 2.0, 3.0]]
    assert tvs[0] > tvs[1] > tvs[2]


def test_tv_shrinks_with_n_at_fixed_delta():
    # at fixed coverage D the window width in standard deviations stays
    # constant and the distance saturates; holding delta itself fixed
    # (coverage growing like sqrt(N)) sends it to zero
    ch = ChannelModel.bit_flip(0.1)
    tvs = [
        tv_to_channel(compile_codebook(ch, n, 2.0 * math.sqrt(n / 200))).tv_distance
        for n in [200, 800, 3200]
    ]
    assert tvs[0] > tvs[1] > tvs[2]


def test_induced_distribution_normalizes():
    for ch, n, d in [
        (ChannelModel.bit_flip(0.3), 10, 1.5),
        (ChannelModel.random_unitary([0.7, 0.2, 0.1]), 60, 1.5),
    ]:
        book = compile_codebook(ch, n, d)
        law = induced_distribution(book)
        total = math.fsum(ic.covered * 2.0**ic.string_log2p for ic in law)
        assert total == pytest.approx(1.0, abs=1e-12)
        for ic, cls in zip(law, book.classes):
            assert ic.counts == cls.counts
            assert ic.covered == cls.covered


# --- the distinguisher statistic ---


def test_llr_zero_everywhere_for_perfect_emulation():
    book = compile_codebook(ChannelModel.bit_flip(0.5), 10, math.inf)
    for s in [(0,) * 10, (1,) * 10, (0, 1) * 5]:
        assert string_llr(book, s) == 0.0


def test_llr_values_and_sentinels():
    book = compile_codebook(ChannelModel.bit_flip(0.3), 10, 1.5)
    cls = book.class_of_counts((8, 2))
    assert cls.covered == 38 and cls.size == 45
    covered_string = [1, 1] + [0] * 8  # rank 0
    want = -math.log2(book.c_total * cls.n_subsets) - math.log2(0.3**2 * 0.7**8)
    assert string_llr(book, covered_string) == pytest.approx(want, rel=1e-12)
    leftover_string = [0] * 8 + [1, 1]  # rank 44, beyond covered
    assert string_llr(book, leftover_string) == -math.inf
    assert string_llr(book, [1] + [0] * 9) != -math.inf  # weight 1 is covered
    assert string_llr(book, [0] * 10) == -math.inf  # weight 0 is below the window
    assert string_llr(book, [1] * 10) == -math.inf  # atypical


def test_llr_of_dropped_class_is_minus_inf():
    book = compile_codebook(ChannelModel.bit_flip(0.1), 20, 2.0)
    dropped_string = [1, 1, 1, 1] + [0] * 16
    assert string_llr(book, dropped_string) == -math.inf


# --- entropy bounds ---


def test_entropy_sigma_e_pins():
    assert entropy_sigma_e(ChannelModel.bit_flip(0.1), 100) == pytest.approx(
        46.89955935892812, abs=1e-12
    )
    assert entropy_sigma_e(ChannelModel.depolarizing(0.1), 100) == pytest.approx(
        62.74918436613969, abs=1e-12
    )
    with pytest.raises(DomainError):
        entropy_sigma_e(ChannelModel.bit_flip(0.1), 0)


def test_g_and_f_terms():
    assert g_term(1000, 0.0) == 0.0
    assert f_term(1000, 0.0) == 0.0
    assert g_term(1000, 0.01) == pytest.approx(10.080793135895911, abs=1e-12)
    assert f_term(1000, 0.01) == pytest.approx(10.080937407804589, abs=1e-12)
    assert g_term(100, 0.2) < g_term(100, 0.4)
    with pytest.raises(DomainError):
        g_term(100, -0.1)
    with pytest.raises(DomainError):
        f_term(100, 1.5)


def test_upper_bound_report_and_violation():
    ch = ChannelModel.bit_flip(0.1)
    rep = upper_bound(ch, 1000, 0.01, 0.01, 400.0)
    assert rep.m_upper == pytest.approx(489.1573241329817, abs=1e-10)
    assert rep.h_sigma_e == pytest.approx(468.9955935892812, abs=1e-10)
    d = rep.as_dict()
    assert d["M_upper"] == rep.m_upper
    assert d["H_sigmaE"] == rep.h_sigma_e
    assert d["M_achieved"] == 400.0
    with pytest.raises(IntegrityError):
        upper_bound(ch, 1000, 0.01, 0.01, 490.0)


def test_achieved_rates_respect_the_bound():
    for n in [100, 400]:
        book = compile_codebook(ChannelModel.bit_flip(0.1), n, 2.0)
        rep = upper_bound(ChannelModel.bit_flip(0.1), n, book.window.delta, 0.0, book.m_bits)
        assert rep.m_achieved <= rep.m_upper


# --- correctability-matrix bound ---


def test_alpha_bound_identity_channel():
    from stegoqec.fivequbit import five_qubit_code

    code = five_qubit_code()
    p = code.codespace_projector
    rep = kl_alpha_bound([np.eye(32)], p)
    assert isinstance(rep, AlphaBound)
    assert rep.bound_bits == 0.0
    assert rep.completeness == pytest.approx(1.0, abs=1e-12)
    assert rep.alpha_diag == (1.0,)


def test_alpha_bound_truncated_depolarizing():
    from stegoqec.fivequbit import five_qubit_code, truncated_depol_weights, weighted_kraus_set

    code = five_qubit_code()
    ops = weighted_kraus_set(code, 0.1)
    rep = kl_alpha_bound(ops, code.codespace_projector)
    w = 0.9**4 * (1 + 4 * 0.1)
    assert rep.completeness == pytest.approx(w, abs=1e-10)
    weights = truncated_depol_weights(0.1)
    expect = -math.fsum(q / w * math.log2(q / w) for q in weights)
    assert rep.bound_bits == pytest.approx(expect, abs=1e-10)
    assert rep.bound_bits == pytest.approx(2.335604028530816, abs=1e-10)


def test_alpha_bound_invariant_under_kraus_remix():
    from stegoqec.fivequbit import five_qubit_code, weighted_kraus_set

    code = five_qubit_code()
    ops = weighted_kraus_set(code, 0.1)
    rng = np.random.default_rng(7)
    z = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    u, _ = np.linalg.qr(z)
    remixed = [sum(u[i, j] * ops[j] for j in range(16)) for i in range(16)]
    a = kl_alpha_bound(ops, code.codespace_projector)
    b = kl_alpha_bound(remixed, code.codespace_projector)
    assert b.bound_bits == pytest.approx(a.bound_bits, abs=1e-8)
    assert b.completeness == pytest.approx(a.completeness, abs=1e-8)


def test_alpha_bound_rejects_uncorrectable_set():
    from stegoqec.fivequbit import five_qubit_code, pauli_matrix

    code = five_qubit_code()
    x_logical = pauli_matrix("XXXXX")
    ops = [np.eye(32) / math.sqrt(2), x_logical / math.sqrt(2)]
    with pytest.raises(DomainError, match="not correctable"):
        kl_alpha_bound(ops, code.codespace_projector)


def test_alpha_bound_rejects_bad_projector():
    with pytest.raises(DomainError):
        kl_alpha_bound([np.eye(4)], np.diag([1.0, 2.0, 0.0, 0.0]))
    with pytest.raises(DomainError):
        kl_alpha_bound([np.eye(4)], np.zeros((4, 4)))
