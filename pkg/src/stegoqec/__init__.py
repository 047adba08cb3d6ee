"""Steganography over emulated quantum error channels.

A sender with a shared secret key hides messages in the error syndromes of a
nondegenerate quantum error-correcting code, shaping which syndrome appears
so the channel looks like ordinary i.i.d. noise to everyone without the key.
This package compiles the codec, computes exact secrecy metrics and rate and
key bounds, simulates the full protocol against an optimal distinguisher,
and realizes the scheme exactly on the five-qubit code.
"""

from .channels import (
    ChannelModel,
    TypicalWindow,
    WeightClass,
    WeightClassTable,
    asymptotic_entropy_per_qubit,
    build_table,
    effective_entropy,
    full_window,
    make_window,
    parse_channel,
)
from .codec import (
    Codebook,
    CodebookClass,
    RateReport,
    achievable_rate,
    compile_codebook,
    decode,
    encode,
    letters_to_string,
    rank_in_class,
    string_to_letters,
    unrank_in_class,
)
from .errors import (
    AtypicalStringError,
    CapacityError,
    DomainError,
    IntegrityError,
    KeyUnderflowError,
    NotACodewordError,
    StegoError,
)
from .fivequbit import (
    StabilizerCode,
    encode_covertext,
    eve_reduced_state,
    fidelity,
    five_qubit_code,
    stego_decode,
    stego_superpose,
    syndrome_distribution,
)
from .keystream import KeyBudgetReport, KeyStream, key_cost, otp_decrypt, otp_encrypt
from .secrecy import (
    AlphaBound,
    BoundReport,
    SecrecyReport,
    entropy_sigma_e,
    f_term,
    g_term,
    induced_distribution,
    kl_alpha_bound,
    tv_to_channel,
    upper_bound,
)
from .simulate import SimConfig, SimResult, run, sample_channel

__version__ = "0.1.0"

__all__ = [
    "AlphaBound",
    "AtypicalStringError",
    "BoundReport",
    "CapacityError",
    "ChannelModel",
    "Codebook",
    "CodebookClass",
    "DomainError",
    "IntegrityError",
    "KeyBudgetReport",
    "KeyStream",
    "KeyUnderflowError",
    "NotACodewordError",
    "RateReport",
    "SecrecyReport",
    "SimConfig",
    "SimResult",
    "StabilizerCode",
    "StegoError",
    "TypicalWindow",
    "WeightClass",
    "WeightClassTable",
    "achievable_rate",
    "asymptotic_entropy_per_qubit",
    "build_table",
    "compile_codebook",
    "decode",
    "effective_entropy",
    "encode",
    "encode_covertext",
    "entropy_sigma_e",
    "eve_reduced_state",
    "f_term",
    "fidelity",
    "five_qubit_code",
    "full_window",
    "g_term",
    "induced_distribution",
    "key_cost",
    "kl_alpha_bound",
    "letters_to_string",
    "make_window",
    "otp_decrypt",
    "otp_encrypt",
    "parse_channel",
    "rank_in_class",
    "run",
    "sample_channel",
    "stego_decode",
    "stego_superpose",
    "string_to_letters",
    "syndrome_distribution",
    "tv_to_channel",
    "unrank_in_class",
    "upper_bound",
]
