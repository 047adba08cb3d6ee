"""Exact five-qubit-code realization of syndrome steganography.

Dense state-vector arithmetic throughout: syndrome superpositions and
arbitrary covertexts are not stabilizer states, and at 5 + 4 qubits
exactness is cheaper than generality.  Qubit 0 is the leftmost letter of a
Pauli string and the most significant bit of a basis index; syndrome bit 0
(most significant) is the first generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DomainError, IntegrityError

N_PHYSICAL = 5
N_SYNDROME = 4
GENERATORS = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")
LOGICAL_X = "XXXXX"
LOGICAL_Z = "ZZZZZ"

_ATOL = 1e-10


def _masks(letters: str) -> tuple[int, int, complex]:
    """(x_mask, z_mask, phase) with P = phase * X^x Z^z and Y = i XZ."""
    x = z = 0
    phase = 1.0 + 0.0j
    n = len(letters)
    for q, ch in enumerate(letters):
        bit = 1 << (n - 1 - q)
        if ch == "X":
            x |= bit
        elif ch == "Z":
            z |= bit
        elif ch == "Y":
            x |= bit
            z |= bit
            phase *= 1.0j
        elif ch != "I":
            raise DomainError(f"unknown Pauli letter {ch!r} in {letters!r}")
    return x, z, phase


def apply_pauli(letters: str, state: np.ndarray) -> np.ndarray:
    n = len(letters)
    dim = 1 << n
    if state.shape != (dim,):
        raise DomainError(f"state has shape {state.shape}, expected ({dim},)")
    x, z, phase = _masks(letters)
    idx = np.arange(dim)
    signs = np.array([-1.0 if (i & z).bit_count() & 1 else 1.0 for i in range(dim)])
    out = np.empty(dim, dtype=complex)
    out[idx ^ x] = phase * signs * state
    return out


def pauli_matrix(letters: str) -> np.ndarray:
    dim = 1 << len(letters)
    cols = [apply_pauli(letters, _basis(dim, b)) for b in range(dim)]
    return np.stack(cols, axis=1)


def _basis(dim: int, b: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[b] = 1.0
    return v


def _anticommutes(a: str, b: str) -> bool:
    xa, za, _ = _masks(a)
    xb, zb, _ = _masks(b)
    return bool(((xa & zb).bit_count() + (za & xb).bit_count()) & 1)


def _normalized(state: np.ndarray, what: str) -> np.ndarray:
    nrm = float(np.linalg.norm(state))
    if abs(nrm - 1.0) > 1e-8:
        raise DomainError(f"{what} is not normalized (norm {nrm!r})")
    return state / nrm


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    """The [[5,1,3]] code with its 16-element correctable error set."""

    generators: tuple[str, ...]
    logical_x: str
    logical_z: str
    zero_l: np.ndarray = field(repr=False)
    one_l: np.ndarray = field(repr=False)
    #: error letters indexed by their own syndrome value
    errors: tuple[str, ...]

    @property
    def n_physical(self) -> int:
        return N_PHYSICAL

    def syndrome(self, letters: str) -> int:
        s = 0
        for i, g in enumerate(self.generators):
            if _anticommutes(letters, g):
                s |= 1 << (len(self.generators) - 1 - i)
        return s

    def logical(self, b: int) -> np.ndarray:
        return self.zero_l if b == 0 else self.one_l

    @cached_property
    def decode_unitary(self) -> np.ndarray:
        """Rows 2m+b are the conjugated basis E_m |b_L>, so U maps the error
        subspaces onto the computational (message, covertext) registers."""
        dim = 1 << N_PHYSICAL
        u = np.empty((dim, dim), dtype=complex)
        for m, letters in enumerate(self.errors):
            for b in (0, 1):
                u[2 * m + b, :] = apply_pauli(letters, self.logical(b)).conj()
        if np.max(np.abs(u @ u.conj().T - np.eye(dim))) > _ATOL:
            raise IntegrityError("error subspaces failed to assemble a unitary decoder")
        return u

    @cached_property
    def codespace_projector(self) -> np.ndarray:
        return np.outer(self.zero_l, self.zero_l.conj()) + np.outer(
            self.one_l, self.one_l.conj()
        )


def five_qubit_code() -> StabilizerCode:
    """Construct and self-check the code; nondegeneracy is asserted, not hoped."""
    dim = 1 << N_PHYSICAL
    state = _basis(dim, 0)
    for g in GENERATORS:
        state = (state + apply_pauli(g, state)) / 2.0
    nrm = float(np.linalg.norm(state))
    if nrm < 1e-12:
        raise IntegrityError("codespace projector annihilated the seed state")
    zero_l = state / nrm
    one_l = apply_pauli(LOGICAL_X, zero_l)
    for g in GENERATORS:
        for v in (zero_l, one_l):
            if np.linalg.norm(apply_pauli(g, v) - v) > _ATOL:
                raise IntegrityError(f"generator {g} does not stabilize the codespace")
    if abs(np.vdot(zero_l, one_l)) > _ATOL:
        raise IntegrityError("logical basis states are not orthogonal")
    if np.linalg.norm(apply_pauli(LOGICAL_Z, zero_l) - zero_l) > _ATOL:
        raise IntegrityError("logical Z does not fix |0_L>")
    if np.linalg.norm(apply_pauli(LOGICAL_Z, one_l) + one_l) > _ATOL:
        raise IntegrityError("logical Z does not negate |1_L>")
    error_set = ["IIIII"] + [
        "I" * q + letter + "I" * (N_PHYSICAL - 1 - q)
        for q in range(N_PHYSICAL)
        for letter in "XYZ"
    ]
    code = StabilizerCode(GENERATORS, LOGICAL_X, LOGICAL_Z, zero_l, one_l, ())
    by_syndrome: dict[int, str] = {}
    for letters in error_set:
        s = code.syndrome(letters)
        if s in by_syndrome:
            raise IntegrityError(
                f"degenerate syndromes: {by_syndrome[s]} and {letters} both give {s:04b}"
            )
        by_syndrome[s] = letters
    if by_syndrome.get(0) != "IIIII":
        raise IntegrityError("identity error must carry syndrome 0")
    ordered = tuple(by_syndrome[s] for s in range(1 << N_SYNDROME))
    return StabilizerCode(GENERATORS, LOGICAL_X, LOGICAL_Z, zero_l, one_l, ordered)


def encode_covertext(code: StabilizerCode, covertext: np.ndarray) -> np.ndarray:
    cov = _normalized(np.asarray(covertext, dtype=complex), "covertext")
    if cov.shape != (2,):
        raise DomainError("covertext is a single qubit")
    return cov[0] * code.zero_l + cov[1] * code.one_l


def stego_superpose(
    code: StabilizerCode, message_state: np.ndarray, codeword: np.ndarray
) -> np.ndarray:
    """sum_m a_m E_m |codeword>, m running in syndrome order."""
    msg = _normalized(np.asarray(message_state, dtype=complex), "message state")
    if msg.shape != (1 << N_SYNDROME,):
        raise DomainError(f"message register is {N_SYNDROME} qubits")
    out = np.zeros(1 << N_PHYSICAL, dtype=complex)
    for m, letters in enumerate(code.errors):
        if msg[m] != 0.0:
            out += msg[m] * apply_pauli(letters, codeword)
    nrm = float(np.linalg.norm(out))
    if abs(nrm - 1.0) > 1e-8:
        raise IntegrityError(
            f"syndrome subspaces are not orthogonal (output norm {nrm!r})"
        )
    return out / nrm


def stego_decode(
    code: StabilizerCode, received: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Coherently split a received 5-qubit state into (message, covertext)."""
    state = _normalized(np.asarray(received, dtype=complex), "received state")
    out = code.decode_unitary @ state
    m = out.reshape(1 << N_SYNDROME, 2)
    u, s, vh = np.linalg.svd(m)
    if s[1] > 1e-8:
        raise IntegrityError(
            f"decoded registers are entangled (residual singular value {s[1]:.3e}); "
            f"input was not a stego encoding of a product pair"
        )
    # m = s0 * outer(u[:,0], vh[0,:]) at rank 1: vh's row already carries the
    # conjugation, so it is the covertext amplitude vector itself
    return u[:, 0], vh[0, :]


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2; global phase irrelevant."""
    return float(abs(np.vdot(np.asarray(a), np.asarray(b))) ** 2)


def syndrome_distribution(code: StabilizerCode, state: np.ndarray) -> np.ndarray:
    out = code.decode_unitary @ np.asarray(state, dtype=complex)
    return (np.abs(out.reshape(1 << N_SYNDROME, 2)) ** 2).sum(axis=1)


def truncated_depol_weights(p: float) -> np.ndarray:
    """Channel weights of the 16 correctable classes, in syndrome order.

    Unnormalized: the missing mass is the weight->2+ truncation of the
    depolarizing channel on five qubits.
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"depolarizing probability {p!r} outside (0, 1)")
    code_errors_weight1 = (p / 3.0) * (1.0 - p) ** 4
    weights = np.full(1 << N_SYNDROME, code_errors_weight1)
    weights[0] = (1.0 - p) ** 5
    return weights


def weighted_kraus_set(code: StabilizerCode, p: float) -> list[np.ndarray]:
    """sqrt(q_m) E_m for the truncated depolarizing channel."""
    return [
        math.sqrt(q) * pauli_matrix(letters)
        for q, letters in zip(truncated_depol_weights(p), code.errors)
    ]


@dataclass(frozen=True)
class EveView:
    rho: np.ndarray
    trace_distance: float


def eve_reduced_state(
    code: StabilizerCode,
    ensemble: list[tuple[float, np.ndarray]],
    p: float,
    codeword: np.ndarray,
) -> EveView:
    """Eve's averaged density operator and its exact trace distance to the
    truncated channel output on the same codeword."""
    dim = 1 << N_PHYSICAL
    rho = np.zeros((dim, dim), dtype=complex)
    total = 0.0
    for prob, state in ensemble:
        if prob < 0.0:
            raise DomainError("ensemble probabilities must be nonnegative")
        total += prob
        v = np.asarray(state, dtype=complex)
        rho += prob * np.outer(v, v.conj())
    if abs(total - 1.0) > 1e-9:
        raise DomainError(f"ensemble probabilities sum to {total!r}")
    sigma = np.zeros((dim, dim), dtype=complex)
    for q, letters in zip(truncated_depol_weights(p), code.errors):
        v = apply_pauli(letters, codeword)
        sigma += q * np.outer(v, v.conj())
    eigs = np.linalg.eigvalsh(rho - sigma)
    return EveView(rho, 0.5 * float(np.abs(eigs).sum()))


def entangled_roundtrip_fidelity(code: StabilizerCode, covertext: np.ndarray) -> float:
    """Send half of a maximally entangled (reference x message) pair.

    Builds sum_m |m>_R E_m|psi_L> / 4 on 9 qubits, decodes the physical
    half, and scores against |Phi>_R,msg x |cov>.
    """
    cov = _normalized(np.asarray(covertext, dtype=complex), "covertext")
    codeword = encode_covertext(code, cov)
    n_msg = 1 << N_SYNDROME
    dim5 = 1 << N_PHYSICAL
    state = np.zeros(n_msg * dim5, dtype=complex)
    for m, letters in enumerate(code.errors):
        state[m * dim5 : (m + 1) * dim5] = apply_pauli(letters, codeword) / math.sqrt(n_msg)
    out = (state.reshape(n_msg, dim5) @ code.decode_unitary.T).reshape(-1)
    target = np.zeros_like(out)
    for m in range(n_msg):
        target[m * dim5 + 2 * m : m * dim5 + 2 * m + 2] = cov / math.sqrt(n_msg)
    return fidelity(target, out)


def run_demo(p: float, seed: int, trials: int = 10) -> dict:
    """The CLI demo record: round-trip fidelity, syndrome statistics, the
    matched-ensemble trace distance, and the correctability entropy bound."""
    from .secrecy import kl_alpha_bound

    code = five_qubit_code()
    rng = np.random.default_rng(seed)
    worst = 1.0
    for _ in range(trials):
        msg = _random_state(rng, 1 << N_SYNDROME)
        cov = _random_state(rng, 2)
        sent = stego_superpose(code, msg, encode_covertext(code, cov))
        got_msg, got_cov = stego_decode(code, sent)
        worst = min(worst, fidelity(msg, got_msg) * fidelity(cov, got_cov))
    cov = _random_state(rng, 2)
    codeword = encode_covertext(code, cov)
    uniform = np.full(1 << N_SYNDROME, 1.0 / math.sqrt(1 << N_SYNDROME), dtype=complex)
    syn = syndrome_distribution(code, stego_superpose(code, uniform, codeword))
    weights = truncated_depol_weights(p)
    w_total = float(weights.sum())
    ensemble = [
        (float(q) / w_total, apply_pauli(letters, codeword))
        for q, letters in zip(weights, code.errors)
    ]
    view = eve_reduced_state(code, ensemble, p, codeword)
    bound = kl_alpha_bound(weighted_kraus_set(code, p), code.codespace_projector)
    return {
        "p": p,
        "fidelity": worst,
        "syndrome_distribution": [float(x) for x in syn],
        "trace_distance": view.trace_distance,
        "truncated_mass": w_total,
        "kl_bound_bits": bound.bound_bits,
    }


def _random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1.0j * rng.normal(size=dim)
    return v / np.linalg.norm(v)
