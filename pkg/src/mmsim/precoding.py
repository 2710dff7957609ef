"""Linear multi-user precoders and the equivalent channel they induce.

Every builder consumes the Frobenius-normalized channel estimate and returns a
unit-Frobenius-norm precoding matrix, one column per UE; path loss never enters
here, it reaches the SINR through the per-UE SNR term.
"""

from dataclasses import dataclass

import numpy as np

from .antenna import Codebook
from .channel import ChannelMatrix

PRECODER_KINDS = ("gob_p", "gob_slnr", "mf", "zf", "mmse")

ZF_CONDITION_LIMIT = 1e12


class SingularChannelError(RuntimeError):
    """Raised when the ZF Gram matrix is numerically singular."""


@dataclass(frozen=True)
class PrecodingMatrix:
    w: np.ndarray      # (n_elements, n_ues), complex
    kind: str
    normalized: bool


@dataclass(frozen=True)
class EquivalentMatrix:
    """h_bar[m, i] = (normalized true channel of UE m)^H (precoding column of UE i)."""

    h_bar: np.ndarray  # (n_ues, n_ues), complex
    precoder_kind: str


def normalize_frobenius(w: np.ndarray) -> np.ndarray:
    """Scale a matrix to unit Frobenius norm; rejects (near-)zero input."""
    norm = np.linalg.norm(w)
    if not np.isfinite(norm) or norm < 1e-300:
        raise ValueError("degenerate precoder: zero or non-finite matrix")
    return w / norm


def _normalized_estimate(channel: ChannelMatrix) -> np.ndarray:
    return normalize_frobenius(channel.h)


def _beam_powers(h_norm: np.ndarray, codebook: Codebook) -> np.ndarray:
    """|h_m^H w_z|^2 for every UE/beam pair; shape (n_beams, n_ues)."""
    return np.abs(codebook.matrix.conj().T @ h_norm) ** 2


def _stack_beams(codebook: Codebook, indices: np.ndarray, kind: str) -> PrecodingMatrix:
    w = codebook.matrix[:, indices]
    return PrecodingMatrix(w=normalize_frobenius(w), kind=kind, normalized=True)


def gob_power(channel_est: ChannelMatrix, codebook: Codebook) -> PrecodingMatrix:
    """Per UE, the codebook beam with the largest received power; ties -> lowest index."""
    powers = _beam_powers(_normalized_estimate(channel_est), codebook)
    return _stack_beams(codebook, np.argmax(powers, axis=0), "gob_p")


def gob_slnr(channel_est: ChannelMatrix, codebook: Codebook, noise_term: float) -> PrecodingMatrix:
    """Per UE, the beam maximizing signal over (noise + leakage onto other UEs)."""
    if noise_term <= 0:
        raise ValueError("noise_term must be positive")
    powers = _beam_powers(_normalized_estimate(channel_est), codebook)
    leakage = powers.sum(axis=1, keepdims=True) - powers
    slnr = powers / (noise_term + leakage)
    return _stack_beams(codebook, np.argmax(slnr, axis=0), "gob_slnr")


def mf(channel_est: ChannelMatrix) -> PrecodingMatrix:
    """Matched filter: the normalized estimate itself."""
    return PrecodingMatrix(w=_normalized_estimate(channel_est), kind="mf", normalized=True)


def zf(channel_est: ChannelMatrix) -> PrecodingMatrix:
    """Zero forcing via Gram solve with one iterative-refinement step.

    The refinement drives the residual of G X = I down to machine level, which
    keeps the equivalent matrix's off-diagonal leakage near eps even for
    moderately ill-conditioned channels.
    """
    h = _normalized_estimate(channel_est)
    gram = h.conj().T @ h
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > ZF_CONDITION_LIMIT:
        raise SingularChannelError(f"ZF singular channel (cond={cond:.3e})")
    ident = np.eye(gram.shape[0], dtype=complex)
    x = np.linalg.solve(gram, ident)
    x += np.linalg.solve(gram, ident - gram @ x)
    return PrecodingMatrix(w=normalize_frobenius(h @ x), kind="zf", normalized=True)


def mmse(channel_est: ChannelMatrix, snr: float) -> PrecodingMatrix:
    """Regularized inversion W = H (H^H H + I/snr)^-1; snr is linear and positive."""
    if not np.isfinite(snr) or snr <= 0:
        raise ValueError("snr must be positive and finite")
    h = _normalized_estimate(channel_est)
    gram = h.conj().T @ h
    loaded = gram + np.eye(gram.shape[0], dtype=complex) / snr
    x = np.linalg.solve(loaded, h.conj().T)
    return PrecodingMatrix(w=normalize_frobenius(x.conj().T), kind="mmse", normalized=True)


def equivalent_matrix(channel_true: ChannelMatrix, precoder: PrecodingMatrix) -> EquivalentMatrix:
    """Couple a precoder to the *true* channel (Frobenius-normalized)."""
    if not precoder.normalized:
        raise ValueError("precoder must be normalized before coupling")
    h = normalize_frobenius(channel_true.h)
    if precoder.w.shape != h.shape:
        raise ValueError("precoder/channel dimension mismatch")
    return EquivalentMatrix(h_bar=h.conj().T @ precoder.w, precoder_kind=precoder.kind)
