"""Pilot-phase and data-phase signal synthesis at the base station.

Users transmit orthonormal pilots; the jammer spreads its training power over
random unit-energy pilot-shaped signals so that it correlates with every user
pilot.  All channels enter as antenna-domain matrices of shape
(antennas, subcarriers).
"""

from dataclasses import dataclass

import numpy as np


def complex_noise(rng: np.random.Generator, shape, variance: float) -> np.ndarray:
    """Circularly-symmetric complex Gaussian draws, CN(0, variance)."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@dataclass(frozen=True)
class PilotBook:
    """Deterministic unitary pilot matrix; column k is user k's pilot."""

    matrix: np.ndarray  # (pilot_length, pilot_length)

    @property
    def pilot_length(self) -> int:
        return int(self.matrix.shape[0])


def generate_pilot_book(pilot_length: int) -> PilotBook:
    """Normalized-DFT pilot book: exactly orthonormal columns."""
    if pilot_length < 1:
        raise ValueError("pilot_length must be >= 1")
    t = np.arange(pilot_length)
    matrix = np.exp(-2j * np.pi * np.outer(t, t) / pilot_length)
    matrix /= np.sqrt(pilot_length)
    matrix.flags.writeable = False
    return PilotBook(matrix=matrix)


@dataclass(frozen=True)
class JammerPilot:
    """Per-subcarrier jammer training signals and pilot correlations.

    ``vectors`` is (pilot_length, subcarriers) with entries CN(0, 1/tau), so
    each per-subcarrier signal has unit expected energy and correlation
    gamma_k^n = (s_w^n)^H s_k with E|gamma|^2 = 1/tau against every pilot.
    """

    vectors: np.ndarray
    correlations: np.ndarray  # (pilot_count, subcarriers)


def generate_jammer_pilot(
    rng: np.random.Generator,
    pilots: PilotBook,
    subcarriers: int,
) -> JammerPilot:
    tau = pilots.pilot_length
    vectors = complex_noise(rng, (tau, subcarriers), 1.0 / tau)
    correlations = pilots.matrix.T @ vectors.conj()
    return JammerPilot(vectors=vectors, correlations=correlations)


@dataclass(frozen=True)
class TrainingObservation:
    """Raw pilot-phase receive matrices and their de-spread projections.

    ``raw`` is (antennas, pilot_length, subcarriers); ``despread`` is
    (pilot_count, antennas, subcarriers) with despread[k] = raw @ s_k.
    """

    raw: np.ndarray
    despread: np.ndarray


def despread(raw: np.ndarray, pilots: PilotBook) -> np.ndarray:
    """Project receive matrices onto every pilot: y_k^n = Y^n s_k."""
    return np.einsum("mtn,tk->kmn", raw, pilots.matrix)


def simulate_training(
    rng: np.random.Generator,
    user_channels: np.ndarray,
    pilot_powers: np.ndarray,
    pilots: PilotBook,
    noise_power: float,
    jammer_channel: np.ndarray | None = None,
    jammer_pilot: JammerPilot | None = None,
    jammer_power: float = 0.0,
) -> TrainingObservation:
    """Synthesize the pilot phase over a block of subcarriers.

    Parameters
    ----------
    user_channels : (users, antennas, subcarriers) complex array.
    pilot_powers : per-user training powers, broadcastable to (users,).
    jammer_channel : (antennas, subcarriers), required when jammer_power > 0.

    Returns
    -------
    TrainingObservation with raw Y and all K de-spread vectors.
    """
    k_users, m, n_sub = user_channels.shape
    tau = pilots.pilot_length
    if k_users > tau:
        raise ValueError("more users than pilots")
    powers = np.broadcast_to(np.asarray(pilot_powers, dtype=float), (k_users,))
    scaled = np.sqrt(tau * powers)[:, None, None] * user_channels
    raw = np.einsum("kmn,tk->mtn", scaled, pilots.matrix[:, :k_users].conj())
    if jammer_power > 0.0:
        if jammer_channel is None or jammer_pilot is None:
            raise ValueError("jammer_power > 0 requires jammer channel and pilot")
        raw = raw + np.sqrt(tau * jammer_power) * np.einsum(
            "mn,tn->mtn", jammer_channel, jammer_pilot.vectors.conj()
        )
    raw = raw + complex_noise(rng, (m, tau, n_sub), noise_power)
    return TrainingObservation(raw=raw, despread=despread(raw, pilots))


@dataclass(frozen=True)
class DataObservation:
    """One data-phase receive vector per subcarrier, plus the sent symbols."""

    received: np.ndarray  # (antennas, subcarriers)
    user_symbols: np.ndarray  # (users, subcarriers)
    jammer_symbols: np.ndarray | None  # (subcarriers,)


def simulate_data(
    rng: np.random.Generator,
    user_channels: np.ndarray,
    data_powers: np.ndarray,
    noise_power: float,
    jammer_channel: np.ndarray | None = None,
    jammer_power: float = 0.0,
) -> DataObservation:
    """Synthesize one data symbol per subcarrier; symbols are CN(0, 1)."""
    k_users, m, n_sub = user_channels.shape
    powers = np.broadcast_to(np.asarray(data_powers, dtype=float), (k_users,))
    symbols = complex_noise(rng, (k_users, n_sub), 1.0)
    received = np.einsum(
        "kmn,kn->mn", np.sqrt(powers)[:, None, None] * user_channels, symbols
    )
    jammer_symbols = None
    if jammer_power > 0.0:
        if jammer_channel is None:
            raise ValueError("jammer_power > 0 requires a jammer channel")
        jammer_symbols = complex_noise(rng, (n_sub,), 1.0)
        received = received + np.sqrt(jammer_power) * jammer_channel * jammer_symbols
    received = received + complex_noise(rng, (m, n_sub), noise_power)
    return DataObservation(
        received=received, user_symbols=symbols, jammer_symbols=jammer_symbols
    )
