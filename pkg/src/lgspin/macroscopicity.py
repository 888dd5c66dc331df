# Leggett's disconnectivity of the binning manifolds: the extensive
# difference Delta = E+ - E- of Jz expectations between the two measurement
# subspaces, reported as best / worst / uniform-average cases over the
# internal level structure.
#
# Conventions (these reproduce the published closed forms):
#   * best  = largest achievable E+ - E- over states confined to each bin,
#   * worst = smallest pair difference, floored at 0 where the two bins'
#     Jz ranges overlap (coherence between degenerate expectations cannot
#     be excluded),
#   * average = uniform weighting over each bin's levels; for the central
#     binning at even N the boundary level m = 0 is shared by both bins
#     (the two boundary conventions are equivalent, and this symmetrized
#     average is the one the closed forms follow).
# All values are in units of single-qubit Jz spacing (differences of m).

from dataclasses import dataclass

import numpy as np

from .measurement import (CENTRAL_LUEDERS, CENTRAL_VN, EXTREME_VN,
                          NORMALIZED_JZ_VN, PARITY_VN, SINGLE_STATE_VN)

DISCONNECTIVITY_SCHEMES = (CENTRAL_VN, SINGLE_STATE_VN, PARITY_VN,
                           EXTREME_VN, CENTRAL_LUEDERS)


@dataclass
class DisconnectivityReport:
    scheme: str
    n_qubits: int
    delta_best: float
    delta_worst: float
    delta_av: float
    plus_levels: np.ndarray  # m values of the +1 manifold (average convention)
    minus_levels: np.ndarray

    @property
    def plus_mean(self):
        return float(np.mean(self.plus_levels))

    @property
    def minus_mean(self):
        return float(np.mean(self.minus_levels))


def binning_manifolds(scheme_id, n_qubits):
    """(plus, minus) m-value manifolds of a two-outcome binning.

    The central binning uses the m > 0 / m < 0 split with m = 0 attached to
    the minus bin (the disconnectivity results do not depend on the choice).
    """
    j = n_qubits / 2
    m = np.arange(n_qubits + 1) - j
    if scheme_id in (CENTRAL_VN, CENTRAL_LUEDERS):
        return m[m > 0], m[m <= 0]
    if scheme_id == SINGLE_STATE_VN:
        return m[1:], m[:1]
    if scheme_id == PARITY_VN:
        down_from_top = np.round(j - m).astype(int)
        return m[down_from_top % 2 == 0], m[down_from_top % 2 == 1]
    if scheme_id == EXTREME_VN:
        return m[-1:], m[:1]
    if scheme_id == NORMALIZED_JZ_VN:
        raise ValueError(
            "normalized-jz-vn does not define two measurement states; "
            "disconnectivity is undefined for it"
        )
    raise ValueError(f"unknown scheme {scheme_id!r}")


def _average_manifolds(scheme_id, n_qubits):
    plus, minus = binning_manifolds(scheme_id, n_qubits)
    if scheme_id in (CENTRAL_VN, CENTRAL_LUEDERS) and n_qubits % 2 == 0:
        plus = np.concatenate([[0.0], plus])  # m = 0 shared at even N
    return plus, minus


def disconnectivity(scheme_id, n_qubits):
    """Best/worst/average disconnectivity for one scheme and ensemble size."""
    if n_qubits < 1:
        raise ValueError(f"need at least one qubit, got N={n_qubits}")
    plus, minus = binning_manifolds(scheme_id, n_qubits)
    best = float(plus.max() - minus.min())
    worst = max(0.0, float(plus.min() - minus.max()))
    plus_av, minus_av = _average_manifolds(scheme_id, n_qubits)
    av = float(plus_av.mean() - minus_av.mean())
    return DisconnectivityReport(
        scheme=scheme_id, n_qubits=n_qubits, delta_best=best,
        delta_worst=worst, delta_av=av,
        plus_levels=plus_av, minus_levels=minus_av,
    )
