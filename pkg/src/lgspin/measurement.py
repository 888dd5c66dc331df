# The six measurement schemes: q-value assignment over the Jz ladder,
# discard handling, and the von Neumann / Lueders state-update rules.
#
# Scheme identifiers (these strings appear in config files and CSV output):
#   central-vn       q = +1 for m > 0, -1 for m < 0; m = 0 set by the
#                    boundary policy (default: the -1 bin)
#   single-state-vn  q = -1 only for m = -j, +1 otherwise
#   parity-vn        q = +1 for m = j, j-2, ...; -1 for m = j-1, j-3, ...
#   extreme-vn       q(+-j) = +-1, every other outcome discarded (q = 0,
#                    no post-selection renormalization)
#   normalized-jz-vn q = m/j
#   central-lueders  central binning, but the measurement only projects onto
#                    the two binned subspaces, keeping coherence inside each
#
# The weighted update returns the q-weighted post-measurement operator
# sum_m q_m P_m rho P_m (or P+ rho P+ - P- rho P- for Lueders): Hermitian,
# generally neither positive nor trace-1.  Propagating it to the later
# measurement time and tracing against the q-observable yields the two-time
# correlator.

from dataclasses import dataclass

import numpy as np

from .operators import weight_index_groups

M_ZERO_MINUS = "m0-minus"
M_ZERO_PLUS = "m0-plus"

CENTRAL_VN = "central-vn"
SINGLE_STATE_VN = "single-state-vn"
PARITY_VN = "parity-vn"
EXTREME_VN = "extreme-vn"
NORMALIZED_JZ_VN = "normalized-jz-vn"
CENTRAL_LUEDERS = "central-lueders"

SCHEME_IDS = (CENTRAL_VN, SINGLE_STATE_VN, PARITY_VN, EXTREME_VN,
              NORMALIZED_JZ_VN, CENTRAL_LUEDERS)

_CENTRAL_SCHEMES = (CENTRAL_VN, CENTRAL_LUEDERS)


@dataclass(frozen=True)
class MeasurementScheme:
    id: str
    boundary: str = M_ZERO_MINUS

    def __post_init__(self):
        if self.id not in SCHEME_IDS:
            raise ValueError(f"unknown scheme {self.id!r}; one of {SCHEME_IDS}")
        if self.boundary not in (M_ZERO_MINUS, M_ZERO_PLUS):
            raise ValueError(f"unknown boundary policy {self.boundary!r}")

    @property
    def is_lueders(self):
        return self.id == CENTRAL_LUEDERS

    def q_ladder(self, space):
        """(q values, discard mask) over the ascending m ladder."""
        m = space.m_values
        j = space.j
        discard = np.zeros(m.size, dtype=bool)
        if self.id in _CENTRAL_SCHEMES:
            if self.boundary == M_ZERO_MINUS:
                q = np.where(m > 0, 1.0, -1.0)
            else:
                q = np.where(m >= 0, 1.0, -1.0)
        elif self.id == SINGLE_STATE_VN:
            q = np.ones(m.size)
            q[0] = -1.0
        elif self.id == PARITY_VN:
            # +1 on m = j, j-2, ... counting down from the top
            q = np.where(np.round(j - m).astype(int) % 2 == 0, 1.0, -1.0)
        elif self.id == EXTREME_VN:
            q = np.zeros(m.size)
            q[0], q[-1] = -1.0, 1.0
            discard[1:-1] = True
        else:  # NORMALIZED_JZ_VN
            q = m / j
        return q, discard


def _q_per_index(scheme, space):
    """q value per basis index (Dicke: per m; full: per computational index)."""
    q, discard = scheme.q_ladder(space)
    if space.basis == "dicke":
        return q, discard
    weights = space.weights
    return q[weights], discard[weights]


def q_diagonal(scheme, space):
    """Diagonal of the q-observable Q = sum_m q_m P_m (discards contribute 0)."""
    q, _ = _q_per_index(scheme, space)
    return q


def q_observable(scheme, space):
    """Q as a dense diagonal matrix."""
    return np.diag(q_diagonal(scheme, space)).astype(complex)


def _bin_masks(scheme, space):
    """Boolean index masks of the +1 and -1 binning subspaces."""
    qm, _ = scheme.q_ladder(space)
    plus_m = qm > 0
    minus_m = qm < 0
    if space.basis == "dicke":
        return plus_m, minus_m
    weights = space.weights
    return plus_m[weights], minus_m[weights]


def weighted_update(scheme, space, rho):
    """Q-weighted post-measurement operator for the given state."""
    rho = np.asarray(rho)
    if scheme.is_lueders:
        plus, minus = _bin_masks(scheme, space)
        out = np.zeros_like(rho)
        pi, ni = np.where(plus)[0], np.where(minus)[0]
        out[np.ix_(pi, pi)] = rho[np.ix_(pi, pi)]
        out[np.ix_(ni, ni)] = -rho[np.ix_(ni, ni)]
        return out
    if space.basis == "dicke":
        return np.diag(q_diagonal(scheme, space) * np.diag(rho))
    # full backend: pinch to the degenerate Jz manifolds, weight by q
    qm, _ = scheme.q_ladder(space)
    out = np.zeros_like(rho)
    for q, idx in zip(qm, weight_index_groups(space)):
        if q != 0:
            out[np.ix_(idx, idx)] = q * rho[np.ix_(idx, idx)]
    return out


def outcome_distribution(scheme, space, rho):
    """Probability per q value, plus the total discarded probability."""
    pops = np.real(np.diag(rho))
    q, discard = _q_per_index(scheme, space)
    probs = {}
    for qv in np.unique(q[~discard]):
        probs[float(qv)] = float(np.sum(pops[(q == qv) & ~discard]))
    return probs, float(np.sum(pops[discard]))
