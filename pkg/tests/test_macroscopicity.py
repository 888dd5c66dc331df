from itertools import product

import numpy as np
import pytest

from lgspin.macroscopicity import (DISCONNECTIVITY_SCHEMES,
                                   binning_manifolds, disconnectivity)


def closed_forms(scheme, n):
    """Published best/worst/average disconnectivities."""
    odd = n % 2 == 1
    if scheme in ("central-vn", "central-lueders"):
        return n, 1, (n + 1) / 2 if odd else n / 2
    if scheme == "single-state-vn":
        return n, 1, (n + 1) / 2
    if scheme == "parity-vn":
        best = n if odd else n - 1
        worst = 1 if n == 1 else 0
        return best, worst, 1 if odd else 0
    if scheme == "extreme-vn":
        return n, n, n
    raise AssertionError(scheme)


@pytest.mark.parametrize("scheme,n",
                         list(product(DISCONNECTIVITY_SCHEMES, range(1, 13))))
def test_matches_closed_forms(scheme, n):
    rep = disconnectivity(scheme, n)
    best, worst, av = closed_forms(scheme, n)
    assert rep.delta_best == best
    assert rep.delta_worst == worst
    assert rep.delta_av == av


@pytest.mark.parametrize("scheme,n",
                         list(product(DISCONNECTIVITY_SCHEMES, range(1, 13))))
def test_brute_force_extremes(scheme, n):
    plus, minus = binning_manifolds(scheme, n)
    pairs = [mp - mm for mp in plus for mm in minus]
    rep = disconnectivity(scheme, n)
    assert rep.delta_best == max(pairs)
    assert rep.delta_worst == max(0.0, min(pairs))


@pytest.mark.parametrize("scheme,n",
                         list(product(DISCONNECTIVITY_SCHEMES, range(1, 13))))
def test_report_invariants(scheme, n):
    rep = disconnectivity(scheme, n)
    assert 0 <= rep.delta_worst <= rep.delta_av <= rep.delta_best <= n
    assert np.isclose(rep.delta_av, rep.plus_mean - rep.minus_mean)


def test_lueders_matches_central():
    for n in range(1, 13):
        a = disconnectivity("central-vn", n)
        f = disconnectivity("central-lueders", n)
        assert (a.delta_best, a.delta_worst, a.delta_av) == \
               (f.delta_best, f.delta_worst, f.delta_av)


def test_normalized_scheme_rejected():
    with pytest.raises(ValueError, match="two measurement states"):
        disconnectivity("normalized-jz-vn", 4)
    with pytest.raises(ValueError):
        disconnectivity("central-vn", 0)
