"""Local Hamiltonians in continuous time leak to every site instantly."""

import numpy as np
import pytest
import scipy.linalg

from fermiqca.errors import DomainError
from fermiqca.noncausal import (
    HoppingChain,
    evolve_from_origin,
    leading_order_amplitude,
    leakage_amplitude,
    leakage_table,
    loglog_slope,
)


def test_no_leakage_at_t_zero():
    chain = HoppingChain(9)
    for n in range(1, 9):
        assert leakage_amplitude(chain, n, 0.0) == 0.0
    assert leakage_amplitude(chain, 0, 0.0) == 1.0


def test_leading_taylor_term_within_factor_two():
    chain = HoppingChain(9, hopping=1.0)
    amp = leakage_amplitude(chain, 4, 1e-3)
    lead = leading_order_amplitude(chain, 4, 1e-3)
    assert lead == (1e-3) ** 4 / 24
    assert lead / 2 < amp < lead * 2


def test_strictly_positive_at_all_sampled_times():
    chain = HoppingChain(9)
    for t in (1e-4, 1e-3, 1e-2):
        assert leakage_amplitude(chain, 4, t) > 0.0


def test_taylor_matches_dense_expm_at_moderate_time():
    chain = HoppingChain(7)
    h = chain.single_particle_hamiltonian()
    t = 0.8
    ref = scipy.linalg.expm(-1j * h * t)[:, 0]
    assert np.max(np.abs(evolve_from_origin(chain, t) - ref)) < 1e-12


def test_loglog_slope_estimates_graph_distance():
    chain = HoppingChain(11)
    for n in (2, 3, 4):
        slope = loglog_slope(chain, n, np.geomspace(1e-4, 1e-3, 5))
        assert abs(slope - n) < 0.1


def test_leakage_table_shape():
    chain = HoppingChain(5)
    rows = leakage_table(chain, [1e-3, 1e-2], sites=[0, 4])
    assert len(rows) == 4
    assert rows[0][0] == 1e-3 and rows[-1][1] == 4


def test_validation():
    with pytest.raises(DomainError):
        HoppingChain(2)
    with pytest.raises(DomainError):
        HoppingChain(5, hopping=0.0)
    with pytest.raises(DomainError):
        leakage_amplitude(HoppingChain(5), 9, 0.1)
