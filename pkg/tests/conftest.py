import warnings

import numpy as np
import pytest

# the TBB version probe inside numba is noise on this box
warnings.filterwarnings("ignore", message=".*TBB.*")


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(12345))
