import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from rootcf.bvp import verify_theorems
from rootcf.exact import PerfectPowerError, validate_spec

SWEEP_K_MAX = 200
SWEEP_N_MAX = 50


@pytest.fixture(scope="session")
def cubic_sweep():
    """verify_theorems over every non-cube k in [2, 200] at N = 50.

    Shared by the acceptance criteria that all quantify over this sweep.
    """
    reports = {}
    for k in range(2, SWEEP_K_MAX + 1):
        try:
            spec = validate_spec(k, 3)
        except PerfectPowerError:
            continue
        reports[k] = verify_theorems(spec, SWEEP_N_MAX, keep_terms=True)
    return reports
