"""Excitation transfer efficiency in the FMO light-harvesting network."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

OPTIMAL_DEPHASING = (0.74, 24.0, 0.0, 5.2, 50.6, 0.0, 15.0)


def optimal_rates(sink=0.32, dissipation=0.0005):
    """Local dephasing rates that maximize transfer at N0 = 100, with pinned dissipation."""
    import numpy as np

    from ._core import DecoherenceSpec

    r = DecoherenceSpec.null_with_sink(sink)
    r.gamma_deph = np.array(OPTIMAL_DEPHASING)
    r.gamma_diss = np.full(7, dissipation)
    return r
