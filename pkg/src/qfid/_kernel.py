"""Select the Monte Carlo kernel backend at import time."""
try:
    from ._ckernels import BACKEND, mc_values, pairwise_sum
except ImportError:  # extension not built
    from ._pykernels import BACKEND, mc_values, pairwise_sum

__all__ = ["BACKEND", "mc_values", "pairwise_sum"]
