import numpy as np


def scalar_or_array(x):
    """Unwrap 0-d arrays to Python scalars; leave real arrays alone."""
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x
