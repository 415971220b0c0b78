"""dB / dBm / linear conversions.

All internal computations run on linear watts (powers) and linear amplitude
ratios.  Conversions happen once at the configuration boundary.
"""

import numpy as np


def db_to_linear(x_db):
    """Power ratio from dB: 10^(x/10)."""
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


def linear_to_db(x):
    """dB from a linear power ratio."""
    return 10.0 * np.log10(x)


def dbm_to_watt(x_dbm):
    """Watts from dBm: 10^((x-30)/10)."""
    return 10.0 ** ((np.asarray(x_dbm, dtype=float) - 30.0) / 10.0)


def watt_to_dbm(x_w):
    """dBm from watts."""
    return 10.0 * np.log10(x_w) + 30.0


def db_to_amplitude(x_db):
    """Amplitude ratio from dB: 10^(x/20).

    Used for the reflection-coefficient magnitude cap, which multiplies
    signal amplitude rather than power.
    """
    return 10.0 ** (np.asarray(x_db, dtype=float) / 20.0)
