"""Physical constants and unit helpers.

Internal convention: every rate and frequency is stored in rad/s, every
temperature in kelvin, every energy in joules, every power in watts.
Values crossing the package boundary (JSON/CSV, ``*_hz`` fields) are plain
Hz; divide by 2*pi exactly once, here, and nowhere else.
"""

import math

HBAR = 1.054571817e-34  # J s
KB = 1.380649e-23  # J/K
EV = 1.602176634e-19  # J
TWO_PI = 2.0 * math.pi


def hz(omega: float) -> float:
    """rad/s -> Hz."""
    return omega / TWO_PI


def rad_per_s(f: float) -> float:
    """Hz -> rad/s."""
    return f * TWO_PI


def format_power(p: float) -> str:
    """Render a power in watts using the closest of aW/zW/yW, for reports."""
    a = abs(p)
    if a >= 1e-18 or a == 0.0:
        return f"{p / 1e-18:.3g} aW"
    if a >= 1e-21:
        return f"{p / 1e-21:.3g} zW"
    return f"{p / 1e-24:.3g} yW"
