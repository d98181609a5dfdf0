"""Gamma-family special functions used by the memory kernel.

The solver only ever needs Gamma(1 - a) and psi(1 - a) with an exponent
0 <= a < 1, so arguments live in (0, 1]; both routines nevertheless
accept any positive argument.
"""

import math

from .errors import ValidationError

EULER_GAMMA = 0.5772156649015328606

# B_{2k} / (2k) for k = 1..7, the asymptotic tail of psi.
_PSI_TAIL = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def gamma(x: float) -> float:
    """Gamma function on the positive real axis."""
    if x <= 0.0:
        raise ValidationError(f"gamma requires a positive argument, got {x}")
    return math.gamma(x)


def digamma(x: float) -> float:
    """psi(x) = Gamma'(x) / Gamma(x) for x > 0.

    Small arguments are shifted upward with psi(x) = psi(x + 1) - 1/x
    until the asymptotic series

        psi(z) = ln z - 1/(2z) - sum_k B_{2k} / (2k z^{2k})

    is accurate to full double precision (z >= 10).  psi(1) equals
    minus the Euler constant.
    """
    if x <= 0.0:
        raise ValidationError(f"digamma requires a positive argument, got {x}")
    shift = 0.0
    while x < 10.0:
        shift -= 1.0 / x
        x += 1.0
    inv_sq = 1.0 / (x * x)
    tail = 0.0
    power = inv_sq
    for coeff in _PSI_TAIL:
        tail += coeff * power
        power *= inv_sq
    return shift + math.log(x) - 0.5 / x - tail
