"""Memory kernel of the reformulated multiscale model.

With a time-varying exponent the fractional term is equivalent to a
convolution correction of the heat equation.  The kernel is

    g(t) = d/dt p(t),      p(t) = t^(-alpha(t)) / Gamma(1 - alpha(t)),

and factorises as g = p * G where G is the logarithmic derivative of p:

    G(t) = -alpha'(t) ln t - alpha(t)/t + psi(1 - alpha(t)) alpha'(t).

Because alpha(0) = 0 the prefactor p(t) tends to 1 as t -> 0+, which
gives the antiderivative identity  int_0^t g = p(t) - 1  used as the
main correctness anchor.  g itself is integrable but unbounded at 0
whenever alpha'(0) != 0, so every evaluation here requires t > 0.
"""

import math
from dataclasses import dataclass

from .errors import ValidationError
from .exponents import VariableExponent
from .special import digamma, gamma

# Below this time the difference quotient alpha(t)/t is replaced by its
# limit alpha'(0).
_RATIO_LIMIT_TIME = 1e-12


@dataclass(frozen=True)
class KernelEvaluation:
    """g(t) split into its two factors: g_value = prefactor * g_factor."""

    t: float
    prefactor: float
    g_factor: float
    g_value: float


def _require_positive_time(t: float) -> float:
    t = float(t)
    if not t > 0.0:
        raise ValidationError(f"kernel evaluation requires t > 0, got {t}")
    return t


def kernel_prefactor(exp: VariableExponent, t: float) -> float:
    """p(t) = t^(-alpha(t)) / Gamma(1 - alpha(t)), computed via exp/log.

    Finite on (0, T] and -> 1 as t -> 0+ (alpha(t) ln t vanishes there).
    """
    t = _require_positive_time(t)
    a = float(exp.alpha(t))
    return math.exp(-a * math.log(t)) / gamma(1.0 - a)


def smooth_factor(exp: VariableExponent, t: float) -> float:
    """Log-free part of G:  -alpha(t)/t + psi(1 - alpha(t)) alpha'(t).

    Defined for t >= 0; at t = 0 the difference quotient becomes
    alpha'(0) and psi(1) = -euler_gamma, so the limit is
    -alpha'(0) (1 + euler_gamma).
    """
    t = float(t)
    if t < 0.0:
        raise ValidationError(f"smooth_factor requires t >= 0, got {t}")
    if t < _RATIO_LIMIT_TIME:
        ratio = float(exp.alpha_d1(0.0))
    else:
        ratio = float(exp.alpha(t)) / t
    a = float(exp.alpha(t))
    return -ratio + digamma(1.0 - a) * float(exp.alpha_d1(t))


def log_derivative_factor(exp: VariableExponent, t: float) -> float:
    """G(t) = -alpha'(t) ln t + smooth part; the factor g/p."""
    t = _require_positive_time(t)
    return -float(exp.alpha_d1(t)) * math.log(t) + smooth_factor(exp, t)


def evaluate_kernel(exp: VariableExponent, t: float) -> KernelEvaluation:
    """Full kernel evaluation g(t) = p(t) G(t) at a single time t > 0."""
    t = _require_positive_time(t)
    p = kernel_prefactor(exp, t)
    G = log_derivative_factor(exp, t)
    return KernelEvaluation(t=t, prefactor=p, g_factor=G, g_value=p * G)


def kernel_value(exp: VariableExponent, t: float) -> float:
    """Shorthand for evaluate_kernel(exp, t).g_value."""
    return evaluate_kernel(exp, t).g_value
