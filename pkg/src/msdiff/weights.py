"""Closed-form quadrature weights of the discrete memory term.

At time level n the convolution (g * v)(t_n) is approximated panel by
panel: on [t_{k-1}, t_k] the exponent and its derivative are frozen at
the lag d = t_n - t_k, the factor ln(t_n - s) is kept exact, and v is
frozen at t_k.  Each panel then integrates in closed form and the
memory term becomes sum_k w(n,k) v(t_k) with

    w(n,k) = [ -alpha'(d) L + R(d) P ] / Gamma(1 - alpha(d)),

where, with a = alpha(d) and e = t_n - t_{k-1},

    L = int_{t_{k-1}}^{t_k} ln(t_n - s) (t_n - s)^(-a) ds
      = e^(1-a)/(1-a) (ln e - 1/(1-a)) - d^(1-a)/(1-a) (ln d - 1/(1-a)),
    P = int_{t_{k-1}}^{t_k} (t_n - s)^(-a) ds = (e^(1-a) - d^(1-a))/(1-a),
    R(d) = -alpha(d)/d + psi(1 - alpha(d)) alpha'(d).

The diagonal panel k = n has d = 0 and is fixed by the continuous
limits: x ln x -> 0 kills the second bracket of L (so L = tau (ln tau
- 1)), P = tau, and R(0) = -alpha'(0) (1 + euler_gamma).

On the uniform time grid every quantity above depends on n and k only
through the lag index j = n - k, so the lower-triangular weight table
collapses to a single vector indexed by j.  WeightTable stores that
vector and serves entries b(n, k) from it; dense() materialises the
triangle when a full table is wanted.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import SolverError, ValidationError
from .exponents import VariableExponent
from .kernel import smooth_factor
from .special import gamma


def _check_panel(n: int, k: int, tau: float) -> None:
    if k < 1 or k > n:
        raise ValidationError(f"panel index must satisfy 1 <= k <= n, got k={k}, n={n}")
    if not tau > 0.0:
        raise ValidationError(f"step size must be positive, got {tau}")


def weight_log_moment(n: int, k: int, tau: float, exp: VariableExponent) -> float:
    """Panel integral of ln(t_n - s) (t_n - s)^(-a), a frozen at the lag."""
    _check_panel(n, k, tau)
    d = (n - k) * tau
    e = (n - k + 1) * tau
    a = float(exp.alpha(d))
    one_m = 1.0 - a
    upper = e ** one_m / one_m * (math.log(e) - 1.0 / one_m)
    if n == k:  # x ln x -> 0 at the singular end
        return upper
    lower = d ** one_m / one_m * (math.log(d) - 1.0 / one_m)
    return upper - lower


def weight_power_moment(n: int, k: int, tau: float, exp: VariableExponent) -> float:
    """Panel integral of (t_n - s)^(-a), a frozen at the lag."""
    _check_panel(n, k, tau)
    d = (n - k) * tau
    e = (n - k + 1) * tau
    a = float(exp.alpha(d))
    one_m = 1.0 - a
    return (e ** one_m - d ** one_m) / one_m


def weight_smooth_factor(n: int, k: int, tau: float, exp: VariableExponent) -> float:
    """Log-free coefficient R at the panel lag; -alpha'(0)(1+gamma_e) on the diagonal."""
    _check_panel(n, k, tau)
    return smooth_factor(exp, (n - k) * tau)


def memory_weight(n: int, k: int, tau: float, exp: VariableExponent) -> float:
    """Full panel weight w(n, k) multiplying v(t_k) in the memory sum."""
    _check_panel(n, k, tau)
    d = (n - k) * tau
    a = float(exp.alpha(d))
    d1 = float(exp.alpha_d1(d))
    log_m = weight_log_moment(n, k, tau, exp)
    pow_m = weight_power_moment(n, k, tau, exp)
    smooth = weight_smooth_factor(n, k, tau, exp)
    return (-d1 * log_m + smooth * pow_m) / gamma(1.0 - a)


@dataclass(frozen=True)
class WeightTable:
    """Memory weights for an N-step uniform grid, stored by lag.

    lag[j] equals b(n, k) for every pair with n - k = j; valid entries
    have 1 <= k <= n <= n_steps.
    """

    n_steps: int
    tau: float
    lag: np.ndarray

    def b(self, n: int, k: int) -> float:
        """Entry b(n, k) of the lower-triangular table."""
        _check_panel(n, k, self.tau)
        if n > self.n_steps:
            raise ValidationError(
                f"row {n} outside table with {self.n_steps} steps")
        return float(self.lag[n - k])

    def row(self, n: int) -> np.ndarray:
        """Weights b(n, k) for k = 1..n (a reversed view of the lag vector)."""
        if n < 1 or n > self.n_steps:
            raise ValidationError(f"row {n} outside table")
        return self.lag[:n][::-1]

    @property
    def diagonal(self) -> float:
        """b(n, n), identical for every n."""
        return float(self.lag[0])

    def dense(self) -> np.ndarray:
        """Materialise the (n_steps x n_steps) lower triangle; row n-1
        holds b(n, 1..n)."""
        N = self.n_steps
        out = np.zeros((N, N))
        for n in range(1, N + 1):
            out[n - 1, :n] = self.row(n)
        return out

    def entries(self):
        """Iterate (n, k, b) over all defined entries, row-major."""
        for n in range(1, self.n_steps + 1):
            for k in range(1, n + 1):
                yield n, k, float(self.lag[n - k])


def assemble_weights(n_steps: int, tau: float,
                     exp: VariableExponent) -> WeightTable:
    """Compute the lag vector for an N-step grid.

    The exponent is assumed admissible.  Any special-function failure
    is re-raised with the offending (n, k) pair attached; non-finite
    entries are rejected outright.
    """
    if n_steps < 1:
        raise ValidationError(f"need at least one step, got {n_steps}")
    if not tau > 0.0:
        raise ValidationError(f"step size must be positive, got {tau}")
    lag = np.empty(n_steps)
    for j in range(n_steps):
        try:
            lag[j] = memory_weight(j + 1, 1, tau, exp)
        except (ValidationError, ValueError, OverflowError) as err:
            raise SolverError(
                f"weight evaluation failed at lag {j} "
                f"(entries n-k={j}, e.g. n={j + 1}, k=1): {err}") from err
    if not np.all(np.isfinite(lag)):
        bad = int(np.flatnonzero(~np.isfinite(lag))[0])
        raise SolverError(
            f"non-finite memory weight at lag {bad} (n={bad + 1}, k=1)")
    return WeightTable(n_steps=n_steps, tau=tau, lag=lag)
