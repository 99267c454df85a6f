"""Special functions and the adaptive quadrature oracle behind every projection integral.

The confluent hypergeometric series F(alpha, gamma, u) is the workhorse: for
alpha = -n it terminates and equals a Laguerre polynomial up to a binomial
factor, F(-n, l+1, u) = L_n^(l)(u) / C(n+l, n). Terminating series are summed
in exact rational arithmetic (floats are exact rationals, so this is lossless)
because plain float summation loses up to six orders of magnitude to
cancellation near n = 50, u = 50. The recurrence evaluators below are the fast
float path used inside integrands; the two routes are cross-certified in the
test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from scipy import integrate as _scipy_integrate

# Non-terminating series are only trusted on a modest argument range; beyond
# this the float partial sums are not reliable and callers get an error.
CONVERGENCE_GUARD = 60.0
_MAX_SERIES_TERMS = 500


class SpecfunDomainError(ValueError):
    """Arguments outside the supported domain."""


class SeriesDivergenceError(RuntimeError):
    """A non-terminating series failed its convergence guard."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not converge. Carries the best estimate."""

    def __init__(self, message: str, best_estimate: float, error_estimate: float):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and limits for the adaptive quadrature oracle.

    upper_cutoff truncates semi-infinite domains; the default of 40 suits
    integrands with a Gaussian factor exp(-rho^2/4a^2) at a = 1 (tail below
    1e-300). Callers integrating in other variables must scale it themselves;
    doubling the cutoff must not move a certified integral by more than
    abs_tol, and the tests enforce that.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 2 ** 16
    upper_cutoff: float = 40.0

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise SpecfunDomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise SpecfunDomainError("max_subdivisions must be at least 1")
        if not self.upper_cutoff > 0.0:
            raise SpecfunDomainError("upper_cutoff must be positive")

    def scaled(self, factor: float) -> "QuadratureSpec":
        """A copy with both tolerances multiplied by factor."""
        return QuadratureSpec(self.abs_tol * factor, self.rel_tol * factor,
                              self.max_subdivisions, self.upper_cutoff)


DEFAULT_QUADRATURE = QuadratureSpec()


@dataclass(frozen=True)
class PolynomialSeries:
    """A real polynomial stored as ascending-power coefficients.

    Used for the terminating hypergeometric series, where the coefficient list
    is exact and the only error is in the final evaluation.
    """

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            raise SpecfunDomainError("a polynomial needs at least one coefficient")
        if len(coeffs) > 1 and coeffs[-1] == 0.0:
            raise SpecfunDomainError("leading coefficient must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, u: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * u + c
        return acc

    def terms(self, u: float) -> list:
        """The individual terms c_k u^k, in ascending order."""
        return [c * u ** k for k, c in enumerate(self.coefficients)]

    def term_ratios(self, u: float) -> list:
        """|t_{k+1} / t_k| diagnostics; inf where a term vanishes."""
        t = self.terms(u)
        out = []
        for a, b in zip(t, t[1:]):
            out.append(abs(b / a) if a != 0.0 else math.inf)
        return out

    @classmethod
    def confluent(cls, alpha: float, gamma: float) -> "PolynomialSeries":
        """The terminating series F(alpha, gamma, u) as an exact polynomial."""
        n = _terminating_order(alpha)
        if n is None:
            raise SpecfunDomainError(
                f"alpha={alpha!r} does not terminate; only non-positive integer "
                "alpha yields a polynomial")
        _reject_gamma_pole(gamma)
        coeffs = []
        term = Fraction(1)
        a = Fraction(alpha)
        g = Fraction(gamma)
        for k in range(n + 1):
            coeffs.append(float(term))
            term = term * (a + k) / ((g + k) * (k + 1))
        return cls(tuple(coeffs))

    @classmethod
    def laguerre(cls, n: int) -> "PolynomialSeries":
        return cls.confluent(-float(n), 1.0)


def _terminating_order(alpha: float):
    # terminating iff alpha is a non-positive integer
    if alpha <= 0.0 and float(alpha) == math.floor(alpha):
        return int(-alpha)
    return None


def _reject_gamma_pole(gamma: float):
    if gamma <= 0.0 and float(gamma) == math.floor(gamma):
        raise SpecfunDomainError(
            f"gamma={gamma!r} is a non-positive integer (pole of the series)")


def confluent_hypergeometric(alpha: float, gamma: float, u: float,
                             guard: float = CONVERGENCE_GUARD) -> float:
    """Kummer's series F(alpha, gamma, u) = sum_k (alpha)_k/(gamma)_k u^k/k!.

    Terminating case (alpha a non-positive integer): the partial sums are
    accumulated as exact rationals and converted to float once, so the result
    carries only the final rounding. Non-terminating case: plain ascending
    float summation with a convergence guard; |u| beyond the guard raises.
    """
    _reject_gamma_pole(gamma)
    n = _terminating_order(alpha)
    if n is not None:
        acc = Fraction(0)
        term = Fraction(1)
        a = Fraction(alpha)
        g = Fraction(gamma)
        uu = Fraction(u)
        for k in range(n + 1):
            acc += term
            term = term * (a + k) * uu / ((g + k) * (k + 1))
        return float(acc)

    if abs(u) > guard:
        raise SeriesDivergenceError(
            f"|u|={abs(u)!r} exceeds the convergence guard {guard!r} for the "
            "non-terminating series")
    acc = 0.0
    term = 1.0
    small_streak = 0
    for k in range(_MAX_SERIES_TERMS):
        acc += term
        term = term * (alpha + k) * u / ((gamma + k) * (k + 1))
        if abs(term) <= 1e-17 * max(1.0, abs(acc)):
            small_streak += 1
            if small_streak >= 3:
                return acc
        else:
            small_streak = 0
    raise SeriesDivergenceError(
        f"series did not settle within {_MAX_SERIES_TERMS} terms "
        f"(alpha={alpha!r}, gamma={gamma!r}, u={u!r})")


def laguerre(n: int, u: float) -> float:
    """L_n(u) by the stable three-term recurrence.

    Cross-check oracle for confluent_hypergeometric via L_n(u) = F(-n, 1, u).
    """
    if n < 0:
        raise SpecfunDomainError("Laguerre order must be non-negative")
    if n == 0:
        return 1.0
    prev, cur = 1.0, 1.0 - u
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - u) * cur - k * prev) / (k + 1)
    return cur


def laguerre_associated(n: int, alpha: float, u: float) -> float:
    """Generalized Laguerre L_n^(alpha)(u), three-term recurrence.

    Fast float evaluator for use inside quadrature integrands;
    F(-n, alpha+1, u) = L_n^(alpha)(u) / C(n+alpha, n) for integer alpha >= 0.
    """
    if n < 0:
        raise SpecfunDomainError("Laguerre order must be non-negative")
    if n == 0:
        return 1.0
    prev, cur = 1.0, 1.0 + alpha - u
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - u) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def _run_quad(integrand: Callable[[float], float], lo: float, hi: float,
              spec: QuadratureSpec):
    res = _scipy_integrate.quad(integrand, lo, hi, epsabs=spec.abs_tol,
                                epsrel=spec.rel_tol,
                                limit=spec.max_subdivisions, full_output=1)
    if len(res) > 3:
        value, err = res[0], res[1]
        raise QuadratureError(
            f"quadrature on [{lo!r}, {hi!r}] did not converge: {res[3].strip()}",
            value, err)
    value, err = res[0], res[1]
    return value, err


def integrate_semi_infinite(integrand: Callable[[float], float],
                            spec: QuadratureSpec | None = None):
    """Adaptive quadrature of integrand over [0, infinity).

    The domain is truncated at spec.upper_cutoff; the caller asserts the
    integrand decays at least as fast as a Gaussian beyond it. Returns
    (value, error_estimate); non-convergence raises QuadratureError carrying
    the best estimate.
    """
    spec = spec or DEFAULT_QUADRATURE
    return _run_quad(integrand, 0.0, spec.upper_cutoff, spec)


def integrate_interval(integrand: Callable[[float], float], lo: float, hi: float,
                       spec: QuadratureSpec | None = None):
    """Adaptive quadrature over a finite interval, same error discipline."""
    spec = spec or DEFAULT_QUADRATURE
    if not hi > lo:
        raise SpecfunDomainError("integration interval must have hi > lo")
    return _run_quad(integrand, lo, hi, spec)
