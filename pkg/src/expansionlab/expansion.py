"""Projection onto basis families, Parseval and convergence diagnostics.

Includes the closed-form and quadrature routes for the Landau l=0 overlap
with a transverse plane-wave slice: both evaluate the radial integral
int_0^inf exp(-rho^2/4a^2) F(-n, 1, rho^2/2a^2) rho d rho, with the
delta-function factor from the z direction dropped and the proportionality
constant set to 1 (only ratios and convergence verdicts matter here). The
Gaussian and the polynomial argument share the single magnetic length a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import basis
from .basis import Box1D, LandauUniformField, SpacePoint
from .specfun import (QuadratureError, QuadratureSpec, integrate_interval,
                      integrate_semi_infinite, laguerre)

FLAG_OK = ""
FLAG_NO_CONVERGENCE = "no-convergence"


@dataclass
class CoefficientSeries:
    """Projection coefficients over a basis family, ordered by principal number.

    Each entry carries the quadrature error estimate of its coefficient and a
    flag ('' or 'no-convergence'); closed-form entries have error 0.
    """

    family: object
    entries: list
    quad_errors: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    def __post_init__(self):
        if not self.quad_errors:
            self.quad_errors = [0.0] * len(self.entries)
        if not self.flags:
            self.flags = [FLAG_OK] * len(self.entries)
        if not (len(self.entries) == len(self.quad_errors) == len(self.flags)):
            raise ValueError("entries, quad_errors, and flags must align")
        order = sorted(range(len(self.entries)),
                       key=lambda i: basis.principal_number(self.entries[i][0]))
        self.entries = [(self.entries[i][0], complex(self.entries[i][1]))
                        for i in order]
        self.quad_errors = [self.quad_errors[i] for i in order]
        self.flags = [self.flags[i] for i in order]
        ns = [basis.principal_number(ix) for ix, _ in self.entries]
        if len(set(self.indices())) != len(self.entries):
            raise ValueError("coefficient entries must have distinct indices")
        self._ns = ns

    def indices(self):
        return [ix for ix, _ in self.entries]

    def principal_numbers(self):
        return list(self._ns)

    def coefficients(self) -> np.ndarray:
        return np.array([c for _, c in self.entries], dtype=complex)

    def abs_sq(self) -> np.ndarray:
        c = self.coefficients()
        return (c * c.conj()).real

    def partial_sums(self) -> np.ndarray:
        return np.cumsum(self.abs_sq())

    @property
    def truncation(self) -> int:
        return self._ns[-1] if self._ns else 0

    def flagged(self) -> bool:
        return any(f != FLAG_OK for f in self.flags)


@dataclass
class ConvergenceReport:
    """Partial-sum scan of sum_{n<=N} |C_n|^2 with a verdict."""

    ns: list
    partial_sums: list
    verdict: str  # convergent | divergent | inconclusive
    slope: float
    first_converged_n: int | None = None

    def __post_init__(self):
        diffs = np.diff(np.asarray(self.partial_sums, dtype=float))
        if len(diffs) and diffs.min() < -1e-15:
            raise ValueError("partial sums must be non-decreasing")

    def to_text(self) -> str:
        lines = [f"verdict: {self.verdict}",
                 f"fitted slope: {self.slope!r}",
                 f"scan range: n = {self.ns[0]} .. {self.ns[-1]}"]
        if self.first_converged_n is not None:
            lines.append(f"increments negligible from n = {self.first_converged_n}")
        lines.append(f"partial sum at n={self.ns[-1]}: {self.partial_sums[-1]!r}")
        return "\n".join(lines)


def _angular_average(target, rho: float, l: int, z: float = 0.0,
                     tol: float = 1e-12) -> complex:
    """(1/2pi) int e^(-i l phi) target(rho, phi) dphi by doubling trapezoid.

    The periodic trapezoid rule is spectrally accurate, so band-limited
    targets converge after one doubling.
    """
    m = 16
    prev = None
    while m <= 1024:
        phis = np.arange(m) * (2.0 * math.pi / m)
        vals = np.array([target(SpacePoint.cylindrical(rho, p, z)) for p in phis],
                        dtype=complex)
        avg = complex(np.mean(vals * np.exp(-1j * l * phis)))
        if prev is not None and abs(avg - prev) <= max(1e-14, tol * abs(avg)):
            return avg
        prev = avg
        m *= 2
    return prev


def _complex_quad(integrand, runner):
    re, re_err = runner(lambda t: integrand(t).real)
    im, im_err = runner(lambda t: integrand(t).imag)
    return complex(re, im), math.hypot(re_err, im_err)


def project(target, family, indices, quadrature: QuadratureSpec | None = None) -> CoefficientSeries:
    """Coefficients C_n = <psi_n | target> by the quadrature oracle.

    target is a callable of SpacePoint. Landau projections run on the fixed
    transverse slice z = 0 (angular integral by periodic trapezoid, radial by
    adaptive quadrature); box projections integrate over [0, L]. A coefficient
    whose quadrature fails to converge keeps its best estimate and is flagged;
    the series is still returned.
    """
    entries, errors, flags = [], [], []
    if isinstance(family, LandauUniformField):
        a = family.magnetic_length
        spec = quadrature or basis.default_quadrature(family)
        for ix in indices:
            def radial_integrand(rho, _ix=ix):
                if rho == 0.0 and _ix.l != 0:
                    return 0.0 + 0.0j
                r = basis.landau_radial(_ix.n, _ix.l, rho, a)
                avg = _angular_average(target, rho, _ix.l)
                return math.sqrt(2.0 * math.pi) * r * rho * avg

            runner = lambda f: integrate_semi_infinite(f, spec)
            value, err, flag = _guarded(radial_integrand, runner)
            entries.append((ix, value))
            errors.append(err)
            flags.append(flag)
    elif isinstance(family, Box1D):
        width = family.width
        spec = quadrature or QuadratureSpec()
        for ix in indices:
            def integrand(x, _ix=ix):
                return basis.box_eigenfunction(_ix.n, x, width) \
                    * target(SpacePoint.cartesian(x, 0.0, 0.0))

            runner = lambda f: integrate_interval(f, 0.0, width, spec)
            value, err, flag = _guarded(integrand, runner)
            entries.append((ix, value))
            errors.append(err)
            flags.append(flag)
    else:
        raise basis.BasisIndexError(
            f"projection is not defined for {type(family).__name__}")
    return CoefficientSeries(family, entries, errors, flags)


def _guarded(integrand, runner):
    try:
        value, err = _complex_quad(integrand, runner)
        return value, err, FLAG_OK
    except QuadratureError as exc:
        return complex(exc.best_estimate), exc.error_estimate, FLAG_NO_CONVERGENCE


def landau_plane_wave_coefficient(n: int, a: float = 1.0) -> float:
    """Closed form of the l=0 radial overlap integral: 2 a^2 (-1)^n.

    Substituting u = rho^2/2a^2 turns the integral into
    a^2 int_0^inf e^(-u/2) L_n(u) du; the Laplace transform of L_n at s gives
    (s-1)^n / s^(n+1), which at s = 1/2 is 2 (-1)^n. The magnitude is constant
    in n; the sign alternates (see landau_plane_wave_overlap for the
    quadrature route that certifies this).
    """
    if n < 0:
        raise basis.BasisIndexError("Landau n must be non-negative")
    if not a > 0.0:
        raise basis.BasisDomainError("magnetic length must be positive")
    return 2.0 * a * a * (1.0 if n % 2 == 0 else -1.0)


def landau_plane_wave_overlap(n: int, a: float = 1.0,
                              quadrature: QuadratureSpec | None = None):
    """Quadrature route for the same radial overlap; returns (value, error)."""
    if not a > 0.0:
        raise basis.BasisDomainError("magnetic length must be positive")
    spec = quadrature or QuadratureSpec(upper_cutoff=40.0 * a)

    def integrand(rho):
        u = rho * rho / (2.0 * a * a)
        return math.exp(-0.25 * rho * rho / (a * a)) * laguerre(n, u) * rho

    return integrate_semi_infinite(integrand, spec)


def parseval_defect(series: CoefficientSeries) -> float:
    """|sum |C_n|^2 - 1| at the series truncation (target assumed unit-normalized)."""
    return abs(float(np.sum(series.abs_sq())) - 1.0)


def convergence_scan(coefficient_fn, n_max: int, *, n_start: int = 0,
                     increment_tol: float = 1e-12,
                     divergence_factor: float = 10.0,
                     reference_n: int = 10) -> ConvergenceReport:
    """Scan partial sums of |coefficient_fn(n)|^2 for n in [n_start, n_max].

    Divergent: the final partial sum exceeds divergence_factor times the value
    at reference_n and the linear fit has positive slope. Convergent: the
    increments fall below increment_tol (relative to the running sum) and stay
    there. Otherwise inconclusive.
    """
    if n_max < n_start:
        raise ValueError("n_max must be at least n_start")
    ns = list(range(n_start, n_max + 1))
    inc = np.array([abs(coefficient_fn(n)) ** 2 for n in ns], dtype=float)
    sums = np.cumsum(inc)

    first_converged = None
    for i in range(len(ns)):
        tail = inc[i:]
        if np.all(tail <= increment_tol * max(1.0, sums[-1])):
            first_converged = ns[i]
            break

    ref_pos = min(max(reference_n - n_start, 0), len(ns) - 1)
    slope = float(np.polyfit(ns, sums, 1)[0]) if len(ns) > 1 else 0.0

    if first_converged is not None and first_converged < n_max:
        verdict = "convergent"
    elif sums[-1] > divergence_factor * max(sums[ref_pos], 0.0) \
            and sums[ref_pos] > 0.0 and slope > 0.0:
        verdict = "divergent"
    else:
        verdict = "inconclusive"
    return ConvergenceReport(ns, [float(s) for s in sums], verdict, slope,
                             first_converged)


def reconstruct(series: CoefficientSeries, point: SpacePoint) -> complex:
    """Truncated synthesis sum_n C_n psi_n(point)."""
    total = 0.0 + 0.0j
    for ix, c in series.entries:
        total += c * basis.evaluate(series.family, ix, point)
    return total


def reconstruct_dx(series: CoefficientSeries, point: SpacePoint) -> complex:
    """d/dx of the truncated synthesis; box families only."""
    if not isinstance(series.family, Box1D):
        raise basis.BasisIndexError(
            "x-derivative synthesis is only provided for the box family")
    total = 0.0 + 0.0j
    for ix, c in series.entries:
        total += c * basis.box_eigenfunction_dx(ix.n, point.x, series.family.width)
    return total


def coefficient_csv_rows(series: CoefficientSeries):
    """Rows for the coefficient table: n, re, im, abs, abs_sq, partial_sum, quad_err."""
    rows = []
    partial = 0.0
    for (ix, c), err, flag in zip(series.entries, series.quad_errors, series.flags):
        mag_sq = (c * c.conjugate()).real
        partial += mag_sq
        rows.append({
            "n": basis.principal_number(ix),
            "re": c.real,
            "im": c.imag,
            "abs": abs(c),
            "abs_sq": mag_sq,
            "partial_sum": partial,
            "quad_err": err if flag == FLAG_OK else f"{err!r}:{flag}",
        })
    return rows


def write_coefficient_csv(series: CoefficientSeries, path):
    """Write the coefficient table; floats via repr for byte determinism."""
    rows = coefficient_csv_rows(series)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("n,re,im,abs,abs_sq,partial_sum,quad_err\n")
        for r in rows:
            fh.write(",".join([
                str(r["n"]), repr(r["re"]), repr(r["im"]), repr(r["abs"]),
                repr(r["abs_sq"]), repr(r["partial_sum"]),
                r["quad_err"] if isinstance(r["quad_err"], str) else repr(r["quad_err"]),
            ]) + "\n")
