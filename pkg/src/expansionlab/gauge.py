"""Gauge covariance experiments: potentials, phases, and the velocity observable.

The covariance set transforms everything together: A' = A + grad f,
Phi' = Phi - df/dt, the wave function picks up exp(i f), and observables are
rebuilt from the primed potentials. The velocity operator is v = p - A with
p = -i hbar d/dx on the well domain. Experiments run on the 1-D box embedded
along the x axis; gauge functions remain full fields of (t, r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import expansion, propagation
from .basis import Box1D, SpacePoint, box_eigenfunction
from .expansion import CoefficientSeries
from .propagation import (HamiltonianModel, Units, box_energies, hard_step,
                          momentum_matrix_elements_box, smooth_ramp,
                          smooth_ramp_dt, unitary_propagate)
from .specfun import QuadratureSpec, integrate_interval


class GaugeConsistencyError(ValueError):
    """A gauge function's stated derivatives disagree with finite differences."""


class GaugeFieldMismatchError(ValueError):
    """A gauge pair does not represent the same electromagnetic field."""

    def __init__(self, message: str, defect: float):
        super().__init__(message)
        self.defect = defect


class NormalizationError(ValueError):
    """State handed to an observable is not unit-normalized."""

    def __init__(self, message: str, measured_norm: float):
        super().__init__(message)
        self.measured_norm = measured_norm


class ReferenceUnavailableError(RuntimeError):
    """The reference propagation cannot serve the requested fit."""


@dataclass(frozen=True)
class GaugeFunction:
    """A differentiable gauge function f(t, r) with its analytic derivatives.

    grad_f returns the spatial gradient as a 3-vector, dt_f the time
    derivative. Keeping the derivatives analytic (not finite-differenced) is
    what lets covariance checks reach 1e-10; consistency_defect certifies them
    against central differences at sample points.
    """

    f: Callable
    grad_f: Callable
    dt_f: Callable

    def consistency_defect(self, times, points, step: float = 1e-5) -> float:
        worst = 0.0
        for t in times:
            ht = step if t == 0.0 else min(step, abs(t) / 2.0)
            for r in points:
                r = np.asarray(r, dtype=float)
                fd_t = (self.f(t + ht, r) - self.f(t - ht, r)) / (2.0 * ht)
                worst = max(worst, _rel(fd_t, self.dt_f(t, r)))
                grad = np.asarray(self.grad_f(t, r), dtype=float)
                for j in range(3):
                    shift = np.zeros(3)
                    shift[j] = step
                    fd_j = (self.f(t, r + shift) - self.f(t, r - shift)) \
                        / (2.0 * step)
                    worst = max(worst, _rel(fd_j, grad[j]))
        return worst


def _rel(measured: float, stated: float) -> float:
    return abs(measured - stated) / max(1.0, abs(stated))


def zero_gauge_function() -> GaugeFunction:
    return GaugeFunction(lambda t, r: 0.0,
                         lambda t, r: np.zeros(3),
                         lambda t, r: 0.0)


@dataclass(frozen=True)
class Potentials:
    """Vector and scalar potentials as callables of (t, r)."""

    vector: Callable
    scalar: Callable


def free_potentials() -> Potentials:
    return Potentials(lambda t, r: np.zeros(3), lambda t, r: 0.0)


def transform_potentials(p: Potentials, g: GaugeFunction) -> Potentials:
    """A' = A + grad f, Phi' = Phi - df/dt, pointwise."""
    return Potentials(
        lambda t, r: np.asarray(p.vector(t, r), dtype=float)
        + np.asarray(g.grad_f(t, r), dtype=float),
        lambda t, r: p.scalar(t, r) - g.dt_f(t, r))


def electric_field(p: Potentials, t: float, r, t_step: float = 1e-6,
                   x_step: float = 1e-6) -> np.ndarray:
    """E = -grad Phi - dA/dt by central differences."""
    r = np.asarray(r, dtype=float)
    e = np.empty(3)
    da = (np.asarray(p.vector(t + t_step, r), dtype=float)
          - np.asarray(p.vector(t - t_step, r), dtype=float)) / (2.0 * t_step)
    for j in range(3):
        shift = np.zeros(3)
        shift[j] = x_step
        dphi = (p.scalar(t, r + shift) - p.scalar(t, r - shift)) / (2.0 * x_step)
        e[j] = -dphi - da[j]
    return e


def magnetic_field(p: Potentials, t: float, r, x_step: float = 1e-6) -> np.ndarray:
    """B = curl A by central differences."""
    r = np.asarray(r, dtype=float)
    jac = np.empty((3, 3))
    for j in range(3):
        shift = np.zeros(3)
        shift[j] = x_step
        hi = np.asarray(p.vector(t, r + shift), dtype=float)
        lo = np.asarray(p.vector(t, r - shift), dtype=float)
        jac[:, j] = (hi - lo) / (2.0 * x_step)
    return np.array([jac[2, 1] - jac[1, 2],
                     jac[0, 2] - jac[2, 0],
                     jac[1, 0] - jac[0, 1]])


def field_mismatch(p1: Potentials, p2: Potentials, times, points,
                   t_step: float = 1e-6):
    """Max |E1-E2|, |B1-B2| over the sample grid, plus the field scale.

    Time steps shrink near t = 0 so a switch instant is never straddled;
    callers should still sample away from the switch itself, where a stepped
    field is distributional.
    """
    defect = 0.0
    scale = 0.0
    for t in times:
        ht = t_step if t == 0.0 else min(t_step, abs(t) / 2.0)
        for r in points:
            e1 = electric_field(p1, t, r, ht)
            e2 = electric_field(p2, t, r, ht)
            b1 = magnetic_field(p1, t, r)
            b2 = magnetic_field(p2, t, r)
            defect = max(defect, float(np.max(np.abs(e1 - e2))),
                         float(np.max(np.abs(b1 - b2))))
            scale = max(scale, float(np.max(np.abs(e1))),
                        float(np.max(np.abs(b1))))
    return defect, scale


@dataclass(frozen=True)
class LineState:
    """A wave function on [lo, hi], embedded along the x axis."""

    value: Callable
    dx: Callable
    lo: float
    hi: float


def line_state_from_series(series: CoefficientSeries) -> LineState:
    """Synthesize a box CoefficientSeries into a pointwise state."""
    if not isinstance(series.family, Box1D):
        raise ValueError("only box coefficient series synthesize to a line state")
    width = series.family.width
    return LineState(
        value=lambda x: expansion.reconstruct(series, SpacePoint.cartesian(x)),
        dx=lambda x: expansion.reconstruct_dx(series, SpacePoint.cartesian(x)),
        lo=0.0, hi=width)


def _box_line_state(width: float, amplitudes: np.ndarray) -> LineState:
    # fast synthesis used inside experiments; amplitudes already carry the
    # stationary phases
    amps = np.asarray(amplitudes, dtype=complex)
    freqs = np.arange(1, amps.size + 1) * math.pi / width
    scale = math.sqrt(2.0 / width)

    def value(x):
        return scale * complex(np.sin(freqs * x) @ amps)

    def dx(x):
        return scale * complex(np.cos(freqs * x) @ (freqs * amps))

    return LineState(value, dx, 0.0, width)


def _as_line_state(state) -> LineState:
    if isinstance(state, LineState):
        return state
    if isinstance(state, CoefficientSeries):
        return line_state_from_series(state)
    raise ValueError(f"cannot interpret {type(state).__name__} as a state")


def phase_transform(state, g: GaugeFunction, t: float) -> LineState:
    """Multiply the state by exp(i f(t, r)); the density is untouched.

    Coefficient series are synthesized pointwise first. The derivative picks
    up the chain-rule term i (df/dx) psi, kept analytic through g.grad_f.
    """
    line = _as_line_state(state)

    def value(x):
        return cmath_exp(g.f(t, _embed(x))) * line.value(x)

    def dx(x):
        ph = cmath_exp(g.f(t, _embed(x)))
        gx = np.asarray(g.grad_f(t, _embed(x)), dtype=float)[0]
        return ph * (1j * gx * line.value(x) + line.dx(x))

    return LineState(value, dx, line.lo, line.hi)


def _embed(x: float) -> np.ndarray:
    return np.array([x, 0.0, 0.0])


def cmath_exp(f_value: float) -> complex:
    return complex(math.cos(f_value), math.sin(f_value))


def momentum_expectation(state, units: Units = Units(),
                         quadrature: QuadratureSpec | None = None) -> np.ndarray:
    """<p> = <psi| -i hbar grad |psi> by quadrature; y and z vanish on a line."""
    line = _as_line_state(state)
    spec = quadrature or QuadratureSpec()

    def integrand_re(x):
        return (line.value(x).conjugate() * (-1j * units.hbar * line.dx(x))).real

    px, _ = integrate_interval(integrand_re, line.lo, line.hi, spec)
    return np.array([px, 0.0, 0.0])


def state_norm(state, quadrature: QuadratureSpec | None = None) -> float:
    line = _as_line_state(state)
    spec = quadrature or QuadratureSpec()
    val, _ = integrate_interval(lambda x: abs(line.value(x)) ** 2,
                                line.lo, line.hi, spec)
    return val


def velocity_expectation(state, A, t: float, units: Units = Units(),
                         quadrature: QuadratureSpec | None = None,
                         norm_tol: float = 1e-6) -> np.ndarray:
    """<v> = <psi| -i hbar grad |psi> - <psi| A |psi>, both by quadrature."""
    v, _ = velocity_and_momentum(state, A, t, units, quadrature, norm_tol)
    return v


def velocity_and_momentum(state, A, t: float, units: Units = Units(),
                          quadrature: QuadratureSpec | None = None,
                          norm_tol: float = 1e-6):
    if isinstance(A, Potentials):
        A = A.vector
    line = _as_line_state(state)
    spec = quadrature or QuadratureSpec()
    norm = state_norm(line, spec)
    if abs(norm - 1.0) > norm_tol:
        raise NormalizationError(
            f"state norm {norm!r} deviates from 1 beyond {norm_tol!r}", norm)
    p = momentum_expectation(line, units, spec)

    # v_x as a single integrand: when the state is co-transformed with the
    # potentials, the grad-f terms cancel pointwise, so the two gauges feed
    # the quadrature the same numbers instead of cancelling across two
    # separately-estimated integrals
    def vx_integrand(x):
        val = line.value(x)
        ax = float(np.asarray(A(t, _embed(x)), dtype=float)[0])
        return (val.conjugate() * (-1j * units.hbar * line.dx(x))).real \
            - ax * abs(val) ** 2

    vx, _ = integrate_interval(vx_integrand, line.lo, line.hi, spec)

    # p_y = p_z = 0 on a line state, so those components are plain -<A_j>
    a_perp = np.empty(2)
    for j in (1, 2):
        def integrand(x, _j=j):
            return abs(line.value(x)) ** 2 \
                * float(np.asarray(A(t, _embed(x)), dtype=float)[_j])

        a_perp[j - 1], _ = integrate_interval(integrand, line.lo, line.hi,
                                              spec)
    return np.array([vx, -a_perp[0], -a_perp[1]]), p


@dataclass
class ObservableReport:
    """Velocity and momentum series for one gauge over the sampled grid."""

    gauge_label: str
    times: np.ndarray
    v_series: np.ndarray
    p_series: np.ndarray
    pre_switch_v: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.v_series = np.asarray(self.v_series, dtype=float)
        self.p_series = np.asarray(self.p_series, dtype=float)
        n = self.times.size
        if self.v_series.shape != (n, 3) or self.p_series.shape != (n, 3):
            raise ValueError("observable series must align with the time grid")

    @property
    def jump_metric(self) -> float:
        """|<v>(t0 + dt) - <v>(0-)|, the step-1 velocity jump."""
        if self.times.size < 2:
            return 0.0
        return float(np.linalg.norm(self.v_series[1] - self.pre_switch_v))


def write_observable_csv(path, reports):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,gauge_label,vx,vy,vz,px,py,pz\n")
        for rep in reports:
            for i, t in enumerate(rep.times):
                row = [repr(float(t)), rep.gauge_label]
                row += [repr(float(v)) for v in rep.v_series[i]]
                row += [repr(float(v)) for v in rep.p_series[i]]
                fh.write(",".join(row) + "\n")


@dataclass
class GaugeJumpScenario:
    """A bound state disturbed by a uniform A(t) switched on at t = 0.

    Gauge 1 keeps the drive in the vector potential; gauge 2 is its image
    under f(t, r) = -A(t) x (or an identity / deliberately broken pair, for
    the control and error paths).
    """

    width: float = 1.0
    n_basis: int = 24
    initial_index: int = 1
    amplitude: float = 0.2
    switch: str = "step"          # step | ramp
    ramp_time: float = 0.5
    t_end: float = 2e-5
    n_slices: int = 200
    observe_stride: int = 4
    second_gauge: str = "transformed"   # transformed | identity | mismatched
    mismatch_factor: float = 1.5
    units: Units = field(default_factory=Units)

    def __post_init__(self):
        if self.initial_index < 1 or self.initial_index > self.n_basis:
            raise ValueError("initial index must select a basis state")
        if self.switch not in ("step", "ramp"):
            raise ValueError(f"unknown switch {self.switch!r}")
        if self.second_gauge not in ("transformed", "identity", "mismatched"):
            raise ValueError(f"unknown second gauge {self.second_gauge!r}")
        if self.n_slices < 1 or self.t_end <= 0.0:
            raise ValueError("need a positive window with at least one slice")

    def amplitude_of_t(self, t: float) -> float:
        if self.switch == "step":
            return self.amplitude * hard_step(t)
        return self.amplitude * smooth_ramp(t, self.ramp_time)

    def amplitude_dt(self, t: float) -> float:
        if self.switch == "step":
            return 0.0  # away from the switch instant
        return self.amplitude * smooth_ramp_dt(t, self.ramp_time)

    def drive_potentials(self) -> Potentials:
        return Potentials(
            lambda t, r: np.array([self.amplitude_of_t(t), 0.0, 0.0]),
            lambda t, r: 0.0)

    def gauge_function(self) -> GaugeFunction:
        if self.second_gauge == "identity":
            return zero_gauge_function()
        return GaugeFunction(
            f=lambda t, r: -self.amplitude_of_t(t) * r[0],
            grad_f=lambda t, r: np.array([-self.amplitude_of_t(t), 0.0, 0.0]),
            dt_f=lambda t, r: -self.amplitude_dt(t) * r[0])

    def second_potentials(self) -> Potentials:
        if self.second_gauge == "identity":
            return self.drive_potentials()
        if self.second_gauge == "mismatched":
            # claims to be a gauge partner of the drive but scales the
            # amplitude, so its electric field differs wherever A varies; the
            # experiment's field check must reject it
            return Potentials(
                lambda t, r: np.array(
                    [self.amplitude_of_t(t) * self.mismatch_factor, 0.0, 0.0]),
                lambda t, r: 0.0)
        g = self.gauge_function()
        return transform_potentials(self.drive_potentials(), g)

    def hamiltonian(self) -> HamiltonianModel:
        p = momentum_matrix_elements_box(self.width, self.n_basis, self.units)
        eye = np.eye(self.n_basis, dtype=complex)
        return HamiltonianModel(
            box_energies(self.width, self.n_basis, self.units),
            [(lambda t: -self.amplitude_of_t(t), p),
             (lambda t: 0.5 * self.amplitude_of_t(t) ** 2, eye)],
            (0.0, self.t_end))


@dataclass
class GaugeJumpResult:
    report_gauge1: ObservableReport
    report_gauge2: ObservableReport
    naive_discrepancy: np.ndarray
    covariant_discrepancy: np.ndarray
    field_defect: float
    field_scale: float
    gauge_consistency_defect: float
    pre_switch_velocity: np.ndarray

    def summary_text(self) -> str:
        return "\n".join([
            f"pre-switch <v>: {self.pre_switch_velocity.tolist()!r}",
            f"jump metric (gauge 1): {self.report_gauge1.jump_metric!r}",
            f"jump metric (gauge 2, co-transformed): "
            f"{self.report_gauge2.jump_metric!r}",
            f"max naive inter-gauge discrepancy: "
            f"{float(np.max(self.naive_discrepancy))!r}",
            f"max co-transformed discrepancy: "
            f"{float(np.max(self.covariant_discrepancy))!r}",
            f"field reconstruction defect: {self.field_defect!r} "
            f"(scale {self.field_scale!r})",
            f"gauge function consistency defect: "
            f"{self.gauge_consistency_defect!r}",
        ])


def gauge_jump_experiment(scenario: GaugeJumpScenario) -> GaugeJumpResult:
    """Propagate through the switch and compare <v> across the gauge pair.

    Reports the step-1 jump metric, the inter-gauge discrepancy without
    co-transforming the state, and the discrepancy when the full covariance
    set is applied. A second gauge that does not reproduce the same E and B
    fields is rejected up front.
    """
    units = scenario.units
    pot1 = scenario.drive_potentials()
    pot2 = scenario.second_potentials()
    g = scenario.gauge_function()

    sample_times = [-scenario.t_end * f for f in (1.0, 0.5, 0.25)] \
        + [scenario.t_end * f for f in (0.25, 0.5, 1.0)]
    sample_points = [np.array([x * scenario.width, 0.0, 0.0])
                     for x in (0.2, 0.5, 0.8)]
    g_defect = float(g.consistency_defect(sample_times, sample_points))
    if g_defect > 1e-6:
        raise GaugeConsistencyError(
            f"gauge function derivatives disagree with finite differences "
            f"(defect {g_defect!r})")
    t_step = min(1e-6, scenario.t_end / 16.0)
    defect, scale = field_mismatch(pot1, pot2, sample_times, sample_points,
                                   t_step)
    if defect > 1e-6 * max(1.0, scale):
        raise GaugeFieldMismatchError(
            f"gauge pair reconstructs different fields "
            f"(|dE|+|dB| defect {defect!r} at scale {scale!r})", defect)

    model = scenario.hamiltonian()
    c0 = np.zeros(scenario.n_basis, dtype=complex)
    c0[scenario.initial_index - 1] = 1.0
    traj = unitary_propagate(c0, model, scenario.n_slices, units)

    # pre-switch reference: stationary bound state, potentials still off
    psi_pre = _box_line_state(scenario.width, c0)
    v_pre, _ = velocity_and_momentum(psi_pre, lambda t, r: np.zeros(3), -1.0,
                                     units)

    idx = sorted(set([0, 1] + list(range(0, scenario.n_slices + 1,
                                         scenario.observe_stride))
                     + [scenario.n_slices]))
    energies = model.energies
    times, v1s, p1s, v2s, p2s, naive, covar = [], [], [], [], [], [], []
    for i in idx:
        t = float(traj.times[i])
        amps = traj.states[i] * np.exp(-1j * energies * t / units.hbar)
        psi1 = _box_line_state(scenario.width, amps)
        v1, p1 = velocity_and_momentum(psi1, pot1, t, units)
        v2n, _ = velocity_and_momentum(psi1, pot2, t, units)
        psi2 = phase_transform(psi1, g, t)
        v2, p2 = velocity_and_momentum(psi2, pot2, t, units)
        times.append(t)
        v1s.append(v1)
        p1s.append(p1)
        v2s.append(v2)
        p2s.append(p2)
        naive.append(float(np.linalg.norm(v2n - v1)))
        covar.append(float(np.linalg.norm(v2 - v1)))

    rep1 = ObservableReport("gauge1", np.array(times), np.array(v1s),
                            np.array(p1s), v_pre)
    rep2 = ObservableReport("gauge2", np.array(times), np.array(v2s),
                            np.array(p2s), v_pre)
    return GaugeJumpResult(rep1, rep2, np.array(naive), np.array(covar),
                           float(defect), float(scale), float(g_defect), v_pre)


@dataclass
class PhaseFitScenario:
    """Driven box run fitted by phase-factored truncated expansions."""

    width: float = 1.0
    n_reference: int = 64
    initial_index: int = 1
    amplitude: float = 12.0
    ramp_time: float = 0.3
    t_end: float = 1.2
    n_slices: int = 1200
    fit_sizes: tuple = (2, 4, 8, 12, 16, 24, 32, 48)
    n_grid: int = 1200
    fit_stride: int = 200
    units: Units = field(default_factory=Units)

    def __post_init__(self):
        self.fit_sizes = tuple(int(n) for n in self.fit_sizes)
        if sorted(self.fit_sizes) != list(self.fit_sizes):
            raise ValueError("fit sizes must be increasing")
        if self.initial_index < 1 or self.initial_index > min(self.fit_sizes):
            raise ValueError("initial index must sit inside every fit basis")


@dataclass
class PhaseFitReport:
    """Residual of the phase-factored fit versus basis size."""

    fit_sizes: tuple
    fit_times: np.ndarray
    residuals: np.ndarray       # (len(fit_times), len(fit_sizes))
    plateau_tol: float
    plateaued: bool

    def final_residuals(self) -> np.ndarray:
        return self.residuals[-1]

    def to_text(self) -> str:
        lines = ["basis_size residual(final time)"]
        for n, r in zip(self.fit_sizes, self.final_residuals()):
            lines.append(f"{n:10d} {r!r}")
        lines.append(f"plateaued above {self.plateau_tol!r}: {self.plateaued}")
        return "\n".join(lines)

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("basis_size," + ",".join(
                f"residual_t{repr(float(t))}" for t in self.fit_times) + "\n")
            for j, n in enumerate(self.fit_sizes):
                row = [str(n)] + [repr(float(self.residuals[i, j]))
                                  for i in range(len(self.fit_times))]
                fh.write(",".join(row) + "\n")


def phase_factored_expansion_test(scenario: PhaseFitScenario,
                                  g: GaugeFunction,
                                  plateau_tol: float = 1e-10) -> PhaseFitReport:
    """Fit exp(i f) sum C_n psi_n to a reference propagated wave function.

    The reference runs on n_reference basis states with the norm-preserving
    stepper; at each fit time the best coefficients for the fixed bases are
    the grid inner products <psi_n | exp(-i f) psi_ref>, and the reported
    residual is the L2 defect of that fit. The grid trapezoid rule is exact
    for the sine products involved, so the stationary control sits at
    rounding level.
    """
    if scenario.n_reference < max(scenario.fit_sizes):
        raise ReferenceUnavailableError(
            f"reference basis ({scenario.n_reference}) must dominate the "
            f"largest fit size ({max(scenario.fit_sizes)})")
    units = scenario.units
    width = scenario.width
    model = propagation.box_dipole_model(width, scenario.n_reference,
                                         scenario.amplitude,
                                         scenario.ramp_time,
                                         (0.0, scenario.t_end), units)
    c0 = np.zeros(scenario.n_reference, dtype=complex)
    c0[scenario.initial_index - 1] = 1.0
    traj = unitary_propagate(c0, model, scenario.n_slices, units)

    xs = np.linspace(0.0, width, scenario.n_grid + 1)
    w = np.full(xs.size, width / scenario.n_grid)
    w[0] *= 0.5
    w[-1] *= 0.5
    n_max = max(scenario.fit_sizes)
    sines_ref = np.array([[box_eigenfunction(n, x, width) for x in xs]
                          for n in range(1, scenario.n_reference + 1)])
    sines_fit = sines_ref[:n_max]

    fit_idx = sorted(set(list(range(0, scenario.n_slices + 1,
                                    scenario.fit_stride))
                         + [scenario.n_slices]))
    energies = model.energies
    fit_times = []
    rows = []
    for i in fit_idx:
        t = float(traj.times[i])
        amps = traj.states[i] * np.exp(-1j * energies * t / units.hbar)
        psi = amps @ sines_ref
        phase = np.array([cmath_exp(-g.f(t, np.array([x, 0.0, 0.0])))
                          for x in xs])
        target = phase * psi
        coefs = sines_fit @ (w * target)
        row = []
        for n in scenario.fit_sizes:
            resid_vec = target - coefs[:n] @ sines_fit[:n]
            row.append(math.sqrt(float(np.sum(w * np.abs(resid_vec) ** 2))))
        fit_times.append(t)
        rows.append(row)

    residuals = np.array(rows)
    final = residuals[-1]
    plateaued = bool(final[-1] > plateau_tol
                     and final[-1] > 0.5 * final[-2])
    return PhaseFitReport(scenario.fit_sizes, np.array(fit_times), residuals,
                          plateau_tol, plateaued)
