"""Coefficient propagation: first-order explicit slicing and a unitary contrast.

The coefficient system is i hbar dC_n/dt = sum_l C_l (H1)_{nl} exp(i w_{nl} t)
with Bohr frequencies w_{nl} = (eps_n - eps_l)/hbar; stationary time factors
follow exp(-i eps t / hbar). euler_propagate is a literal transcription of the
first-order update with left-endpoint phases, kept deliberately naive: its
norm growth is a reported outcome, not a defect to be patched. The Cayley
(Crank-Nicolson) stepper is the norm-preserving contrast oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class PropagationContractError(ValueError):
    """Inputs violate an operation's contract (dimensions, trajectory kind)."""


@dataclass(frozen=True)
class Units:
    """Natural units m = Q = c = 1; hbar configurable."""

    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0.0:
            raise PropagationContractError("hbar must be positive")


def smooth_ramp(t: float, tau: float) -> float:
    """sin^2(pi t / 2 tau) switch-on: 0 before t=0, 1 after t=tau."""
    if t <= 0.0:
        return 0.0
    if t >= tau:
        return 1.0
    s = math.sin(0.5 * math.pi * t / tau)
    return s * s


def smooth_ramp_dt(t: float, tau: float) -> float:
    if t <= 0.0 or t >= tau:
        return 0.0
    return 0.5 * math.pi / tau * math.sin(math.pi * t / tau)


def hard_step(t: float) -> float:
    """Unit step switched at t = 0 (inclusive)."""
    return 1.0 if t >= 0.0 else 0.0


@dataclass
class HamiltonianModel:
    """Eigenenergies plus a time-dependent perturbation H1(t) = sum_j h_j(t) X_j.

    Each term is a (profile, matrix) pair with a real scalar profile and a
    constant Hermitian matrix, which keeps Hermiticity checkable by
    construction. H1 vanishes outside the switching window.
    """

    energies: np.ndarray
    terms: list
    window: tuple

    def __post_init__(self):
        self.energies = np.asarray(self.energies, dtype=float)
        if self.energies.ndim != 1 or self.energies.size == 0:
            raise PropagationContractError("energies must be a non-empty vector")
        if not np.all(np.isfinite(self.energies)):
            raise PropagationContractError("energies must be finite")
        t0, t1 = self.window
        if not t1 > t0:
            raise PropagationContractError("window must satisfy t1 > t0")
        self.window = (float(t0), float(t1))
        dim = self.energies.size
        checked = []
        for profile, matrix in self.terms:
            m = np.asarray(matrix, dtype=complex)
            if m.shape != (dim, dim):
                raise PropagationContractError(
                    f"perturbation matrix shape {m.shape} does not match "
                    f"dimension {dim}")
            defect = float(np.max(np.abs(m - m.conj().T)))
            if defect > 1e-12 * max(1.0, float(np.max(np.abs(m)))):
                raise PropagationContractError(
                    f"perturbation term is not Hermitian (defect {defect!r})")
            checked.append((profile, m))
        self.terms = checked

    @property
    def dim(self) -> int:
        return self.energies.size

    def h1(self, t: float) -> np.ndarray:
        """The perturbation matrix at time t (zero outside the window)."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        t0, t1 = self.window
        if t < t0 or t > t1:
            return out
        for profile, matrix in self.terms:
            out += profile(t) * matrix
        return out

    def hermiticity_defect(self, t: float) -> float:
        h = self.h1(t)
        return float(np.max(np.abs(h - h.conj().T))) if self.dim else 0.0


def bohr_frequencies(model: HamiltonianModel, units: Units = Units()) -> np.ndarray:
    """w_{nl} = (eps_n - eps_l) / hbar; antisymmetric."""
    e = model.energies
    return (e[:, None] - e[None, :]) / units.hbar


@dataclass
class Trajectory:
    """Times, coefficient vectors, and their norms for one propagation run."""

    times: np.ndarray
    states: np.ndarray
    method: str
    norms: np.ndarray = field(default=None)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=complex)
        if self.states.ndim != 2 or self.states.shape[0] != self.times.size:
            raise PropagationContractError("states must be one row per time")
        if np.any(np.diff(self.times) <= 0.0):
            raise PropagationContractError("time grid must be strictly increasing")
        if self.norms is None:
            self.norms = self.compute_norms()
        else:
            self.norms = np.asarray(self.norms, dtype=float)
            if self.norms.shape != self.times.shape:
                raise PropagationContractError("norms must align with times")

    def compute_norms(self) -> np.ndarray:
        return np.einsum("ij,ij->i", self.states, self.states.conj()).real

    @property
    def dim(self) -> int:
        return self.states.shape[1]


def _prepare(c0, model: HamiltonianModel, n_slices: int, units: Units):
    c = np.asarray(c0, dtype=complex).copy()
    if c.shape != (model.dim,):
        raise PropagationContractError(
            f"initial coefficients have shape {c.shape}, expected ({model.dim},)")
    if n_slices < 1:
        raise PropagationContractError("slice count must be at least 1")
    t0, t1 = model.window
    dt = (t1 - t0) / n_slices
    times = t0 + dt * np.arange(n_slices + 1)
    omega = bohr_frequencies(model, units)
    return c, times, dt, omega


def rhs(c, t: float, model: HamiltonianModel, units: Units = Units()) -> np.ndarray:
    """dC_n/dt = -(i/hbar) sum_l C_l (H1)_{nl} exp(i w_{nl} t)."""
    c = np.asarray(c, dtype=complex)
    if c.shape != (model.dim,):
        raise PropagationContractError(
            f"coefficient vector has shape {c.shape}, expected ({model.dim},)")
    omega = bohr_frequencies(model, units)
    m = model.h1(t) * np.exp(1j * omega * t)
    return -1j / units.hbar * (m @ c)


def euler_propagate(c0, model: HamiltonianModel, n_slices: int,
                    units: Units = Units()) -> Trajectory:
    """First-order explicit slicing with left-endpoint rotating-frame phases.

    C_k(t_{i+1}) = C_k(t_i) - (i/hbar) sum_{k'} C_{k'}(t_i) (H1)_{kk'}
    exp(i w_{kk'} t_i) dt. Norm growth along the way is recorded, never
    corrected.
    """
    c, times, dt, omega = _prepare(c0, model, n_slices, units)
    states = np.empty((n_slices + 1, model.dim), dtype=complex)
    states[0] = c
    for i in range(n_slices):
        t = times[i]
        m = model.h1(t) * np.exp(1j * omega * t)
        c = c - 1j / units.hbar * (m @ c) * dt
        states[i + 1] = c
    return Trajectory(times, states, "euler")


def unitary_propagate(c0, model: HamiltonianModel, n_slices: int,
                      units: Units = Units()) -> Trajectory:
    """Cayley (Crank-Nicolson) stepping at the midpoint time.

    (I + i dt/2hbar Htilde) C_{i+1} = (I - i dt/2hbar Htilde) C_i with
    Htilde the rotating-frame matrix at t_i + dt/2. Exactly unitary for
    Hermitian Htilde, so the linear solve cannot encounter a singular matrix
    for real dt.
    """
    c, times, dt, omega = _prepare(c0, model, n_slices, units)
    eye = np.eye(model.dim, dtype=complex)
    states = np.empty((n_slices + 1, model.dim), dtype=complex)
    states[0] = c
    half = 0.5j * dt / units.hbar
    for i in range(n_slices):
        tm = times[i] + 0.5 * dt
        m = model.h1(tm) * np.exp(1j * omega * tm)
        c = np.linalg.solve(eye + half * m, c - half * (m @ c))
        states[i + 1] = c
    return Trajectory(times, states, "cayley")


@dataclass
class NormAuditReport:
    """Outcome of the norm-growth audit of a first-order sliced trajectory."""

    s_index: int
    pure_defect: float
    step1_total: float
    step1_off_diagonal: float
    monotone: bool
    max_decrease: float
    first_strict_step: int | None
    closed_form_defect: float | None
    passed: bool

    def to_text(self) -> str:
        def mark(ok):
            return "pass" if ok else "FAIL"

        lines = [
            f"initial state: pure at index {self.s_index} "
            f"(defect {self.pure_defect!r})",
            f"|C_s(t1)|^2 + off-diagonal = {self.step1_total!r} >= 1: "
            f"{mark(self.step1_total >= 1.0)}",
            f"off-diagonal weight at t1 = {self.step1_off_diagonal!r} >= 0: "
            f"{mark(self.step1_off_diagonal >= 0.0)}",
            f"norms non-decreasing: {mark(self.monotone)} "
            f"(largest decrease {self.max_decrease!r})",
        ]
        if self.first_strict_step is None:
            lines.append("strict growth: never (all couplings into the initial "
                         "state vanish on the grid)")
        else:
            lines.append(f"strict growth first appears at step "
                         f"{self.first_strict_step}")
        if self.closed_form_defect is not None:
            lines.append(f"one-step closed form defect: "
                         f"{self.closed_form_defect!r}: "
                         f"{mark(self.closed_form_defect < 1e-12)}")
        lines.append(f"audit: {mark(self.passed)}")
        return "\n".join(lines)


def norm_audit(trajectory: Trajectory, model: HamiltonianModel | None = None,
               units: Units = Units()) -> NormAuditReport:
    """Audit the norm chain of a first-order sliced run from a pure state.

    Checks |C_s(t1)|^2 >= 1 via the total, the non-negative off-diagonal
    weight, monotone growth of the norms, and reports the first step with a
    strict increase over 1. The chain is specific to the explicit first-order
    update; trajectories from other integrators are rejected. When the model
    is supplied, the one-step norm is also compared against the closed form
    1 + (dt/hbar)^2 sum_k |(H1)_{ks}|^2.
    """
    if trajectory.method != "euler":
        raise PropagationContractError(
            f"norm audit applies to first-order sliced trajectories, got "
            f"{trajectory.method!r}")
    c0 = trajectory.states[0]
    s = int(np.argmax(np.abs(c0)))
    pure_defect = float(abs(c0[s] - 1.0) + np.sum(np.abs(np.delete(c0, s))))
    if pure_defect > 1e-9:
        raise PropagationContractError(
            f"audit requires a pure initial state; defect {pure_defect!r}")

    norms = trajectory.norms
    step1 = norms[1] if norms.size > 1 else norms[0]
    off_diag = float(np.sum(np.abs(np.delete(trajectory.states[1], s)) ** 2)) \
        if norms.size > 1 else 0.0
    diffs = np.diff(norms)
    max_decrease = float(-diffs.min()) if diffs.size else 0.0
    monotone = bool(max_decrease <= 1e-15 * max(1.0, norms.max()))
    strict = np.nonzero(norms > 1.0)[0]
    first_strict = int(strict[0]) if strict.size else None

    closed_defect = None
    if model is not None:
        dt = float(trajectory.times[1] - trajectory.times[0])
        h0 = model.h1(float(trajectory.times[0]))
        column = h0[:, s]
        predicted = 1.0 + (dt / units.hbar) ** 2 * float(np.sum(np.abs(column) ** 2))
        closed_defect = float(abs(step1 - predicted))

    passed = (step1 >= 1.0 and off_diag >= 0.0 and monotone
              and (closed_defect is None or closed_defect < 1e-12))
    return NormAuditReport(s, pure_defect, float(step1), off_diag, monotone,
                           max_decrease, first_strict, closed_defect, passed)


def box_energies(width: float, n_basis: int, units: Units = Units()) -> np.ndarray:
    """eps_n = (n pi hbar / L)^2 / 2 for n = 1..n_basis."""
    if n_basis < 1:
        raise PropagationContractError("n_basis must be at least 1")
    n = np.arange(1, n_basis + 1, dtype=float)
    return (n * math.pi * units.hbar / width) ** 2 / 2.0


def dipole_matrix_elements_box(width: float, n_basis: int) -> np.ndarray:
    """x_{nm} for box eigenstates: L/2 on the diagonal, opposite parity couples.

    x_{nm} = -8 L n m / (pi^2 (n^2 - m^2)^2) for n+m odd, 0 for same parity.
    """
    if n_basis < 2:
        raise PropagationContractError("dipole matrix needs n_basis >= 2")
    n = np.arange(1, n_basis + 1, dtype=float)
    x = np.zeros((n_basis, n_basis))
    np.fill_diagonal(x, width / 2.0)
    for i in range(n_basis):
        for j in range(i + 1, n_basis):
            ni, nj = n[i], n[j]
            if int(ni + nj) % 2 == 1:
                x[i, j] = x[j, i] = -8.0 * width * ni * nj \
                    / (math.pi ** 2 * (ni * ni - nj * nj) ** 2)
    return x


def momentum_matrix_elements_box(width: float, n_basis: int,
                                 units: Units = Units()) -> np.ndarray:
    """p_{nm} = <n| -i hbar d/dx |m>: -4 i hbar n m / (L (n^2 - m^2)), n+m odd."""
    if n_basis < 2:
        raise PropagationContractError("momentum matrix needs n_basis >= 2")
    p = np.zeros((n_basis, n_basis), dtype=complex)
    for i in range(n_basis):
        for j in range(n_basis):
            ni, nj = i + 1, j + 1
            if (ni + nj) % 2 == 1:
                p[i, j] = -4j * units.hbar * ni * nj \
                    / (width * (ni * ni - nj * nj))
    return p


def box_dipole_model(width: float, n_basis: int, amplitude: float,
                     ramp_time: float, window, units: Units = Units(),
                     profile: str = "ramp") -> HamiltonianModel:
    """H1(t) = amplitude * switch(t) * x on the box basis."""
    x = dipole_matrix_elements_box(width, n_basis)
    if profile == "ramp":
        switch = lambda t: amplitude * smooth_ramp(t, ramp_time)
    elif profile == "step":
        switch = lambda t: amplitude * hard_step(t)
    elif profile == "constant":
        switch = lambda t: amplitude
    else:
        raise PropagationContractError(f"unknown switch profile {profile!r}")
    return HamiltonianModel(box_energies(width, n_basis, units), [(switch, x)],
                            window)


def write_trajectory_csv(trajectory: Trajectory, path, tracked: int = 8):
    """step, t, norm_sq, re/im of the first `tracked` coefficients."""
    k = min(tracked, trajectory.dim)
    header = ["step", "t", "norm_sq"]
    for j in range(1, k + 1):
        header += [f"re_c{j}", f"im_c{j}"]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for i, t in enumerate(trajectory.times):
            row = [str(i), repr(float(t)), repr(float(trajectory.norms[i]))]
            for j in range(k):
                c = trajectory.states[i, j]
                row += [repr(float(c.real)), repr(float(c.imag))]
            fh.write(",".join(row) + "\n")
