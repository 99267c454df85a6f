"""Eigenfunction families: Landau levels, free plane waves, and a 1-D box.

Natural units m = Q = c = 1 throughout; hbar lives in propagation.Units.
Landau states are handled on a fixed-k_z transverse slice, with the z factor
treated as a delta-normalized spectator. Stationary time factors, where they
appear elsewhere in the package, follow the convention exp(-i eps t / hbar).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import specfun
from .specfun import QuadratureSpec, integrate_interval, integrate_semi_infinite

_LOG_FLOAT_MAX = math.log(1.7976931348623157e308)


class BasisDomainError(ValueError):
    """Family or evaluation arguments outside the supported domain."""


class BasisIndexError(ValueError):
    """Quantum numbers invalid for, or mismatched with, a family."""


class NonNormalizableBasisError(ValueError):
    """The family has no finite normalization integral."""


@dataclass(frozen=True)
class SpacePoint:
    """A point in 3-space, stored Cartesian, convertible to cylindrical."""

    x: float
    y: float
    z: float

    @classmethod
    def cartesian(cls, x: float, y: float = 0.0, z: float = 0.0) -> "SpacePoint":
        return cls(float(x), float(y), float(z))

    @classmethod
    def cylindrical(cls, rho: float, phi: float, z: float = 0.0) -> "SpacePoint":
        if rho < 0.0:
            raise BasisDomainError("rho must be non-negative")
        return cls(rho * math.cos(phi), rho * math.sin(phi), float(z))

    @property
    def rho(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def phi(self) -> float:
        return math.atan2(self.y, self.x) % (2.0 * math.pi)


@dataclass(frozen=True)
class LandauUniformField:
    """Landau family for a uniform magnetic field; a is the magnetic length."""

    magnetic_length: float

    def __post_init__(self):
        if not self.magnetic_length > 0.0:
            raise BasisDomainError("magnetic length must be positive")


@dataclass(frozen=True)
class PlaneWave:
    """Free-particle continuum family; the wave vector lives on the index."""


@dataclass(frozen=True)
class Box1D:
    """Infinite well on [0, L], the concrete mechanical well used in scenarios."""

    width: float

    def __post_init__(self):
        if not self.width > 0.0:
            raise BasisDomainError("well width must be positive")


@dataclass(frozen=True)
class LandauIndex:
    n: int
    l: int = 0
    k_z: float = 0.0

    def __post_init__(self):
        if self.n < 0:
            raise BasisIndexError("Landau n must be non-negative")


@dataclass(frozen=True)
class PlaneWaveIndex:
    k: tuple

    def __post_init__(self):
        k = tuple(float(c) for c in self.k)
        if len(k) != 3:
            raise BasisIndexError("plane-wave index needs a 3-component k")
        object.__setattr__(self, "k", k)


@dataclass(frozen=True)
class BoxIndex:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise BasisIndexError("box quantum number must be a positive integer")


def landau_normalization(n: int, l: int) -> float:
    """T(n, l) = (1/|l|!) [ (|l|+n)! / (2^|l| n!) ]^(1/2).

    Exact factorials up to n+|l| = 20, log-gamma beyond to dodge overflow.
    """
    if n < 0:
        raise BasisIndexError("Landau n must be non-negative")
    al = abs(l)
    if n + al <= 20:
        return math.sqrt(math.factorial(al + n) / (2 ** al * math.factorial(n))) \
            / math.factorial(al)
    log_t = (-math.lgamma(al + 1)
             + 0.5 * (math.lgamma(al + n + 1) - al * math.log(2.0)
                      - math.lgamma(n + 1)))
    if log_t > _LOG_FLOAT_MAX:
        raise BasisDomainError(
            f"normalization factor overflows for n={n}, l={l}")
    return math.exp(log_t)


def landau_radial(n: int, l: int, rho: float, a: float) -> float:
    """Radial factor R_{n,l}(rho) = T(n,l) rho^|l| / a^(1+|l|) e^(-rho^2/4a^2) F(-n, |l|+1, rho^2/2a^2).

    The single length scale a sets both the Gaussian and the polynomial
    argument. The confluent factor is evaluated through the generalized
    Laguerre recurrence, F(-n, l+1, u) = L_n^(l)(u) / C(n+l, n), which the
    tests certify against the exact series.
    """
    if rho < 0.0:
        raise BasisDomainError("rho must be non-negative")
    if not a > 0.0:
        raise BasisDomainError("magnetic length must be positive")
    al = abs(l)
    u = rho * rho / (2.0 * a * a)
    confluent = specfun.laguerre_associated(n, float(al), u)
    if al:
        confluent /= math.comb(n + al, n)
    return (landau_normalization(n, l) * (rho / a) ** al / a
            * math.exp(-0.5 * u) * confluent)


def landau_eigenfunction(index: LandauIndex, point: SpacePoint, a: float) -> complex:
    """Psi_{n,l,k_z} = (2 pi)^(-1/2) R_{n,l}(rho) e^(i l phi) e^(i k_z z)."""
    if not isinstance(index, LandauIndex):
        raise BasisIndexError(f"expected a LandauIndex, got {type(index).__name__}")
    radial = landau_radial(index.n, index.l, point.rho, a)
    phase = index.l * point.phi + index.k_z * point.z
    return radial / math.sqrt(2.0 * math.pi) * cmath.exp(1j * phase)


def plane_wave(k, point: SpacePoint) -> complex:
    """(8 pi^3)^(-1/2) exp(i k . r), delta-normalized over k."""
    if isinstance(k, PlaneWaveIndex):
        k = k.k
    kx, ky, kz = k
    phase = kx * point.x + ky * point.y + kz * point.z
    return cmath.exp(1j * phase) / math.sqrt(8.0 * math.pi ** 3)


def box_eigenfunction(n: int, x: float, width: float) -> float:
    """(2/L)^(1/2) sin(n pi x / L) inside the well, zero outside."""
    if n < 1:
        raise BasisIndexError("box quantum number must be a positive integer")
    if not width > 0.0:
        raise BasisDomainError("well width must be positive")
    if x < 0.0 or x > width:
        return 0.0
    return math.sqrt(2.0 / width) * math.sin(n * math.pi * x / width)


def box_eigenfunction_dx(n: int, x: float, width: float) -> float:
    # spatial derivative, needed for momentum quadratures
    if n < 1:
        raise BasisIndexError("box quantum number must be a positive integer")
    if x < 0.0 or x > width:
        return 0.0
    return math.sqrt(2.0 / width) * (n * math.pi / width) \
        * math.cos(n * math.pi * x / width)


def evaluate(family, index, point: SpacePoint) -> complex:
    """Evaluate the family's eigenfunction for the given index at a point."""
    if isinstance(family, LandauUniformField):
        if not isinstance(index, LandauIndex):
            raise BasisIndexError(
                f"Landau family cannot evaluate a {type(index).__name__}")
        return landau_eigenfunction(index, point, family.magnetic_length)
    if isinstance(family, PlaneWave):
        if not isinstance(index, PlaneWaveIndex):
            raise BasisIndexError(
                f"plane-wave family cannot evaluate a {type(index).__name__}")
        return plane_wave(index.k, point)
    if isinstance(family, Box1D):
        if not isinstance(index, BoxIndex):
            raise BasisIndexError(
                f"box family cannot evaluate a {type(index).__name__}")
        return complex(box_eigenfunction(index.n, point.x, family.width))
    raise BasisIndexError(f"unknown basis family {type(family).__name__}")


def principal_number(index) -> int:
    """The principal quantum number used for ordering coefficient series."""
    if isinstance(index, (LandauIndex, BoxIndex)):
        return index.n
    raise BasisIndexError(
        f"{type(index).__name__} has no discrete principal quantum number")


def default_quadrature(family) -> QuadratureSpec:
    """Family-appropriate quadrature defaults (radial cutoff 40 a for Landau)."""
    if isinstance(family, LandauUniformField):
        return QuadratureSpec(upper_cutoff=40.0 * family.magnetic_length)
    return QuadratureSpec()


def normalization_defect(family, index, quadrature: QuadratureSpec | None = None) -> float:
    """|integral of |psi|^2 - 1| on the family's natural domain.

    Landau indices are integrated over the transverse plane at fixed k_z (the
    angular factor integrates exactly, leaving the radial quadrature); box
    states over [0, L]. Plane waves are delta-normalized and have no finite
    normalization integral.
    """
    if isinstance(family, PlaneWave):
        raise NonNormalizableBasisError(
            "plane waves are delta-normalized; the squared modulus integrates "
            "to delta(k - k'), not to a finite number")
    if isinstance(family, LandauUniformField):
        if not isinstance(index, LandauIndex):
            raise BasisIndexError(
                f"Landau family cannot normalize a {type(index).__name__}")
        a = family.magnetic_length
        spec = quadrature or default_quadrature(family)

        def integrand(rho):
            r = landau_radial(index.n, index.l, rho, a)
            return r * r * rho

        value, _ = integrate_semi_infinite(integrand, spec)
        return abs(value - 1.0)
    if isinstance(family, Box1D):
        if not isinstance(index, BoxIndex):
            raise BasisIndexError(
                f"box family cannot normalize a {type(index).__name__}")
        spec = quadrature or QuadratureSpec()

        def integrand(x):
            f = box_eigenfunction(index.n, x, family.width)
            return f * f

        value, _ = integrate_interval(integrand, 0.0, family.width, spec)
        return abs(value - 1.0)
    raise BasisIndexError(f"unknown basis family {type(family).__name__}")
