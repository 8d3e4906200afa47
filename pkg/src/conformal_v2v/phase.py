"""Reflection phase-profile synthesis for cylindrical surfaces.

A phase profile makes the curved surface steer an incident plane wave into a
chosen reflected direction.  The general profile is linear in the element
position with slope kbar - k (difference of reflected and incident
wavevectors); the specialized closed forms below are algebraically equal to
that rule restricted to the elevation plane, the azimuth plane, or the
specular case, and are implemented independently so the equalities act as
cross-checks in the test suite.

Angles are expressed in the door frame of the surface they configure: theta
is azimuth from the outward reference normal (+x), phi is elevation from +z.
Both angle pairs point AWAY from the surface (toward source and destination).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import AnglePair, CirsGeometry

TWO_PI = 2.0 * math.pi

# Overall sign of every synthesized profile. The value +1 is the one for
# which the cascaded far-field sum is fully coherent under the e^{+j*phase}
# reflection convention and e^{-j*2*pi*r/lambda} propagation phasors used in
# the channel module; the coherence test asserts +1 passes and -1 fails.
PHASE_SIGN = 1.0


def wrap_phase(phase: np.ndarray | float) -> np.ndarray | float:
    """Wrap radians into [0, 2*pi)."""
    wrapped = np.mod(phase, TWO_PI)
    # np.mod of a tiny negative rounds up to exactly 2*pi; keep the
    # interval half-open
    wrapped = np.where(wrapped == TWO_PI, 0.0, wrapped)
    if wrapped.ndim == 0:
        return float(wrapped)
    return wrapped


@dataclass(frozen=True)
class Wavevector:
    """Plane-wave vector, components in radians per meter."""

    kx: float
    ky: float
    kz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.kx, self.ky, self.kz])

    @property
    def magnitude(self) -> float:
        return float(np.linalg.norm(self.as_array()))


def incident_wavevector(angles: AnglePair, wavelength: float) -> Wavevector:
    """Wavevector of a plane wave arriving FROM direction ``angles``.

    The wave travels toward the surface, hence the minus sign:
    k = -(2*pi/lambda) * [sin(phi)cos(theta), sin(phi)sin(theta), cos(phi)].
    """
    if wavelength <= 0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    v = -(TWO_PI / wavelength) * angles.direction()
    return Wavevector(*v)


def reflected_wavevector(angles: AnglePair, wavelength: float) -> Wavevector:
    """Wavevector of a plane wave departing TOWARD direction ``angles``."""
    if wavelength <= 0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    v = (TWO_PI / wavelength) * angles.direction()
    return Wavevector(*v)


@dataclass(frozen=True)
class PhaseProfile:
    """Per-element reflection amplitude and phase for an M x N surface.

    ``phases_raw`` keeps the synthesized values before wrapping so algebraic
    identities between profiles can be checked exactly; the wrapped values
    drive the channel (wrapping never changes the complex coefficient).
    """

    phases_raw: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.phases_raw, dtype=float)
        amp = np.asarray(self.amplitudes, dtype=float)
        if raw.ndim != 2 or raw.shape != amp.shape:
            raise ValueError(
                f"phases {raw.shape} and amplitudes {amp.shape} must be equal 2D shapes"
            )
        if not np.all(np.isfinite(raw)):
            raise ValueError("phases must be finite")
        if np.any(amp < 0) or np.any(amp > 1):
            raise ValueError("amplitudes must lie in [0, 1]")
        object.__setattr__(self, "phases_raw", raw)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def from_raw(cls, phases_raw: np.ndarray) -> "PhaseProfile":
        phases_raw = np.asarray(phases_raw, dtype=float)
        return cls(phases_raw=phases_raw, amplitudes=np.ones_like(phases_raw))

    @property
    def shape(self) -> tuple[int, int]:
        return self.phases_raw.shape

    @property
    def phases(self) -> np.ndarray:
        """Wrapped phases in [0, 2*pi)."""
        return wrap_phase(self.phases_raw)

    def coefficients(self) -> np.ndarray:
        """Flat complex reflection coefficients beta_l * exp(j*Phi_l), (M*N,)."""
        return (self.amplitudes * np.exp(1j * self.phases_raw)).ravel()


def _check_geometry_wavelength(geometry: CirsGeometry, wavelength: float) -> None:
    if wavelength <= 0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    if geometry.element_count < 1:
        raise ValueError("geometry has no elements")


def optimal_phase(
    geometry: CirsGeometry,
    incidence: AnglePair,
    reflection: AnglePair,
    wavelength: float,
) -> PhaseProfile:
    """Anomalous-reflection profile for arbitrary incidence/reflection angles.

    Phi_{m,n} = -s*(2*pi/lambda) * p_{m,n} . (d_o + d_i) with p in the door
    frame and d_i, d_o the unit directions toward source and destination.
    """
    _check_geometry_wavelength(geometry, wavelength)
    slope = incidence.direction() + reflection.direction()
    raw = -PHASE_SIGN * (TWO_PI / wavelength) * (geometry.positions_local @ slope)
    return PhaseProfile.from_raw(raw)


def planar_phase(
    m_count: int,
    n_count: int,
    d_m: float,
    d_n: float,
    incidence: AnglePair,
    reflection: AnglePair,
    wavelength: float,
) -> PhaseProfile:
    """Flat-surface limit of optimal_phase: elements on a planar y-z grid."""
    if wavelength <= 0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    if m_count < 1 or n_count < 1:
        raise ValueError("element counts must be >= 1")
    di, do = incidence.direction(), reflection.direction()
    m = np.arange(m_count) - m_count // 2
    n = np.arange(n_count)
    z = d_m * m
    y = d_n * n
    raw = -PHASE_SIGN * (TWO_PI / wavelength) * (
        y[None, :] * (di[1] + do[1]) + z[:, None] * (di[2] + do[2])
    )
    return PhaseProfile.from_raw(np.broadcast_to(raw, (m_count, n_count)).copy())


def elevation_phase(
    geometry: CirsGeometry, phi_i: float, phi_o: float, wavelength: float
) -> PhaseProfile:
    """Profile for incidence and reflection in the elevation (x-z) plane.

    Product form of the general rule at theta_i = theta_o = 0:
    Phi_m = -s*(8*pi*R/lambda) sin(psi/2) cos((phi_o-phi_i)/2) cos((phi_o+phi_i+psi)/2)
    """
    _check_geometry_wavelength(geometry, wavelength)
    psi = geometry.psi
    raw_m = (
        -PHASE_SIGN
        * (8.0 * math.pi * geometry.radius / wavelength)
        * np.sin(psi / 2.0)
        * math.cos((phi_o - phi_i) / 2.0)
        * np.cos((phi_o + phi_i + psi) / 2.0)
    )
    raw = np.repeat(raw_m[:, None], geometry.n_count, axis=1)
    return PhaseProfile.from_raw(raw)


def perpendicular_phase(geometry: CirsGeometry, wavelength: float) -> PhaseProfile:
    """Profile that flattens the surface for broadside elevation incidence.

    Phi_m = -s*(4*pi*R/lambda)(cos psi_m - 1); depends only on the shape.
    """
    _check_geometry_wavelength(geometry, wavelength)
    raw_m = (
        -PHASE_SIGN
        * (4.0 * math.pi * geometry.radius / wavelength)
        * (np.cos(geometry.psi) - 1.0)
    )
    raw = np.repeat(raw_m[:, None], geometry.n_count, axis=1)
    return PhaseProfile.from_raw(raw)


def preconfigured_phase(
    geometry: CirsGeometry, thetabar: float, wavelength: float
) -> PhaseProfile:
    """Fixed manufacturing profile: specular for azimuth pairs around thetabar.

    Phi_m = -s*(4*pi*R/lambda)(cos psi_m - 1) cos(thetabar).
    """
    if not 0.0 <= thetabar <= math.pi / 2.0:
        raise ValueError(f"thetabar must lie in [0, pi/2], got {thetabar}")
    _check_geometry_wavelength(geometry, wavelength)
    raw_m = (
        -PHASE_SIGN
        * (4.0 * math.pi * geometry.radius / wavelength)
        * (np.cos(geometry.psi) - 1.0)
        * math.cos(thetabar)
    )
    raw = np.repeat(raw_m[:, None], geometry.n_count, axis=1)
    return PhaseProfile.from_raw(raw)


def azimuth_phase(
    geometry: CirsGeometry, theta_i: float, theta_o: float, wavelength: float
) -> PhaseProfile:
    """Profile for incidence and reflection in the azimuth (x-y) plane.

    Product form of the general rule at phi_i = phi_o = pi/2:
    Phi_{m,n} = -s*(4*pi/lambda) cos((to-ti)/2) [R(cos psi - 1) cos((to+ti)/2)
                + y sin((to+ti)/2)]
    """
    _check_geometry_wavelength(geometry, wavelength)
    half_diff = (theta_o - theta_i) / 2.0
    half_sum = (theta_o + theta_i) / 2.0
    x = geometry.radius * (np.cos(geometry.psi) - 1.0)
    y = geometry.d_n * np.arange(geometry.n_count)
    raw = (
        -PHASE_SIGN
        * (4.0 * math.pi / wavelength)
        * math.cos(half_diff)
        * (x[:, None] * math.cos(half_sum) + y[None, :] * math.sin(half_sum))
    )
    return PhaseProfile.from_raw(raw)


# --- reflected-wave classification for the bare / preconfigured surface ----


def reflected_elevation(phi_i, psi_m):
    """Elevation of the wave leaving a specularly coated row at arc angle psi.

    phi_o = arccos[-2 sin(psi/2) - cos(phi_i + psi/2)] - psi/2.  Arguments
    within 1e-12 outside [-1, 1] are clamped; beyond that the reflected wave
    is evanescent and NaN is returned.  Accepts scalars or arrays.
    """
    phi_i = np.asarray(phi_i, dtype=float)
    psi_m = np.asarray(psi_m, dtype=float)
    if np.any(phi_i < 0) or np.any(phi_i > np.pi):
        raise ValueError("phi_i must lie in [0, pi]")
    arg = -2.0 * np.sin(psi_m / 2.0) - np.cos(phi_i + psi_m / 2.0)
    clamped = np.clip(arg, -1.0, 1.0)
    out = np.where(
        np.abs(arg) <= 1.0 + 1e-12, np.arccos(clamped) - psi_m / 2.0, np.nan
    )
    if out.ndim == 0:
        return float(out)
    return out


def is_evanescent(phi_i, psi_m):
    """True where the specular row reflection cannot propagate."""
    phi_i = np.asarray(phi_i, dtype=float)
    psi_m = np.asarray(psi_m, dtype=float)
    arg = -2.0 * np.sin(psi_m / 2.0) - np.cos(phi_i + psi_m / 2.0)
    out = np.abs(arg) > 1.0 + 1e-12
    if out.ndim == 0:
        return bool(out)
    return out


def snell_residual(
    f_x: float,
    f_z: float,
    grad_phi: np.ndarray,
    k: Wavevector | np.ndarray,
    kbar: Wavevector | np.ndarray,
) -> float:
    """Tangential defect of the generalized reflection law at one point.

    The surface is y = f(x, z) with slopes (f_x, f_z); its unit normal is
    u = [-f_x, 1, -f_z]/sqrt(1 + f_x^2 + f_z^2).  Returns the norm of the
    tangential part of (kbar - k - grad_phi); zero means grad_phi realizes
    the requested reflection.
    """
    k = k.as_array() if isinstance(k, Wavevector) else np.asarray(k, dtype=float)
    kbar = (
        kbar.as_array() if isinstance(kbar, Wavevector) else np.asarray(kbar, dtype=float)
    )
    grad_phi = np.asarray(grad_phi, dtype=float)
    for name, v in (("grad_phi", grad_phi), ("k", k), ("kbar", kbar)):
        if v.shape != (3,) or not np.all(np.isfinite(v)):
            raise ValueError(f"{name} must be a finite 3-vector")
    u = np.array([-f_x, 1.0, -f_z]) / math.sqrt(1.0 + f_x * f_x + f_z * f_z)
    r = kbar - k - grad_phi
    r_tan = r - np.dot(r, u) * u
    return float(np.linalg.norm(r_tan))
