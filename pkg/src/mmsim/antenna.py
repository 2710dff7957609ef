"""Uniform planar array: geometry, element pattern, steering vectors, DFT codebooks.

Conventions used throughout: theta is the zenith angle in degrees (0 = straight
up, 90 = horizon/boresight), phi is the azimuth in degrees measured from
boresight, wrapped to [-180, 180). Element (p, q) sits in vertical row p and
horizontal column q; flattened indexing is row-major (index = p * n_horizontal + q),
and phases increase with element index.
"""

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s


def wrap_azimuth_deg(phi):
    """Wrap azimuth (scalar or array, degrees) into [-180, 180)."""
    return (np.asarray(phi) + 180.0) % 360.0 - 180.0


@dataclass(frozen=True)
class ArrayGeometry:
    """Planar array of n_vertical x n_horizontal elements; spacings in wavelengths."""

    n_vertical: int
    n_horizontal: int
    spacing_vertical: float    # d_v / lambda
    spacing_horizontal: float  # d_h / lambda
    carrier_frequency: float   # Hz

    def __post_init__(self):
        if self.n_vertical < 1 or self.n_horizontal < 1:
            raise ValueError("array dimensions must be positive")
        if self.spacing_vertical <= 0 or self.spacing_horizontal <= 0:
            raise ValueError("element spacings must be positive")
        if self.carrier_frequency <= 0:
            raise ValueError("carrier_frequency must be positive")

    @property
    def n_elements(self) -> int:
        return self.n_vertical * self.n_horizontal

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency


@dataclass(frozen=True)
class ElementPatternParams:
    """Per-element directivity parameters (dB quantities, angles in degrees)."""

    theta_3db: float = 65.0
    phi_3db: float = 65.0
    sla_v: float = 30.0      # vertical side-lobe attenuation limit, dB
    a_max: float = 30.0      # front-to-back attenuation limit, dB
    g_max_dbi: float = 8.0   # peak element gain, dBi


@dataclass(frozen=True)
class Direction:
    """Propagation direction; theta in [0, 180], phi wrapped to [-180, 180)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= 180.0):
            raise ValueError(f"theta={self.theta} outside [0, 180]")
        object.__setattr__(self, "phi", float(wrap_azimuth_deg(self.phi)))


def steering_phases(geometry: ArrayGeometry, theta_deg, phi_deg) -> np.ndarray:
    """Per-element phase (radians) for one or more directions.

    Element (p, q) contributes 2*pi*(p*d_v*cos(theta) + q*d_h*sin(theta)*sin(phi))
    with spacings already expressed in wavelengths. Returns shape
    (n_elements,) for scalars or (n_elements, n_dirs) for arrays.
    """
    theta = np.deg2rad(np.atleast_1d(np.asarray(theta_deg, dtype=float)))
    phi = np.deg2rad(np.atleast_1d(np.asarray(phi_deg, dtype=float)))
    p = np.arange(geometry.n_vertical)
    q = np.arange(geometry.n_horizontal)
    vert = np.outer(p * geometry.spacing_vertical, np.cos(theta))
    horz = np.outer(q * geometry.spacing_horizontal, np.sin(theta) * np.sin(phi))
    # row-major flatten: p outer, q inner
    phases = 2.0 * np.pi * (vert[:, None, :] + horz[None, :, :])
    phases = phases.reshape(geometry.n_elements, -1)
    if np.isscalar(theta_deg) or np.ndim(theta_deg) == 0:
        return phases[:, 0]
    return phases


def steering_vector(geometry: ArrayGeometry, direction: Direction) -> np.ndarray:
    """Array response for one direction; complex vector with norm sqrt(n_elements)."""
    return np.exp(1j * steering_phases(geometry, direction.theta, direction.phi))


def steering_columns(geometry: ArrayGeometry, theta_deg: np.ndarray, phi_deg: np.ndarray) -> np.ndarray:
    """Stacked steering vectors, one column per direction (n_elements x n_dirs)."""
    return np.exp(1j * steering_phases(geometry, theta_deg, phi_deg))


def element_gain_db(params: ElementPatternParams, theta_deg, phi_deg):
    """Directional element gain in dB (scalar or elementwise on arrays)."""
    theta = np.asarray(theta_deg, dtype=float)
    phi = np.asarray(phi_deg, dtype=float)
    att_v = np.minimum(12.0 * ((theta - 90.0) / params.theta_3db) ** 2, params.sla_v)
    att_h = np.minimum(12.0 * (phi / params.phi_3db) ** 2, params.a_max)
    gain = params.g_max_dbi - np.minimum(att_v + att_h, params.a_max)
    return gain if gain.ndim else float(gain)


def element_gain(params: ElementPatternParams, direction: Direction) -> float:
    """Linear power gain of one element toward `direction`."""
    return float(10.0 ** (element_gain_db(params, direction.theta, direction.phi) / 10.0))


def field_factor(params: ElementPatternParams, direction: Direction) -> float:
    """Amplitude factor applied to ray gains: sqrt of the linear element gain."""
    return float(np.sqrt(element_gain(params, direction)))


def field_factors(params: ElementPatternParams, theta_deg, phi_deg) -> np.ndarray:
    """Vectorized field factors for arrays of directions."""
    return np.sqrt(10.0 ** (element_gain_db(params, theta_deg, phi_deg) / 10.0))


@dataclass(frozen=True)
class Codebook:
    """Grid-of-beams codebook; `beams[z]` is the unit-norm weight vector of beam z."""

    beams: np.ndarray          # (n_beams, n_elements), complex
    oversampling_v: int
    oversampling_h: int
    phase_bits: int

    @property
    def n_beams(self) -> int:
        return self.beams.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        """Beams stacked as columns (n_elements x n_beams), handy for projections."""
        return self.beams.T


def quantize_phases(weights: np.ndarray, phase_bits: int) -> np.ndarray:
    """Snap each entry's phase to the closest of 2**phase_bits uniform levels.

    Magnitudes are preserved; phase_bits <= 0 returns the input unchanged.
    """
    if phase_bits <= 0:
        return weights
    step = 2.0 * np.pi / (2 ** phase_bits)
    mag = np.abs(weights)
    snapped = np.round(np.angle(weights) / step) * step
    return mag * np.exp(1j * snapped)


def build_codebook(
    geometry: ArrayGeometry,
    oversampling_v: int = 1,
    oversampling_h: int = 1,
    phase_bits: int = 0,
) -> Codebook:
    """DFT grid-of-beams codebook for a planar array.

    Beam (a, b) is the Kronecker product of the a-th vertical and b-th horizontal
    DFT vectors: entry (p, q) proportional to
    exp(-j*2*pi*(p*a/(n_v*O_v) + q*b/(n_h*O_h))). Beams are ordered with the
    vertical index outer (index = a * n_h*O_h + b), optionally phase-quantized,
    and renormalized to unit norm.
    """
    if oversampling_v < 1 or oversampling_h < 1:
        raise ValueError("oversampling factors must be >= 1")
    gv = geometry.n_vertical * oversampling_v
    gh = geometry.n_horizontal * oversampling_h
    p = np.arange(geometry.n_vertical)
    q = np.arange(geometry.n_horizontal)
    vert = np.exp(-2j * np.pi * np.outer(np.arange(gv), p) / gv) / np.sqrt(geometry.n_vertical)
    horz = np.exp(-2j * np.pi * np.outer(np.arange(gh), q) / gh) / np.sqrt(geometry.n_horizontal)
    beams = np.einsum("ap,bq->abpq", vert, horz).reshape(gv * gh, geometry.n_elements)
    beams = quantize_phases(beams, phase_bits)
    beams = beams / np.linalg.norm(beams, axis=1, keepdims=True)
    return Codebook(beams=beams, oversampling_v=oversampling_v,
                    oversampling_h=oversampling_h, phase_bits=phase_bits)


def codebook_to_csv(codebook: Codebook, path) -> None:
    """Export beam weights as rows of (beam, element, re, im)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("beam,element,re,im\n")
        for z in range(codebook.n_beams):
            for e in range(codebook.beams.shape[1]):
                w = codebook.beams[z, e]
                fh.write(f"{z},{e},{float(w.real)!r},{float(w.imag)!r}\n")
