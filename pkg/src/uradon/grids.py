"""Sampled-grid containers shared by every transform stage.

All sample arrays are stored as complex128; real data is data with zero
imaginary part.  Every type is immutable after construction (frozen
dataclasses over read-only arrays), so instances are safe to share across
threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi

# Normalization of the angular integration measure used by every
# reconstruction path: d_mu(phi) = d_phi / (4 pi^2).  This is the unique
# constant under which a unit Gaussian round-trips to amplitude 1.
ANGULAR_MEASURE_NORM = 1.0 / (4.0 * np.pi**2)


def _freeze(values, shape, name: str) -> np.ndarray:
    """Copy to a read-only, C-contiguous complex128 array of the given shape."""
    arr = np.array(values, dtype=np.complex128, order="C", copy=True)
    if arr.shape != tuple(shape):
        raise ValueError(f"{name}: expected shape {tuple(shape)}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GridGeometry:
    """Uniform 2D lattice; node (i, j) sits at (x_min + i*dx, y_min + j*dy)."""

    nx: int
    ny: int
    x_min: float
    y_min: float
    dx: float
    dy: float

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"grid needs at least 2 samples per axis, got {self.nx}x{self.ny}")
        if self.dx <= 0 or self.dy <= 0:
            raise ValueError(f"grid spacing must be positive, got dx={self.dx}, dy={self.dy}")

    @classmethod
    def centered(cls, nx: int, ny: int, extent_x: float, extent_y: float) -> "GridGeometry":
        """Cell-centered lattice covering [-extent/2, extent/2] per axis.

        Nodes sit at -(n-1)*d/2 + i*d, so the lattice is mirror-symmetric
        about the origin and no node falls exactly on either axis.
        """
        dx = extent_x / nx
        dy = extent_y / ny
        return cls(nx, ny, -(nx - 1) * dx / 2.0, -(ny - 1) * dy / 2.0, dx, dy)

    @property
    def x_max(self) -> float:
        return self.x_min + (self.nx - 1) * self.dx

    @property
    def y_max(self) -> float:
        return self.y_min + (self.ny - 1) * self.dy

    def x_nodes(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.nx)

    def y_nodes(self) -> np.ndarray:
        return self.y_min + self.dy * np.arange(self.ny)

    def node_mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, Y) coordinate arrays of shape (nx, ny)."""
        return np.meshgrid(self.x_nodes(), self.y_nodes(), indexing="ij")

    @property
    def bounding_radius(self) -> float:
        """Radius of the origin-centered circle containing every node."""
        xs = (abs(self.x_min), abs(self.x_max))
        ys = (abs(self.y_min), abs(self.y_max))
        return float(np.hypot(max(xs), max(ys)))

    @property
    def diameter(self) -> float:
        """Diagonal length of the physical extent."""
        return float(np.hypot(self.x_max - self.x_min, self.y_max - self.y_min))


@dataclass(frozen=True)
class ImageGrid2D:
    """Complex samples of a 2D field on a uniform lattice.

    ``values[i, j]`` is the sample at ``(x_min + i*dx, y_min + j*dy)``.
    Points outside the closed extent read as zero (compact-support
    convention).  ``meta`` carries run diagnostics (e.g. coverage flags)
    and is excluded from equality and from the on-disk format.
    """

    nx: int
    ny: int
    x_min: float
    y_min: float
    dx: float
    dy: float
    values: np.ndarray
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        GridGeometry(self.nx, self.ny, self.x_min, self.y_min, self.dx, self.dy)
        object.__setattr__(self, "values", _freeze(self.values, (self.nx, self.ny), "ImageGrid2D.values"))

    @classmethod
    def from_geometry(cls, geometry: GridGeometry, values, meta: dict | None = None) -> "ImageGrid2D":
        return cls(geometry.nx, geometry.ny, geometry.x_min, geometry.y_min,
                   geometry.dx, geometry.dy, values, meta or {})

    @property
    def geometry(self) -> GridGeometry:
        return GridGeometry(self.nx, self.ny, self.x_min, self.y_min, self.dx, self.dy)

    @property
    def real_valued(self) -> bool:
        """True iff the imaginary part is exactly zero everywhere."""
        return bool(np.all(self.values.imag == 0.0))

    @property
    def x_max(self) -> float:
        return self.x_min + (self.nx - 1) * self.dx

    @property
    def y_max(self) -> float:
        return self.y_min + (self.ny - 1) * self.dy

    def total_integral(self) -> complex:
        """Trapezoid quadrature of the samples over the extent."""
        wx = np.full(self.nx, self.dx)
        wx[[0, -1]] *= 0.5
        wy = np.full(self.ny, self.dy)
        wy[[0, -1]] *= 0.5
        return complex(wx @ self.values @ wy)

    def __eq__(self, other):
        if not isinstance(other, ImageGrid2D):
            return NotImplemented
        return (self.geometry == other.geometry
                and np.array_equal(self.values, other.values))


def bilinear_sample(img: ImageGrid2D, x, y):
    """Bilinear interpolation of ``img.values`` at (x, y); zero outside the extent.

    Accepts scalars or broadcastable arrays; returns a complex scalar for
    scalar input.  Exactly reproduces nodal values at the nodes and is
    linear in ``img.values``.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    scalar = x.ndim == 0 and y.ndim == 0
    fx = (x - img.x_min) / img.dx
    fy = (y - img.y_min) / img.dy
    inside = (fx >= 0.0) & (fx <= img.nx - 1) & (fy >= 0.0) & (fy <= img.ny - 1)
    fx = np.clip(fx, 0.0, img.nx - 1)
    fy = np.clip(fy, 0.0, img.ny - 1)
    i0 = np.minimum(fx.astype(np.intp), img.nx - 2)
    j0 = np.minimum(fy.astype(np.intp), img.ny - 2)
    tx = fx - i0
    ty = fy - j0
    v = img.values
    out = ((1.0 - tx) * (1.0 - ty) * v[i0, j0]
           + tx * (1.0 - ty) * v[i0 + 1, j0]
           + (1.0 - tx) * ty * v[i0, j0 + 1]
           + tx * ty * v[i0 + 1, j0 + 1])
    out = np.where(inside, out, 0.0 + 0.0j)
    return complex(out) if scalar else out


@dataclass(frozen=True)
class AngularRange:
    """Half-open angular window [phi_min, phi_max) sampled at n_phi points.

    Samples are phi_min + m*d_phi with d_phi = (phi_max - phi_min)/n_phi;
    the endpoint is excluded (periodic convention).  The angular measure
    carries the fixed normalization 1/(4 pi^2).
    """

    phi_min: float
    phi_max: float
    n_phi: int

    def __post_init__(self):
        span = self.phi_max - self.phi_min
        if not (0.0 < span <= TWO_PI + 1e-12):
            raise ValueError(f"angular span must lie in (0, 2*pi], got {span}")
        if self.n_phi < 1:
            raise ValueError(f"n_phi must be positive, got {self.n_phi}")

    @classmethod
    def full(cls, n_phi: int) -> "AngularRange":
        return cls(0.0, TWO_PI, n_phi)

    @property
    def span(self) -> float:
        return self.phi_max - self.phi_min

    @property
    def is_full(self) -> bool:
        return abs(self.span - TWO_PI) <= 1e-12

    @property
    def d_phi(self) -> float:
        return self.span / self.n_phi

    @property
    def normalization(self) -> float:
        return ANGULAR_MEASURE_NORM

    def phis(self) -> np.ndarray:
        return self.phi_min + self.d_phi * np.arange(self.n_phi)

    def index_of(self, phi: float) -> int:
        """Index of the stored sample nearest to phi (within half a step).

        Full ranges wrap periodically; otherwise angles outside the window
        raise ValueError.
        """
        offset = phi - self.phi_min
        if self.is_full:
            offset = float(np.mod(offset, TWO_PI))
        nearest = int(np.round(offset / self.d_phi))
        delta = offset - nearest * self.d_phi
        if abs(delta) > self.d_phi / 2.0 + 1e-12:
            raise ValueError(f"angle {phi} is {delta:+.3e} rad from the nearest "
                             f"stored sample")
        m = nearest % self.n_phi if self.is_full else nearest
        if not (0 <= m < self.n_phi):
            raise ValueError(f"angle {phi} lies outside the stored range "
                             f"[{self.phi_min}, {self.phi_max})")
        return m


@dataclass(frozen=True)
class TauGrid:
    """Uniform grid of radial offsets tau_min + t*d_tau, t = 0..n_tau-1."""

    tau_min: float
    d_tau: float
    n_tau: int

    def __post_init__(self):
        if self.d_tau <= 0:
            raise ValueError(f"d_tau must be positive, got {self.d_tau}")
        if self.n_tau < 1:
            raise ValueError(f"n_tau must be positive, got {self.n_tau}")

    @classmethod
    def symmetric(cls, d_tau: float, n_tau: int) -> "TauGrid":
        """Grid symmetric about zero: tau_min = -(n_tau-1)*d_tau/2."""
        return cls(-(n_tau - 1) * d_tau / 2.0, d_tau, n_tau)

    @classmethod
    def covering(cls, geometry: GridGeometry, d_tau: float, pad: float = 0.0) -> "TauGrid":
        """Symmetric grid covering the geometry's bounding circle (+pad)."""
        radius = geometry.bounding_radius + pad
        half = int(np.ceil(radius / d_tau))
        return cls.symmetric(d_tau, 2 * half + 1)

    @property
    def tau_max(self) -> float:
        return self.tau_min + (self.n_tau - 1) * self.d_tau

    def taus(self) -> np.ndarray:
        return self.tau_min + self.d_tau * np.arange(self.n_tau)


@dataclass(frozen=True)
class Sinogram:
    """Complex Radon data on a (tau, phi) grid; values has shape (n_tau, n_phi)."""

    tau_min: float
    d_tau: float
    n_tau: int
    angles: AngularRange
    values: np.ndarray

    def __post_init__(self):
        TauGrid(self.tau_min, self.d_tau, self.n_tau)
        object.__setattr__(self, "values",
                           _freeze(self.values, (self.n_tau, self.angles.n_phi), "Sinogram.values"))

    @property
    def tau_grid(self) -> TauGrid:
        return TauGrid(self.tau_min, self.d_tau, self.n_tau)

    @property
    def tau_max(self) -> float:
        return self.tau_grid.tau_max

    def taus(self) -> np.ndarray:
        return self.tau_grid.taus()

    @property
    def real_valued(self) -> bool:
        return bool(np.all(self.values.imag == 0.0))

    def __eq__(self, other):
        if not isinstance(other, Sinogram):
            return NotImplemented
        return (self.tau_grid == other.tau_grid
                and self.angles == other.angles
                and np.array_equal(self.values, other.values))


@dataclass(frozen=True)
class VolumeStack:
    """Finite set of 2D slices at strictly increasing third-axis positions."""

    x3_positions: tuple
    slices: tuple

    def __post_init__(self):
        positions = tuple(float(p) for p in self.x3_positions)
        slices = tuple(self.slices)
        if len(slices) == 0 or len(slices) != len(positions):
            raise ValueError("need one slice per x3 position, at least one of each")
        if any(b <= a for a, b in zip(positions, positions[1:])):
            raise ValueError("x3_positions must be strictly increasing")
        geom = slices[0].geometry
        for k, s in enumerate(slices):
            if s.geometry != geom:
                raise ValueError(f"slice {k} geometry differs from slice 0")
        object.__setattr__(self, "x3_positions", positions)
        object.__setattr__(self, "slices", slices)

    @property
    def geometry(self) -> GridGeometry:
        return self.slices[0].geometry

    @property
    def n_slices(self) -> int:
        return len(self.slices)

    @property
    def real_valued(self) -> bool:
        return all(s.real_valued for s in self.slices)


class Provenance(enum.Enum):
    """How a set of conjugate-momentum fields was produced."""

    CONTINUOUS = "continuous"   # integral transform along the third axis
    SERIES = "series"           # discrete sum over stored slices


@dataclass(frozen=True)
class HybridField:
    """Complex 2D fields indexed by conjugate momentum k along the third axis."""

    k_values: tuple
    fields: tuple
    provenance: Provenance

    def __post_init__(self):
        ks = tuple(float(k) for k in self.k_values)
        fields = tuple(self.fields)
        if len(fields) == 0 or len(fields) != len(ks):
            raise ValueError("need one field per k value, at least one of each")
        geom = fields[0].geometry
        for k, f in enumerate(fields):
            if f.geometry != geom:
                raise ValueError(f"field {k} geometry differs from field 0")
        if not isinstance(self.provenance, Provenance):
            object.__setattr__(self, "provenance", Provenance(self.provenance))
        object.__setattr__(self, "k_values", ks)
        object.__setattr__(self, "fields", fields)

    @property
    def geometry(self) -> GridGeometry:
        return self.fields[0].geometry

    @property
    def n_k(self) -> int:
        return len(self.k_values)
