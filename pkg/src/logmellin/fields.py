"""Test-field generators: plane waves, log-Gaussians, random band-limited fields."""
from __future__ import annotations

import numpy as np

from .grid import LogGrid, LogLatticeField

__all__ = [
    "plane_wave",
    "log_gaussian",
    "two_frequency",
    "random_field",
    "band_limited_random",
    "power_law_field",
    "lattice_frequency",
    "reference_family",
]


def lattice_frequency(grid: LogGrid, xi: float) -> float:
    """Nearest frequency on the grid's Mellin frequency lattice."""
    return grid.freq_step * round(xi / grid.freq_step)


def plane_wave(grid: LogGrid, xi, amplitude: complex = 1.0) -> LogLatticeField:
    """``x^(i xi) = exp(i xi . log x)``; ``xi`` is a scalar (axis 1) or a vector."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if xi.size == 1 and grid.dim > 1:
        xi = np.r_[xi, np.zeros(grid.dim - 1)]
    if xi.size != grid.dim:
        raise ValueError("frequency vector length must match the grid dimension")
    phase = sum(x * u for x, u in zip(xi, grid.u_coords()))
    return LogLatticeField(grid, amplitude * np.exp(1j * phase))


def log_gaussian(grid: LogGrid, width: float = 1.0, center=0.0) -> LogLatticeField:
    """``exp(-|log x - center|^2 / (2 width^2))``."""
    center = np.broadcast_to(np.asarray(center, dtype=float), (grid.dim,))
    r2 = sum((u - c) ** 2 for u, c in zip(grid.u_coords(), center))
    return LogLatticeField(grid, np.exp(-r2 / (2 * width**2)))


def two_frequency(grid: LogGrid, xi1, xi2, a1: complex = 1.0, a2: complex = 1.0):
    return plane_wave(grid, xi1, a1) + plane_wave(grid, xi2, a2)


def random_field(grid: LogGrid, rng: np.random.Generator) -> LogLatticeField:
    """White complex Gaussian samples."""
    z = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return LogLatticeField(grid, z)


def _from_fft(grid: LogGrid, F: np.ndarray) -> LogLatticeField:
    return LogLatticeField(grid, np.fft.ifftn(F))


def band_limited_random(grid: LogGrid, sigma: float, rng: np.random.Generator,
                        shape: str = "ball", edge_fraction: float = 0.0,
                        normalize: bool = True) -> LogLatticeField:
    """Random field whose spectrum lies in the ball (or box) of radius ``sigma``.

    With ``edge_fraction > 0`` that share of the energy is placed on the
    lattice frequencies of maximal modulus inside the band, so the band edge
    is attained.
    """
    xi = grid.frequencies()
    if shape == "ball":
        metric = grid.radial_frequency()
    elif shape == "box":
        metric = np.max(np.broadcast_arrays(*[np.abs(x) for x in xi]), axis=0)
    else:
        raise ValueError(f"unknown band shape {shape!r}")
    inside = metric <= sigma * (1 + 1e-12)
    if not inside.any():
        raise ValueError("band contains no lattice frequency")
    F = np.where(inside, rng.standard_normal(grid.shape)
                 + 1j * rng.standard_normal(grid.shape), 0)
    if edge_fraction > 0:
        edge_val = metric[inside].max()
        edge = inside & np.isclose(metric, edge_val, rtol=1e-12)
        bulk = inside & ~edge
        e_bulk = np.sum(np.abs(F[bulk]) ** 2)
        e_edge = np.sum(np.abs(F[edge]) ** 2)
        if e_bulk > 0:
            target = edge_fraction / (1 - edge_fraction) * e_bulk
            F[edge] *= np.sqrt(target / e_edge)
    f = _from_fft(grid, F)
    return f / f.norm() if normalize else f


def power_law_field(grid: LogGrid, decay: float, rng: np.random.Generator | None = None,
                    normalize: bool = True) -> LogLatticeField:
    """Field with ``|f_hat(xi)|^2 = (1 + |xi|)^(-decay)`` and random (or zero) phases."""
    amp = (1 + grid.radial_frequency()) ** (-decay / 2)
    if rng is not None:
        amp = amp * np.exp(2j * np.pi * rng.random(grid.shape))
    f = _from_fft(grid, amp)
    return f / f.norm() if normalize else f


def reference_family(grid: LogGrid, seed: int = 0) -> dict[str, LogLatticeField]:
    """Six unit-norm fields spanning low to high Mellin-frequency content."""
    rng = np.random.default_rng(seed)
    top = grid.spectral_radius
    fam = {
        "log_gaussian": log_gaussian(grid, 1.0),
        "narrow_log_gaussian": log_gaussian(grid, 0.25),
        "band_low": band_limited_random(grid, min(4.0, top / 8), rng),
        "band_high": band_limited_random(grid, top / 4, rng),
        "plane_wave": plane_wave(grid, lattice_frequency(grid, min(10.0, top / 8))),
        "power_law": power_law_field(grid, 4.0, rng),
    }
    return {k: v / v.norm() for k, v in fam.items()}
