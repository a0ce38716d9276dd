"""Ground-triplet spin levels of the N-V center versus applied magnetic field.

The ground state is a spin-1 triplet with zero-field splitting ``D`` between
m=0 and m=±1.  A magnetic field applied near the (111) axis Zeeman-shifts the
m=±1 sublevels; the m=-1 branch descends and anticrosses the m=0 branch near
B = D/gyro (~1 kG for the standard constants).  A phenomenological coupling
``mix_eps`` between the m=0 and m=-1 basis states opens the avoided crossing
and mixes the sublevels, which is what gives the Raman (two-photon) transition
its strength at the ~120 MHz operating point.

Basis ordering is {m=+1, m=0, m=-1} everywhere.  All energies are in MHz,
fields in gauss, angles in degrees.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "SpinSystemParams",
    "LevelSet",
    "NoRoot",
    "build_spin_hamiltonian",
    "ground_levels",
    "raman_splitting",
    "field_for_splitting",
    "mixing_fraction",
]

# spin-1 operators in the {m=+1, m=0, m=-1} basis
_SZ = np.diag([1.0, 0.0, -1.0])
_SX = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]]) / np.sqrt(2.0)


class NoRoot(Exception):
    """Raised when field_for_splitting finds no sign change over the bracket."""


@dataclass(frozen=True)
class SpinSystemParams:
    """Ground-triplet model parameters.

    zfs_D        zero-field splitting D (MHz)
    gyro         gyromagnetic ratio (MHz/G)
    field_B      applied field magnitude (G)
    angle_theta  field angle from the (111) axis (degrees)
    mix_eps      anticrossing coupling between m=0 and m=-1 (MHz)
    """

    zfs_D: float = 2870.0
    gyro: float = 2.8
    field_B: float = 1000.0
    angle_theta: float = 0.0
    mix_eps: float = 10.0

    def __post_init__(self):
        if self.zfs_D <= 0:
            raise ValueError("zfs_D must be > 0")
        if self.gyro <= 0:
            raise ValueError("gyro must be > 0")
        if self.field_B < 0:
            raise ValueError("field_B must be >= 0")
        if not 0.0 <= self.angle_theta < 90.0:
            raise ValueError("angle_theta must be in [0, 90)")
        if self.mix_eps < 0:
            raise ValueError("mix_eps must be >= 0")


@dataclass(frozen=True)
class LevelSet:
    """Eigenvalues (ascending, MHz) and eigenvectors of the spin Hamiltonian.

    ``vectors[:, k]`` is the unit-norm eigenvector of ``energies[k]`` in the
    {m=+1, m=0, m=-1} basis, with the largest-magnitude component made
    real-positive (deterministic phase convention).
    """

    energies: np.ndarray
    vectors: np.ndarray


def build_spin_hamiltonian(p: SpinSystemParams) -> np.ndarray:
    """3x3 Hermitian spin Hamiltonian (MHz) in the {m=+1, m=0, m=-1} basis.

    H = D*Sz^2 + gyro*B*(cos(theta)*Sz + sin(theta)*Sx) + mix_eps coupling
    between the m=0 and m=-1 basis states.  The Zeeman sign is chosen so the
    m=-1 branch descends with field and anticrosses m=0 at B = D/gyro.
    """
    theta = np.deg2rad(p.angle_theta)
    h = p.zfs_D * (_SZ @ _SZ)
    h = h + p.gyro * p.field_B * (np.cos(theta) * _SZ + np.sin(theta) * _SX)
    h = h.astype(complex)
    h[1, 2] += p.mix_eps
    h[2, 1] += p.mix_eps
    return h


def ground_levels(p: SpinSystemParams) -> LevelSet:
    """Diagonalize the spin Hamiltonian; deterministic order and phases."""
    h = build_spin_hamiltonian(p)
    energies, vectors = np.linalg.eigh(h)  # ascending
    for k in range(3):
        v = vectors[:, k]
        i = int(np.argmax(np.abs(v)))
        phase = v[i] / abs(v[i])
        vectors[:, k] = v / phase
    return LevelSet(energies=energies, vectors=vectors)


def raman_splitting(p: SpinSystemParams) -> float:
    """Spacing (MHz) between the two lowest spin sublevels."""
    e = ground_levels(p).energies
    return float(e[1] - e[0])


def field_for_splitting(
    p: SpinSystemParams,
    target: float,
    bracket: tuple[float, float],
    scan_points: int = 257,
) -> float:
    """Field (G) at which raman_splitting equals ``target`` MHz.

    The bracket is scanned on a uniform grid to locate a sign change of
    ``raman_splitting - target`` (the splitting is non-monotonic near the
    anticrossing, where it has a floor of 2*mix_eps), then bisected until the
    splitting matches the target to 1e-6 MHz (at most 200 iterations).

    Raises NoRoot when no sign change exists over the bracket, e.g. for
    targets below the anticrossing floor.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")

    def f(field):
        return raman_splitting(replace(p, field_B=field)) - target

    grid = np.linspace(lo, hi, scan_points)
    vals = [f(b) for b in grid]
    a = b = None
    for i in range(scan_points - 1):
        if vals[i] == 0.0:
            return float(grid[i])
        if vals[i] * vals[i + 1] < 0.0:
            a, b = grid[i], grid[i + 1]
            fa = vals[i]
            break
    else:
        if vals[-1] == 0.0:
            return float(grid[-1])
        raise NoRoot(
            f"splitting - target does not change sign over bracket {bracket}"
        )

    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = f(mid)
        if abs(fm) < 1e-6:
            return float(mid)
        if fa * fm < 0.0:
            b = mid
        else:
            a, fa = mid, fm
    return float(0.5 * (a + b))


def mixing_fraction(p: SpinSystemParams) -> float:
    """Degree of m=0 / m=-1 mixing in the lowest eigenstate, in [0, 1].

    Defined as 4*|c0|^2*|c-1|^2 where c0, c-1 are the m=0 and m=-1 amplitudes
    of the lowest-energy eigenstate: 1 at the equal 50/50 superposition at the
    anticrossing center, 0 for an unmixed state.
    """
    vec = ground_levels(p).vectors[:, 0]
    c0 = abs(vec[1]) ** 2
    cm1 = abs(vec[2]) ** 2
    return float(4.0 * c0 * cm1)
