"""Lindblad master equation for one driven three-level lambda atom.

Level ordering is {|1> = S=0 ground, |2> = S=-1 ground, |3> = optical excited
state}.  A probe field of Rabi frequency omega_p drives |1>-|3> at one-photon
detuning delta_p; a coupling field omega_c drives |2>-|3> at delta_c.  The
two-photon (Raman) detuning is delta_p - delta_c.

All frequencies and rates are Omega/2pi style quantities in MHz; time is in
microseconds, so every generator picks up a factor 2*pi.  In the rotating
frame

    H/2pi = -delta_p |3><3| - (delta_p - delta_c) |2><2|
            + (omega_p/2)(|3><1| + h.c.) + (omega_c/2)(|3><2| + h.c.)

and the dissipator comprises spontaneous decay |3>->|1>, |3>->|2> at the
branched fractions of gamma_opt, symmetric ground-state population exchange
at gamma_pop (Lindblad jumps both ways), pure optical dephasing gamma_deph_opt
on the |1>-|3> and |2>-|3> coherences, and spin decoherence gamma_s on the
|1>-|2> coherence.  The optical coherences therefore decay at

    gamma_eff = gamma_opt/2 + gamma_deph_opt

which realizes the homogeneous optical linewidth.

Density matrices are plain 3x3 complex ndarrays, vectorized row-major
(rho.reshape(9), element (i, j) at index 3*i + j).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LambdaParams",
    "SingularSystem",
    "StepTooLarge",
    "lambda_hamiltonian",
    "build_liouvillian",
    "steady_state",
    "time_evolve",
    "probe_absorption",
    "weak_probe_absorption",
]

TWO_PI = 2.0 * math.pi

_I3 = np.eye(3, dtype=complex)
_TRACE_ROW = np.zeros(9)
_TRACE_ROW[[0, 4, 8]] = 1.0
# vectorized indices of selected elements
_IDX_RHO12 = 1
_IDX_RHO13 = 2
_IDX_RHO11 = 0
_IDX_RHO33 = 8


class SingularSystem(Exception):
    """Steady state is not unique (rank-deficient constrained system)."""


class StepTooLarge(Exception):
    """time_evolve step size violates the stability guard."""


@dataclass(frozen=True)
class LambdaParams:
    """Drive and relaxation parameters of one lambda atom (MHz throughout).

    omega_p, omega_c    probe / coupling Rabi frequencies
    delta_p, delta_c    probe / coupling one-photon detunings
    gamma_opt           total excited-state population decay rate
    branch_1, branch_2  branching fractions of gamma_opt into |1>, |2>
    gamma_deph_opt      extra pure dephasing of the optical coherences
    gamma_s             spin (two-photon) coherence decay rate
    gamma_pop           symmetric ground-ground population exchange rate
    """

    omega_p: float = 1.0
    omega_c: float = 8.0
    delta_p: float = 0.0
    delta_c: float = 0.0
    gamma_opt: float = 13.0
    branch_1: float = 0.5
    branch_2: float = 0.5
    gamma_deph_opt: float = 18.5
    gamma_s: float = 1.0 / (TWO_PI * 0.1)
    gamma_pop: float = 0.001

    def __post_init__(self):
        for name in ("omega_p", "omega_c", "gamma_opt", "gamma_deph_opt",
                     "gamma_s", "gamma_pop", "branch_1", "branch_2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if abs(self.branch_1 + self.branch_2 - 1.0) > 1e-9:
            raise ValueError("branch_1 + branch_2 must equal 1 (closed system)")

    @property
    def gamma_eff(self) -> float:
        """Optical coherence decay rate gamma_opt/2 + gamma_deph_opt."""
        return 0.5 * self.gamma_opt + self.gamma_deph_opt


def lambda_hamiltonian(p: LambdaParams) -> np.ndarray:
    """Rotating-frame Hamiltonian (MHz units, multiply by 2*pi for rad/us)."""
    h = np.zeros((3, 3), dtype=complex)
    h[2, 2] = -p.delta_p
    h[1, 1] = -(p.delta_p - p.delta_c)
    h[2, 0] = h[0, 2] = 0.5 * p.omega_p
    h[2, 1] = h[1, 2] = 0.5 * p.omega_c
    return h


def _commutator_superop(h: np.ndarray) -> np.ndarray:
    """Superoperator of -i[h, .] for row-major vectorization."""
    return -1j * (np.kron(h, _I3) - np.kron(_I3, h.T))


def _dissipator_superop(c: np.ndarray, rate: float) -> np.ndarray:
    cdc = c.conj().T @ c
    return rate * (
        np.kron(c, c.conj())
        - 0.5 * (np.kron(cdc, _I3) + np.kron(_I3, cdc.T))
    )


def _jump(i: int, j: int) -> np.ndarray:
    """|i><j| with zero-based indices."""
    c = np.zeros((3, 3), dtype=complex)
    c[i, j] = 1.0
    return c


def liouvillian_parts(p: LambdaParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Decompose L into detuning-independent and detuning-linear pieces.

    Returns (L0, Lp, Lc) with L(delta_p', delta_c') = L0 + delta_p'*Lp +
    delta_c'*Lc, where the deltas are *offsets added to* p.delta_p, p.delta_c.
    Used to build many detuning variants of one atom cheaply (ensemble
    averaging sweeps thousands of detunings against fixed rates).
    """
    ld = _dissipator_superop(_jump(0, 2), p.branch_1 * p.gamma_opt)
    ld += _dissipator_superop(_jump(1, 2), p.branch_2 * p.gamma_opt)
    ld += _dissipator_superop(_jump(0, 1), p.gamma_pop)
    ld += _dissipator_superop(_jump(1, 0), p.gamma_pop)
    # direct damping of coherences: gamma_deph_opt on rho13/rho23, gamma_s on rho12
    damp = np.zeros(9)
    for (i, j, rate) in ((0, 2, p.gamma_deph_opt), (2, 0, p.gamma_deph_opt),
                         (1, 2, p.gamma_deph_opt), (2, 1, p.gamma_deph_opt),
                         (0, 1, p.gamma_s), (1, 0, p.gamma_s)):
        damp[3 * i + j] = rate
    ld -= np.diag(damp)

    l0 = TWO_PI * (_commutator_superop(lambda_hamiltonian(p)) + ld)

    hp = np.zeros((3, 3), dtype=complex)
    hp[2, 2] = -1.0
    hp[1, 1] = -1.0
    hc = np.zeros((3, 3), dtype=complex)
    hc[1, 1] = 1.0
    return l0, TWO_PI * _commutator_superop(hp), TWO_PI * _commutator_superop(hc)


def build_liouvillian(p: LambdaParams) -> np.ndarray:
    """9x9 generator L over vectorized rho: d(vec rho)/dt = L @ vec(rho).

    Maps Hermitian density matrices to Hermitian derivatives and conserves
    the trace exactly (population columns sum to zero).
    """
    l0, _, _ = liouvillian_parts(p)
    return l0


def steady_states_batch(
    parts: tuple[np.ndarray, np.ndarray, np.ndarray],
    delta_p_offsets: np.ndarray,
    delta_c_offsets: np.ndarray,
) -> np.ndarray:
    """Steady states for a stack of detuning offsets; returns (n, 3, 3).

    One redundant row of L (the rho11 row) is replaced by the trace
    constraint and the dense system solved with partial pivoting, followed by
    one step of iterative refinement.  Deterministic for fixed inputs.
    """
    l0, lp, lc = parts
    dp = np.atleast_1d(np.asarray(delta_p_offsets, dtype=float))
    dc = np.atleast_1d(np.asarray(delta_c_offsets, dtype=float))
    n = dp.size
    full = l0[None, :, :] + dp[:, None, None] * lp[None, :, :] \
        + dc[:, None, None] * lc[None, :, :]
    a = full.copy()
    a[:, 0, :] = _TRACE_ROW
    b = np.zeros((n, 9, 1), dtype=complex)
    b[:, 0, 0] = 1.0
    try:
        x = np.linalg.solve(a, b)
        x = x + np.linalg.solve(a, b - a @ x)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"steady-state system is singular: {exc}") from exc
    residual = float(np.max(np.abs(full @ x)))
    if residual > 1e-8:
        raise SingularSystem(
            f"steady state not unique: ||L rho|| = {residual:.3e}"
        )
    return x[:, :, 0].reshape(n, 3, 3)


def steady_state(p: LambdaParams) -> np.ndarray:
    """Unique steady-state density matrix of the driven atom.

    Requires at least one dissipative rate > 0; raises SingularSystem
    otherwise (the kernel of L is then degenerate).
    """
    return steady_states_batch(liouvillian_parts(p), 0.0, 0.0)[0]


def _max_rate(p: LambdaParams) -> float:
    return max(p.omega_p, p.omega_c, abs(p.delta_p), abs(p.delta_c),
               p.gamma_opt, p.gamma_deph_opt, p.gamma_s, p.gamma_pop)


def time_evolve(
    p: LambdaParams, rho0: np.ndarray, t_final: float, dt: float
) -> np.ndarray:
    """Propagate rho0 for t_final microseconds by fixed-step 4th-order RK.

    The step must satisfy dt * 2*pi * max_rate < 0.1 (StepTooLarge
    otherwise); max_rate is the largest of the Rabi frequencies, |detunings|
    and relaxation rates.  The number of steps is ceil(t_final/dt) with the
    step shrunk to land exactly on t_final.  Hermiticity is enforced by
    symmetrization after every step; the trace is conserved by construction
    (each RK stage applies the traceless generator L).
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if dt * TWO_PI * _max_rate(p) >= 0.1:
        raise StepTooLarge(
            f"dt={dt} violates dt * 2*pi * max_rate < 0.1 "
            f"(max rate {_max_rate(p)} MHz)"
        )
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (3, 3):
        raise ValueError("rho0 must be 3x3")
    if abs(np.trace(rho0).real - 1.0) > 1e-8 or abs(np.trace(rho0).imag) > 1e-8:
        raise ValueError("rho0 must have unit trace")
    if t_final == 0:
        return rho0.copy()
    if t_final < 0:
        raise ValueError("t_final must be >= 0")

    n_steps = max(1, int(math.ceil(t_final / dt - 1e-12)))
    h = t_final / n_steps
    l = build_liouvillian(p)
    # one classical RK4 step of the linear system is the degree-4 Taylor
    # polynomial in h*L, applied as a single matrix
    hl = h * l
    step = np.eye(9, dtype=complex)
    term = np.eye(9, dtype=complex)
    for k in (1, 2, 3, 4):
        term = term @ hl / k
        step = step + term

    v = rho0.reshape(9).copy()
    for _ in range(n_steps):
        v = step @ v
        r = v.reshape(3, 3)
        v = (0.5 * (r + r.conj().T)).reshape(9)
    return v.reshape(3, 3)


def absorption_from_states(p: LambdaParams, rho: np.ndarray) -> np.ndarray:
    """Normalized probe absorption from a stack of density matrices.

    Absorption per available ground-state atom:

        Im(rho_13) * 2 * gamma_eff / (omega_p * (rho_11 - rho_33))

    scaled so a resonant bare two-level atom (omega_c = 0, branch_1 = 1) with
    a weak probe absorbs exactly 1.  The imaginary part of <1|rho|3> is the
    absorptive quadrature for the sign conventions of lambda_hamiltonian.
    Zero population difference (fully pumped-out atom) returns 0.
    """
    rho = np.asarray(rho)
    flat = rho.reshape(-1, 9)
    pop = (flat[:, _IDX_RHO11] - flat[:, _IDX_RHO33]).real
    coher = flat[:, _IDX_RHO13].imag
    out = np.zeros(flat.shape[0])
    ok = np.abs(pop) > 1e-12
    out[ok] = coher[ok] * 2.0 * p.gamma_eff / (p.omega_p * pop[ok])
    return out if rho.ndim == 3 else out


def probe_absorption(p: LambdaParams) -> float:
    """Steady-state probe absorption, normalized to the bare two-level peak."""
    if p.omega_p <= 0:
        raise ValueError("omega_p must be > 0")
    rho = steady_state(p)
    return float(absorption_from_states(p, rho[None, :, :])[0])


def weak_probe_absorption(p: LambdaParams, delta: float) -> float:
    """Closed-form first-order probe absorption at two-photon detuning delta.

    Independent analytic oracle for the steady-state solver:

        A = Im[ i*gamma_eff / ((gamma_eff - i*delta_p)
                               + (omega_c^2/4)/(gamma_s - i*delta)) ]

    Reduces to a unit-peak Lorentzian in delta_p at omega_c = 0 and to exact
    transparency at the gamma_s = 0, delta = 0 pole.  Ignores gamma_pop and
    probe saturation (first order in omega_p, all population in |1>).
    """
    geff = p.gamma_eff
    if geff == 0:
        return 0.0
    if p.omega_c == 0:
        return float(np.imag(1j * geff / (geff - 1j * p.delta_p)))
    two_photon = p.gamma_s - 1j * delta
    if two_photon == 0:
        return 0.0
    term = (p.omega_c ** 2 / 4.0) / two_photon
    return float(np.imag(1j * geff / ((geff - 1j * p.delta_p) + term)))
