"""Exact diagonalization, thermal states, and two-/four-point correlators.

Everything is computed in the eigenbasis of the realized Hamiltonian.
Correlator values come out of frequency sums / batched matrix products,
which at these dimensions (<= 2^5 per side) is both exact and fast.

Conventions: ``rho = exp(-beta H)/Z``; ``<A>_beta = Tr[A rho]``;
``A(t) = exp(iHt) A exp(-iHt)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .pauli_algebra import jordan_wigner, realize

RECONSTRUCTION_TOL = 1e-10
_TIME_CHUNK = 256


@dataclass(frozen=True)
class CorrelatorTrace:
    """A real correlator sampled on a time grid."""

    times: np.ndarray
    values: np.ndarray
    kind: str
    indices: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have matching shapes")
        if not np.all(np.isfinite(self.values)):
            raise ValueError(f"non-finite correlator values in {self.kind}")


class ThermalContext:
    """Cached eigendecomposition of a dense Hamiltonian at inverse temperature beta."""

    def __init__(self, hamiltonian: np.ndarray, beta: float):
        h = np.asarray(hamiltonian, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError("Hamiltonian must be a square matrix")
        dim = h.shape[0]
        if dim & (dim - 1):
            raise ValueError(f"dimension {dim} is not a power of two")
        energies, vectors = np.linalg.eigh(h)
        recon = (vectors * energies) @ vectors.conj().T
        dev = np.abs(recon - h).max()
        scale = max(1.0, np.abs(h).max())
        if dev > RECONSTRUCTION_TOL * scale:
            raise ValueError(f"eigendecomposition failed to reconstruct H ({dev:.3e})")
        self.hamiltonian = h
        self.beta = float(beta)
        self.energies = energies
        self.vectors = vectors
        self.n_qubits = dim.bit_length() - 1
        weights = np.exp(-beta * (energies - energies.min()))
        z = weights.sum()
        self.boltzmann = weights / z  # diagonal of rho in the eigenbasis
        self.rho = (vectors * self.boltzmann) @ vectors.conj().T
        self.rho_sqrt = (vectors * np.sqrt(self.boltzmann)) @ vectors.conj().T

    @classmethod
    def from_spec(cls, spec, beta: float) -> "ThermalContext":
        return cls(realize(spec), beta)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def thermal_average(self, op: np.ndarray) -> complex:
        return complex(np.trace(op @ self.rho))

    def to_eigenbasis(self, op: np.ndarray) -> np.ndarray:
        return self.vectors.conj().T @ op @ self.vectors

    def evolution(self, t: float) -> np.ndarray:
        """Unitary exp(-iHt)."""
        phases = np.exp(-1j * self.energies * t)
        return (self.vectors * phases) @ self.vectors.conj().T

    def heisenberg(self, op: np.ndarray, t: float) -> np.ndarray:
        """exp(iHt) op exp(-iHt) via eigenbasis phases."""
        if op.shape != self.hamiltonian.shape:
            raise ValueError("operator dimension does not match Hamiltonian")
        tilde = self.to_eigenbasis(op)
        omega = self.energies[:, None] - self.energies[None, :]
        evolved = tilde * np.exp(1j * omega * t)
        return self.vectors @ evolved @ self.vectors.conj().T

    def heisenberg_eigenbasis_batch(self, op_eig: np.ndarray, times: np.ndarray) -> np.ndarray:
        """Batch of op(t) in the eigenbasis, shape (len(times), dim, dim)."""
        omega = self.energies[:, None] - self.energies[None, :]
        return op_eig[None, :, :] * np.exp(1j * times[:, None, None] * omega[None, :, :])


@lru_cache(maxsize=64)
def _mode_matrix(i: int, n_q: int) -> np.ndarray:
    return jordan_wigner(i, n_q)


def two_point(ctx: ThermalContext, i: int, times: np.ndarray) -> CorrelatorTrace:
    """G_i(t) = Re <m_i(t) m_i(0)>_beta."""
    times = np.asarray(times, dtype=float)
    a = ctx.to_eigenbasis(_mode_matrix(i, ctx.n_qubits))
    omega = (ctx.energies[:, None] - ctx.energies[None, :]).ravel()
    kernel = (a * a.T * ctx.boltzmann[None, :]).ravel()
    values = np.exp(1j * np.outer(times, omega)) @ kernel
    return CorrelatorTrace(times, values.real, kind="G_i", indices=(i,))


def _commutator_square_trace(ctx, a_eig, b_eig, times) -> np.ndarray:
    """-Re <[a(t), b(0)]^2>_beta over the time grid, computed in chunks."""
    out = np.empty(len(times))
    for lo in range(0, len(times), _TIME_CHUNK):
        chunk = times[lo : lo + _TIME_CHUNK]
        a_t = ctx.heisenberg_eigenbasis_batch(a_eig, chunk)
        comm = a_t @ b_eig - b_eig @ a_t
        vals = np.einsum("tmn,tnm,m->t", comm, comm, ctx.boltzmann)
        out[lo : lo + len(chunk)] = -vals.real
    return out


def four_point_same(ctx: ThermalContext, i: int, times: np.ndarray) -> CorrelatorTrace:
    """F_i(t) = -Re <[m_i(t), m_i(0)]^2>_beta."""
    times = np.asarray(times, dtype=float)
    a = ctx.to_eigenbasis(_mode_matrix(i, ctx.n_qubits))
    values = _commutator_square_trace(ctx, a, a, times)
    return CorrelatorTrace(times, values, kind="F_i", indices=(i,))


def four_point_cross(ctx: ThermalContext, i: int, j: int, times: np.ndarray) -> CorrelatorTrace:
    """F_ij(t) = -Re <[m_i(t), m_j(0)]^2>_beta; i == j falls back to F_i."""
    if i == j:
        return four_point_same(ctx, i, times)
    times = np.asarray(times, dtype=float)
    a = ctx.to_eigenbasis(_mode_matrix(i, ctx.n_qubits))
    b = ctx.to_eigenbasis(_mode_matrix(j, ctx.n_qubits))
    values = _commutator_square_trace(ctx, a, b, times)
    return CorrelatorTrace(times, values, kind="F_ij", indices=(i, j))


def averaged_traces(traces: list[CorrelatorTrace], kind: str = "avg") -> CorrelatorTrace:
    """Arithmetic mean of member traces (grids must coincide)."""
    if not traces:
        raise ValueError("cannot average an empty trace set")
    times = traces[0].times
    for tr in traces[1:]:
        if not np.array_equal(tr.times, times):
            raise ValueError("trace time grids differ")
    values = np.mean([tr.values for tr in traces], axis=0)
    return CorrelatorTrace(times, values, kind=kind)
