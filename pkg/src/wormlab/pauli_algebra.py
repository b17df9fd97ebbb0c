"""Bit-mask algebra for Majorana strings and their dense qubit realization.

A Majorana string is an ascending-index product ``m_{i1} m_{i2} ... m_{ik}``
of Hermitian Majorana modes normalized so that ``{m_i, m_j} = delta_ij``
(hence ``m_i^2 = 1/2``).  Strings are encoded as integer bit masks: bit
``i - 1`` set means mode ``i`` is present (mode indices are 1-based
throughout the package).

Products and commutation checks are pure integer arithmetic.  Dense
matrices are produced on demand through the Jordan-Wigner map

    m_{2k-1} = (Z_1 ... Z_{k-1} X_k) / sqrt(2)
    m_{2k}   = (Z_1 ... Z_{k-1} Y_k) / sqrt(2)

with qubit 1 the leftmost tensor factor.  An odd mode count N is embedded
in ceil(N/2) qubits; the spare top mode simply never appears in any term.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

HERMITICITY_TOL = 1e-12

_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


class DimensionMismatchError(ValueError):
    """Raised when two strings or operators live on different mode counts."""


@dataclass(frozen=True, slots=True)
class MajoranaString:
    """Ascending-index product of Majorana modes, encoded as a bit mask."""

    support: int
    n_sites: int

    def __post_init__(self) -> None:
        if self.n_sites < 0:
            raise ValueError(f"negative mode count {self.n_sites}")
        if self.support < 0 or self.support >> self.n_sites:
            raise ValueError(
                f"support mask {self.support:#x} does not fit in {self.n_sites} modes"
            )

    @classmethod
    def from_indices(cls, indices: Iterable[int], n_sites: int) -> "MajoranaString":
        mask = 0
        for i in indices:
            if not 1 <= i <= n_sites:
                raise ValueError(f"mode index {i} outside 1..{n_sites}")
            if mask >> (i - 1) & 1:
                raise ValueError(f"repeated mode index {i}")
            mask |= 1 << (i - 1)
        return cls(mask, n_sites)

    @property
    def indices(self) -> tuple[int, ...]:
        """1-based mode indices in canonical (ascending) order."""
        return tuple(i + 1 for i in range(self.n_sites) if self.support >> i & 1)

    @property
    def size(self) -> int:
        return self.support.bit_count()

    def __str__(self) -> str:
        if not self.support:
            return "1"
        return "*".join(f"m{i}" for i in self.indices)


@dataclass(frozen=True, slots=True)
class ScaledString:
    """A Majorana string with an explicit scalar prefactor."""

    prefactor: complex
    string: MajoranaString


def _reorder_sign(a: int, b: int) -> int:
    # Sign from moving each mode of b leftward past the modes of a above it.
    swaps = 0
    bb = b
    while bb:
        low = bb & -bb
        swaps += (a & ~(2 * low - 1)).bit_count()
        bb ^= low
    return -1 if swaps & 1 else 1


def string_product(a: MajoranaString, b: MajoranaString) -> ScaledString:
    """Canonical-form product ``a * b = prefactor * string(a XOR b)``.

    Shared modes contract pairwise to ``1/2``; the sign comes from the
    anticommutation reordering into ascending index order.
    """
    if a.n_sites != b.n_sites:
        raise DimensionMismatchError(
            f"mode counts differ: {a.n_sites} vs {b.n_sites}"
        )
    overlap = (a.support & b.support).bit_count()
    prefactor = _reorder_sign(a.support, b.support) * 0.5**overlap
    return ScaledString(complex(prefactor), MajoranaString(a.support ^ b.support, a.n_sites))


def strings_commute(a: MajoranaString, b: MajoranaString) -> bool:
    """True iff the two strings commute: |a|*|b| - |a AND b| is even."""
    if a.n_sites != b.n_sites:
        raise DimensionMismatchError(
            f"mode counts differ: {a.n_sites} vs {b.n_sites}"
        )
    overlap = (a.support & b.support).bit_count()
    return (a.size * b.size - overlap) % 2 == 0


def _kron_chain(factors: list[np.ndarray]) -> np.ndarray:
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


@lru_cache(maxsize=None)
def jordan_wigner(i: int, n_q: int) -> np.ndarray:
    """Dense matrix of Majorana mode ``i`` on ``n_q`` qubits (1-based index)."""
    if not 1 <= i <= 2 * n_q:
        raise ValueError(f"mode index {i} outside 1..{2 * n_q}")
    k = (i + 1) // 2  # 1-based qubit carrying this mode
    factors = [_Z] * (k - 1)
    factors.append(_X if i % 2 == 1 else _Y)
    factors.extend([np.eye(2, dtype=complex)] * (n_q - k))
    mat = _kron_chain(factors) / np.sqrt(2.0)
    mat.flags.writeable = False
    return mat


def string_matrix(s: MajoranaString, n_q: int) -> np.ndarray:
    """Dense matrix of a Majorana string (ascending-order product)."""
    if s.n_sites > 2 * n_q:
        raise DimensionMismatchError(
            f"{s.n_sites} modes do not fit in {n_q} qubits"
        )
    out = np.eye(2**n_q, dtype=complex)
    for i in s.indices:
        out = out @ jordan_wigner(i, n_q)
    return out


def realize(spec, n_q: int | None = None) -> np.ndarray:
    """Dense Hermitian matrix ``H = sum_k c_k * string_k`` of a Hamiltonian spec.

    Raises if the result is not Hermitian, which signals an ill-formed
    term list (e.g. a real coefficient on an anti-Hermitian string).
    """
    if n_q is None:
        n_q = (spec.n_maj + 1) // 2
    dim = 2**n_q
    h = np.zeros((dim, dim), dtype=complex)
    for coeff, s in spec.terms:
        if s.n_sites > 2 * n_q:
            raise DimensionMismatchError(
                f"term {s} does not fit in {n_q} qubits"
            )
        h += coeff * string_matrix(s, n_q)
    dev = np.abs(h - h.conj().T).max() if dim else 0.0
    if dev > HERMITICITY_TOL * max(1.0, np.abs(h).max()):
        raise ValueError(f"realized Hamiltonian is not Hermitian (deviation {dev:.3e})")
    return h


def hermitian_phase(size: int) -> complex:
    """Phase ``i^(s(s-1)/2)`` that makes a size-s string Hermitian."""
    return 1j ** ((size * (size - 1) // 2) % 4)


@lru_cache(maxsize=8)
def hermitian_string_basis(n_q: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Orthonormal Hermitian Majorana-string basis on ``n_q`` qubits.

    Returns ``(masks, sizes, mats)`` where ``mats[k]`` is the string with
    support ``masks[k]`` over the 2*n_q register modes, rescaled to unit
    Frobenius norm and phase-fixed to be Hermitian.  The 4**n_q strings
    form a complete orthonormal operator basis.
    """
    n_modes = 2 * n_q
    dim = 2**n_q
    n_strings = 1 << n_modes
    singles = [jordan_wigner(i, n_q) for i in range(1, n_modes + 1)]

    masks = np.arange(n_strings, dtype=np.int64)
    sizes = np.array([int(m).bit_count() for m in masks], dtype=np.int64)
    mats = np.empty((n_strings, dim, dim), dtype=complex)
    mats[0] = np.eye(dim, dtype=complex) / np.sqrt(dim)
    for mask in range(1, n_strings):
        low = mask & -mask
        rest = mask ^ low
        # canonical order: lowest mode multiplies from the left; the
        # rest is already unit-normalized, so rescale the new mode by
        # sqrt(2) to keep unit Frobenius norm.
        mats[mask] = (np.sqrt(2.0) * singles[low.bit_length() - 1]) @ mats[rest]
    # phase-fix each string to be Hermitian
    phases = np.array([hermitian_phase(int(s)) for s in sizes])
    mats *= phases[:, None, None]
    mats.flags.writeable = False
    return masks, sizes, mats
