"""Hamiltonian constructors and disorder samplers.

Covers the three learned sparse Majorana models, the quartic SYK
ensemble, randomized variants of the first model (fresh coefficients,
fresh commuting terms), and random all-to-all Ising models.

All randomness flows through the counter-based Philox generator with an
explicit seed, so every disorder realization is bit-reproducible across
platforms.  Distinct logical streams of one sampler derive from
``SeedSequence([seed, stream])``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .pauli_algebra import MajoranaString, string_product, strings_commute

REJECTION_STALL_LIMIT = 10_000

MODEL1_COEFFS = (-0.36, 0.19, -0.71, 0.22, 0.49)
MODEL1_SUPPORTS = ((1, 2, 4, 5), (1, 3, 4, 7), (1, 3, 5, 6), (2, 3, 4, 6), (2, 3, 5, 7))

MODEL2_COEFFS = (-0.35, 0.11, -0.17, -0.67, 0.38, -0.05)
MODEL2_SUPPORTS = (
    (1, 2, 3, 6),
    (1, 2, 3, 8),
    (1, 2, 4, 7),
    (1, 3, 5, 7),
    (2, 3, 6, 7),
    (2, 5, 6, 7),
)

MODEL3_COEFFS = (0.60, 0.72, 0.49, 0.49, 0.64, -0.75, 0.58, -0.53)
MODEL3_SUPPORTS = (
    (1, 3, 4, 5),
    (1, 3, 5, 6),
    (1, 5, 6, 9),
    (1, 5, 7, 8),
    (2, 4, 8, 10),
    (2, 5, 7, 8),
    (2, 5, 7, 10),
    (2, 7, 8, 10),
)


def _rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))


@dataclass(frozen=True)
class HamiltonianSpec:
    """A real-coefficient Majorana Hamiltonian as a list of string terms."""

    n_maj: int
    terms: tuple[tuple[float, MajoranaString], ...]
    label: str
    seed: int | None = None

    def __post_init__(self) -> None:
        seen = set()
        for coeff, s in self.terms:
            if not math.isfinite(coeff):
                raise ValueError(f"non-finite coefficient {coeff} in {self.label}")
            if s.n_sites != self.n_maj:
                raise ValueError(
                    f"term {s} has {s.n_sites} modes, spec declares {self.n_maj}"
                )
            if s.support in seen:
                raise ValueError(f"duplicate support {s} in {self.label}")
            seen.add(s.support)

    @property
    def n_qubits(self) -> int:
        return (self.n_maj + 1) // 2

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([c for c, _ in self.terms])

    @property
    def supports(self) -> tuple[MajoranaString, ...]:
        return tuple(s for _, s in self.terms)

    @cached_property
    def fully_commuting(self) -> bool:
        """Verified pairwise commutation of all terms."""
        strs = self.supports
        return all(
            strings_commute(a, b) for a, b in itertools.combinations(strs, 2)
        )

    def coefficient_rms(self) -> float:
        c = self.coefficients
        return float(np.sqrt(np.mean(c**2)))

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "n_maj": self.n_maj,
            "seed": self.seed,
            "terms": [[c, list(s.indices)] for c, s in self.terms],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, d: dict) -> "HamiltonianSpec":
        n_maj = int(d["n_maj"])
        terms = tuple(
            (float(c), MajoranaString.from_indices(idx, n_maj)) for c, idx in d["terms"]
        )
        return cls(n_maj=n_maj, terms=terms, label=str(d["label"]), seed=d.get("seed"))

    @classmethod
    def from_json(cls, text: str) -> "HamiltonianSpec":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class IsingSpec:
    """All-to-all Ising couplings J_ij (i<j); realized with a 1/sqrt(N) prefactor."""

    n_spins: int
    couplings: tuple[tuple[int, int, float], ...]
    label: str
    seed: int | None = None

    def coupling_matrix(self) -> np.ndarray:
        j = np.zeros((self.n_spins, self.n_spins))
        for a, b, val in self.couplings:
            j[a - 1, b - 1] = val
        return j


def _spec_from_tables(coeffs, supports, n_maj, label) -> HamiltonianSpec:
    terms = tuple(
        (c, MajoranaString.from_indices(idx, n_maj)) for c, idx in zip(coeffs, supports)
    )
    return HamiltonianSpec(n_maj=n_maj, terms=terms, label=label)


def model1() -> HamiltonianSpec:
    """The learned 7-mode, five-term fully-commuting model."""
    return _spec_from_tables(MODEL1_COEFFS, MODEL1_SUPPORTS, 7, "model1")


def model2() -> HamiltonianSpec:
    """The learned 8-mode, six-term model (nearly commuting)."""
    return _spec_from_tables(MODEL2_COEFFS, MODEL2_SUPPORTS, 8, "model2")


def model3() -> HamiltonianSpec:
    """The learned 10-mode, eight-term non-commuting model."""
    return _spec_from_tables(MODEL3_COEFFS, MODEL3_SUPPORTS, 10, "model3")


def _rotate_term(
    coeff: float, s: MajoranaString, a: int, b: int, theta: float
) -> list[tuple[complex, MajoranaString]]:
    """Expand one term under the mode-plane rotation m_a -> cos(theta) m_a - sin(theta) m_b,
    m_b -> cos(theta) m_b + sin(theta) m_a, returning canonical-form pieces."""
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    images = {
        a: ((cos_t, a), (-sin_t, b)),
        b: ((cos_t, b), (sin_t, a)),
    }
    pieces: list[tuple[complex, MajoranaString]] = [
        (complex(coeff), MajoranaString(0, s.n_sites))
    ]
    for i in s.indices:
        branches = images.get(i, ((1.0, i),))
        new_pieces = []
        for pref, acc in pieces:
            for weight, j in branches:
                prod = string_product(acc, MajoranaString.from_indices([j], s.n_sites))
                new_pieces.append((pref * weight * prod.prefactor, prod.string))
        pieces = new_pieces
    return pieces


def model2_commuting_reduction() -> HamiltonianSpec:
    """Fully-commuting reduction of the second model.

    Drops the two smallest-magnitude terms (+0.11 and -0.05), rotates the
    m1/m7 plane by theta = atan(-0.35/0.38), and re-expands into canonical
    strings.  The surviving strings pairwise commute.
    """
    base = model2()
    kept = sorted(base.terms, key=lambda t: abs(t[0]))[2:]
    theta = math.atan2(-0.35, 0.38)
    accum: dict[int, complex] = {}
    for coeff, s in kept:
        for pref, out in _rotate_term(coeff, s, 1, 7, theta):
            accum[out.support] = accum.get(out.support, 0.0) + pref
    terms = []
    for mask in sorted(accum):
        val = accum[mask]
        if abs(val) < 1e-12:
            continue
        if abs(val.imag) > 1e-12:
            raise ValueError("rotation produced a complex coefficient")
        terms.append((val.real, MajoranaString(mask, base.n_maj)))
    spec = HamiltonianSpec(
        n_maj=base.n_maj, terms=tuple(terms), label="model2_commuting"
    )
    if not spec.fully_commuting:
        raise ValueError("reduction failed to produce a fully-commuting spec")
    return spec


def syk_variance(n_maj: int, j_scale: float) -> float:
    """Coupling variance 6 J^2 / N^3 of the quartic all-to-all ensemble."""
    return 6.0 * j_scale**2 / n_maj**3


def sample_syk(n_maj: int = 10, j_scale: float = 1.0, seed: int = 0) -> HamiltonianSpec:
    """One disorder realization of the quartic SYK ensemble.

    One term per ascending 4-subset, coefficients i.i.d. normal with mean
    zero and variance ``6 J^2 / N^3``.
    """
    if n_maj < 4:
        raise ValueError(f"need at least 4 modes, got {n_maj}")
    combos = list(itertools.combinations(range(1, n_maj + 1), 4))
    coeffs = _rng(seed).normal(0.0, math.sqrt(syk_variance(n_maj, j_scale)), len(combos))
    terms = tuple(
        (float(c), MajoranaString.from_indices(idx, n_maj))
        for c, idx in zip(coeffs, combos)
    )
    return HamiltonianSpec(
        n_maj=n_maj, terms=terms, label=f"syk{n_maj}_J{j_scale:g}", seed=seed
    )


def randomize_coefficients(base: HamiltonianSpec, seed: int = 0) -> HamiltonianSpec:
    """Same supports as ``base``; fresh normal coefficients with std = RMS(base)."""
    if not base.terms:
        raise ValueError("base spec has no terms")
    coeffs = _rng(seed).normal(0.0, base.coefficient_rms(), len(base.terms))
    terms = tuple((float(c), s) for c, (_, s) in zip(coeffs, base.terms))
    return HamiltonianSpec(
        n_maj=base.n_maj, terms=terms, label=f"{base.label}_randcoeff", seed=seed
    )


def sample_random_commuting(
    n_maj: int = 7,
    n_terms: int = 5,
    seed: int = 0,
    coefficient_rms: float | None = None,
) -> HamiltonianSpec:
    """Random mutually-commuting 4-mode terms with random coefficients.

    Candidates are uniform 4-subsets, kept only if they commute with (and
    differ from) every accepted term.  If 10^4 consecutive candidates are
    rejected the whole draw restarts on the next derived stream, which
    preserves uniformity over achievable term sets.  Coefficients are
    normal with std equal to the first model's RMS unless overridden.
    """
    if coefficient_rms is None:
        coefficient_rms = model1().coefficient_rms()
    for restart in itertools.count():
        rng = _rng(seed, restart)
        accepted: list[MajoranaString] = []
        stall = 0
        while len(accepted) < n_terms and stall < REJECTION_STALL_LIMIT:
            idx = rng.choice(n_maj, size=4, replace=False) + 1
            cand = MajoranaString.from_indices(sorted(int(i) for i in idx), n_maj)
            if any(cand.support == s.support for s in accepted) or not all(
                strings_commute(cand, s) for s in accepted
            ):
                stall += 1
                continue
            accepted.append(cand)
            stall = 0
        if len(accepted) == n_terms:
            coeffs = rng.normal(0.0, coefficient_rms, n_terms)
            terms = tuple((float(c), s) for c, s in zip(coeffs, accepted))
            return HamiltonianSpec(
                n_maj=n_maj, terms=terms, label=f"randcommuting{n_maj}", seed=seed
            )


def sample_ising(n_spins: int, j_scale: float = 0.17, seed: int = 0) -> IsingSpec:
    """Random all-to-all Ising couplings, J_ij i.i.d. normal(0, J^2)."""
    if n_spins < 2:
        raise ValueError(f"need at least 2 spins, got {n_spins}")
    pairs = list(itertools.combinations(range(1, n_spins + 1), 2))
    vals = _rng(seed).normal(0.0, j_scale, len(pairs))
    couplings = tuple((a, b, float(v)) for (a, b), v in zip(pairs, vals))
    return IsingSpec(
        n_spins=n_spins, couplings=couplings, label=f"ising{n_spins}", seed=seed
    )


def realize_ising(spec: IsingSpec) -> np.ndarray:
    """Dense realization ``H = (1/sqrt(N)) sum_{i<j} J_ij Z_i Z_j`` (Z-diagonal)."""
    n = spec.n_spins
    dim = 1 << n
    states = np.arange(dim)
    # z_i = +1 for bit 0; qubit 1 is the leftmost tensor factor
    z = 1.0 - 2.0 * ((states[:, None] >> (n - np.arange(1, n + 1))) & 1)
    diag = np.zeros(dim)
    for a, b, val in spec.couplings:
        diag += val * z[:, a - 1] * z[:, b - 1]
    diag /= math.sqrt(n)
    return np.diag(diag.astype(complex))
