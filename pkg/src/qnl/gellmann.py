"""Traceless Hermitian generator basis for a single qudit.

Ordering convention used everywhere in this package:

  block 1, symmetric:      S_{jk} = |j><k| + |k><j|          for j < k,
                           pairs in lexicographic order
  block 2, antisymmetric:  A_{jk} = -i|j><k| + i|k><j|       same pair order
  block 3, diagonal:       D_l = sqrt(2/(l(l+1))) (sum_{j<l} |j><j| - l|l><l|)
                           for l = 1..d-1

All d^2 - 1 matrices are traceless, Hermitian, and satisfy
Tr(B_i B_j) = 2 delta_ij.  For d=2 this is exactly (sigma_x, sigma_y,
sigma_z).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import IndexOutOfRange, InvalidDimension, NotHermitian

# group tags, in storage order
SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"
DIAGONAL = "diagonal"


def check_dimension(d: int) -> int:
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool) or d < 2:
        raise InvalidDimension(f"dimension must be an integer >= 2, got {d!r}")
    return int(d)


@dataclass(frozen=True)
class GellMannBasis:
    """The d^2-1 generators plus index bookkeeping.

    matrices[i] is the i-th generator; group_of[i] is one of the three group
    tags; pair_of[i] is (j, k) with j < k for the off-diagonal groups and
    (l, l) for the diagonal group.
    """

    d: int
    matrices: np.ndarray = field(repr=False)  # (d^2-1, d, d) complex
    group_of: tuple = field(repr=False)
    pair_of: tuple = field(repr=False)

    @property
    def size(self) -> int:
        return self.d * self.d - 1

    @property
    def off_diagonal_count(self) -> int:
        # symmetric + antisymmetric generators
        return self.d * (self.d - 1)

    def index_of(self, group: str, j: int, k: int) -> int:
        for i in range(self.size):
            if self.group_of[i] == group and self.pair_of[i] == (j, k):
                return i
        raise IndexOutOfRange(f"no generator {group}({j},{k}) for d={self.d}")


@lru_cache(maxsize=32)
def gellmann_basis(d: int) -> GellMannBasis:
    d = check_dimension(d)
    mats = []
    groups = []
    pairs = []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = 1.0
            m[k, j] = 1.0
            mats.append(m)
            groups.append(SYMMETRIC)
            pairs.append((j, k))
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1.0j
            m[k, j] = 1.0j
            mats.append(m)
            groups.append(ANTISYMMETRIC)
            pairs.append((j, k))
    for l in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        for j in range(l):
            m[j, j] = 1.0
        m[l, l] = -l
        m *= np.sqrt(2.0 / (l * (l + 1)))
        mats.append(m)
        groups.append(DIAGONAL)
        pairs.append((l, l))
    arr = np.array(mats)
    arr.setflags(write=False)
    return GellMannBasis(d=d, matrices=arr, group_of=tuple(groups),
                         pair_of=tuple(pairs))


def bloch_vector(rho: np.ndarray, basis: GellMannBasis) -> np.ndarray:
    """Raw components r_i = Tr(rho B_i); real for Hermitian rho."""
    if rho.shape != (basis.d, basis.d):
        raise IndexOutOfRange(
            f"state shape {rho.shape} does not match d={basis.d}")
    comps = np.einsum("aij,ji->a", basis.matrices, rho)
    if np.max(np.abs(comps.imag)) > 1e-8:
        raise NotHermitian("Bloch components have imaginary residue")
    return comps.real


def normalized_bloch_vector(rho: np.ndarray, basis: GellMannBasis) -> np.ndarray:
    """Components scaled so pure states sit on the unit sphere."""
    d = basis.d
    return np.sqrt(d / (2.0 * (d - 1.0))) * bloch_vector(rho, basis)


def from_bloch_vector(r: np.ndarray, basis: GellMannBasis) -> np.ndarray:
    """Reassemble rho = 1/d + (1/2) sum_i r_i B_i from raw components."""
    d = basis.d
    if r.shape != (basis.size,):
        raise IndexOutOfRange(f"expected {basis.size} components, got {r.shape}")
    return np.eye(d) / d + 0.5 * np.einsum("a,aij->ij", r, basis.matrices)
