"""Correlation tensor of a qudit pair and metric-weighted scalars.

T_ij = c(d) Tr[rho (B_i (x) B_j)] over the generator basis, with
c(d) = d / (2(d-1)).  Index layout follows the basis ordering: the first
d(d-1) indices are the off-diagonal (symmetric then antisymmetric)
generators, the last d-1 the diagonal ones.  For states diagonal in a
product of Schmidt bases the tensor splits into an off-diagonal block
(diagonal matrix) and a diagonal-generator block, with zero cross terms.

A Metric is a nonnegative weight per generator index.  Weighted scalars
apply the weight over the tensor's second index: the weighted squared
norm is sum_ij g_j T_ij^2 and the weighted spectral norm is
sigma_max(T_ij g_j).  For every metric actually used (identity, colored,
damping) the relevant tensors are diagonal, where this reduces to the
obvious per-entry weighting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotHermitian
from .gellmann import GellMannBasis, check_dimension, gellmann_basis
from .linalg import largest_singular_value
from .states import SchmidtState, TwoQuditState

IMAG_RESIDUE_TOL = 1e-8


def c_factor(d: int) -> float:
    return d / (2.0 * (d - 1.0))


@dataclass(frozen=True)
class CorrelationTensor:
    d: int
    t: np.ndarray = field(repr=False)  # (d^2-1, d^2-1) real
    basis_convention: str = "sym-antisym-diag"

    def __post_init__(self):
        n = self.d * self.d - 1
        if self.t.shape != (n, n):
            raise DimensionMismatch(
                f"tensor shape {self.t.shape} does not match d={self.d}")
        self.t.setflags(write=False)


@dataclass(frozen=True)
class Metric:
    d: int
    g: np.ndarray = field(repr=False)  # (d^2-1,) nonnegative

    def __post_init__(self):
        n = self.d * self.d - 1
        if self.g.shape != (n,):
            raise DimensionMismatch(
                f"metric shape {self.g.shape} does not match d={self.d}")
        if np.any(self.g < 0):
            raise ValueError("metric weights must be nonnegative")
        self.g.setflags(write=False)


def identity_metric(d: int) -> Metric:
    d = check_dimension(d)
    return Metric(d=d, g=np.ones(d * d - 1))


def colored_metric(d: int, v: float) -> Metric:
    """Unit weights except the last diagonal-generator index, weighted v."""
    d = check_dimension(d)
    g = np.ones(d * d - 1)
    g[-1] = v
    return Metric(d=d, g=g)


def damping_metric(d: int) -> Metric:
    """Unit weight on the off-diagonal generators, zero on the diagonal ones."""
    d = check_dimension(d)
    g = np.zeros(d * d - 1)
    g[: d * (d - 1)] = 1.0
    return Metric(d=d, g=g)


def correlation_tensor(rho: TwoQuditState,
                       basis: GellMannBasis | None = None) -> CorrelationTensor:
    d = rho.d
    if basis is None:
        basis = gellmann_basis(d)
    if basis.d != d:
        raise DimensionMismatch(f"basis d={basis.d} vs state d={d}")
    m = basis.matrices
    r4 = rho.rho.reshape(d, d, d, d)
    z = np.einsum("abcd,ica->ibd", r4, m)
    t = np.einsum("ibd,jdb->ij", z, m) * c_factor(d)
    if np.max(np.abs(t.imag)) > IMAG_RESIDUE_TOL:
        raise NotHermitian("correlation tensor has imaginary residue")
    return CorrelationTensor(d=d, t=t.real.copy())


def schmidt_correlation_tensor(psi: SchmidtState) -> CorrelationTensor:
    """Closed form for pure Schmidt states, no density matrix involved.

    Off-diagonal block: diagonal, entries +-2 c_j c_k c(d) (symmetric +,
    antisymmetric -).  Diagonal-generator block entries, 1-based level
    indices i <= j:

      same index   (2/(i(i+1))) (sum_{n<i} c_n^2 + i^2 c_i^2) c(d)
      i < j        (2/sqrt(i j (i+1)(j+1))) (sum_{n<i} c_n^2 - i c_i^2) c(d)

    and the block is symmetric.  Cross terms vanish.
    """
    d = psi.d
    n = d * d - 1
    c = psi.coeffs
    cf = c_factor(d)
    t = np.zeros((n, n))
    npairs = d * (d - 1) // 2
    idx = 0
    for j in range(d):
        for k in range(j + 1, d):
            val = 2.0 * c[j] * c[k] * cf
            t[idx, idx] = val                      # symmetric generator
            t[npairs + idx, npairs + idx] = -val   # antisymmetric generator
            idx += 1
    base = d * (d - 1)
    csq = c * c
    for i in range(1, d):
        head = float(np.sum(csq[:i]))
        t[base + i - 1, base + i - 1] = \
            (2.0 / (i * (i + 1))) * (head + i * i * csq[i]) * cf
        for j in range(i + 1, d):
            off = (2.0 / np.sqrt(i * j * (i + 1) * (j + 1))) \
                * (head - i * csq[i]) * cf
            t[base + i - 1, base + j - 1] = off
            t[base + j - 1, base + i - 1] = off
    return CorrelationTensor(d=d, t=t)


def _check_pair(t: CorrelationTensor, g: Metric) -> None:
    if t.d != g.d:
        raise DimensionMismatch(f"tensor d={t.d} vs metric d={g.d}")


def norm_sq(t: CorrelationTensor, g: Metric) -> float:
    """Weighted squared norm sum_ij g_j T_ij^2."""
    _check_pair(t, g)
    return float(np.sum((t.t * t.t) * g.g[None, :]))


def spectral_norm(t: CorrelationTensor, g: Metric) -> float:
    """Largest singular value of the weighted tensor T_ij g_j."""
    _check_pair(t, g)
    return largest_singular_value(t.t * g.g[None, :])
