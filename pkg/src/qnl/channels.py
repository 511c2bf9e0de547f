"""Noise models mapping pure Schmidt states to two-qudit density matrices.

Two conventions coexist on purpose:

  mixing kinds (white, product, colored) are parametrized by the visibility
  v, the weight of the pure state in the mixture;

  Kraus kinds (local depolarizing, amplitude damping) are parametrized by
  the channel strength r, applied identically to both subsystems.

Either way p = 1 means no noise; for Kraus kinds the noise-free fraction is
p = 1 - r.  Solvers sweep p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    DimensionMismatch,
    StrengthOutOfRange,
    UnsupportedChannel,
)
from .gellmann import check_dimension
from .linalg import kron
from .states import SchmidtState, TwoQuditState, max_entangled, to_density

COMPLETENESS_TOL = 1e-10


class ChannelKind(str, Enum):
    WHITE = "white"
    PRODUCT = "product"
    COLORED = "colored"
    DEPOLARIZING = "depol"
    AMPLITUDE_DAMPING = "ad"

    @property
    def is_kraus(self) -> bool:
        return self in (ChannelKind.DEPOLARIZING,
                        ChannelKind.AMPLITUDE_DAMPING)

    @property
    def parameter_name(self) -> str:
        # name of the noise-free-fraction parameter reported by solvers
        return "p" if self.is_kraus else "v"


def check_strength(x: float) -> float:
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise StrengthOutOfRange(f"strength {x} outside [0, 1]")
    return x


@dataclass(frozen=True)
class ChannelSpec:
    kind: ChannelKind
    strength: float  # v for mixing kinds, r for Kraus kinds

    def __post_init__(self):
        check_strength(self.strength)

    @property
    def noise_free_fraction(self) -> float:
        return 1.0 - self.strength if self.kind.is_kraus else self.strength

    @classmethod
    def from_noise_free_fraction(cls, kind: ChannelKind, p: float) -> "ChannelSpec":
        p = check_strength(p)
        return cls(kind, 1.0 - p if kind.is_kraus else p)

    @classmethod
    def parse(cls, text: str) -> "ChannelSpec":
        """Parse 'white:V' / 'product:V' / 'colored:V' / 'depol:R' / 'ad:R'."""
        name, sep, val = text.partition(":")
        if not sep:
            raise UnsupportedChannel(
                f"channel spec {text!r} needs the form kind:strength")
        try:
            kind = ChannelKind(name)
        except ValueError:
            raise UnsupportedChannel(f"unknown channel kind {name!r}") from None
        try:
            strength = float(val)
        except ValueError:
            raise UnsupportedChannel(
                f"bad strength {val!r} in channel spec {text!r}") from None
        return cls(kind, check_strength(strength))


@dataclass(frozen=True)
class KrausSet:
    d: int
    operators: np.ndarray = field(repr=False)  # (n_ops, d, d) complex

    def __post_init__(self):
        s = np.einsum("kij,kil->jl", self.operators.conj(), self.operators)
        if np.max(np.abs(s - np.eye(self.d))) > COMPLETENESS_TOL:
            raise UnsupportedChannel(
                "Kraus operators do not sum to the identity")
        self.operators.setflags(write=False)

    def apply_single(self, rho: np.ndarray) -> np.ndarray:
        """Channel action on one qudit."""
        return np.einsum("kij,jl,kml->im", self.operators, rho,
                         self.operators.conj())


def white_noise(psi: SchmidtState, v: float) -> TwoQuditState:
    v = check_strength(v)
    d = psi.d
    rho = v * to_density(psi).rho + (1.0 - v) * np.eye(d * d) / (d * d)
    return TwoQuditState(d=d, rho=rho)


def product_noise(psi: SchmidtState, v: float) -> TwoQuditState:
    """Mix with the product of the state's own marginals diag(c^2)."""
    v = check_strength(v)
    d = psi.d
    marg = np.diag(psi.coeffs ** 2).astype(complex)
    rho = v * to_density(psi).rho + (1.0 - v) * kron(marg, marg)
    return TwoQuditState(d=d, rho=rho)


def colored_noise(d: int, v: float) -> TwoQuditState:
    """Max-entangled state mixed with the |d-1,d-1> projector.

    Defined only for the max-entangled input, so the state is fixed by d.
    """
    d = check_dimension(d)
    v = check_strength(v)
    rho = v * to_density(max_entangled(d)).rho
    rho[d * d - 1, d * d - 1] += 1.0 - v
    return TwoQuditState(d=d, rho=rho)


def depolarizing_kraus(d: int, r: float) -> KrausSet:
    """Heisenberg-Weyl realization of rho -> (1-r) rho + (r/d) I."""
    d = check_dimension(d)
    r = check_strength(r)
    shift = np.roll(np.eye(d), 1, axis=0)  # X: |j> -> |j+1>
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))  # Z
    ops = []
    for a in range(d):
        xa = np.linalg.matrix_power(shift, a)
        for b in range(d):
            w = xa @ np.linalg.matrix_power(clock, b)
            if a == 0 and b == 0:
                ops.append(np.sqrt(1.0 - r + r / (d * d)) * w)
            else:
                ops.append(np.sqrt(r / (d * d)) * w)
    return KrausSet(d=d, operators=np.array(ops))


def amplitude_damping_kraus(d: int, r: float) -> KrausSet:
    """Every excited level decays straight to the ground level."""
    d = check_dimension(d)
    r = check_strength(r)
    e0 = np.zeros((d, d), dtype=complex)
    e0[0, 0] = 1.0
    for i in range(1, d):
        e0[i, i] = np.sqrt(1.0 - r)
    ops = [e0]
    for j in range(1, d):
        ej = np.zeros((d, d), dtype=complex)
        ej[0, j] = np.sqrt(r)
        ops.append(ej)
    return KrausSet(d=d, operators=np.array(ops))


def apply_local_channel(rho: TwoQuditState, kraus: KrausSet) -> TwoQuditState:
    """Same single-qudit channel on both subsystems."""
    if rho.d != kraus.d:
        raise DimensionMismatch(
            f"state d={rho.d} vs Kraus d={kraus.d}")
    d = rho.d
    ks = kraus.operators
    r4 = rho.rho.reshape(d, d, d, d)
    # (E_k (x) E_m) rho (E_k (x) E_m)^dagger summed over k, m
    out = np.einsum("kia,mjb,abcd,kec,mfd->ijef", ks, ks, r4,
                    ks.conj(), ks.conj(), optimize=True)
    return TwoQuditState(d=d, rho=out.reshape(d * d, d * d))


def depolarize_pair(rho: TwoQuditState, r: float) -> TwoQuditState:
    """Affine form of the two-sided depolarizing channel (fast path)."""
    r = check_strength(r)
    d = rho.d
    ra = rho.reduced(0)
    rb = rho.reduced(1)
    eye = np.eye(d)
    out = ((1.0 - r) ** 2 * rho.rho
           + (1.0 - r) * (r / d) * kron(ra, eye)
           + (1.0 - r) * (r / d) * kron(eye, rb)
           + (r / d) ** 2 * kron(eye, eye))
    return TwoQuditState(d=d, rho=out)


def channel_output(psi: SchmidtState, spec: ChannelSpec) -> TwoQuditState:
    """Dispatch a channel spec on a pure input state."""
    kind = spec.kind
    if kind is ChannelKind.WHITE:
        return white_noise(psi, spec.strength)
    if kind is ChannelKind.PRODUCT:
        return product_noise(psi, spec.strength)
    if kind is ChannelKind.COLORED:
        if not psi.is_max_entangled(1e-9):
            raise UnsupportedChannel(
                "colored noise is defined only for the max-entangled input")
        return colored_noise(psi.d, spec.strength)
    if kind is ChannelKind.DEPOLARIZING:
        return depolarize_pair(to_density(psi), spec.strength)
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        return apply_local_channel(
            to_density(psi), amplitude_damping_kraus(psi.d, spec.strength))
    raise UnsupportedChannel(str(kind))
