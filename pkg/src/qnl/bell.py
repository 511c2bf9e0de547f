"""Two-setting d-outcome Bell test: standard settings, the inequality value,
damping closed forms, critical parameters, large-d limit, and a best-effort
settings optimizer.

Conventions.  Settings are indexed 0 and 1 per party.  The A-side outcome
vectors are Fourier modes with phase offsets (0, 1/2), the B-side with
(1/4, -1/4) and conjugated outcome phase.  The local-realism bound is 2.

Modular coincidence sums read the equality literally:

    P(A_s = B_t + k) = sum_n P(A_s = n + k mod d, B_t = n)
    P(B_t = A_s + k) = sum_n P(A_s = n, B_t = n + k mod d)

With these settings the joint probability depends on the outcomes only
through a - b, which makes each sum d times any one of its terms; a
property test pins that shortcut.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import expm, logm
from scipy.optimize import minimize

from .channels import (
    ChannelKind,
    amplitude_damping_kraus,
    apply_local_channel,
)
from .criteria import CriticalResult, describe_state
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NonMonotonic,
    NoViolation,
    UnsupportedChannel,
)
from .gellmann import check_dimension, gellmann_basis
from .states import SchmidtState, TwoQuditState, to_density

LOCAL_BOUND = 2.0
ALPHA_PHASES = (0.0, 0.5)
BETA_PHASES = (0.25, -0.25)
LR_BISECTION_WIDTH = 1e-8
LR_GRID_POINTS = 200
ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class MeasurementSettings:
    """Outcome vectors per (party, setting): arrays (2, d, d), [setting,
    outcome, component]."""

    d: int
    a_vectors: np.ndarray = field(repr=False)
    b_vectors: np.ndarray = field(repr=False)

    def __post_init__(self):
        for v in (self.a_vectors, self.b_vectors):
            if v.shape != (2, self.d, self.d):
                raise DimensionMismatch(
                    f"settings shape {v.shape} does not match d={self.d}")
            for s in range(2):
                gram = v[s] @ v[s].conj().T
                if np.max(np.abs(gram - np.eye(self.d))) > ORTHO_TOL:
                    raise DimensionMismatch(
                        "outcome vectors are not orthonormal")
            v.setflags(write=False)

    def projector(self, party: str, setting: int, outcome: int) -> np.ndarray:
        vecs = self.a_vectors if party == "A" else self.b_vectors
        if not (0 <= setting < 2 and 0 <= outcome < self.d):
            raise IndexOutOfRange(
                f"setting {setting} / outcome {outcome} out of range")
        v = vecs[setting, outcome]
        return np.outer(v, v.conj())


@dataclass(frozen=True)
class BellValue:
    i_d: float
    probabilities: np.ndarray = field(repr=False)  # (2, 2, d, d)
    violated: bool = False

    def __post_init__(self):
        self.probabilities.setflags(write=False)


def cglmp_settings(d: int) -> MeasurementSettings:
    d = check_dimension(d)
    j = np.arange(d)
    omega = np.exp(2j * np.pi / d)
    av = np.empty((2, d, d), dtype=complex)
    bv = np.empty((2, d, d), dtype=complex)
    for s, alpha in enumerate(ALPHA_PHASES):
        for a in range(d):
            av[s, a] = omega ** (j * (a + alpha)) / np.sqrt(d)
    for t, beta in enumerate(BETA_PHASES):
        for b in range(d):
            bv[t, b] = omega ** (j * (-b + beta)) / np.sqrt(d)
    return MeasurementSettings(d=d, a_vectors=av, b_vectors=bv)


def joint_probability(rho: TwoQuditState, s: int, t: int, a: int, b: int,
                      m: MeasurementSettings | None = None) -> float:
    if m is None:
        m = cglmp_settings(rho.d)
    if rho.d != m.d:
        raise DimensionMismatch(f"state d={rho.d} vs settings d={m.d}")
    if not (0 <= s < 2 and 0 <= t < 2):
        raise IndexOutOfRange("setting index must be 0 or 1")
    if not (0 <= a < rho.d and 0 <= b < rho.d):
        raise IndexOutOfRange("outcome index out of range")
    u = np.kron(m.a_vectors[s, a], m.b_vectors[t, b])
    return float(np.real(u.conj() @ rho.rho @ u))


def probability_table(rho: TwoQuditState,
                      m: MeasurementSettings | None = None) -> np.ndarray:
    """All joint probabilities, shape (2, 2, d, d) indexed [s, t, a, b]."""
    if m is None:
        m = cglmp_settings(rho.d)
    if rho.d != m.d:
        raise DimensionMismatch(f"state d={rho.d} vs settings d={m.d}")
    d = rho.d
    r4 = rho.rho.reshape(d, d, d, d)
    out = np.empty((2, 2, d, d))
    for s in range(2):
        for t in range(2):
            p = np.einsum("ai,bj,ijkl,ak,bl->ab",
                          m.a_vectors[s].conj(), m.b_vectors[t].conj(),
                          r4, m.a_vectors[s], m.b_vectors[t],
                          optimize=True)
            out[s, t] = p.real
    return out


def _sum_a_eq_b_plus(p: np.ndarray, k: int) -> float:
    """P(A = B + k) from one setting pair's d x d table."""
    d = p.shape[0]
    n = np.arange(d)
    return float(np.sum(p[(n + k) % d, n]))


def _sum_b_eq_a_plus(p: np.ndarray, k: int) -> float:
    d = p.shape[0]
    n = np.arange(d)
    return float(np.sum(p[n, (n + k) % d]))


def _inequality_value(table: np.ndarray) -> float:
    d = table.shape[2]
    p11, p12 = table[0, 0], table[0, 1]
    p21, p22 = table[1, 0], table[1, 1]

    def constituent(k: int) -> float:
        return (_sum_a_eq_b_plus(p11, k)
                + _sum_b_eq_a_plus(p21, k + 1)
                + _sum_a_eq_b_plus(p22, k)
                + _sum_b_eq_a_plus(p12, k))

    total = 0.0
    for k in range(d // 2):
        weight = 1.0 - 2.0 * k / (d - 1.0)
        total += weight * (constituent(k) - constituent(-(k + 1)))
    return total


def cglmp_value(rho: TwoQuditState,
                m: MeasurementSettings | None = None) -> BellValue:
    table = probability_table(rho, m)
    value = _inequality_value(table)
    return BellValue(i_d=value, probabilities=table,
                     violated=value > LOCAL_BOUND)


def ad_joint_probability_closed_form(d: int, r: float, s: int, t: int,
                                     a: int, b: int) -> float:
    """Joint probability for the damped max-entangled state, no Born rule.

    Valid because the phase offsets keep gamma = a - b + alpha_s + beta_t
    away from integer multiples of d.
    """
    d = check_dimension(d)
    gamma = a - b + ALPHA_PHASES[s] + BETA_PHASES[t]
    x = np.pi * gamma / d
    kernel = ((1.0 - r) * np.sin((d - 1.0) * x) ** 2 / np.sin(x) ** 2
              + np.sin((2.0 * d - 1.0) * x) / np.sin(x) - 1.0)
    return float((1.0 - (d - 1.0) * (r - 2.0) * r) / d ** 3
                 + (1.0 - r) / d ** 3 * kernel)


def ad_probability_table(d: int, r: float) -> np.ndarray:
    out = np.empty((2, 2, d, d))
    for s in range(2):
        for t in range(2):
            for a in range(d):
                for b in range(d):
                    out[s, t, a, b] = \
                        ad_joint_probability_closed_form(d, r, s, t, a, b)
    return out


def cglmp_ad_value(d: int, r: float) -> BellValue:
    """Inequality value for the damped max-entangled state, closed form."""
    table = ad_probability_table(d, r)
    value = _inequality_value(table)
    return BellValue(i_d=value, probabilities=table,
                     violated=value > LOCAL_BOUND)


@lru_cache(maxsize=1)
def catalan_constant() -> float:
    """Sum (-1)^k / (2k+1)^2 by direct series, error below 1e-12."""
    k = np.arange(300_000, dtype=float)
    return float(np.sum(1.0 / (4.0 * k + 1.0) ** 2
                        - 1.0 / (4.0 * k + 3.0) ** 2))


def cglmp_ad_infinite(r: float) -> float:
    """Large-d limit of the damped max-entangled inequality value."""
    return (1.0 - r) ** 2 * 32.0 * catalan_constant() / np.pi ** 2


def infinite_threshold() -> float:
    """Noise-free fraction where the large-d value crosses the bound."""
    return float(np.pi / (4.0 * np.sqrt(catalan_constant())))


def _ad_value_of_p(state: SchmidtState):
    """I(p) evaluator for the damped state, closed form when max-entangled."""
    d = state.d
    if state.is_max_entangled(1e-12):
        return lambda p: cglmp_ad_value(d, 1.0 - p).i_d
    rho0 = to_density(state)
    m = cglmp_settings(d)

    def value(p: float) -> float:
        damped = apply_local_channel(rho0, amplitude_damping_kraus(d, 1.0 - p))
        return cglmp_value(damped, m).i_d
    return value


def critical_lr(state: SchmidtState, kind: ChannelKind) -> CriticalResult:
    """Smallest noise-free fraction at which the inequality is violated."""
    d = state.d
    if kind in (ChannelKind.WHITE, ChannelKind.DEPOLARIZING):
        pure_value = cglmp_value(to_density(state)).i_d
        if pure_value <= LOCAL_BOUND:
            raise NoViolation(
                f"inequality value {pure_value:.6f} never exceeds the bound")
        ratio = LOCAL_BOUND / pure_value
        value = ratio if kind is ChannelKind.WHITE else np.sqrt(ratio)
        return CriticalResult(parameter_name=kind.parameter_name,
                              value=float(value), method="analytic",
                              channel=kind, state=describe_state(state))
    if kind is not ChannelKind.AMPLITUDE_DAMPING:
        raise UnsupportedChannel(
            f"no local-realism threshold defined for channel {kind.value}")
    value_of_p = _ad_value_of_p(state)
    grid = np.linspace(0.0, 1.0, LR_GRID_POINTS)
    vals = np.array([value_of_p(p) for p in grid])
    if np.any(np.diff(vals) < -1e-9):
        raise NonMonotonic("inequality value is not monotone in p")
    if vals[-1] <= LOCAL_BOUND:
        raise NoViolation(
            f"inequality value {vals[-1]:.6f} never exceeds the bound")
    lo, hi = 0.0, 1.0
    while hi - lo > LR_BISECTION_WIDTH:
        mid = 0.5 * (lo + hi)
        if value_of_p(mid) > LOCAL_BOUND:
            hi = mid
        else:
            lo = mid
    return CriticalResult(parameter_name="p", value=0.5 * (lo + hi),
                          method="bisection", channel=kind,
                          state=describe_state(state))


def _rotated_settings(base: MeasurementSettings,
                      thetas: np.ndarray, mats: np.ndarray) -> MeasurementSettings:
    """Conjugate each (party, setting) basis by exp(i sum theta_a B_a)."""
    d = base.d
    av = np.empty_like(base.a_vectors)
    bv = np.empty_like(base.b_vectors)
    for s in range(2):
        ua = expm(1j * np.einsum("a,aij->ij", thetas[s], mats))
        ub = expm(1j * np.einsum("a,aij->ij", thetas[2 + s], mats))
        av[s] = base.a_vectors[s] @ ua.T
        bv[s] = base.b_vectors[s] @ ub.T
    return MeasurementSettings(d=d, a_vectors=av, b_vectors=bv)


def _qubit_block_thetas(d: int, mats: np.ndarray) -> np.ndarray:
    """Start point embedding the d=2 standard settings on levels {0, 1},
    measuring higher levels directly."""
    std = cglmp_settings(d)
    two = cglmp_settings(2)
    thetas = np.zeros((4, d * d - 1))
    for slot in range(4):
        party, s = divmod(slot, 2)
        base = std.a_vectors[s] if party == 0 else std.b_vectors[s]
        small = two.a_vectors[s] if party == 0 else two.b_vectors[s]
        target = np.eye(d, dtype=complex)
        target[:2, :2] = small
        u = target.T @ base.conj()  # unitary sending each base row to its target row
        h = -1j * logm(u)
        h -= np.trace(h) / d * np.eye(d)
        h = 0.5 * (h + h.conj().T)
        thetas[slot] = 0.5 * np.einsum("aij,ji->a", mats, h).real
    return thetas


def optimize_settings(rho: TwoQuditState, restarts: int = 4,
                      seed: int = 0, maxfev: int = 500) -> BellValue:
    """Best-effort maximization of the inequality over rotated settings.

    Two deterministic polish runs always happen (from the standard
    settings and from a two-level embedding of the qubit settings);
    restarts adds that many random starting points on top.  Never
    returns less than the standard-settings value; deterministic for a
    fixed seed.
    """
    d = rho.d
    base = cglmp_settings(d)
    mats = gellmann_basis(d).matrices
    n = d * d - 1

    def value_at(thetas: np.ndarray) -> float:
        m = _rotated_settings(base, thetas.reshape(4, n), mats)
        return cglmp_value(rho, m).i_d

    best_thetas = np.zeros((4, n))
    best = value_at(best_thetas)
    starts = [np.zeros((4, n))]
    try:
        starts.append(_qubit_block_thetas(d, mats))
    except Exception:
        pass  # qubit embedding can fail for exotic logm branches; optional
    rng = np.random.default_rng(seed)
    for _ in range(max(restarts, 0)):
        starts.append(rng.normal(scale=0.4, size=(4, n)))
    for start in starts:
        res = minimize(lambda x: -value_at(x), start.ravel(),
                       method="Powell",
                       options={"maxfev": maxfev, "xtol": 1e-4,
                                "ftol": 1e-8})
        if -res.fun > best:
            best = -res.fun
            best_thetas = res.x.reshape(4, n)
    m = _rotated_settings(base, best_thetas, mats)
    table = probability_table(rho, m)
    value = max(_inequality_value(table), best)
    return BellValue(i_d=value, probabilities=table,
                     violated=value > LOCAL_BOUND)
