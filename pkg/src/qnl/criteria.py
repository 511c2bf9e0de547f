"""Entanglement verdicts, critical-parameter solvers, and surface scans.

The detection rule: a state is flagged entangled when the weighted squared
norm of its correlation tensor exceeds the weighted spectral norm,
norm_sq > spectral_norm + tol.  The rule is sufficient only; a false
verdict means "not detected".

Solvers sweep the noise-free fraction p in [0, 1] (p = v for mixing
channels, p = 1 - r for Kraus channels).  Closed-form margin curves exist
for every channel on Schmidt inputs; anything else falls back to building
the state and taking traces.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channels import ChannelKind, ChannelSpec, channel_output
from .errors import (
    NoDetectionInRange,
    NonMonotonic,
    QnlError,
    UnsupportedChannel,
)
from .gellmann import bloch_vector, gellmann_basis
from .linalg import largest_singular_value
from .states import SchmidtState, max_entangled, qutrit_family
from .tensor import (
    CorrelationTensor,
    Metric,
    c_factor,
    colored_metric,
    correlation_tensor,
    damping_metric,
    identity_metric,
    norm_sq,
    schmidt_correlation_tensor,
    spectral_norm,
)

VERDICT_TOL = 1e-10
BISECTION_WIDTH = 1e-8
BISECTION_MAX_ITER = 60
GRID_POINTS = 100


@dataclass(frozen=True)
class CriterionVerdict:
    spectral_norm: float
    norm_sq: float
    margin: float
    entangled: bool


@dataclass(frozen=True)
class CriticalResult:
    parameter_name: str  # "v" or "p"
    value: float
    method: str          # "analytic" or "bisection"
    channel: ChannelKind
    state: str           # human-readable descriptor


def describe_state(psi: SchmidtState) -> str:
    if psi.is_max_entangled(1e-12):
        return f"max-entangled d={psi.d}"
    cs = ", ".join(f"{c:.6f}" for c in psi.coeffs)
    return f"schmidt d={psi.d} coeffs=({cs})"


def is_entangled(t: CorrelationTensor, g: Metric | None = None) -> CriterionVerdict:
    if g is None:
        g = identity_metric(t.d)
    l = spectral_norm(t, g)
    n = norm_sq(t, g)
    margin = n - l
    return CriterionVerdict(spectral_norm=l, norm_sq=n, margin=margin,
                            entangled=margin > VERDICT_TOL)


def default_metric(kind: ChannelKind, d: int, p: float) -> Metric:
    """The metric the analysis pairs with each channel."""
    if kind is ChannelKind.COLORED:
        return colored_metric(d, p)
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        return damping_metric(d)
    return identity_metric(d)


class MarginCurve:
    """Weighted tensor scalars of a noisy state as functions of p."""

    def __init__(self, psi: SchmidtState, kind: ChannelKind,
                 g: Metric | None = None):
        self.psi = psi
        self.kind = kind
        self.d = psi.d
        self.metric_is_default = g is None
        self.g = g
        self._setup()

    def _metric(self, p: float) -> Metric:
        if self.metric_is_default:
            return default_metric(self.kind, self.d, p)
        return self.g

    def _setup(self):
        d = self.d
        kind = self.kind
        self._mode = "generic"
        if kind in (ChannelKind.WHITE, ChannelKind.DEPOLARIZING,
                    ChannelKind.PRODUCT):
            t0 = schmidt_correlation_tensor(self.psi)
            self._t0 = t0
            if kind is ChannelKind.PRODUCT:
                basis = gellmann_basis(d)
                r = bloch_vector(np.diag(self.psi.coeffs ** 2).astype(complex),
                                 basis)
                self._tprod = c_factor(d) * np.outer(r, r)
                self._mode = "product"
            else:
                g = self._metric(1.0)
                self._l0 = spectral_norm(t0, g)
                self._n0 = norm_sq(t0, g)
                self._mode = "scaling"
                # tensor scales as p (white) or p^2 (local depolarizing)
                self._power = 1 if kind is ChannelKind.WHITE else 2
        elif kind is ChannelKind.COLORED:
            if not self.psi.is_max_entangled(1e-9):
                raise UnsupportedChannel(
                    "colored noise is defined only for the max-entangled input")
            n = d * d - 1
            tmes = np.full(n, 1.0 / (d - 1.0))
            half = d * (d - 1) // 2
            tmes[half: 2 * half] *= -1.0
            tlast = np.zeros(n)
            tlast[-1] = 1.0
            self._tmes_diag = tmes
            self._tlast_diag = tlast
            self._mode = "colored"
        elif kind is ChannelKind.AMPLITUDE_DAMPING and self._damping_ok():
            c = self.psi.coeffs
            pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
            self._pair_vals = np.array(
                [2.0 * c[j] * c[k] * c_factor(d) for j, k in pairs])
            # tensor entries scale as p for pairs touching the ground level,
            # p^2 otherwise (both subsystems damped)
            self._pair_pow = np.array(
                [1.0 if j == 0 else 2.0 for j, _ in pairs])
            self._mode = "damping"

    def _damping_ok(self) -> bool:
        # closed path needs the metric to ignore the diagonal-generator
        # block, where damping acts affinely
        g = self._metric(0.5)
        return bool(np.all(g.g[self.d * (self.d - 1):] == 0.0))

    def scalars(self, p: float) -> tuple[float, float]:
        """(spectral_norm, norm_sq) at noise-free fraction p."""
        if self._mode == "scaling":
            s = p ** self._power
            return s * self._l0, s * s * self._n0
        if self._mode == "product":
            g = self._metric(p)
            t = p * self._t0.t + (1.0 - p) * self._tprod
            return largest_singular_value(t * g.g[None, :]), \
                float(np.sum(g.g[None, :] * t * t))
        if self._mode == "colored":
            g = self._metric(p)
            diag = p * self._tmes_diag + (1.0 - p) * self._tlast_diag
            wd = diag * g.g
            return float(np.max(np.abs(wd))), float(np.sum(g.g * diag * diag))
        if self._mode == "damping":
            g = self._metric(p)
            half = self.d * (self.d - 1) // 2
            gs = g.g[:half]
            ga = g.g[half: 2 * half]
            vals = self._pair_vals * p ** self._pair_pow
            l = float(np.max(np.abs(vals) * np.maximum(gs, ga))) \
                if half else 0.0
            n = float(np.sum((gs + ga) * vals * vals))
            return l, n
        spec = ChannelSpec.from_noise_free_fraction(self.kind, p)
        t = correlation_tensor(channel_output(self.psi, spec))
        g = self._metric(p)
        return spectral_norm(t, g), norm_sq(t, g)

    def margin(self, p: float) -> float:
        l, n = self.scalars(p)
        return n - l

    def entangled(self, p: float) -> bool:
        return self.margin(p) > VERDICT_TOL

    def norm_at(self, p: float) -> float:
        return self.scalars(p)[1]


def _verdict_grid_check(curve: MarginCurve, points: int) -> None:
    flags = [curve.entangled(p) for p in np.linspace(0.0, 1.0, points)]
    switches = sum(1 for a, b in zip(flags, flags[1:]) if a != b)
    if switches > 1:
        raise NonMonotonic(
            "detection verdict switches more than once over the sweep")


def critical_bisection(state: SchmidtState, kind: ChannelKind,
                       g: Metric | None = None,
                       grid_points: int = GRID_POINTS) -> CriticalResult:
    curve = MarginCurve(state, kind, g)
    if not curve.entangled(1.0):
        raise NoDetectionInRange(
            "criterion does not fire anywhere in the strength range")
    if curve.entangled(0.0):
        raise NoDetectionInRange(
            "criterion fires at zero noise-free fraction; nothing to bracket")
    lo, hi = 0.0, 1.0
    for _ in range(BISECTION_MAX_ITER):
        if hi - lo <= BISECTION_WIDTH:
            break
        mid = 0.5 * (lo + hi)
        if curve.entangled(mid):
            hi = mid
        else:
            lo = mid
    _verdict_grid_check(curve, grid_points)
    return CriticalResult(parameter_name=kind.parameter_name,
                          value=0.5 * (lo + hi), method="bisection",
                          channel=kind, state=describe_state(state))


def critical_analytic(d: int, kind: ChannelKind) -> CriticalResult:
    """Closed-form critical noise-free fraction for the max-entangled state."""
    if kind is ChannelKind.WHITE:
        value = 1.0 / (d + 1.0)
    elif kind is ChannelKind.DEPOLARIZING:
        value = (d + 1.0) ** -0.5
    elif kind is ChannelKind.AMPLITUDE_DAMPING:
        value = _damping_cubic_root(d)
    else:
        raise UnsupportedChannel(
            f"no single closed form for channel {kind.value}")
    return CriticalResult(parameter_name=kind.parameter_name, value=value,
                          method="analytic", channel=kind,
                          state=f"max-entangled d={d}")


def _damping_cubic_root(d: int) -> float:
    """Real root in (0,1) of (d-2) p^3 + 2 p = 1."""
    if d == 2:
        return 0.5
    a = 2.0 ** 5 / (27.0 * (d - 2.0))
    b = (1.0 + np.sqrt(1.0 + a)) ** (1.0 / 3.0)
    root = (1.0 / (2.0 * (d - 2.0))) ** (1.0 / 3.0) \
        * (1.0 - a ** (1.0 / 3.0) / (b * b)) * b
    # radical form cross-checked against direct cubic solving
    poly = np.roots([d - 2.0, 0.0, 2.0, -1.0])
    real = [x.real for x in poly
            if abs(x.imag) < 1e-9 and 0.0 < x.real < 1.0]
    if len(real) != 1 or abs(real[0] - root) > 1e-9:
        raise QnlError("cubic root cross-check failed")
    return float(root)


def colored_always_entangled(d: int, v_samples) -> bool:
    """Criterion fires at every sample; closed forms must agree to 1e-8."""
    psi = max_entangled(d)
    curve = MarginCurve(psi, ChannelKind.COLORED)
    ok = True
    for v in v_samples:
        if not (0.0 < v <= 1.0):
            raise ValueError("samples must lie in (0, 1]")
        l, n = curve.scalars(v)
        l_closed = v * (1.0 - v * (d - 2.0) / (d - 1.0))
        n_closed = v * (1.0 + v * (-6.0 + 6.0 * d - d * d
                                   + v * (d - 2.0) ** 2) / (d - 1.0) ** 2)
        if abs(l - l_closed) > 1e-8 or abs(n - n_closed) > 1e-8:
            ok = False
        if not n - l > VERDICT_TOL:
            ok = False
    return ok


def xi(state: SchmidtState, kind: ChannelKind, p_crit: float,
       g: Metric | None = None) -> float:
    """Surviving correlation fraction sqrt(norm(p_crit)/norm(1)), capped at 1."""
    if g is None and kind is ChannelKind.COLORED:
        g = colored_metric(state.d, p_crit)
    curve = MarginCurve(state, kind, g)
    n1 = curve.norm_at(1.0)
    if n1 <= 0.0:
        return 1.0
    return float(min(np.sqrt(curve.norm_at(p_crit) / n1), 1.0))


@dataclass(frozen=True)
class SurfaceScan:
    kind: ChannelKind
    quantity: str  # "crit" or "xi"
    alphas: np.ndarray = field(repr=False)
    betas: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)  # (len(alphas), len(betas))
    flags: np.ndarray = field(repr=False)   # True where never detected

    def minimum(self) -> tuple[float, float, float]:
        """(alpha, beta, value) of the smallest unflagged cell."""
        masked = np.where(self.flags, np.inf, self.values)
        i, j = np.unravel_index(np.argmin(masked), masked.shape)
        return float(self.alphas[i]), float(self.betas[j]), \
            float(self.values[i, j])


def _cell_critical(curve: MarginCurve) -> tuple[float, bool]:
    """(critical p, never-fired flag) for one scan cell."""
    if curve._mode == "scaling":
        if curve._n0 <= 0.0 or curve._l0 >= curve._n0 - VERDICT_TOL:
            return 1.0, True
        return (curve._l0 / curve._n0) ** (1.0 / curve._power), False
    if not curve.entangled(1.0):
        return 1.0, True
    lo, hi = 0.0, 1.0
    for _ in range(BISECTION_MAX_ITER):
        if hi - lo <= BISECTION_WIDTH:
            break
        mid = 0.5 * (lo + hi)
        if curve.entangled(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi), False


def worker_count() -> int:
    cap = os.environ.get("QNL_THREADS", "")
    if cap.strip():
        return max(1, int(cap))
    return min(os.cpu_count() or 1, 8)


def scan_surface(kind: ChannelKind, alpha_grid=None, beta_grid=None,
                 quantity: str = "crit",
                 g: Metric | None = None) -> SurfaceScan:
    """Critical parameter (or xi) over the two-angle qutrit family."""
    if quantity not in ("crit", "xi"):
        raise ValueError(f"unknown scan quantity {quantity!r}")
    alphas = np.linspace(0.0, np.pi / 2.0, 101) if alpha_grid is None \
        else np.asarray(alpha_grid, dtype=float)
    betas = np.linspace(0.0, np.pi / 2.0, 101) if beta_grid is None \
        else np.asarray(beta_grid, dtype=float)
    values = np.empty((len(alphas), len(betas)))
    flags = np.zeros((len(alphas), len(betas)), dtype=bool)

    def run_row(i: int):
        a = alphas[i]
        for j, b in enumerate(betas):
            curve = MarginCurve(qutrit_family(a, b), kind, g)
            crit, flagged = _cell_critical(curve)
            if quantity == "xi" and not flagged:
                n1 = curve.norm_at(1.0)
                crit = float(min(np.sqrt(curve.norm_at(crit) / n1), 1.0)) \
                    if n1 > 0 else 1.0
            values[i, j] = 1.0 if flagged else crit
            flags[i, j] = flagged

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        list(pool.map(run_row, range(len(alphas))))
    return SurfaceScan(kind=kind, quantity=quantity, alphas=alphas,
                       betas=betas, values=values, flags=flags)
