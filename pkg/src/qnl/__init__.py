"""Entanglement detection and Bell analysis for noisy two-qudit states.

Correlation-tensor criteria with channel-adapted metrics, CGLMP values
with closed-form amplitude-damping probabilities, critical parameters by
bisection and in closed form, fidelity thresholds, and reproduction of
the summary tables.
"""

from .bell import (BellValue, MeasurementSettings,
                   ad_joint_probability_closed_form, ad_probability_table,
                   catalan_constant, cglmp_ad_infinite, cglmp_ad_value,
                   cglmp_settings, cglmp_value, critical_lr,
                   infinite_threshold, joint_probability, optimize_settings,
                   probability_table)
from .channels import (ChannelKind, ChannelSpec, KrausSet,
                       amplitude_damping_kraus, apply_local_channel,
                       channel_output, colored_noise, depolarizing_kraus,
                       depolarize_pair, product_noise, white_noise)
from .criteria import (CriterionVerdict, CriticalResult, SurfaceScan,
                       colored_always_entangled, critical_analytic,
                       critical_bisection, default_metric, is_entangled,
                       scan_surface, xi)
from .errors import (DimensionMismatch, IndexOutOfRange, InvalidDimension,
                     NegativeCoefficient, NoDetectionInRange, NonMonotonic,
                     NotHermitian, NotNormalizable, NoViolation, QnlError,
                     RankTooLarge, StrengthOutOfRange, UnsupportedChannel)
from .fidelity import (FidelityReport, critical_fidelity, fidelity,
                       werner_gap)
from .gellmann import (GellMannBasis, bloch_vector, from_bloch_vector,
                       gellmann_basis, normalized_bloch_vector)
from .reports import (RunConfig, emit_surface, reproduce_tables,
                      write_tables)
from .states import (SchmidtState, TwoQuditState, max_entangled, nmax_state,
                     qutrit_family, rank_k_state, schmidt_state, to_density)
from .tensor import (CorrelationTensor, Metric, c_factor, colored_metric,
                     correlation_tensor, damping_metric, identity_metric,
                     norm_sq, schmidt_correlation_tensor, spectral_norm)

__version__ = "0.1.0"

__all__ = [
    "BellValue", "MeasurementSettings", "ad_joint_probability_closed_form",
    "ad_probability_table", "catalan_constant", "cglmp_ad_infinite",
    "cglmp_ad_value", "cglmp_settings", "cglmp_value", "critical_lr",
    "infinite_threshold", "joint_probability", "optimize_settings",
    "probability_table",
    "ChannelKind", "ChannelSpec", "KrausSet", "amplitude_damping_kraus",
    "apply_local_channel", "channel_output", "colored_noise",
    "depolarizing_kraus", "depolarize_pair", "product_noise", "white_noise",
    "CriterionVerdict", "CriticalResult", "SurfaceScan",
    "colored_always_entangled", "critical_analytic", "critical_bisection",
    "default_metric", "is_entangled", "scan_surface", "xi",
    "DimensionMismatch", "IndexOutOfRange", "InvalidDimension",
    "NegativeCoefficient", "NoDetectionInRange", "NonMonotonic",
    "NotHermitian", "NotNormalizable", "NoViolation", "QnlError",
    "RankTooLarge", "StrengthOutOfRange", "UnsupportedChannel",
    "FidelityReport", "critical_fidelity", "fidelity", "werner_gap",
    "GellMannBasis", "bloch_vector", "from_bloch_vector", "gellmann_basis",
    "normalized_bloch_vector",
    "RunConfig", "emit_surface", "reproduce_tables", "write_tables",
    "SchmidtState", "TwoQuditState", "max_entangled", "nmax_state",
    "qutrit_family", "rank_k_state", "schmidt_state", "to_density",
    "CorrelationTensor", "Metric", "c_factor", "colored_metric",
    "correlation_tensor", "damping_metric", "identity_metric", "norm_sq",
    "schmidt_correlation_tensor", "spectral_norm",
    "__version__",
]
