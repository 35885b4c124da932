"""Exact simulator and verification suite for quantum symmetric PIR under
colluding, communicating, eavesdropping, unresponsive and Byzantine servers.

Public surface: field/codes primitives, the transfer-box channel model, the
regime planner, the protocol round runner, threat injection, the Byzantine
corrector, the exact privacy audits and the achievable-rate calculator.
"""

from .plan import Model, RegimePlan, SchemeConfig, plan_regime, rate_of
from .rates import RatePoint, sweep, theorem_rate

__version__ = "0.1.0"

__all__ = [
    "Model", "RegimePlan", "SchemeConfig", "plan_regime", "rate_of",
    "RatePoint", "sweep", "theorem_rate", "__version__",
]
