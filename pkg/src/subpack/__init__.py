"""Repair-efficient MDS codes: trace-repair Reed-Solomon codes and an
optimal-update array code, with bandwidth audits against their bounds."""

from .digits import CodeParams
from .errors import SubpackError

__version__ = "0.1.0"
__all__ = ["CodeParams", "SubpackError", "__version__"]
