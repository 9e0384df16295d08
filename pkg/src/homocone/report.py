"""Structured results for inequality and identity checks."""

import math
from dataclasses import asdict, dataclass, field


def _finite_or_none(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


@dataclass
class CheckReport:
    """Outcome of evaluating one inequality or identity on one instance.

    ``ratio`` is oriented so that a value of at least 1 means an inequality
    holds; when not given it defaults to ``rhs / lhs``.  For identities
    ``residual`` carries the relative mismatch the pass decision is based on.
    """

    name: str
    lhs: float = math.nan
    rhs: float = math.nan
    ratio: float = math.nan
    residual: float = math.nan
    hypothesis_ok: bool = True
    reasons: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    passed: bool = False
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if math.isnan(self.ratio) and not (math.isnan(self.lhs) or math.isnan(self.rhs)):
            if self.lhs > 0:
                self.ratio = self.rhs / self.lhs
            elif self.lhs == 0 and self.rhs > 0:
                self.ratio = math.inf
        if not self.hypothesis_ok:
            self.passed = False

    @property
    def status(self):
        if not self.hypothesis_ok:
            return "skip"
        return "pass" if self.passed else "FAIL"

    def to_dict(self):
        out = asdict(self)
        for key in ("lhs", "rhs", "ratio", "residual"):
            out[key] = _finite_or_none(out[key])
        out["status"] = self.status
        return out


def skipped(name, reasons, **metadata):
    """Report for an instance whose hypotheses do not hold."""
    return CheckReport(name=name, hypothesis_ok=False, reasons=list(reasons),
                       metadata=metadata)
