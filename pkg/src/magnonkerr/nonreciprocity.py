"""Bidirectional contrast ratios under reversal of the bias field."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .entanglement import EntanglementReport, evaluate
from .errors import ArgumentError
from .model import SystemParams, flip_direction

MEASURES = ("E_ab", "E_am", "E_mb", "R_min")


def contrast_ratio(e_plus: float, e_minus: float) -> float:
    """``|e+ - e-| / (e+ + e-)``, taken as 0 when both vanish."""
    if not (e_plus >= 0 and e_minus >= 0):
        raise ArgumentError(f"contrast ratio needs nonnegative inputs, got {e_plus!r}, {e_minus!r}")
    total = e_plus + e_minus
    if total == 0:
        return 0.0
    return abs(e_plus - e_minus) / total


def _ratio(forward: EntanglementReport, backward: EntanglementReport, name: str) -> Optional[float]:
    x, y = getattr(forward, name), getattr(backward, name)
    if x is None or y is None:
        return None
    # a monogamy-violating residual is not a valid measure; leave the ratio undefined
    if x < 0 or y < 0:
        return None
    return contrast_ratio(x, y)


@dataclass(frozen=True)
class BidirectionalReport:
    """Reports for ``K = +|K|`` (axis [100]) and ``K = -|K|`` (axis [110]).

    A ratio is ``None`` (undefined, not zero) when either direction is unstable.
    """

    forward: EntanglementReport
    backward: EntanglementReport
    C_ab: Optional[float]
    C_am: Optional[float]
    C_mb: Optional[float]
    C_R: Optional[float]

    @property
    def ratios(self) -> dict:
        return {"C_ab": self.C_ab, "C_am": self.C_am, "C_mb": self.C_mb, "C_R": self.C_R}

    def as_dict(self) -> dict:
        return {"forward": self.forward.as_dict(), "backward": self.backward.as_dict(), **self.ratios}


def combine(forward: EntanglementReport, backward: EntanglementReport) -> BidirectionalReport:
    c_ab, c_am, c_mb, c_r = (_ratio(forward, backward, name) for name in MEASURES)
    return BidirectionalReport(forward, backward, c_ab, c_am, c_mb, c_r)


def bidirectional_report(params: SystemParams) -> BidirectionalReport:
    """Evaluate both field directions at ``|params.K|`` and compare them."""
    magnitude = params.replace(K=abs(params.K))
    forward = evaluate(magnitude)
    backward = evaluate(flip_direction(magnitude))
    return combine(forward, backward)
