"""Gaussian entanglement measures on the three-mode steady state.

Mode labels: ``a`` (cavity), ``m`` (magnon), ``b`` (mechanics), occupying
quadrature pairs (0, 1), (2, 3) and (4, 5) of the covariance matrix.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .errors import ArgumentError, NumericalFailure
from .model import SystemParams, build_diffusion, build_drift
from .steady_state import check_stability, lyapunov_residual, solve_lyapunov, symplectic_form

logger = logging.getLogger(__name__)

MONOGAMY_TOL = 1e-9


class ModeLabel(str, enum.Enum):
    a = "a"
    m = "m"
    b = "b"

    @property
    def index(self) -> int:
        return _ORDER.index(self)

    @property
    def quadratures(self) -> tuple[int, int]:
        i = 2 * self.index
        return (i, i + 1)


_ORDER = (ModeLabel.a, ModeLabel.m, ModeLabel.b)
ALL_MODES = frozenset(_ORDER)

ModeSet = Union[str, Iterable[Union[str, ModeLabel]]]
Partition = Union[str, tuple]


def _modes(spec: ModeSet) -> frozenset:
    if isinstance(spec, ModeLabel):
        return frozenset([spec])
    try:
        return frozenset(ModeLabel(s) for s in spec)
    except ValueError as exc:
        raise ArgumentError(f"unknown mode label in {spec!r}") from exc


def _parse_partition(partition: Partition) -> tuple[frozenset, frozenset]:
    if isinstance(partition, str):
        cells = partition.split("|")
        if len(cells) != 2:
            raise ArgumentError(f"partition must look like 'a|mb', got {partition!r}")
    else:
        cells = tuple(partition)
        if len(cells) != 2:
            raise ArgumentError(f"partition must have two cells, got {partition!r}")
    first, second = _modes(cells[0]), _modes(cells[1])
    if not first or not second or first & second:
        raise ArgumentError(f"partition cells must be nonempty and disjoint: {partition!r}")
    return first, second


def reduce_modes(V: np.ndarray, modes: ModeSet) -> np.ndarray:
    """Covariance of a subset of modes (rows/columns of the others deleted)."""
    kept = sorted(_modes(modes), key=lambda m: m.index)
    idx = [q for m in kept for q in m.quadratures]
    return np.asarray(V)[np.ix_(idx, idx)]


def symplectic_eigenvalues(V: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a ``2n x 2n`` covariance matrix, ascending.

    The eigenvalues of ``i Omega V`` come in pairs ``+-nu``; each pair is
    averaged to remove rounding asymmetry.
    """
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
        raise ArgumentError(f"covariance matrix must be square of even size, got {V.shape}")
    n = V.shape[0] // 2
    try:
        ev = np.linalg.eigvals(1j * symplectic_form(n) @ V)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"symplectic spectrum failed: {exc}") from exc
    mags = np.sort(np.abs(ev))
    if not np.all(np.isfinite(mags)):
        raise NumericalFailure("symplectic spectrum has non-finite values")
    return 0.5 * (mags[0::2] + mags[1::2])


def partial_transpose(V: np.ndarray, modes: ModeSet, present: ModeSet = "amb") -> np.ndarray:
    """Partially transpose ``V`` by flipping the momentum sign of ``modes``.

    ``present`` lists the modes that ``V`` describes, in canonical order.
    """
    V = np.asarray(V, dtype=float)
    flip = _modes(modes)
    have = sorted(_modes(present), key=lambda m: m.index)
    if V.shape != (2 * len(have), 2 * len(have)):
        raise ArgumentError(f"V of shape {V.shape} does not match modes {have}")
    if not flip or not flip < set(have):
        raise ArgumentError("partial transpose needs a nonempty proper subset of the present modes")
    signs = np.ones(V.shape[0])
    for pos, mode in enumerate(have):
        if mode in flip:
            signs[2 * pos + 1] = -1.0
    return V * np.outer(signs, signs)


def log_negativity(V: np.ndarray, partition: Partition) -> float:
    """Logarithmic negativity ``max(0, -ln(2 nu_min))`` across ``partition``.

    ``V`` is the full three-mode covariance. A ``1|1`` partition is evaluated
    on the two-mode reduced state, a ``1|2`` partition on the whole state.
    """
    first, second = _parse_partition(partition)
    modes = first | second
    W = reduce_modes(V, modes)
    nu = symplectic_eigenvalues(partial_transpose(W, first, present=modes))[0]
    return max(0.0, -math.log(2.0 * nu))


def contangle(V: np.ndarray, partition: Partition) -> float:
    """Squared logarithmic negativity."""
    return log_negativity(V, partition) ** 2


def residual_contangle(V: np.ndarray, focus: Union[str, ModeLabel]) -> float:
    """``C_{i|jk} - C_{i|j} - C_{i|k}`` for the focus mode ``i``."""
    i = ModeLabel(focus)
    j, k = (m for m in _ORDER if m is not i)
    return (contangle(V, ([i], [j, k]))
            - contangle(V, ([i], [j]))
            - contangle(V, ([i], [k])))


def min_residual_contangle(V: np.ndarray) -> float:
    """Minimum of the three residual contangles.

    Negatives smaller in magnitude than ``MONOGAMY_TOL`` are set to zero;
    larger ones are returned unchanged and logged as monogamy violations.
    """
    r_min = min(residual_contangle(V, m) for m in _ORDER)
    if r_min < 0:
        if r_min > -MONOGAMY_TOL:
            return 0.0
        logger.warning("residual contangle %.3g is below zero beyond tolerance", r_min)
    return r_min


@dataclass(frozen=True)
class EntanglementReport:
    """Entanglement at one parameter point. Measures are ``None`` when unstable."""

    stable: bool
    spectral_abscissa: float
    E_ab: Optional[float] = None
    E_am: Optional[float] = None
    E_mb: Optional[float] = None
    R_min: Optional[float] = None
    residual: Optional[float] = None

    @property
    def monogamy_violation(self) -> bool:
        return self.R_min is not None and self.R_min < 0

    def as_dict(self) -> dict:
        return {
            "stable": self.stable,
            "spectral_abscissa": self.spectral_abscissa,
            "E_ab": self.E_ab,
            "E_am": self.E_am,
            "E_mb": self.E_mb,
            "R_min": self.R_min,
            "lyapunov_residual": self.residual,
        }


def measures(V: np.ndarray) -> dict:
    return {
        "E_ab": log_negativity(V, "a|b"),
        "E_am": log_negativity(V, "a|m"),
        "E_mb": log_negativity(V, "m|b"),
        "R_min": min_residual_contangle(V),
    }


def steady_state_covariance(params: SystemParams) -> np.ndarray:
    return solve_lyapunov(build_drift(params), build_diffusion(params))


def evaluate(params: SystemParams) -> EntanglementReport:
    """Drift -> stability -> Lyapunov -> measures for one signed parameter set."""
    A = build_drift(params)
    verdict = check_stability(A)
    if not verdict.stable:
        return EntanglementReport(stable=False, spectral_abscissa=verdict.spectral_abscissa)
    D = build_diffusion(params)
    V = solve_lyapunov(A, D)
    return EntanglementReport(
        stable=True,
        spectral_abscissa=verdict.spectral_abscissa,
        residual=lyapunov_residual(A, V, D),
        **measures(V),
    )
