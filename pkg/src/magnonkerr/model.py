"""Physical parameters and the linearized drift/diffusion matrices.

All rates and detunings are expressed in units of the mechanical frequency
``omega_b``.  The absolute angular frequencies (rad/s) are kept separately and
only enter through the thermal occupations.

Quadrature ordering throughout the package is ``(x_a, y_a, x_m, y_m, q, p)``.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import hbar, k as k_B

from .errors import ArgumentError

TWO_PI = 2.0 * math.pi


def thermal_occupation(omega_abs: float, temperature: float) -> float:
    """Bose-Einstein mean occupation of a mode at angular frequency ``omega_abs``.

    Parameters
    ----------
    omega_abs : float
        Angular frequency in rad/s, must be positive.
    temperature : float
        Bath temperature in kelvin, must be nonnegative.

    Returns
    -------
    float
        ``1 / (exp(hbar*omega / (k_B*T)) - 1)``, exactly 0 at ``T = 0``.
    """
    if not omega_abs > 0:
        raise ArgumentError(f"omega_abs must be positive, got {omega_abs!r}")
    if not temperature >= 0:
        raise ArgumentError(f"temperature must be nonnegative, got {temperature!r}")
    if temperature == 0:
        return 0.0
    x = (hbar * omega_abs / k_B) / temperature
    # e^{-x} / (1 - e^{-x}) never overflows, even for very cold baths
    return math.exp(-x) / -math.expm1(-x)


def kerr_strength(K0: float, N_m: float) -> float:
    """Effective two-magnon coefficient ``2 * K0 * N_m``.

    The sign follows ``K0`` and therefore the direction of the bias field.
    """
    if not N_m >= 0:
        raise ArgumentError(f"N_m must be nonnegative, got {N_m!r}")
    return 2.0 * K0 * N_m


@dataclass(frozen=True)
class SystemParams:
    """One configuration of the cavity-magnon-optomechanical system.

    Rates and detunings are in units of ``omega_b``; ``K`` is signed, with
    ``K > 0`` for the bias field along [100] and ``K < 0`` along [110].
    """

    omega_b: float = 1.0
    omega_b_abs: float = TWO_PI * 10e6
    omega_a_abs: float = TWO_PI * 10e9
    omega_m_abs: float = TWO_PI * 10e9
    kappa_a: float = 0.4
    gamma_m: float = 0.4
    gamma_b: float = 1e-5
    g_m: float = 0.5
    g_b: float = 0.5
    K: float = 0.0
    Delta_m: float = -1.0
    Delta_a_tilde: float = 1.0
    temperature: float = 0.010

    def __post_init__(self):
        for name in ("omega_b", "omega_b_abs", "omega_a_abs", "omega_m_abs",
                     "kappa_a", "gamma_m", "gamma_b"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ArgumentError(f"{name} must be positive and finite, got {value!r}")
        for name in ("g_m", "g_b", "temperature"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ArgumentError(f"{name} must be nonnegative and finite, got {value!r}")
        for name in ("K", "Delta_m", "Delta_a_tilde"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ArgumentError(f"{name} must be finite, got {value!r}")

    @property
    def Delta_K(self) -> float:
        """Kerr-induced magnon frequency shift, ``2K``."""
        return 2.0 * self.K

    @property
    def Delta_m_tilde(self) -> float:
        """Effective magnon detuning ``Delta_m + Delta_K``."""
        return self.Delta_m + self.Delta_K

    @property
    def Delta_m_plus(self) -> float:
        return self.Delta_m_tilde + self.Delta_K / 2.0

    @property
    def Delta_m_minus(self) -> float:
        return self.Delta_m_tilde - self.Delta_K / 2.0

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    def occupations(self) -> tuple[float, float, float]:
        """Thermal occupations ``(n_a, n_m, n_b)`` at the bath temperature."""
        T = self.temperature
        return (
            thermal_occupation(self.omega_a_abs, T),
            thermal_occupation(self.omega_m_abs, T),
            thermal_occupation(self.omega_b_abs, T),
        )


def flip_direction(params: SystemParams) -> SystemParams:
    """Reverse the bias-field direction, i.e. ``K -> -K``."""
    return params.replace(K=-params.K)


def build_drift(params: SystemParams) -> np.ndarray:
    """Drift matrix of the linearized quadrature Langevin equations."""
    p = params
    ka, gm, gb = p.kappa_a, p.gamma_m, p.gamma_b
    Da, wb = p.Delta_a_tilde, p.omega_b
    return np.array([
        [-ka, Da, 0.0, p.g_m, 0.0, 0.0],
        [-Da, -ka, -p.g_m, 0.0, p.g_b, 0.0],
        [0.0, p.g_m, -gm, p.Delta_m_minus, 0.0, 0.0],
        [-p.g_m, 0.0, -p.Delta_m_plus, -gm, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, wb],
        [p.g_b, 0.0, 0.0, 0.0, -wb, -gb],
    ])


def build_diffusion(params: SystemParams) -> np.ndarray:
    """Diagonal diffusion matrix of the input noises.

    The position quadrature of the resonator has no noise input, so entry
    ``(4, 4)`` (zero-based) is always exactly zero.
    """
    n_a, n_m, n_b = params.occupations()
    ka, gm = params.kappa_a, params.gamma_m
    return np.diag([
        ka * (2 * n_a + 1),
        ka * (2 * n_a + 1),
        gm * (2 * n_m + 1),
        gm * (2 * n_m + 1),
        0.0,
        params.gamma_b * (2 * n_b + 1),
    ])
