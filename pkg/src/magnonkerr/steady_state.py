"""Stability of the drift matrix and the steady-state covariance matrix.

The covariance convention is ``V_ij = <u_i u_j + u_j u_i>/2``, so the vacuum
is ``I/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, InstabilityError, NumericalFailure

# abscissae in (-STABILITY_MARGIN, 0] are classified unstable
STABILITY_MARGIN = 1e-12
DIVERGENCE_LIMIT = 1e12


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    spectral_abscissa: float


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form ``diag([[0, 1], [-1, 0]], ...)``."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _check_square(M: np.ndarray, name: str) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ArgumentError(f"{name} must be a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NumericalFailure(f"{name} has non-finite entries")
    return M


def check_stability(A: np.ndarray) -> StabilityVerdict:
    """Classify ``A`` by its spectral abscissa (largest real part of its eigenvalues).

    For this system the Routh-Hurwitz conditions are equivalent to every
    eigenvalue of ``A`` lying strictly in the left half-plane.
    """
    A = _check_square(A, "A")
    try:
        eigenvalues = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigenvalue computation failed: {exc}") from exc
    if not np.all(np.isfinite(eigenvalues)):
        raise NumericalFailure("eigenvalue computation returned non-finite values")
    abscissa = float(np.max(eigenvalues.real))
    return StabilityVerdict(stable=abscissa <= -STABILITY_MARGIN, spectral_abscissa=abscissa)


def lyapunov_residual(A: np.ndarray, V: np.ndarray, D: np.ndarray) -> float:
    """Relative Frobenius residual ``|A V + V A^T + D| / |D|``."""
    R = A @ V + V @ A.T + D
    scale = np.linalg.norm(D)
    if scale == 0:
        return float(np.linalg.norm(R))
    return float(np.linalg.norm(R) / scale)


def solve_lyapunov(A: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Solve ``A V + V A^T = -D`` for a Hurwitz ``A``.

    Uses column-major vectorization, ``(I (x) A + A (x) I) vec(V) = -vec(D)``,
    which for six modes of quadratures is a dense 36x36 solve.
    """
    A = _check_square(A, "A")
    D = _check_square(D, "D")
    if A.shape != D.shape:
        raise ArgumentError(f"A {A.shape} and D {D.shape} differ in shape")
    verdict = check_stability(A)
    if not verdict.stable:
        raise InstabilityError(
            f"drift matrix is unstable (spectral abscissa {verdict.spectral_abscissa:.6g})"
        )
    n = A.shape[0]
    eye = np.eye(n)
    L = np.kron(eye, A) + np.kron(A, eye)
    try:
        vec = np.linalg.solve(L, -D.reshape(-1, order="F"))
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"Lyapunov system is singular: {exc}") from exc
    V = vec.reshape(n, n, order="F")
    V = 0.5 * (V + V.T)
    if not np.all(np.isfinite(V)):
        raise NumericalFailure("Lyapunov solution has non-finite entries")
    return V


def _rk4_step(V, A, D, h):
    f = lambda X: A @ X + X @ A.T + D
    k1 = f(V)
    k2 = f(V + 0.5 * h * k1)
    k3 = f(V + 0.5 * h * k2)
    k4 = f(V + h * k3)
    return V + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate_lyapunov(A, D, horizon=None, step=None, V0=None) -> np.ndarray:
    """Integrate ``dV/dt = A V + V A^T + D`` with classical RK4 steps.

    Serves as an oracle for :func:`solve_lyapunov` that shares no code with
    it.  Because the right-hand side is affine and time independent, one RK4
    step is an affine map ``V -> T(V) + c``.  That map is tabulated by
    stepping the basis matrices, then composed by repeated squaring, so
    ``N`` steps cost ``O(log N)`` matrix products.  The result is the RK4
    trajectory at ``t = N * step``, up to rounding.

    Parameters
    ----------
    A, D : ndarray
        Drift and diffusion matrices. ``A`` must be stable.
    horizon : float, optional
        Integration time. Defaults to ``40 / |abscissa|``.
    step : float, optional
        RK4 step. Defaults to the smaller of ``0.05 / |abscissa|`` and
        ``0.5 / max|eig(A)|``.
    V0 : ndarray, optional
        Initial covariance, vacuum ``I/2`` by default.
    """
    A = _check_square(A, "A")
    D = _check_square(D, "D")
    n = A.shape[0]
    verdict = check_stability(A)
    if not verdict.stable:
        raise InstabilityError(
            f"cannot integrate towards a steady state: abscissa {verdict.spectral_abscissa:.6g}"
        )
    rate = abs(verdict.spectral_abscissa)
    if step is None:
        radius = float(np.max(np.abs(np.linalg.eigvals(A))))
        step = min(0.05 / rate, 0.5 / radius)
    if horizon is None:
        horizon = 40.0 / rate
    if not 0 < step < 0.1 / rate:
        raise ArgumentError(f"step must lie in (0, {0.1 / rate:.6g}), got {step!r}")
    if horizon < 20.0 / rate:
        raise ArgumentError(f"horizon must be at least {20.0 / rate:.6g}, got {horizon!r}")

    n_steps = int(math.ceil(horizon / step - 1e-9))
    zero = np.zeros_like(A)
    # affine step map on vec(V): columns of T from the homogeneous step of each basis matrix
    c = _rk4_step(zero, A, D, step).reshape(-1)
    T = np.empty((n * n, n * n))
    for j in range(n * n):
        E = np.zeros(n * n)
        E[j] = 1.0
        T[:, j] = _rk4_step(E.reshape(n, n), A, zero, step).reshape(-1)

    V = 0.5 * np.eye(n) if V0 is None else np.array(V0, dtype=float)
    v = V.reshape(-1)
    remaining = n_steps
    while remaining:
        if remaining & 1:
            v = T @ v + c
            Vm = v.reshape(n, n)
            v = (0.5 * (Vm + Vm.T)).reshape(-1)
            if not np.all(np.isfinite(v)) or np.max(np.abs(v)) > DIVERGENCE_LIMIT:
                raise InstabilityError("time integration diverged")
        remaining >>= 1
        if remaining:
            T, c = T @ T, T @ c + c
    return v.reshape(n, n).copy()


def physicality_margin(V: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian matrix ``V + (i/2) Omega``.

    Nonnegative (up to rounding) for every physical covariance matrix.
    """
    V = np.asarray(V, dtype=float)
    omega = symplectic_form(V.shape[0] // 2)
    return float(np.linalg.eigvalsh(V + 0.5j * omega)[0])


def is_physical(V: np.ndarray, tol: float = 1e-9) -> bool:
    return physicality_margin(V) >= -tol
