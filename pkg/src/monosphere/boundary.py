"""Boundary data of the spectral curve: metric, connection, curvature.

On the conformal boundary the curve hands us the Hermitian fiber metric

    h(z) = v(z)* Psi v(z)

on a degree-k line bundle over the z-chart.  In the unitary gauge with
xi = sqrt(h) the connection and curvature are

    A_z = d_z log xi = (d_z h) / (2 h),      A_zbar = -conj(A_z),
    F_density = d_z d_zbar log h >= 0,

and the total curvature recovers the charge:

    (1/pi) * integral of F_density over the sphere = k.

The integral is split across two charts at |z| = rho: the 1/z chart
carries the same formulas with the index-reversed matrix
Psi~[i, j] = Psi[k-i, k-j] (the O(-k) transition absorbs |z|^(2k),
which is harmonic away from the origin and drops out of F).

Everything here needs only derivatives of h, which are exact
polynomial pairings: d_z h = v(z)* Psi v'(z), etc.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .curves import SpectralMatrix, require_hermitian
from .errors import NotPositive, QuadratureNotConverged, Underdetermined

DEGREE_TOL = 1e-7


def _chart_matrix(S: SpectralMatrix, chart: str) -> np.ndarray:
    """Coefficients of h in the requested chart ('z' or 'inv')."""
    if chart == "z":
        return S.psi
    if chart == "inv":
        return S.psi[::-1, ::-1]
    raise ValueError(f"unknown chart {chart!r}")


def _vander(z: complex, k: int) -> np.ndarray:
    return np.array([z**j for j in range(k + 1)], dtype=complex)


def _vander_d(z: complex, k: int) -> np.ndarray:
    return np.array([j * z ** (j - 1) if j > 0 else 0.0 for j in range(k + 1)], dtype=complex)


def metric_h(S: SpectralMatrix, z, chart: str = "z") -> float:
    """h(z) = v(z)* Psi v(z) in the given chart; real and positive for
    positive definite Psi."""
    psi = _chart_matrix(S, chart)
    v = _vander(complex(z), S.k)
    return float(np.real(np.conj(v) @ psi @ v))


def connection_at_infinity(S: SpectralMatrix, z, chart: str = "z") -> complex:
    """A_z = (d_z h) / (2 h) in the unitary gauge; A_zbar = -conj(A_z)."""
    psi = _chart_matrix(S, chart)
    z = complex(z)
    v = _vander(z, S.k)
    dv = _vander_d(z, S.k)
    h = np.real(np.conj(v) @ psi @ v)
    hz = np.conj(v) @ psi @ dv
    return complex(hz / (2.0 * h))


def curvature_density(S: SpectralMatrix, z, chart: str = "z") -> float:
    """F = d_z d_zbar log h = (h_zzbar h - |h_z|^2) / h^2, >= 0."""
    psi = _chart_matrix(S, chart)
    z = complex(z)
    v = _vander(z, S.k)
    dv = _vander_d(z, S.k)
    h = np.real(np.conj(v) @ psi @ v)
    hz = np.conj(v) @ psi @ dv
    hzz = np.real(np.conj(dv) @ psi @ dv)
    return float((hzz * h - abs(hz) ** 2) / h**2)


def degree_integral(
    S: SpectralMatrix,
    split_radius: float = 1.0,
    tol: float = DEGREE_TOL,
) -> tuple[float, float]:
    """(1/pi) * total curvature, computed in two polar patches.

    The z chart covers |z| <= split_radius and the 1/z chart covers the
    rest.  Adaptive quadrature per patch; returns (value, error bound)
    and raises QuadratureNotConverged when the combined bound misses
    tol.  The value equals the charge k for a spectral curve.
    """
    require_hermitian(S.psi)

    def patch(chart: str, radius: float) -> tuple[float, float]:
        def integrand(r: float, theta: float) -> float:
            z = r * np.exp(1j * theta)
            return curvature_density(S, z, chart) * r

        val, err = integrate.dblquad(
            integrand, 0.0, 2.0 * np.pi, 0.0, radius,
            epsabs=tol / 4.0, epsrel=1e-10,
        )
        return val, err

    v1, e1 = patch("z", split_radius)
    v2, e2 = patch("inv", 1.0 / split_radius)
    total = (v1 + v2) / np.pi
    bound = (e1 + e2) / np.pi
    if bound > tol:
        raise QuadratureNotConverged(
            f"degree integral error bound {bound:.2e} exceeds {tol:.2e}"
        )
    return float(total), float(bound)


@dataclass(frozen=True)
class BoundarySample:
    """One CSV row of boundary data at a point of the z chart."""

    z: complex
    h: float
    a_z: complex
    f_density: float


def sample_boundary(S: SpectralMatrix, points) -> list[BoundarySample]:
    out = []
    for z in points:
        z = complex(z)
        out.append(
            BoundarySample(
                z,
                metric_h(S, z),
                connection_at_infinity(S, z),
                curvature_density(S, z),
            )
        )
    return out


def _design_row(z: complex, k: int) -> np.ndarray:
    """Real row expressing h(z) linearly in the (k+1)^2 Hermitian unknowns.

    Unknowns ordered: diagonal Psi[i,i] (i = 0..k), then for i < j the
    pair (Re Psi[i,j], Im Psi[i,j]).
    """
    n = k + 1
    row = np.empty(n * n, dtype=float)
    mono = _vander(z, k)
    for i in range(n):
        row[i] = abs(mono[i]) ** 2
    pos = n
    for i in range(n):
        for j in range(i + 1, n):
            cross = np.conj(mono[i]) * mono[j]
            row[pos] = 2.0 * cross.real
            row[pos + 1] = -2.0 * cross.imag
            pos += 2
    return row


def _assemble(coeffs: np.ndarray, k: int) -> np.ndarray:
    n = k + 1
    psi = np.zeros((n, n), dtype=complex)
    for i in range(n):
        psi[i, i] = coeffs[i]
    pos = n
    for i in range(n):
        for j in range(i + 1, n):
            psi[i, j] = coeffs[pos] + 1j * coeffs[pos + 1]
            psi[j, i] = coeffs[pos] - 1j * coeffs[pos + 1]
            pos += 2
    return psi


def reconstruct_psi_from_metric(samples, k: int, require_positive: bool = True) -> SpectralMatrix:
    """Recover Psi from (z, h) samples by Hermitian least squares.

    Each sample contributes one real equation
    h = sum_i Psi[i,i] |z|^(2i) + sum_{i<j} 2 Re(Psi[i,j] conj(z)^i z^j)
    in the (k+1)^2 real unknowns.  Needs at least (k+1)^2 independent
    samples (Underdetermined otherwise).  The recovered matrix must be
    positive definite unless require_positive is False (NotPositive
    flags inconsistent boundary data).
    """
    pts = [(complex(z), float(h)) for z, h in samples]
    n_unknown = (k + 1) ** 2
    if len(pts) < n_unknown:
        raise Underdetermined(
            f"{len(pts)} samples < {n_unknown} unknowns for charge {k}"
        )
    A = np.stack([_design_row(z, k) for z, _ in pts])
    b = np.array([h for _, h in pts])
    rank = np.linalg.matrix_rank(A, tol=1e-10 * max(1.0, float(np.max(np.abs(A)))))
    if rank < n_unknown:
        raise Underdetermined(f"design rank {rank} < {n_unknown}; samples not generic")
    coeffs, *_ = np.linalg.lstsq(A, b, rcond=None)
    psi = _assemble(coeffs, k)
    out = SpectralMatrix(k, psi, normalized=True)
    if require_positive:
        vals = np.linalg.eigvalsh(psi)
        if vals[0] <= 0.0:
            raise NotPositive(
                f"recovered matrix has eigenvalue {vals[0]:.3e}; data inconsistent"
            )
    return out
