"""Spectral analysis of the per-coordinate 2x2 iteration matrices.

The recurrence x_{k+1} = a x_k + b x_{k-1} has companion matrix
M = [[a, b], [1, 0]] with eigenvalues (a +- sqrt(a^2 + 4b)) / 2.  When the
discriminant is nonpositive the eigenvalues are a conjugate pair of modulus
sqrt(-b), which is the structural condition the certificate checks on every
eigen-coordinate of a quadratic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .methods import MethodSpec, TwoStepCoefficients, coefficient_arrays

DEFAULT_TOL = 1e-12


class IneligibleError(ValueError):
    """Raised when an operation needs the conjugate-pair premise and it fails."""


@dataclass(frozen=True)
class ComplexPair:
    """Eigenvalue pair of a companion matrix, dominant modulus first."""

    lambda1: complex
    lambda2: complex


@dataclass(frozen=True)
class SchurFactors:
    """Unitary U and upper-triangular T with M = U T U*."""

    U: np.ndarray
    T: np.ndarray


@dataclass(frozen=True)
class CoordinateAnalysis:
    lambda_w: float
    coeffs: TwoStepCoefficients
    eigenpair: ComplexPair
    conjugate_pair: bool
    rate: float


@dataclass(frozen=True)
class SpectralCertificate:
    """Per-coordinate eigenstructure of a method on a spectrum.

    ``eligible`` means every coordinate carries a conjugate eigenvalue pair
    and the overall spectral radius is strictly below one; that is exactly
    the premise under which the three-point Lyapunov value is guaranteed to
    decrease monotonically.
    """

    method: MethodSpec
    per_coordinate: tuple
    spectral_radius: float
    eligible: bool


def companion_matrix(c: TwoStepCoefficients) -> np.ndarray:
    return np.array([[c.a, c.b], [1.0, 0.0]])


def _discriminant_scale(a: float, b: float) -> tuple[float, float]:
    return a * a + 4.0 * b, max(1.0, a * a, abs(4.0 * b))


def is_conjugate_pair(c: TwoStepCoefficients, tol: float = DEFAULT_TOL) -> bool:
    """True iff the eigenvalues form a conjugate pair (repeated real allowed).

    The discriminant test is relative, a^2 + 4b <= tol * max(1, a^2, |4b|),
    so boundary coordinates that land at +-1e-16 in floats classify stably.
    """
    d, scale = _discriminant_scale(c.a, c.b)
    return d <= tol * scale


def eigenvalues_2x2(c: TwoStepCoefficients, tol: float = DEFAULT_TOL) -> ComplexPair:
    """Eigenvalues of the companion matrix, dominant modulus first.

    Within the conjugate tolerance band the positive part of the discriminant
    is clamped to zero so the reported moduli match sqrt(-b) exactly.
    """
    d, scale = _discriminant_scale(c.a, c.b)
    if d > tol * scale:
        r = math.sqrt(d)
        l1, l2 = (c.a + r) / 2.0, (c.a - r) / 2.0
        if abs(l2) > abs(l1):
            l1, l2 = l2, l1
        return ComplexPair(complex(l1, 0.0), complex(l2, 0.0))
    im = math.sqrt(-d) / 2.0 if d < 0.0 else 0.0
    return ComplexPair(complex(c.a / 2.0, im), complex(c.a / 2.0, -im))


def schur_2x2(c: TwoStepCoefficients, tol: float = DEFAULT_TOL) -> SchurFactors:
    """Schur factorization M = U T U* built from the eigenvector (lambda1, 1).

    Requires a conjugate pair: with lambda2 = conj(lambda1) the basis

        u1 = (lambda1, 1) / n,   u2 = (1, -conj(lambda1)) / n,
        n = sqrt(1 + |lambda1|^2)

    is exactly unitary.  T has the eigenvalues on the diagonal, the lower-left
    entry is exact zero and t12 = u1* M u2.
    """
    if not is_conjugate_pair(c, tol):
        raise IneligibleError("real split eigenvalues: the conjugate basis is not unitary")
    pair = eigenvalues_2x2(c, tol)
    l1, l2 = pair.lambda1, pair.lambda2
    n = math.sqrt(1.0 + abs(l1) ** 2)
    u1 = np.array([l1, 1.0], dtype=complex) / n
    u2 = np.array([1.0, -np.conj(l1)], dtype=complex) / n
    U = np.column_stack([u1, u2])
    M = companion_matrix(c).astype(complex)
    t12 = np.conj(u1) @ (M @ u2)
    T = np.array([[l1, t12], [0.0, l2]], dtype=complex)
    return SchurFactors(U=U, T=T)


def analyze(spec: MethodSpec, eigvals: np.ndarray, tol: float = DEFAULT_TOL) -> SpectralCertificate:
    """Certificate for a method over a problem spectrum (one record per coordinate)."""
    lam = np.asarray(eigvals, dtype=float)
    if lam.ndim != 1 or lam.shape[0] < 1:
        raise ValueError("eigvals must be a nonempty vector")
    if np.any(lam < 0):
        raise ValueError("eigenvalues must be nonnegative")
    if np.any(np.diff(lam) < 0):
        raise ValueError("eigvals must be sorted nondecreasing")
    a, b = coefficient_arrays(spec, lam)
    records = []
    radius = 0.0
    all_conj = True
    for i in range(lam.shape[0]):
        c = TwoStepCoefficients(a=float(a[i]), b=float(b[i]))
        pair = eigenvalues_2x2(c, tol)
        conj = is_conjugate_pair(c, tol)
        rate = abs(pair.lambda1)
        records.append(CoordinateAnalysis(
            lambda_w=float(lam[i]), coeffs=c, eigenpair=pair,
            conjugate_pair=conj, rate=rate))
        radius = max(radius, rate)
        all_conj = all_conj and conj
    return SpectralCertificate(
        method=spec,
        per_coordinate=tuple(records),
        spectral_radius=radius,
        eligible=bool(all_conj and radius < 1.0),
    )


def symmetric_eigendecomposition(W: np.ndarray, tol: float = 1e-13,
                                 max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (Q, eigvals) with eigvals ascending and W = Q diag(eigvals) Q'.
    Dense desk-scale routine; rejects non-symmetric input.
    """
    A = np.array(W, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("W must be square")
    scale = max(1.0, float(np.abs(A).max()))
    if np.abs(A - A.T).max() > 1e-10 * scale:
        raise ValueError("W must be symmetric")
    A = (A + A.T) / 2.0
    n = A.shape[0]
    Q = np.eye(n)
    if n == 1:
        return Q, np.array([A[0, 0]])
    fro = max(np.linalg.norm(A), 1e-300)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(np.triu(A, 1) ** 2) * 2.0, 0.0))
        if off <= tol * fro:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                cth = 1.0 / math.sqrt(1.0 + t * t)
                sth = t * cth
                # rotate columns p, q of A, then rows (A stays symmetric)
                cp = A[:, p].copy()
                cq = A[:, q].copy()
                A[:, p] = cth * cp - sth * cq
                A[:, q] = sth * cp + cth * cq
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = cth * rp - sth * rq
                A[q, :] = sth * rp + cth * rq
                A[p, q] = 0.0
                A[q, p] = 0.0
                qp = Q[:, p].copy()
                qq = Q[:, q].copy()
                Q[:, p] = cth * qp - sth * qq
                Q[:, q] = sth * qp + cth * qq
    vals = np.diag(A).copy()
    order = np.argsort(vals, kind="stable")
    return Q[:, order], vals[order]


def certificate_csv_text(cert: SpectralCertificate) -> str:
    """One row per coordinate: lambda_W, a, b, Re/Im of the dominant eigenvalue,
    its modulus, and the conjugate-pair flag (1/0)."""
    lines = ["lambda_W,a,b,re_lambda,im_lambda,modulus,conjugate_pair"]
    for rec in cert.per_coordinate:
        l1 = rec.eigenpair.lambda1
        lines.append(
            f"{rec.lambda_w:.17g},{rec.coeffs.a:.17g},{rec.coeffs.b:.17g},"
            f"{l1.real:.17g},{l1.imag:.17g},{rec.rate:.17g},"
            f"{1 if rec.conjugate_pair else 0}"
        )
    return "\n".join(lines) + "\n"


def certificate_report_text(cert: SpectralCertificate) -> str:
    """Line-oriented human-readable certificate summary."""
    m = cert.method
    lines = [
        f"method: {m.kind}  alpha={m.alpha:.12g}  beta={m.beta:.12g}  gamma={m.gamma:.12g}",
        f"coordinates: {len(cert.per_coordinate)}",
        f"spectral_radius: {cert.spectral_radius:.12g}",
        f"eligible: {'yes' if cert.eligible else 'no'}",
    ]
    bad = [r for r in cert.per_coordinate if not r.conjugate_pair]
    if bad:
        worst = ", ".join(f"{r.lambda_w:.6g}" for r in bad[:8])
        more = "" if len(bad) <= 8 else f" (+{len(bad) - 8} more)"
        lines.append(f"real-split coordinates at lambda: {worst}{more}")
    lines.append("idx  lambda_W        a               b               |lambda|       conjugate")
    for i, r in enumerate(cert.per_coordinate):
        lines.append(
            f"{i:<4d} {r.lambda_w:<15.8g} {r.coeffs.a:<15.8g} {r.coeffs.b:<15.8g} "
            f"{r.rate:<14.8g} {'yes' if r.conjugate_pair else 'no'}"
        )
    return "\n".join(lines) + "\n"
