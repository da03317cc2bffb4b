"""Dense complex linear algebra for small systems (d <= 64).

Matrices are plain ``numpy`` complex arrays. The ``check_*`` helpers validate
the invariants of unitaries, Hermitian operators and density matrices and
return a ``complex128`` copy, so downstream code can assume a clean input.
"""

from __future__ import annotations

import json
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NotADensityMatrix,
    NotHermitian,
    NotUnitary,
    ParseError,
)

UNITARITY_TOL = 1e-9
HERMITIAN_TOL = 1e-9
RESIDUAL_TOL = 1e-8
PHASE_SNAP = 1e-12
MAX_DIM = 64

TWO_PI = 2.0 * np.pi


def as_matrix(M) -> np.ndarray:
    A = np.array(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
        raise DimensionMismatch(f"expected a nonempty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def _require_square(A: np.ndarray) -> None:
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")


def check_unitary(U, tol: float = UNITARITY_TOL) -> np.ndarray:
    U = as_matrix(U)
    _require_square(U)
    err = np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))
    if err > tol:
        raise NotUnitary(f"max |U^dag U - I| = {err:.3e} exceeds {tol:.0e}")
    return U


def is_unitary(U, tol: float = UNITARITY_TOL) -> bool:
    try:
        check_unitary(U, tol)
    except (NotUnitary, DimensionMismatch, ValueError):
        return False
    return True


def check_hermitian(H, tol: float = HERMITIAN_TOL) -> np.ndarray:
    H = as_matrix(H)
    _require_square(H)
    err = np.max(np.abs(H - H.conj().T))
    if err > tol:
        raise NotHermitian(f"max |H - H^dag| = {err:.3e} exceeds {tol:.0e}")
    return H


def check_density(rho, tol: float = HERMITIAN_TOL) -> np.ndarray:
    try:
        rho = check_hermitian(rho, tol)
    except NotHermitian as exc:
        raise NotADensityMatrix(str(exc)) from None
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise NotADensityMatrix(f"trace {tr!r} is not 1")
    lo = np.linalg.eigvalsh((rho + rho.conj().T) / 2).min()
    if lo < -tol:
        raise NotADensityMatrix(f"negative eigenvalue {lo:.3e}")
    return rho


def check_same_dims(A: np.ndarray, B: np.ndarray) -> None:
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes differ: {A.shape} vs {B.shape}")


def dagger(M) -> np.ndarray:
    return as_matrix(M).conj().T


def tensor(A, B) -> np.ndarray:
    return np.kron(as_matrix(A), as_matrix(B))


def controlled(U) -> np.ndarray:
    """|0><0| (x) I + |1><1| (x) U, control qubit first."""
    U = as_matrix(U)
    _require_square(U)
    d = U.shape[0]
    C = np.zeros((2 * d, 2 * d), dtype=complex)
    C[:d, :d] = np.eye(d)
    C[d:, d:] = U
    return C


def canonical_phase(theta):
    """Map angles to [0, 2pi), snapping values within PHASE_SNAP of 2pi to 0."""
    t = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    t = np.where(t > TWO_PI - PHASE_SNAP, 0.0, t)
    return float(t) if t.ndim == 0 else t


def eig_unitary(U, tol: float = RESIDUAL_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenphases in [0, 2pi) and orthonormal eigenvectors (as columns).

    Uses the complex Schur form, which is diagonal for a normal matrix, so the
    Schur vectors are eigenvectors even inside degenerate eigenspaces.
    """
    U = check_unitary(U)
    T, Z = sla.schur(U, output="complex")
    lam = np.diag(T)
    phases = canonical_phase(np.angle(lam))
    vals = np.exp(1j * phases)
    resid = np.linalg.norm(U @ Z - Z * vals, axis=0)
    if resid.max(initial=0.0) > tol:
        raise ConvergenceFailure(f"eigen-residual {resid.max():.3e} exceeds {tol:.0e}")
    return np.atleast_1d(phases), Z


def op_norm(M) -> float:
    return float(np.linalg.norm(as_matrix(M), 2))


def trace_norm(M) -> float:
    return float(np.linalg.svd(as_matrix(M), compute_uv=False).sum())


def partial_trace(rho, dims: Sequence[int], keep: str = "A") -> np.ndarray:
    rho = as_matrix(rho)
    d_a, d_b = (int(x) for x in dims)
    if rho.shape != (d_a * d_b, d_a * d_b):
        raise DimensionMismatch(f"matrix of shape {rho.shape} does not factor as {d_a}x{d_b}")
    r = rho.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ijkj->ik", r)
    if keep == "B":
        return np.einsum("ijil->jl", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def svd(M, tol: float = RESIDUAL_TOL) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (R, sigma, V) with M = R diag(sigma) V^dag and sigma nonincreasing."""
    M = as_matrix(M)
    _require_square(M)
    try:
        R, s, Vh = np.linalg.svd(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    V = Vh.conj().T
    err = op_norm(R @ np.diag(s) @ Vh - M)
    if err > tol:
        raise ConvergenceFailure(f"SVD reconstruction error {err:.3e}")
    return R, s, V


def expm_hermitian(H, t: float, sign: int = -1) -> np.ndarray:
    """exp(sign * i * t * H) for Hermitian H; sign=-1 gives the usual time evolution."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    H = check_hermitian(H)
    w, V = np.linalg.eigh((H + H.conj().T) / 2)
    return (V * np.exp(sign * 1j * t * w)) @ V.conj().T


def renyi2_entropy(rho) -> float:
    rho = check_density(rho)
    purity = float(np.real(np.trace(rho @ rho)))
    return max(0.0, -np.log(purity))


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Gaussian matrix."""
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def random_state(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


# Matrix JSON format: {"dim": d, "entries": [[[re, im], ...], ...]} row-major.

def matrix_to_json(M) -> dict:
    M = as_matrix(M)
    _require_square(M)
    return {
        "dim": int(M.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in M],
    }


def matrix_from_json(obj) -> np.ndarray:
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "dim" not in obj or "entries" not in obj:
        raise ParseError("matrix JSON must be an object with 'dim' and 'entries'")
    d = obj["dim"]
    rows = obj["entries"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ParseError(f"'dim' must be a positive integer, got {d!r}")
    if d > MAX_DIM:
        raise ParseError(f"dimension {d} exceeds the supported maximum {MAX_DIM}")
    if not isinstance(rows, list) or len(rows) != d:
        raise ParseError(f"'entries' must hold {d} rows")
    M = np.empty((d, d), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise ParseError(f"row {i} must hold {d} entries")
        for j, z in enumerate(row):
            if (
                not isinstance(z, list)
                or len(z) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)
            ):
                raise ParseError(f"entry ({i}, {j}) must be [re, im]")
            M[i, j] = complex(z[0], z[1])
    if not np.all(np.isfinite(M)):
        raise ParseError("matrix has non-finite entries")
    return M
