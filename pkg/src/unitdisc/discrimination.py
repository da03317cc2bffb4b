"""Eigenphase geometry of U1^dag U2 and the query lower bound built on it.

The diamond distance between two unitary channels is a function of the
relative eigenphases only: if every eigenvalue of U1^dag U2 lies on an arc
shorter than pi, the origin sits outside their convex hull, and half the
diamond norm is sqrt(1 - D^2) with D the hull-to-origin distance. An arc of
length pi or more means the channels are perfectly distinguishable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, InvalidEpsilon, OriginInHull
from .linalg import TWO_PI, canonical_phase, check_same_dims, check_unitary, eig_unitary

HULL_TOL = 1e-10
MINPHASE_GRID = 10_000
MINPHASE_TOL = 1e-10
MINPHASE_AGREEMENT = 1e-8


def _phases(phases) -> np.ndarray:
    p = np.atleast_1d(np.asarray(phases, dtype=float))
    if p.size == 0:
        raise ValueError("eigenphase set must be nonempty")
    return canonical_phase(p)


def relative_eigenphases(U1, U2) -> np.ndarray:
    U1 = check_unitary(U1)
    U2 = check_unitary(U2)
    check_same_dims(U1, U2)
    phases, _ = eig_unitary(U1.conj().T @ U2)
    return np.sort(phases)


def _arc(phases: np.ndarray) -> tuple[float, float, float]:
    """Return (arc_length, arc_start, arc_midpoint) of the shortest covering arc."""
    p = np.sort(phases)
    gaps = np.diff(np.append(p, p[0] + TWO_PI))
    k = int(np.argmax(gaps))
    length = max(0.0, TWO_PI - float(gaps[k]))
    start = float(p[(k + 1) % p.size])
    return length, start, start + length / 2.0


def spectral_arc_length(phases) -> float:
    return _arc(_phases(phases))[0]


def origin_in_hull(phases) -> bool:
    return spectral_arc_length(phases) >= math.pi - HULL_TOL


def hull_distance(phases) -> float:
    """Half the smallest |e^{i a} + e^{i b}| over all pairs, including a == b."""
    p = _phases(phases)
    if origin_in_hull(p):
        raise OriginInHull("the origin lies in the convex hull of the eigenvalues")
    z = np.exp(1j * p)
    return float(0.5 * np.abs(z[:, None] + z[None, :]).min())


def _half_diamond(phases: np.ndarray) -> float:
    if origin_in_hull(phases):
        return 1.0
    D = hull_distance(phases)
    return math.sqrt(max(0.0, 1.0 - D * D))


def diamond_distance(U1, U2) -> float:
    """Half the diamond norm of the difference of the two unitary channels."""
    return _half_diamond(relative_eigenphases(U1, U2))


def _minphase_objective(phis: np.ndarray, phases: np.ndarray) -> np.ndarray:
    # || U1 - e^{i phi} U2 || = max_j |1 - e^{i(phi + theta_j)}|
    return np.abs(1.0 - np.exp(1j * (phis[..., None] + phases))).max(axis=-1)


def min_phase_opnorm(U1, U2) -> tuple[float, float]:
    """min over phi of ||U1 - e^{i phi} U2|| and its minimizer phi in [0, 2pi).

    The phase multiplies U2, matching the convention of ``phase_align``. The
    value is found by a grid scan plus ternary refinement and cross-checked
    against the arc-midpoint chord 2 sin(arc / 4).
    """
    phases = relative_eigenphases(U1, U2)
    grid = np.linspace(0.0, TWO_PI, MINPHASE_GRID, endpoint=False)
    vals = _minphase_objective(grid, phases)
    k = int(np.argmin(vals))
    h = TWO_PI / MINPHASE_GRID
    lo, hi = grid[k] - h, grid[k] + h
    while hi - lo > MINPHASE_TOL:
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        f1, f2 = _minphase_objective(np.array([m1, m2]), phases)
        if f1 <= f2:
            hi = m2
        else:
            lo = m1
    phi = 0.5 * (lo + hi)
    value = float(_minphase_objective(np.array([phi]), phases)[0])

    analytic = 2.0 * math.sin(_arc(phases)[0] / 4.0)
    if abs(value - analytic) > MINPHASE_AGREEMENT:
        raise ConvergenceFailure(
            f"min-phase search {value!r} disagrees with chord formula {analytic!r}"
        )
    return value, canonical_phase(phi)


def phase_align(U1, U2) -> float:
    """Global phase theta such that 1 is an eigenvalue of U1^dag e^{i theta} U2.

    Picks the relative eigenphase nearest to 0 on the circle (lowest index on ties).
    """
    phases = relative_eigenphases(U1, U2)
    circ = np.minimum(phases, TWO_PI - phases)
    k = int(np.argmin(circ))
    return canonical_phase(TWO_PI - phases[k])


def query_lower_bound(epsilon: float) -> int:
    """Fewest queries that can reach success 2/3 when half the diamond distance is epsilon."""
    if not (isinstance(epsilon, (int, float, np.floating)) and math.isfinite(epsilon)):
        raise InvalidEpsilon(f"epsilon must be a finite real, got {epsilon!r}")
    if epsilon <= 0.0 or epsilon > 1.0 + 1e-12:
        raise InvalidEpsilon(f"epsilon must lie in (0, 1], got {epsilon!r}")
    x = 1.0 / (3.0 * float(epsilon))
    return max(1, math.ceil(x * (1.0 - 1e-12)))


def advantage_upper_bound(T: int, half_diamond: float) -> float:
    if T < 1:
        raise ValueError("T must be a positive integer")
    return min(1.0, T * half_diamond)


def one_shot_success(half_diamond: float) -> float:
    """Optimal single-use success probability for equal priors."""
    return 0.5 + 0.5 * half_diamond


@dataclass(frozen=True)
class SpectralReport:
    phases: np.ndarray
    arc_length: float
    origin_in_hull: bool
    hull_distance: float | None
    diamond_distance: float
    min_phase_opnorm: float
    minimizer_phase: float
    aligning_phase: float

    @property
    def query_lower_bound(self) -> int | None:
        """None when the channels coincide (no finite bound)."""
        if self.diamond_distance < 1e-12:
            return None
        return query_lower_bound(min(1.0, self.diamond_distance))

    @property
    def one_shot_success(self) -> float:
        return one_shot_success(self.diamond_distance)

    def as_dict(self) -> dict:
        return {
            "relative_eigenphases": [float(x) for x in self.phases],
            "arc_length": self.arc_length,
            "origin_in_hull": self.origin_in_hull,
            "hull_distance": self.hull_distance,
            "diamond_distance": self.diamond_distance,
            "min_phase_opnorm": self.min_phase_opnorm,
            "min_phase_minimizer": self.minimizer_phase,
            "aligning_phase": self.aligning_phase,
            "query_lower_bound": self.query_lower_bound,
            "one_shot_success": self.one_shot_success,
        }


def spectral_report(U1, U2) -> SpectralReport:
    phases = relative_eigenphases(U1, U2)
    inside = origin_in_hull(phases)
    value, phi = min_phase_opnorm(U1, U2)
    return SpectralReport(
        phases=phases,
        arc_length=spectral_arc_length(phases),
        origin_in_hull=inside,
        hull_distance=None if inside else hull_distance(phases),
        diamond_distance=_half_diamond(phases),
        min_phase_opnorm=value,
        minimizer_phase=phi,
        aligning_phase=phase_align(U1, U2),
    )
