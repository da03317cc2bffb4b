"""Gallery of unitary pairs whose distinguishability yields query lower bounds.

Each constructor returns a ``ConstructionCase``: the two unitaries, the
parameters they were built from, the predicted (half) diamond distance and
the resulting lower bound on the number of queries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .discrimination import query_lower_bound
from .errors import (
    NotNormalized,
    NotUnitaryAfterConstruction,
    ParamOutOfRange,
    SingularValueTooLarge,
)
from .linalg import (
    MAX_DIM,
    UNITARITY_TOL,
    as_matrix,
    check_hermitian,
    check_unitary,
    expm_hermitian,
    ket,
    partial_trace,
    projector,
    renyi2_entropy,
    svd,
)

GIBBS_BETA_MIN = math.sqrt(14.0 / 3.0)
GSP_DELTA_MAX = 0.7

CASE_NAMES = (
    "qpe",
    "entanglement",
    "ssv",
    "qae",
    "gibbs",
    "hamsim",
    "learning",
    "gsp",
    "sbqp_oracle",
)


@dataclass(frozen=True)
class ConstructionCase:
    name: str
    params: dict
    U1: np.ndarray
    U2: np.ndarray
    predicted_half_diamond: float
    predicted_lower_bound: int
    # "equality": predicted_half_diamond is exact.
    # "bound": only an operator-norm upper bound is claimed (opnorm_bound).
    prediction: str = "equality"
    opnorm_bound: float | None = None
    hamiltonians: tuple[np.ndarray, np.ndarray] | None = None
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        check_unitary(self.U1)
        check_unitary(self.U2)
        if np.max(np.abs(self.U1 - self.U2)) <= 1e-12:
            raise ParamOutOfRange(f"{self.name}: U1 and U2 coincide")
        if not 0.0 < self.predicted_half_diamond <= 1.0:
            raise ParamOutOfRange(
                f"{self.name}: predicted distance {self.predicted_half_diamond!r} outside (0, 1]"
            )


def _case(name, params, U1, U2, half, **kw) -> ConstructionCase:
    half = min(1.0, float(half))
    return ConstructionCase(
        name=name,
        params=params,
        U1=U1,
        U2=U2,
        predicted_half_diamond=half,
        predicted_lower_bound=query_lower_bound(half),
        **kw,
    )


def phase_gate(theta: float) -> np.ndarray:
    """e^{2 pi i theta}|0><0| + |1><1|."""
    return np.diag([np.exp(2j * np.pi * theta), 1.0])


def qpe_pair(epsilon: float) -> ConstructionCase:
    if not 0.0 < epsilon < 0.5:
        raise ParamOutOfRange(f"epsilon must lie in (0, 1/2), got {epsilon!r}")
    return _case(
        "qpe",
        {"epsilon": epsilon},
        np.eye(2, dtype=complex),
        phase_gate(epsilon),
        abs(math.sin(math.pi * epsilon)),
    )


def reflection_about(psi) -> np.ndarray:
    """I - 2|psi><psi|."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    n = np.linalg.norm(psi)
    if abs(n - 1.0) > 1e-9:
        raise NotNormalized(f"state has norm {n!r}")
    return np.eye(psi.size) - 2.0 * projector(psi)


def bell_state() -> np.ndarray:
    return (ket(0, 4) + ket(3, 4)) / math.sqrt(2.0)


def entangled_state(delta: float) -> np.ndarray:
    """sqrt((1+sqrt(delta))/2)|00> + sqrt((1-sqrt(delta))/2)|11>."""
    s = math.sqrt(delta)
    return math.sqrt((1 + s) / 2) * ket(0, 4) + math.sqrt((1 - s) / 2) * ket(3, 4)


def entanglement_pair(delta: float) -> ConstructionCase:
    if not 0.0 < delta < 1.0:
        raise ParamOutOfRange(f"delta must lie in (0, 1), got {delta!r}")
    psi1, psi2 = bell_state(), entangled_state(delta)
    s1 = renyi2_entropy(partial_trace(projector(psi1), (2, 2), "A"))
    s2 = renyi2_entropy(partial_trace(projector(psi2), (2, 2), "A"))
    return _case(
        "entanglement",
        {"delta": delta},
        reflection_about(psi1),
        reflection_about(psi2),
        math.sqrt(delta),
        extras={"psi1": psi1, "psi2": psi2, "S2_psi1": s1, "S2_psi2": s2, "entropy_gap": s1 - s2},
    )


def _num_qubits(size: int) -> int:
    return max(1, math.ceil(math.log2(size)))


def subset_state(S, n: int) -> np.ndarray:
    """Uniform superposition over the basis strings in S (integers, big-endian)."""
    v = np.zeros(2**n, dtype=complex)
    v[list(S)] = 1.0
    return v / math.sqrt(len(S))


def ssv_alpha_sqrt(size: int) -> float:
    """Overlap amplitude sqrt(alpha) = sqrt(1/2 - 1/2 sqrt((|S|-1)/|S|))."""
    return math.sqrt(0.5 - 0.5 * math.sqrt((size - 1) / size))


def ssv_pair(S, n: int | None = None) -> ConstructionCase:
    """Pair for subset support verification with j = 0^n.

    ``S`` is a collection of basis indices (bit strings read as big-endian
    integers). Any other marked string j reduces to this one by relabelling
    with X gates on the bits set in j.
    """
    S = sorted({int(i) for i in S})
    if len(S) < 2 or 0 not in S:
        raise ParamOutOfRange("S must contain 0^n and at least two strings")
    if n is None:
        n = _num_qubits(S[-1] + 1)
    if S[0] < 0 or S[-1] >= 2**n:
        raise ParamOutOfRange(f"S has strings outside {{0,1}}^{n}")
    if 2**n > MAX_DIM:
        raise ParamOutOfRange(f"{n} qubits exceed the dimension limit {MAX_DIM}")
    size = len(S)
    zero = ket(0, 2**n)
    s1 = subset_state(S, n)
    s2 = subset_state(S[1:], n)
    v1 = (zero + s1) / math.sqrt(2 * (1 + math.sqrt(1 / size)))
    v2 = (zero + s2) / math.sqrt(2)
    eye = np.eye(2**n)
    U1 = 2 * projector(v1) - eye
    U2 = 2 * projector(v2) - eye
    sa = ssv_alpha_sqrt(size)
    alpha = sa * sa
    return _case(
        "ssv",
        {"size": size, "n": n},
        U1,
        U2,
        2 * math.sqrt(alpha - alpha * alpha),
        extras={"alpha_sqrt": sa, "bound": 2 / math.sqrt(size), "S": S},
    )


def qae_pair(epsilon: float) -> ConstructionCase:
    if not (isinstance(epsilon, (int, float)) and math.isfinite(epsilon) and epsilon > 0):
        raise ParamOutOfRange(f"epsilon must be positive, got {epsilon!r}")
    size = round(1 / epsilon**2)
    if size < 2:
        raise ParamOutOfRange(f"1/epsilon^2 = {1 / epsilon**2:.6g} rounds below 2")
    if 2 ** _num_qubits(size) > MAX_DIM:
        raise ParamOutOfRange(f"|S| = {size} needs more than {MAX_DIM} dimensions")
    base = ssv_pair(range(size))
    zero = ket(0, base.U1.shape[0])
    return ConstructionCase(
        name="qae",
        params={"epsilon": epsilon, "size": size, "realized_epsilon": 1 / math.sqrt(size)},
        U1=base.U1,
        U2=base.U2,
        predicted_half_diamond=base.predicted_half_diamond,
        predicted_lower_bound=base.predicted_lower_bound,
        extras={
            **base.extras,
            "alpha1_sqrt": float(np.real(zero @ base.U1 @ zero)),
            "alpha2_sqrt": float(np.real(zero @ base.U2 @ zero)),
        },
    )


def block_encode(M) -> np.ndarray:
    """[[M, R sqrt(I - S^2) V^dag], [R sqrt(I - S^2) V^dag, -M]] for M = R S V^dag.

    Hermitian inputs use their eigenbasis for R = V (up to signs), which makes
    the off-diagonal block the canonical sqrt(I - M^2) even when M is singular.
    """
    M = as_matrix(M)
    d = M.shape[0]
    if np.allclose(M, M.conj().T, atol=1e-12, rtol=0):
        w, W = np.linalg.eigh((M + M.conj().T) / 2)
        sigma = np.abs(w)
        R, V = W * np.where(w < 0, -1.0, 1.0), W
    else:
        R, sigma, V = svd(M)
    if sigma.max() > 1 + 1e-12:
        raise SingularValueTooLarge(f"largest singular value {sigma.max()!r} exceeds 1")
    off = (R * np.sqrt(np.clip(1 - sigma**2, 0, None))) @ V.conj().T
    U = np.block([[M, off], [off, -M]])
    err = np.max(np.abs(U.conj().T @ U - np.eye(2 * d)))
    if err > UNITARITY_TOL:
        raise NotUnitaryAfterConstruction(f"block encoding off unitarity by {err:.3e}")
    return U


def thermal_state(H, beta: float) -> np.ndarray:
    """e^{-beta H} / tr e^{-beta H}."""
    if beta < 0:
        raise ParamOutOfRange(f"beta must be nonnegative, got {beta!r}")
    H = check_hermitian(H)
    w, V = np.linalg.eigh((H + H.conj().T) / 2)
    g = np.exp(-beta * (w - w.min()))
    return (V * (g / g.sum())) @ V.conj().T


def gibbs_hamiltonians(beta: float) -> tuple[np.ndarray, np.ndarray]:
    a, b = 0.5 + 1 / beta, 0.5 - 1 / beta
    return np.diag([a, b]).astype(complex), np.diag([b, a]).astype(complex)


def gibbs_opnorm_closed_form(beta: float) -> float:
    b2 = beta * beta
    return math.sqrt(3 * b2 - math.sqrt(9 * b2 * b2 - 40 * b2 + 16) + 4) / (math.sqrt(2) * beta)


def gibbs_pair(beta: float) -> ConstructionCase:
    if not beta >= GIBBS_BETA_MIN - 1e-12:
        raise ParamOutOfRange(f"beta must be at least sqrt(14/3), got {beta!r}")
    H1, H2 = gibbs_hamiltonians(beta)
    bound = 3 / beta
    return _case(
        "gibbs",
        {"beta": beta},
        block_encode(H1),
        block_encode(H2),
        bound,
        prediction="bound",
        opnorm_bound=bound,
        hamiltonians=(H1, H2),
        extras={"opnorm_closed_form": gibbs_opnorm_closed_form(beta)},
    )


def hamsim_hamiltonians(tprime: float) -> tuple[np.ndarray, np.ndarray]:
    """H1 = I/2 and H2 = H1 + |1><1| / (2 t'), with t = 2 pi t'."""
    H1 = np.eye(2, dtype=complex) / 2
    return H1, H1 + np.diag([0.0, 1 / (2 * tprime)])


def hamsim_opnorm_closed_form(tprime: float) -> float:
    return math.sqrt(3 - math.sqrt(-3 / tprime**2 - 6 / tprime + 9) - 1 / tprime) / math.sqrt(2)


def hamsim_pair(tprime: float) -> ConstructionCase:
    if not tprime >= 1.0:
        raise ParamOutOfRange(f"t' must be at least 1, got {tprime!r}")
    H1, H2 = hamsim_hamiltonians(tprime)
    bound = 1 / tprime
    return _case(
        "hamsim",
        {"tprime": tprime, "t": 2 * math.pi * tprime},
        block_encode(H1),
        block_encode(H2),
        bound,
        prediction="bound",
        opnorm_bound=bound,
        hamiltonians=(H1, H2),
        extras={"opnorm_closed_form": hamsim_opnorm_closed_form(tprime)},
    )


def learning_pair(epsilon: float, t: float) -> ConstructionCase:
    """Time evolutions of H1 = I and H2 = I - 2 epsilon |0><0| for one query of length t."""
    if not 0.0 < epsilon <= 0.5:
        raise ParamOutOfRange(f"epsilon must lie in (0, 1/2], got {epsilon!r}")
    if not t > 0.0:
        raise ParamOutOfRange(f"t must be positive, got {t!r}")
    half = abs(math.sin(t * epsilon))
    if half < 1e-12:
        raise ParamOutOfRange("t * epsilon is a multiple of pi; the evolutions coincide")
    H1 = np.eye(2, dtype=complex)
    H2 = H1 - 2 * epsilon * projector(ket(0, 2))
    return _case(
        "learning",
        {"epsilon": epsilon, "t": t, "total_evolution_time": t},
        expm_hermitian(H1, t),
        expm_hermitian(H2, t),
        half,
        hamiltonians=(H1, H2),
    )


def learning_advantage_bound(epsilon: float, times) -> float:
    """Upper bound on the advantage from queries of lengths ``times``: min(1, sum sin(t_j eps))."""
    return min(1.0, sum(abs(math.sin(t * epsilon)) for t in times))


def min_total_evolution_time(epsilon: float) -> float:
    """Total evolution time needed for advantage 1/3, since sin(t eps) <= t eps."""
    return 1 / (3 * epsilon)


def gsp_hamiltonians(delta: float) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.diag([0.0, delta, 1.0]).astype(complex),
        np.diag([delta, 0.0, 1.0]).astype(complex),
    )


def spectral_gap(H) -> float:
    w = np.linalg.eigvalsh(check_hermitian(H))
    return float(w[1] - w[0])


def gsp_opnorm_closed_form(delta: float) -> float:
    return 0.5 * (delta + math.sqrt(8 - 3 * delta**2 - 8 * math.sqrt(1 - delta**2)))


def gsp_printed_matrices(delta: float) -> tuple[np.ndarray, np.ndarray]:
    """The two 6x6 block encodings in their published reference form.

    Kept for comparison only: the second one is not unitary, and its top-left
    block is H1 rather than H2.
    """
    s = math.sqrt(1 - delta**2)
    d = delta
    P1 = np.array(
        [
            [0, 0, 0, 1, 0, 0],
            [0, d, 0, 0, s, 0],
            [0, 0, 1, 0, 0, 0],
            [1, 0, 0, 0, 0, 0],
            [0, s, 0, 0, -d, 0],
            [0, 0, 0, 0, 0, -1],
        ],
        dtype=complex,
    )
    P2 = np.array(
        [
            [0, 0, 0, s, 0, 0],
            [0, d, 0, 0, 1, 0],
            [0, 0, 1, 0, 0, 0],
            [s, 0, 0, -d, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, -1],
        ],
        dtype=complex,
    )
    return P1, P2


def gsp_pair(delta: float) -> ConstructionCase:
    if not 0.0 < delta <= GSP_DELTA_MAX:
        raise ParamOutOfRange(f"delta must lie in (0, 0.7], got {delta!r}")
    H1, H2 = gsp_hamiltonians(delta)
    bound = 2 * delta
    return _case(
        "gsp",
        {"delta": delta},
        block_encode(H1),
        block_encode(H2),
        bound,
        prediction="bound",
        opnorm_bound=bound,
        hamiltonians=(H1, H2),
        extras={
            "spectral_gap": (spectral_gap(H1), spectral_gap(H2)),
            "opnorm_closed_form": gsp_opnorm_closed_form(delta),
        },
    )


def sbqp_oracle(p: int) -> ConstructionCase:
    """Identity versus the phase gate with theta = 2^-p."""
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)) or p < 1:
        raise ParamOutOfRange(f"p must be a positive integer, got {p!r}")
    theta = 2.0 ** (-int(p))
    return _case(
        "sbqp_oracle",
        {"p": int(p), "theta": theta},
        np.eye(2, dtype=complex),
        phase_gate(theta),
        abs(math.sin(math.pi * theta)),
        extras={
            "acceptance": math.sin(math.pi * theta) ** 2,
            "acceptance_floor": 2.0 ** (-2 * int(p)),
        },
    )


DEFAULT_PARAMS: dict[str, dict] = {
    "qpe": {"epsilon": 0.01},
    "entanglement": {"delta": 0.25},
    "ssv": {"size": 16},
    "qae": {"epsilon": 0.25},
    "gibbs": {"beta": 3.0},
    "hamsim": {"tprime": 2.0},
    "learning": {"epsilon": 0.01, "t": 1.0},
    "gsp": {"delta": 0.5},
    "sbqp_oracle": {"p": 4},
}


def build_case(name: str, **params) -> ConstructionCase:
    """Build a gallery case by name, filling unspecified parameters with defaults."""
    if name not in DEFAULT_PARAMS:
        raise ParamOutOfRange(f"unknown case {name!r}")
    unknown = set(params) - set(DEFAULT_PARAMS[name])
    if unknown:
        raise ParamOutOfRange(f"case {name!r} takes no parameter(s) {sorted(unknown)}")
    kw = {**DEFAULT_PARAMS[name], **params}
    if name == "qpe":
        return qpe_pair(kw["epsilon"])
    if name == "entanglement":
        return entanglement_pair(kw["delta"])
    if name == "ssv":
        size = kw["size"]
        if size != int(size):
            raise ParamOutOfRange(f"size must be an integer, got {size!r}")
        return ssv_pair(range(int(size)))
    if name == "qae":
        return qae_pair(kw["epsilon"])
    if name == "gibbs":
        return gibbs_pair(kw["beta"])
    if name == "hamsim":
        return hamsim_pair(kw["tprime"])
    if name == "learning":
        return learning_pair(kw["epsilon"], kw["t"])
    if name == "gsp":
        return gsp_pair(kw["delta"])
    p = kw["p"]
    if p != int(p):
        raise ParamOutOfRange(f"p must be an integer, got {p!r}")
    return sbqp_oracle(int(p))
