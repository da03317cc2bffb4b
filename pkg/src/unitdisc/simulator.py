"""Statevector simulation of the distinguishing protocols.

States are normalized complex vectors over a register of subsystems (qubits
by default) ordered most-significant first, so ``np.kron(a, b)`` places ``a``
on subsystem 0. Probabilities are computed exactly from amplitudes; sampling
is opt-in and always takes an explicit seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .constructions import ConstructionCase
from .discrimination import (
    advantage_upper_bound,
    diamond_distance,
    phase_align,
    query_lower_bound,
)
from .errors import (
    BoundViolation,
    DimensionMismatch,
    IndexOutOfRange,
    NotAnEigenstate,
    NotAReflection,
    NotNormalized,
    ParamOutOfRange,
    WrongCase,
)
from .linalg import (
    check_unitary,
    controlled,
    dagger,
    eig_unitary,
    expm_hermitian,
    ket,
    partial_trace,
    projector,
    random_state,
    random_unitary,
    trace_norm,
)

NORM_TOL = 1e-9
H_GATE = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)
MINUS = np.array([1, -1], dtype=complex) / math.sqrt(2)


def check_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    n = np.linalg.norm(psi)
    if abs(n - 1.0) > NORM_TOL:
        raise NotNormalized(f"state has norm {n!r}")
    return psi


def _qubit_dims(size: int) -> tuple[int, ...]:
    n = size.bit_length() - 1
    if size < 2 or 2**n != size:
        raise DimensionMismatch(f"state of size {size} is not a qubit register; pass dims")
    return (2,) * n


def apply(U, psi, targets: Sequence[int] | None = None, dims: Sequence[int] | None = None) -> np.ndarray:
    """Apply U to the subsystems ``targets`` (in that order) of the register ``dims``."""
    U = check_unitary(U)
    psi = check_state(psi)
    if targets is None:
        if U.shape[0] != psi.size:
            raise DimensionMismatch(f"operator of size {U.shape[0]} on state of size {psi.size}")
        return U @ psi
    dims = tuple(dims) if dims is not None else _qubit_dims(psi.size)
    if math.prod(dims) != psi.size:
        raise DimensionMismatch(f"dims {dims} do not match state size {psi.size}")
    targets = list(targets)
    if len(set(targets)) != len(targets) or any(not 0 <= t < len(dims) for t in targets):
        raise IndexOutOfRange(f"bad target subsystems {targets} for {len(dims)} subsystems")
    tdims = [dims[t] for t in targets]
    if math.prod(tdims) != U.shape[0]:
        raise DimensionMismatch(f"operator of size {U.shape[0]} on subsystems of dims {tdims}")
    rest = [i for i in range(len(dims)) if i not in targets]
    t = psi.reshape(dims).transpose(targets + rest).reshape(U.shape[0], -1)
    t = (U @ t).reshape(tdims + [dims[i] for i in rest])
    return t.transpose(np.argsort(targets + rest)).reshape(-1)


def measure_prob(psi, qubit: int, outcome: int, dims: Sequence[int] | None = None) -> float:
    """Born probability of ``outcome`` on subsystem ``qubit``."""
    psi = check_state(psi)
    dims = tuple(dims) if dims is not None else _qubit_dims(psi.size)
    if not 0 <= qubit < len(dims):
        raise IndexOutOfRange(f"subsystem {qubit} out of range for {len(dims)} subsystems")
    if not 0 <= outcome < dims[qubit]:
        raise IndexOutOfRange(f"outcome {outcome} out of range for dimension {dims[qubit]}")
    amps = np.moveaxis(psi.reshape(dims), qubit, 0)[outcome]
    return float(np.sum(np.abs(amps) ** 2))


def _hadamard_test(CU_sequence, target_state) -> np.ndarray:
    """Ancilla |0>, H, the given controlled unitaries in order, H; returns the final state."""
    psi = np.kron(ket(0, 2), target_state)
    psi = apply(H_GATE, psi, [0], (2, target_state.size))
    for CU in CU_sequence:
        psi = CU @ psi
    return apply(H_GATE, psi, [0], (2, target_state.size))


def one_bit_qpe(U, eigenstate) -> float:
    """Probability that one-bit phase estimation outputs 1 (one controlled query)."""
    U = check_unitary(U)
    v = check_state(eigenstate)
    if U.shape[0] != v.size:
        raise DimensionMismatch(f"unitary of size {U.shape[0]} on state of size {v.size}")
    lam = np.vdot(v, U @ v)
    if np.linalg.norm(U @ v - lam * v) > 1e-8:
        raise NotAnEigenstate("input state is not an eigenvector of U")
    out = _hadamard_test([controlled(U)], v)
    return measure_prob(out, 0, 1, (2, v.size))


def repeated_qpe_prob(U, state, T: int) -> np.ndarray:
    """Outcome-1 probabilities of H, (cU)^k, H on |0>|state> for k = 1..T.

    Each step consumes one controlled query; the k-th entry is the circuit
    with exactly k queries.
    """
    U = check_unitary(U)
    v = check_state(state)
    CU = controlled(U)
    dims = (2, v.size)
    psi = apply(H_GATE, np.kron(ket(0, 2), v), [0], dims)
    out = np.empty(T)
    for k in range(T):
        psi = CU @ psi
        out[k] = measure_prob(apply(H_GATE, psi, [0], dims), 0, 1, dims)
    return out


def swap_operator(dims: Sequence[int], a: int, b: int) -> np.ndarray:
    """Permutation matrix exchanging subsystems a and b (equal dimension)."""
    dims = tuple(dims)
    if dims[a] != dims[b]:
        raise DimensionMismatch("swapped subsystems must have equal dimension")
    n = math.prod(dims)
    perm = list(range(len(dims)))
    perm[a], perm[b] = perm[b], perm[a]
    idx = np.arange(n).reshape(dims).transpose(perm).reshape(-1)
    return np.eye(n, dtype=complex)[idx]


def swap_test(psi_ab, dims: Sequence[int] = (2, 2)) -> float:
    """Outcome-0 probability of the SWAP test on the A parts of two copies of psi_ab.

    Register layout: ancilla, A1, B1, A2, B2. Equals 1/2 + tr(rho_A^2)/2.
    """
    psi = check_state(psi_ab)
    d_a, d_b = (int(x) for x in dims)
    if d_a * d_b != psi.size:
        raise DimensionMismatch(f"dims {dims} do not match state size {psi.size}")
    reg = (d_a, d_b, d_a, d_b)
    two = np.kron(psi, psi)
    CS = controlled(swap_operator(reg, 0, 2))
    out = _hadamard_test([CS], two)
    return measure_prob(out, 0, 0, (2, two.size))


def purity(psi_ab, dims: Sequence[int] = (2, 2)) -> float:
    rho_a = partial_trace(projector(check_state(psi_ab)), dims, "A")
    return float(np.real(np.trace(rho_a @ rho_a)))


def reflection_state(U) -> np.ndarray:
    """The state psi of a reflection U = I - 2|psi><psi| (global phase fixed by largest entry)."""
    U = check_unitary(U)
    if np.max(np.abs(U @ U - np.eye(U.shape[0]))) > 1e-8:
        raise NotAReflection("U^2 != I")
    phases, Z = eig_unitary(U)
    minus = np.abs(phases - math.pi) < 1e-6
    if minus.sum() != 1:
        raise NotAReflection(f"-1 eigenspace has dimension {int(minus.sum())}, expected 1")
    v = Z[:, np.argmax(minus)]
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


class CopyAttempt(NamedTuple):
    state: np.ndarray
    succeeded: bool
    queries: int
    success_prob: float


def copy_from_reflection(U, seed: int, start=None) -> CopyAttempt:
    """One controlled query to U = I - 2|psi><psi| on |+>|start>, then a Hadamard-basis
    measurement of the control. Outcome '-' leaves exactly |psi> in the target.
    """
    U = check_unitary(U)
    reflection_state(U)  # validates the reflection structure
    d = U.shape[0]
    start = ket(0, d) if start is None else check_state(start)
    out = controlled(U) @ np.kron(PLUS, start)
    # project the control onto |->
    branch = np.kron(MINUS.conj(), np.eye(d)) @ out
    p = float(np.vdot(branch, branch).real)
    rng = np.random.default_rng(seed)
    ok = bool(rng.random() < p)
    if ok:
        state = branch / math.sqrt(p)
    else:
        rest = np.kron(PLUS.conj(), np.eye(d)) @ out
        state = rest / np.linalg.norm(rest)
    return CopyAttempt(state, ok, 1, p)


class EntropyEstimate(NamedTuple):
    estimate: float
    queries: int
    copies: int
    swap_tests: int
    purity_mean: float
    purity_shifted: float
    precision: float
    seed: int


def entropy_estimate(
    U,
    S_upper: float,
    Delta: float,
    seed: int,
    confidence: float = 0.9,
) -> EntropyEstimate:
    """Estimate the 2-Renyi entanglement entropy of psi from its reflection U.

    Copies of psi come from direct state preparation; each one is charged
    ceil(sqrt(d)) queries for the amplitude-amplification step it stands in
    for. The purity x = tr(rho_A^2) is estimated from repeated SWAP tests to
    additive eps/2 (Hoeffding, failure probability 1 - confidence), shifted
    up by eps/2 and clipped to [e^{-S_upper}, 1], with eps = Delta e^{-S_upper} / 4.
    """
    U = check_unitary(U)
    D = U.shape[0]
    d = math.isqrt(D)
    if d * d != D:
        raise ParamOutOfRange(f"U of size {D} does not act on C^d (x) C^d")
    if not Delta > 0:
        raise ParamOutOfRange(f"Delta must be positive, got {Delta!r}")
    if not 0 <= S_upper <= math.log(d) + 1e-12:
        raise ParamOutOfRange(f"S_upper must lie in [0, ln d], got {S_upper!r}")
    if not 0 < confidence < 1:
        raise ParamOutOfRange("confidence must lie in (0, 1)")
    psi = reflection_state(U)
    dims = (d, d)
    x_true = purity(psi, dims)
    if -math.log(x_true) > S_upper + 1e-9:
        raise ParamOutOfRange("state entropy exceeds S_upper")

    eps = Delta * math.exp(-S_upper) / 4
    # |p_hat - p| <= eps/4 on the SWAP-test bias gives |x_bar - x| <= eps/2
    n_tests = math.ceil(math.log(2 / (1 - confidence)) / (2 * (eps / 4) ** 2))
    p0 = swap_test(psi, dims)
    rng = np.random.default_rng(seed)
    zeros = int(rng.binomial(n_tests, min(1.0, max(0.0, p0))))
    x_bar = 2 * zeros / n_tests - 1
    x_hat = min(1.0, max(math.exp(-S_upper), x_bar + eps / 2))
    copies = 2 * n_tests
    return EntropyEstimate(
        estimate=-math.log(x_hat),
        queries=math.ceil(math.sqrt(d)) * copies,
        copies=copies,
        swap_tests=n_tests,
        purity_mean=x_bar,
        purity_shifted=x_hat,
        precision=eps,
        seed=seed,
    )


def hamsim_discriminator(case: ConstructionCase, evolutions=None) -> float:
    """Advantage of a Hadamard-basis measurement after evolving |+> for t = 2 pi t'.

    ``evolutions`` optionally replaces the exact e^{-i H_k t} by approximations.
    """
    if case.name != "hamsim":
        raise WrongCase(f"expected a hamsim case, got {case.name!r}")
    t = 2 * math.pi * case.params["tprime"]
    if evolutions is None:
        evolutions = tuple(expm_hermitian(H, t) for H in case.hamiltonians)
    probs = [measure_prob(H_GATE @ (check_unitary(V) @ PLUS), 0, 1) for V in evolutions]
    return abs(probs[1] - probs[0])


def _pure_trace_distance(U1, U2, psi) -> float:
    a, b = U1 @ psi, U2 @ psi
    return 0.5 * trace_norm(projector(a) - projector(b))


def brute_force_distinguishability(U1, U2, budget: int = 10_000, seed: int = 0) -> float:
    """Lower bound on half the diamond distance by direct search over inputs.

    Maximizes the trace distance of (U_k (x) I)|psi> over pure |psi> on the
    system doubled by a reference of equal dimension, using random restarts
    followed by coordinate-wise step refinement. ``budget`` caps the number of
    objective evaluations.
    """
    U1 = check_unitary(U1)
    U2 = check_unitary(U2)
    if U1.shape != U2.shape:
        raise DimensionMismatch(f"shapes differ: {U1.shape} vs {U2.shape}")
    if budget < 100:
        raise ParamOutOfRange("budget must be at least 100")
    d = U1.shape[0]
    W1, W2 = np.kron(U1, np.eye(d)), np.kron(U2, np.eye(d))
    rng = np.random.default_rng(seed)
    n = d * d
    evals = 0

    def f(x):
        nonlocal evals
        evals += 1
        v = x[:n] + 1j * x[n:]
        return _pure_trace_distance(W1, W2, v / np.linalg.norm(v))

    restarts = max(1, min(20, budget // 500))
    best = 0.0
    # Explore a handful of random starts, then spend the rest refining the best.
    starts = []
    for _ in range(restarts * 4):
        if evals >= budget // 5:
            break
        x = rng.standard_normal(2 * n)
        starts.append((f(x), x))
    starts.sort(key=lambda s: -s[0])
    for val, x in starts[:restarts]:
        step = 0.5
        share = evals + (budget - evals) // max(1, restarts)
        while evals < min(share, budget) and step > 1e-9:
            improved = False
            for i in range(2 * n):
                for sgn in (1.0, -1.0):
                    if evals >= budget:
                        break
                    y = x.copy()
                    y[i] += sgn * step * np.linalg.norm(x)
                    fy = f(y)
                    if fy > val:
                        x, val, improved = y, fy, True
                        break
            if not improved:
                step /= 2
        best = max(best, val)
        if evals >= budget:
            break
    return min(1.0, best)


@dataclass(frozen=True)
class ExperimentResult:
    trials: int
    successes: int
    empirical_prob: float
    exact_prob: float
    ci95_halfwidth: float
    queries_used: int
    total_evolution_time: float
    seed: int | None

    @property
    def consistent(self) -> bool:
        """False when the sample mean sits more than 5 half-widths from the exact value."""
        if self.trials == 0:
            return True
        return abs(self.empirical_prob - self.exact_prob) <= 5 * self.ci95_halfwidth

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "empirical_prob": self.empirical_prob,
            "exact_prob": self.exact_prob,
            "ci95_halfwidth": self.ci95_halfwidth,
            "queries_used": self.queries_used,
            "total_evolution_time": self.total_evolution_time,
            "seed": self.seed,
            "consistent": self.consistent,
        }


def wilson_halfwidth(successes: int, trials: int, z: float = 1.959963984540054) -> float:
    if trials == 0:
        return 0.0
    p = successes / trials
    denom = 1 + z * z / trials
    return z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom


def run_experiment(
    exact_prob: float,
    trials: int = 0,
    seed: int | None = None,
    queries_used: int = 0,
    total_evolution_time: float = 0.0,
) -> ExperimentResult:
    """Package an exact probability, optionally with ``trials`` seeded Bernoulli samples."""
    if trials < 0:
        raise ParamOutOfRange("trials must be nonnegative")
    if trials > 0 and seed is None:
        raise ParamOutOfRange("sampling requires an explicit seed")
    p = min(1.0, max(0.0, float(exact_prob)))
    successes = int(np.random.default_rng(seed).binomial(trials, p)) if trials else 0
    return ExperimentResult(
        trials=trials,
        successes=successes,
        empirical_prob=successes / trials if trials else p,
        exact_prob=p,
        ci95_halfwidth=wilson_halfwidth(successes, trials),
        queries_used=queries_used * max(1, trials),
        total_evolution_time=total_evolution_time,
        seed=seed,
    )


def query_circuit_advantage(U1, U2, T: int, seed: int, controlled_queries: bool = True) -> float:
    """Advantage of a random T-query circuit at telling U1 from U2.

    The circuit acts on a control qubit, the system and an equal-size
    reference, with Haar-random unitaries between queries. With controlled
    queries U2 is first phase-aligned to U1, the choice under which
    controlled access gives no extra distinguishing power.
    """
    U1 = check_unitary(U1)
    U2 = check_unitary(U2)
    d = U1.shape[0]
    if controlled_queries:
        U2 = np.exp(1j * phase_align(U1, U2)) * U2
    rng = np.random.default_rng(seed)
    D = 2 * d * d
    psi0 = random_state(D, rng)
    Vs = [random_unitary(D, rng) for _ in range(T + 1)]
    inverse = rng.random(T) < 0.5

    def run(U):
        q = np.kron(controlled(U) if controlled_queries else np.kron(np.eye(2), U), np.eye(d))
        qi = dagger(q)
        psi = Vs[0] @ psi0
        for k in range(T):
            psi = Vs[k + 1] @ ((qi if inverse[k] else q) @ psi)
        return measure_prob(psi, 0, 1, (2, d * d))

    return abs(run(U1) - run(U2))


@dataclass(frozen=True)
class SweepRow:
    epsilon: float
    t_min: int
    t_lower_bound: int
    ratio: float
    advantage_at_lower_bound: float
    advantage_bound_at_lower_bound: float


def heisenberg_sweep(
    epsilons, advantage_target: float = 1 / 3, ratio_max: float | None = 4.0
) -> list[SweepRow]:
    """Minimal query count reaching ``advantage_target`` on the phase-estimation pair.

    The circuit applies controlled-U T times between two Hadamards on the
    ancilla; its exact advantage is sin^2(pi T eps). Raises BoundViolation if
    T_min undercuts the lower bound or exceeds ``ratio_max`` times it.
    """
    from .constructions import qpe_pair

    eps_list = [float(e) for e in epsilons]
    if not eps_list:
        raise ParamOutOfRange("no epsilon values given")
    if not 0.0 < advantage_target <= 1.0:
        raise ParamOutOfRange(f"advantage target must lie in (0, 1], got {advantage_target!r}")
    rows = []
    for eps in eps_list:
        if not 0.0 < eps <= 0.1:
            raise ParamOutOfRange(f"epsilon must lie in (0, 0.1], got {eps!r}")
        case = qpe_pair(eps)
        half = diamond_distance(case.U1, case.U2)
        t_lb = query_lower_bound(math.sin(math.pi * eps))
        zero = ket(0, 2)
        cap = 8 * t_lb + 8
        adv = np.abs(repeated_qpe_prob(case.U2, zero, cap) - repeated_qpe_prob(case.U1, zero, cap))
        hits = np.nonzero(adv >= advantage_target)[0]
        if hits.size == 0:
            raise BoundViolation(f"no T <= {cap} reaches advantage {advantage_target} at eps={eps}")
        t_min = int(hits[0]) + 1
        ratio = t_min / t_lb
        a_lb = float(adv[t_lb - 1])
        bound = advantage_upper_bound(t_lb, half)
        too_slow = ratio_max is not None and ratio > ratio_max
        if t_min < t_lb or too_slow or a_lb > bound + 1e-12:
            raise BoundViolation(
                f"eps={eps}: T_min={t_min}, T_lb={t_lb}, advantage {a_lb} vs bound {bound}"
            )
        rows.append(SweepRow(eps, t_min, t_lb, ratio, a_lb, bound))
    return rows
