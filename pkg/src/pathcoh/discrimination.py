"""Minimum-error discrimination of pure-state ensembles and path information.

Covers the closed-form two-state optimum, the pairwise trace-norm upper
bound, the pretty good measurement, an iterative optimal-POVM solver with a
dual optimality certificate, and the information quantities I(D:M), the
Holevo bound and a lower bound on accessible information.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import dagger, eigh, shannon_entropy, trace_norm, von_neumann_entropy
from .sampling import haar_unitary, subseed

PSD_TOL = 1e-9
COMPLETE_TOL = 1e-9
# Dual gap below which a solver result counts as certified optimal.
CERT_THRESHOLD = 1e-7


@dataclass(frozen=True)
class Ensemble:
    """Weighted set {p_i, |phi_i>} of pure states to discriminate."""

    probs: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        s = np.asarray(self.states, dtype=complex)
        if s.ndim != 2 or p.shape != (s.shape[0],):
            raise ValueError(f"need one probability per state: {p.shape} vs {s.shape}")
        if np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-9:
            raise ValueError(f"probabilities must be >= 0 and sum to 1, got {p}")
        norms = np.linalg.norm(s, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-9:
            raise ValueError(f"states must be unit vectors, norms {norms}")
        object.__setattr__(self, "probs", np.clip(p, 0.0, None))
        object.__setattr__(self, "states", s)

    @property
    def n(self) -> int:
        return self.states.shape[0]

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def projectors(self) -> list[np.ndarray]:
        return [np.outer(s, s.conj()) for s in self.states]

    def average_state(self) -> np.ndarray:
        return np.einsum("i,ij,ik->jk", self.probs, self.states, self.states.conj())


@dataclass(frozen=True)
class Povm:
    """Positive operators summing to identity, one per outcome."""

    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        els = tuple(np.asarray(e, dtype=complex) for e in self.elements)
        if not els:
            raise ValueError("POVM needs at least one element")
        d = els[0].shape[0]
        total = np.zeros((d, d), dtype=complex)
        for k, e in enumerate(els):
            if e.shape != (d, d):
                raise ValueError(f"element {k} has shape {e.shape}, expected {(d, d)}")
            w = np.linalg.eigvalsh((e + dagger(e)) / 2)
            if float(w.min()) < -PSD_TOL:
                raise ValueError(f"element {k} is not PSD: min eigenvalue {w.min():.3e}")
            total += e
        if np.max(np.abs(total - np.eye(d))) > COMPLETE_TOL:
            raise ValueError("POVM elements do not sum to identity")
        object.__setattr__(self, "elements", els)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]


@dataclass(frozen=True)
class DiscriminationResult:
    p_success: float
    povm: Povm
    certificate_gap: float
    iterations: int

    @property
    def certified(self) -> bool:
        return self.certificate_gap <= CERT_THRESHOLD


def success_probability(e: Ensemble, m: Povm) -> float:
    """sum_i p_i <phi_i|Pi_i|phi_i>; extra POVM outcomes never count as correct."""
    if m.dim != e.dim:
        raise ValueError(f"dimension mismatch: POVM {m.dim}, ensemble {e.dim}")
    if len(m.elements) < e.n:
        raise ValueError(f"POVM has {len(m.elements)} outcomes for {e.n} states")
    return float(sum(
        e.probs[i] * (e.states[i].conj() @ m.elements[i] @ e.states[i]).real
        for i in range(e.n)))


def certificate_gap(e: Ensemble, m: Povm) -> float:
    """Dual feasibility residual of a candidate measurement.

    Builds the symmetrized Lagrange operator Y = sum_j p_j rho_j Pi_j;
    Tr Y is the achieved success probability, and Y >= p_i rho_i for all i
    certifies optimality (any Hermitian Y dominating every p_i rho_i upper
    bounds the optimum by Tr Y). Returns the largest negative-eigenvalue
    magnitude over all i (0 when dual-feasible).
    """
    rhos = e.projectors()
    y = np.zeros((e.dim, e.dim), dtype=complex)
    for j in range(e.n):
        y += e.probs[j] * (rhos[j] @ m.elements[j])
    y = (y + dagger(y)) / 2
    gap = 0.0
    for i in range(e.n):
        lo = float(np.linalg.eigvalsh(y - e.probs[i] * rhos[i]).min())
        gap = max(gap, -lo)
    return max(gap, 0.0)


def _herm_power(m: np.ndarray, power: float, cutoff: float = 1e-12) -> np.ndarray:
    """m^power on the support of Hermitian PSD m (eigenvalues <= cutoff -> 0)."""
    w, v = eigh(m)
    w = np.where(w > cutoff, np.clip(w, cutoff, None) ** power, 0.0)
    return (v * w) @ dagger(v)


def _support_and_null(m: np.ndarray, cutoff: float = 1e-12) -> np.ndarray:
    """Projector onto the null space of Hermitian PSD m."""
    w, v = eigh(m)
    mask = (w <= cutoff).astype(float)
    return (v * mask) @ dagger(v)


def helstrom(e: Ensemble) -> DiscriminationResult:
    """Closed-form optimum for two pure states.

    POVM projects onto the positive / negative eigenspaces of
    T = p_1 |phi_1><phi_1| - p_2 |phi_2><phi_2|, null space assigned to
    outcome 1.
    """
    if e.n != 2:
        raise ValueError(f"helstrom needs exactly two states, got {e.n}")
    p1, p2 = e.probs
    overlap = abs(np.vdot(e.states[0], e.states[1]))
    p_success = 0.5 + np.sqrt(max(0.25 - p1 * p2 * overlap**2, 0.0))

    rho1, rho2 = e.projectors()
    t = p1 * rho1 - p2 * rho2
    w, v = eigh(t)
    pos = (v * (w >= 0).astype(float)) @ dagger(v)
    pi1 = (pos + dagger(pos)) / 2
    povm = Povm((pi1, np.eye(e.dim) - pi1))
    return DiscriminationResult(
        p_success=float(p_success),
        povm=povm,
        certificate_gap=certificate_gap(e, povm),
        iterations=0,
    )


def pairwise_bound(e: Ensemble) -> float:
    """Upper bound on the optimal success probability from pairwise trace norms.

    1/N + (1/2N) sum_{i,j} ||T_ij||_1 with T_ij = p_i rho_i - p_j rho_j.
    """
    rhos = e.projectors()
    n = e.n
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                total += trace_norm(e.probs[i] * rhos[i] - e.probs[j] * rhos[j])
    return 1.0 / n + total / (2.0 * n)


def pretty_good_measurement(e: Ensemble) -> Povm:
    """Pi_i = rho^{-1/2} p_i |phi_i><phi_i| rho^{-1/2} with rho = sum p_i rho_i.

    When rho is rank-deficient a completion element on the null space is
    appended so the elements sum to identity.
    """
    rho = e.average_state()
    inv_root = _herm_power(rho, -0.5)
    elements = [e.probs[i] * (inv_root @ r @ inv_root) for i, r in enumerate(e.projectors())]
    null = _support_and_null(rho)
    if np.max(np.abs(null)) > 1e-9:
        elements.append(null)
    return Povm(tuple(elements))


def _project_psd(m: np.ndarray) -> np.ndarray:
    """Nearest PSD matrix to Hermitian m (negative eigenvalues clipped to 0)."""
    w, v = eigh(m)
    return (v * np.clip(w, 0.0, None)) @ dagger(v)


def _renormalize(elements: list[np.ndarray]) -> list[np.ndarray]:
    """Project each element onto the PSD cone, then conjugate by
    (sum Pi)^{-1/2} so the collection sums to identity again."""
    elements = [_project_psd((el + dagger(el)) / 2) for el in elements]
    total = sum(elements)
    inv_root = _herm_power(total, -0.5)
    null = _support_and_null(total)
    n = len(elements)
    out = []
    for el in elements:
        m = inv_root @ el @ inv_root + null / n
        out.append((m + dagger(m)) / 2)
    return out


def _sdp_solve(e: Ensemble, tol: float) -> Povm | None:
    """Solve the minimum-error semidefinite program directly.

    Fallback for the rare ensembles where the fixed-point iteration is
    attracted to a suboptimal stationary point. Returns None if the convex
    solver is unavailable or fails.
    """
    try:
        import cvxpy as cp
    except ImportError:
        return None
    d = e.dim
    rhos = e.projectors()
    pis = [cp.Variable((d, d), hermitian=True) for _ in range(e.n)]
    constraints = [p >> 0 for p in pis]
    constraints.append(sum(pis) == np.eye(d))
    objective = cp.Maximize(cp.real(sum(
        e.probs[i] * cp.trace(rhos[i] @ pis[i]) for i in range(e.n))))
    try:
        cp.Problem(objective, constraints).solve(
            solver=cp.SCS, eps=max(tol, 1e-12), max_iters=100_000)
    except cp.error.SolverError:
        return None
    if pis[0].value is None:
        return None
    return Povm(tuple(_renormalize([np.asarray(p.value) for p in pis])))


def min_error_solve(e: Ensemble, tol: float = 1e-10, max_iter: int = 10000) -> DiscriminationResult:
    """Optimal-POVM search by damped fixed-point iteration, seeded at the PGM.

    Each step maps Pi_i -> S^{-1/2} R_i Pi_i R_i S^{-1/2} with
    R_i = p_i |phi_i><phi_i| and S = sum_j R_j Pi_j R_j, blends it with the
    previous iterate (damping 0.5) and re-projects onto the completeness
    manifold. Terminates when the dual certificate gap drops below `tol`;
    on non-convergence the iteration can stall at a suboptimal attracting
    point, in which case the problem is re-solved as a semidefinite program
    and the better of the two candidates is returned.
    """
    n, d = e.n, e.dim
    rhos = e.projectors()
    weighted = [e.probs[i] * rhos[i] for i in range(n)]

    seed = pretty_good_measurement(e).elements
    pis = [np.array(el) for el in seed[:n]]
    if len(seed) > n:
        # Fold the PGM completion element evenly into the N outcomes.
        for i in range(n):
            pis[i] = pis[i] + seed[n] / n

    best_gap = np.inf
    best_pis = [p.copy() for p in pis]
    best_iter = 0
    check_every = 5
    for it in range(1, max_iter + 1):
        mats = [weighted[i] @ pis[i] @ weighted[i] for i in range(n)]
        s = sum(mats)
        s = (s + dagger(s)) / 2
        inv_root = _herm_power(s, -0.5)
        null = _support_and_null(s)
        new = [inv_root @ m @ inv_root + null / n for m in mats]
        pis = [0.5 * pis[i] + 0.5 * new[i] for i in range(n)]
        pis = [(p + dagger(p)) / 2 for p in pis]
        pis = _renormalize(pis)

        if it % check_every == 0 or it == max_iter:
            povm = Povm(tuple(pis))
            gap = certificate_gap(e, povm)
            if gap < best_gap:
                best_gap = gap
                best_pis = [p.copy() for p in pis]
                best_iter = it
            if gap <= tol:
                break

    if best_gap > CERT_THRESHOLD:
        fallback = _sdp_solve(e, tol)
        if fallback is not None:
            gap = certificate_gap(e, fallback)
            if gap < best_gap:
                best_gap = gap
                best_pis = list(fallback.elements)

    povm = Povm(tuple(best_pis))
    return DiscriminationResult(
        p_success=success_probability(e, povm),
        povm=povm,
        certificate_gap=float(best_gap),
        iterations=best_iter,
    )


def mutual_information(e: Ensemble, m: Povm) -> float:
    """I(D:M) in bits from the joint p_ij = p_i <phi_i|Pi_j|phi_i>."""
    if m.dim != e.dim:
        raise ValueError(f"dimension mismatch: POVM {m.dim}, ensemble {e.dim}")
    joint = np.empty((e.n, len(m.elements)))
    for i in range(e.n):
        for j, el in enumerate(m.elements):
            joint[i, j] = e.probs[i] * (e.states[i].conj() @ el @ e.states[i]).real
    joint = np.clip(joint, 0.0, None)
    h_d = shannon_entropy(joint.sum(axis=1))
    h_m = shannon_entropy(joint.sum(axis=0))
    h_dm = shannon_entropy(joint.ravel())
    return h_d + h_m - h_dm


def holevo(e: Ensemble) -> float:
    """Holevo bound in bits; for pure members this is just S(rho)."""
    return von_neumann_entropy(e.average_state())


def _random_rank1_povm(rng, dim: int) -> Povm:
    u = haar_unitary(rng, dim)
    return Povm(tuple(np.outer(u[:, k], u[:, k].conj()) for k in range(dim)))


def _hill_climb(e: Ensemble, m: Povm, rng, steps: int = 40) -> float:
    """Local ascent of I(D:M) by random perturbations of the element roots."""
    elements = [np.array(el) for el in m.elements]
    best = mutual_information(e, m)
    eps = 0.2
    d = e.dim
    for _ in range(steps):
        proposal = []
        for el in elements:
            g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            a = _herm_power(el, 0.5) + eps * g
            proposal.append(dagger(a) @ a)
        proposal = _renormalize(proposal)
        cand = Povm(tuple(proposal))
        val = mutual_information(e, cand)
        if val > best:
            best = val
            elements = proposal
            eps = min(eps * 1.2, 0.5)
        else:
            eps = max(eps * 0.7, 1e-3)
    return best


def accessible_info_lower(e: Ensemble, restarts: int = 4, seed: int = 0) -> float:
    """Certified lower bound on the accessible information Acc(D), in bits.

    Best I(D:M) over the min-error POVM, the PGM, and `restarts` random
    rank-1 POVMs refined by local ascent. Monotone in `restarts` for a
    fixed seed.
    """
    best = mutual_information(e, min_error_solve(e).povm)
    best = max(best, mutual_information(e, pretty_good_measurement(e)))
    for r in range(restarts):
        rng = subseed(seed, r)
        start = _random_rank1_povm(rng, e.dim)
        best = max(best, _hill_climb(e, start, rng))
    return best
