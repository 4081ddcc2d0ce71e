"""Classification of a single 2x2 matrix up to unit-scaled *-congruence,
and of a symmetric matrix up to T-congruence.

A nonsingular A is sorted by the eigenstructure of its cosquare (A*)^{-1} A
together with the values v* A v on cosquare eigenvectors, whose angular gap
is the invariant that separates the unimodular families (the eigenvalues of
the cosquare alone only determine that gap up to a half-angle ambiguity).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matcore import (
    DEFAULT_TOL,
    Complex2x2,
    GroupElement,
    PairOrbitError,
    SingularInput,
    Sym2x2,
    act_star,
    max_norm,
)

__all__ = [
    "StarTag",
    "StarClass",
    "StarReduction",
    "TCongReduction",
    "AmbiguousNearBoundary",
    "cosquare",
    "classify_star",
    "classify_tcong",
    "takagi",
    "star_representative",
    "STAR_DIMS",
]


class AmbiguousNearBoundary(PairOrbitError):
    """The input sits within tolerance of two distinct families."""

    def __init__(self, message, candidates):
        super().__init__(f"{message}; candidates: {candidates}")
        self.candidates = candidates


class StarTag:
    ZERO = "zero"
    RANK1_SEMIDEF = "rank1_semidef"
    RANK1_NILPOTENT = "rank1_nilpotent"
    DEFINITE = "definite"
    INDEFINITE = "indefinite"
    RECIPROCAL = "reciprocal"
    UNIMODULAR = "unimodular"
    JORDAN = "jordan"

    ALL = (ZERO, RANK1_SEMIDEF, RANK1_NILPOTENT, DEFINITE, INDEFINITE,
           RECIPROCAL, UNIMODULAR, JORDAN)


# Dimensions of the Psi_1 orbits of the eight vertex families.
STAR_DIMS = {
    StarTag.ZERO: 0,
    StarTag.RANK1_SEMIDEF: 4,
    StarTag.RANK1_NILPOTENT: 6,
    StarTag.DEFINITE: 5,
    StarTag.INDEFINITE: 5,
    StarTag.RECIPROCAL: 7,
    StarTag.UNIMODULAR: 7,
    StarTag.JORDAN: 7,
}


@dataclass(frozen=True)
class StarClass:
    """One of the eight vertex families, with its continuous parameter."""

    tag: str
    theta: float | None = None  # in (0, pi), unimodular only
    tau: float | None = None    # in (0, 1), reciprocal only

    def __post_init__(self):
        if self.tag == StarTag.UNIMODULAR:
            if self.theta is None or not (0.0 < self.theta < np.pi):
                raise ValueError("unimodular class needs theta in (0, pi)")
        elif self.tag == StarTag.RECIPROCAL:
            if self.tau is None or not (0.0 < self.tau < 1.0):
                raise ValueError("reciprocal class needs tau in (0, 1)")
        elif self.theta is not None or self.tau is not None:
            raise ValueError(f"{self.tag} takes no parameter")

    @property
    def dim(self) -> int:
        return STAR_DIMS[self.tag]


def star_representative(cls: StarClass) -> Complex2x2:
    """The exact normal-form matrix of the family."""
    t = cls.tag
    if t == StarTag.ZERO:
        return Complex2x2(np.zeros((2, 2)))
    if t == StarTag.RANK1_SEMIDEF:
        return Complex2x2(np.diag([1.0, 0.0]))
    if t == StarTag.RANK1_NILPOTENT:
        return Complex2x2([[0.0, 1.0], [0.0, 0.0]])
    if t == StarTag.DEFINITE:
        return Complex2x2(np.eye(2))
    if t == StarTag.INDEFINITE:
        return Complex2x2(np.diag([1.0, -1.0]))
    if t == StarTag.RECIPROCAL:
        return Complex2x2([[0.0, 1.0], [cls.tau, 0.0]])
    if t == StarTag.UNIMODULAR:
        return Complex2x2(np.diag([1.0, np.exp(1j * cls.theta)]))
    if t == StarTag.JORDAN:
        return Complex2x2([[0.0, 1.0], [1.0, 1j]])
    raise ValueError(f"unknown tag {t}")


@dataclass(frozen=True)
class StarReduction:
    cls: StarClass
    reducer: GroupElement
    residual: float


@dataclass(frozen=True)
class TCongReduction:
    rank: int
    reducer: np.ndarray = field(repr=False)
    residual: float = 0.0


def cosquare(A: Complex2x2, tol: float = DEFAULT_TOL) -> Complex2x2:
    """(A*)^{-1} A, the standard *-congruence invariant; needs A nonsingular."""
    m = A.m
    if abs(np.linalg.det(m)) <= tol:
        raise SingularInput("cosquare needs |det A| > tol")
    return Complex2x2(np.linalg.solve(m.conj().T, m))


def takagi(B: np.ndarray):
    """Takagi factorization B = U diag(s) U^T with U unitary, s >= 0 descending.

    Built from the SVD with a phase correction on blocks of equal singular
    values; B must be symmetric.
    """
    B = np.asarray(B, dtype=complex)
    V, s, Wh = np.linalg.svd(B)
    W = Wh.conj().T
    # Z = V^T W is block diagonal w.r.t. groups of equal singular values,
    # unitary and symmetric there; U = V conj(sqrt(Z)) gives B = U diag(s) U^T.
    Z = V.T @ W
    U = np.zeros((2, 2), dtype=complex)
    scale = max(1.0, s[0])
    if s[0] - s[1] > 1e-12 * scale:
        sq = np.diag(np.sqrt(np.diag(Z)))
    else:
        # equal (or both zero) singular values: matrix square root of 2x2 Z
        sq = _sqrtm_2x2(Z)
    U = V @ sq.conj()
    return U, s


def _sqrtm_2x2(Z: np.ndarray) -> np.ndarray:
    """Principal square root of a 2x2 matrix via its Schur form."""
    evals, vecs = np.linalg.eig(Z)
    if np.linalg.matrix_rank(vecs) < 2:
        # defective: fall back to a series-free direct formula
        tr = np.trace(Z)
        det = np.linalg.det(Z)
        s = np.sqrt(det)
        t = np.sqrt(tr + 2 * s)
        return (Z + s * np.eye(2)) / t
    return vecs @ np.diag(np.sqrt(evals.astype(complex))) @ np.linalg.inv(vecs)


def classify_tcong(B: Sym2x2, tol: float = DEFAULT_TOL) -> TCongReduction:
    """Rank of B under T-congruence plus a reducer Q with Q^T B Q = 1..1,0..0."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    U, s = takagi(B.m)
    cutoff = tol * max(1.0, max_norm(B))
    rank = int(np.sum(s > cutoff))
    scale = np.ones(2)
    scale[:rank] = 1.0 / np.sqrt(s[:rank])
    Q = U.conj() @ np.diag(scale)
    got = Q.T @ B.m @ Q
    want = np.diag([1.0 if i < rank else 0.0 for i in range(2)])
    return TCongReduction(rank=rank, reducer=Q, residual=max_norm(got - want))


# ---------------------------------------------------------------------------
# classify_star
# ---------------------------------------------------------------------------

def _rank(m: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0] if len(s) else 1.0)))


def _polish_star(A: np.ndarray, target: np.ndarray, c0: complex, P0: np.ndarray,
                 iters: int = 60):
    """Gauss-Newton polish of c P* A P = target over (arg c, P)."""
    from scipy.optimize import least_squares

    def pack(c, P):
        return np.concatenate([[np.angle(c)], P.view(float).ravel()])

    def unpack(x):
        c = np.exp(1j * x[0])
        P = x[1:].view(complex).reshape(2, 2)
        return c, P

    def residual(x):
        c, P = unpack(x)
        r = c * (P.conj().T @ A @ P) - target
        return r.view(float).ravel()

    sol = least_squares(residual, pack(c0, P0), method="trf",
                        xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=iters * 9)
    c, P = unpack(sol.x)
    res = float(np.sqrt(sol.cost * 2))
    return c, P, res


def classify_star(A: Complex2x2, tol: float = DEFAULT_TOL) -> StarReduction:
    """Classify A up to unit-scaled *-congruence with an explicit reducer.

    The reducer g satisfies act_star(g, A) == representative within the
    returned residual.  Raises AmbiguousNearBoundary when the invariants sit
    within tol of two families' parameter ranges.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = A.m
    scale = max(1.0, max_norm(A))
    r = _rank(m, tol)

    if r == 0:
        cls = StarClass(StarTag.ZERO)
        g = GroupElement(1.0, np.eye(2))
        return StarReduction(cls, g, max_norm(m))

    if r == 1:
        return _classify_rank1(m, tol, scale)

    return _classify_rank2(m, tol, scale)


def _finish(cls: StarClass, A: np.ndarray, c0, P0) -> StarReduction:
    target = star_representative(cls).m
    c, P, res = _polish_star(A, target, c0, P0)
    g = GroupElement(c / abs(c), P)
    res = max_norm(act_star(g, Complex2x2(A)).m - target)
    return StarReduction(cls, g, res)


def _classify_rank1(m, tol, scale):
    # A = sigma * u v*.  The two rank-1 orbits are separated by whether A is
    # a phase times a Hermitian matrix (factors parallel) or not.
    U, s, Vh = np.linalg.svd(m)
    u = U[:, 0]
    v = Vh[0, :].conj()
    t = np.trace(m)
    semidef = False
    if abs(t) > tol * scale:
        M = np.exp(-1j * np.angle(t)) * m
        semidef = max_norm(M - M.conj().T) <= 2 * tol * scale
    if semidef:
        cls = StarClass(StarTag.RANK1_SEMIDEF)
        # unitary sending u -> e1, then scale so c P* A P = diag(1, 0)
        Q = np.column_stack([u, np.array([-np.conj(u[1]), np.conj(u[0])])])
        lam = np.vdot(u, m @ u)
        c0 = np.conj(lam) / abs(lam)
        P0 = Q @ np.diag([1.0 / np.sqrt(abs(lam)), 1.0])
        return _finish(cls, m, c0, P0)
    cls = StarClass(StarTag.RANK1_NILPOTENT)
    # want c P* A P = e1 e2*: P* must send u -> e1-line and v -> e2-line,
    # so P = (M*)^{-1} for M = [u, v], then a column rescale.
    M = np.column_stack([u, v])
    P0 = np.linalg.inv(M.conj().T)
    val = (P0.conj().T @ m @ P0)[0, 1]
    c0 = np.conj(val) / abs(val)
    P0 = P0 @ np.diag([1.0, 1.0 / abs(val)])
    return _finish(cls, m, c0, P0)


def _angle_gap(q1: complex, q2: complex) -> float:
    """Arc distance between arg(q1) and arg(q2), in [0, pi]."""
    d = abs(np.angle(q1 / q2))
    return float(d)


_AMBIG_FLOOR = 5e-13


def _noise_floor(m):
    """Achievable accuracy of the cosquare invariants: the eigenvalue data
    carries an error of order eps * cond(A)^2."""
    s = np.linalg.svd(m, compute_uv=False)
    cond = s[0] / max(s[-1], 1e-300)
    return max(_AMBIG_FLOOR, 200.0 * np.finfo(float).eps * cond * cond)


def _classify_rank2(m, tol, scale):
    W = np.linalg.solve(m.conj().T, m)  # cosquare
    evals, vecs = np.linalg.eig(W)
    lam1, lam2 = evals
    sep = abs(lam1 - lam2)
    off_scalar = max_norm(W - 0.5 * np.trace(W) * np.eye(2))
    lam_scale = max(1.0, abs(lam1), abs(lam2))
    floor = _noise_floor(m)
    # defective cosquare (eigenvalues split like sqrt of the noise, so the
    # window is sqrt(tol)-sized)
    if sep <= np.sqrt(tol) * lam_scale and off_scalar > np.sqrt(tol) * lam_scale:
        return _reduce_jordan(m, W, tol)
    # reciprocal-modulus gate: tau = 1 is the indefinite boundary
    mods = sorted([abs(lam1), abs(lam2)])
    tau = float(np.sqrt(mods[0] / mods[1]))
    gap_to_one = 1.0 - tau
    if gap_to_one > max(tol * 10, floor * 10):
        return _reduce_reciprocal(m, evals, vecs, tau, tol)
    if gap_to_one > floor:
        raise AmbiguousNearBoundary(
            f"cosquare modulus ratio within tolerance of 1 (tau = {tau})",
            [StarTag.RECIPROCAL, StarTag.INDEFINITE, StarTag.DEFINITE,
             StarTag.UNIMODULAR])
    # unimodular-type spectrum: scalar vs angle-separated
    if sep <= tol * lam_scale and off_scalar <= np.sqrt(tol) * lam_scale:
        return _reduce_scalar_cosquare(m, lam1, tol)
    return _reduce_unimodular(m, evals, vecs, tol)


def _reduce_scalar_cosquare(m, lam, tol):
    # A^{-*} A = mu I with |mu| = 1; A / nu is Hermitian for nu^2 = mu.
    mu = lam / abs(lam)
    nu = np.sqrt(mu)
    H = m / nu
    H = 0.5 * (H + H.conj().T)
    w, Q = np.linalg.eigh(H)
    signs = np.sign(w)
    if np.all(signs > 0) or np.all(signs < 0):
        cls = StarClass(StarTag.DEFINITE)
        flip = 1.0 if np.all(signs > 0) else -1.0
        P0 = Q @ np.diag(1.0 / np.sqrt(np.abs(w)))
        c0 = flip / nu
        c0 = c0 / abs(c0)
    else:
        cls = StarClass(StarTag.INDEFINITE)
        order = np.argsort(-signs)  # positive eigenvalue first
        Q = Q[:, order]
        w = w[order]
        P0 = Q @ np.diag(1.0 / np.sqrt(np.abs(w)))
        c0 = 1.0 / nu
        c0 = c0 / abs(c0)
    return _finish(cls, m, c0, P0)


def _reduce_unimodular(m, evals, vecs, tol):
    v1 = vecs[:, 0]
    v2 = vecs[:, 1]
    q1 = np.vdot(v1, m @ v1)
    q2 = np.vdot(v2, m @ v2)
    gap = _angle_gap(q2, q1)
    floor = _noise_floor(m)
    if gap <= floor:
        return _reduce_scalar_cosquare(m, evals[0], tol)
    if gap <= tol:
        raise AmbiguousNearBoundary(
            f"unimodular angle gap within tolerance of 0 (theta = {gap})",
            [StarTag.UNIMODULAR, StarTag.DEFINITE, StarTag.INDEFINITE])
    if gap >= np.pi - floor:
        # antipodal values: the indefinite family
        P0 = np.column_stack([v1 / np.sqrt(abs(q1)), v2 / np.sqrt(abs(q2))])
        c0 = np.conj(q1) / abs(q1)
        return _finish(StarClass(StarTag.INDEFINITE), m, c0, P0)
    if gap >= np.pi - tol:
        raise AmbiguousNearBoundary(
            f"unimodular angle gap within tolerance of pi (theta = {gap})",
            [StarTag.UNIMODULAR, StarTag.INDEFINITE])
    # order so that the second value sits at +gap from the first
    if np.angle(q2 / q1) < 0:
        v1, v2, q1, q2 = v2, v1, q2, q1
    theta = float(np.angle(q2 / q1))
    theta = min(max(theta, 10 * np.finfo(float).eps), np.pi - 10 * np.finfo(float).eps)
    cls = StarClass(StarTag.UNIMODULAR, theta=theta)
    P0 = np.column_stack([v1 / np.sqrt(abs(q1)), v2 / np.sqrt(abs(q2))])
    c0 = np.conj(q1) / abs(q1)
    return _finish(cls, m, c0, P0)


def _reduce_reciprocal(m, evals, vecs, tau, tol):
    if tau <= tol:
        raise AmbiguousNearBoundary(
            "reciprocal parameter within tol of 0 (nilpotent boundary)",
            [StarTag.RECIPROCAL, StarTag.RANK1_NILPOTENT])
    order = np.argsort(np.abs(evals))
    v_small = vecs[:, order[0]]   # eigenvalue of modulus tau-ish (< 1)
    v_large = vecs[:, order[1]]
    # cosquare eigenvectors with non-unimodular eigenvalues are A-isotropic;
    # P = [a v_small, b v_large] gives an antidiagonal P* A P.
    g12 = np.vdot(v_small, m @ v_large)
    g21 = np.vdot(v_large, m @ v_small)
    # want c * conj(a) b g12 = 1 and c * conj(b) a g21 = tau
    # choose a real > 0; then solve for b and c.
    # |a b| from product: |a|^2|b|^2 |g12 g21| = tau; phase split below.
    ratio = np.sqrt(tau / abs(g12 * g21))
    a = np.sqrt(ratio)
    babs = ratio / a
    # phases: set c = conj(phase of (conj(a) b g12)) once b-phase chosen so
    # that the two equations share it.  Let b = babs * e^{i beta}:
    #   c e^{i beta} g12_ph = 1-phase,  c e^{-i beta} g21_ph = 1-phase.
    # => e^{2 i beta} = g21_ph / g12_ph.
    beta = 0.5 * np.angle(g21 / g12)
    b = babs * np.exp(1j * beta)
    c0 = np.conj(np.conj(a) * b * g12)
    c0 = c0 / abs(c0)
    P0 = np.column_stack([a * v_small, b * v_large])
    # the representative for this tau:
    cls = StarClass(StarTag.RECIPROCAL, tau=tau)
    red = _finish(cls, m, c0, P0)
    if red.residual > np.sqrt(tol):
        # the eigenvector pairing may be swapped; retry with columns exchanged
        P0b = np.column_stack([a * v_large, b * v_small])
        red_b = _finish(cls, m, c0, P0b)
        if red_b.residual < red.residual:
            red = red_b
    return red


def _reduce_jordan(m, W, tol):
    """Reducer onto [[0,1],[1,i]] for defective cosquare.

    With c P* A P = Ji the cosquares satisfy W = (1/c^2) P W_Ji P^{-1}, so
    the first column of P is a W-eigenvector, the second a generalized
    eigenvector with (W - lam) p2 = 2 i lam p1, lam = 1/c^2.  The remaining
    freedom (eigenvector scale gamma and shift s) is a 4-real-variable
    square-ish solve.
    """
    from scipy.optimize import least_squares

    lam = 0.5 * np.trace(W)
    lam = lam / abs(lam)
    N = W - lam * np.eye(2)
    _, _, vh = np.linalg.svd(N)
    v = vh[-1, :].conj()
    g0 = np.linalg.lstsq(N, 2j * lam * v, rcond=None)[0]
    target = star_representative(StarClass(StarTag.JORDAN)).m
    best = None

    def residual_for(c):
        def residual(x):
            gamma = complex(x[0], x[1])
            s = complex(x[2], x[3])
            P = np.column_stack([gamma * v, gamma * g0 + s * v])
            r = c * (P.conj().T @ m @ P) - target
            return r.view(float).ravel()
        return residual

    signs = (1.0 / np.sqrt(lam), -1.0 / np.sqrt(lam))
    for x0 in ([1.0, 0.0, 0.0, 0.0], [0.5, 0.5, 0.3, -0.2],
               [2.0, -1.0, -0.5, 0.5]):
        for c in signs:
            sol = least_squares(residual_for(c), x0, method="lm",
                                max_nfev=250)
            gamma = complex(sol.x[0], sol.x[1])
            s = complex(sol.x[2], sol.x[3])
            P = np.column_stack([gamma * v, gamma * g0 + s * v])
            if abs(np.linalg.det(P)) < 1e-13 or sol.cost > 1e-18:
                if best is None:
                    best = (c, P if abs(np.linalg.det(P)) > 1e-13
                            else np.eye(2), np.sqrt(2 * sol.cost))
                continue
            cc, PP, res = _polish_star(m, target, c, P)
            if best is None or res < best[2]:
                best = (cc, PP, res)
            if best[2] <= 1e-12:
                break
        if best is not None and best[2] <= 1e-12:
            break
    if best is not None and best[2] > 1e-12:
        # fall back to full polish from the best coarse solution
        cc, PP, res = _polish_star(m, target, best[0], best[1])
        if res < best[2]:
            best = (cc, PP, res)
    if best is None:
        return _finish(StarClass(StarTag.JORDAN), m, 1.0, np.eye(2))
    cc, PP, _ = best
    g = GroupElement(cc / abs(cc), PP)
    res = max_norm(act_star(g, Complex2x2(m)).m - target)
    return StarReduction(StarClass(StarTag.JORDAN), g, res)
