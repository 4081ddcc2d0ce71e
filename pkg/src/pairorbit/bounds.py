"""Quantitative certificates: the determinant invariant p, lower bounds on
perturbations that could move one pair into another orbit, the unit-scalar
phase/determinant estimates, and the residual expression tables used by the
perturbation analysis.

All bounds are stated for the entrywise max norm.  Distances to the
singular set are certified through the determinant perturbation bound
|det(X+F) - det(X)| <= ||F|| (4 ||X|| + 2 ||F||), which is valid entrywise
(the inverse-norm distance formula holds only for induced norms: the
rank-one symmetric matrix [[1,1],[1,1]]/2 sits at max-norm distance 1/2
from I_2, so a distance bound of ||I^{-1}||^{-1} = 1 would be unsound
here).  Solving the quadratic gives the certified radius

    r(X) = (sqrt(16 ||X||^2 + 8 |det X|) - 4 ||X||) / 4,

and for the identity the sharp value 1/2 is used directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import (
    Complex2x2,
    MatrixPair,
    PairOrbitError,
    max_norm,
)

__all__ = [
    "NonPathCertificate", "PreconditionViolated", "BadParams",
    "det_invariant_p", "nonpath_lower_bound", "phase_estimate",
    "residual_expressions", "RESIDUAL_ROWS",
]


class PreconditionViolated(PairOrbitError):
    pass


class BadParams(PairOrbitError):
    pass


@dataclass(frozen=True)
class NonPathCertificate:
    """A certified lower bound on the perturbation needed to reach dst's
    orbit from src: no (E, F) with ||E|| < bound_E and ||F|| < bound_F can
    put src + (E, F) in the orbit of dst."""

    rule: str
    bound_E: float | None = None
    bound_F: float | None = None

    @property
    def bound(self) -> float:
        vals = [v for v in (self.bound_E, self.bound_F) if v is not None]
        return max(vals) if vals else 0.0

    def to_json(self) -> dict:
        out = {"rule": self.rule}
        if self.bound_E is not None:
            out["bound_E"] = self.bound_E
        if self.bound_F is not None:
            out["bound_F"] = self.bound_F
        return out


def det_invariant_p(src: MatrixPair, dst: MatrixPair) -> float:
    """p = |det A_src det B_dst| - |det B_src det A_dst|; vanishes along any
    closure path from src's orbit to dst's orbit."""
    return float(
        abs(np.linalg.det(src.A.m) * np.linalg.det(dst.B.m))
        - abs(np.linalg.det(src.B.m) * np.linalg.det(dst.A.m)))


def _singularity_radius(X: np.ndarray) -> float:
    """Certified max-norm distance from nonsingular X to the singular set:
    any F with det(X+F) = 0 has ||F|| (4 ||X|| + 2 ||F||) >= |det X|."""
    n = max_norm(X)
    det = abs(np.linalg.det(X))
    if max_norm(X - np.eye(2)) == 0.0:
        return 0.5  # sharp for the identity: (1-d)^2 > d^2 iff d < 1/2
    return float((np.sqrt(16.0 * n * n + 8.0 * det) - 4.0 * n) / 4.0)


def _certificates(src: MatrixPair, dst: MatrixPair, tol: float):
    As, Bs = src.A.m, src.B.m
    Ad, Bd = dst.A.m, dst.B.m
    dAs, dBs = np.linalg.det(As), np.linalg.det(Bs)
    dAd, dBd = np.linalg.det(Ad), np.linalg.det(Bd)
    certs = []
    # nonzero -> zero component
    if max_norm(As) > tol and max_norm(Ad) <= tol:
        certs.append(NonPathCertificate("NormRule", bound_E=max_norm(As)))
    if max_norm(Bs) > tol and max_norm(Bd) <= tol:
        certs.append(NonPathCertificate("NormRule", bound_F=max_norm(Bs)))
    # nonsingular -> singular component
    if abs(dAs) > tol and abs(dAd) <= tol:
        certs.append(NonPathCertificate("SingularityRule",
                                        bound_E=_singularity_radius(As)))
    if abs(dBs) > tol and abs(dBd) <= tol:
        certs.append(NonPathCertificate("SingularityRule",
                                        bound_F=_singularity_radius(Bs)))
    # full-rank B dropping rank under T-congruence: P^T B P is singular, so
    # B~ + F is singular and the singularity radius of B~ certifies F
    sb_s = np.linalg.svd(Bs, compute_uv=False)
    sb_d = np.linalg.svd(Bd, compute_uv=False)
    rk_s = int(np.sum(sb_s > tol * max(1.0, sb_s[0])))
    rk_d = int(np.sum(sb_d > tol * max(1.0, sb_d[0])))
    if rk_s == 2 and rk_d <= 1:
        certs.append(NonPathCertificate("TcongRule",
                                        bound_F=_singularity_radius(Bs)))
    # determinant-ratio rule
    if min(abs(dAs), abs(dBs), abs(dAd), abs(dBd)) > tol:
        p = det_invariant_p(src, dst)
        if abs(p) > tol:
            bE = min(1.0, abs(p) / (4.0 * abs(dBd) * (2.0 * max_norm(As) + 1.0)))
            bF = min(1.0, abs(p) / (4.0 * abs(dAd) * (2.0 * max_norm(Bs) + 1.0)))
            certs.append(NonPathCertificate("DetRatioRule",
                                            bound_E=bE, bound_F=bF))
    return certs


def nonpath_lower_bound(src: MatrixPair, dst: MatrixPair,
                        tol: float = 1e-9,
                        normalize: bool = True) -> NonPathCertificate | None:
    """Largest applicable certified bound, or None when no rule applies.

    None is not a claim that a path exists.  For src not already a normal
    form the certificate is computed on the classified normal form and then
    shrunk by the conservative congruence factor 4 ||Q*|| ||Q|| of the
    reducing element (set normalize=False to skip the reduction).
    """
    scale = 1.0
    if normalize:
        from .families import representative
        from .pairnf import classify_pair
        cf = classify_pair(src, max(tol, 1e-9))
        rep = representative(cf.cls)
        if max_norm(rep.A.m - src.A.m) > tol or max_norm(rep.B.m - src.B.m) > tol:
            Q = cf.reducer.P
            scale = 4.0 * max_norm(Q.conj().T) * max_norm(Q)
            src = rep
    certs = _certificates(src, dst, tol)
    if not certs:
        return None
    prio = {"TcongRule": 3, "SingularityRule": 2, "NormRule": 1, "DetRatioRule": 0}
    best = max(certs, key=lambda c: (c.bound, prio[c.rule]))
    if scale != 1.0:
        bE = None if best.bound_E is None else best.bound_E / scale
        bF = None if best.bound_F is None else best.bound_F / scale
        best = NonPathCertificate(best.rule, bound_E=bE, bound_F=bF)
    return best


def phase_estimate(src_A: Complex2x2, dst_A: Complex2x2, E_norm: float):
    """Bounds on the unit scalar and |det P| for c P* dst_A P = src_A + E.

    Returns (Delta, g_bound, r_bound): c must equal (-1)^k e^{i Delta / 2}
    up to g_bound and |det P| equals |det src_A / det dst_A|^{1/2} up to
    r_bound, provided ||E|| stays within the admissible radius
    |det src_A| / (8 ||src_A|| + 4).
    """
    As, Ad = src_A.m, dst_A.m
    dAs, dAd = np.linalg.det(As), np.linalg.det(Ad)
    if abs(dAs) == 0 or abs(dAd) == 0:
        raise PreconditionViolated("both matrices must be nonsingular")
    radius = abs(dAs) / (8.0 * max_norm(As) + 4.0)
    if E_norm < 0 or E_norm > radius:
        raise PreconditionViolated(
            f"E_norm {E_norm} exceeds admissible radius {radius}")
    delta = float(np.angle(dAs / dAd))
    g_bound = E_norm * (8.0 * max_norm(As) + 4.0) / abs(dAs)
    r_bound = E_norm * (4.0 * max_norm(As) + 2.0) / np.sqrt(abs(dAs * dAd))
    return delta, g_bound, r_bound


# ---------------------------------------------------------------------------
# residual expression rows (the fourth-column expressions, by line)
# ---------------------------------------------------------------------------

def _xyuv(P):
    P = np.asarray(P, dtype=complex)
    return P[0, 0], P[0, 1], P[1, 0], P[1, 1]


def _row_c1(c, P, params):
    theta = params["theta"]
    if not (0.0 < theta < np.pi):
        raise BadParams("C1 needs 0 < theta < pi")
    x, y, u, v = _xyuv(P)
    return [u ** 2, y ** 2, abs(x) ** 2 - 1.0, abs(v) ** 2 - 1.0]


def _row_c3(c, P, params):
    alpha, theta = params["alpha"], params["theta"]
    if alpha not in (0, 1) or not (0.0 <= theta < np.pi):
        raise BadParams("C3 needs alpha in {0,1}, 0 <= theta < pi")
    x, y, u, v = _xyuv(P)
    return [abs(x) ** 2 + np.exp(1j * theta) * abs(u) ** 2 - alpha / c,
            y ** 2, v ** 2]


def _row_c4(c, P, params):
    alpha, tau = params["alpha"], params["tau"]
    if alpha not in (0, 1) or not (0.0 <= tau < 1.0):
        raise BadParams("C4 needs alpha in {0,1}, 0 <= tau < 1")
    x, y, u, v = _xyuv(P)
    xbu = np.conj(x) * u
    return [np.conj(y) * v, np.conj(x) * v, np.conj(u) * y,
            (1 + tau) * xbu.real + 1j * (1 - tau) * xbu.imag - alpha / c]


def _row_c5(c, P, params):
    alpha, beta, omega = params["alpha"], params["beta"], params["omega"]
    ok = (beta == 1 and alpha == 0 and omega in (0, 1j)) or \
        (beta == 0 and alpha in (0, 1) and omega == -alpha)
    if not ok:
        raise BadParams("C5 constraint on (alpha, beta, omega) violated")
    x, y, u, v = _xyuv(P)

    def exprs(k):
        s = (-1.0) ** k
        return [2 * (np.conj(x) * u).real - s * alpha,
                2 * (np.conj(y) * v).real - s * np.real(omega),
                np.conj(x) * v + np.conj(u) * y - s * beta,
                u ** 2,
                abs(v) ** 2 - s * np.imag(omega)]
    return _best_k(exprs)


def _row_c6(c, P, params):
    tau = params["tau"]
    if not (0.0 <= tau < 1.0):
        raise BadParams("C6 needs 0 <= tau < 1")
    x, y, u, v = _xyuv(P)
    return [np.conj(x) * u, np.conj(y) * v, np.conj(y) * u,
            np.conj(v) * x - 1.0 / c]


def _row_c7(c, P, params):
    alpha, beta, omega = params["alpha"], params["beta"], params["omega"]
    ok = (alpha == 0 and omega == 0 and beta == 1) or \
        (beta == 0 and alpha in (0, 1) and omega in (0, alpha, -alpha))
    if not ok:
        raise BadParams("C7 constraint on (alpha, beta, omega) violated")
    x, y, u, v = _xyuv(P)

    def exprs(k):
        s = (-1.0) ** k
        return [2 * (np.conj(y) * v).real - s * omega,
                2 * (np.conj(x) * u).real - s * alpha,
                (np.conj(x) * v + np.conj(u) * y) - s * beta]
    return _best_k(exprs)


def _row_c9(c, P, params):
    alpha, omega, sigma = params["alpha"], params["omega"], params["sigma"]
    if sigma not in (1, -1):
        raise BadParams("C9 needs sigma in {1,-1}")
    ok = (alpha == 1 and omega in (sigma, 0)) or (alpha == 0 and omega == 0)
    if not ok:
        raise BadParams("C9 constraint on (alpha, omega) violated")
    x, y, u, v = _xyuv(P)
    return [(abs(x) ** 2 + sigma * abs(u) ** 2) - alpha / c,
            np.conj(x) * y + sigma * np.conj(u) * v,
            (abs(y) ** 2 + sigma * abs(v) ** 2) - omega / c]


def _row_c10(c, P, params):
    alpha = params["alpha"]
    if alpha not in (0, 1):
        raise BadParams("C10 needs alpha in {0,1}")
    x, y, u, v = _xyuv(P)
    return [np.conj(x) * v + np.conj(u) * y,
            np.conj(u) * v,
            (np.conj(y) * u).real,
            v ** 2,
            2 * (np.conj(x) * u).real + 1j * abs(u) ** 2 - alpha / c]


def _row_c11(c, P, params):
    alpha = params["alpha"]
    if alpha not in (0, 1):
        raise BadParams("C11 needs alpha in {0,1}")
    x, y, u, v = _xyuv(P)
    return [y ** 2, abs(x) ** 2 - alpha]


def _row_c12(c, P, params):
    x, y, u, v = _xyuv(P)

    def exprs(k):
        s = (-1.0) ** k
        return [np.conj(x) * y - np.conj(u) * v - s,
                abs(x) ** 2 - abs(u) ** 2,
                abs(y) ** 2 - abs(v) ** 2]
    return _best_k(exprs)


def _best_k(exprs):
    """Rows containing (-1)^k pick the integer branch minimizing the
    largest modulus."""
    e0, e1 = exprs(0), exprs(1)
    m0 = max(abs(z) for z in e0)
    m1 = max(abs(z) for z in e1)
    return e0 if m0 <= m1 else e1


RESIDUAL_ROWS = {
    "C1": (_row_c1, ("theta",)),
    "C3": (_row_c3, ("alpha", "theta")),
    "C4": (_row_c4, ("alpha", "tau")),
    "C5": (_row_c5, ("alpha", "beta", "omega")),
    "C6": (_row_c6, ("tau",)),
    "C7": (_row_c7, ("alpha", "beta", "omega")),
    "C9": (_row_c9, ("alpha", "omega", "sigma")),
    "C10": (_row_c10, ("alpha",)),
    "C11": (_row_c11, ("alpha",)),
    "C12": (_row_c12, ()),
}


def residual_expressions(row: str, c: complex, P, params: dict | None = None):
    """Moduli of the given row's expressions at (c, P = [[x,y],[u,v]]).

    Rows are named C1, C3, C4, C5, C6, C7, C9, C10, C11, C12.  Each remains
    bounded by a multiple of ||E|| along any realization c P* A P = A~ + E
    of its (A~, A) line.  BadParams is raised when the row's parameter
    constraints are violated.
    """
    if row not in RESIDUAL_ROWS:
        raise BadParams(f"unknown row {row}; valid: {sorted(RESIDUAL_ROWS)}")
    fn, names = RESIDUAL_ROWS[row]
    params = dict(params or {})
    missing = [n for n in names if n not in params]
    if missing:
        raise BadParams(f"row {row} needs parameters {missing}")
    c = complex(c)
    if abs(abs(c) - 1.0) > 1e-9:
        raise BadParams("|c| must be 1")
    vals = fn(c, P, params)
    return [float(abs(z)) for z in vals]
