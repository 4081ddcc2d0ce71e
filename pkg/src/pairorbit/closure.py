"""Closure graphs for the three actions, with numeric edge conditions.

Vertices of the pair graph are the 42 normal-form families; an edge from a
family S to a family T (with a condition on both parameter sets) means that
the S-representative lies in the closure of the T-orbit, i.e. arbitrarily
small perturbations of the S form meet T's orbit.  Every positive edge is
realized by an explicit verified witness curve in the witness module, and
every declared edge passes the necessary conditions (A-part reachability,
monotone B rank, vanishing determinant invariant p, strictly increasing
orbit dimension) checked by the validator below.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .congruence import STAR_DIMS, StarClass, StarTag
from .families import FAMILIES, OrbitClass, representative
from .matcore import PairOrbitError, max_norm

__all__ = [
    "EdgeCondition", "UnknownEdge", "psi2_path", "psi1_path", "pair_path",
    "pair_path_detail", "max_f", "export_graph", "validate_graph",
    "pair_edges", "necessary_conditions_ok", "B_RANKS",
]

_PTOL = 1e-12


class UnknownEdge(PairOrbitError):
    """The closure data does not determine this (src, dst) pair."""


# B-rank of each family's representative (constant on the family).
B_RANKS = {
    ("zero", "zero"): 0, ("zero", "rank1"): 1, ("zero", "full"): 2,
    ("rank1_semidef", "zero"): 0, ("rank1_semidef", "a_plus_0"): 1,
    ("rank1_semidef", "zero_plus_1"): 1, ("rank1_semidef", "antidiag_1"): 2,
    ("rank1_semidef", "a_plus_1"): 2,
    ("rank1_nilpotent", "zero"): 0, ("rank1_nilpotent", "antidiag_b"): 2,
    ("rank1_nilpotent", "one_plus_0"): 1, ("rank1_nilpotent", "zero_plus_1"): 1,
    ("rank1_nilpotent", "a_plus_1"): 2, ("rank1_nilpotent", "zeta_b_1"): -1,
    ("rank1_nilpotent", "one_b_0"): 2,
    ("definite", "zero"): 0, ("definite", "d0_plus_d"): -1,
    ("definite", "a_lt_d"): 2,
    ("indefinite", "zero"): 0, ("indefinite", "d0_plus_d"): -1,
    ("indefinite", "antidiag_b"): 2, ("indefinite", "a_lt_d"): 2,
    ("indefinite", "h_one_plus_0"): 1, ("indefinite", "h_zero_b_1"): 2,
    ("indefinite", "h_one_plus_de"): 2,
    ("unimodular", "zero"): 0, ("unimodular", "a_plus_0"): 1,
    ("unimodular", "zero_plus_d"): 1, ("unimodular", "antidiag_b"): 2,
    ("unimodular", "a_b_0"): 2, ("unimodular", "zero_b_d"): 2,
    ("unimodular", "generic"): -1,
    ("reciprocal", "zero"): 0, ("reciprocal", "antidiag_b"): 2,
    ("reciprocal", "one_plus_zeta"): -1, ("reciprocal", "zero_plus_1"): 1,
    ("reciprocal", "generic"): -1, ("reciprocal", "zero_b_eiphi"): 2,
    ("jordan", "zero"): 0, ("jordan", "zero_plus_d"): 1,
    ("jordan", "antidiag_b"): 2, ("jordan", "a_plus_zeta"): -1,
}


def b_rank(cls: OrbitClass, rtol: float = 1e-9) -> int:
    """B rank of the family member, decided from the parameters (which keep
    full precision even when the assembled matrix is badly scaled)."""
    r = B_RANKS[cls.key()]
    if r >= 0:
        return r
    p = {k: complex(v) for k, v in cls.params.items()}
    f = cls.b_form
    if f == "d0_plus_d":
        return 2 if abs(p["d0"]) > rtol * abs(p["d"]) else 1
    if f == "zeta_b_1":
        det = p["zeta"] - p["b"] ** 2
        scale = max(1.0, abs(p["zeta"]), abs(p["b"]) ** 2)
    elif f == "one_plus_zeta":
        det = p["zeta"]
        scale = max(1.0, abs(p["zeta"]))
    elif f == "a_plus_zeta":
        det = p["a"] * p["zeta"]
        scale = max(1.0, abs(p["a"] * p["zeta"]), abs(p["a"]))
    elif f == "generic" and cls.a_family == StarTag.UNIMODULAR:
        det = p["a"] * p["d"] - (p["r"] * np.exp(1j * p["phi"].real)) ** 2
        scale = max(1.0, abs(p["a"] * p["d"]), abs(p["r"]) ** 2)
    elif f == "generic" and cls.a_family == StarTag.RECIPROCAL:
        det = np.exp(1j * p["phi"].real) * p["zeta"] - p["b"] ** 2
        scale = max(1.0, abs(p["zeta"]), abs(p["b"]) ** 2)
    else:  # pragma: no cover
        s = np.linalg.svd(representative(cls).B.m, compute_uv=False)
        return int(np.sum(s > 1e-12 * max(1.0, s[0])))
    return 2 if abs(det) > rtol * scale else 1


# ---------------------------------------------------------------------------
# Psi_2 (T-congruence) and Psi_1 graphs
# ---------------------------------------------------------------------------

def psi2_path(rank_src: int, rank_dst: int) -> bool:
    """0_2 -> 1+0 -> I_2: reachable iff the rank does not decrease."""
    if rank_src not in (0, 1, 2) or rank_dst not in (0, 1, 2):
        raise ValueError("ranks must be 0, 1 or 2")
    return rank_src <= rank_dst


# nontrivial arrows of the Psi_1 closure graph (plus transitivity)
_PSI1_EDGES = {
    StarTag.ZERO: {StarTag.RANK1_SEMIDEF},
    StarTag.RANK1_SEMIDEF: {StarTag.RANK1_NILPOTENT, StarTag.DEFINITE,
                            StarTag.INDEFINITE, StarTag.JORDAN,
                            StarTag.UNIMODULAR, StarTag.RECIPROCAL},
    StarTag.INDEFINITE: {StarTag.JORDAN},
}


def _psi1_reach(tag: str) -> set:
    seen = set()
    todo = [tag]
    while todo:
        t = todo.pop()
        for nxt in _PSI1_EDGES.get(t, ()):
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


def psi1_path(src: StarClass, dst: StarClass) -> bool:
    """Edge relation of the Psi_1 closure graph with its transitive closure.

    Continuous-parameter vertices reach only their own parameter value
    among same-family targets.
    """
    if src.tag == dst.tag:
        if src.tag == StarTag.UNIMODULAR:
            return abs(src.theta - dst.theta) <= 1e-12
        if src.tag == StarTag.RECIPROCAL:
            return abs(src.tau - dst.tau) <= 1e-12
        return True
    return dst.tag in _psi1_reach(src.tag)


# ---------------------------------------------------------------------------
# the constrained maximum M of |a r^2 e^{i b} + 2 b r t + d t^2 e^{-i b}|
# ---------------------------------------------------------------------------

def _beta_max(u: float, w: float, v: complex) -> float:
    """max over beta of |u e^{i beta} + w + v e^{-i beta}|, u, w >= 0 real."""
    X = u + np.conj(v)
    Y = u * np.conj(v)
    best = 0.0
    # critical points: 2 Y z^4 + w X z^3 - w conj(X) z - 2 conj(Y) = 0, z on S^1
    coeffs = np.array([2.0 * Y, w * X, 0.0, -w * np.conj(X), -2.0 * np.conj(Y)])
    nz = np.nonzero(np.abs(coeffs) > 0)[0]
    cands = [1.0 + 0j, -1.0 + 0j, 1j, -1j]
    if len(nz) and nz[0] < 4:
        roots = np.roots(coeffs[nz[0]:])
        for z in roots:
            if abs(z) > 1e-12:
                cands.append(z / abs(z))
    for z in cands:
        val = abs(u * z + w + v / z)
        if val > best:
            best = val
    return best


def max_f(a: float, b: float, d: complex, theta: float,
          tol: float = 1e-9) -> float:
    """Global maximum of f(r,t,beta) = |a r^2 e^{i beta} + 2 b r t
    + d t^2 e^{-i beta}| subject to r^4 + 2 r^2 t^2 cos(theta) + t^4 = 1.

    The feasible (R, T) = (r^2, t^2) arc is parametrized by the direction
    angle xi in [0, pi/2]; the inner beta-maximum is exact (quartic critical
    points), the outer arc maximum is a dense scan refined by golden section.
    """
    if a < 0 or b < 0:
        raise ValueError("a and b must be nonnegative")
    if not (0.0 <= theta < np.pi):
        raise ValueError("theta must lie in [0, pi)")
    d = complex(d)
    ct = np.cos(theta)

    def h(xi):
        den = 1.0 + ct * np.sin(2.0 * xi)
        rho = 1.0 / np.sqrt(den)
        R, T = rho * np.cos(xi), rho * np.sin(xi)
        return _beta_max(a * R, 2.0 * b * np.sqrt(R * T), d * T)

    n = 600
    xs = np.linspace(0.0, np.pi / 2.0, n)
    vals = np.array([h(x) for x in xs])
    best = float(np.max(vals))
    order = np.argsort(vals)[::-1][:4]
    gr = 0.5 * (np.sqrt(5.0) - 1.0)
    for i in order:
        lo = xs[max(int(i) - 1, 0)]
        hi = xs[min(int(i) + 1, n - 1)]
        x1 = hi - gr * (hi - lo)
        x2 = lo + gr * (hi - lo)
        f1, f2 = h(x1), h(x2)
        while hi - lo > tol / 10.0:
            if f1 < f2:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + gr * (hi - lo)
                f2 = h(x2)
            else:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - gr * (hi - lo)
                f1 = h(x1)
        best = max(best, f1, f2)
    return best


def _m_bound_for(dst: OrbitClass) -> float:
    """M for targets with A = 1 (+) e^{i theta} (theta = 0 meaning I_2)."""
    p = dst.params
    f = dst.b_form
    if dst.a_family == StarTag.DEFINITE:
        theta = 0.0
        if f == "zero":
            return 0.0
        if f == "d0_plus_d":
            return max_f(abs(p["d0"]), 0.0, p["d"], theta)
        return max_f(float(np.real(p["a"])), 0.0, p["d"], theta)
    theta = float(np.real(p["theta"]))
    if f == "zero":
        return 0.0
    if f == "a_plus_0":
        return max_f(float(np.real(p["a"])), 0.0, 0.0, theta)
    if f == "zero_plus_d":
        return max_f(0.0, 0.0, p["d"], theta)
    if f == "antidiag_b":
        return max_f(0.0, float(np.real(p["b"])), 0.0, theta)
    if f == "a_b_0":
        return max_f(float(np.real(p["a"])), float(np.real(p["b"])), 0.0, theta)
    if f == "zero_b_d":
        return max_f(0.0, float(np.real(p["b"])), p["d"], theta)
    if f == "generic":
        # complex off-diagonal r e^{i phi} folds into a rotated d
        phi = float(np.real(p["phi"]))
        d_eff = complex(p["d"]) * np.exp(-2j * phi)
        return max_f(float(np.real(p["a"])), float(np.real(p["r"])), d_eff, theta)
    raise ValueError(f)


# ---------------------------------------------------------------------------
# pair closure graph: positive edges with conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeCondition:
    """Evaluable edge predicate between two parameterized families."""

    kind: str          # always | param_eq | interval | max_bound | never
    text: str
    fn: object = None  # callable(src_params, dst_params) -> bool

    def evaluate(self, src: OrbitClass, dst: OrbitClass) -> bool:
        if self.kind == "always":
            return True
        if self.kind == "never":
            return False
        return bool(self.fn(src, dst))


_ALWAYS = EdgeCondition("always", "always")


def _eq(x, y, tol=1e-9):
    return abs(complex(x) - complex(y)) <= tol


def _cond(kind, text, fn):
    return EdgeCondition(kind, text, fn)


def _build_pair_edges():
    Z = StarTag.ZERO
    S = StarTag.RANK1_SEMIDEF
    N = StarTag.RANK1_NILPOTENT
    D = StarTag.DEFINITE
    E = StarTag.INDEFINITE
    U = StarTag.UNIMODULAR
    R = StarTag.RECIPROCAL
    J = StarTag.JORDAN
    edges = {}

    def add(src, dst, cond=_ALWAYS):
        edges[(src, dst)] = cond

    all_keys = list(FAMILIES)
    z0 = (Z, "zero")
    for k in all_keys:
        if k != z0:
            add(z0, k)

    # --- source (0_2, 1+0) ---
    z1 = (Z, "rank1")
    for k in [(Z, "full"), (S, "zero_plus_1"), (S, "antidiag_1"), (S, "a_plus_1"),
              (N, "one_plus_0"), (N, "zero_plus_1"), (N, "a_plus_1"),
              (N, "zeta_b_1"), (N, "one_b_0"),
              (E, "d0_plus_d"), (E, "antidiag_b"), (E, "a_lt_d"),
              (E, "h_one_plus_0"), (E, "h_zero_b_1"), (E, "h_one_plus_de"),
              (J, "antidiag_b"), (J, "a_plus_zeta"),
              (R, "one_plus_zeta"), (R, "zero_plus_1"), (R, "generic"),
              (R, "zero_b_eiphi")]:
        add(z1, k)

    add((Z, "full"), (S, "antidiag_1"))

    # --- source (1+0, 0_2) ---
    s0 = (S, "zero")
    for k in [(S, "zero_plus_1"), (S, "a_plus_1"),
              (N, "zero"), (N, "one_plus_0"), (N, "zero_plus_1"),
              (N, "a_plus_1"), (N, "zeta_b_1"), (N, "one_b_0"),
              (D, "zero"), (D, "d0_plus_d"), (D, "a_lt_d"),
              (E, "zero"), (E, "antidiag_b"), (E, "a_lt_d"),
              (E, "h_one_plus_0"), (E, "h_zero_b_1"), (E, "h_one_plus_de"),
              (U, "zero"), (U, "a_plus_0"), (U, "zero_plus_d"), (U, "antidiag_b"),
              (U, "a_b_0"), (U, "zero_b_d"), (U, "generic"),
              (R, "zero"), (R, "one_plus_zeta"), (R, "zero_plus_1"),
              (R, "generic"), (R, "zero_b_eiphi"),
              (J, "zero"), (J, "zero_plus_d"), (J, "antidiag_b"),
              (J, "a_plus_zeta")]:
        add(s0, k)
    # the scalar dI2 form is scale-rigid on the indefinite side: reaching it
    # from (1+0, a~+0) needs a~ >= d, so a~ = 0 only reaches d0 = 0
    add(s0, (E, "d0_plus_d"),
        _cond("param_eq", "d0 = 0",
              lambda s, t: _eq(t.params["d0"], 0.0)))

    # --- source (1+0, a~ + 0) ---
    sa = (S, "a_plus_0")

    def atil(src):
        return float(np.real(src.params["a"]))

    for k in [(S, "zero_plus_1"), (S, "a_plus_1"),
              (N, "one_plus_0"), (N, "zero_plus_1"), (N, "a_plus_1"),
              (N, "zeta_b_1"), (N, "one_b_0"),
              (E, "antidiag_b"), (E, "a_lt_d"),
              (E, "h_one_plus_0"), (E, "h_zero_b_1"), (E, "h_one_plus_de"),
              (J, "antidiag_b"), (J, "a_plus_zeta"),
              (R, "one_plus_zeta"), (R, "zero_plus_1"), (R, "generic"),
              (R, "zero_b_eiphi")]:
        add(sa, k)
    add(sa, (E, "d0_plus_d"),
        _cond("param_eq", "d0 = 0, or a~ >= d",
              lambda s, t: _eq(t.params["d0"], 0.0)
              or atil(s) >= float(np.real(t.params["d"])) - 1e-12))
    add(sa, (N, "antidiag_b"),
        _cond("param_eq", "a~ = 2b",
              lambda s, t: _eq(atil(s), 2.0 * np.real(t.params["b"]), 1e-9)))
    add(sa, (R, "antidiag_b"),
        _cond("interval", "a~ in [2b/(1+tau), 2b/(1-tau)]",
              lambda s, t: _interval_ok(atil(s), t)))
    add(sa, (J, "zero_plus_d"),
        _cond("max_bound", "a~ <= d",
              lambda s, t: atil(s) <= float(np.real(t.params["d"])) + 1e-12))
    for k in [(D, "d0_plus_d"), (D, "a_lt_d"),
              (U, "a_plus_0"), (U, "zero_plus_d"), (U, "antidiag_b"),
              (U, "a_b_0"), (U, "zero_b_d"), (U, "generic")]:
        add(sa, k,
            _cond("max_bound", "a~ <= M(B, theta)",
                  lambda s, t: atil(s) <= _m_bound_for(t) + 1e-9))

    # --- same-A internal edges ---
    add((N, "zero"), (N, "one_plus_0"))
    add((N, "zero"), (N, "zero_plus_1"))
    add((N, "antidiag_b"), (N, "one_b_0"),
        _cond("param_eq", "b' = b",
              lambda s, t: _eq(s.params["b"], t.params["b"])))
    add((N, "antidiag_b"), (N, "zeta_b_1"),
        _cond("param_eq", "b' = b, zeta = 0",
              lambda s, t: _eq(s.params["b"], t.params["b"])
              and _eq(t.params["zeta"], 0.0)))
    add((R, "zero"), (R, "one_plus_zeta"),
        _cond("param_eq", "same tau, zeta = 0",
              lambda s, t: _eq(s.params["tau"], t.params["tau"])
              and _eq(t.params["zeta"], 0.0)))
    add((R, "zero"), (R, "zero_plus_1"),
        _cond("param_eq", "same tau",
              lambda s, t: _eq(s.params["tau"], t.params["tau"])))
    add((R, "antidiag_b"), (R, "generic"),
        _cond("param_eq", "same tau, b' = b, zeta = 0",
              lambda s, t: _eq(s.params["tau"], t.params["tau"])
              and _eq(s.params["b"], t.params["b"])
              and _eq(t.params["zeta"], 0.0)))
    add((R, "antidiag_b"), (R, "zero_b_eiphi"),
        _cond("param_eq", "same tau, b' = b",
              lambda s, t: _eq(s.params["tau"], t.params["tau"])
              and _eq(s.params["b"], t.params["b"])))

    # --- indefinite sources ---
    add((E, "zero"), (J, "zero"))
    add((E, "zero"), (J, "zero_plus_d"))
    add((E, "zero"), (E, "h_one_plus_0"))
    add((E, "d0_plus_d"), (J, "antidiag_b"),
        _cond("param_eq", "b = d = d0",
              lambda s, t: _eq(s.params["d0"], s.params["d"])
              and _eq(t.params["b"], s.params["d"])))
    add((E, "d0_plus_d"), (E, "h_zero_b_1"),
        _cond("param_eq", "b = d = d0 = 1",
              lambda s, t: _eq(s.params["d0"], s.params["d"])
              and _eq(s.params["d"], 1.0) and _eq(t.params["b"], 1.0)))
    return edges


def _interval_ok(atil, t):
    tau = float(np.real(t.params["tau"]))
    b = float(np.real(t.params["b"]))
    lo, hi = 2.0 * b / (1.0 + tau), 2.0 * b / (1.0 - tau)
    return lo - 1e-12 <= atil <= hi + 1e-12


_PAIR_EDGES = _build_pair_edges()


def pair_edges():
    """Family-level edge map: (src_key, dst_key) -> EdgeCondition."""
    return dict(_PAIR_EDGES)


def _star_of(cls: OrbitClass) -> StarClass:
    t = cls.a_family
    if t == StarTag.UNIMODULAR:
        return StarClass(t, theta=float(np.real(cls.params["theta"])))
    if t == StarTag.RECIPROCAL:
        return StarClass(t, tau=float(np.real(cls.params["tau"])))
    return StarClass(t)


def det_p_of_classes(src: OrbitClass, dst: OrbitClass) -> float:
    ps, pd = representative(src), representative(dst)
    return abs(np.linalg.det(ps.A.m) * np.linalg.det(pd.B.m)) - \
        abs(np.linalg.det(ps.B.m) * np.linalg.det(pd.A.m))


def necessary_conditions_ok(src: OrbitClass, dst: OrbitClass,
                            ptol: float = _PTOL):
    """Necessary conditions for a closure path; returns (ok, reason)."""
    if not psi1_path(_star_of(src), _star_of(dst)):
        return False, "no Psi1 path between the A parts"
    if not psi2_path(b_rank(src), b_rank(dst)):
        return False, "B rank decreases"
    p = det_p_of_classes(src, dst)
    scale = max(1.0, max_norm(representative(src).B.m) ** 2,
                max_norm(representative(dst).B.m) ** 2)
    if abs(p) > ptol * scale:
        return False, f"determinant invariant p = {p:.3e} != 0"
    if dst.dim <= src.dim:
        return False, "orbit dimension does not increase"
    return True, "necessary conditions hold"


def pair_path_detail(src: OrbitClass, dst: OrbitClass):
    """Full evaluation: returns (verdict, explanation) with verdict one of
    'true', 'false', 'unknown'."""
    if src.key() == dst.key():
        same = src.close_to(dst, 1e-9)
        return ("true", "trivial path (same orbit)") if same else \
            ("false", "same family, different parameters (equal dimensions)")
    ok, reason = necessary_conditions_ok(src, dst)
    if not ok:
        return "false", reason
    cond = _PAIR_EDGES.get((src.key(), dst.key()))
    if cond is None:
        return "false", "no path (case analysis of the closure graph)"
    if cond.evaluate(src, dst):
        return "true", cond.text
    return "false", f"edge condition fails: {cond.text}"


def pair_path(src: OrbitClass, dst: OrbitClass) -> bool:
    verdict, _ = pair_path_detail(src, dst)
    if verdict == "unknown":
        raise UnknownEdge(f"{src} -> {dst} undetermined")
    return verdict == "true"


# ---------------------------------------------------------------------------
# edge sampling (shared by the validator and the witness tests)
# ---------------------------------------------------------------------------

def _sample_edge_instances(src_key, dst_key, cond, n, seed=0):
    """Parameter draws for src/dst satisfying the edge condition."""
    from .families import sample_params
    rng = np.random.default_rng(seed)
    sspec, dspec = FAMILIES[src_key], FAMILIES[dst_key]
    out = []
    guard = 0
    while len(out) < n and guard < 50 * n + 200:
        guard += 1
        i = guard
        dst = sample_params(dspec, n=1, seed=seed + 7919 * i)[0]
        src = sample_params(sspec, n=1, seed=seed + 104729 * i)[0]
        sp, dp = dict(src.params), dict(dst.params)
        # tie parameters so the condition holds
        if cond.kind != "always":
            t = cond.text
            if "same tau" in t:
                sp["tau"] = dp["tau"]
            if "b' = b" in t and "b" in sp and "b" in dp:
                dp["b"] = sp["b"]
            if "zeta = 0" in t and "zeta" in dp:
                dp["zeta"] = 0j
            if "b = d = d0 = 1" in t:
                sp["d0"] = sp["d"] = 1.0
                dp["b"] = 1.0
            elif "b = d = d0" in t:
                sp["d0"] = sp["d"]
                dp["b"] = sp["d"]
            if t == "d0 = 0":
                dp["d0"] = 0.0
            if t == "d0 = 0, or a~ >= d":
                if i % 2 == 0:
                    dp["d0"] = 0.0
                else:
                    dp["d0"] = dp["d"]
                    sp["a"] = float(np.real(dp["d"])) * float(rng.uniform(1.0, 2.0))
            if t == "a~ = 2b":
                sp["a"] = 2.0 * float(np.real(dp["b"]))
            if cond.kind == "interval":
                tau = float(np.real(dp["tau"]))
                b = float(np.real(dp["b"]))
                lo, hi = 2 * b / (1 + tau), 2 * b / (1 - tau)
                sp["a"] = float(rng.uniform(lo, min(hi, lo * 4.0)))
            if t == "a~ <= d":
                sp["a"] = float(np.real(dp["d"])) * float(rng.uniform(0.2, 1.0))
            if t == "a~ <= M(B, theta)":
                try:
                    dst_try = OrbitClass(dst.a_family, dst.b_form, dp)
                except ValueError:
                    continue
                M = _m_bound_for(dst_try)
                if M <= 0:
                    continue
                sp["a"] = M * float(rng.uniform(0.1, 0.999))
        try:
            out.append((OrbitClass(src.a_family, src.b_form, sp),
                        OrbitClass(dst.a_family, dst.b_form, dp)))
        except ValueError:
            continue
    return out


def validate_graph(samples_per_edge: int = 20, seed: int = 0) -> dict:
    """Check every declared pair-graph edge against the necessary conditions.

    For each edge, parameters are sampled consistently with the edge
    condition and the Psi1-path, B-rank, p = 0 and strict-dimension checks
    are evaluated; the report lists violations (expected: none).
    """
    violations = []
    checked = 0
    for (sk, dk), cond in sorted(_PAIR_EDGES.items()):
        for src, dst in _sample_edge_instances(sk, dk, cond,
                                               samples_per_edge, seed):
            checked += 1
            ok, reason = necessary_conditions_ok(src, dst)
            if not ok:
                violations.append({"src": str(src), "dst": str(dst),
                                   "reason": reason})
    return {"edges": len(_PAIR_EDGES), "instances_checked": checked,
            "violations": violations}


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def _vertex_id(key):
    return f"{key[0]}|{key[1]}"


def export_graph(which: str, fmt: str = "dot") -> str:
    """Deterministic DOT/JSON serialization of one of the three graphs."""
    if which == "psi2":
        nodes = [("0_2", 0), ("1+0", 2), ("I_2", 3)]
        edges = [("0_2", "1+0", "always"), ("1+0", "I_2", "always")]
    elif which == "psi1":
        nodes = sorted((t, STAR_DIMS[t]) for t in StarTag.ALL)
        edges = sorted((s, d, "always")
                       for s, nxt in _PSI1_EDGES.items() for d in nxt)
    elif which == "pair":
        nodes = sorted((_vertex_id(k), f.dim) for k, f in FAMILIES.items())
        edges = sorted((_vertex_id(s), _vertex_id(d), c.text)
                       for (s, d), c in _PAIR_EDGES.items())
    else:
        raise ValueError("which must be psi1, psi2 or pair")
    if fmt == "json":
        return json.dumps({"schema": "pairorbit-graph/1", "graph": which,
                           "vertices": [{"id": n, "dim": d} for n, d in nodes],
                           "edges": [{"src": s, "dst": d, "condition": c}
                                     for s, d, c in edges]},
                          indent=2, sort_keys=True)
    lines = [f'digraph "{which}" {{']
    for n, d in nodes:
        lines.append(f'  "{n}" [label="{n}\\ndim {d}"];')
    for s, d, c in edges:
        attr = "" if c == "always" else f' [label="{c}"]'
        lines.append(f'  "{s}" -> "{d}"{attr};')
    lines.append("}")
    return "\n".join(lines)
