import numpy as np
import pytest

from pairorbit.closure import pair_path
from pairorbit.congruence import StarTag as T
from pairorbit.families import family_of
from pairorbit.witness import (
    TRIAGED,
    DivergenceDetected,
    WitnessFamily,
    perturb_experiment,
    reachable_with_slack,
    verify_witness,
    witness_catalog,
)
from pairorbit.matcore import GroupElement


def test_catalog_size_and_metadata():
    cat = witness_catalog()
    assert len(cat) >= 18
    for w in cat:
        assert w.citation
        assert w.src.key() != w.dst.key() or not w.src.close_to(w.dst)


def test_catalog_all_entries_converge():
    for w in witness_catalog():
        rep = verify_witness(w, (1e-1, 1e-2, 1e-3, 1e-4), tol=1e-6)
        assert rep.passed, (w.name, rep.residuals)


def test_catalog_matches_closure_graph():
    for w in witness_catalog():
        assert pair_path(w.src, w.dst), str(w)


def test_catalog_covers_every_edge():
    from pairorbit.closure import pair_edges
    covered = {(w.src.key(), w.dst.key()) for w in witness_catalog()}
    assert set(pair_edges()) <= covered


def test_residual_decay_slopes():
    # all curves decay at least linearly in the sweep parameter
    for w in witness_catalog():
        rep = verify_witness(w, (1e-1, 1e-2, 1e-3), tol=1.0, strict=False)
        logs = np.log10(np.maximum(rep.residuals, 1e-300))
        slopes = -np.diff(logs)  # decades gained per decade of s
        assert min(slopes) >= 0.9, (w.name, rep.residuals)


def test_diagonal_witness_residual_closed_form():
    # (1+0 -> 1 (+) e^{i pi/4}): residual is exactly s^k at the sweep values
    cat = [w for w in witness_catalog() if w.name == "diag-shrink->U"]
    assert cat
    rep = verify_witness(cat[0], (0.1,), tol=1.0, strict=False)
    # curve parameter may be normalized s -> s^k; residual = (s^k)^2
    assert any(abs(rep.residuals[0] - 0.1 ** (2 * k)) < 1e-12
               for k in (1.0, 1.25, 1.5, 2.0, 3.0))


def test_verify_witness_rejects_bad_sweep():
    w = witness_catalog()[0]
    with pytest.raises(ValueError):
        verify_witness(w, (1e-2, 1e-1))


def test_divergence_detected():
    bad = WitnessFamily(
        "bogus", family_of(T.RANK1_SEMIDEF, "zero"),
        family_of(T.DEFINITE, "zero"),
        lambda s: GroupElement(1.0, np.diag([1.0, 1.0 / s])),
        "intentionally diverging")
    with pytest.raises(DivergenceDetected):
        verify_witness(bad)


def test_triage_records_have_quotes():
    assert len(TRIAGED) >= 4
    for rec in TRIAGED:
        assert rec["quote"] and rec["reason"]


def test_perturb_origin_reaches_only_valid_classes():
    rep = perturb_experiment(family_of(T.ZERO, "zero"), 1e-3, 80, seed=2)
    assert rep.violations == []
    assert rep.unresolved == 0
    assert sum(rep.histogram.values()) == 80


def test_perturb_definite_nine_dimensional():
    cls = family_of(T.DEFINITE, "a_lt_d", a=1.0, d=2.0)
    rep = perturb_experiment(cls, 1e-6, 80, seed=3)
    assert rep.violations == []
    from pairorbit.families import FAMILIES
    for key_text in rep.histogram:
        a_fam, b_form = key_text.split("|")
        assert FAMILIES[(a_fam, b_form)].dim >= 9


def test_perturb_negative_control():
    # an unreachable reached-class must be flagged by the slack test
    src = family_of(T.DEFINITE, "a_lt_d", a=1.0, d=2.0)
    bad = family_of(T.RANK1_SEMIDEF, "zero")
    assert not reachable_with_slack(src, bad, 1e-3)
    bad2 = family_of(T.RECIPROCAL, "generic", tau=0.4, phi=0.2, b=1.0,
                     zeta=0.1 + 0j)
    assert not reachable_with_slack(src, bad2, 1e-3)


def test_perturb_report_json_shape():
    cls = family_of(T.ZERO, "rank1")
    rep = perturb_experiment(cls, 1e-3, 20, seed=4)
    obj = rep.to_json()
    assert obj["samples"] == 20
    assert sum(obj["histogram"].values()) + obj["unresolved"] == 20
