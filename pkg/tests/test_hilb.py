import math
import random
from fractions import Fraction

import pytest

from generators import perturbed_tau_twin, random_hilb_point
from vgitkit.core import ModelError, SceneError, Status
from vgitkit.hilb import (
    HilbPoint,
    NoFiniteThreshold,
    convergence_report,
    cycle_invariance_check,
    eventual_status,
    mu_Linf,
    mu_Lm,
    mu_Lm_normalized,
    stabilization_threshold,
    status_Linf,
    status_Lm,
    status_threshold,
)


def worked_point(tau_plus=3, name="Z") -> HilbPoint:
    return HilbPoint.build(
        name,
        2,
        1,
        [
            ([(1,)], (tau_plus,), [("p", 2, (-1,))]),
            ([(-1,)], (0,), [("p", 2, (1,))]),
        ],
    )


# ---------------------------------------------------------------------------
# construction invariants
# ---------------------------------------------------------------------------

def test_multiplicities_must_sum_to_d():
    with pytest.raises(SceneError):
        HilbPoint.build("bad", 3, 1, [([(1,)], (0,), [("p", 2, (1,))])])


def test_origin_cone_rejected():
    with pytest.raises(SceneError):
        HilbPoint.build("bad", 1, 1, [([(1,), (-1,)], (0,), [("p", 1, (0,))])])


def test_overlapping_interiors_rejected():
    with pytest.raises(SceneError):
        HilbPoint.build(
            "bad", 1, 1,
            [
                ([(1,)], (0,), [("p", 1, (0,))]),
                ([], (1,), [("p", 1, (0,))]),
            ],
        )


def test_face_inconsistency_rejected():
    # the two quadrant cones share the ray (0, 1); tau values disagree there
    with pytest.raises(SceneError):
        HilbPoint.build(
            "bad", 1, 2,
            [
                ([(1, 0), (0, 1)], (0, 1), [("p", 1, (0, 0))]),
                ([(-1, 0), (0, 1)], (0, 2), [("p", 1, (0, 0))]),
            ],
        )


def test_face_consistent_fan_accepted():
    z = HilbPoint.build(
        "ok", 1, 2,
        [
            ([(1, 0), (0, 1)], (1, 1), [("p", 1, (2, 0))]),
            ([(-1, 0), (0, 1)], (-1, 1), [("p", 1, (-2, 0))]),
        ],
    )
    assert len(z.scenarios) == 2


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

def test_worked_weights():
    z = worked_point()
    assert mu_Lm(z, (1,), 2) == 1
    assert mu_Lm_normalized(z, (1,), 2) == Fraction(1, 2)
    assert mu_Linf(z, (1,)) == 2
    assert mu_Linf(z, (-1,)) == 2


def test_zero_data_gives_zero():
    z = HilbPoint.build("zero", 1, 1, [([(1,)], (0,), [("p", 1, (0,))])])
    for m in (1, 2, 5):
        assert mu_Lm(z, (1,), m) == 0
    assert mu_Linf(z, (1,)) == 0


def test_outside_every_cone_is_infinite():
    z = HilbPoint.build("half", 1, 1, [([(1,)], (1,), [("p", 1, (1,))])])
    assert mu_Lm(z, (-1,), 3) == math.inf
    assert mu_Linf(z, (-1,)) == math.inf


def test_convergence_residuals():
    z = worked_point()
    rows = convergence_report(z, [(1,)], [1, 2, 3])
    assert [r.residual for r in rows] == [Fraction(-3), Fraction(-3, 2), Fraction(-1)]
    z0 = HilbPoint.build("zero-tau", 1, 1, [([(1,)], (0,), [("p", 1, (2,))])])
    rows = convergence_report(z0, [(1,)], [1, 2, 3])
    assert all(r.residual == 0 for r in rows)
    rows = convergence_report(z0, [(-1,)], [1, 2])
    assert all(r.residual is None for r in rows)  # matched infinities


# ---------------------------------------------------------------------------
# statuses and thresholds
# ---------------------------------------------------------------------------

def test_worked_statuses():
    z = worked_point()
    assert status_Linf(z) is Status.STABLE
    assert status_Lm(z, 1) is Status.UNSTABLE
    assert status_Lm(z, 2) is Status.STABLE
    assert status_threshold(z) == 2


def test_twin_threshold():
    z = worked_point(tau_plus=5, name="Z_twin")
    assert status_threshold(z) == 3


def test_threshold_trivial_without_tau():
    z = HilbPoint.build("flat", 1, 1, [([(1,)], (0,), [("p", 1, (-1,))])])
    assert status_threshold(z) == 1


def test_threshold_may_not_exist():
    # limit status strictly semistable, every member unstable
    z = HilbPoint.build("stuck", 1, 1, [([(1,)], (1,), [("p", 1, (0,))])])
    assert status_Linf(z) is Status.STRICTLY_SEMISTABLE
    assert status_Lm(z, 10) is Status.UNSTABLE
    with pytest.raises(NoFiniteThreshold):
        status_threshold(z)
    assert stabilization_threshold(z) == 1


def test_sandwich_chain_random():
    rng = random.Random(7)
    for i in range(40):
        z = random_hilb_point(rng, name=f"R{i}")
        try:
            m_star = status_threshold(z)
        except NoFiniteThreshold:
            m_star = stabilization_threshold(z)
        limit = status_Linf(z)
        for m in range(m_star, m_star + 5):
            fam = status_Lm(z, m)
            # stable(Linf) -> stable(Lm); semistable(Lm) -> semistable(Linf)
            if limit is Status.STABLE:
                assert fam is Status.STABLE
            if fam is not Status.UNSTABLE:
                assert limit is not Status.UNSTABLE


def test_tau_independence_of_limit_status():
    rng = random.Random(11)
    for i in range(40):
        z = random_hilb_point(rng, name=f"T{i}")
        twin = perturbed_tau_twin(rng, z, name=f"T{i}b")
        assert status_Linf(z) is status_Linf(twin)


# ---------------------------------------------------------------------------
# cycle invariance
# ---------------------------------------------------------------------------

def test_cycle_invariance_worked_pair():
    z = worked_point()
    twin = worked_point(tau_plus=5, name="Z_twin")
    rep = cycle_invariance_check(z, twin)
    assert rep.status_limit is Status.STABLE
    assert (rep.threshold_1, rep.threshold_2) == (2, 3)
    assert rep.agree_from == 3


def test_cycle_invariance_identity():
    z = worked_point()
    rep = cycle_invariance_check(z, worked_point(name="Z2"))
    assert rep.threshold_1 == rep.threshold_2 == rep.agree_from == 2


def test_cycle_invariance_small_tau_agrees_from_one():
    a = worked_point(tau_plus=0, name="a")
    b = worked_point(tau_plus=1, name="b")
    rep = cycle_invariance_check(a, b)
    assert rep.agree_from == 1


def test_cycle_invariance_rejects_different_cycles():
    z = worked_point()
    other = HilbPoint.build(
        "other", 2, 1,
        [
            ([(1,)], (3,), [("p", 2, (-2,))]),
            ([(-1,)], (0,), [("p", 2, (1,))]),
        ],
    )
    with pytest.raises(ModelError):
        cycle_invariance_check(z, other)


def test_cycle_invariance_random_twins():
    rng = random.Random(23)
    done = 0
    while done < 25:
        z = random_hilb_point(rng, name=f"C{done}")
        if status_Linf(z) is Status.STRICTLY_SEMISTABLE:
            continue  # thresholds are guaranteed only off the boundary
        twin = perturbed_tau_twin(rng, z, name=f"C{done}b")
        rep = cycle_invariance_check(z, twin)
        for m in range(rep.agree_from, rep.agree_from + 3):
            assert status_Lm(z, m) is status_Lm(twin, m)
        done += 1
