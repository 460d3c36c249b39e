import math
import random
from fractions import Fraction

import pytest

from generators import random_lambda_in_cone, random_point_instance, random_scene
from oracles import grid_m_oracle, mu_bruteforce
from vgitkit.core import (
    LinCombo,
    Linearization,
    SanctionError,
    Scene,
    SceneError,
    Status,
    combined_weights,
    cone_Cx,
    gamma_x_members,
    m_function,
    mu,
    status,
)
from vgitkit.polyhedra import dot, norm_sq


def scene_one_point(rank, stratum_chars, weights, name="x", sanctioned=True):
    lins = [Linearization(l, sanctioned) for l in weights]
    return Scene.build(
        rank,
        stratum_chars,
        lins,
        [(name, list(range(len(stratum_chars))), weights)],
    )


EX21 = Scene.build(
    1,
    [],
    [Linearization("O11", True)],
    [
        ("[1:0]", [], {"O11": [[1]]}),
        ("[0:1]", [], {"O11": [[-1]]}),
        ("[1:1]", [], {"O11": [[1], [-1]]}),
    ],
)


# ---------------------------------------------------------------------------
# scene validation
# ---------------------------------------------------------------------------

def test_scene_validation_errors():
    with pytest.raises(SceneError):
        Scene.build(1, [], [Linearization("L")], [("a", [], {"L": [[1]]}), ("a", [], {"L": [[1]]})])
    with pytest.raises(SceneError):
        Scene.build(1, [[1]], [Linearization("L")], [("a", [5], {"L": [[1]]})])
    with pytest.raises(SceneError):
        Scene.build(1, [], [Linearization("L")], [("a", [], {"L": []})])
    with pytest.raises(SceneError):
        Scene.build(1, [], [Linearization("L")], [("a", [], {"L": [[1, 2]]})])


def test_combo_validation():
    assert LinCombo.segment("A", "B", 0).names == ("A",)
    assert LinCombo.segment("A", "B", 1).names == ("B",)
    assert LinCombo.segment("A", "A", Fraction(1, 3)).names == ("A",)
    with pytest.raises(SceneError):
        LinCombo.segment("A", "B", Fraction(3, 2))


# ---------------------------------------------------------------------------
# cone_Cx
# ---------------------------------------------------------------------------

def test_cone_cx_examples():
    sc = scene_one_point(1, [], {"L": [[1]]})
    cone = cone_Cx(sc, sc.point("x"))
    assert cone.lineality == ((1,),) and cone.rays == ()

    sc = scene_one_point(2, [[1, 0], [0, 1]], {"L": [[1, 1]]})
    cone = cone_Cx(sc, sc.point("x"))
    assert cone.rays == ((0, 1), (1, 0))

    sc = scene_one_point(2, [[1, 0], [-1, 0]], {"L": [[1, 1]]})
    cone = cone_Cx(sc, sc.point("x"))
    assert cone.rays == () and cone.lineality == ((0, 1),)


# ---------------------------------------------------------------------------
# combined weights and mu
# ---------------------------------------------------------------------------

def test_combined_weights_examples():
    sc = scene_one_point(1, [], {"L0": [[1], [-1]], "L1": [[1]]})
    x = sc.point("x")
    bt = combined_weights(sc, x, LinCombo.segment("L0", "L1", Fraction(1, 2)))
    assert bt == frozenset({(Fraction(1),), (Fraction(0),)})
    assert combined_weights(sc, x, LinCombo.segment("L0", "L1", 0)) == x.weight_set("L0")

    sc2 = scene_one_point(2, [], {"L0": [[1, 0]], "L1": [[0, 1]]})
    bt = combined_weights(sc2, sc2.point("x"), LinCombo.segment("L0", "L1", Fraction(1, 3)))
    assert bt == frozenset({(Fraction(2, 3), Fraction(1, 3))})


def test_mu_examples():
    combo = LinCombo.single("O11")
    assert mu(EX21, EX21.point("[1:0]"), combo, [1]) == -1
    sc = scene_one_point(2, [], {"L": [[0, 0]]})
    assert mu(sc, sc.point("x"), LinCombo.single("L"), [3, -2]) == 0
    sc = scene_one_point(1, [[1]], {"L": [[5]]})
    assert mu(sc, sc.point("x"), LinCombo.single("L"), [-1]) == math.inf


def test_mu_accepts_rational_directions():
    combo = LinCombo.single("O11")
    assert mu(EX21, EX21.point("[1:1]"), combo, [Fraction(1, 2)]) == Fraction(1, 2)


def test_gamma_members_examples():
    sc = scene_one_point(1, [[2]], {"L": [[1]]})
    assert gamma_x_members(sc, sc.point("x"), "L", 2) == frozenset({(1,), (3,), (5,)})
    assert gamma_x_members(sc, sc.point("x"), "L", 0) == frozenset({(1,)})
    sc = scene_one_point(2, [[1, 0], [0, 1]], {"L": [[0, 1]]})
    assert gamma_x_members(sc, sc.point("x"), "L", 1) == frozenset({(0, 1), (1, 1), (0, 2)})


def test_mu_against_truncated_monoid_oracle():
    rng = random.Random(101)
    checked = 0
    while checked < 150:
        sc, pt = random_point_instance(rng, max_rank=4)
        lam = random_lambda_in_cone(rng, sc, pt)
        combo = LinCombo.single("L")
        if lam is not None:
            got = mu(sc, pt, combo, lam)
            want = mu_bruteforce(pt.weight_set("L"), sc.stratum_chars(pt), sc.rank, lam)
            assert got == want
            checked += 1
        # arbitrary integral directions: +inf exactly off the cone
        lam2 = tuple(rng.randint(-5, 5) for _ in range(sc.rank))
        cone = cone_Cx(sc, pt)
        got2 = mu(sc, pt, combo, lam2)
        assert (got2 == math.inf) == (not cone.contains(lam2))


def test_mu_linear_in_linearization():
    rng = random.Random(55)
    for _ in range(40):
        sc = random_scene(rng)
        pt = rng.choice(sc.points)
        lam = random_lambda_in_cone(rng, sc, pt)
        if lam is None:
            continue
        mu0 = mu(sc, pt, LinCombo.single("L0"), lam)
        mu1 = mu(sc, pt, LinCombo.single("L1"), lam)
        for _ in range(20):
            t = Fraction(rng.randint(0, 24), 24)
            combo = LinCombo.segment("L0", "L1", t)
            assert mu(sc, pt, combo, lam) == (1 - t) * mu0 + t * mu1


# ---------------------------------------------------------------------------
# status
# ---------------------------------------------------------------------------

def test_status_example_2_1():
    combo = LinCombo.single("O11")
    assert status(EX21, EX21.point("[1:0]"), combo) is Status.UNSTABLE
    assert status(EX21, EX21.point("[0:1]"), combo) is Status.UNSTABLE
    assert status(EX21, EX21.point("[1:1]"), combo) is Status.STABLE


def test_status_zero_weight_semistable():
    sc = scene_one_point(2, [], {"L": [[0, 0]]})
    assert status(sc, sc.point("x"), LinCombo.single("L")) is Status.STRICTLY_SEMISTABLE


def test_status_origin_cone_stable():
    sc = scene_one_point(2, [[1, 0], [-1, 0], [0, 1], [0, -1]], {"L": [[9, -9]]})
    assert status(sc, sc.point("x"), LinCombo.single("L")) is Status.STABLE


def test_status_sanction_contract():
    sc = scene_one_point(1, [], {"L": [[1]]}, sanctioned=False)
    with pytest.raises(SanctionError):
        status(sc, sc.point("x"), LinCombo.single("L"))
    assert status(sc, sc.point("x"), LinCombo.single("L"), allow_numerical=True) is Status.UNSTABLE
    with pytest.raises(SanctionError):
        m_function(sc, sc.point("x"), LinCombo.single("L"))


# ---------------------------------------------------------------------------
# m_function
# ---------------------------------------------------------------------------

def test_m_cross_example():
    sc = scene_one_point(2, [], {"L": [[1, 0], [-1, 0], [0, 1], [0, -1]]})
    mv = m_function(sc, sc.point("x"), LinCombo.single("L"))
    assert not mv.infinite
    assert mv.mu_star == 1 and mv.norm_sq == 2
    assert abs(mv.value - 1 / math.sqrt(2)) < 1e-12
    assert mv.minimizer == (1, 1)


def test_m_singleton_example():
    sc = scene_one_point(2, [], {"L": [[3, 4]]})
    mv = m_function(sc, sc.point("x"), LinCombo.single("L"))
    # value is -|c|; the minimizer is the direction of c itself, where the
    # pairing with c is most positive (certificate signs must match value)
    assert mv.value == -5.0
    assert mv.minimizer == (3, 4)
    assert mv.mu_star < 0


def test_m_plus_infinity():
    sc = scene_one_point(2, [[1, 0], [-1, 0], [0, 1], [0, -1]], {"L": [[2, 1]]})
    mv = m_function(sc, sc.point("x"), LinCombo.single("L"))
    assert mv.infinite and mv.value == math.inf and mv.sign == 1


def test_status_matches_m_sign_random():
    rng = random.Random(77)
    for _ in range(60):
        sc = random_scene(rng, max_rank=3)
        pt = rng.choice(sc.points)
        t = Fraction(rng.randint(0, 8), 8)
        combo = LinCombo.segment("L0", "L1", t)
        st = status(sc, pt, combo)
        mv = m_function(sc, pt, combo)
        if mv.infinite:
            assert st is Status.STABLE
        elif mv.sign > 0:
            assert st is Status.STABLE
        elif mv.sign < 0:
            assert st is Status.UNSTABLE
        else:
            assert st is Status.STRICTLY_SEMISTABLE


def test_m_bounds_random():
    rng = random.Random(31)
    for _ in range(40):
        sc = random_scene(rng, max_rank=3)
        pt = rng.choice(sc.points)
        combo = LinCombo.segment("L0", "L1", Fraction(rng.randint(0, 4), 4))
        mv = m_function(sc, pt, combo)
        if mv.infinite:
            continue
        weights = combined_weights(sc, pt, combo)
        lower = -max(math.sqrt(float(norm_sq(w))) for w in weights)
        assert mv.value >= lower - 1e-9
        cone = cone_Cx(sc, pt)
        for r in cone.generators():
            val = mu(sc, pt, combo, r)
            assert mv.value <= float(val) / math.sqrt(float(norm_sq(r))) + 1e-9


def test_m_minimizer_certificate_consistent():
    rng = random.Random(13)
    for _ in range(60):
        sc = random_scene(rng, max_rank=3)
        pt = rng.choice(sc.points)
        combo = LinCombo.segment("L0", "L1", Fraction(rng.randint(0, 6), 6))
        mv = m_function(sc, pt, combo)
        if mv.infinite:
            continue
        lam = mv.minimizer
        assert cone_Cx(sc, pt).contains(lam)
        assert mu(sc, pt, combo, lam) == mv.mu_star
        assert norm_sq(lam) == mv.norm_sq


def test_m_against_grid_oracle_small():
    rng = random.Random(4242)
    count = 0
    while count < 25:
        sc, pt = random_point_instance(rng, max_rank=3, entry_bound=3)
        combo = LinCombo.single("L")
        mv = m_function(sc, pt, combo)
        cone = cone_Cx(sc, pt)
        got = grid_m_oracle(
            cone.h_rep, sorted(pt.weight_set("L")), sc.rank, cone.generators(), seed=count
        )
        if mv.infinite:
            assert got == math.inf
        else:
            scale = max(1.0, abs(mv.value))
            assert abs(mv.value - got) <= 1e-6 * scale, (sc, mv, got)
        count += 1
