"""Base-stratum analysis and the finiteness audit.

A stratum is the subset of base weights whose coordinates survive at a
base point.  Closed-orbit strata are those whose weights positively
span zero; on them every integral direction either fixes the point or
admits no limit.  Fixed components annotate points with representative
fibre weights, giving an alternative route to the mu computation that is
cross-checked against the weight-set route.

``fingerprint`` produces a canonical key with the property that points
sharing a key receive identical status under every combination of the
named linearizations; ``audit_finiteness`` samples a segment on a
rational grid and collects the distinct (semistable, stable) loci.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .core import (
    LinCombo,
    ModelError,
    PLUS_INFINITY,
    Scene,
    SceneError,
    Status,
    WeightedPoint,
    cone_Cx,
    require_sanctioned,
    status,
)
from .polyhedra import (
    EQ,
    GE,
    as_vec,
    dot,
    integer_kernel,
    lex_key,
    lp_feasible,
    relint_contains_zero,
    require_integer_vec,
)


@dataclass(frozen=True)
class FixedComponent:
    """A connected fixed-locus component: its stratum plus, per
    linearization, a representative fibre-weight character.

    The pairing <lam, c> is meaningful only for directions orthogonal to
    every stratum character; evaluation elsewhere is a model error.
    """

    id: str
    stratum: tuple
    c: Mapping[str, tuple]


@dataclass(frozen=True)
class ComponentAnnotatedPoint:
    point: WeightedPoint
    components: tuple  # non-empty ids of FixedComponents

    def __post_init__(self):
        if not self.components:
            raise SceneError(f"point {self.point.name!r}: component list must be non-empty")


class LimitBehavior(enum.Enum):
    FIXES = "Fixes"
    NO_LIMIT = "NoLimit"


def is_closed_orbit_stratum(scene: Scene, stratum: Sequence[int]) -> bool:
    """True when the stratum's weights positively span zero.

    The empty stratum is a fixed base point, whose orbit is closed.
    """
    chars = [scene.base_weights[i] for i in stratum]
    if not chars:
        return True
    return relint_contains_zero(chars)


def subtorus_basis(scene: Scene, stratum: Sequence[int]) -> list:
    """Primitive lattice basis of the stabilizer subtorus directions."""
    chars = [scene.base_weights[i] for i in stratum]
    return integer_kernel(chars, scene.rank)


def classify_lambda(scene: Scene, stratum: Sequence[int], lam: Sequence) -> LimitBehavior:
    """On a closed-orbit stratum, a nonzero integral direction either
    fixes the point or has no limit; anything else is out of contract."""
    if not is_closed_orbit_stratum(scene, stratum):
        raise ModelError("classify_lambda requires a closed-orbit stratum")
    lam = require_integer_vec(lam, "classify_lambda")
    if all(v == 0 for v in lam):
        raise ModelError("classify_lambda requires a nonzero direction")
    chars = [scene.base_weights[i] for i in stratum]
    if all(dot(lam, chi) == 0 for chi in chars):
        return LimitBehavior.FIXES
    return LimitBehavior.NO_LIMIT


def mu_via_components(
    scene: Scene,
    annotated: ComponentAnnotatedPoint,
    components: Mapping[str, FixedComponent],
    lin_name: str,
    lam: Sequence,
):
    """mu through component fibre weights: +inf off the limit cone, else
    minus the minimum representative pairing over the annotation."""
    lam = require_integer_vec(lam, "mu_via_components")
    point = annotated.point
    for chi in scene.stratum_chars(point):
        if dot(lam, chi) < 0:
            return PLUS_INFINITY
    values = []
    for cid in annotated.components:
        comp = components[cid]
        comp_chars = [scene.base_weights[i] for i in comp.stratum]
        if any(dot(lam, chi) != 0 for chi in comp_chars):
            raise ModelError(
                f"component {cid!r}: fibre weight is undefined for a direction "
                "that moves the component's stratum"
            )
        try:
            c = comp.c[lin_name]
        except KeyError:
            raise SceneError(f"component {cid!r} has no weight for {lin_name!r}") from None
        values.append(dot(lam, c))
    return -min(values)


def validate_component(scene: Scene, comp: FixedComponent) -> None:
    """Components must sit on closed-orbit strata."""
    for i in comp.stratum:
        if not 0 <= i < len(scene.base_weights):
            raise SceneError(f"component {comp.id!r}: stratum index {i} out of range")
    if not is_closed_orbit_stratum(scene, comp.stratum):
        raise SceneError(f"component {comp.id!r}: stratum fails the closed-orbit criterion")


# ---------------------------------------------------------------------------
# fingerprinting
# ---------------------------------------------------------------------------

def _is_redundant_weight(chi, others: Sequence, i_chars: Sequence, rank: int) -> bool:
    # chi in conv(others) + cone(stratum chars), by exact LP over the
    # convex coefficients and the nonnegative cone coefficients.
    if not others:
        return False
    n_t = len(others)
    n_g = len(i_chars)
    n = n_t + n_g
    constraints = []
    for c in range(rank):
        row = [Fraction(o[c]) for o in others] + [Fraction(g[c]) for g in i_chars]
        constraints.append((tuple(row), EQ, Fraction(chi[c])))
    constraints.append((tuple([1] * n_t + [0] * n_g), EQ, 1))
    for j in range(n):
        constraints.append((tuple(1 if i == j else 0 for i in range(n)), GE, 0))
    return lp_feasible(constraints) is not None


def reduced_weight_set(scene: Scene, point: WeightedPoint, lin_name: str) -> tuple:
    """Drop weights that can never attain the strict minimum pairing on the
    limit cone; the reduction preserves mu there.  Greedy in sorted order,
    so duplicates collapse deterministically."""
    i_chars = scene.stratum_chars(point)
    keep = sorted(set(point.weight_set(lin_name)), key=lex_key)
    i = 0
    while i < len(keep):
        others = keep[:i] + keep[i + 1:]
        if _is_redundant_weight(keep[i], others, i_chars, scene.rank):
            keep.pop(i)
        else:
            i += 1
    return tuple(keep)


def fingerprint(scene: Scene, point: WeightedPoint, lin_names: Sequence[str]) -> tuple:
    """Canonical key: equal keys force equal status for every combination
    of the named linearizations (same limit cone, same effective weights)."""
    stratum_key = tuple(sorted(scene.stratum_chars(point), key=lex_key))
    weights_key = tuple(
        (name, reduced_weight_set(scene, point, name)) for name in sorted(lin_names)
    )
    return (stratum_key, weights_key)


# ---------------------------------------------------------------------------
# finiteness audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuditResult:
    loci: frozenset  # of (semistable names, stable names) sorted tuples
    stabilized: bool
    grid: int


def _loci_at(scene: Scene, l0: str, l1: str, t: Fraction, allow_numerical: bool, cache: dict):
    key = t
    if key not in cache:
        combo = LinCombo.segment(l0, l1, t)
        ss, s = [], []
        for p in scene.points:
            st = status(scene, p, combo, allow_numerical=allow_numerical)
            if st is not Status.UNSTABLE:
                ss.append(p.name)
            if st is Status.STABLE:
                s.append(p.name)
        cache[key] = (tuple(sorted(ss)), tuple(sorted(s)))
    return cache[key]


def audit_finiteness(
    scene: Scene,
    l0: str,
    l1: str,
    grid_denominator: int,
    *,
    allow_numerical: bool = False,
) -> AuditResult:
    """Sample statuses at t = k/D and collect distinct loci pairs.

    ``stabilized`` reports whether doubling the grid changes nothing; for
    D a multiple of twice the lcm of the wall denominators the grid hits
    every wall and every chamber, so the answer is the full segment truth.
    """
    if grid_denominator < 1:
        raise SceneError("grid denominator must be >= 1")
    require_sanctioned(scene, LinCombo.segment(l0, l1, Fraction(1, 2)), allow_numerical)
    require_sanctioned(scene, LinCombo.single(l0), allow_numerical)
    require_sanctioned(scene, LinCombo.single(l1), allow_numerical)
    cache: dict = {}
    d = grid_denominator
    loci_d = frozenset(
        _loci_at(scene, l0, l1, Fraction(k, d), allow_numerical, cache) for k in range(d + 1)
    )
    loci_2d = frozenset(
        _loci_at(scene, l0, l1, Fraction(k, 2 * d), allow_numerical, cache) for k in range(2 * d + 1)
    )
    return AuditResult(loci=loci_d, stabilized=loci_d == loci_2d, grid=d)
