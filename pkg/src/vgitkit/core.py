"""Scene model and the core numerical stability functions.

A scene is a desk-scale model of a torus action on a family over an
affine base: a rank (torus dimension), a finite set of base weights
(characters generating the base coordinate monoid), named linearizations,
and named points.  A point carries its base stratum (the subset of base
weights with nonvanishing coordinates) plus, per linearization, the
finite set of surviving section weights.

On top of that model this module computes, exactly:

* ``mu``          -- the one-parameter-subgroup weight, +inf when the
                     direction admits no limit;
* ``cone_Cx``     -- the cone of directions with a limit;
* ``status``      -- Unstable / StrictlySemistable / Stable by exact cone
                     feasibility (no normalized values involved);
* ``m_function``  -- the exact minimum of mu(x, l)/|l| over the cone,
                     with a rational certificate.

The key finite reduction: for a direction inside the cone, every monoid
translate of a surviving weight pairs nonnegatively, and the zero
translate is attained, so the minimum over the full (infinite) weight
set equals the minimum over the finite surviving set.  Tests validate
this against a truncated monoid enumeration.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Mapping, Optional, Sequence

from .polyhedra import (
    EQ,
    GE,
    RationalCone,
    Vec,
    as_vec,
    cone_is_nontrivial,
    dot,
    dual_rays,
    is_zero_vec,
    lex_key,
    lp_feasible,
    norm_sq,
    nullspace_basis,
    primitive,
    project_onto_span,
    rank_of,
    require_integer_vec,
    rref,
    vadd,
    vneg,
    vscale,
    vsub,
)

PLUS_INFINITY = math.inf


class SceneError(ValueError):
    """A scene value violates a structural invariant."""


class SanctionError(RuntimeError):
    """Status requested for a linearization whose sign test is not sanctioned.

    The sanctioned flag is authorial metadata; the engine never infers it.
    Callers may override explicitly, in which case the result is labeled a
    numerical-criterion status only.
    """


class ModelError(RuntimeError):
    """An operation was applied outside its model-level precondition."""


@dataclass(frozen=True)
class Linearization:
    name: str
    hm_sanctioned: bool = True


@dataclass(frozen=True)
class WeightedPoint:
    """A model point: base stratum indices plus per-linearization weights."""

    name: str
    stratum: tuple
    weights: Mapping[str, frozenset]

    def weight_set(self, lin_name: str) -> frozenset:
        try:
            return self.weights[lin_name]
        except KeyError:
            raise SceneError(f"point {self.name!r} has no weights for linearization {lin_name!r}") from None


@dataclass(frozen=True)
class Scene:
    rank: int
    base_weights: tuple
    linearizations: tuple
    points: tuple
    _lin_index: Mapping[str, Linearization] = field(repr=False, compare=False, default=None)
    _point_index: Mapping[str, WeightedPoint] = field(repr=False, compare=False, default=None)

    @staticmethod
    def build(
        rank: int,
        base_weights: Sequence[Sequence],
        linearizations: Sequence[Linearization],
        points: Sequence[tuple],
    ) -> "Scene":
        """Validate and assemble a scene.

        ``points`` entries are (name, stratum_indices, {lin_name: weight list}).
        """
        if not isinstance(rank, int) or rank < 1:
            raise SceneError(f"rank must be a positive integer, got {rank!r}")
        gamma = tuple(require_integer_vec(w, "base_weights") for w in base_weights)
        for w in gamma:
            if len(w) != rank:
                raise SceneError(f"base weight {w} has length {len(w)}, expected {rank}")
        lin_names = [l.name for l in linearizations]
        if len(set(lin_names)) != len(lin_names):
            raise SceneError("duplicate linearization names")
        pts = []
        seen = set()
        for name, stratum, weights in points:
            if name in seen:
                raise SceneError(f"duplicate point name {name!r}")
            seen.add(name)
            stratum = tuple(sorted(set(stratum)))
            for i in stratum:
                if not isinstance(i, int) or not 0 <= i < len(gamma):
                    raise SceneError(f"point {name!r}: stratum index {i!r} out of range")
            wmap = {}
            for lname, chars in weights.items():
                if lname not in lin_names:
                    raise SceneError(f"point {name!r}: unknown linearization {lname!r}")
                charset = frozenset(require_integer_vec(c, f"point {name!r}") for c in chars)
                if not charset:
                    raise SceneError(f"point {name!r}: empty weight set for {lname!r}")
                for c in charset:
                    if len(c) != rank:
                        raise SceneError(f"point {name!r}: weight {c} has length {len(c)}, expected {rank}")
                wmap[lname] = charset
            pts.append(WeightedPoint(name, stratum, wmap))
        scene = Scene(
            rank=rank,
            base_weights=gamma,
            linearizations=tuple(linearizations),
            points=tuple(pts),
        )
        object.__setattr__(scene, "_lin_index", {l.name: l for l in linearizations})
        object.__setattr__(scene, "_point_index", {p.name: p for p in scene.points})
        return scene

    def linearization(self, name: str) -> Linearization:
        try:
            return self._lin_index[name]
        except KeyError:
            raise SceneError(f"no linearization named {name!r}") from None

    def point(self, name: str) -> WeightedPoint:
        try:
            return self._point_index[name]
        except KeyError:
            raise SceneError(f"no point named {name!r}") from None

    def stratum_chars(self, point: WeightedPoint) -> tuple:
        return tuple(self.base_weights[i] for i in point.stratum)


@dataclass(frozen=True)
class LinCombo:
    """A convex combination of at most two linearizations (a segment point)."""

    terms: tuple  # ((name, coefficient), ...) with positive coefficients summing to 1

    @staticmethod
    def single(name: str) -> "LinCombo":
        return LinCombo(terms=((name, Fraction(1)),))

    @staticmethod
    def segment(l0: str, l1: str, t) -> "LinCombo":
        t = Fraction(t)
        if not 0 <= t <= 1:
            raise SceneError(f"segment parameter {t} outside [0, 1]")
        if l0 == l1:
            return LinCombo.single(l0)
        terms = []
        if t < 1:
            terms.append((l0, 1 - t))
        if t > 0:
            terms.append((l1, t))
        return LinCombo(terms=tuple(terms))

    def __post_init__(self):
        if not self.terms or len(self.terms) > 2:
            raise SceneError("a combination must involve one or two linearizations")
        total = sum((c for _, c in self.terms), start=Fraction(0))
        if total != 1 or any(c <= 0 for _, c in self.terms):
            raise SceneError("combination coefficients must be positive and sum to 1")

    @property
    def names(self) -> tuple:
        return tuple(name for name, _ in self.terms)


class Status(enum.Enum):
    UNSTABLE = "Unstable"
    STRICTLY_SEMISTABLE = "StrictlySemistable"
    STABLE = "Stable"

    def __str__(self) -> str:
        return self.value


def require_sanctioned(scene: Scene, combo: LinCombo, allow_numerical: bool) -> bool:
    """Enforce the sign-test contract; returns True when overridden."""
    unsanctioned = [n for n in combo.names if not scene.linearization(n).hm_sanctioned]
    if unsanctioned and not allow_numerical:
        raise SanctionError(
            "linearization(s) %s are not flagged as sanctioning the sign-of-M "
            "criterion; pass allow_numerical=True to compute a numerical-"
            "criterion status anyway" % ", ".join(repr(n) for n in unsanctioned)
        )
    return bool(unsanctioned)


# ---------------------------------------------------------------------------
# weights and mu
# ---------------------------------------------------------------------------

def cone_Cx(scene: Scene, point: WeightedPoint) -> RationalCone:
    """The cone of directions along which the point has a limit.

    H-representation is the point's stratum characters; an empty stratum
    yields the full cocharacter space.
    """
    return dual_rays(scene.stratum_chars(point), scene.rank)


def combined_weights(scene: Scene, point: WeightedPoint, combo: LinCombo) -> frozenset:
    """The finite weight set of the combined linearization.

    The pairwise Minkowski combination is exact on the limit cone because
    the minimum over each factor decouples for nonnegative coefficients.
    """
    sets = [point.weight_set(name) for name in combo.names]
    if len(sets) == 1:
        return sets[0]
    (n0, c0), (n1, c1) = combo.terms
    a_set, b_set = point.weight_set(n0), point.weight_set(n1)
    return frozenset(vadd(vscale(c0, a), vscale(c1, b)) for a in a_set for b in b_set)


def mu(scene: Scene, point: WeightedPoint, combo: LinCombo, lam: Sequence):
    """The weight of a (possibly rational) direction, or +inf with no limit."""
    lam = as_vec(lam)
    if len(lam) != scene.rank:
        raise SceneError(f"direction of length {len(lam)}, expected {scene.rank}")
    for chi in scene.stratum_chars(point):
        if dot(lam, chi) < 0:
            return PLUS_INFINITY
    return -min(dot(lam, w) for w in combined_weights(scene, point, combo))


def gamma_x_members(scene: Scene, point: WeightedPoint, lin_name: str, degree_bound: int) -> frozenset:
    """Truncation of the full weight set: surviving weights plus monoid
    translates with coefficient sum up to the bound."""
    if degree_bound < 0:
        raise SceneError("degree_bound must be >= 0")
    base = scene.stratum_chars(point)
    translates = {tuple([0] * scene.rank)}
    for total in range(1, degree_bound + 1):
        for combo in combinations_with_replacement(range(len(base)), total):
            v = [0] * scene.rank
            for i in combo:
                v = [x + y for x, y in zip(v, base[i])]
            translates.add(tuple(v))
    out = set()
    for chi in point.weight_set(lin_name):
        for tr in translates:
            out.add(vadd(chi, tr))
    return frozenset(out)


# ---------------------------------------------------------------------------
# status by exact cone feasibility
# ---------------------------------------------------------------------------

def status(
    scene: Scene,
    point: WeightedPoint,
    combo: LinCombo,
    *,
    allow_numerical: bool = False,
) -> Status:
    """Stability status without computing any normalized value.

    Unstable  <=> some direction in the limit cone pairs strictly
                  positively with every combined weight (scale-invariant,
                  so "strict" becomes ">= 1");
    Stable    <=> the cone of directions with mu <= 0 is the origin alone.
    """
    require_sanctioned(scene, combo, allow_numerical)
    i_chars = scene.stratum_chars(point)
    b_set = sorted(combined_weights(scene, point, combo), key=lex_key)
    strict = [(chi, GE, 0) for chi in i_chars] + [(w, GE, 1) for w in b_set]
    if lp_feasible(strict) is not None:
        return Status.UNSTABLE
    k_normals = list(i_chars) + b_set
    if cone_is_nontrivial(k_normals, scene.rank) is None:
        return Status.STABLE
    return Status.STRICTLY_SEMISTABLE


# ---------------------------------------------------------------------------
# the M function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MValue:
    """Exact outcome of the normalized infimum.

    For a finite value the reported float is mu_star / sqrt(norm_sq); all
    decisions must compare the certificate, never the float.  The
    minimizer is a content-1 integer direction attaining the infimum.
    """

    infinite: bool
    mu_star: Optional[Fraction] = None
    norm_sq: Optional[Fraction] = None
    minimizer: Optional[tuple] = None

    @staticmethod
    def plus_infinity() -> "MValue":
        return MValue(infinite=True)

    @property
    def value(self) -> float:
        if self.infinite:
            return PLUS_INFINITY
        return float(self.mu_star) / math.sqrt(float(self.norm_sq))

    @property
    def sign(self) -> int:
        if self.infinite:
            return 1
        return (self.mu_star > 0) - (self.mu_star < 0)


def compare_certificates(mu_a: Fraction, nsq_a, mu_b: Fraction, nsq_b) -> int:
    """Exact three-way comparison of mu_a/sqrt(nsq_a) vs mu_b/sqrt(nsq_b)."""
    sa = (mu_a > 0) - (mu_a < 0)
    sb = (mu_b > 0) - (mu_b < 0)
    if sa != sb:
        return -1 if sa < sb else 1
    if sa == 0:
        return 0
    lhs = mu_a * mu_a * nsq_b
    rhs = mu_b * mu_b * nsq_a
    if lhs == rhs:
        return 0
    less = (lhs < rhs) if sa > 0 else (lhs > rhs)
    return -1 if less else 1


def _piece_candidates(h_normals: list, w, rank: int) -> list:
    """KKT candidates for minimizing -<l, w>/|l| over one selector piece.

    The minimum on the unit sphere of a polyhedral cone is attained in the
    relative interior of some face, where the sphere-tangential gradient
    vanishes; there the direction is (up to sign) the orthogonal projection
    of w onto the face span.  Faces are generated by lineality plus subsets
    of extreme rays, so projecting onto spans of ray subsets and keeping
    the feasible results covers every candidate.  Value-zero minima are
    handled by the caller.
    """
    piece = dual_rays(h_normals, rank)
    if piece.is_origin_only:
        return []
    lin = list(piece.lineality)
    rays = list(piece.rays)
    max_extra = rank - len(lin)
    spans_seen = set()
    cands = []
    for size in range(0, min(len(rays), max_extra) + 1):
        for subset in combinations(rays, size):
            span_rows = lin + list(subset)
            key = tuple(rref(span_rows, rank))
            if key in spans_seen:
                continue
            spans_seen.add(key)
            p = project_onto_span(span_rows, w)
            if is_zero_vec(p):
                continue
            for cand in (p, vneg(p)):
                if all(dot(cand, h) >= 0 for h in h_normals):
                    lam = primitive(cand)
                    cands.append((Fraction(-dot(lam, w)), Fraction(norm_sq(lam)), lam))
    return cands


def m_function(
    scene: Scene,
    point: WeightedPoint,
    combo: LinCombo,
    *,
    allow_numerical: bool = False,
) -> MValue:
    """Exact minimum of mu(x, l)/|l| over nonzero directions of the limit cone.

    The limit cone is subdivided into selector pieces, one per combined
    weight w: directions where w attains the minimum pairing.  On a piece
    the objective is -<l, w>/|l|, minimized by face enumeration; ties
    across pieces resolve to the lexicographically greatest minimizer.
    Euclidean norm throughout (any Weyl-invariant norm qualifies for a
    torus; signs are norm-independent).
    """
    require_sanctioned(scene, combo, allow_numerical)
    i_chars = list(scene.stratum_chars(point))
    cx = cone_Cx(scene, point)
    if cx.is_origin_only:
        return MValue.plus_infinity()
    b_set = sorted(combined_weights(scene, point, combo), key=lex_key)

    best = None  # (mu_star, norm_sq, minimizer)
    for w in b_set:
        selectors = [vsub(w2, w) for w2 in b_set if w2 != w]
        h_normals = []
        seen = set()
        for h in i_chars + selectors:
            p = primitive(h)
            if not is_zero_vec(p) and p not in seen:
                seen.add(p)
                h_normals.append(p)
        cands = _piece_candidates(h_normals, w, scene.rank)
        if not any(c[0] < 0 for c in cands):
            # The piece minimum may be exactly zero even when no projected
            # candidate is: check for a nonzero direction orthogonal to w.
            witness = cone_is_nontrivial(h_normals, scene.rank, eq_normals=[w])
            if witness is not None:
                lam = primitive(witness)
                cands.append((Fraction(0), Fraction(norm_sq(lam)), lam))
        for cand in cands:
            if best is None:
                best = cand
                continue
            c = compare_certificates(cand[0], cand[1], best[0], best[1])
            if c < 0 or (c == 0 and lex_key(cand[2]) > lex_key(best[2])):
                best = cand

    assert best is not None, "nontrivial cone must yield a candidate"
    return MValue(infinite=False, mu_star=best[0], norm_sq=best[1], minimizer=best[2])
