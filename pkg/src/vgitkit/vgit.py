"""Variation along a segment of linearizations: walls, chambers,
semi-continuity checks, and value profiles.

Statuses along the segment L_t = (1-t) L0 + t L1 are governed by sign
vectors: the limit cone of each point subdivides into selector pieces
indexed by endpoint weight pairs (a, b), each piece carrying the linear
form <., (1-t) a + t b>.  Both status tests (strict feasibility for
instability, nontriviality of the mu <= 0 cone for non-stability) are
Boolean functions of the signs of that form on the piece's generators,
and each sign is linear in t.  Statuses are therefore constant between
consecutive roots, which makes the wall list finite and exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .core import (
    LinCombo,
    MValue,
    Scene,
    SceneError,
    Status,
    WeightedPoint,
    m_function,
    require_sanctioned,
    status,
)
from .polyhedra import dot, dual_rays, is_zero_vec, lex_key, primitive, vsub


@dataclass(frozen=True)
class Chamber:
    lo: Fraction
    hi: Fraction
    statuses: tuple  # ((point name, Status), ...) sorted by name
    semistable: tuple
    stable: tuple


@dataclass(frozen=True)
class SegmentSample:
    t: Fraction
    statuses: tuple
    semistable: tuple
    stable: tuple


@dataclass(frozen=True)
class ChamberReport:
    l0: str
    l1: str
    walls: tuple  # strictly increasing rationals in (0, 1)
    spurious_candidates: tuple
    chambers: tuple  # of Chamber, in order
    wall_data: tuple  # of SegmentSample at each wall
    endpoint_data: tuple  # (SegmentSample at 0, SegmentSample at 1)

    def loci_pairs(self) -> frozenset:
        """Distinct (semistable, stable) pairs over the whole segment."""
        out = {(c.semistable, c.stable) for c in self.chambers}
        out |= {(w.semistable, w.stable) for w in self.wall_data}
        out |= {(e.semistable, e.stable) for e in self.endpoint_data}
        return frozenset(out)


def candidate_walls(scene: Scene, point: WeightedPoint, l0: str, l1: str) -> set:
    """Parameters where some generator sign of some selector piece flips.

    Every status change along the segment happens at one of these values;
    the converse may fail (a sign can vanish without changing status), so
    candidates are confirmed or reported as spurious downstream.
    """
    a_set = sorted(point.weight_set(l0), key=lex_key)
    b_set = sorted(point.weight_set(l1), key=lex_key)
    i_chars = scene.stratum_chars(point)
    out = set()
    for a in a_set:
        for b in b_set:
            normals = list(i_chars)
            normals += [vsub(a2, a) for a2 in a_set if a2 != a]
            normals += [vsub(b2, b) for b2 in b_set if b2 != b]
            piece = dual_rays(normals, scene.rank)
            for r in piece.generators():
                alpha = dot(r, a)
                beta = dot(r, b)
                if alpha == beta:
                    continue  # constant sign (or identically zero) in t
                t = Fraction(alpha, alpha - beta)
                if 0 < t < 1:
                    out.add(t)
    return out


def _sample(scene: Scene, l0: str, l1: str, t: Fraction, allow_numerical: bool) -> SegmentSample:
    combo = LinCombo.segment(l0, l1, t)
    statuses = []
    ss, s = [], []
    for p in scene.points:
        st = status(scene, p, combo, allow_numerical=allow_numerical)
        statuses.append((p.name, st))
        if st is not Status.UNSTABLE:
            ss.append(p.name)
        if st is Status.STABLE:
            s.append(p.name)
    statuses.sort(key=lambda kv: kv[0])
    return SegmentSample(
        t=t,
        statuses=tuple(statuses),
        semistable=tuple(sorted(ss)),
        stable=tuple(sorted(s)),
    )


def chamber_decomposition(
    scene: Scene,
    l0: str,
    l1: str,
    *,
    allow_numerical: bool = False,
) -> ChamberReport:
    """Exact wall positions and per-chamber statuses along the segment.

    Each open interval between consecutive candidates is sampled at two
    interior rational points; the construction guarantees constancy, so
    disagreement is an internal defect, not a data condition.  Candidates
    across which nothing changes (neither adjacent chamber nor the value
    at the candidate itself) are reported separately as spurious.
    """
    scene.linearization(l0)
    scene.linearization(l1)
    require_sanctioned(scene, LinCombo.single(l0), allow_numerical)
    require_sanctioned(scene, LinCombo.single(l1), allow_numerical)
    for p in scene.points:
        p.weight_set(l0)
        p.weight_set(l1)

    cands = set()
    for p in scene.points:
        cands |= candidate_walls(scene, p, l0, l1)
    cands = sorted(cands)

    cuts = [Fraction(0)] + cands + [Fraction(1)]
    interval_status = []
    for lo, hi in zip(cuts, cuts[1:]):
        s1 = _sample(scene, l0, l1, lo + (hi - lo) / 3, allow_numerical)
        s2 = _sample(scene, l0, l1, lo + 2 * (hi - lo) / 3, allow_numerical)
        assert s1.statuses == s2.statuses, (
            "status not constant between consecutive candidates; "
            "wall candidate enumeration is incomplete"
        )
        interval_status.append(s1)
    at_candidate = {t: _sample(scene, l0, l1, t, allow_numerical) for t in cands}
    endpoint_data = (
        _sample(scene, l0, l1, Fraction(0), allow_numerical),
        _sample(scene, l0, l1, Fraction(1), allow_numerical),
    )

    walls = []
    spurious = []
    for i, t in enumerate(cands):
        left = interval_status[i].statuses
        right = interval_status[i + 1].statuses
        here = at_candidate[t].statuses
        if left == right == here:
            spurious.append(t)
        else:
            walls.append(t)

    # merge intervals across spurious candidates
    chambers = []
    lo = Fraction(0)
    current = interval_status[0]
    for i, t in enumerate(cands):
        if t in spurious:
            assert interval_status[i + 1].statuses == current.statuses
            continue
        chambers.append(_make_chamber(lo, t, current))
        lo = t
        current = interval_status[i + 1]
    chambers.append(_make_chamber(lo, Fraction(1), current))

    return ChamberReport(
        l0=l0,
        l1=l1,
        walls=tuple(walls),
        spurious_candidates=tuple(spurious),
        chambers=tuple(chambers),
        wall_data=tuple(at_candidate[t] for t in walls),
        endpoint_data=endpoint_data,
    )


def _make_chamber(lo: Fraction, hi: Fraction, sample: SegmentSample) -> Chamber:
    return Chamber(
        lo=lo,
        hi=hi,
        statuses=sample.statuses,
        semistable=sample.semistable,
        stable=sample.stable,
    )


@dataclass(frozen=True)
class SemicontinuityReport:
    holds: bool
    t_used: Fraction
    witness_chamber: tuple  # (lo, hi)
    violations: tuple  # (inclusion, point name)


def check_semicontinuity(
    scene: Scene,
    l0: str,
    l1: str,
    *,
    allow_numerical: bool = False,
) -> SemicontinuityReport:
    """Verify s(L0) <= s(L_t) <= ss(L_t) <= ss(L0) on the first chamber.

    The good interval is constructive: (0, first candidate).  A False
    result on a valid scene is an engine defect, and the property tests
    treat it as such.
    """
    require_sanctioned(scene, LinCombo.single(l0), allow_numerical)
    require_sanctioned(scene, LinCombo.single(l1), allow_numerical)
    cands = set()
    for p in scene.points:
        cands |= candidate_walls(scene, p, l0, l1)
    hi = min(cands) if cands else Fraction(1)
    t = hi / 2
    at0 = _sample(scene, l0, l1, Fraction(0), allow_numerical)
    att = _sample(scene, l0, l1, t, allow_numerical)
    violations = []
    s0, ss0 = set(at0.stable), set(at0.semistable)
    st, sst = set(att.stable), set(att.semistable)
    for name in sorted(s0 - st):
        violations.append(("stable(L0) <= stable(Lt)", name))
    for name in sorted(st - sst):
        violations.append(("stable(Lt) <= semistable(Lt)", name))
    for name in sorted(sst - ss0):
        violations.append(("semistable(Lt) <= semistable(L0)", name))
    return SemicontinuityReport(
        holds=not violations,
        t_used=t,
        witness_chamber=(Fraction(0), hi),
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class ProfilePoint:
    t: Fraction
    m: MValue


@dataclass(frozen=True)
class MProfile:
    points: tuple  # of ProfilePoint
    interpolation_defects: tuple  # of (t_mid, float defect or None), per consecutive pair


def m_profile(
    scene: Scene,
    point: WeightedPoint,
    l0: str,
    l1: str,
    ts: Sequence,
    *,
    allow_numerical: bool = False,
) -> MProfile:
    """m_function along the segment, with midpoint interpolation defects.

    The defect |M(mid) - (M(a)+M(b))/2| is reported for inspection only;
    the value is an infimum of t-linear forms on each selector piece, so
    no convexity is asserted.
    """
    ts = sorted(Fraction(t) for t in ts)
    for t in ts:
        if not 0 <= t <= 1:
            raise SceneError(f"profile parameter {t} outside [0, 1]")
    samples = [
        ProfilePoint(t, m_function(scene, point, LinCombo.segment(l0, l1, t),
                                   allow_numerical=allow_numerical))
        for t in ts
    ]
    defects = []
    for p1, p2 in zip(samples, samples[1:]):
        t_mid = (p1.t + p2.t) / 2
        m_mid = m_function(scene, point, LinCombo.segment(l0, l1, t_mid),
                           allow_numerical=allow_numerical)
        if p1.m.infinite or p2.m.infinite or m_mid.infinite:
            defects.append((t_mid, None))
        else:
            defects.append((t_mid, abs(m_mid.value - (p1.m.value + p2.m.value) / 2)))
    return MProfile(points=tuple(samples), interpolation_defects=tuple(defects))
