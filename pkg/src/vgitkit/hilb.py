"""Cycle-level weights for degenerating length-d subschemes.

A point of the model is a finite cycle (support ids with multiplicities)
together with a fan of limit scenarios: each scenario is a cone of
directions producing the same limit, carrying one character tau for the
scheme-structure contribution and one character per support point for
the cycle contribution.  The two weight functions are

    mu_m(z, l)   = -<l, tau> - m * sum_p n_p <l, c_p>     (determinant family)
    mu_inf(z, l) =            -     sum_p n_p <l, c_p>    (cycle pullback)

so mu_m / m converges to mu_inf with residual exactly -<l, tau>/m.  The
tau term is absent from mu_inf, which is the structural reason statuses
under the pullback depend only on the cycle; thresholds make the
"for large m" statements effective by treating 1/m as a segment
parameter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import ModelError, PLUS_INFINITY, SceneError, Status
from .polyhedra import (
    EQ,
    GE,
    RationalCone,
    dot,
    dual_rays,
    lex_key,
    lp_feasible,
    require_integer_vec,
    vadd,
    vscale,
)


class NoFiniteThreshold(RuntimeError):
    """The family's statuses never agree with the limit status.

    Happens only when the limit status is strictly semistable while every
    nearby member is strictly on one side; the inclusion chain still
    holds from the stabilization threshold onward.
    """


@dataclass(frozen=True)
class LimitScenario:
    cone: RationalCone
    tau: tuple
    support: tuple  # ((point id, multiplicity, character), ...)

    @property
    def cycle_weight(self) -> tuple:
        """sum_p n_p c_p, the tau-free linear form of the scenario."""
        total = [0] * len(self.tau)
        for _, n_p, c in self.support:
            total = vadd(total, vscale(n_p, c))
        return tuple(total)


@dataclass(frozen=True)
class HilbPoint:
    name: str
    d: int
    rank: int
    scenarios: tuple

    @staticmethod
    def build(name: str, d: int, rank: int, scenarios: Sequence[tuple]) -> "HilbPoint":
        """Validate and assemble; ``scenarios`` entries are
        (cone_h_normals, tau, [(id, n_p, c_p), ...])."""
        if d < 1:
            raise SceneError(f"hilb point {name!r}: cycle length must be positive")
        built = []
        for k, (cone_h, tau, support) in enumerate(scenarios):
            where = f"hilb point {name!r}, scenario {k}"
            cone = dual_rays([require_integer_vec(h, where) for h in cone_h], rank)
            if cone.is_origin_only:
                raise SceneError(f"{where}: scenario cone is the origin alone")
            tau = require_integer_vec(tau, where)
            if len(tau) != rank:
                raise SceneError(f"{where}: tau has length {len(tau)}, expected {rank}")
            sup = []
            total = 0
            for pid, n_p, c in support:
                if n_p < 1:
                    raise SceneError(f"{where}: multiplicity of {pid!r} must be positive")
                c = require_integer_vec(c, where)
                if len(c) != rank:
                    raise SceneError(f"{where}: character of {pid!r} has wrong length")
                total += n_p
                sup.append((pid, n_p, c))
            if total != d:
                raise SceneError(f"{where}: multiplicities sum to {total}, expected d = {d}")
            built.append(LimitScenario(cone=cone, tau=tau, support=tuple(sup)))
        built.sort(key=lambda s: (s.cone.lineality, s.cone.rays))
        z = HilbPoint(name=name, d=d, rank=rank, scenarios=tuple(built))
        _validate_fan(z)
        return z


def _relative_interiors_meet(a: RationalCone, b: RationalCone) -> bool:
    def implicit(cone: RationalCone) -> tuple:
        gens = cone.generators()
        impl, strict = [], []
        for h in cone.h_rep:
            (impl if all(dot(g, h) == 0 for g in gens) else strict).append(h)
        return impl, strict

    impl_a, strict_a = implicit(a)
    impl_b, strict_b = implicit(b)
    constraints = [(h, EQ, 0) for h in impl_a + impl_b]
    constraints += [(h, GE, 1) for h in strict_a + strict_b]
    if not constraints:  # both cones are the full space
        return True
    return lp_feasible(constraints) is not None


def _validate_fan(z: HilbPoint) -> None:
    """Scenario cones must have disjoint relative interiors, and both
    linear forms must agree on every shared face (checked on the
    intersection cone's generators, which conically span it)."""
    for i in range(len(z.scenarios)):
        for j in range(i + 1, len(z.scenarios)):
            a, b = z.scenarios[i], z.scenarios[j]
            if _relative_interiors_meet(a.cone, b.cone):
                raise SceneError(
                    f"hilb point {z.name!r}: scenario cones {i} and {j} overlap "
                    "in their relative interiors"
                )
            shared = dual_rays(a.cone.h_rep + b.cone.h_rep, z.rank)
            for g in shared.generators():
                if dot(g, a.tau) != dot(g, b.tau) or dot(g, a.cycle_weight) != dot(g, b.cycle_weight):
                    raise SceneError(
                        f"hilb point {z.name!r}: scenarios {i} and {j} disagree "
                        f"on the shared face direction {g}"
                    )


def _scenario_at(z: HilbPoint, lam) -> Optional[LimitScenario]:
    holders = [s for s in z.scenarios if s.cone.contains(lam)]
    if not holders:
        return None
    first = holders[0]
    for other in holders[1:]:
        if (dot(lam, other.tau) != dot(lam, first.tau)
                or dot(lam, other.cycle_weight) != dot(lam, first.cycle_weight)):
            raise ModelError(
                f"hilb point {z.name!r}: direction {tuple(lam)} lies on a face "
                "where adjacent scenarios disagree"
            )
    return first


def mu_Lm(z: HilbPoint, lam: Sequence, m: int):
    """Weight under the m-th determinant member; +inf off every cone."""
    if m < 1:
        raise SceneError("m must be a positive integer")
    lam = require_integer_vec(lam, "mu_Lm")
    s = _scenario_at(z, lam)
    if s is None:
        return PLUS_INFINITY
    return -dot(lam, s.tau) - m * dot(lam, s.cycle_weight)


def mu_Lm_normalized(z: HilbPoint, lam: Sequence, m: int):
    v = mu_Lm(z, lam, m)
    if v is PLUS_INFINITY:
        return v
    return Fraction(v, m)


def mu_Linf(z: HilbPoint, lam: Sequence):
    """Weight under the cycle pullback: the tau term is absent."""
    lam = require_integer_vec(lam, "mu_Linf")
    s = _scenario_at(z, lam)
    if s is None:
        return PLUS_INFINITY
    return -dot(lam, s.cycle_weight)


@dataclass(frozen=True)
class ConvergenceRow:
    lam: tuple
    m: int
    mu_norm: object  # Fraction or +inf
    mu_limit: object
    residual: object  # Fraction or None for matched +inf


def convergence_report(z: HilbPoint, lams: Sequence[Sequence], ms: Sequence[int]) -> list:
    """Residuals mu_m/m - mu_inf, asserted to equal -<l, tau>/m exactly."""
    rows = []
    for lam in lams:
        lam = require_integer_vec(lam, "convergence_report")
        limit = mu_Linf(z, lam)
        for m in ms:
            norm = mu_Lm_normalized(z, lam, m)
            if limit is PLUS_INFINITY or norm is PLUS_INFINITY:
                assert limit is PLUS_INFINITY and norm is PLUS_INFINITY, (
                    "one weight infinite without the other"
                )
                rows.append(ConvergenceRow(lam, m, norm, limit, None))
                continue
            residual = norm - limit
            s = _scenario_at(z, lam)
            assert residual == Fraction(-dot(lam, s.tau), m)
            rows.append(ConvergenceRow(lam, m, norm, limit, residual))
    return rows


# ---------------------------------------------------------------------------
# statuses and thresholds
# ---------------------------------------------------------------------------

def _status_for_forms(z: HilbPoint, forms: dict) -> Status:
    # forms maps scenario index -> the character u with mu = -<l, u> on
    # that cone.  Over a single cone, sup <l,u> > 0 iff some conic
    # generator pairs positively, and a nonzero l with <l,u> >= 0 exists
    # iff some generator pairs nonnegatively.
    unstable = False
    not_stable = False
    for idx, s in enumerate(z.scenarios):
        u = forms[idx]
        for g in s.cone.generators():
            v = dot(g, u)
            if v > 0:
                unstable = True
            if v >= 0:
                not_stable = True
    if unstable:
        return Status.UNSTABLE
    if not_stable:
        return Status.STRICTLY_SEMISTABLE
    return Status.STABLE


def status_Lm(z: HilbPoint, m: int) -> Status:
    if m < 1:
        raise SceneError("m must be a positive integer")
    forms = {
        i: vadd(s.tau, vscale(m, s.cycle_weight))
        for i, s in enumerate(z.scenarios)
    }
    return _status_for_forms(z, forms)


def status_Linf(z: HilbPoint) -> Status:
    forms = {i: s.cycle_weight for i, s in enumerate(z.scenarios)}
    return _status_for_forms(z, forms)


def _sign_break_values(z: HilbPoint) -> list:
    """Roots in t = 1/m of <g, t*tau + cycle_weight> over all generators."""
    roots = set()
    for s in z.scenarios:
        for g in s.cone.generators():
            a = dot(g, s.tau)
            b = dot(g, s.cycle_weight)
            if a == 0:
                continue
            t = Fraction(-b, a)
            if 0 < t <= 1:
                roots.add(t)
    return sorted(roots)


def eventual_status(z: HilbPoint) -> tuple:
    """(status for all large m, the first m from which it is certain)."""
    roots = _sign_break_values(z)
    if roots:
        m_big = int(1 / roots[0]) + 1
    else:
        m_big = 1
    return status_Lm(z, m_big), m_big


def _walk_down(z: HilbPoint, m_big: int, target: Status) -> int:
    m_star = m_big
    for m in range(m_big - 1, 0, -1):
        if status_Lm(z, m) is target:
            m_star = m
        else:
            break
    return m_star


def stabilization_threshold(z: HilbPoint) -> int:
    """Smallest m from which the family status never changes again."""
    ev, m_big = eventual_status(z)
    return _walk_down(z, m_big, ev)


def status_threshold(z: HilbPoint) -> int:
    """Smallest m with status_Lm = status_Linf from there on.

    Raises NoFiniteThreshold when the eventual family status differs from
    the limit status (possible only across a strictly semistable limit).
    """
    target = status_Linf(z)
    ev, m_big = eventual_status(z)
    if ev is not target:
        raise NoFiniteThreshold(
            f"hilb point {z.name!r}: statuses settle at {ev} but the limit "
            f"status is {target}"
        )
    return _walk_down(z, m_big, target)


# ---------------------------------------------------------------------------
# cycle invariance
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CycleInvarianceReport:
    status_limit: Status
    threshold_1: int
    threshold_2: int
    agree_from: int


def _cycle_data(z: HilbPoint) -> tuple:
    return tuple(
        (s.cone.lineality, s.cone.rays, tuple(sorted(s.support)))
        for s in z.scenarios
    )


def cycle_invariance_check(z1: HilbPoint, z2: HilbPoint) -> CycleInvarianceReport:
    """For two points with the same underlying cycle data (cones and
    per-support multiplicities/characters; tau free to differ), confirm
    equal limit statuses and equal family statuses beyond both
    thresholds."""
    if (z1.d, z1.rank) != (z2.d, z2.rank):
        raise ModelError(
            f"cycle data differs: (d, rank) {(z1.d, z1.rank)} vs {(z2.d, z2.rank)}"
        )
    d1, d2 = _cycle_data(z1), _cycle_data(z2)
    if d1 != d2:
        diffs = [
            f"scenario {i}: {a} vs {b}"
            for i, (a, b) in enumerate(zip(d1, d2))
            if a != b
        ]
        if len(d1) != len(d2):
            diffs.append(f"scenario count {len(d1)} vs {len(d2)}")
        raise ModelError("cycle data differs: " + "; ".join(diffs))

    s1, s2 = status_Linf(z1), status_Linf(z2)
    assert s1 is s2, "limit status read tau, which it must not"
    t1 = status_threshold(z1)
    t2 = status_threshold(z2)
    agree_from = max(t1, t2)
    for m in range(agree_from, agree_from + 4):
        assert status_Lm(z1, m) is status_Lm(z2, m)
    return CycleInvarianceReport(
        status_limit=s1, threshold_1=t1, threshold_2=t2, agree_from=agree_from
    )
