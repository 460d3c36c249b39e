"""Exact rational linear algebra and polyhedral primitives.

Vectors are plain tuples with ``int`` or ``fractions.Fraction`` entries.
Everything in this module is pure, exact and deterministic: no floats,
no tolerances.  Decision procedures either return an exactly verifiable
witness or a definitive negative.

Provided here:

* ``lp_feasible``     -- feasibility of a rational linear system (phase-1
                         simplex with Bland's rule, hence terminating);
* ``dual_rays``       -- H-rep -> V-rep conversion of a polyhedral cone
                         (double description method on the pointed quotient);
* ``relint_contains_zero`` -- strictly positive combination test;
* ``integer_kernel``  -- saturated integer kernel lattice of a set of
                         integer vectors (unimodular column reduction).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

Vec = tuple
# A linear constraint is (normal, relation, rhs) meaning  <x, normal> rel rhs.
GE = ">="
EQ = "=="

_ZERO = Fraction(0)
_ONE = Fraction(1)


class InputError(ValueError):
    """Malformed input: dimension mismatch or a non-integer where one is required."""


# ---------------------------------------------------------------------------
# vector helpers
# ---------------------------------------------------------------------------

def as_vec(entries: Iterable) -> Vec:
    return tuple(Fraction(e) for e in entries)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v, strict=True))


def vadd(u: Sequence, v: Sequence) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u: Sequence, v: Sequence) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vscale(c, u: Sequence) -> Vec:
    return tuple(c * a for a in u)


def vneg(u: Sequence) -> Vec:
    return tuple(-a for a in u)


def is_zero_vec(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def norm_sq(u: Sequence):
    return sum(a * a for a in u)


def primitive(v: Sequence) -> tuple:
    """Scale to the content-1 integer vector with the same direction.

    The zero vector maps to itself.
    """
    fr = [Fraction(a) for a in v]
    if not fr:
        return ()
    mult = lcm(*(f.denominator for f in fr))
    ints = [int(f * mult) for f in fr]
    g = gcd(*ints)
    if g == 0:
        return tuple(ints)
    return tuple(a // g for a in ints)


def sign_canon(v: Sequence) -> tuple:
    """Flip the sign so the first nonzero entry is positive."""
    for a in v:
        if a != 0:
            return tuple(vneg(v)) if a < 0 else tuple(v)
    return tuple(v)


def lex_key(v: Sequence) -> tuple:
    return tuple(Fraction(a) for a in v)


def require_integer_vec(v: Sequence, where: str = "vector") -> tuple:
    out = []
    for a in v:
        f = Fraction(a)
        if f.denominator != 1:
            raise InputError(f"{where}: entry {a} is not an integer")
        out.append(int(f))
    return tuple(out)


# ---------------------------------------------------------------------------
# exact Gaussian elimination utilities
# ---------------------------------------------------------------------------

def rref(rows: Sequence[Sequence], dim: int) -> list:
    """Reduced row echelon form over Q; returns the nonzero rows.

    The output is a canonical basis of the row span, so it doubles as a
    dedup key for subspaces.
    """
    mat = [[Fraction(x) for x in row] for row in rows]
    npiv = 0
    for col in range(dim):
        pivot = None
        for i in range(npiv, len(mat)):
            if mat[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[npiv], mat[pivot] = mat[pivot], mat[npiv]
        pv = mat[npiv][col]
        mat[npiv] = [x / pv for x in mat[npiv]]
        for i in range(len(mat)):
            if i != npiv and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[npiv])]
        npiv += 1
        if npiv == len(mat):
            break
    return [tuple(row) for row in mat[:npiv]]


def rank_of(rows: Sequence[Sequence], dim: int) -> int:
    return len(rref(rows, dim))


def independent_rows(rows: Sequence[Sequence], dim: int) -> list[int]:
    """Indices of a maximal independent subset, chosen greedily in order."""
    chosen: list[int] = []
    basis: list[Sequence] = []
    r = 0
    for i, row in enumerate(rows):
        if rank_of(basis + [row], dim) > r:
            chosen.append(i)
            basis.append(row)
            r += 1
            if r == dim:
                break
    return chosen


def nullspace_basis(rows: Sequence[Sequence], dim: int) -> list[Vec]:
    """Rational basis of {x : <x, row> = 0 for every row}."""
    red = rref(rows, dim)
    pivots = []
    for row in red:
        for c in range(dim):
            if row[c] != 0:
                pivots.append(c)
                break
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for fc in free:
        v = [_ZERO] * dim
        v[fc] = _ONE
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return basis


def solve_square(a: Sequence[Sequence], b: Sequence) -> Optional[list]:
    """Solve a square rational system exactly; None when singular."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if aug[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [aug[i][n] for i in range(n)]


def project_onto_span(basis_rows: Sequence[Sequence], w: Sequence) -> Vec:
    """Orthogonal projection of w onto the span of the given vectors."""
    dim = len(w)
    red = rref(basis_rows, dim)
    if not red:
        return tuple([_ZERO] * dim)
    gram = [[dot(bi, bj) for bj in red] for bi in red]
    rhs = [dot(bi, w) for bi in red]
    y = solve_square(gram, rhs)
    assert y is not None  # rref rows are independent
    p = [_ZERO] * dim
    for yi, bi in zip(y, red):
        p = [acc + yi * x for acc, x in zip(p, bi)]
    return tuple(p)


# ---------------------------------------------------------------------------
# exact LP feasibility (phase-1 simplex, Bland's rule)
# ---------------------------------------------------------------------------

def lp_feasible(constraints: Sequence[tuple]) -> Optional[Vec]:
    """Exact feasibility of {<x, a_i> >= b_i / = b_i} over free rational x.

    Returns a witness vector (tuple of Fractions) or None when no rational
    point satisfies the system.  Bland's rule guarantees termination.
    """
    cons = []
    dim = None
    for a, rel, b in constraints:
        av = as_vec(a)
        if rel not in (GE, EQ):
            raise InputError(f"unknown relation {rel!r}")
        if dim is None:
            dim = len(av)
        elif len(av) != dim:
            raise InputError(f"dimension mismatch among constraints: {len(av)} vs {dim}")
        cons.append((av, rel, Fraction(b)))
    if dim is None or dim < 1:
        raise InputError("lp_feasible needs at least one constraint of dimension >= 1")

    m = len(cons)
    ge_rows = [i for i, c in enumerate(cons) if c[1] == GE]
    slack_of = {row: k for k, row in enumerate(ge_rows)}
    n_struct = 2 * dim + len(ge_rows)
    ncols = n_struct + m  # plus one artificial per row

    # rows:  a.u - a.w - s = b, with rhs made nonnegative
    tab = []
    rhs = []
    for i, (a, rel, b) in enumerate(cons):
        row = [Fraction(x) for x in a] + [-Fraction(x) for x in a] + [_ZERO] * len(ge_rows)
        if rel == GE:
            row[2 * dim + slack_of[i]] = -_ONE
        if b < 0:
            row = [-x for x in row]
            b = -b
        row.extend(_ONE if j == i else _ZERO for j in range(m))
        tab.append(row)
        rhs.append(b)

    basis = [n_struct + i for i in range(m)]
    # phase-1 objective: minimize the artificial sum; price out the basis
    cost = [_ZERO] * ncols
    for j in range(ncols):
        cj = _ONE if j >= n_struct else _ZERO
        cost[j] = cj - sum(tab[i][j] for i in range(m))
    obj = -sum(rhs, start=_ZERO)  # objective value is -obj

    while True:
        enter = next((j for j in range(ncols) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            t = tab[i][enter]
            if t > 0:
                ratio = rhs[i] / t
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        # phase-1 objective is bounded below by 0, so a pivot row always exists
        assert leave is not None, "unbounded phase-1 objective"
        pv = tab[leave][enter]
        tab[leave] = [x / pv for x in tab[leave]]
        rhs[leave] /= pv
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
                rhs[i] -= f * rhs[leave]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, tab[leave])]
        obj -= f * rhs[leave]
        basis[leave] = enter

    if -obj > 0:
        return None
    values = [_ZERO] * ncols
    for i, bi in enumerate(basis):
        values[bi] = rhs[i]
    witness = tuple(values[i] - values[dim + i] for i in range(dim))
    assert satisfies(witness, cons)
    return witness


def satisfies(x: Sequence, constraints: Sequence[tuple]) -> bool:
    """Exact check of a point against (normal, relation, rhs) constraints."""
    for a, rel, b in constraints:
        val = dot(x, as_vec(a))
        if rel == GE and not val >= b:
            return False
        if rel == EQ and val != b:
            return False
    return True


# ---------------------------------------------------------------------------
# rational polyhedral cones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalCone:
    """A cone {x : <x, h> >= 0 for h in h_rep} with both representations.

    ``lineality`` is a primitive integer basis of the largest linear
    subspace inside the cone; ``rays`` are the extreme rays modulo that
    subspace, content-1 and orthogonal to it, sorted lexicographically.
    """

    dim: int
    h_rep: tuple
    lineality: tuple
    rays: tuple

    def contains(self, x: Sequence) -> bool:
        return all(dot(x, h) >= 0 for h in self.h_rep)

    @property
    def is_origin_only(self) -> bool:
        return not self.rays and not self.lineality

    def generators(self) -> tuple:
        """Conic generators: rays plus both signs of the lineality basis."""
        gens = list(self.rays)
        for v in self.lineality:
            gens.append(v)
            gens.append(vneg(v))
        return tuple(gens)

    def span_rank(self) -> int:
        return rank_of(list(self.rays) + list(self.lineality), self.dim)


def dual_rays(cone_h: Sequence[Sequence], dim: int) -> RationalCone:
    """Convert an H-representation into generators (double description).

    An empty normal list yields the full space.  The returned generators
    satisfy every inequality, and conversely generate the whole solution
    set; tests verify mutual containment by LP.
    """
    normals = []
    seen = set()
    for h in cone_h:
        if len(h) != dim:
            raise InputError(f"normal of length {len(h)}, expected {dim}")
        p = primitive(h)
        if not is_zero_vec(p) and p not in seen:
            seen.add(p)
            normals.append(p)

    if not normals:
        basis = tuple(tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim))
        return RationalCone(dim, h_rep=(), lineality=basis, rays=())

    lin = integer_kernel(normals, dim)

    # Work in coordinates on the row span W of the normals.  W is a
    # complement of the lineality space (rowspace _|_ nullspace), so the
    # quotient cone {y : <y, B h> >= 0} is pointed.
    bidx = independent_rows(normals, dim)
    basis = [normals[i] for i in bidx]
    k = len(basis)
    tnormals = [tuple(dot(b, h) for b in basis) for h in normals]
    rays_y = _pointed_cone_rays(tnormals, k)
    rays = []
    for y in rays_y:
        lam = [_ZERO] * dim
        for yi, b in zip(y, basis):
            lam = [acc + yi * x for acc, x in zip(lam, b)]
        rays.append(primitive(lam))
    rays.sort(key=lex_key)
    return RationalCone(
        dim,
        h_rep=tuple(sorted(normals, key=lex_key)),
        lineality=tuple(sorted(lin, key=lex_key)),
        rays=tuple(rays),
    )


def _pointed_cone_rays(normals: Sequence[tuple], k: int) -> list[tuple]:
    """Extreme rays of a pointed cone {y in Q^k : <y, h> >= 0}.

    Incremental double description: start from a simplicial cone cut out
    by k independent normals, insert the rest one at a time, and keep new
    rays only for adjacent positive/negative pairs (combinatorial test,
    valid because the cone is pointed).
    """
    init = independent_rows(normals, k)
    assert len(init) == k, "quotient normals must span"
    mat = [normals[i] for i in init]
    rays = []
    for i in range(k):
        e = [_ONE if j == i else _ZERO for j in range(k)]
        r = solve_square(mat, e)
        assert r is not None
        active = frozenset(init[j] for j in range(k) if j != i)
        rays.append((primitive(r), active))

    order = [j for j in range(len(normals)) if j not in init]
    for idx in order:
        h = normals[idx]
        vals = [dot(r, h) for r, _ in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            rays = [
                (r, act | {idx} if i in zero else act)
                for i, (r, act) in enumerate(rays)
            ]
            continue
        kept = [(rays[i][0], rays[i][1]) for i in pos]
        kept += [(rays[i][0], rays[i][1] | {idx}) for i in zero]
        for ip in pos:
            rp, ap = rays[ip]
            vp = vals[ip]
            for im in neg:
                rm, am = rays[im]
                vm = vals[im]
                common = ap & am
                adjacent = not any(
                    common <= rays[io][1]
                    for io in range(len(rays))
                    if io != ip and io != im
                )
                if not adjacent:
                    continue
                combo = tuple(vp * x - vm * y for x, y in zip(rm, rp))
                kept.append((primitive(combo), common | {idx}))
        seen = set()
        rays = []
        for r, act in kept:
            if r not in seen:
                seen.add(r)
                rays.append((r, act))
    return [r for r, _ in rays]


def cone_is_nontrivial(
    ineq_normals: Sequence[Sequence],
    dim: int,
    eq_normals: Sequence[Sequence] = (),
) -> Optional[Vec]:
    """A nonzero point of {x : <x,h> >= 0, <x,e> = 0}, or None if only 0.

    Scale invariance lets "some coordinate is nonzero" be tested as 2*dim
    one-sided systems with that coordinate pinned to >= 1.
    """
    base = [(h, GE, 0) for h in ineq_normals] + [(e, EQ, 0) for e in eq_normals]
    for i in range(dim):
        unit = tuple(1 if j == i else 0 for j in range(dim))
        for direction in (unit, vneg(unit)):
            witness = lp_feasible(base + [(direction, GE, 1)])
            if witness is not None:
                return witness
    return None


# ---------------------------------------------------------------------------
# strictly positive combinations
# ---------------------------------------------------------------------------

def relint_zero_witness(points: Sequence[Sequence]) -> Optional[Vec]:
    """Strictly positive weights summing the points to zero, if any.

    Zero vectors are dropped first; they never obstruct.  By homogeneity
    "strictly positive" is normalized to "each weight >= 1".
    """
    pts = [as_vec(p) for p in points if not is_zero_vec(p)]
    if not pts:
        return ()
    dim = len(pts[0])
    n = len(pts)
    constraints = []
    for c in range(dim):
        constraints.append((tuple(p[c] for p in pts), EQ, 0))
    for j in range(n):
        constraints.append((tuple(1 if i == j else 0 for i in range(n)), GE, 1))
    return lp_feasible(constraints)


def relint_contains_zero(points: Sequence[Sequence]) -> bool:
    """True iff 0 is a strictly positive combination of the points."""
    if not points:
        raise InputError("relint_contains_zero needs a non-empty list")
    return relint_zero_witness(points) is not None


# ---------------------------------------------------------------------------
# saturated integer kernels
# ---------------------------------------------------------------------------

def integer_kernel(chars: Sequence[Sequence], dim: int) -> list[tuple]:
    """Basis of the saturated lattice {v in Z^dim : <v, c> = 0 for all c}.

    Unimodular column reduction (Smith-style): column operations bring the
    input matrix to column echelon form; the mirrored columns of the
    identity over the zero columns form the kernel basis.  Basis vectors
    are primitive (columns of a unimodular matrix), sign-canonical, and
    sorted.  Empty input yields the standard basis.
    """
    rows = [require_integer_vec(c, "integer_kernel") for c in chars]
    rows = [r for r in rows if not is_zero_vec(r)]
    if not rows:
        return [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
    for r in rows:
        if len(r) != dim:
            raise InputError(f"character of length {len(r)}, expected {dim}")

    m = len(rows)
    a = [[rows[i][j] for j in range(dim)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]

    def col_sub(j_dst: int, j_src: int, q: int) -> None:
        for i in range(m):
            a[i][j_dst] -= q * a[i][j_src]
        for i in range(dim):
            v[i][j_dst] -= q * v[i][j_src]

    def col_swap(j1: int, j2: int) -> None:
        for i in range(m):
            a[i][j1], a[i][j2] = a[i][j2], a[i][j1]
        for i in range(dim):
            v[i][j1], v[i][j2] = v[i][j2], v[i][j1]

    npiv = 0
    for r in range(m):
        while True:
            live = [j for j in range(npiv, dim) if a[r][j] != 0]
            if len(live) <= 1:
                break
            jmin = min(live, key=lambda j: abs(a[r][j]))
            for j in live:
                if j != jmin:
                    col_sub(j, jmin, a[r][j] // a[r][jmin])
        live = [j for j in range(npiv, dim) if a[r][j] != 0]
        if live:
            col_swap(npiv, live[0])
            npiv += 1
            if npiv == dim:
                break

    kernel = [tuple(v[i][j] for i in range(dim)) for j in range(npiv, dim)]
    return sorted(hnf_rows(kernel, dim), key=lex_key)


def hnf_rows(rows: Sequence[Sequence], dim: int) -> list[tuple]:
    """Row-style Hermite normal form of an integer row basis.

    Canonical for the generated lattice: positive pivots, entries above a
    pivot reduced into [0, pivot).  Two bases of the same lattice map to
    the same output, which makes lattice (and cone) equality a plain
    tuple comparison.
    """
    mat = [list(require_integer_vec(r, "hnf_rows")) for r in rows]
    m = len(mat)
    piv_row = 0
    for col in range(dim):
        while True:
            live = [i for i in range(piv_row, m) if mat[i][col] != 0]
            if len(live) <= 1:
                break
            imin = min(live, key=lambda i: abs(mat[i][col]))
            for i in live:
                if i != imin:
                    q = mat[i][col] // mat[imin][col]
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[imin])]
        live = [i for i in range(piv_row, m) if mat[i][col] != 0]
        if not live:
            continue
        i = live[0]
        mat[piv_row], mat[i] = mat[i], mat[piv_row]
        if mat[piv_row][col] < 0:
            mat[piv_row] = [-a for a in mat[piv_row]]
        p = mat[piv_row][col]
        for i in range(piv_row):
            q = mat[i][col] // p
            if q:
                mat[i] = [a - q * b for a, b in zip(mat[i], mat[piv_row])]
        piv_row += 1
        if piv_row == m:
            break
    return [tuple(r) for r in mat if not is_zero_vec(r)]
