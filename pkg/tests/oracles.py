"""Independent oracles used by the test suite.

Each oracle takes a different computational route than the code it
checks: Fourier-Motzkin elimination for LP feasibility, exhaustive
positive integer combinations for the relative-interior test, direct
truncated monoid enumeration for the weight function, and a float
direction-grid search for the normalized minimum.  None of them import
the routines they are checking.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


# ---------------------------------------------------------------------------
# Fourier-Motzkin feasibility (dimensions <= 3)
# ---------------------------------------------------------------------------

def fm_feasible(constraints) -> bool:
    """Feasibility of {<x, a> >= b / = b} by variable elimination."""
    rows = []
    for a, rel, b in constraints:
        a = [Fraction(x) for x in a]
        b = Fraction(b)
        rows.append((a, b))
        if rel == "==":
            rows.append(([-x for x in a], -b))
    dim = len(rows[0][0])
    for var in range(dim):
        lower, upper, rest = [], [], []
        for a, b in rows:
            coeff = a[var]
            if coeff > 0:
                # x_var >= (b - rest)/coeff
                lower.append(([x / coeff for x in a], b / coeff))
            elif coeff < 0:
                upper.append(([x / coeff for x in a], b / coeff))
            else:
                rest.append((a, b))
        new_rows = list(rest)
        for (al, bl) in lower:
            for (au, bu) in upper:
                # bound exprs: x_var >= bl - rest_l and x_var <= bu - rest_u,
                # so rest_l - rest_u >= bl - bu as a >= row
                a = [l - u for l, u in zip(al, au)]
                a[var] = Fraction(0)
                new_rows.append((a, bl - bu))
        rows = new_rows
    return all(b <= 0 for _, b in rows)


# ---------------------------------------------------------------------------
# positive combination brute force
# ---------------------------------------------------------------------------

def relint_zero_bruteforce(points, max_coeff: int = 12) -> bool:
    """Search positive integer weights up to max_coeff summing to zero.

    Exhaustive over the full coefficient grid, evaluated in exact int64
    batches (values stay tiny at desk scale).
    """
    pts = [tuple(p) for p in points if any(x != 0 for x in p)]
    if not pts:
        return True
    n = len(pts)
    grid = np.stack(
        np.meshgrid(*([np.arange(1, max_coeff + 1)] * n), indexing="ij"), axis=-1
    ).reshape(-1, n)
    mat = np.array(pts, dtype=np.int64)
    sums = grid @ mat
    return bool(np.any(np.all(sums == 0, axis=1)))


# ---------------------------------------------------------------------------
# truncated monoid enumeration for the weight function
# ---------------------------------------------------------------------------

def monoid_truncation(chars, generators, rank, bound: int):
    """All chi + nonneg integer combinations of generators with coefficient
    sum <= bound, enumerated directly."""
    out = set()
    gens = [tuple(g) for g in generators]
    for chi in chars:
        stack = [(tuple(chi), 0, 0)]
        while stack:
            vec, gi, used = stack.pop()
            if gi == len(gens):
                out.add(vec)
                continue
            for extra in range(bound - used + 1):
                shifted = tuple(v + extra * g for v, g in zip(vec, gens[gi]))
                stack.append((shifted, gi + 1, used + extra))
        if not gens:
            out.add(tuple(chi))
    return out


def mu_bruteforce(chars, stratum_chars, rank, lam, bound: int = 6):
    """Weight via the truncated full weight set; +inf off the cone."""
    lamf = [Fraction(x) for x in lam]
    if any(sum(l * c for l, c in zip(lamf, chi)) < 0 for chi in stratum_chars):
        return math.inf
    members = monoid_truncation(chars, stratum_chars, rank, bound)
    return -min(sum(l * c for l, c in zip(lamf, w)) for w in members)


# ---------------------------------------------------------------------------
# direction-grid search for the normalized minimum
# ---------------------------------------------------------------------------

def _span_basis(generators, rank):
    if not generators:
        return np.zeros((rank, 0))
    mat = np.array(generators, dtype=float).T  # columns are generators
    u, s, _ = np.linalg.svd(mat)
    return u[:, : int(np.sum(s > 1e-9))]


def _unit_sphere_grid(dim: int, n: int, rng) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    pts = rng.standard_normal((n, dim))
    norms = np.linalg.norm(pts, axis=1)
    return pts[norms > 1e-12] / norms[norms > 1e-12, None]


def grid_m_oracle(h_normals, weights, rank, generators, seed: int = 0):
    """Brute-force infimum of -min_w <l, w> / |l| over the cone.

    Samples directions inside the cone's linear span, keeps those
    satisfying the inequalities, and zooms around the best basins.
    Returns math.inf when the cone is the origin alone.
    """
    basis = _span_basis(generators, rank)
    d = basis.shape[1]
    if d == 0:
        return math.inf
    normals = np.array([[float(x) for x in h] for h in h_normals], dtype=float)
    wmat = np.array([[float(x) for x in w] for w in weights], dtype=float)
    rng = np.random.default_rng(seed)

    def evaluate(dirs: np.ndarray):
        lams = dirs @ basis.T  # rows are ambient directions
        if normals.size:
            feas = np.all(lams @ normals.T >= -1e-9, axis=1)
        else:
            feas = np.ones(len(lams), dtype=bool)
        lams = lams[feas]
        dirs = dirs[feas]
        if not len(lams):
            return None, None
        vals = -np.min(lams @ wmat.T, axis=1)
        return vals, dirs

    # seed with the exact generators (the minimum often sits on a ray)
    seeds = []
    for g in generators:
        y = np.linalg.lstsq(basis, np.array(g, dtype=float), rcond=None)[0]
        n = np.linalg.norm(y)
        if n > 1e-12:
            seeds.append(y / n)
    init = _unit_sphere_grid(d, 4096, rng)
    if seeds:
        init = np.vstack([init, np.array(seeds)])
    vals, dirs = evaluate(init)
    assert vals is not None, "no feasible direction found in the cone span"
    order = np.argsort(vals)
    best_val = vals[order[0]]
    basins = dirs[order[: min(6, len(order))]]

    for center in basins:
        radius = 1.0
        local_best = None
        for _ in range(16):
            cloud = center + radius * rng.standard_normal((1500, d))
            norms = np.linalg.norm(cloud, axis=1)
            cloud = cloud[norms > 1e-12] / norms[norms > 1e-12, None]
            cloud = np.vstack([cloud, center[None, :]])
            vals, dirs2 = evaluate(cloud)
            if vals is not None:
                i = int(np.argmin(vals))
                if local_best is None or vals[i] < local_best:
                    local_best = vals[i]
                    center = dirs2[i]
            radius *= 0.35
        if local_best is not None and local_best < best_val:
            best_val = local_best
    return float(best_val)
