"""Weyl-orbit geometry for the type A and type B root systems.

Membership in the convex hull of a Weyl orbit co(W.rho) is decided by
chamber projection followed by the dual-cone partial-sum inequalities,
so the hull is never triangulated.  The polytope K is the part of the
hull inside the closed positive chamber; its vertices come from solving
all rank-sized subsets of the bounding hyperplanes.

Family "b" acts on R^q by signed permutations; family "a" acts on
R^(q+1) by permutations, with the effective flag marking data lowered
to the sum-zero subspace.
"""

import itertools
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RootSystemSpec:
    """Family ("a" or "b"), rank, and, for family a, effectiveness."""

    family: str
    rank: int
    effective: bool = True

    def __post_init__(self):
        fam = str(self.family).strip().lower()
        if fam not in ("a", "b"):
            raise ValueError("family must be 'a' or 'b'")
        object.__setattr__(self, "family", fam)
        assert self.rank >= 1

    @property
    def dim(self):
        """Ambient dimension: q for family b, q + 1 for family a."""
        return self.rank + (self.family == "a")


@dataclass(frozen=True, eq=False)
class OrbitPolytope:
    """co(W.rho) for a chamber point rho, held as its defining data."""

    spec: RootSystemSpec
    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, float)
        object.__setattr__(self, "rho", rho)
        assert rho.shape == (self.spec.dim,), "rho has the wrong length"
        assert np.all(np.diff(rho) <= 1e-9), "rho must be weakly decreasing"
        if self.spec.family == "b":
            assert rho[-1] >= -1e-9, "rho must be nonnegative for family b"
        elif self.spec.effective:
            assert abs(rho.sum()) <= 1e-9, \
                "effective family a expects a sum-zero rho"


def apply_weyl(element, x):
    """Apply a (permutation, signs) pair as returned by chamber_project."""
    perm, signs = element
    x = np.asarray(x, float)
    return np.asarray(signs, float) * x[list(perm)]


def chamber_project(spec, x):
    """Chamber representative of x and the Weyl element achieving it.

    Family b takes absolute values and sorts in descending order;
    family a only sorts.  The returned element is (permutation, signs)
    with apply_weyl(element, x) reproducing the projection bitwise.
    """
    x = np.asarray(x, float)
    assert x.shape == (spec.dim,)
    if spec.family == "b":
        signs = np.where(x < 0, -1.0, 1.0)
    else:
        signs = np.ones(spec.dim)
    perm = np.argsort(-signs * x, kind="stable")
    proj = signs[perm] * x[perm]
    return proj, (tuple(int(i) for i in perm), tuple(signs[perm]))


def _in_chamber(spec, x, tol=1e-9):
    if np.any(np.diff(x) > tol):
        return False
    return spec.family == "a" or x[-1] >= -tol


def hull_membership(poly, x, tol=1e-9):
    """Whether x lies in co(W.rho), via the dual-cone inequalities.

    After projecting x to the chamber, membership is equivalent to all
    partial sums of rho - x+ being nonnegative; family a additionally
    pins the full sum to zero (permutations preserve it).
    """
    proj, _ = chamber_project(poly.spec, np.asarray(x, float))
    cums = np.cumsum(poly.rho - proj)
    if poly.spec.family == "b":
        return bool(np.all(cums >= -tol))
    return bool(np.all(cums[:-1] >= -tol) and abs(cums[-1]) <= tol)


def polytope_contains(poly, y, tol=1e-9):
    """Whether y lies in K = co(W.rho) intersected with the closed chamber."""
    y = np.asarray(y, float)
    return _in_chamber(poly.spec, y, tol) and hull_membership(poly, y, tol)


def orbit(spec, rho):
    """The Weyl orbit of rho as a list of distinct points."""
    if spec.rank > 8:
        raise ValueError("orbit enumeration is limited to rank <= 8")
    rho = np.asarray(rho, float)
    assert rho.shape == (spec.dim,)
    pts = set()
    if spec.family == "b":
        for perm in itertools.permutations(rho.tolist()):
            for signs in itertools.product((1.0, -1.0), repeat=spec.dim):
                pts.add(tuple(s * p for s, p in zip(signs, perm)))
    else:
        pts.update(itertools.permutations(rho.tolist()))
    return [np.array(p) for p in sorted(pts)]


def polytope_vertices_K(poly, tol=1e-9):
    """Vertices of K, by solving all rank-sized systems of active walls.

    The candidate walls are the chamber walls and the shifted walls
    where a leading partial sum meets that of rho; family a adds the
    full-sum equality to every system.  Singular systems are skipped
    and infeasible solutions dropped, so the survivors are exactly the
    vertices (0 and rho among them whenever rho is interior).
    """
    spec, rho = poly.spec, poly.rho
    q = spec.rank
    assert q <= 6, "vertex enumeration is limited to rank <= 6"
    n = spec.dim
    rows, rhs = [], []
    for r in range(n - 1):
        e = np.zeros(n)
        e[r], e[r + 1] = 1.0, -1.0
        rows.append(e)
        rhs.append(0.0)
    if spec.family == "b":
        e = np.zeros(n)
        e[-1] = 1.0
        rows.append(e)
        rhs.append(0.0)
    target = np.cumsum(rho)
    for l in range(q):
        e = np.zeros(n)
        e[: l + 1] = 1.0
        rows.append(e)
        rhs.append(target[l])
    fixed_row = [np.ones(n)] if spec.family == "a" else []
    fixed_rhs = [rho.sum()] if spec.family == "a" else []
    out, seen = [], set()
    for subset in itertools.combinations(range(len(rows)), q):
        a = np.array([rows[i] for i in subset] + fixed_row)
        b = np.array([rhs[i] for i in subset] + fixed_rhs)
        try:
            v = np.linalg.solve(a, b)
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.abs(a @ v - b) <= 1e-8 * max(1.0, abs(target[-1]))):
            continue
        if not polytope_contains(poly, v, tol):
            continue
        key = tuple(np.round(v, 9) + 0.0)
        if key not in seen:
            seen.add(key)
            out.append(v)
    return out


def prop65_check(poly, epsilon, y, tol=1e-9):
    """Whether the stretched point (1+eps)y - eps rho stays in the hull.

    y must belong to K; by convexity it is enough to verify this on the
    vertices of K, which is what the scans and eps0_estimate do.
    """
    y = np.asarray(y, float)
    if not polytope_contains(poly, y, tol):
        raise ValueError("y must lie in K, the chamber part of co(W.rho)")
    z = (1.0 + epsilon) * y - epsilon * poly.rho
    return hull_membership(poly, z, tol)


def lemma44_check(poly, epsilon, y, tol=1e-9):
    """Whether (1+eps)y + eps rho stays in the hull.

    y must lie in co(W.rho) with -y in the closed chamber.  For family
    b the map x -> -x is a Weyl element, so the check reduces to
    prop65_check at -y; family a is tested directly.
    """
    y = np.asarray(y, float)
    if not (_in_chamber(poly.spec, -y, tol) and hull_membership(poly, y, tol)):
        raise ValueError(
            "y must lie in co(W.rho) with -y in the closed chamber")
    if poly.spec.family == "b":
        return prop65_check(poly, epsilon, -y, tol)
    z = (1.0 + epsilon) * y + epsilon * poly.rho
    return hull_membership(poly, z, tol)


def product_membership(poly1, poly2, a1, a2, tol=1e-9):
    """Hull membership in a product of two orbit polytopes, factorwise."""
    return hull_membership(poly1, a1, tol) and hull_membership(poly2, a2, tol)


def _unit_rho_samples(spec, count, gen):
    """Unit-norm chamber points: random interior ones plus wall pinches.

    The pinches walk every subset of the simple walls and squeeze the
    corresponding gaps to a small delta, because the binding geometry
    for the stretch map sits arbitrarily close to the chamber walls
    and random interior points alone would miss it.
    """
    n, q = spec.dim, spec.rank
    out = []
    for _ in range(count):
        if spec.family == "b":
            v = np.sort(np.abs(gen.standard_normal(n)))[::-1]
        else:
            v = np.sort(gen.standard_normal(n))[::-1]
            v = v - v.mean()
        out.append(v / np.linalg.norm(v))
    delta = 1e-4
    for mask in itertools.product((False, True), repeat=q):
        v = np.zeros(n)
        if spec.family == "b":
            v[-1] = delta if mask[-1] else 1.0
        else:
            v[-1] = 0.0
        gaps = n - 1 if spec.family == "a" else q - 1
        for r in range(gaps - 1, -1, -1):
            v[r] = v[r + 1] + (delta if mask[r] else 1.0)
        if spec.family == "a":
            v = v - v.mean()
        out.append(v / np.linalg.norm(v))
    return out


def eps0_estimate(spec, rho_samples=40, resolution=1e-3):
    """Empirical largest epsilon for which the stretch map stays inside.

    Scans the vertices of K (sufficient by convexity) plus random
    convex combinations of them as a safety net, over unit-norm chamber
    points, and bisects epsilon to the requested resolution.  The
    search is capped at 1.  The sampling is internally seeded so the
    report is a deterministic function of its arguments.
    """
    assert spec.rank <= 4, "eps0_estimate is limited to rank <= 4"
    gen = np.random.default_rng(408122)
    scans = []
    for rho in _unit_rho_samples(spec, rho_samples, gen):
        poly = OrbitPolytope(spec, rho)
        verts = np.array(polytope_vertices_K(poly))
        wts = gen.random((8, len(verts)))
        inner = (wts / wts.sum(axis=1, keepdims=True)) @ verts
        scans.append((poly, np.vstack([verts, inner])))

    def ok(eps):
        return all(prop65_check(poly, eps, y)
                   for poly, pts in scans for y in pts)

    if ok(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo
