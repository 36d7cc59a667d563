"""Staircase paths in a prism and the extension maps they induce.

A path is a maximal simplex of Delta^n x Delta^k, recorded by its n+k+1
lattice points.  Each path gamma induces the extension map

    E_gamma: (i, j) |-> (a_i, max(b_i, j))

from the (n+k, k) prism to the (n, k) prism, decorated either way (odot
or tensor).  The verifiers below check, exhaustively at small (n, k),
the identities these maps satisfy: stability under composition with a
second extension, compatibility with faces and degeneracies on both
sides, and the boundary-factorization rectangle used to build prism
filtrations.  All verification happens at the vertex level; maps between
prisms are determined by their vertex values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from . import decor as dc
from . import gray as gr
from . import report as rp
from . import sset as ss


class BudgetExceeded(RuntimeError):
    """Raised when a verifier refuses a grid that is too large."""


def _delta(r):
    return lambda x: x + (x >= r)


def _sigma(r):
    return lambda x: x - (x > r)


# --------------------------------------------------------------------------
# paths and the path order
# --------------------------------------------------------------------------

@dataclass(frozen=True, order=False)
class Path:
    n: int
    k: int
    points: tuple

    def __post_init__(self):
        pts = self.points
        if not pts or pts[0] != (0, 0) or pts[-1] != (self.n, self.k):
            raise ValueError(f"path must run (0,0) -> ({self.n},{self.k})")
        for (a, b), (c, d) in zip(pts, pts[1:]):
            if (c - a, d - b) not in ((1, 0), (0, 1)):
                raise ValueError("path steps must increase one coordinate")

    @property
    def a(self):
        return tuple(p[0] for p in self.points)

    @property
    def b(self):
        return tuple(p[1] for p in self.points)

    def vertex(self, i, j):
        """E_gamma on the vertex (i, j) of the (n+k, k) prism."""
        ai, bi = self.points[i]
        return (ai, max(bi, j))

    def to_json(self):
        return [list(p) for p in self.points]


def path_from_points(points):
    pts = tuple(tuple(p) for p in points)
    return Path(pts[-1][0], pts[-1][1], pts)


def path_le(p, q):
    """The path order: compare a-coordinates at the first difference."""
    if p.points == q.points:
        return True
    s = next(i for i, (x, y) in enumerate(zip(p.points, q.points)) if x != y)
    return p.points[s][0] < q.points[s][0]


@lru_cache(maxsize=None)
def enumerate_paths(n, k):
    """All C(n+k, n) paths, ascending in the path order."""
    if n < 0 or k < 0:
        raise ValueError("path grid sides must be nonnegative")
    out = []
    for horiz in itertools.combinations(range(n + k), n):
        a = b = 0
        pts = [(0, 0)]
        for step in range(n + k):
            if step in horiz:
                a += 1
            else:
                b += 1
            pts.append((a, b))
        out.append(Path(n, k, tuple(pts)))
    out.sort(key=lambda p: p.a)
    return tuple(out)


def greatest_path(n, k):
    return enumerate_paths(n, k)[-1]


# --------------------------------------------------------------------------
# extension maps as decorated maps
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def prism(a, b, variant="odot", max_dim=None):
    """(Delta^a flat) (variant) (Delta^b sharp) with its product complex."""
    return gr.tensor_complex(dc.std(a, dc.FLAT, dc.FLAT),
                             dc.std(b, dc.SHARP, dc.SHARP),
                             variant, max_dim)


def prism_map(src, dst, vf):
    """The SSetMap between product complexes induced by the vertex map vf.

    src and dst are (left size, right size, CellComplex) triples; vf takes
    a vertex pair of src to a vertex pair of dst and must be monotone.
    """
    (sn, sk, scx), (dn, dk, dcx) = src, dst
    images = {}
    for sid in scx.sset.all_ids():
        nsa, nsb = scx.cell(sid)
        ca = ss.chain_tuple(sn, nsa)
        cb = ss.chain_tuple(sk, nsb)
        pts = [vf(ca[t], cb[t]) for t in range(len(ca))]
        pair = (ss.ns_from_chain(dn, tuple(p[0] for p in pts)),
                ss.ns_from_chain(dk, tuple(p[1] for p in pts)))
        images[sid] = dcx.normal(sid[0], pair)
    return ss.SSetMap(scx.sset, dcx.sset, images)


@dataclass(frozen=True)
class ExtensionMap:
    gamma: Path
    odot: dc.DecoratedMap
    tensor: dc.DecoratedMap


def extension_map(gamma, max_dim=3):
    """E_gamma with both decoration conventions, truncated at max_dim.

    Decorations only live in dimensions <= 2, so the default truncation
    keeps the decorated-map validity checks complete while avoiding the
    very large top cells of the full prisms.
    """
    n, k = gamma.n, gamma.k
    built = {}
    for variant in ("odot", "tensor"):
        S, scx = prism(n + k, k, variant, min(n + 2 * k, max_dim))
        D, dcx = prism(n, k, variant, min(n + k, max_dim))
        u = prism_map((n + k, k, scx), (n, k, dcx), gamma.vertex)
        f = dc.decorated(u, S, D)
        if f is None:
            raise AssertionError("extension map must preserve decorations")
        built[variant] = f
    return ExtensionMap(gamma, built["odot"], built["tensor"])


# --------------------------------------------------------------------------
# verifier helpers
# --------------------------------------------------------------------------

def _budget_check(suite, n, k, budget):
    if n + 2 * k > budget:
        paths = comb(n + k, n)
        raise BudgetExceeded(
            f"{suite} refused for (n,k)=({n},{k}): n+2k={n + 2 * k} exceeds "
            f"budget {budget} (about {paths} paths per layer)")


def _grid(n, k):
    return itertools.product(range(n + 1), range(k + 1))


def _collapse(seq):
    """(surjection values, distinct entries) for a weakly monotone seq."""
    s = [0]
    distinct = [seq[0]]
    for prev, cur in zip(seq, seq[1:]):
        if cur != prev:
            distinct.append(cur)
        s.append(len(distinct) - 1)
    return s, distinct


def _try_path(points):
    try:
        return path_from_points(points)
    except ValueError:
        return None


# --------------------------------------------------------------------------
# stability of extensions under each other
# --------------------------------------------------------------------------

def verify_extension_stability(n, k, budget=8):
    """E_gamma . E_phi factors as E_gamma' . (s odot id) with gamma' <= gamma.

    Also checks the composite degenerates at exactly k vertices.
    """
    _budget_check("extension_stability", n, k, budget)
    instances = passed = 0
    ces = []
    for gamma in enumerate_paths(n, k):
        for phi in enumerate_paths(n + k, k):
            instances += 1
            witness = {"gamma": gamma.to_json(), "phi": phi.to_json()}
            theta = [gamma.vertex(*phi.points[i]) for i in range(n + 2 * k + 1)]
            s, distinct = _collapse(theta)
            if len(theta) - len(distinct) != k:
                witness["check"] = "degenerates at exactly k vertices"
                ces.append(witness)
                continue
            gp = _try_path(distinct)
            if gp is None or not path_le(gp, gamma):
                witness["check"] = "factor path exists and is <= gamma"
                ces.append(witness)
                continue
            square = all(
                gp.vertex(s[i], j) == gamma.vertex(*phi.vertex(i, j))
                for i, j in _grid(n + 2 * k, k))
            if not square:
                witness["check"] = "square"
                ces.append(witness)
                continue
            passed += 1
    return rp.report("extension_stability", instances, passed, 0, ces)


# --------------------------------------------------------------------------
# faces and degeneracies applied after an extension
# --------------------------------------------------------------------------

def _unique_insertion(phi_pts, paths, length):
    """The unique (path, kappa) whose kappa-deletion is phi_pts, or None."""
    found = []
    target = tuple(phi_pts)
    for cand in paths:
        for kappa in range(length):
            if tuple(cand.points[:kappa] + cand.points[kappa + 1:]) == target:
                found.append((cand, kappa))
    return found[0] if len(found) == 1 else None


def verify_postextension(n, k, budget=8):
    """Faces and degeneracies of the target prism commute with extensions."""
    _budget_check("postextension", n, k, budget)
    instances = passed = 0
    ces = []

    def fail(gamma, item, op):
        ces.append({"gamma": gamma.to_json(), "item": item, "op": op})

    for gamma in enumerate_paths(n, k):
        pts = gamma.points
        for r in range(n + 2):
            instances += 1
            d = _delta(r)
            phi = [(d(a), b) for a, b in pts]
            hit = _unique_insertion(phi, enumerate_paths(n + 1, k), n + k + 2)
            if hit is None:
                fail(gamma, 1, r)
                continue
            gp, kappa = hit
            dk = _delta(kappa)
            if all(gp.vertex(dk(x), j) == (d(pts[x][0]), max(pts[x][1], j))
                   for x, j in _grid(n + k, k)):
                passed += 1
            else:
                fail(gamma, 1, r)
        for s in range(k + 2):
            instances += 1
            d = _delta(s)
            phi = [(a, d(b)) for a, b in pts]
            hit = _unique_insertion(phi, enumerate_paths(n, k + 1), n + k + 2)
            if hit is None:
                fail(gamma, 2, s)
                continue
            gp, kappa = hit
            dk = _delta(kappa)
            if all(gp.vertex(dk(x), d(j)) == (pts[x][0], d(max(pts[x][1], j)))
                   for x, j in _grid(n + k, k)):
                passed += 1
            else:
                fail(gamma, 2, s)
        for u in range(n):
            instances += 1
            sg = _sigma(u)
            psi = [(sg(a), b) for a, b in pts]
            sk, distinct = _collapse(psi)
            gp = _try_path(distinct) if len(distinct) == n + k else None
            if gp is None:
                fail(gamma, 3, u)
                continue
            if all(gp.vertex(sk[x], j) == (sg(pts[x][0]), max(pts[x][1], j))
                   for x, j in _grid(n + k, k)):
                passed += 1
            else:
                fail(gamma, 3, u)
        for ell in range(k):
            instances += 1
            sg = _sigma(ell)
            psi = [(a, sg(b)) for a, b in pts]
            sk, distinct = _collapse(psi)
            gp = _try_path(distinct) if len(distinct) == n + k else None
            if gp is None:
                fail(gamma, 4, ell)
                continue
            if all(gp.vertex(sk[x], sg(j)) == (pts[x][0], sg(max(pts[x][1], j)))
                   for x, j in _grid(n + k, k)):
                passed += 1
            else:
                fail(gamma, 4, ell)
    return rp.report("postextension", instances, passed, 0, ces)


# --------------------------------------------------------------------------
# faces of extensions
# --------------------------------------------------------------------------

def _deleted_path(pts, i, drop_col=None, drop_row=None):
    """The path left after deleting vertex i and closing the value gap."""
    out = []
    for idx, (a, b) in enumerate(pts):
        if idx == i:
            continue
        if drop_col is not None:
            a -= a > drop_col
        if drop_row is not None:
            b -= b > drop_row
        out.append((a, b))
    return _try_path(out)


def verify_faces_of_extensions(n, k, budget=8):
    """The six identities tying extensions to faces of the source prism."""
    _budget_check("faces_of_extensions", n, k, budget)
    instances = passed = skipped = 0
    ces = []
    paths = enumerate_paths(n, k)

    def fail(item, gamma, extra=None):
        ce = {"item": item, "gamma": gamma.to_json()}
        if extra is not None:
            ce["op"] = extra
        ces.append(ce)

    # 1: the greatest path retracts the inclusion of the target prism.
    top = paths[-1]
    instances += 1
    if all(top.vertex(i, j) == (i, j) for i, j in _grid(n, k)):
        passed += 1
    else:
        fail(1, top)

    # 2: paths differing in a single vertex agree after that face.
    for g1, g2 in itertools.combinations(paths, 2):
        diff = [i for i in range(n + k + 1) if g1.points[i] != g2.points[i]]
        if len(diff) != 1:
            continue
        u = diff[0]
        instances += 1
        lo, hi = (g1, g2) if path_le(g1, g2) else (g2, g1)
        d = _delta(u)
        if all(lo.vertex(d(x), j) == hi.vertex(d(x), j)
               for x, j in _grid(n + k - 1, k)):
            passed += 1
        else:
            fail(2, lo, u)

    # 3: deleting a vertex in a flat stretch of rows drops a column.
    for gamma in paths:
        pts = gamma.points
        b = gamma.b
        for i in range(n + k + 1):
            cond = ((i == 0 and n + k >= 1 and pts[1] == (1, 0))
                    or (0 < i < n + k and b[i - 1] == b[i] == b[i + 1])
                    or (i == n + k and n + k >= 1
                        and pts[n + k - 1] == (n - 1, k)))
            if not cond or n < 1:
                continue
            instances += 1
            col = pts[i][0]
            hat = _deleted_path(pts, i, drop_col=col)
            if hat is None or (hat.n, hat.k) != (n - 1, k):
                skipped += 1
                continue
            d_i, d_col = _delta(i), _delta(col)
            if all(gamma.vertex(d_i(x), j)
                   == (d_col(hat.vertex(x, j)[0]), hat.vertex(x, j)[1])
                   for x, j in _grid(n + k - 1, k)):
                passed += 1
            else:
                fail(3, gamma, i)

    # 4: deleting a vertex in a flat stretch of columns drops a row.
    for gamma in paths:
        pts = gamma.points
        a = gamma.a
        for i in range(n + k + 1):
            cond = ((i == 0 and n + k >= 1 and pts[1] == (0, 1))
                    or (0 < i < n + k and a[i - 1] == a[i] == a[i + 1])
                    or (i == n + k and n + k >= 1
                        and pts[n + k - 1] == (n, k - 1)))
            if not cond or k < 1:
                continue
            instances += 1
            row = pts[i][1]
            hat = _deleted_path(pts, i, drop_row=row)
            if hat is None or (hat.n, hat.k) != (n, k - 1):
                skipped += 1
                continue
            d_i, d_row = _delta(i), _delta(row)
            if all(gamma.vertex(d_i(x), d_row(j))
                   == (hat.vertex(x, j)[0], d_row(hat.vertex(x, j)[1]))
                   for x, j in _grid(n + k - 1, k - 1)):
                passed += 1
            else:
                fail(4, gamma, i)

    # 5: the two pentagons for a path whose first step is vertical.
    for gamma in (g for g in paths if k >= 1 and g.points[1] == (0, 1)):
        instances += 1
        d0, s0 = _delta(0), _sigma(0)
        pent1 = all(gamma.vertex(d0(x), d0(s0(j))) == gamma.vertex(d0(x), j)
                    for x, j in _grid(n + k - 1, k))
        hat = _deleted_path(gamma.points, 0, drop_row=0)
        pent2 = hat is not None and all(
            (hat.vertex(x, s0(j))[0], d0(hat.vertex(x, s0(j))[1]))
            == gamma.vertex(d0(x), j)
            for x, j in _grid(n + k - 1, k))
        if pent1 and pent2:
            passed += 1
        else:
            fail(5, gamma)

    # 6: precomposing with the bottom-row degeneracy absorbs a row face.
    for gamma in (g for g in paths if k >= 1):
        instances += 1
        pts = gamma.points
        r = max(i for i in range(n + k + 1) if pts[i][1] == 0)
        tilde = _try_path([(pts[s][0], 0) if s <= r
                           else (pts[s + 1][0], pts[s + 1][1] - 1)
                           for s in range(n + k)])
        sr, d0 = _sigma(r), _delta(0)
        ok = tilde is not None and (tilde.n, tilde.k) == (n, k - 1) and all(
            gamma.vertex(x, d0(j))
            == (tilde.vertex(sr(x), j)[0], d0(tilde.vertex(sr(x), j)[1]))
            for x, j in _grid(n + k, k - 1))
        if ok:
            passed += 1
        else:
            fail(6, gamma)

    return rp.report("faces_of_extensions", instances, passed, skipped, ces)


# --------------------------------------------------------------------------
# the boundary-factorization rectangle
# --------------------------------------------------------------------------

def _subsets(top):
    """Nonempty subsets of [0..top] as sorted tuples, deterministic order."""
    base = range(top + 1)
    for size in range(1, top + 2):
        yield from itertools.combinations(base, size)


def verify_noboundaries(n, k, budget=2):
    """Restrictions avoiding the first row-r vertex factor through a path.

    For every path, row index r and pair (alpha, beta) satisfying the
    seven hypotheses, builds the auxiliary paths and the comparison maps
    and checks the factorization rectangle.
    """
    if max(n, k) > budget:
        raise BudgetExceeded(
            f"noboundaries refused for (n,k)=({n},{k}): sides exceed "
            f"budget {budget} (about {2 ** (n + 2 * k + 2)} restriction "
            "pairs per path)")
    instances = passed = skipped = 0
    ces = []
    for gamma in enumerate_paths(n, k):
        pts = gamma.points
        for r in range(1, k + 1):
            eps = next(i for i in range(n + k + 1) if pts[i][1] == r)
            u = next(i for i in range(n + k + 1)
                     if pts[i][0] == pts[eps][0])
            for alpha in _subsets(n + k):
                for beta in _subsets(k):
                    instances += 1
                    hyps = (eps not in alpha
                            and 0 in alpha
                            and (n + k in alpha or eps == n + k)
                            and any(u <= j < eps for j in alpha)
                            and 0 in beta and r in beta
                            and all(j <= r for j in beta))
                    if not hyps:
                        skipped += 1
                        continue
                    ce = _noboundaries_instance(gamma, r, eps, u,
                                                alpha, beta)
                    if ce is None:
                        passed += 1
                    else:
                        ces.append({"gamma": gamma.to_json(), "r": r,
                                    "alpha": list(alpha),
                                    "beta": list(beta), "check": ce})
    return rp.report("noboundaries", instances, passed, skipped, ces)


def _noboundaries_instance(gamma, r, eps, u, alpha, beta):
    """None if the rectangle holds for this instance, else a reason."""
    n, k = gamma.n, gamma.k
    pts = gamma.points
    ell, m = len(alpha) - 1, len(beta) - 1
    omega = max(j for j in alpha if u <= j < eps)
    v = alpha.index(omega)

    tau = _try_path([(i, 0) if i <= v
                     else (v, i - v) if i <= v + m
                     else (i - m, m)
                     for i in range(ell + m + 1)])
    tilde = _try_path([(i, 0) if i <= omega
                       else (omega, i - omega) if i <= omega + r
                       else (i - r, r) if i <= n + k + r
                       else (n + k, i - n - k)
                       for i in range(n + 2 * k + 1)])
    if tau is None or tilde is None:
        return "auxiliary paths"

    def iota(i):
        if i <= v:
            return alpha[i]
        if i <= v + m:
            return omega + beta[i - v]
        return alpha[i - m] + r

    vals = [iota(i) for i in range(ell + m + 1)]
    if any(x >= y for x, y in zip(vals, vals[1:])):
        return "iota injective"

    for i, j in _grid(ell + m, m):
        p, q = tau.vertex(i, j)
        if tilde.vertex(iota(i), beta[j]) != (alpha[p], beta[q]):
            return "tilde square"

    theta = [gamma.vertex(*tilde.points[i]) for i in range(n + 2 * k + 1)]
    nu, distinct = _collapse(theta)
    if len(distinct) != n + k + 1 or tuple(distinct) != pts:
        return "theta collapse onto gamma"

    mu = [nu[iota(i)] for i in range(ell + m + 1)]
    s, alpha_hat = _collapse(mu)
    if eps not in alpha_hat or not set(alpha) <= set(alpha_hat):
        return "alpha_hat extends alpha through eps"

    for i, j in _grid(ell + m, m):
        p, q = tau.vertex(i, j)
        lhs = gamma.vertex(alpha_hat[s[i]], beta[j])
        rhs = gamma.vertex(alpha[p], beta[q])
        if lhs != rhs:
            return "rectangle"
    return None
