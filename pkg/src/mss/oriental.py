"""Orientals, their poset model, and the comparison map between them.

The n-th oriental is the decorated nerve of the 2-category with objects
0..n whose hom from i to j is the inclusion poset of subsets of [n] with
minimum i and maximum j, composing by union.  Since the homs are posets,
a k-simplex is just a monotone vertex tuple together with one subset per
vertex pair, subject to endpoint and cocycle conditions.  The poset
model replaces that data by chains of pointed subsets (i, S); `alpha`
compares the two.  The rigidification homs and their retraction onto the
subset posets are computed at the end.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import decor as dc
from . import report as rp
from . import sset as ss


def _pairs(k):
    return list(itertools.combinations(range(k + 1), 2))


def _interval(a, b):
    return range(a, b + 1)


def _subsets(pool):
    pool = tuple(pool)
    for size in range(len(pool) + 1):
        yield from itertools.combinations(pool, size)


# --------------------------------------------------------------------------
# oriental simplices
# --------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class OrientalSimplex:
    """Vertices x_0 <= ... <= x_m in [n] plus one arrow subset per pair.

    Arrow S_uv runs from x_u to x_v (endpoints forced); the cocycle
    inclusion S_uw <= S_uv | S_vw makes the unique 2-cells compose.
    """

    n: int
    x: tuple
    arrows: tuple

    def __post_init__(self):
        k = len(self.x) - 1
        if not ss.is_monotone(self.x) or self.x[0] < 0 or self.x[-1] > self.n:
            raise ValueError("vertices must increase weakly inside [n]")
        pairs = _pairs(k)
        if len(self.arrows) != len(pairs):
            raise ValueError("need one arrow per vertex pair")
        at = dict(zip(pairs, self.arrows))
        for (u, v), S in at.items():
            if (not S or tuple(sorted(set(S))) != S
                    or S[0] != self.x[u] or S[-1] != self.x[v]):
                raise ValueError("arrow endpoints must match its vertices")
        for u, v, w in itertools.combinations(range(k + 1), 3):
            if not set(at[(u, w)]) <= set(at[(u, v)]) | set(at[(v, w)]):
                raise ValueError("cocycle inclusion fails")

    @property
    def dim(self):
        return len(self.x) - 1

    def arrow(self, u, v):
        return self.arrows[_pairs(self.dim).index((u, v))]

    def cell(self):
        return (self.x, self.arrows)


def act_oriental_cell(cell, alpha):
    """Precompose the raw oriental cell (x, arrows) with monotone alpha."""
    x, arrows = cell
    k = len(x) - 1
    at = dict(zip(_pairs(k), arrows))
    nx = ss.compose(x, alpha)
    na = tuple(at[(alpha[u], alpha[v])] if alpha[u] < alpha[v]
               else (x[alpha[u]],)
               for u, v in _pairs(len(alpha) - 1))
    return (nx, na)


def oriental_cells(n, k):
    """Every k-cell of the n-th oriental, degenerate ones included."""
    for x in itertools.combinations_with_replacement(range(n + 1), k + 1):
        pairs = _pairs(k)
        choices = []
        for u, v in pairs:
            if x[u] == x[v]:
                choices.append(((x[u],),))
            else:
                choices.append(tuple(
                    (x[u],) + mid + (x[v],)
                    for mid in _subsets(range(x[u] + 1, x[v]))))
        for arrows in itertools.product(*choices):
            at = dict(zip(pairs, arrows))
            if all(set(at[(u, w)]) <= set(at[(u, v)]) | set(at[(v, w)])
                   for u, v, w in itertools.combinations(range(k + 1), 3)):
                yield (x, arrows)


@lru_cache(maxsize=None)
def oriental_complex(n, max_dim=3):
    """(MSS, CellComplex) of the n-th oriental, truncated at max_dim."""

    def act_cell(d, cell, alpha):
        return act_oriental_cell(cell, alpha)

    cx = ss.complex_from_cells(max_dim, lambda d: oriental_cells(n, d),
                               act_cell)
    thin = []
    if max_dim >= 2:
        for sid in cx.sset.ids(2):
            x, arrows = cx.cell(sid)
            if set(arrows[1]) == set(arrows[0]) | set(arrows[2]):
                thin.append(sid)
    return dc.decorate(cx.sset, (), thin), cx


def oriental(n, max_dim=3):
    return oriental_complex(n, max_dim)[0]


def hom_objects(n, i, j):
    """The objects of the hom poset from i to j: 2^(j-i-1) subsets."""
    if i > j:
        return ()
    return tuple((i,) + mid + ((j,) if j > i else ())
                 for mid in _subsets(range(i + 1, j)))


# --------------------------------------------------------------------------
# the poset model
# --------------------------------------------------------------------------

def dn_objects(n):
    """Pairs (i, S) with i in S, S a nonempty subset of [n]."""
    out = []
    for S in _subsets(range(n + 1)):
        for i in S:
            out.append((i, S))
    return tuple(sorted(out))


def dn_leq(a, b):
    return a[0] <= b[0] and set(a[1]) <= set(b[1])


def _dn_chains(n, k):
    """All k-chains, later indices constrained to the first subset."""
    objs = dn_objects(n)
    ups = {o: tuple(p for p in objs if dn_leq(o, p)) for o in objs}
    out = []

    def extend(chain):
        if len(chain) == k + 1:
            out.append(tuple(chain))
            return
        S0 = set(chain[0][1])
        for p in ups[chain[-1]]:
            if p[0] in S0:
                chain.append(p)
                extend(chain)
                chain.pop()

    for o in objs:
        extend([o])
    return out


def idle_inclusion(S, T):
    """Is S a consecutive block of T (as an inclusion of chains)?"""
    if not set(S) <= set(T):
        raise ValueError("idle test needs an inclusion")
    return all(t in set(S) for t in T if S[0] <= t <= S[-1])


def _thin_plus(a, b, c):
    """Thinness of the image triangle: the union identity for arrows."""
    (i, S), (j, T), (ell, _W) = a, b, c
    left = set(S) & set(_interval(i, ell))
    return left == (set(S) & set(_interval(i, j))) | (
        set(T) & set(_interval(j, ell)))


@lru_cache(maxsize=None)
def dn_complex(n, max_dim=3, plus=False):
    """(MSS, CellComplex) of the poset model, truncated at max_dim.

    plus=True pulls the scaling back along the comparison map instead of
    using the idle / degenerate-top clauses.
    """

    def act_cell(d, cell, alpha):
        return tuple(cell[a] for a in alpha)

    cx = ss.complex_from_cells(max_dim, lambda d: _dn_chains(n, d), act_cell)
    marked = []
    if max_dim >= 1:
        marked = [sid for sid in cx.sset.ids(1)
                  if cx.cell(sid)[0][0] == cx.cell(sid)[1][0]]
    thin = []
    if max_dim >= 2:
        for sid in cx.sset.ids(2):
            a, b, c = cx.cell(sid)
            if plus:
                ok = _thin_plus(a, b, c)
            else:
                ok = idle_inclusion(a[1], b[1]) or b[0] == c[0]
            if ok:
                thin.append(sid)
    return dc.decorate(cx.sset, marked, thin), cx


def dn(n, max_dim=3):
    return dn_complex(n, max_dim, plus=False)[0]


def dn_plus(n, max_dim=3):
    return dn_complex(n, max_dim, plus=True)[0]


# --------------------------------------------------------------------------
# the comparison map
# --------------------------------------------------------------------------

def alpha_cell(chain):
    """The oriental cell of a chain of pointed subsets."""
    x = tuple(o[0] for o in chain)
    arrows = tuple(
        tuple(s for s in chain[u][1] if x[u] <= s <= x[v])
        for u, v in _pairs(len(chain) - 1))
    return (x, arrows)


def alpha(n, max_dim=3, plus=False):
    """The comparison DecoratedMap from the poset model to the oriental."""
    DN, dcx = dn_complex(n, max_dim, plus)
    ON, ocx = oriental_complex(n, max_dim)
    images = {}
    for sid in DN.base.all_ids():
        images[sid] = ocx.normal(sid[0], alpha_cell(dcx.cell(sid)))
    u = ss.SSetMap(DN.base, ON.base, images)
    f = dc.decorated(u, DN, ON)
    if f is None:
        raise AssertionError("comparison map must preserve decorations")
    return f


def dn_map_cell(f, chain):
    """Push a chain forward along the monotone vertex map f."""
    return tuple((f[i], tuple(sorted({f[s] for s in S})))
                 for i, S in chain)


def oriental_map_cell(f, cell):
    """Push an oriental cell forward along the monotone vertex map f."""
    x, arrows = cell
    return (ss.compose(f, x),
            tuple(tuple(sorted({f[s] for s in S})) for S in arrows))


def _mask(S):
    out = 0
    for s in S:
        out |= 1 << s
    return out


def _imask(a, b):
    return ((1 << (b + 1)) - 1) ^ ((1 << a) - 1)


def _alpha_mask(chain):
    x = tuple(i for i, _ in chain)
    return (x, tuple(chain[u][1] & _imask(x[u], x[v])
                     for u, v in _pairs(len(chain) - 1)))


def verify_alpha_natural(max_n, max_dim=3):
    """Comparison squares for every monotone map between index widths.

    Subsets are handled as bitmasks.  Degenerate chains are covered for
    free: both composites commute with chain reindexing, so the
    nondegenerate cells decide each square.
    """
    instances = passed = 0
    ces = []
    for m in range(max_n + 1):
        _, cx = dn_complex(m, max_dim)
        chains = [cx.cell(sid) for sid in cx.sset.all_ids()]
        mchains = [tuple((i, _mask(S)) for i, S in ch) for ch in chains]
        rhs0 = [_alpha_mask(ch) for ch in mchains]
        for n in range(max_n + 1):
            for f in itertools.combinations_with_replacement(
                    range(n + 1), m + 1):
                instances += 1
                fm = [0] * (1 << (m + 1))
                for mask in range(1, len(fm)):
                    low = (mask & -mask).bit_length() - 1
                    fm[mask] = fm[mask & (mask - 1)] | (1 << f[low])
                bad = None
                for ch, (x0, ar0) in zip(mchains, rhs0):
                    lhs = _alpha_mask(tuple((f[i], fm[S]) for i, S in ch))
                    if lhs != (tuple(f[v] for v in x0),
                               tuple(fm[a] for a in ar0)):
                        bad = ch
                        break
                if bad is None:
                    passed += 1
                else:
                    ces.append({"m": m, "n": n, "f": list(f),
                                "chain": [[i, [s for s in range(m + 1)
                                               if S >> s & 1]]
                                          for i, S in bad]})
    return rp.report("alpha_natural", instances, passed, 0, ces)


# --------------------------------------------------------------------------
# rigidification homs
# --------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class RigidHomObject:
    """A chain of stops S from i to j plus one covering subset per gap."""

    S: tuple
    U: tuple

    def __post_init__(self):
        if len(self.U) != len(self.S) - 1:
            raise ValueError("need one covering subset per consecutive gap")
        for g, Ug in enumerate(self.U):
            if not Ug or Ug[0] != self.S[g] or Ug[-1] != self.S[g + 1]:
                raise ValueError("covering subset endpoints must be stops")


class RigidHom:
    """The rigidification hom poset from i to j with its retraction data."""

    def __init__(self, n, i, j):
        self.n, self.i, self.j = n, i, j
        objs = []
        if i <= j:
            for S in hom_objects(n, i, j):
                gaps = list(zip(S, S[1:]))
                choices = [tuple((a,) + mid + (b,)
                                 for mid in _subsets(range(a + 1, b)))
                           for a, b in gaps]
                for U in itertools.product(*choices):
                    objs.append(RigidHomObject(S, U))
        self.objects = tuple(sorted(objs))

    def leq(self, a, b):
        if not set(a.S) <= set(b.S):
            return False
        return all(set(Ug) <= self._covered(b, a.S[g], a.S[g + 1])
                   for g, Ug in enumerate(a.U))

    def is_marked_rel(self, a, b):
        if not self.leq(a, b):
            return False
        return all(set(Ug) == self._covered(b, a.S[g], a.S[g + 1])
                   for g, Ug in enumerate(a.U))

    @staticmethod
    def _covered(b, lo, hi):
        out = set()
        for e, Ve in enumerate(b.U):
            if lo <= b.S[e] < hi:
                out |= set(Ve)
        return out

    def xi(self, a):
        if self.i == self.j:
            return (self.i,)
        out = set()
        for Ug in a.U:
            out |= set(Ug)
        return tuple(sorted(out))

    def r(self, W):
        if self.i == self.j:
            return RigidHomObject((self.i,), ())
        return RigidHomObject((self.i, self.j), (tuple(W),))


def rigid_hom(n, i, j):
    return RigidHom(n, i, j)


def verify_rigid_retraction(max_n):
    """xi . r = id and the marked comparison r(xi(a)) <= a, all homs."""
    instances = passed = 0
    ces = []
    for n in range(max_n + 1):
        for i in range(n + 1):
            for j in range(i, n + 1):
                instances += 1
                H = rigid_hom(n, i, j)
                ok = all(H.xi(H.r(W)) == W for W in hom_objects(n, i, j))
                ok = ok and all(H.r(H.xi(a)) == a or
                                H.is_marked_rel(H.r(H.xi(a)), a)
                                for a in H.objects)
                if ok:
                    passed += 1
                else:
                    ces.append({"n": n, "i": i, "j": j})
    return rp.report("rigid_retraction", instances, passed, 0, ces)
