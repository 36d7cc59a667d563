"""Finite simplicial sets in Eilenberg-Zilber normal form.

Only nondegenerate simplices are stored.  A simplex is addressed by a
SimplexId ``(dim, index)``; an arbitrary (possibly degenerate) simplex is a
NormalSimplex ``(word, target)`` where ``word`` is the strictly decreasing
list of degeneracy indices of the unique EZ factorization and ``target`` is
nondegenerate.  Monotone maps between standard simplices are value tuples:
``alpha[i]`` is the image of ``i``.

Classes
-------
NormalSimplex, FinSSet, SSetMap, PosetPresentation, CellComplex, UnionFind

The CellComplex builder turns any family of "cells with an operator action"
(products, nerves, quotients, mapping objects) into a FinSSet plus a
normal-form oracle for arbitrary cells.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import lru_cache

SimplexId = tuple  # (dim, index)


# --------------------------------------------------------------------------
# monotone maps [m] -> [n] as value tuples
# --------------------------------------------------------------------------

def identity_tuple(n):
    return tuple(range(n + 1))


def delta_map(i, n):
    """The injection [n-1] -> [n] skipping i."""
    return tuple(v for v in range(n + 1) if v != i)


def sigma_map(i, n):
    """The surjection [n+1] -> [n] hitting i twice."""
    return tuple(v if v <= i else v - 1 for v in range(n + 2))


def collapse_map(i, d):
    """[d] -> [d], identity except i -> i+1; equals delta_i . sigma_i."""
    return tuple(i + 1 if v == i else v for v in range(d + 1))


def compose(outer, inner):
    """outer . inner, both value tuples."""
    return tuple(outer[v] for v in inner)


def is_monotone(t):
    return all(t[i] <= t[i + 1] for i in range(len(t) - 1))


def is_injective(t):
    return all(t[i] < t[i + 1] for i in range(len(t) - 1))


def word_to_surj(word, target_dim):
    """The surjection [target_dim + len(word)] ->> [target_dim] whose
    doubling positions are exactly the word entries."""
    dbl = set(word)
    out = [0]
    for i in range(target_dim + len(word)):
        out.append(out[-1] if i in dbl else out[-1] + 1)
    if out[-1] != target_dim:
        raise ValueError(f"word {word} invalid for target dim {target_dim}")
    return tuple(out)


def surj_to_word(g):
    """Inverse of word_to_surj: the doubling positions, decreasing."""
    return tuple(i for i in range(len(g) - 2, -1, -1) if g[i] == g[i + 1])


def min_section(g):
    """Section of a monotone surjection picking the least preimage."""
    sec = []
    seen = -1
    for i, v in enumerate(g):
        if v > seen:
            sec.append(i)
            seen = v
    return tuple(sec)


def epi_mono(h):
    """Factor a monotone map as mono . epi (image factorization)."""
    vals = sorted(set(h))
    pos = {v: i for i, v in enumerate(vals)}
    return tuple(vals), tuple(pos[v] for v in h)


# --------------------------------------------------------------------------
# simplices and simplicial sets
# --------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class NormalSimplex:
    word: tuple
    target: SimplexId

    @property
    def dim(self):
        return self.target[0] + len(self.word)

    @property
    def degenerate(self):
        return bool(self.word)


def nd(dim, index):
    """Shorthand for the nondegenerate NormalSimplex with id (dim, index)."""
    return NormalSimplex((), (dim, index))


class FinSSet:
    """A finite (truncated) simplicial set in EZ normal form.

    counts[d] is the number of nondegenerate d-simplices (0 <= d <= max_dim)
    and faces maps each nondegenerate id of dim >= 1 to the tuple of its
    d+1 faces as NormalSimplex values.
    """

    __slots__ = ("max_dim", "counts", "faces", "_memo")

    def __init__(self, max_dim, counts, faces):
        counts = tuple(counts) + (0,) * (max_dim + 1 - len(counts))
        self.max_dim = max_dim
        self.counts = counts[: max_dim + 1]
        self.faces = faces
        self._memo = {}

    def __eq__(self, other):
        return (isinstance(other, FinSSet)
                and self.max_dim == other.max_dim
                and self.counts == other.counts
                and self.faces == other.faces)

    def __hash__(self):
        return hash((self.max_dim, self.counts))

    def __repr__(self):
        return f"FinSSet(max_dim={self.max_dim}, counts={self.counts})"

    def n(self, d):
        return self.counts[d] if 0 <= d <= self.max_dim else 0

    def ids(self, d):
        return [(d, i) for i in range(self.n(d))]

    def all_ids(self):
        for d in range(self.max_dim + 1):
            yield from self.ids(d)

    def face(self, sid, j):
        return self.faces[sid][j]

    def act(self, ns, alpha):
        """Normal form of ns . alpha for a monotone alpha: [m] -> [ns.dim]."""
        if len(alpha) and alpha[-1] > ns.dim:
            raise ValueError(f"operator {alpha} exceeds dim {ns.dim}")
        h = compose(word_to_surj(ns.word, ns.target[0]), alpha)
        return self._act_nondeg(ns.target, h)

    def _act_nondeg(self, t, h):
        key = (t, h)
        got = self._memo.get(key)
        if got is not None:
            return got
        n = t[0]
        if h == identity_tuple(n):
            res = NormalSimplex((), t)
        elif not is_injective(h):
            mono, epi = epi_mono(h)
            inner = self._act_nondeg(t, mono)
            g = compose(word_to_surj(inner.word, inner.target[0]), epi)
            res = NormalSimplex(surj_to_word(g), inner.target)
        else:
            image = set(h)
            j = next(v for v in range(n + 1) if v not in image)
            fc = self.faces[t][j]
            hp = tuple(v if v < j else v - 1 for v in h)
            res = self._act_nondeg(
                fc.target, compose(word_to_surj(fc.word, fc.target[0]), hp))
        self._memo[key] = res
        return res

    def simplices(self, d):
        """All d-simplices, degenerate included, deterministic order."""
        for d0 in range(min(d, self.max_dim) + 1):
            for i in range(self.counts[d0]):
                for combo in itertools.combinations(range(d), d - d0):
                    yield NormalSimplex(tuple(reversed(combo)), (d0, i))

    def vertex_ids(self, ns):
        return tuple(self.act(ns, (v,)).target[1] for v in range(ns.dim + 1))

    def validate(self):
        for d in range(1, self.max_dim + 1):
            for sid in self.ids(d):
                fcs = self.faces.get(sid)
                if fcs is None or len(fcs) != d + 1:
                    raise ValueError(f"bad face list at {sid}")
                for j, f in enumerate(fcs):
                    if f.dim != d - 1:
                        raise ValueError(f"face {j} of {sid} has wrong dim")
                    td, ti = f.target
                    if not (0 <= ti < self.n(td)):
                        raise ValueError(f"face {j} of {sid} dangling target")
        for d in range(2, self.max_dim + 1):
            for sid in self.ids(d):
                for j in range(d + 1):
                    for i in range(j):
                        lhs = self.act(self.faces[sid][j], delta_map(i, d - 1))
                        rhs = self.act(self.faces[sid][i], delta_map(j - 1, d - 1))
                        if lhs != rhs:
                            raise ValueError(
                                f"simplicial identity fails at {sid}, d_{i} d_{j}")


class SSetMap:
    """A simplicial map, stored by images of nondegenerate simplices."""

    __slots__ = ("dom", "cod", "images")

    def __init__(self, dom, cod, images):
        self.dom = dom
        self.cod = cod
        self.images = images

    def __eq__(self, other):
        return (isinstance(other, SSetMap) and self.images == other.images
                and self.dom == other.dom and self.cod == other.cod)

    __hash__ = None

    def __repr__(self):
        return f"SSetMap({self.dom!r} -> {self.cod!r})"

    def apply(self, ns):
        """Image of an arbitrary NormalSimplex of dom."""
        im = self.images[ns.target]
        g = compose(word_to_surj(im.word, im.target[0]),
                    word_to_surj(ns.word, ns.target[0]))
        return NormalSimplex(surj_to_word(g), im.target)


def identity_map(X):
    return SSetMap(X, X, {sid: NormalSimplex((), sid) for sid in X.all_ids()})


def map_errors(f):
    """All face-commutation and typing violations of an SSetMap."""
    errs = []
    for sid in f.dom.all_ids():
        im = f.images.get(sid)
        if im is None:
            errs.append(f"missing image for {sid}")
            continue
        if im.dim != sid[0]:
            errs.append(f"dimension mismatch at {sid}")
            continue
        if not (0 <= im.target[1] < f.cod.n(im.target[0])):
            errs.append(f"dangling image target at {sid}")
    if errs:
        return errs
    for d in range(1, f.dom.max_dim + 1):
        for sid in f.dom.ids(d):
            for j in range(d + 1):
                if f.apply(f.dom.faces[sid][j]) != \
                        f.cod.act(f.images[sid], delta_map(j, d)):
                    errs.append(f"face commutation fails at {sid}, d_{j}")
    return errs


def validate_map(f):
    return not map_errors(f)


def compose_maps(f, g):
    """f then g (diagrammatic order): dom(f) -> cod(g)."""
    if f.cod != g.dom:
        raise ValueError("compose_maps: codomain/domain mismatch")
    return SSetMap(f.dom, g.cod,
                   {sid: g.apply(im) for sid, im in f.images.items()})


# --------------------------------------------------------------------------
# cell machinery: build a FinSSet from cells with an operator action
# --------------------------------------------------------------------------

class CellComplex:
    """A FinSSet presented by explicit cells.

    cells[d] lists the nondegenerate d-cells in canonical (sorted) order;
    act(d, cell, alpha) is the operator action on arbitrary d-cells.
    normal() translates any cell into a NormalSimplex of the sset.
    """

    __slots__ = ("sset", "cells", "index", "act_raw")

    def __init__(self, sset, cells, index, act_raw):
        self.sset = sset
        self.cells = cells
        self.index = index
        self.act_raw = act_raw

    def cell(self, sid):
        return self.cells[sid[0]][sid[1]]

    def normal(self, d, cell):
        """EZ normal form of an arbitrary d-cell."""
        word = tuple(i for i in range(d - 1, -1, -1)
                     if self.act_raw(d, cell, collapse_map(i, d)) == cell)
        d0 = d - len(word)
        target = self.act_raw(d, cell, min_section(word_to_surj(word, d0)))
        return NormalSimplex(word, self.index[(d0, target)])

    def to_ns(self, d, cell):
        return self.normal(d, cell)


def complex_from_cells(max_dim, cells_for_dim, act_cell):
    """Assemble a CellComplex.

    cells_for_dim(d) must yield every d-cell (degenerate ones included);
    act_cell(d, cell, alpha) implements precomposition by monotone alpha.
    Cells must be hashable and mutually orderable within a dimension.
    """
    cells = []
    index = {}
    for d in range(max_dim + 1):
        nondeg = []
        for c in cells_for_dim(d):
            if any(act_cell(d, c, collapse_map(i, d)) == c for i in range(d)):
                continue
            nondeg.append(c)
        nondeg = sorted(set(nondeg))
        cells.append(nondeg)
        for i, c in enumerate(nondeg):
            index[(d, c)] = (d, i)
    counts = [len(cs) for cs in cells]
    cx = CellComplex(None, cells, index, act_cell)
    faces = {}
    for d in range(1, max_dim + 1):
        for i, c in enumerate(cells[d]):
            faces[(d, i)] = tuple(
                cx.normal(d - 1, act_cell(d, c, delta_map(j, d)))
                for j in range(d + 1))
    cx.sset = FinSSet(max_dim, counts, faces)
    return cx


# --------------------------------------------------------------------------
# posets, nerves, standard shapes
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PosetPresentation:
    elements: tuple
    leq: frozenset  # pairs of elements

    def validate(self):
        els = self.elements
        if len(set(els)) != len(els):
            raise ValueError("duplicate poset elements")
        for p in self.leq:
            if p[0] not in els or p[1] not in els:
                raise ValueError(f"relation {p} over unknown elements")
        for e in els:
            if (e, e) not in self.leq:
                raise ValueError(f"not reflexive at {e}")
        for a, b in self.leq:
            if a != b and (b, a) in self.leq:
                raise ValueError(f"not antisymmetric at {(a, b)}")
            for c, d in self.leq:
                if b == c and (a, d) not in self.leq:
                    raise ValueError(f"not transitive at {(a, b, d)}")


def poset_from_leq(elements, le):
    """Build a PosetPresentation from a binary predicate."""
    els = tuple(elements)
    pairs = frozenset((a, b) for a in els for b in els if le(a, b))
    p = PosetPresentation(els, pairs)
    p.validate()
    return p


def chain_poset(n):
    return poset_from_leq(range(n + 1), lambda a, b: a <= b)


def nerve_complex(P, max_dim):
    """CellComplex of the nerve: d-cells are weak chains of element indices."""
    P.validate()
    n_el = len(P.elements)
    idx_le = {(i, j) for i in range(n_el) for j in range(n_el)
              if (P.elements[i], P.elements[j]) in P.leq}
    ups = [[j for j in range(n_el) if (i, j) in idx_le] for i in range(n_el)]

    def cells_for_dim(d):
        out = [(i,) for i in range(n_el)]
        for _ in range(d):
            out = [c + (j,) for c in out for j in ups[c[-1]]]
        return out

    def act_cell(d, cell, alpha):
        return tuple(cell[a] for a in alpha)

    return complex_from_cells(max_dim, cells_for_dim, act_cell)


def nerve(P, max_dim):
    return nerve_complex(P, max_dim).sset


@lru_cache(maxsize=None)
def standard_complex(n, max_dim=None):
    """Cached nerve complex of the chain [n]; cells are vertex tuples."""
    return nerve_complex(chain_poset(n), n if max_dim is None else max_dim)


def standard_simplex(n, max_dim=None):
    return standard_complex(n, max_dim).sset


def simplex_id(n, verts):
    """SimplexId of the strict chain `verts` inside standard_simplex(n)."""
    verts = tuple(verts)
    return standard_complex(n).index[(len(verts) - 1, verts)]


def chain_tuple(n, ns):
    """The monotone value tuple of an arbitrary simplex of Delta^n."""
    cell = standard_complex(n).cell(ns.target)
    return compose(cell, word_to_surj(ns.word, ns.target[0]))


def ns_from_chain(n, chain):
    """The simplex of Delta^n with the given monotone value tuple."""
    word = tuple(i for i in range(len(chain) - 2, -1, -1)
                 if chain[i] == chain[i + 1])
    strict = tuple(sorted(set(chain)))
    return NormalSimplex(word, standard_complex(n).index[
        (len(strict) - 1, strict)])


# --------------------------------------------------------------------------
# subcomplexes, boundaries, horns
# --------------------------------------------------------------------------

def face_closure(X, seeds):
    """Smallest face-closed id set containing the seeds."""
    out = set()
    stack = list(seeds)
    while stack:
        sid = stack.pop()
        if sid in out:
            continue
        out.add(sid)
        if sid[0] >= 1:
            for f in X.faces[sid]:
                stack.append(f.target)
    return out


def subcomplex(X, keep):
    """The subcomplex on a face-closed id set, with its inclusion."""
    keep = set(keep)
    if keep != face_closure(X, keep):
        raise ValueError("id set is not face-closed")
    old_ids = {d: [sid for sid in X.ids(d) if sid in keep]
               for d in range(X.max_dim + 1)}
    renum = {}
    for d, lst in old_ids.items():
        for i, sid in enumerate(lst):
            renum[sid] = (d, i)
    counts = [len(old_ids[d]) for d in range(X.max_dim + 1)]
    faces = {}
    for d in range(1, X.max_dim + 1):
        for sid in old_ids[d]:
            faces[renum[sid]] = tuple(
                NormalSimplex(f.word, renum[f.target]) for f in X.faces[sid])
    sub = FinSSet(X.max_dim, counts, faces)
    incl = SSetMap(sub, X, {renum[sid]: NormalSimplex((), sid)
                            for sid in keep})
    return sub, incl


def boundary(n):
    """(boundary of Delta^n, inclusion)."""
    X = standard_simplex(n)
    keep = [sid for sid in X.all_ids() if sid[0] < n]
    return subcomplex(X, keep)


def horn(n, i):
    """(i-th horn of Delta^n, inclusion)."""
    if not 0 <= i <= n:
        raise ValueError(f"horn index {i} out of range for n={n}")
    X = standard_simplex(n)
    omit = simplex_id(n, tuple(v for v in range(n + 1) if v != i))
    keep = {sid for sid in X.all_ids() if sid[0] < n and sid != omit}
    return subcomplex(X, keep)


def truncate(X, max_dim):
    if max_dim >= X.max_dim:
        return FinSSet(max_dim, X.counts, dict(X.faces))
    counts = X.counts[: max_dim + 1]
    faces = {sid: f for sid, f in X.faces.items() if sid[0] <= max_dim}
    return FinSSet(max_dim, counts, faces)


def empty_sset(max_dim=0):
    return FinSSet(max_dim, [0] * (max_dim + 1), {})


# --------------------------------------------------------------------------
# products
# --------------------------------------------------------------------------

def product_complex(X, Y, max_dim):
    """Cartesian product; cells are pairs of NormalSimplex values."""

    def cells_for_dim(d):
        xs = list(X.simplices(d))
        ys = list(Y.simplices(d))
        return [(a, b) for a in xs for b in ys]

    def act_cell(d, cell, alpha):
        return (X.act(cell[0], alpha), Y.act(cell[1], alpha))

    return complex_from_cells(max_dim, cells_for_dim, act_cell)


def product(X, Y, max_dim):
    return product_complex(X, Y, max_dim).sset


def product_projections(cx, X, Y):
    """The two projection SSetMaps of a product_complex."""
    P = cx.sset
    px, py = {}, {}
    for sid in P.all_ids():
        a, b = cx.cell(sid)
        px[sid] = a
        py[sid] = b
    return SSetMap(P, X, px), SSetMap(P, Y, py)


# --------------------------------------------------------------------------
# pushouts
# --------------------------------------------------------------------------

class UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.parent[x] = self.find(p)
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def classes(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def pushout_complex(f, g, max_dim):
    """Pushout of X <-f- A -g-> B as a CellComplex, with both legs."""
    if f.dom != g.dom:
        raise ValueError("pushout: maps must share a domain")
    A, X, B = f.dom, f.cod, g.cod
    uf = {d: UnionFind() for d in range(max_dim + 1)}
    for d in range(max_dim + 1):
        u = uf[d]
        for ns in X.simplices(d):
            u.find(("x", ns))
        for ns in B.simplices(d):
            u.find(("b", ns))
        for a in A.simplices(d):
            u.union(("x", f.apply(a)), ("b", g.apply(a)))
    rep = {d: {tok: u.find(tok) for tok in u.parent} for d, u in uf.items()}

    def cells_for_dim(d):
        return set(rep[d].values())

    def act_cell(d, cell, alpha):
        side, ns = cell
        home = X if side == "x" else B
        acted = (side, home.act(ns, alpha))
        return rep[len(alpha) - 1][acted]

    cx = complex_from_cells(max_dim, cells_for_dim, act_cell)

    def leg(side, Z):
        Zt = Z if Z.max_dim <= max_dim else truncate(Z, max_dim)
        ims = {sid: cx.normal(sid[0], rep[sid[0]][(side, NormalSimplex((), sid))])
               for sid in Zt.all_ids()}
        return SSetMap(Zt, cx.sset, ims)

    return cx, leg("x", X), leg("b", B)


def pushout(f, g, max_dim):
    """Pushout of X <-f- A -g-> B; returns (P, X -> P, B -> P)."""
    cx, lx, lb = pushout_complex(f, g, max_dim)
    return cx.sset, lx, lb


def cocone_factor(px, pb, u, v):
    """Mediating map P -> Q for a cocone (u, v), or None if inconsistent."""
    P = px.cod
    Q = u.cod
    images = {}
    for sid in P.all_ids():
        images[sid] = None
    for x_sid in px.dom.all_ids():
        im = px.images[x_sid]
        if not im.word:
            want = u.images[x_sid]
            if images[im.target] not in (None, want):
                return None
            images[im.target] = want
    for b_sid in pb.dom.all_ids():
        im = pb.images[b_sid]
        if not im.word:
            want = v.images[b_sid]
            if images[im.target] not in (None, want):
                return None
            images[im.target] = want
    if any(im is None for im in images.values()):
        return None
    q = SSetMap(P, Q, images)
    if map_errors(q):
        return None
    return q


# --------------------------------------------------------------------------
# isomorphism testing and map enumeration
# --------------------------------------------------------------------------

def _vertex_profile(X):
    prof = {sid: [] for sid in X.ids(0)}
    for d in range(1, X.max_dim + 1):
        cnt = {sid: [0] * (d + 1) for sid in X.ids(0)}
        for sid in X.ids(d):
            for v in range(d + 1):
                vid = (0, X.act(NormalSimplex((), sid), (v,)).target[1])
                cnt[vid][v] += 1
        for vid in cnt:
            prof[vid].append(tuple(cnt[vid]))
    return {vid: tuple(p) for vid, p in prof.items()}


def _boundary_key(X, ns):
    d = ns.dim
    return tuple(X.act(ns, delta_map(j, d)) for j in range(d + 1))


def iso_checks(X, Y):
    """Generator of all dimension-wise bijections commuting with faces."""
    if X.max_dim != Y.max_dim or X.counts != Y.counts:
        return
    profX, profY = _vertex_profile(X), _vertex_profile(Y)
    ydir = {}
    for d in range(1, Y.max_dim + 1):
        bydir = {}
        for sid in Y.ids(d):
            bydir.setdefault(tuple(Y.faces[sid]), []).append(sid)
        ydir[d] = bydir
    order = [sid for d in range(X.max_dim + 1) for sid in X.ids(d)]
    assign = {}
    used = set()

    def candidates(sid):
        d = sid[0]
        if d == 0:
            return [w for w in Y.ids(0)
                    if w not in used and profY[w] == profX[sid]]
        key = tuple(NormalSimplex(f.word, assign[f.target])
                    for f in X.faces[sid])
        return [w for w in ydir[d].get(key, []) if w not in used]

    def search(pos):
        if pos == len(order):
            yield SSetMap(X, Y, {sid: NormalSimplex((), w)
                                 for sid, w in assign.items()})
            return
        sid = order[pos]
        for w in candidates(sid):
            assign[sid] = w
            used.add(w)
            yield from search(pos + 1)
            used.discard(w)
            del assign[sid]

    yield from search(0)


def iso_check(X, Y):
    """A dimension-wise bijection commuting with faces, or None."""
    for iso in iso_checks(X, Y):
        return iso
    return None


def as_standard(Y):
    """The k with Y equal to standard_simplex(k, Y.max_dim), else None."""
    k = Y.n(0) - 1
    if k < 0:
        return None
    S = standard_simplex(k, Y.max_dim)
    if Y.counts == S.counts and Y.faces == S.faces:
        return k
    return None


def _maps_from_standard(X, n, Y, limit):
    # Maps out of a full standard simplex biject with n-simplices of Y.
    sc = standard_complex(n, X.max_dim)
    out = []
    for ns in Y.simplices(n):
        images = {}
        for d in range(X.max_dim + 1):
            for sid in X.ids(d):
                images[sid] = Y.act(ns, sc.cell(sid))
        out.append(SSetMap(X, Y, images))
        if limit is not None and len(out) >= limit:
            break
    return out


def _maps_to_standard(X, Y, k, limit):
    # Maps into a standard simplex biject with vertex maps that are
    # monotone along every edge; higher images are the value tuples.
    index = standard_complex(k, Y.max_dim).index
    vids = [sid[1] for sid in X.ids(0)]
    pos = {v: p for p, v in enumerate(vids)}
    vtups = {}
    for d in range(X.max_dim + 1):
        for sid in X.ids(d):
            vtups[sid] = tuple(
                pos[v] for v in X.vertex_ids(NormalSimplex((), sid)))
    checks = [[] for _ in vids]
    seen = set()
    if X.max_dim >= 1:
        for i in range(X.counts[1]):
            a, b = vtups[(1, i)]
            if a != b and (a, b) not in seen:
                seen.add((a, b))
                checks[max(a, b)].append((a, b))

    def synth():
        images = {}
        for sid, vt in vtups.items():
            tup = tuple(vals[p] for p in vt)
            word = tuple(i for i in range(len(tup) - 2, -1, -1)
                         if tup[i] == tup[i + 1])
            strict = tuple(sorted(set(tup)))
            tgt = index.get((len(strict) - 1, strict))
            if tgt is None:
                return None
            images[sid] = NormalSimplex(word, tgt)
        return images

    out = []
    vals = [0] * len(vids)

    def search(p):
        if limit is not None and len(out) >= limit:
            return
        if p == len(vids):
            images = synth()
            if images is not None:
                out.append(SSetMap(X, Y, images))
            return
        for v in range(k + 1):
            if all(vals[a] <= v if b == p else v <= vals[b]
                   for a, b in checks[p]):
                vals[p] = v
                search(p + 1)

    search(0)
    return out


def enumerate_maps(X, Y, limit=None):
    """All simplicial maps X -> Y.

    Dispatches to closed forms when either side is a standard simplex and
    falls back to boundary-keyed backtracking otherwise.
    """
    n = as_standard(X)
    if n is not None and X.max_dim >= n:
        return _maps_from_standard(X, n, Y, limit)
    k = as_standard(Y)
    if k is not None:
        return _maps_to_standard(X, Y, k, limit)
    return enumerate_maps_generic(X, Y, limit)


def enumerate_maps_generic(X, Y, limit=None):
    """All simplicial maps X -> Y by boundary-keyed backtracking."""
    ydir = {}
    for d in range(1, X.max_dim + 1):
        bydir = {}
        for ns in Y.simplices(d):
            bydir.setdefault(_boundary_key(Y, ns), []).append(ns)
        ydir[d] = bydir
    order = [sid for d in range(X.max_dim + 1) for sid in X.ids(d)]
    verts = [NormalSimplex((), w) for w in Y.ids(0)]
    out = []
    assign = {}

    def candidates(sid):
        d = sid[0]
        if d == 0:
            return verts
        key = tuple(
            Y.act(assign[f.target], word_to_surj(f.word, f.target[0]))
            for f in X.faces[sid])
        return ydir[d].get(key, [])

    def search(pos):
        if limit is not None and len(out) >= limit:
            return
        if pos == len(order):
            out.append(SSetMap(X, Y, dict(assign)))
            return
        sid = order[pos]
        for ns in candidates(sid):
            assign[sid] = ns
            search(pos + 1)
            del assign[sid]

    search(0)
    return out


# --------------------------------------------------------------------------
# JSON serialization
# --------------------------------------------------------------------------

_SID_RE = re.compile(r"^d(\d+)i(\d+)$")


def sid_str(sid):
    return f"d{sid[0]}i{sid[1]}"


def parse_sid(s):
    m = _SID_RE.match(s)
    if not m:
        raise ValueError(f"bad simplex id {s!r}")
    return (int(m.group(1)), int(m.group(2)))


def ns_to_json(ns):
    return {"word": list(ns.word), "target": sid_str(ns.target)}


def ns_from_json(obj):
    return NormalSimplex(tuple(obj["word"]), parse_sid(obj["target"]))


def sset_to_json(X):
    return {
        "maxDim": X.max_dim,
        "simplices": {str(d): [sid_str(sid) for sid in X.ids(d)]
                      for d in range(X.max_dim + 1)},
        "faces": {sid_str(sid): [ns_to_json(f) for f in X.faces[sid]]
                  for d in range(1, X.max_dim + 1) for sid in X.ids(d)},
    }


def sset_from_json(obj):
    max_dim = obj["maxDim"]
    counts = [0] * (max_dim + 1)
    for d_str, ids in obj["simplices"].items():
        d = int(d_str)
        counts[d] = len(ids)
        for i, s in enumerate(ids):
            if parse_sid(s) != (d, i):
                raise ValueError(f"id {s} out of order in dimension {d}")
    faces = {}
    for s, lst in obj["faces"].items():
        faces[parse_sid(s)] = tuple(ns_from_json(o) for o in lst)
    X = FinSSet(max_dim, counts, faces)
    X.validate()
    return X


def map_to_json(f):
    return {
        "dom": sset_to_json(f.dom),
        "cod": sset_to_json(f.cod),
        "images": {sid_str(sid): ns_to_json(ns)
                   for sid, ns in sorted(f.images.items())},
    }


def map_from_json(obj):
    dom = sset_from_json(obj["dom"])
    cod = sset_from_json(obj["cod"])
    images = {parse_sid(s): ns_from_json(o)
              for s, o in obj["images"].items()}
    f = SSetMap(dom, cod, images)
    errs = map_errors(f)
    if errs:
        raise ValueError("invalid map: " + errs[0])
    return f


def dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
