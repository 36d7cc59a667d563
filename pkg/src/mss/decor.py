"""Markings, scalings and lean triangles on finite simplicial sets.

An MSS carries a marked edge set, a thin triangle set, and optionally a lean
triangle set containing the thin one.  Degenerate simplices are always
decorated and never stored; the is_marked / is_thin / is_lean predicates
implement the marked-or-degenerate convention.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import sset as ss
from .sset import NormalSimplex, nd

FLAT = "flat"
SHARP = "sharp"


@dataclass(frozen=True, eq=True)
class MSS:
    base: ss.FinSSet
    marked: frozenset
    thin: frozenset
    lean: frozenset | None = None

    def is_marked(self, ns):
        if ns.dim != 1:
            raise ValueError("is_marked expects an edge")
        return ns.degenerate or ns.target in self.marked

    def is_thin(self, ns):
        if ns.dim != 2:
            raise ValueError("is_thin expects a triangle")
        return ns.degenerate or ns.target in self.thin

    def is_lean(self, ns):
        if ns.dim != 2:
            raise ValueError("is_lean expects a triangle")
        lean = self.thin if self.lean is None else self.lean
        return ns.degenerate or ns.target in lean

    def edge(self, sid, u, v):
        """The (u,v)-edge of the simplex with id sid."""
        return self.base.act(nd(*sid), (u, v))

    def with_decorations(self, marked=None, thin=None, lean="keep"):
        return MSS(self.base,
                   self.marked if marked is None else frozenset(marked),
                   self.thin if thin is None else frozenset(thin),
                   self.lean if lean == "keep" else lean)


def decorate(X, marked=(), thin=(), lean=None):
    """Validated MSS over X; decoration ids must exist at the right dims."""
    marked = frozenset(marked)
    thin = frozenset(thin)
    lean = None if lean is None else frozenset(lean)
    for sid in marked:
        if sid[0] != 1 or not 0 <= sid[1] < X.n(1):
            raise ValueError(f"bad marked edge id {sid}")
    for sid in thin:
        if sid[0] != 2 or not 0 <= sid[1] < X.n(2):
            raise ValueError(f"bad thin triangle id {sid}")
    if lean is not None:
        for sid in lean:
            if sid[0] != 2 or not 0 <= sid[1] < X.n(2):
                raise ValueError(f"bad lean triangle id {sid}")
        if not thin <= lean:
            raise ValueError("thin set must be contained in lean set")
    return MSS(X, marked, thin, lean)


def std(n, mark_flag=FLAT, thin_flag=FLAT):
    """Delta^n with uniform decorations."""
    X = ss.standard_simplex(n)
    marked = X.ids(1) if mark_flag == SHARP else ()
    thin = X.ids(2) if thin_flag == SHARP else ()
    return decorate(X, marked, thin)


def decorate_std(n, marked=(), thin=(), lean=None):
    """Delta^n with decorations given by vertex tuples."""
    X = ss.standard_simplex(n)
    mk = [ss.simplex_id(n, vs) for vs in marked]
    th = [ss.simplex_id(n, vs) for vs in thin]
    ln = None if lean is None else [ss.simplex_id(n, vs) for vs in lean]
    return decorate(X, mk, th, ln)


def flat(X):
    """An undecorated MSS over the simplicial set X."""
    return decorate(X, (), ())


def sharp(X):
    return decorate(X, X.ids(1), X.ids(2))


@dataclass(frozen=True, eq=True)
class MarkedSSet:
    base: ss.FinSSet
    marked: frozenset

    def is_marked(self, ns):
        if ns.dim != 1:
            raise ValueError("is_marked expects an edge")
        return ns.degenerate or ns.target in self.marked


class DecoratedMap:
    """A decoration-preserving simplicial map between MSS values."""

    __slots__ = ("underlying", "dom", "cod")

    def __init__(self, underlying, dom, cod):
        self.underlying = underlying
        self.dom = dom
        self.cod = cod

    def __eq__(self, other):
        return (isinstance(other, DecoratedMap)
                and self.underlying == other.underlying
                and self.dom == other.dom and self.cod == other.cod)

    __hash__ = None

    def apply(self, ns):
        return self.underlying.apply(ns)

    @property
    def images(self):
        return self.underlying.images


def decorated_map_errors(f):
    errs = ss.map_errors(f.underlying)
    if errs:
        return errs
    for e in sorted(f.dom.marked):
        if not f.cod.is_marked(f.underlying.images[e]):
            errs.append(f"marked edge {e} not preserved")
    for t in sorted(f.dom.thin):
        if not f.cod.is_thin(f.underlying.images[t]):
            errs.append(f"thin triangle {t} not preserved")
    dom_lean = f.dom.thin if f.dom.lean is None else f.dom.lean
    for t in sorted(dom_lean):
        if not f.cod.is_lean(f.underlying.images[t]):
            errs.append(f"lean triangle {t} not preserved")
    return errs


def validate_decorated_map(f):
    return not decorated_map_errors(f)


def decorated(u, A, B):
    """Wrap an SSetMap as a DecoratedMap if it preserves decorations."""
    f = DecoratedMap(u, A, B)
    if decorated_map_errors(f):
        return None
    return f


def identity_decorated(A):
    return DecoratedMap(ss.identity_map(A.base), A, A)


def compose_decorated(f, g):
    """f then g."""
    return DecoratedMap(ss.compose_maps(f.underlying, g.underlying),
                        f.dom, g.cod)


def is_decoration_preserving(u, A, B):
    """Does the underlying-valid SSetMap u preserve A -> B decorations?"""
    for e in A.marked:
        if not B.is_marked(u.apply(nd(*e))):
            return False
    for t in A.thin:
        if not B.is_thin(u.apply(nd(*t))):
            return False
    if A.lean is not None:
        for t in A.lean:
            if not B.is_lean(u.apply(nd(*t))):
                return False
    return True


def decorated_maps(A, B, limit=None):
    """All decoration-preserving maps A -> B."""
    out = []
    for u in ss.enumerate_maps(A.base, B.base):
        if is_decoration_preserving(u, A, B):
            out.append(DecoratedMap(u, A, B))
            if limit is not None and len(out) >= limit:
                break
    return out


def _std_decor_sets(B, k):
    sc = ss.standard_complex(k, B.base.max_dim)
    return (frozenset(sc.cell(sid) for sid in B.marked),
            frozenset(sc.cell(sid) for sid in B.thin))


def _vertex_checks(A, k, kmax):
    """Per-vertex constraint lists for maps A -> decorated Delta^k.

    Entries are (0, a, b) monotone edge, (1, a, b) marked edge and
    (2, a, b, c) thin triangle, filed under their largest vertex; the
    second component lists vertex tuples of simplices above dimension
    kmax, whose images must stay that flat.
    """
    X = A.base
    per = [[] for _ in range(X.n(0))]
    seen = set()
    if X.max_dim >= 1:
        for i in range(X.counts[1]):
            a, b = X.vertex_ids(nd(1, i))
            if a != b and (a, b) not in seen:
                seen.add((a, b))
                per[max(a, b)].append((0, a, b))
    for sid in A.marked:
        a, b = X.vertex_ids(nd(*sid))
        per[max(a, b)].append((1, a, b))
    for sid in A.thin:
        a, b, c = X.vertex_ids(nd(*sid))
        per[max(a, b, c)].append((2, a, b, c))
    final = []
    if kmax < k:
        for d in range(kmax + 1, X.max_dim + 1):
            for i in range(X.counts[d]):
                final.append(X.vertex_ids(nd(d, i)))
    return per, final


def vertex_maps_to_std(A, B):
    """Decoration-preserving maps A -> B as tuples of vertex values.

    B.base must be a possibly truncated standard simplex; maps into a
    nerve are determined by their values on vertices, so each map is
    returned as the tuple of images of the vertices of A in id order.
    """
    k = ss.as_standard(B.base)
    if k is None:
        raise ValueError("codomain is not a standard simplex")
    kmax = B.base.max_dim
    Bm, Bt = _std_decor_sets(B, k)
    per, final = _vertex_checks(A, k, kmax)
    nv = A.base.n(0)
    out = []
    vals = [0] * nv

    def search(p):
        if p == nv:
            for vt in final:
                if len(set(vals[q] for q in vt)) - 1 > kmax:
                    return
            out.append(tuple(vals))
            return
        for v in range(k + 1):
            vals[p] = v
            good = True
            for t in per[p]:
                kind = t[0]
                if kind == 0:
                    if vals[t[1]] > vals[t[2]]:
                        good = False
                elif kind == 1:
                    x, y = vals[t[1]], vals[t[2]]
                    if x != y and (x, y) not in Bm:
                        good = False
                else:
                    x, y, z = vals[t[1]], vals[t[2]], vals[t[3]]
                    if x != y and y != z and (x, y, z) not in Bt:
                        good = False
                if not good:
                    break
            if good:
                search(p + 1)

    search(0)
    return out


def count_decorated_maps(A, B):
    """|decorated maps A -> B| without materializing DecoratedMaps."""
    if A.lean is not None or B.lean is not None:
        return len(decorated_maps(A, B))
    n = ss.as_standard(A.base)
    if n is not None and A.base.max_dim >= n:
        sc = ss.standard_complex(n, A.base.max_dim)
        mk = [sc.cell(sid) for sid in A.marked]
        th = [sc.cell(sid) for sid in A.thin]
        cnt = 0
        for cand in B.base.simplices(n):
            if all(B.is_marked(B.base.act(cand, t)) for t in mk) and \
               all(B.is_thin(B.base.act(cand, t)) for t in th):
                cnt += 1
        return cnt
    if ss.as_standard(B.base) is not None:
        return len(vertex_maps_to_std(A, B))
    return len(decorated_maps(A, B))


def decorated_iso_check(A, B):
    """An isomorphism matching decorations exactly both ways, or None."""
    if (len(A.marked), len(A.thin)) != (len(B.marked), len(B.thin)):
        return None
    for iso in ss.iso_checks(A.base, B.base):
        if all(iso.images[e].target in B.marked for e in A.marked) and \
           all(iso.images[t].target in B.thin for t in A.thin):
            lean_ok = True
            if A.lean is not None or B.lean is not None:
                la = A.thin if A.lean is None else A.lean
                lb = B.thin if B.lean is None else B.lean
                lean_ok = (len(la) == len(lb) and
                           all(iso.images[t].target in lb for t in la))
            if lean_ok:
                return DecoratedMap(iso, A, B)
    return None


def marked_maps(K, L):
    """All marking-preserving maps between MarkedSSets."""
    out = []
    for u in ss.enumerate_maps(K.base, L.base):
        if all(L.is_marked(u.apply(nd(*e))) for e in K.marked):
            out.append(u)
    return out


# --------------------------------------------------------------------------
# the <=1 core, L_sharp, overline, idle maps
# --------------------------------------------------------------------------

def core_leq1(X):
    """Maximal subcomplex whose 2-dimensional faces are all thin."""
    import itertools
    keep = set()
    for sid in X.base.all_ids():
        d = sid[0]
        ok = True
        if d >= 2:
            for combo in itertools.combinations(range(d + 1), 3):
                if not X.is_thin(X.base.act(nd(*sid), combo)):
                    ok = False
                    break
        if ok:
            keep.add(sid)
    sub, incl = ss.subcomplex(X.base, keep)
    old_to_new = {im.target: sid for sid, im in incl.images.items()}
    marked = frozenset(old_to_new[e] for e in X.marked if e in keep)
    return MarkedSSet(sub, marked)


def l_sharp(K):
    """Maximal scaling on a marked simplicial set."""
    return decorate(K.base, K.marked, K.base.ids(2))


def overline(C):
    """Keep only the thin triangles whose 01- or 12-edge is marked."""
    new_thin = frozenset(
        t for t in C.thin
        if C.is_marked(C.edge(t, 0, 1)) or C.is_marked(C.edge(t, 1, 2)))
    return MSS(C.base, C.marked, new_thin, C.lean)


def is_idle(f):
    """Is the image of the monotone map an interval?"""
    if not ss.is_monotone(f):
        raise ValueError(f"map {f} is not monotone")
    return set(f) == set(range(f[0], f[-1] + 1))


# --------------------------------------------------------------------------
# decorated pushouts
# --------------------------------------------------------------------------

def transport_decorations(P, legs):
    """Union decorations induced on a pushout along its legs."""
    marked, thin = set(), set()
    lean = set()
    has_lean = False
    for leg, Z in legs:
        for e in Z.marked:
            im = leg.images[e]
            if not im.word:
                marked.add(im.target)
        for t in Z.thin:
            im = leg.images[t]
            if not im.word:
                thin.add(im.target)
        if Z.lean is not None:
            has_lean = True
        for t in (Z.thin if Z.lean is None else Z.lean):
            im = leg.images[t]
            if not im.word:
                lean.add(im.target)
    return decorate(P, marked, thin, lean if has_lean else None)


def decorated_pushout(f, g, max_dim):
    """Pushout in decorated sets of X <-f- A -g-> B.

    Returns (P: MSS, X -> P, B -> P).
    """
    P, lx, lb = ss.pushout(f.underlying, g.underlying, max_dim)
    Pd = transport_decorations(P, [(lx, f.cod), (lb, g.cod)])
    return (Pd,
            DecoratedMap(lx, f.cod, Pd),
            DecoratedMap(lb, g.cod, Pd))


# --------------------------------------------------------------------------
# JSON serialization
# --------------------------------------------------------------------------

def mss_to_json(X):
    obj = ss.sset_to_json(X.base)
    obj["marked"] = sorted(ss.sid_str(e) for e in X.marked)
    obj["thin"] = sorted(ss.sid_str(t) for t in X.thin)
    if X.lean is not None:
        obj["lean"] = sorted(ss.sid_str(t) for t in X.lean)
    return obj


def mss_from_json(obj):
    base = ss.sset_from_json(obj)
    marked = [ss.parse_sid(s) for s in obj.get("marked", [])]
    thin = [ss.parse_sid(s) for s in obj.get("thin", [])]
    lean = ([ss.parse_sid(s) for s in obj["lean"]]
            if "lean" in obj else None)
    return decorate(base, marked, thin, lean)


def decorated_map_to_json(f):
    return {
        "map": ss.map_to_json(f.underlying),
        "domDecor": mss_to_json(f.dom),
        "codDecor": mss_to_json(f.cod),
    }


def decorated_map_from_json(obj):
    dom = mss_from_json(obj["domDecor"])
    cod = mss_from_json(obj["codDecor"])
    u = ss.map_from_json(obj["map"])
    f = DecoratedMap(ss.SSetMap(dom.base, cod.base, u.images), dom, cod)
    errs = decorated_map_errors(f)
    if errs:
        raise ValueError("invalid decorated map: " + errs[0])
    return f
