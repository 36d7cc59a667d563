"""Tensor products of decorated simplicial sets and their mapping objects.

Four variants share the cartesian product as underlying simplicial set and
differ only in decorations:

* tensor    - marked iff marked in both projections; thin iff thin in both
              and (the 01-edge is marked in the right factor or the 12-edge
              is marked in the left factor);
* boxtensor - same marking; thin iff thin in both and one of those two edge
              conditions holds with the corresponding projection degenerate;
* odot      - marking from the left factor only, scaling of tensor;
* boxodot   - marking from the left factor only, scaling of boxtensor.

Mapping objects are computed dimension-wise: an n-simplex of the functor
object is a decorated map out of (flat Delta^n) tensored with the fixed
argument, an edge is marked iff the same underlying map is decorated for
the fully marked interval probe, and a triangle is thin iff it is decorated
for the flat-marked, fully scaled probe.
"""

from __future__ import annotations

from functools import lru_cache

from . import decor as dc
from . import sset as ss
from .sset import NormalSimplex, nd

VARIANTS = ("tensor", "boxtensor", "odot", "boxodot")
VARIANCES = ("gr", "opgr", "gl", "opgl")

_BOX = {"tensor": False, "boxtensor": True, "odot": False, "boxodot": True}
_LEFT_MARK = {"tensor": False, "boxtensor": False,
              "odot": True, "boxodot": True}


def _pair_marked(A, B, nsa, nsb, variant):
    if _LEFT_MARK[variant]:
        return A.is_marked(nsa)
    return A.is_marked(nsa) and B.is_marked(nsb)


def _pair_thin(A, B, nsa, nsb, variant):
    if not (A.is_thin(nsa) and B.is_thin(nsb)):
        return False
    left12 = A.is_marked(A.base.act(nsa, (1, 2)))
    right01 = B.is_marked(B.base.act(nsb, (0, 1)))
    if _BOX[variant]:
        return (left12 and nsa.degenerate) or (right01 and nsb.degenerate)
    return right01 or left12


def tensor_complex(A, B, variant, max_dim=None):
    """(decorated product, underlying CellComplex)."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if max_dim is None:
        max_dim = A.base.max_dim + B.base.max_dim
    cx = ss.product_complex(A.base, B.base, max_dim)
    marked = [sid for sid in cx.sset.ids(1)
              if _pair_marked(A, B, *cx.cell(sid), variant)]
    thin = [sid for sid in cx.sset.ids(2)
            if _pair_thin(A, B, *cx.cell(sid), variant)]
    return dc.decorate(cx.sset, marked, thin), cx


def tensor(A, B, variant, max_dim=None):
    return tensor_complex(A, B, variant, max_dim)[0]


def tensor_map(f, g, variant, src=None, dst=None, max_dim=None):
    """The induced map A (x) C -> B (x) D of f: A -> B, g: C -> D."""
    if src is None:
        src = tensor_complex(f.dom, g.dom, variant, max_dim)
    if dst is None:
        dst = tensor_complex(f.cod, g.cod, variant, max_dim)
    (S, scx), (T, tcx) = src, dst
    images = {}
    for sid in S.base.all_ids():
        nsa, nsb = scx.cell(sid)
        images[sid] = tcx.normal(
            sid[0], (f.apply(nsa), g.apply(nsb)))
    u = ss.SSetMap(S.base, T.base, images)
    return dc.DecoratedMap(u, S, T)


def pushout_product(f, g, variant, max_dim=None):
    """The map (B (x) C) u_{A (x) C} (A (x) D) -> B (x) D."""
    A, B, C, D = f.dom, f.cod, g.dom, g.cod
    if max_dim is None:
        max_dim = B.base.max_dim + D.base.max_dim
    tAC = tensor_complex(A, C, variant, max_dim)
    tBC = tensor_complex(B, C, variant, max_dim)
    tAD = tensor_complex(A, D, variant, max_dim)
    tBD = tensor_complex(B, D, variant, max_dim)
    fC = tensor_map(f, dc.identity_decorated(C), variant, src=tAC, dst=tBC)
    Ag = tensor_map(dc.identity_decorated(A), g, variant, src=tAC, dst=tAD)
    Q, leg_bc, leg_ad = dc.decorated_pushout(fC, Ag, max_dim)
    u = ss.cocone_factor(
        leg_bc.underlying, leg_ad.underlying,
        tensor_map(dc.identity_decorated(B), g, variant,
                   src=tBC, dst=tBD).underlying,
        tensor_map(f, dc.identity_decorated(D), variant,
                   src=tAD, dst=tBD).underlying)
    if u is None:
        raise ValueError("pushout-product cocone does not factor")
    return dc.DecoratedMap(u, Q, tBD[0])


# --------------------------------------------------------------------------
# mapping objects
# --------------------------------------------------------------------------

def _probe_tensor(probe, X, variance, max_dim):
    """Tensor the probe with X on the side dictated by the variance."""
    variant = "tensor" if variance in ("gr", "opgr") else "odot"
    if variance in ("gr", "gl"):
        return tensor_complex(probe, X, variant, max_dim)
    return tensor_complex(X, probe, variant, max_dim)


def _probe_coord(cell, variance):
    """Split a product cell into (probe coordinate, other coordinate)."""
    if variance in ("gr", "gl"):
        return cell[0], cell[1]
    return cell[1], cell[0]


def _make_pair(pns, xns, variance):
    if variance in ("gr", "gl"):
        return (pns, xns)
    return (xns, pns)


@lru_cache(maxsize=256)
def _probe_family(variance, n, X):
    """Shared level-n probe data for mapping objects with nerve targets.

    Returns the underlying product complex of the level-n probe tensored
    with X, the three decoration regimes of that product (flat levels,
    fully marked interval, flat-marked scaled triangle), and the vertex
    coordinate table of the product.
    """
    variant = "tensor" if variance in ("gr", "opgr") else "odot"
    probes = {"flat": dc.std(n, dc.FLAT, dc.FLAT)}
    if n == 1:
        probes["mark"] = dc.std(1, dc.SHARP, dc.SHARP)
    if n == 2:
        probes["thin"] = dc.std(2, dc.FLAT, dc.SHARP)
    pm_dim = n + X.base.max_dim
    if variance in ("gr", "gl"):
        cx = ss.product_complex(probes["flat"].base, X.base, pm_dim)
    else:
        cx = ss.product_complex(X.base, probes["flat"].base, pm_dim)
    P = cx.sset
    tensors = {}
    for key, pr in probes.items():
        A, B = (pr, X) if variance in ("gr", "gl") else (X, pr)
        marked = [sid for sid in P.ids(1)
                  if _pair_marked(A, B, *cx.cell(sid), variant)]
        thin = [sid for sid in P.ids(2)
                if _pair_thin(A, B, *cx.cell(sid), variant)]
        tensors[key] = dc.decorate(P, marked, thin)
    vcoord = []
    for p in range(P.n(0)):
        pns, xns = _probe_coord(cx.cell((0, p)), variance)
        vcoord.append((pns.target[1], xns.target[1]))
    return cx, tensors, tuple(vcoord)


def _vals_pass(vals, pairs, tris, Dm, Dt):
    for a, b in pairs:
        x, y = vals[a], vals[b]
        if x != y and (x, y) not in Dm:
            return False
    for a, b, c in tris:
        x, y, z = vals[a], vals[b], vals[c]
        if x != y and y != z and (x, y, z) not in Dt:
            return False
    return True


def _regime_tuples(fam, key):
    P = fam[0].sset
    T = fam[1][key]
    return ([P.vertex_ids(nd(*sid)) for sid in sorted(T.marked)],
            [P.vertex_ids(nd(*sid)) for sid in sorted(T.thin)])


def _mapping_object_std(variance, X, D, max_dim):
    # Maps into a nerve target are determined by vertex values, so cells
    # can be stored as value tuples and operators act by index shuffling.
    k = ss.as_standard(D.base)
    Dm, Dt = dc._std_decor_sets(D, k)
    fams = [_probe_family(variance, n, X) for n in range(max_dim + 1)]
    level_cells = [dc.vertex_maps_to_std(fam[1]["flat"], D) for fam in fams]
    vindexes = [{c: p for p, c in enumerate(fam[2])} for fam in fams]

    def cells_for_dim(n):
        return level_cells[n]

    def act_cell(n, cell, alpha):
        vi = vindexes[n]
        return tuple(cell[vi[(alpha[i], x)]]
                     for i, x in fams[len(alpha) - 1][2])

    cx = ss.complex_from_cells(max_dim, cells_for_dim, act_cell)
    M = cx.sset
    marked = []
    if max_dim >= 1:
        pairs, tris = _regime_tuples(fams[1], "mark")
        marked = [sid for sid in M.ids(1)
                  if _vals_pass(cx.cell(sid), pairs, tris, Dm, Dt)]
    thin = []
    if max_dim >= 2:
        pairs, tris = _regime_tuples(fams[2], "thin")
        thin = [sid for sid in M.ids(2)
                if _vals_pass(cx.cell(sid), pairs, tris, Dm, Dt)]
    return dc.decorate(M, marked, thin), cx


def mapping_object_complex(variance, X, D, max_dim):
    """(mapping object MSS, its CellComplex of decorated-map cells).

    With a nerve target the cells are vertex-value tuples; otherwise they
    are tuples of simplex images over the probe tensor in id order.
    """
    if variance not in VARIANCES:
        raise ValueError(f"unknown variance {variance!r}")
    if D.lean is None and ss.as_standard(D.base) is not None:
        return _mapping_object_std(variance, X, D, max_dim)
    levels = {}
    for n in range(max_dim + 1):
        pm_dim = n + X.base.max_dim
        flat_probe = dc.std(n, dc.FLAT, dc.FLAT)
        levels[n] = _probe_tensor(flat_probe, X, variance, pm_dim)
    mark_probe, _ = _probe_tensor(dc.std(1, dc.SHARP, dc.SHARP), X,
                                  variance, 1 + X.base.max_dim)
    thin_probe = None
    if max_dim >= 2:
        thin_probe, _ = _probe_tensor(dc.std(2, dc.FLAT, dc.SHARP), X,
                                      variance, 2 + X.base.max_dim)

    order = {n: list(levels[n][0].base.all_ids())
             for n in range(max_dim + 1)}

    def as_map(n, cell):
        return ss.SSetMap(levels[n][0].base, D.base,
                          dict(zip(order[n], cell)))

    def cells_for_dim(n):
        P = levels[n][0]
        out = []
        for u in ss.enumerate_maps(P.base, D.base):
            if dc.is_decoration_preserving(u, P, D):
                out.append(tuple(u.images[sid] for sid in order[n]))
        return out

    def act_cell(n, cell, alpha):
        m = len(alpha) - 1
        u = as_map(n, cell)
        pn_cx = levels[n][1]
        pm_cx = levels[m][1]
        std_n = ss.standard_complex(n)
        ims = []
        for sid in order[m]:
            pns, xns = _probe_coord(pm_cx.cell(sid), variance)
            moved = std_n.normal(
                sid[0], ss.compose(alpha, ss.chain_tuple(m, pns)))
            tgt = pn_cx.normal(sid[0], _make_pair(moved, xns, variance))
            ims.append(u.apply(tgt))
        return tuple(ims)

    cx = complex = ss.complex_from_cells(max_dim, cells_for_dim, act_cell)
    M = cx.sset
    marked = []
    for sid in M.ids(1):
        u = as_map(1, cx.cell(sid))
        if dc.is_decoration_preserving(u, mark_probe, D):
            marked.append(sid)
    thin = []
    for sid in M.ids(2):
        u = as_map(2, cx.cell(sid))
        if dc.is_decoration_preserving(u, thin_probe, D):
            thin.append(sid)
    return dc.decorate(M, marked, thin), cx


def mapping_object(variance, X, D, max_dim):
    return mapping_object_complex(variance, X, D, max_dim)[0]


# --------------------------------------------------------------------------
# associativity and the universal filter
# --------------------------------------------------------------------------

def _expanded_pair(cx, ns):
    """The component pair of an arbitrary simplex of a product complex."""
    a, b = cx.cell(ns.target)
    g = ss.word_to_surj(ns.word, ns.target[0])
    return a, b, g


def assoc_compare(A, B, C, variant, max_dim):
    """Is (A@B)@C -> A@(B@C) a decoration-exact identification?"""
    AB, ab_cx = tensor_complex(A, B, variant, max_dim)
    L, l_cx = tensor_complex(AB, C, variant, max_dim)
    BC, bc_cx = tensor_complex(B, C, variant, max_dim)
    R, r_cx = tensor_complex(A, BC, variant, max_dim)
    images = {}
    for sid in L.base.all_ids():
        nsp, nsc = l_cx.cell(sid)
        a0, b0 = ab_cx.cell(nsp.target)
        g = ss.word_to_surj(nsp.word, nsp.target[0])
        nsa = A.base.act(a0, g)
        nsb = B.base.act(b0, g)
        images[sid] = r_cx.normal(sid[0], (nsa, bc_cx.normal(sid[0], (nsb, nsc))))
    u = ss.SSetMap(L.base, R.base, images)
    if ss.map_errors(u):
        return False
    if L.base.counts != R.base.counts:
        return False
    if any(ns.word or ns.target[0] != sid[0] for sid, ns in images.items()):
        return False
    if len(set(im.target for im in images.values())) != \
            sum(L.base.counts):
        return False
    got_marked = frozenset(images[e].target for e in L.marked)
    got_thin = frozenset(images[t].target for t in L.thin)
    return got_marked == R.marked and got_thin == R.thin


def universal_subcategory_filter(F, cx, Cbar, Dbar):
    """The two image conditions for maps out of a product of overlines.

    F is a decorated map whose domain is the product assembled by cx with
    factors Cbar and Dbar; returns True iff slice restrictions preserve
    thinness and every stairstep composite triangle lands on a thin simplex.
    """
    P = F.dom.base
    for sid in P.ids(2):
        nsc, nsd = cx.cell(sid)
        c_vertex = nsc.target[0] == 0
        d_vertex = nsd.target[0] == 0
        keep = (c_vertex and Dbar.is_thin(nsd)) or \
               (d_vertex and Cbar.is_thin(nsc))
        if keep and not F.cod.is_thin(F.underlying.images[sid]):
            return False
    for e_c in Cbar.base.ids(1):
        for e_d in Dbar.base.ids(1):
            sc = Cbar.base.act(nd(*e_c), (0, 1, 1))
            sd = Dbar.base.act(nd(*e_d), (0, 0, 1))
            ns = cx.normal(2, (sc, sd))
            if not ns.word and \
                    not F.cod.is_thin(F.underlying.images[ns.target]):
                return False
    return True
