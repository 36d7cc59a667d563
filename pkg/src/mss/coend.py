"""Colimits indexed by decorated simplices.

Three constructions live here.  Truncated simplicial objects are finite
towers of marked simplicial sets with a full operator action.  The coend
of such a tower against a family of decorated standard simplices glues
the probe tensors along the twisted-arrow relations.  The big colimit of
a decorated object C glues one decorated grid per map out of a grid
tensor, and comes with a section/retraction pair onto C.

All quotients are computed by union-find over explicit simplex classes;
the resulting partition is independent of enumeration order.
"""

import bisect
import itertools
import json
import os
from dataclasses import dataclass

from . import decor as dc
from . import gray
from . import sset as ss
from .sset import nd


class TruncationError(ValueError):
    """An operation needs more levels than the given object carries."""


def monotone_maps(m, n):
    """All monotone value tuples [m] -> [n], lexicographically ordered."""
    return list(itertools.combinations_with_replacement(range(n + 1), m + 1))


# --------------------------------------------------------------------------
# truncated simplicial objects
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TruncatedSimplicialObject:
    """Levels 0..L of marked simplicial sets plus the operator action.

    action[(n, alpha)] is the structure map of alpha: [m] -> [n]: a
    simplicial map levels[n].base -> levels[m].base carrying marked
    edges to marked edges.  Every monotone map with m, n <= L is keyed.
    """

    levels: tuple
    action: dict

    @property
    def truncation(self):
        return len(self.levels) - 1

    def level(self, m):
        return self.levels[m]

    def act(self, n, alpha):
        return self.action[(n, tuple(alpha))]


def marked_level(base, marked=()):
    norm = frozenset(e if isinstance(e, tuple) else e.target for e in marked)
    for e in norm:
        if e[0] != 1 or e not in set(base.ids(1)):
            raise ValueError(f"marked entry {e} is not an edge of the level")
    return dc.MarkedSSet(base, norm)


def tso_errors(F):
    levels, L = F.levels, F.truncation
    errs = []
    want = {(n, a) for n in range(L + 1)
            for m in range(L + 1) for a in monotone_maps(m, n)}
    if set(F.action) != want:
        return [f"action keys do not cover all monotone maps up to L={L}"]
    for (n, alpha), u in sorted(F.action.items()):
        m = len(alpha) - 1
        if u.dom != levels[n].base or u.cod != levels[m].base:
            errs.append(f"map of {alpha} has wrong endpoints")
            continue
        errs.extend(f"alpha={alpha}: {e}" for e in ss.map_errors(u))
        for e in sorted(levels[n].marked):
            if not levels[m].is_marked(u.images[e]):
                errs.append(f"alpha={alpha} drops the marking of {e}")
    if errs:
        return errs
    for n in range(L + 1):
        ident = F.act(n, ss.identity_tuple(n))
        if ident != ss.identity_map(levels[n].base):
            errs.append(f"identity of [{n}] does not act as the identity")
    for n in range(L + 1):
        for m in range(L + 1):
            for alpha in monotone_maps(m, n):
                for l in range(L + 1):
                    for beta in monotone_maps(l, m):
                        lhs = F.act(n, ss.compose(alpha, beta))
                        rhs = ss.compose_maps(F.act(n, alpha), F.act(m, beta))
                        if lhs != rhs:
                            errs.append(
                                f"functoriality fails on {alpha} . {beta}")
    return errs


def validate_tso(F):
    errs = tso_errors(F)
    if errs:
        raise ValueError(errs[0])
    return F


def levelwise_discrete(S, L):
    """The tower whose level m is the discrete set of m-simplices of S."""
    sims = [list(S.simplices(m)) for m in range(L + 1)]
    pos = [{s: i for i, s in enumerate(lst)} for lst in sims]
    levels = tuple(dc.MarkedSSet(ss.FinSSet(0, [len(lst)], {}), frozenset())
                   for lst in sims)
    action = {}
    for n in range(L + 1):
        for m in range(L + 1):
            for alpha in monotone_maps(m, n):
                images = {(0, i): nd(0, pos[m][S.act(s, alpha)])
                          for i, s in enumerate(sims[n])}
                action[(n, alpha)] = ss.SSetMap(
                    levels[n].base, levels[m].base, images)
    return TruncatedSimplicialObject(levels, action)


def representable(n, L):
    """Levelwise-discrete tower of the simplex sets of Delta^n."""
    return levelwise_discrete(ss.standard_simplex(n, max_dim=L), L)


def _level_to_json(K):
    obj = ss.sset_to_json(K.base)
    obj["marked"] = sorted(ss.sid_str(e) for e in K.marked)
    return obj


def _level_from_json(obj):
    base = ss.sset_from_json(obj)
    return marked_level(base, [ss.parse_sid(s) for s in obj["marked"]])


def _alpha_key(n, alpha):
    return f"{n}:" + ",".join(str(v) for v in alpha)


def tso_to_dir(F, path):
    """Write a tower as level_<m>.json files plus an action table."""
    os.makedirs(path, exist_ok=True)
    for m, K in enumerate(F.levels):
        with open(os.path.join(path, f"level_{m}.json"), "w") as fh:
            fh.write(ss.dump_json(_level_to_json(K)))
    table = {}
    for i, ((n, alpha), u) in enumerate(sorted(F.action.items())):
        name = f"map_{i}.json"
        table[_alpha_key(n, alpha)] = name
        with open(os.path.join(path, name), "w") as fh:
            fh.write(ss.dump_json(ss.map_to_json(u)))
    with open(os.path.join(path, "action.json"), "w") as fh:
        fh.write(ss.dump_json(table))


def tso_from_dir(path):
    levels = []
    for m in itertools.count():
        fname = os.path.join(path, f"level_{m}.json")
        if not os.path.exists(fname):
            break
        with open(fname) as fh:
            levels.append(_level_from_json(json.load(fh)))
    if not levels:
        raise ValueError(f"no level files found under {path}")
    with open(os.path.join(path, "action.json")) as fh:
        table = json.load(fh)
    action = {}
    for key, name in table.items():
        npart, vals = key.split(":")
        alpha = tuple(int(v) for v in vals.split(","))
        with open(os.path.join(path, name)) as fh:
            u = ss.map_from_json(json.load(fh))
        n, m = int(npart), len(alpha) - 1
        action[(n, alpha)] = ss.SSetMap(
            levels[n].base, levels[m].base, u.images)
    return validate_tso(TruncatedSimplicialObject(tuple(levels), action))


# --------------------------------------------------------------------------
# colimit quotients
# --------------------------------------------------------------------------

def _colimit(terms, relations, max_dim):
    """Quotient of a disjoint union of decorated terms by map relations.

    relations yields (W, pairs) with pairs a list of (tid, u) where
    u: W -> terms[tid].base; for every simplex of W all listed images
    are identified.  Because each u is simplicial the generated classes
    form a congruence, so the quotient is again a simplicial set.
    Union-find runs over integer codes; terms sharing one base object
    share a simplex enumeration, and image arrays are cached per (W, u)
    so repeated relation maps cost one traversal.  Returns the decorated
    value, the cocone legs, and the quotient complex.
    """
    enums = {}
    for T in terms:
        if id(T.base) not in enums:
            sims, index, by_dim = [], {}, {}
            for d in range(min(T.base.max_dim, max_dim) + 1):
                at_d = []
                for s in T.base.simplices(d):
                    index[(d, s.word, s.target)] = len(sims)
                    at_d.append(len(sims))
                    sims.append((d, s.word, s.target))
                by_dim[d] = at_d
            enums[id(T.base)] = (sims, index, by_dim)
    offs, total = [], 0
    for T in terms:
        offs.append(total)
        total += len(enums[id(T.base)][0])
    parent = list(range(total))

    def find(x):
        r = x
        while parent[r] != r:
            r = parent[r]
        while parent[x] != r:
            parent[x], x = r, parent[x]
        return r

    arrays = {}

    def image_array(W, u, tid):
        got = arrays.get((id(W), id(u)))
        if got is None:
            index = enums[id(terms[tid].base)][1]
            arr = []
            for d in range(min(W.max_dim, max_dim) + 1):
                for s in W.simplices(d):
                    im = u.apply(s)
                    arr.append(index[(d, im.word, im.target)])
            got = (W, u, arr)
            arrays[(id(W), id(u))] = got
        return got[2]

    for W, pairs in relations:
        tid0, u0 = pairs[0]
        arr0, off0 = image_array(W, u0, tid0), offs[tid0]
        for tid, u in pairs[1:]:
            arr, off = image_array(W, u, tid), offs[tid]
            for i, j in zip(arr0, arr):
                a, b = find(off0 + i), find(off + j)
                if a != b:
                    if b < a:
                        a, b = b, a
                    parent[b] = a

    reps = {}

    def rep(e):
        r = find(e)
        got = reps.get(r)
        if got is None:
            tid = bisect.bisect_right(offs, r) - 1
            d, word, tgt = enums[id(terms[tid].base)][0][r - offs[tid]]
            got = reps[r] = (d, tid, word, tgt)
        return got

    def cells_for_dim(d):
        out = []
        for tid, T in enumerate(terms):
            off = offs[tid]
            out.extend(rep(off + i)
                       for i in enums[id(T.base)][2].get(d, ()))
        return out

    def act_cell(d, cell, alpha):
        _, tid, word, tgt = cell
        ns = terms[tid].base.act(ss.NormalSimplex(word, tgt), alpha)
        index = enums[id(terms[tid].base)][1]
        return rep(offs[tid] + index[(len(alpha) - 1, ns.word, ns.target)])

    cx = ss.complex_from_cells(max_dim, cells_for_dim, act_cell)
    legs = []
    for tid, T in enumerate(terms):
        index = enums[id(T.base)][1]
        off = offs[tid]
        ims = {sid: cx.normal(sid[0], rep(off + index[(sid[0], (), sid)]))
               for sid in T.base.all_ids()}
        legs.append(ss.SSetMap(T.base, cx.sset, ims))
    marked = {legs[tid].images[e].target
              for tid, T in enumerate(terms) for e in sorted(T.marked)
              if not legs[tid].images[e].word}
    thin = {legs[tid].images[t].target
            for tid, T in enumerate(terms) for t in sorted(T.thin)
            if not legs[tid].images[t].word}
    return dc.decorate(cx.sset, sorted(marked), sorted(thin)), legs, cx


def _std_map(alpha, A, B):
    """The decorated map of standard simplices induced by monotone alpha."""
    m, n = A.base.max_dim, B.base.max_dim
    images = {}
    for sid in A.base.all_ids():
        chain = ss.compose(alpha, ss.chain_tuple(m, nd(*sid)))
        images[sid] = ss.ns_from_chain(n, chain)
    f = dc.decorated(ss.SSetMap(A.base, B.base, images), A, B)
    if f is None:
        raise ValueError(f"{alpha} does not respect the probe decorations")
    return f


def _generators(L):
    """(value tuple, codomain) of every coface and codegeneracy whose
    endpoints both lie in 0..L."""
    gens = []
    for n in range(1, L + 1):
        gens.extend((ss.delta_map(j, n), n) for j in range(n + 1))
    for n in range(L):
        gens.extend((ss.sigma_map(j, n), n) for j in range(n + 1))
    return gens


# --------------------------------------------------------------------------
# truncated coends
# --------------------------------------------------------------------------

def coend(F, probe, side="gl", max_dim=None, probe_side="left"):
    """The coend of probe simplices against the levels of F.

    Level m is paired with (Delta^m, flat, probe-scaling); side "gl"
    pairs through the globular product and side "gr" through the Gray
    product.  probe_side places the probe factor; "left" matches the
    mapping-object adjunction on discrete towers and is the default.
    """
    if probe not in ("sharp", "flat"):
        raise ValueError(f"unknown probe {probe!r}")
    if side not in ("gl", "gr"):
        raise ValueError(f"unknown side {side!r}")
    if probe_side not in ("left", "right"):
        raise ValueError(f"unknown probe side {probe_side!r}")
    L = F.truncation
    if max_dim is None:
        max_dim = L
    if L < max_dim:
        raise TruncationError(
            f"truncation too low: levels stop at {L} but maxDim={max_dim}")
    variant = "odot" if side == "gl" else "tensor"
    thin_flag = dc.SHARP if probe == "sharp" else dc.FLAT
    probes = [dc.std(m, dc.FLAT, thin_flag) for m in range(L + 1)]
    lv = [dc.l_sharp(F.levels[m]) for m in range(L + 1)]

    def ordered(P, A):
        return (P, A) if probe_side == "left" else (A, P)

    tens = [gray.tensor_complex(*ordered(probes[m], lv[m]), variant, max_dim)
            for m in range(L + 1)]

    def relations():
        for alpha, b in _generators(L):
            yield _coend_relation(F, alpha, len(alpha) - 1, b, probes, lv,
                                  tens, variant, probe_side, max_dim)

    value, _, _ = _colimit([t[0] for t in tens], relations(), max_dim)
    return value


def _coend_relation(F, alpha, a, b, probes, lv, tens, variant,
                    probe_side, max_dim):
    p_map = _std_map(alpha, probes[a], probes[b])
    f_map = dc.decorated(F.act(b, alpha), lv[b], lv[a])
    if f_map is None:
        raise ValueError(f"level map of {alpha} is not decoration-preserving")
    if probe_side == "left":
        W = gray.tensor_complex(probes[a], lv[b], variant, max_dim)
        into_b = gray.tensor_map(p_map, dc.identity_decorated(lv[b]),
                                 variant, src=W, dst=tens[b])
        into_a = gray.tensor_map(dc.identity_decorated(probes[a]), f_map,
                                 variant, src=W, dst=tens[a])
    else:
        W = gray.tensor_complex(lv[b], probes[a], variant, max_dim)
        into_b = gray.tensor_map(dc.identity_decorated(lv[b]), p_map,
                                 variant, src=W, dst=tens[b])
        into_a = gray.tensor_map(f_map, dc.identity_decorated(probes[a]),
                                 variant, src=W, dst=tens[a])
    return W[0].base, [(b, into_b.underlying), (a, into_a.underlying)]


def coend_opgl(F, probe, max_dim=None, probe_side="left"):
    return coend(F, probe, "gl", max_dim, probe_side)


def coend_opgr(F, probe, max_dim=None, probe_side="left"):
    return coend(F, probe, "gr", max_dim, probe_side)


# --------------------------------------------------------------------------
# the big colimits
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IndexCell:
    """A map f out of the (n, k) grid tensor into the variant target."""

    n: int
    k: int
    f: dc.DecoratedMap


@dataclass(frozen=True, eq=False)
class BigX:
    """The big colimit with its section s and retraction pi.

    pi . s is the identity of the variant target (C for the Gray
    variant, overline(C) for the globular one).
    """

    value: dc.MSS
    s: dc.DecoratedMap
    pi: dc.DecoratedMap


def index_target(C, variant):
    if variant not in ("tensor", "odot"):
        raise ValueError(f"unknown variant {variant!r}")
    return C if variant == "tensor" else dc.overline(C)


def grid_tensor(n, k, variant, max_dim=None):
    """(Delta^n, flat) (*) (Delta^k, sharp) with its product complex."""
    return gray.tensor_complex(dc.std(n, dc.FLAT, dc.FLAT),
                               dc.std(k, dc.SHARP, dc.SHARP),
                               variant, max_dim)


def _padded(A, max_dim):
    if A.base.max_dim >= max_dim:
        return A
    return dc.decorate(ss.truncate(A.base, max_dim),
                       A.marked, A.thin, A.lean)


def index_cells(C, variant, n, k, max_dim=None):
    T, _ = grid_tensor(n, k, variant, max_dim)
    target = _padded(index_target(C, variant), T.base.max_dim)
    return [IndexCell(n, k, f) for f in dc.decorated_maps(T, target)]


def _cell_key(u, kd):
    """Images of u in dimensions up to kd, in id order.

    Maps into a target of dimension kd agree once these images agree:
    any higher image is degenerate, and a degenerate simplex is the
    unique simplex with its boundary.
    """
    out = []
    for d in range(min(kd, u.dom.max_dim) + 1):
        out.extend(u.images[sid] for sid in u.dom.ids(d))
    return tuple(out)


def _composite_key(g, f, kd):
    out = []
    for d in range(min(kd, g.dom.max_dim) + 1):
        out.extend(f.apply(g.images[sid]) for sid in g.dom.ids(d))
    return tuple(out)


def _grid_map(alpha, beta, src_cx, dst_cx, dst_shape):
    """The product map (alpha x beta) between two grid complexes."""
    n2, k2 = dst_shape
    images = {}
    for sid in src_cx.sset.all_ids():
        nsa, nsb = src_cx.cell(sid)
        d = sid[0]
        ima = ss.ns_from_chain(n2, ss.compose(alpha,
                                              ss.chain_tuple(len(alpha) - 1,
                                                             nsa)))
        imb = ss.ns_from_chain(k2, ss.compose(beta,
                                              ss.chain_tuple(len(beta) - 1,
                                                             nsb)))
        images[sid] = dst_cx.normal(d, (ima, imb))
    return ss.SSetMap(src_cx.sset, dst_cx.sset, images)


def big_x(C, variant, max_idx, max_dim):
    """Colimit of the pulled-back grids over all index cells.

    Every d-simplex of a product of standard simplices factors through
    a face pair of dimension at most d, so dimension d of the value is
    complete once max_idx >= d.  Index cells are enumerated on grids
    truncated at max_dim; on targets of dimension at most max_dim this
    carries the same information as the untruncated tensor.  The target
    of s and pi is padded to max_dim.
    """
    if C.base.max_dim > max_idx:
        raise TruncationError(
            f"max_idx={max_idx} is below the dimension of C; "
            "the section needs a cell for every simplex")
    if C.base.max_dim > max_dim:
        raise TruncationError(
            f"max_dim={max_dim} cannot accommodate the section of C")
    target = _padded(index_target(C, variant), max_dim)
    kd = C.base.max_dim
    shapes = [(n, k) for n in range(max_idx + 1)
              for k in range(max_idx + 1)]
    grids = {nk: grid_tensor(*nk, variant, max_dim) for nk in shapes}
    cells, index_of, terms = [], {}, []
    for nk in shapes:
        T, _ = grids[nk]
        P = T.base
        ones = P.ids(1) if P.max_dim >= 1 else ()
        twos = P.ids(2) if P.max_dim >= 2 else ()
        for f in dc.decorated_maps(T, target):
            ims = f.underlying.images
            index_of[(nk, _cell_key(f.underlying, kd))] = len(cells)
            cells.append(IndexCell(nk[0], nk[1], f))
            terms.append(dc.decorate(
                P,
                [e for e in ones if target.is_marked(ims[e])],
                [t for t in twos if target.is_thin(ims[t])]))
    gens = _generators(max_idx)
    idents, moves = {}, {}
    for nk in shapes:
        idents[nk] = ss.identity_map(grids[nk][1].sset)
        n2, k2 = nk
        mv = []
        for src, a_t, b_t in (
                [((len(a) - 1, k2), a, ss.identity_tuple(k2))
                 for a, b in gens if b == n2]
                + [((n2, len(a) - 1), ss.identity_tuple(n2), a)
                   for a, b in gens if b == k2]):
            if max(src) > max_idx:
                continue
            mv.append((src, _grid_map(a_t, b_t, grids[src][1],
                                      grids[nk][1], nk)))
        moves[nk] = mv

    def relations():
        for tid2, ic in enumerate(cells):
            f = ic.f.underlying
            for src, g in moves[(ic.n, ic.k)]:
                tid1 = index_of[(src, _composite_key(g, f, kd))]
                yield grids[src][1].sset, [(tid2, g), (tid1, idents[src])]

    value, legs, cx = _colimit(terms, relations(), max_dim)

    s_images = {}
    const_cells = {}
    for sid in C.base.all_ids():
        d = sid[0]
        if d not in const_cells:
            z = ss.standard_simplex(0)
            const_cells[d] = (nd(d, 0), z.act(nd(0, 0), (0,) * (d + 1)))
        T, tcx = grids[(d, 0)]
        ims = {}
        for psid in T.base.all_ids():
            nsa, _ = tcx.cell(psid)
            ims[psid] = C.base.act(nd(*sid), ss.chain_tuple(d, nsa))
        tid = index_of[((d, 0), _cell_key(
            ss.SSetMap(T.base, C.base, ims), kd))]
        top = tcx.index[(d, const_cells[d])]
        s_images[sid] = legs[tid].images[top]
    s_u = ss.SSetMap(target.base, value.base, s_images)
    s_dec = dc.decorated(s_u, target, value)

    pi_images = {}
    for sid in value.base.all_ids():
        d, tid, word, tgt = cx.cell(sid)
        pi_images[sid] = cells[tid].f.underlying.apply(
            ss.NormalSimplex(word, tgt))
    pi_u = ss.SSetMap(value.base, target.base, pi_images)
    pi_dec = dc.decorated(pi_u, value, target)
    if s_dec is None or pi_dec is None:
        raise RuntimeError("section/retraction failed to respect decorations")
    if ss.compose_maps(s_u, pi_u) != ss.identity_map(target.base):
        raise RuntimeError("retraction does not split the section")
    return BigX(value, s_dec, pi_dec)


# --------------------------------------------------------------------------
# levelwise functors
# --------------------------------------------------------------------------

_FUNCTORS = {
    "Sq": ("opgr", dc.SHARP, dc.SHARP),
    "SqE": ("opgr", dc.FLAT, dc.FLAT),
    "Gl": ("opgl", dc.FLAT, dc.SHARP),
    "GlE": ("opgl", dc.FLAT, dc.FLAT),
}


def levelwise(C, functor, n, max_dim):
    """Level n of the square or globular tower of C.

    The mapping object of the decorated n-simplex is cut down to the
    subcomplex whose 2-dimensional faces are all thin, keeping marks.
    """
    if functor not in _FUNCTORS:
        raise ValueError(f"unknown functor {functor!r}")
    variance, mf, tf = _FUNCTORS[functor]
    M = gray.mapping_object(variance, dc.std(n, mf, tf), C, max_dim)
    return dc.core_leq1(M)


def _core_keep(M):
    keep = set()
    for sid in M.base.all_ids():
        d = sid[0]
        if d >= 2 and any(
                not M.is_thin(M.base.act(nd(*sid), combo))
                for combo in itertools.combinations(range(d + 1), 3)):
            continue
        keep.add(sid)
    return keep


def levelwise_object(C, functor, L, max_dim):
    """The tower of levelwise(C, functor, n) for n <= L with its action.

    The operator action precomposes each mapping-object cell on the
    argument side; cells are re-read through the probe-tensor complex
    of the matching level, so both the nerve-target representation and
    the generic one are covered.
    """
    if functor not in _FUNCTORS:
        raise ValueError(f"unknown functor {functor!r}")
    variance, mf, tf = _FUNCTORS[functor]
    args = [dc.std(n, mf, tf) for n in range(L + 1)]
    pairs = [gray.mapping_object_complex(variance, args[n], C, max_dim)
             for n in range(L + 1)]
    cores, old_to_new = [], []
    for M, _ in pairs:
        keep = _core_keep(M)
        sub, incl = ss.subcomplex(M.base, keep)
        o2n = {im.target: sid for sid, im in incl.images.items()}
        cores.append(dc.MarkedSSet(
            sub, frozenset(o2n[e] for e in M.marked if e in keep)))
        old_to_new.append(o2n)
    nerve = C.lean is None and ss.as_standard(C.base) is not None
    if nerve:
        fams = [[gray._probe_family(variance, d, args[n])
                 for d in range(max_dim + 1)] for n in range(L + 1)]
        vindex = [[{coord: p for p, coord in enumerate(fam[2])}
                   for fam in row] for row in fams]
    else:
        flats = [dc.std(d, dc.FLAT, dc.FLAT) for d in range(max_dim + 1)]
        tens = [[gray._probe_tensor(flats[d], args[n], variance,
                                    d + args[n].base.max_dim)
                 for d in range(max_dim + 1)] for n in range(L + 1)]
        orders = [[list(t[0].base.all_ids()) for t in row] for row in tens]

    def moved_cell(n, m, alpha, d, cell):
        if nerve:
            vi = vindex[n][d]
            return tuple(cell[vi[(i, alpha[a])]]
                         for i, a in fams[m][d][2])
        u = ss.SSetMap(tens[n][d][0].base, C.base,
                       dict(zip(orders[n][d], cell)))
        f_arg = _std_map(alpha, args[m], args[n])
        if variance in ("gr", "gl"):
            t = gray.tensor_map(dc.identity_decorated(flats[d]), f_arg,
                                "tensor" if variance == "gr" else "odot",
                                src=tens[m][d], dst=tens[n][d])
        else:
            t = gray.tensor_map(f_arg, dc.identity_decorated(flats[d]),
                                "tensor" if variance == "opgr" else "odot",
                                src=tens[m][d], dst=tens[n][d])
        return tuple(u.apply(t.underlying.images[sid])
                     for sid in orders[m][d])

    action = {}
    for n in range(L + 1):
        for m in range(L + 1):
            for alpha in monotone_maps(m, n):
                images = {}
                for old_sid, new_sid in sorted(old_to_new[n].items()):
                    d = old_sid[0]
                    cell = pairs[n][1].cell(old_sid)
                    ns = pairs[m][1].normal(
                        d, moved_cell(n, m, alpha, d, cell))
                    if ns.target not in old_to_new[m]:
                        raise RuntimeError(
                            "operator action leaves the thin core")
                    images[new_sid] = ss.NormalSimplex(
                        ns.word, old_to_new[m][ns.target])
                action[(n, alpha)] = ss.SSetMap(
                    cores[n].base, cores[m].base, images)
    return validate_tso(TruncatedSimplicialObject(tuple(cores), action))
