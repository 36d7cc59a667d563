"""Generator catalogs for anodyne maps and replayable attachment certificates.

The catalog covers the scaled family (S1, S2, S3), the marked-scaled family
(M1, M2, M3, M4, MS1, ME), the derived scalings MSI(1), MSI(2), the biscaled
family (A1, A2, A3, A4, B1, B2, E), the cofibrations C1, C2, C3, and the
three outer-pivot step shapes (O1, O2, O3).  A certificate is a start object
together with a list of (generator, attaching map) steps; replaying it runs
the decorated pushouts in order.  The pivot filtrations build certificates
that present an inclusion Z -> Delta^n_dagger as a composite of catalog
pushouts, attaching the missing simplices through a pivot vertex in
dimension order and then repairing decorations.
"""

from __future__ import annotations

import itertools
import random
import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from . import decor as dc
from . import report as rp
from . import sset as ss
from .decor import FLAT, SHARP
from .sset import NormalSimplex, nd


class CertificateError(ValueError):
    pass


# --------------------------------------------------------------------------
# generator catalog


@dataclass(frozen=True)
class Generator:
    name: str
    params: tuple
    source: dc.MSS
    target: dc.MSS
    incl: dc.DecoratedMap

    @property
    def label(self):
        return generator_label(self.name, self.params)


def generator_label(name, params):
    if not params:
        return name
    return f"{name}({','.join(str(p) for p in params)})"


_LABEL_RE = re.compile(r"^([A-Z]+[0-9]*)(?:\(([^()]*)\))?$")


def parse_label(label):
    m = _LABEL_RE.match(label)
    if not m:
        raise ValueError(f"bad generator label {label!r}")
    name = m.group(1)
    if m.group(2) is None or m.group(2) == "":
        return name, ()
    params = tuple(int(p) if p.lstrip("-").isdigit() else p
                   for p in m.group(2).split(","))
    return name, params


def _horn_decor(n, i, marked=(), thin=(), lean=None):
    """The i-th horn of Delta^n with the listed decorations, plus inclusion.

    Decorations are vertex tuples; any not present in the horn (the top
    triangle of a 2-horn, say) are dropped.
    """
    H, incl = ss.horn(n, i)
    chain_of = {sid: ss.chain_tuple(n, incl.images[sid]) for sid in H.all_ids()}
    by_chain = {ch: sid for sid, ch in chain_of.items()}
    mk = [by_chain[tuple(e)] for e in marked if tuple(e) in by_chain]
    th = [by_chain[tuple(t)] for t in thin if tuple(t) in by_chain]
    ln = None
    if lean is not None:
        ln = [by_chain[tuple(t)] for t in lean if tuple(t) in by_chain]
    return dc.decorate(H, mk, th, ln), incl


def _std_vertex_map(m, n, vf):
    """SSetMap Delta^m -> Delta^n from a weakly monotone vertex tuple."""
    dom = ss.standard_simplex(m)
    cod = ss.standard_simplex(n)
    imgs = {}
    for sid in dom.all_ids():
        ch = ss.chain_tuple(m, nd(*sid))
        imgs[sid] = ss.ns_from_chain(n, tuple(vf[c] for c in ch))
    return ss.SSetMap(dom, cod, imgs)


@lru_cache(maxsize=None)
def _iso_nerve(max_dim=3):
    """Nerve of the walking isomorphism, truncated; two cells per dimension."""
    def cells_for_dim(d):
        return list(itertools.product((0, 1), repeat=d + 1))

    def act_cell(d, cell, alpha):
        return tuple(cell[a] for a in alpha)

    return ss.complex_from_cells(max_dim, cells_for_dim, act_cell).sset


_KAN_CATALOG = ("point", "interval", "iso")

_M2_T = ((0, 2, 4), (1, 2, 3), (0, 1, 3), (1, 3, 4), (0, 1, 2))
_M2_EXTRA = ((0, 3, 4), (0, 1, 4))


def _kan_object(key, max_dim):
    if key == "point":
        return ss.standard_simplex(0)
    if key == "interval":
        return ss.standard_simplex(1)
    if key == "iso":
        return _iso_nerve(max_dim)
    raise ValueError(f"unknown Kan catalog key {key!r}; "
                     f"choose from {_KAN_CATALOG}")


def _mark_core(K, lean_flag=False):
    """(K,flat,sharp) -> (K,sharp,sharp) on a fixed underlying complex."""
    thin = frozenset(K.ids(2))
    src = dc.decorate(K, (), thin, thin if lean_flag else None)
    tgt = dc.decorate(K, K.ids(1), thin, thin if lean_flag else None)
    return src, tgt


def _build_generator(name, params):
    if name in ("M1", "S1", "A1"):
        if len(params) != 2:
            raise ValueError(f"{name} takes (n, i)")
        n, i = params
        if not (n >= 2 and 0 < i < n):
            raise ValueError(f"{name} needs n >= 2 and 0 < i < n, got {params}")
        tri = (i - 1, i, i + 1)
        lean = (tri,) if name == "A1" else None
        thin = () if name == "A1" else (tri,)
        src, incl = _horn_decor(n, i, thin=thin, lean=lean)
        tgt = dc.decorate_std(n, thin=thin, lean=lean)
        return src, tgt, incl
    if name in ("M2", "S2", "A2"):
        if params:
            raise ValueError(f"{name} takes no params")
        if name == "A2":
            src = dc.decorate_std(4, lean=_M2_T)
            tgt = dc.decorate_std(4, lean=_M2_T + _M2_EXTRA)
        else:
            src = dc.decorate_std(4, thin=_M2_T)
            tgt = dc.decorate_std(4, thin=_M2_T + _M2_EXTRA)
        return src, tgt, ss.identity_map(src.base)
    if name in ("M3", "A3"):
        if len(params) != 1:
            raise ValueError(f"{name} takes (n,)")
        n, = params
        if n < 2:
            raise ValueError(f"{name} needs n >= 2, got {n}")
        tri = (0, 1, n)
        lean = (tri,) if name == "A3" else None
        src, incl = _horn_decor(n, 0, marked=((0, 1),), thin=(tri,), lean=lean)
        tgt = dc.decorate_std(n, marked=((0, 1),), thin=(tri,), lean=lean)
        return src, tgt, incl
    if name in ("M4", "A4"):
        if params:
            raise ValueError(f"{name} takes no params")
        lean0 = frozenset() if name == "A4" else None
        src = dc.decorate(ss.standard_simplex(0), lean=lean0)
        tgt = dc.decorate(ss.standard_simplex(1), marked=[(1, 0)], lean=lean0)
        incl = ss.SSetMap(src.base, tgt.base, {(0, 0): ss.ns_from_chain(1, (0,))})
        return src, tgt, incl
    if name in ("MS1", "B1"):
        if params:
            raise ValueError(f"{name} takes no params")
        lean = ((0, 1, 2),) if name == "B1" else None
        src = dc.decorate_std(2, marked=((0, 1), (1, 2)),
                              thin=((0, 1, 2),), lean=lean)
        tgt = dc.decorate_std(2, marked=((0, 1), (1, 2), (0, 2)),
                              thin=((0, 1, 2),), lean=lean)
        return src, tgt, ss.identity_map(src.base)
    if name == "B2":
        if params:
            raise ValueError("B2 takes no params")
        src = dc.decorate_std(2, lean=((0, 1, 2),))
        tgt = dc.decorate_std(2, thin=((0, 1, 2),), lean=((0, 1, 2),))
        return src, tgt, ss.identity_map(src.base)
    if name in ("ME", "E"):
        if len(params) not in (1, 2):
            raise ValueError(f"{name} takes (key,) or (key, max_dim)")
        key = params[0]
        md = params[1] if len(params) == 2 else 3
        K = _kan_object(key, md)
        src, tgt = _mark_core(K, lean_flag=(name == "E"))
        return src, tgt, ss.identity_map(src.base)
    if name == "MSI":
        if len(params) != 1 or params[0] not in (1, 2):
            raise ValueError("MSI takes i in {1, 2}")
        i, = params
        faces = [tuple(v for v in range(4) if v != j) for j in range(4)]
        u_i = tuple(f for j, f in enumerate(faces) if j != i)
        src = dc.decorate_std(3, thin=u_i)
        tgt = dc.decorate_std(3, thin=faces)
        return src, tgt, ss.identity_map(src.base)
    if name == "C1":
        if len(params) != 1 or params[0] < 0:
            raise ValueError("C1 takes (n,) with n >= 0")
        n, = params
        B, incl = ss.boundary(n)
        return dc.decorate(B), dc.decorate(ss.standard_simplex(n)), incl
    if name == "C2":
        if params:
            raise ValueError("C2 takes no params")
        src = dc.std(1, FLAT, FLAT)
        tgt = dc.std(1, SHARP, SHARP)
        return src, tgt, ss.identity_map(src.base)
    if name == "C3":
        if params:
            raise ValueError("C3 takes no params")
        src = dc.std(2, FLAT, FLAT)
        tgt = dc.std(2, FLAT, SHARP)
        return src, tgt, ss.identity_map(src.base)
    if name == "S3":
        if len(params) != 1 or params[0] < 2:
            raise ValueError("S3 takes (n,) with n >= 2")
        n, = params
        return _build_s3(n)
    if name == "O1":
        if len(params) != 1 or params[0] < 2:
            raise ValueError("O1 takes (n,) with n >= 2")
        n, = params
        mk = ((n - 1, n),)
        th = ((0, n - 1, n),)
        src, incl = _horn_decor(n, n, marked=mk, thin=th)
        tgt = dc.decorate_std(n, marked=mk, thin=th)
        return src, tgt, incl
    if name == "O2":
        if params:
            raise ValueError("O2 takes no params")
        src, incl = _horn_decor(2, 2, marked=((1, 2), (0, 2)),
                                thin=((0, 1, 2),))
        tgt = dc.std(2, SHARP, SHARP)
        return src, tgt, incl
    if name == "O3":
        if params:
            raise ValueError("O3 takes no params")
        faces = [tuple(v for v in range(4) if v != j) for j in range(4)]
        u_3 = tuple(f for j, f in enumerate(faces) if j != 3)
        src = dc.decorate_std(3, marked=((2, 3),), thin=u_3)
        tgt = dc.decorate_std(3, marked=((2, 3),), thin=faces)
        return src, tgt, ss.identity_map(src.base)
    raise ValueError(f"unknown generator {name!r}")


def _s3_edge_map(H, incl, n):
    chain_of = {sid: ss.chain_tuple(n, incl.images[sid]) for sid in H.all_ids()}
    by_chain = {ch: sid for sid, ch in chain_of.items()}
    dom = ss.standard_simplex(1)
    imgs = {}
    for sid in dom.all_ids():
        ch = ss.chain_tuple(1, nd(*sid))
        imgs[sid] = NormalSimplex((), by_chain[ch])
    return ss.SSetMap(dom, H, imgs)


def _collapse_01(n):
    """Both quotients by the 01-edge, plus the induced horn inclusion."""
    H, incl = ss.horn(n, 0)
    pt = ss.standard_simplex(0)
    to_pt = ss.SSetMap(ss.standard_simplex(1), pt,
                       {sid: NormalSimplex(tuple(range(sid[0] - 1, -1, -1)),
                                           (0, 0))
                        for sid in ss.standard_simplex(1).all_ids()})
    e_h = _s3_edge_map(H, incl, n)
    e_d = ss.SSetMap(ss.standard_simplex(1), ss.standard_simplex(n),
                     {sid: ss.ns_from_chain(
                         n, ss.chain_tuple(1, nd(*sid)))
                      for sid in ss.standard_simplex(1).all_ids()})
    qh, qh_pt, qh_horn = ss.pushout(to_pt, e_h, n)
    qd, qd_pt, qd_std = ss.pushout(to_pt, e_d, n)
    med = ss.cocone_factor(qh_pt, qh_horn, qd_pt,
                           ss.compose_maps(incl, qd_std))
    if med is None:
        raise AssertionError("S3 quotient square did not commute")
    return qh, qd, med, qh_horn, qd_std


def _s3_generator(n):
    qh, qd, med, qh_horn, qd_std = _collapse_01(n)
    tri = ss.simplex_id(n, (0, 1, n))
    src_thin = []
    im = qh_horn.images.get(tri)
    if n >= 3 and im is not None and not im.word:
        src_thin.append(im.target)
    tgt_im = qd_std.images[tri]
    tgt_thin = [tgt_im.target] if not tgt_im.word else []
    src = dc.decorate(qh, thin=src_thin)
    tgt = dc.decorate(qd, thin=tgt_thin)
    return src, tgt, med


@lru_cache(maxsize=None)
def generator(name, *params):
    """The named catalog inclusion as a Generator."""
    if name == "S3":
        if len(params) != 1 or params[0] < 2:
            raise ValueError("S3 takes (n,) with n >= 2")
        src, tgt, u = _s3_generator(params[0])
    else:
        src, tgt, u = _build_generator(name, params)
    f = dc.decorated(u, src, tgt)
    if f is None:
        raise AssertionError(f"catalog inclusion {name}{params} "
                             "is not decoration preserving")
    return Generator(name, tuple(params), src, tgt, f)


def generator_from_label(label):
    name, params = parse_label(label)
    return generator(name, *params)


def family(kind, max_n=3):
    """The named generator family, instantiated up to dimension max_n."""
    gens = []
    if kind in ("MS", "MS+MSI"):
        gens += [generator("M1", n, i)
                 for n in range(2, max_n + 1) for i in range(1, n)]
        gens += [generator("M2")]
        gens += [generator("M3", n) for n in range(2, max_n + 1)]
        gens += [generator("M4"), generator("MS1")]
        gens += [generator("ME", "point"), generator("ME", "iso")]
        if kind == "MS+MSI":
            gens += [generator("MSI", 1), generator("MSI", 2)]
    elif kind == "S":
        gens += [generator("S1", n, i)
                 for n in range(2, max_n + 1) for i in range(1, n)]
        gens += [generator("S2")]
        gens += [generator("S3", n) for n in range(2, max_n + 1)]
    elif kind == "MB":
        gens += [generator("A1", n, i)
                 for n in range(2, max_n + 1) for i in range(1, n)]
        gens += [generator("A2")]
        gens += [generator("A3", n) for n in range(2, max_n + 1)]
        gens += [generator("A4"), generator("B1"), generator("B2")]
        gens += [generator("E", "point"), generator("E", "iso")]
    elif kind == "C":
        gens += [generator("C1", n) for n in range(0, max_n + 1)]
        gens += [generator("C2"), generator("C3")]
    else:
        raise ValueError(f"unknown family {kind!r}; "
                         "choose MS, MS+MSI, S, MB or C")
    return gens


# --------------------------------------------------------------------------
# pushouts and certificates


def decorated_pushout(gen, attach, X=None, max_dim=None):
    """Pushout of X along gen, attached by attach: gen.source -> X."""
    if X is None:
        X = attach.cod
    if attach.dom != gen.source or attach.cod != X:
        raise ValueError("attaching map must run gen.source -> X")
    if dc.decorated(attach.underlying, gen.source, X) is None:
        raise ValueError("attaching map does not preserve decorations")
    md = max_dim if max_dim is not None else max(X.base.max_dim,
                                                 gen.target.base.max_dim)
    P, _, _ = dc.decorated_pushout(attach, gen.incl, md)
    return P


def _pushout_with_legs(gen, attach, max_dim):
    return dc.decorated_pushout(attach, gen.incl, max_dim)


@dataclass(frozen=True)
class AnodyneCertificate:
    start: dc.MSS
    steps: tuple  # of (label, attach: DecoratedMap)
    max_dim: int  # ambient truncation every pushout is taken at


def replay(cert):
    """Run the certificate's pushouts; the final MSS, or CertificateError."""
    cur = cert.start
    for k, (label, attach) in enumerate(cert.steps):
        gen = generator_from_label(label)
        if attach.dom != gen.source:
            raise CertificateError(
                f"step {k}: attach domain is not the source of {label}")
        if attach.cod != cur:
            raise CertificateError(
                f"step {k}: attach codomain is not the current object")
        if dc.decorated(attach.underlying, gen.source, cur) is None:
            raise CertificateError(
                f"step {k}: attach does not preserve decorations")
        P, _, _ = _pushout_with_legs(gen, attach, cert.max_dim)
        cur = P
    return cur


def certificate_to_json(cert):
    return {
        "start": dc.mss_to_json(cert.start),
        "maxDim": cert.max_dim,
        "steps": [{"generator": label,
                   "attach": dc.decorated_map_to_json(attach)}
                  for label, attach in cert.steps],
    }


def certificate_from_json(obj):
    start = dc.mss_from_json(obj["start"])
    steps = []
    for st in obj["steps"]:
        parse_label(st["generator"])
        steps.append((st["generator"],
                      dc.decorated_map_from_json(st["attach"])))
    return AnodyneCertificate(start, tuple(steps), obj["maxDim"])


def verify_msi_pushout():
    """MSI(i) is the pushout of M2 along the collapse s_i, for i in {1, 2}."""
    m2 = generator("M2")
    counters = []
    for i in (1, 2):
        msi = generator("MSI", i)
        vf = (0, 1, 1, 2, 3) if i == 1 else (0, 1, 2, 2, 3)
        u = _std_vertex_map(4, 3, vf)
        attach = dc.decorated(u, m2.source, msi.source)
        if attach is None:
            counters.append({"instance": f"MSI({i})",
                             "reason": "collapse map not decorated"})
            continue
        P, lx, _ = _pushout_with_legs(m2, attach, 3)
        iso = dc.decorated_iso_check(P, msi.target)
        if iso is None:
            counters.append({"instance": f"MSI({i})",
                             "reason": "pushout not isomorphic to MSI target"})
            continue
        side = ss.compose_maps(lx.underlying, iso.underlying)
        if side.images != msi.incl.underlying.images:
            counters.append({"instance": f"MSI({i})",
                             "reason": "pushout leg differs from MSI inclusion"})
    return rp.report("anodyne-msi", 2, 2 - len(counters), 0, counters)


# --------------------------------------------------------------------------
# certificate search


def _state_sets(X, u, into):
    """Nondegenerate images in `into` of X's cells and decorations under u."""
    cells = set()
    for sid in X.base.all_ids():
        im = u.images[sid]
        if not im.word:
            cells.add(im.target)
    dec = []
    for group in (X.marked, X.thin,
                  X.thin if X.lean is None else X.lean):
        got = set()
        for t in group:
            im = u.images[t]
            if not im.word:
                got.add(im.target)
        dec.append(got)
    return ss.face_closure(into.base, cells), dec[0], dec[1], dec[2]


def _serialized_images(u):
    return tuple(sorted((sid, ns.word, ns.target)
                        for sid, ns in u.images.items()))


def _moves_for(gens, B):
    moves = []
    for gen in gens:
        for psi in dc.decorated_maps(gen.target, B):
            comp = ss.compose_maps(gen.incl.underlying, psi.underlying)
            req = _state_sets(gen.source, comp, B)
            add = _state_sets(gen.target, psi.underlying, B)
            if all(a <= r for a, r in zip(add, req)):
                continue
            moves.append((gen.label, _serialized_images(psi.underlying),
                          gen, psi, req, add))
    moves.sort(key=lambda m: (m[0], m[1]))
    return moves


def _materialize(f, path, max_dim):
    """Turn a subobject-level path into a replayable certificate, or None."""
    A, B = f.dom, f.cod
    cur, embed = A, f
    steps = []
    for gen, psi in path:
        rev = {}
        for sid in cur.base.all_ids():
            im = embed.underlying.images[sid]
            if im.word or im.target in rev:
                return None
            rev[im.target] = sid
        comp = ss.compose_maps(gen.incl.underlying, psi.underlying)
        imgs = {}
        for sid in gen.source.base.all_ids():
            ns = comp.images[sid]
            if ns.target not in rev:
                return None
            imgs[sid] = NormalSimplex(ns.word, rev[ns.target])
        u = ss.SSetMap(gen.source.base, cur.base, imgs)
        if ss.map_errors(u):
            return None
        attach = dc.decorated(u, gen.source, cur)
        if attach is None:
            return None
        P, lx, lb = _pushout_with_legs(gen, attach, max_dim)
        emb = {}
        for sid in cur.base.all_ids():
            im = lx.images[sid]
            if im.word:
                return None
            emb[im.target] = embed.underlying.images[sid]
        for sid in lb.underlying.dom.all_ids():
            im = lb.underlying.images[sid]
            if not im.word:
                want = psi.underlying.images[sid]
                if emb.get(im.target, want) != want:
                    return None
                emb[im.target] = want
        if set(emb) != set(P.base.all_ids()):
            return None
        eu = ss.SSetMap(P.base, B.base, emb)
        if ss.map_errors(eu):
            return None
        embed = dc.decorated(eu, P, B)
        if embed is None:
            return None
        steps.append((gen.label, attach))
        cur = P
    if dc.decorated_iso_check(cur, B) is None:
        return None
    return AnodyneCertificate(A, tuple(steps), max_dim)


def find_certificate(f, gens, max_steps=64, max_dim=4):
    """Bounded BFS for a certificate presenting the inclusion f: A -> B.

    Sound: any returned certificate replays to B.  Complete only within the
    step bound; None is absence of a found certificate, not a disproof.
    """
    B = f.cod
    if B.base.max_dim > max_dim:
        raise ValueError(f"codomain dimension {B.base.max_dim} "
                         f"exceeds max_dim {max_dim}")
    md = B.base.max_dim
    start = _state_sets(f.dom, f.underlying, B)
    goal = (frozenset(B.base.all_ids()), frozenset(B.marked),
            frozenset(B.thin),
            frozenset(B.thin if B.lean is None else B.lean))
    start = tuple(frozenset(c) for c in start)
    if start == goal:
        if dc.decorated_iso_check(f.dom, B) is None:
            return None
        return AnodyneCertificate(f.dom, (), md)
    moves = _moves_for(sorted(gens, key=lambda g: g.label), B)
    queue = deque([(start, ())])
    visited = {start}
    while queue:
        state, path = queue.popleft()
        if len(path) >= max_steps:
            continue
        for _, _, gen, psi, req, add in moves:
            if not all(r <= s for r, s in zip(req, state)):
                continue
            new = tuple(s | frozenset(a) for s, a in zip(state, add))
            if new == state:
                continue
            if new == goal:
                cert = _materialize(f, path + ((gen, psi),), md)
                if cert is not None:
                    return cert
                continue
            if new not in visited:
                visited.add(new)
                queue.append((new, path + ((gen, psi),)))
    return None


# --------------------------------------------------------------------------
# randomized forward certificates


def _forward_seeds():
    return [
        dc.std(2, FLAT, SHARP),
        dc.std(2, SHARP, SHARP),
        dc.decorate(ss.horn(2, 1)[0]),
        generator("MSI", 1).source,
        dc.std(3, FLAT, SHARP),
    ]


_FORWARD_POOL = ("M1(2,1)", "M1(3,1)", "MS1", "MSI(1)", "MSI(2)", "M4")


def random_forward_inclusion(seed, pool=_FORWARD_POOL):
    """Apply 1 or 2 random catalog pushouts to a random seed object.

    Returns the composite inclusion seed -> result.  Only generators that
    fit inside the seed's truncation are applied, so every step's target
    keeps a home in the final object.
    """
    rng = random.Random(seed)
    cur = rng.choice(_forward_seeds())
    embed = dc.identity_decorated(cur)
    n_steps = rng.choice((1, 1, 2))
    labels = list(pool)
    done = 0
    while done < n_steps:
        rng.shuffle(labels)
        placed = False
        for label in labels:
            gen = generator_from_label(label)
            if gen.target.base.max_dim > cur.base.max_dim:
                continue
            atts = dc.decorated_maps(gen.source, cur)
            if not atts:
                continue
            attach = rng.choice(atts)
            P, lx, _ = _pushout_with_legs(gen, attach, cur.base.max_dim)
            embed = dc.compose_decorated(embed, lx)
            cur = P
            placed = True
            break
        if not placed:
            break
        done += 1
    return embed


def verify_certificate_search(count=100, seed=7, pool=_FORWARD_POOL):
    """Forward-generate inclusions and re-derive certificates for them."""
    gens = [generator_from_label(lb) for lb in pool]
    counters = []
    for k in range(count):
        f = random_forward_inclusion((seed, k))
        cert = find_certificate(f, gens, max_steps=3,
                                max_dim=f.cod.base.max_dim)
        if cert is None:
            counters.append({"instance": k, "reason": "no certificate found"})
            continue
        final = replay(cert)
        if dc.decorated_iso_check(final, f.cod) is None:
            counters.append({"instance": k,
                             "reason": "replay does not match codomain"})
    return rp.report("anodyne-search", count, count - len(counters), 0,
                     counters)


# --------------------------------------------------------------------------
# decorated subcomplexes of a standard simplex


@dataclass(frozen=True)
class SimplexSubset:
    """A decorated subcomplex of Delta^n, stored as vertex tuples."""
    n: int
    faces: frozenset
    marked: frozenset
    thin: frozenset

    def contains_decorated(self, other_marked, other_thin, face):
        """Does the face, with dagger decorations, factor through self?"""
        fs = frozenset(face)
        for e in other_marked:
            if set(e) <= fs and e not in self.marked:
                return False
        for t in other_thin:
            if set(t) <= fs and t not in self.thin:
                return False
        return tuple(face) in self.faces


def _all_faces(n):
    out = []
    for k in range(1, n + 2):
        out += list(itertools.combinations(range(n + 1), k))
    return out


def simplex_subset(n, faces, marked=(), thin=()):
    """Downward closure of the listed faces, with decorations validated."""
    closed = set()
    for f in faces:
        f = tuple(sorted(set(f)))
        if not f or f[0] < 0 or f[-1] > n:
            raise ValueError(f"face {f} out of range for n={n}")
        for k in range(1, len(f) + 1):
            closed.update(itertools.combinations(f, k))
    marked = frozenset(tuple(e) for e in marked)
    thin = frozenset(tuple(t) for t in thin)
    for e in marked:
        if len(e) != 2 or e not in closed:
            raise ValueError(f"marked edge {e} not a present edge")
    for t in thin:
        if len(t) != 3 or t not in closed:
            raise ValueError(f"thin triangle {t} not a present triangle")
    return SimplexSubset(n, frozenset(closed), marked, thin)


def full_subset(n, marked=(), thin=()):
    return simplex_subset(n, [tuple(range(n + 1))], marked, thin)


def subset_mss(sub):
    """The SimplexSubset as an MSS, plus its face -> simplex-id table."""
    X = ss.standard_simplex(sub.n)
    keep = {ss.simplex_id(sub.n, f) for f in sub.faces}
    S, incl = ss.subcomplex(X, keep)
    face_id = {ss.chain_tuple(sub.n, incl.images[sid]): sid
               for sid in S.all_ids()}
    mk = [face_id[e] for e in sorted(sub.marked)]
    th = [face_id[t] for t in sorted(sub.thin)]
    return dc.decorate(S, mk, th), face_id


# --------------------------------------------------------------------------
# pivot filtrations


class PivotRefusal(ValueError):
    def __init__(self, violations):
        self.violations = tuple(violations)
        msg = "; ".join(f"clause {c}: {d}" for c, d in self.violations)
        super().__init__(msg)


def _check(violations, ok, clause, detail):
    if not ok:
        violations.append((clause, detail))


def _pivot_common(Z, dagger):
    if Z.n != dagger.n:
        raise ValueError("Z and the target must share a dimension")
    if dagger.faces != frozenset(_all_faces(dagger.n)):
        raise ValueError("the target must be the full simplex")
    if not Z.faces <= dagger.faces or not Z.marked <= dagger.marked \
            or not Z.thin <= dagger.thin:
        raise ValueError("Z must be a decorated subobject of the target")


def _face_decorated(Z, dagger, face):
    return Z.contains_decorated(dagger.marked, dagger.thin, face)


def pivot_filtration_inner(Z, dagger, s, U, V):
    """Certificate for Z -> Delta^n_dagger by inner attachment through s.

    Z and dagger are SimplexSubsets; dagger must be full.  Checks the five
    hypotheses of the inner pivot lemma and refuses, naming the clause,
    when one fails or when a pre-existing undecorated cell of Z cannot be
    repaired by catalog pushouts.
    """
    _pivot_common(Z, dagger)
    n = dagger.n
    U, V = tuple(sorted(set(U))), tuple(sorted(set(V)))
    viol = []
    _check(viol, U and V and s not in U + V and max(U) < s < min(V), 2,
           f"need nonempty U < pivot {s} < V away from the pivot")
    if viol:
        raise PivotRefusal(viol)
    for I in sorted(Z.faces):
        if s not in I:
            _check(viol, tuple(sorted(set(I) | {s})) in Z.faces, 1,
                   f"face {I} of Z does not extend through the pivot")
    for I in sorted(_all_faces(n)):
        if s in I and I not in Z.faces:
            _check(viol, I[0] < s < I[-1], 2,
                   f"missing simplex {I} has the pivot at an endpoint")
    for i in range(min(U), s):
        for j in range(s + 1, max(V) + 1):
            _check(viol, (i, s, j) in dagger.thin, 3,
                   f"triangle {(i, s, j)} is not thin")
    for e in sorted(dagger.marked - Z.marked):
        if e in Z.faces:
            continue
        u, v = e
        _check(viol, u in U and v in V, 2,
               f"marked edge {e} missing from Z does not join U to V")
        _check(viol, (u, s) in dagger.marked and (s, v) in dagger.marked, 4,
               f"edges {(u, s)} and {(s, v)} must both be marked")
    for t in sorted(dagger.thin - Z.thin):
        if s in t:
            continue
        theta = tuple(sorted(set(t) | {s}))
        for tri in itertools.combinations(theta, 3):
            _check(viol, tri in dagger.thin, 5,
                   f"face {tri} of {theta} is not thin")
    if viol:
        raise PivotRefusal(viol)
    plan, viol = _inner_plan(Z, dagger, n, s)
    if viol:
        raise PivotRefusal(viol)
    return _materialize_pivot(Z, plan, n)


def _inner_plan(Z, dagger, n, s):
    faces = set(Z.faces)
    marked = set(Z.marked)
    thin = set(Z.thin)
    plan = []
    viol = []
    for m in range(2, n + 1):
        layer = sorted(f for f in _all_faces(n)
                       if len(f) == m + 1 and s in f and f not in faces)
        for sigma in layer:
            p = sigma.index(s)
            if not 0 < p < m:
                viol.append((2, f"missing simplex {sigma} has the pivot "
                                "at an outer position"))
                return plan, viol
            if m >= 3:
                tri = (sigma[p - 1], s, sigma[p + 1])
                if tri not in thin:
                    viol.append((3, f"Z lacks the scaling of {tri} needed "
                                    f"to attach {sigma}"))
                    return plan, viol
            elif sigma not in dagger.thin:
                viol.append((3, f"attaching {sigma} scales it, but it is "
                                "not thin"))
                return plan, viol
            plan.append(("M1", (m, p), sigma))
            faces.add(sigma)
            faces.add(sigma[:p] + sigma[p + 1:])
            if m == 2:
                thin.add(sigma)
    for rho in sorted(dagger.thin - thin):
        if s in rho:
            viol.append((5, f"triangle {rho} contains the pivot but already "
                            "lies in Z without its scaling"))
            continue
        theta = tuple(sorted(set(rho) | {s}))
        p = theta.index(s)
        others = [theta[:j] + theta[j + 1:] for j in range(4) if j != p]
        missing = [o for o in others if o not in thin]
        if missing:
            viol.append((5, f"faces {missing} of {theta} are not yet thin"))
            continue
        plan.append(("MSI", (p,), theta))
        thin.add(rho)
    for e in sorted(dagger.marked - marked):
        u, v = e
        tri = (u, s, v)
        if tri not in thin or (u, s) not in marked or (s, v) not in marked:
            viol.append((4, f"cannot mark {e}: triangle {tri} must be thin "
                            "with both short edges marked"))
            continue
        plan.append(("MS1", (), tri))
        marked.add(e)
    return plan, viol


def pivot_filtration_outer(Z, dagger, V):
    """Certificate for Z -> Delta^n_dagger by outer attachment through n.

    The pivot is the final vertex and U = {0}.  Checks the six hypotheses
    of the outer pivot lemma; steps use the O1/O2/O3 shapes.
    """
    _pivot_common(Z, dagger)
    n = dagger.n
    V = tuple(sorted(set(V)))
    viol = []
    _check(viol, V and 0 < min(V) and max(V) < n, 2,
           f"need nonempty V strictly between 0 and {n}")
    if viol:
        raise PivotRefusal(viol)
    for I in sorted(Z.faces):
        if n not in I:
            _check(viol, tuple(sorted(set(I) | {n})) in Z.faces, 1,
                   f"face {I} of Z does not extend through the pivot")
    for face in (tuple(range(1, n + 1)),
                 tuple(v for v in range(n + 1) if v not in V)):
        _check(viol, _face_decorated(Z, dagger, face), 2,
               f"face {face} does not factor through Z with its decorations")
    for x in range(min(V), n):
        _check(viol, (0, x, n) in dagger.thin, 3,
               f"triangle {(0, x, n)} is not thin")
        _check(viol, (x, n) in dagger.marked, 4,
               f"edge {(x, n)} is not marked")
    for e in sorted(dagger.marked - Z.marked):
        a, b = e
        if b == n:
            continue
        _check(viol, a == 0 and b in V, 2,
               f"marked edge {e} missing from Z does not join 0 to V")
        _check(viol, (0, n) in dagger.marked, 5,
               f"marking {e} needs the long edge {(0, n)} marked")
    for t in sorted(dagger.thin - Z.thin):
        if n in t:
            continue
        _check(viol, t[0] == 0 and set(t) & set(V), 2,
               f"thin triangle {t} missing from Z does not join 0 to V")
        theta = tuple(sorted(set(t) | {n}))
        for tri in itertools.combinations(theta, 3):
            _check(viol, tri in dagger.thin, 6,
                   f"face {tri} of {theta} is not thin")
    if viol:
        raise PivotRefusal(viol)
    plan, viol = _outer_plan(Z, dagger, n)
    if viol:
        raise PivotRefusal(viol)
    return _materialize_pivot(Z, plan, n)


def _outer_plan(Z, dagger, n):
    faces = set(Z.faces)
    marked = set(Z.marked)
    thin = set(Z.thin)
    plan = []
    viol = []
    for m in range(2, n + 1):
        layer = sorted(f for f in _all_faces(n)
                       if len(f) == m + 1 and n in f and f not in faces)
        for sigma in layer:
            if sigma[0] != 0 or sigma[-1] != n:
                viol.append((2, f"missing simplex {sigma} does not run "
                                "from 0 to the pivot"))
                return plan, viol
            last = sigma[m - 1]
            if (last, n) not in marked:
                viol.append((4, f"edge {(last, n)} must be marked to "
                                f"attach {sigma}"))
                return plan, viol
            if m == 2:
                e = (0, sigma[1])
                if e in dagger.marked and e not in marked:
                    if (0, n) not in marked:
                        viol.append((5, f"cannot attach {sigma} with its "
                                        f"mark: {(0, n)} is not marked"))
                        return plan, viol
                    plan.append(("O2", (), sigma))
                    marked.add(e)
                else:
                    plan.append(("O1", (2,), sigma))
                faces.add(sigma)
                faces.add(sigma[:2])
                thin.add(sigma)
            else:
                tri = (0, last, n)
                if tri not in thin:
                    viol.append((3, f"Z lacks the scaling of {tri} needed "
                                    f"to attach {sigma}"))
                    return plan, viol
                plan.append(("O1", (m,), sigma))
                faces.add(sigma)
                faces.add(sigma[:m])
    for rho in sorted(dagger.thin - thin):
        if n in rho:
            viol.append((6, f"triangle {rho} contains the pivot but already "
                            "lies in Z without its scaling"))
            continue
        theta = tuple(sorted(set(rho) | {n}))
        others = [theta[:j] + theta[j + 1:] for j in range(4) if j != 3]
        missing = [o for o in others if o not in thin]
        if missing or (theta[2], n) not in marked:
            viol.append((6, f"faces {missing} of {theta} are not yet thin "
                            f"or {(theta[2], n)} is unmarked"))
            continue
        plan.append(("O3", (), theta))
        thin.add(rho)
    for e in sorted(dagger.marked - marked):
        viol.append((5, f"edge {e} already lies in Z; the outer filtration "
                        "cannot mark it"))
    return plan, viol


def _materialize_pivot(Z, plan, n):
    cur, face_id = subset_mss(Z)
    steps = []
    for kind, params, emb in plan:
        gen = generator(kind, *params)
        gn = gen.target.base.max_dim
        imgs = {}
        for sid in gen.source.base.all_ids():
            ch = ss.chain_tuple(gn, gen.incl.underlying.images[sid])
            imgs[sid] = NormalSimplex((), face_id[tuple(emb[c] for c in ch)])
        u = ss.SSetMap(gen.source.base, cur.base, imgs)
        attach = dc.decorated(u, gen.source, cur)
        if attach is None:
            raise CertificateError(
                f"internal: planned step {gen.label} at {emb} is invalid")
        P, lx, lb = _pushout_with_legs(gen, attach, n)
        new_id = {}
        for face, sid in face_id.items():
            im = lx.images[sid]
            if im.word:
                raise CertificateError("internal: pushout folded the base")
            new_id[face] = im.target
        for sid in gen.target.base.all_ids():
            im = lb.images[sid]
            if not im.word:
                ch = ss.chain_tuple(gn, nd(*sid))
                new_id[tuple(emb[c] for c in ch)] = im.target
        steps.append((gen.label, attach))
        cur, face_id = P, new_id
    return AnodyneCertificate(subset_mss(Z)[0], tuple(steps), n)
