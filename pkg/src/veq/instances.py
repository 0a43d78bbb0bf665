"""Computational-category instances plugging concrete engines into the
abstract equation calculus: finite sets, finite groups, finite algebras,
finite posets, and finite categories.

Each instance normalizes its canonical-subobject values (inclusions) into
plain morphisms on input, so general solutions flow back through compose,
factor, and the rest without ceremony.
"""

from __future__ import annotations

import itertools

from . import algebras as alg
from . import cats
from . import finset as fs
from . import groups as grp
from . import posets as po
from .equations import CompCategory
from .errors import CodMismatch, InvariantError, NotParallel


class FinSetCat(CompCategory):
    """Finite sets and functions; every capability is available."""

    name = "FinSet"

    has_equalizers = True
    has_intersections = True
    has_products = True
    has_coequalizers = True
    has_coproducts = True
    has_cokernel_pairs = True
    has_pullbacks = True
    has_mono_test = True
    has_factorization = True

    @staticmethod
    def _m(f) -> fs.FinFunction:
        return f.inclusion if isinstance(f, fs.SubobjectMono) else f

    def source(self, f):
        return self._m(f).dom

    def target(self, f):
        return self._m(f).cod

    def compose(self, g, f):
        return fs.compose(self._m(g), self._m(f))

    def identity(self, obj):
        return fs.identity(obj)

    def morphisms_equal(self, f, g) -> bool:
        return self._m(f) == self._m(g)

    def equalizer(self, p, q):
        return fs.equalizer(self._m(p), self._m(q))

    def intersection(self, monos):
        out = monos[0]
        for m in monos[1:]:
            out = fs.intersect([out, m])
        return out

    def product(self, objs):
        return fs.product(objs)

    def coequalizer(self, p, q):
        return fs.coequalizer(self._m(p), self._m(q))

    def coproduct(self, objs):
        return fs.coproduct(objs)

    def cokernel_pair(self, f):
        return fs.cokernel_pair(self._m(f))

    def pullback(self, f, m):
        sq = fs.pullback(self._m(f), self._m(m))
        return sq.to_f_dom, sq.to_m_dom

    def is_mono(self, f) -> bool:
        return self._m(f).is_injective()

    def factor(self, f, g):
        return fs.factor_through(self._m(f), self._m(g))

    def hom(self, x, a):
        return fs.all_functions(x, a)


class FinGrpCat(CompCategory):
    """Finite groups and homomorphisms. Equalizers are agreement subgroups;
    coequalizers quotient by the normal closure of pointwise differences.
    No coproducts or cokernel pairs here.
    """

    name = "FinGrp"

    has_equalizers = True
    has_intersections = True
    has_coequalizers = True
    has_mono_test = True
    has_factorization = True

    def source(self, f: grp.GroupHom):
        return f.dom

    def target(self, f: grp.GroupHom):
        return f.cod

    def compose(self, g, f):
        return grp.compose_homs(g, f)

    def identity(self, obj: grp.Group):
        return grp.identity_hom(obj)

    def morphisms_equal(self, f, g) -> bool:
        return f.dom == g.dom and f.cod == g.cod and f.table == g.table

    def equalizer(self, p: grp.GroupHom, q: grp.GroupHom):
        if p.dom != q.dom or p.cod != q.cod:
            raise NotParallel("equalizer needs a parallel pair")
        members = tuple(x for x in p.dom.elements if p(x) == q(x))
        _, incl = grp.sub_group(p.dom, members)
        return incl

    def intersection(self, monos):
        target = monos[0].cod
        members = set(target.elements)
        for m in monos:
            if m.cod != target:
                raise CodMismatch("intersection needs a common target")
            members &= set(m.image())
        _, incl = grp.sub_group(target, [x for x in target.elements if x in members])
        return incl

    def coequalizer(self, p: grp.GroupHom, q: grp.GroupHom):
        if p.dom != q.dom or p.cod != q.cod:
            raise NotParallel("coequalizer needs a parallel pair")
        G = p.cod
        diffs = [G.mul(p(x), G.inverse(q(x))) for x in p.dom.elements]
        normal = grp.normal_closure(G, [d for d in diffs if d != G.identity])
        _, proj = grp.quotient_group(G, normal)
        return proj

    def is_mono(self, f: grp.GroupHom) -> bool:
        return f.is_injective()

    def factor(self, f: grp.GroupHom, g: grp.GroupHom):
        if f.cod != g.cod:
            raise CodMismatch("factorization needs a common target")
        if not set(f.image()) <= set(g.image()):
            return None
        if g.is_injective():
            back = {g(x): x for x in g.dom.elements}
            return grp.GroupHom(f.dom, g.dom, tuple(back[f(x)] for x in f.dom.elements))
        for h in grp.all_homs(f.dom, g.dom):
            if grp.compose_homs(g, h).table == f.table:
                return h
        return None

    def hom(self, x: grp.Group, a: grp.Group):
        return grp.all_homs(x, a)


class FinAlgCat(CompCategory):
    """Finite algebras over one signature. Coequalizers quotient by the
    congruence the pointwise pairs generate; coproducts are absent (free
    products outgrow any finite carrier).
    """

    name = "FinAlg"

    has_equalizers = True
    has_intersections = True
    has_products = True
    has_coequalizers = True
    has_pullbacks = True
    has_mono_test = True
    has_factorization = True

    def source(self, f: alg.AlgHom):
        return f.dom

    def target(self, f: alg.AlgHom):
        return f.cod

    def compose(self, g, f):
        return alg.compose_alg_homs(g, f)

    def identity(self, obj: alg.FiniteAlgebra):
        return alg.identity_alg_hom(obj)

    def morphisms_equal(self, f, g) -> bool:
        return f.dom == g.dom and f.cod == g.cod and f.table == g.table

    def equalizer(self, p: alg.AlgHom, q: alg.AlgHom):
        if p.dom != q.dom or p.cod != q.cod:
            raise NotParallel("equalizer needs a parallel pair")
        members = tuple(x for x in p.dom.carrier.elements if p(x) == q(x))
        _, incl = alg.sub_algebra(p.dom, members)
        return incl

    def intersection(self, monos):
        target = monos[0].cod
        members = set(target.carrier.elements)
        for m in monos:
            if m.cod != target:
                raise CodMismatch("intersection needs a common target")
            members &= set(m.image())
        _, incl = alg.sub_algebra(
            target, [x for x in target.carrier.elements if x in members]
        )
        return incl

    def product(self, objs):
        return alg.product_algebra(list(objs))

    def coequalizer(self, p: alg.AlgHom, q: alg.AlgHom):
        if p.dom != q.dom or p.cod != q.cod:
            raise NotParallel("coequalizer needs a parallel pair")
        B = p.cod
        partition = alg.congruence_closure(
            B, [(p(x), q(x)) for x in p.dom.carrier.elements]
        )
        _, proj = alg.quotient_algebra(B, partition)
        return proj

    def pullback(self, f: alg.AlgHom, m: alg.AlgHom):
        if f.cod != m.cod:
            raise CodMismatch("pullback needs a cospan")
        prod = alg.product_algebra([f.dom, m.dom])
        members = [
            x
            for x in prod.obj.carrier.elements
            if f(prod.projections[0](x)) == m(prod.projections[1](x))
        ]
        _, incl = alg.sub_algebra(prod.obj, members)
        return (
            alg.compose_alg_homs(prod.projections[0], incl),
            alg.compose_alg_homs(prod.projections[1], incl),
        )

    def is_mono(self, f: alg.AlgHom) -> bool:
        return f.is_injective()

    def factor(self, f: alg.AlgHom, g: alg.AlgHom):
        if f.cod != g.cod:
            raise CodMismatch("factorization needs a common target")
        if not set(f.image()) <= set(g.image()):
            return None
        if g.is_injective():
            back = {g(x): x for x in g.dom.carrier.elements}
            try:
                return alg.AlgHom(
                    f.dom, g.dom, tuple(back[f(x)] for x in f.dom.carrier.elements)
                )
            except InvariantError:
                return None
        for h in alg.all_alg_homs(f.dom, g.dom):
            if alg.compose_alg_homs(g, h).table == f.table:
                return h
        return None

    def hom(self, x: alg.FiniteAlgebra, a: alg.FiniteAlgebra):
        return alg.all_alg_homs(x, a)


class FinPosetCat(CompCategory):
    """Finite posets and monotone maps. Coequalizers collapse the generated
    equivalence and then any order-cycles it creates, until antisymmetry
    holds.
    """

    name = "FinPoset"

    has_equalizers = True
    has_intersections = True
    has_products = True
    has_coequalizers = True
    has_coproducts = True
    has_cokernel_pairs = True
    has_pullbacks = True
    has_mono_test = True
    has_factorization = True

    def source(self, f: po.MonotoneMap):
        return f.dom

    def target(self, f: po.MonotoneMap):
        return f.cod

    def compose(self, g, f):
        return po.compose_maps(g, f)

    def identity(self, obj: po.Poset):
        return po.identity_map(obj)

    def morphisms_equal(self, f, g) -> bool:
        return f.dom == g.dom and f.cod == g.cod and f.table == g.table

    def equalizer(self, p: po.MonotoneMap, q: po.MonotoneMap):
        if p.dom != q.dom or p.cod != q.cod:
            raise NotParallel("equalizer needs a parallel pair")
        members = tuple(x for x in p.dom.elements if p(x) == q(x))
        _, incl = po.sub_poset(p.dom, members)
        return incl

    def intersection(self, monos):
        target = monos[0].cod
        members = set(target.elements)
        for m in monos:
            if m.cod != target:
                raise CodMismatch("intersection needs a common target")
            members &= set(m.image())
        _, incl = po.sub_poset(target, [x for x in target.elements if x in members])
        return incl

    def product(self, objs):
        return _poset_product(list(objs))

    def coequalizer(self, p: po.MonotoneMap, q: po.MonotoneMap):
        if p.dom != q.dom or p.cod != q.cod:
            raise NotParallel("coequalizer needs a parallel pair")
        return _poset_collapse(p.cod, list(zip(p.table, q.table)))

    def coproduct(self, objs):
        return _poset_coproduct(list(objs))

    def cokernel_pair(self, f: po.MonotoneMap):
        cop = self.coproduct([f.cod, f.cod])
        i0, i1 = cop.coprojections
        c = self.coequalizer(self.compose(i0, f), self.compose(i1, f))
        return self.compose(c, i0), self.compose(c, i1)

    def pullback(self, f: po.MonotoneMap, m: po.MonotoneMap):
        if f.cod != m.cod:
            raise CodMismatch("pullback needs a cospan")
        prod = _poset_product([f.dom, m.dom])
        members = [
            x
            for x in prod.obj.elements
            if f(prod.projections[0](x)) == m(prod.projections[1](x))
        ]
        _, incl = po.sub_poset(prod.obj, members)
        return (
            po.compose_maps(prod.projections[0], incl),
            po.compose_maps(prod.projections[1], incl),
        )

    def is_mono(self, f: po.MonotoneMap) -> bool:
        return f.is_injective()

    def factor(self, f: po.MonotoneMap, g: po.MonotoneMap):
        if f.cod != g.cod:
            raise CodMismatch("factorization needs a common target")
        pools = []
        for x in f.dom.elements:
            pool = [y for y in g.dom.elements if g(y) == f(x)]
            if not pool:
                return None
            pools.append(pool)
        for table in itertools.product(*pools):
            try:
                return po.MonotoneMap(f.dom, g.dom, table)
            except InvariantError:
                continue
        return None

    def hom(self, x: po.Poset, a: po.Poset):
        return po.all_monotone_maps(x, a)


class _PosetProductResult:
    def __init__(self, obj, projections, unpack):
        self.obj = obj
        self.projections = projections
        self._unpack = unpack

    def tuple_of(self, legs):
        dom = legs[0].dom
        table = tuple(
            fs.tuple_label([leg(x) for leg in legs]) for x in dom.elements
        )
        return po.MonotoneMap(dom, self.obj, table)


def _poset_product(objs: list[po.Poset]) -> _PosetProductResult:
    combos = list(itertools.product(*(P.elements for P in objs)))
    labels = [fs.tuple_label(c) for c in combos]
    unpack = dict(zip(labels, combos))
    rel = frozenset(
        (a, b)
        for a in labels
        for b in labels
        if all(P.leq(unpack[a][i], unpack[b][i]) for i, P in enumerate(objs))
    )
    obj = po.Poset(fs.tuple_label([P.name for P in objs]), tuple(labels), rel)
    projections = tuple(
        po.MonotoneMap(obj, objs[i], tuple(unpack[l][i] for l in labels))
        for i in range(len(objs))
    )
    return _PosetProductResult(obj, projections, unpack)


class _PosetCoproductResult:
    def __init__(self, obj, coprojections):
        self.obj = obj
        self.coprojections = coprojections

    def cotuple_of(self, legs):
        cod = legs[0].cod
        table = []
        for leg in legs:
            table.extend(leg.table)
        return po.MonotoneMap(self.obj, cod, tuple(table))


def _poset_coproduct(objs: list[po.Poset]) -> _PosetCoproductResult:
    labels: list[str] = []
    rel: set[tuple[str, str]] = set()
    coprojections = []
    for i, P in enumerate(objs):
        tagged = {x: fs.tag_label(i, x) for x in P.elements}
        labels.extend(tagged[x] for x in P.elements)
        rel.update((tagged[a], tagged[b]) for a, b in P.rel)
    obj = po.Poset("+".join(P.name for P in objs), tuple(labels), frozenset(rel))
    offset = 0
    for P in objs:
        coprojections.append(
            po.MonotoneMap(P, obj, tuple(obj.elements[offset + k] for k in range(len(P))))
        )
        offset += len(P)
    return _PosetCoproductResult(obj, tuple(coprojections))


def _poset_collapse(P: po.Poset, pairs) -> po.MonotoneMap:
    """Quotient of P identifying the pairs, then repeatedly merging any
    order-cycles among classes until the induced relation is a partial
    order. Returns the canonical surjection.
    """
    uf = fs._UnionFind(P.elements)
    for a, b in pairs:
        uf.union(a, b)
    while True:
        classes: dict[str, list[str]] = {}
        for x in P.elements:
            classes.setdefault(uf.find(x), []).append(x)
        roots = list(classes)
        reach = {r: {r} for r in roots}
        edges = {(uf.find(a), uf.find(b)) for a, b in P.rel}
        changed = True
        while changed:
            changed = False
            for a, b in edges:
                for r in roots:
                    if a in reach[r] and b not in reach[r]:
                        reach[r].add(b)
                        changed = True
        merged = False
        for r in roots:
            for s in reach[r]:
                if s != r and r in reach[s] and uf.find(r) != uf.find(s):
                    uf.union(r, s)
                    merged = True
        if not merged:
            rep = {
                root: min(members, key=P.elements.index)
                for root, members in classes.items()
            }
            order = sorted(rep.values(), key=P.elements.index)
            rel = frozenset((rep[a], rep[b]) for a in roots for b in reach[a])
            Q = po.Poset(f"{P.name}/~", tuple(order), rel)
            return po.MonotoneMap(P, Q, tuple(rep[uf.find(x)] for x in P.elements))


class FinCatCat(CompCategory):
    """Finite categories and functors. Equalizers are agreement
    subcategories; coequalizers are not offered (quotient categories need
    free composition). Hom enumeration is exponential; keep sources tiny.
    """

    name = "FinCat"

    has_equalizers = True
    has_intersections = True
    has_products = True
    has_pullbacks = True
    has_mono_test = True
    has_factorization = True

    def source(self, f: cats.FunctorData):
        return f.source

    def target(self, f: cats.FunctorData):
        return f.target

    def compose(self, g, f):
        return cats.compose_functors(g, f)

    def identity(self, obj: cats.FiniteCategory):
        return cats.identity_functor(obj)

    def morphisms_equal(self, f, g) -> bool:
        return cats.functors_equal(f, g)

    def equalizer(self, p: cats.FunctorData, q: cats.FunctorData):
        if p.source != q.source or p.target != q.target:
            raise NotParallel("equalizer needs a parallel pair")
        C = p.source
        objs = [x for x in C.objects if p.obj_map[x] == q.obj_map[x]]
        oset = set(objs)
        morphs = [
            m
            for m in C.morphisms
            if C.src[m] in oset and C.tgt[m] in oset and p.mor_map[m] == q.mor_map[m]
        ]
        return _subcategory_inclusion(C, objs, morphs)

    def intersection(self, monos):
        C = monos[0].target
        objs = set(C.objects)
        morphs = set(C.morphisms)
        for m in monos:
            if m.target != C:
                raise CodMismatch("intersection needs a common target")
            objs &= {m.obj_map[x] for x in m.source.objects}
            morphs &= {m.mor_map[f] for f in m.source.morphisms}
        return _subcategory_inclusion(
            C,
            [x for x in C.objects if x in objs],
            [f for f in C.morphisms if f in morphs],
        )

    def product(self, objs):
        return _cat_product(list(objs))

    def pullback(self, f: cats.FunctorData, m: cats.FunctorData):
        if f.target != m.target:
            raise CodMismatch("pullback needs a cospan")
        prod = _cat_product([f.source, m.source])
        p0, p1 = prod.projections
        objs = [
            x
            for x in prod.obj.objects
            if f.obj_map[p0.obj_map[x]] == m.obj_map[p1.obj_map[x]]
        ]
        oset = set(objs)
        morphs = [
            mm
            for mm in prod.obj.morphisms
            if prod.obj.src[mm] in oset
            and prod.obj.tgt[mm] in oset
            and f.mor_map[p0.mor_map[mm]] == m.mor_map[p1.mor_map[mm]]
        ]
        incl = _subcategory_inclusion(prod.obj, objs, morphs)
        return (
            cats.compose_functors(p0, incl),
            cats.compose_functors(p1, incl),
        )

    def is_mono(self, f: cats.FunctorData) -> bool:
        return len(set(f.obj_map.values())) == len(f.source.objects) and len(
            set(f.mor_map.values())
        ) == len(f.source.morphisms)

    def factor(self, f: cats.FunctorData, g: cats.FunctorData):
        if f.target != g.target:
            raise CodMismatch("factorization needs a common target")
        for h in cats.all_functors(f.source, g.source):
            if cats.functors_equal(cats.compose_functors(g, h), f):
                return h
        return None

    def hom(self, x: cats.FiniteCategory, a: cats.FiniteCategory):
        return cats.all_functors(x, a)


def _subcategory_inclusion(
    C: cats.FiniteCategory, objs: list[str], morphs: list[str]
) -> cats.FunctorData:
    oset, mset = set(objs), set(morphs)
    for x in objs:
        if C.ids[x] not in mset:
            raise InvariantError("subcategory misses an identity")
    for g in morphs:
        for f in morphs:
            if C.src[g] == C.tgt[f] and C.comp[(g, f)] not in mset:
                raise InvariantError("subcategory not closed under composition")
    sub = cats.FiniteCategory(
        f"{C.name}|sub",
        tuple(objs),
        tuple(morphs),
        {m: C.src[m] for m in morphs},
        {m: C.tgt[m] for m in morphs},
        {x: C.ids[x] for x in objs},
        {
            (g, f): C.comp[(g, f)]
            for g in morphs
            for f in morphs
            if C.src[g] == C.tgt[f]
        },
    )
    return cats.FunctorData(sub, C, {x: x for x in objs}, {m: m for m in morphs})


class _CatProductResult:
    def __init__(self, obj, projections, pair_obj, pair_mor):
        self.obj = obj
        self.projections = projections
        self._pair_obj = pair_obj
        self._pair_mor = pair_mor

    def tuple_of(self, legs):
        dom = legs[0].source
        obj_map = {
            x: self._pair_obj[tuple(leg.obj_map[x] for leg in legs)] for x in dom.objects
        }
        mor_map = {
            m: self._pair_mor[tuple(leg.mor_map[m] for leg in legs)]
            for m in dom.morphisms
        }
        return cats.FunctorData(dom, self.obj, obj_map, mor_map)


def _cat_product(objs: list[cats.FiniteCategory]) -> _CatProductResult:
    obj_combos = list(itertools.product(*(C.objects for C in objs)))
    mor_combos = list(itertools.product(*(C.morphisms for C in objs)))
    pair_obj = {c: fs.tuple_label(c) for c in obj_combos}
    pair_mor = {c: fs.tuple_label(c) for c in mor_combos}
    src = {
        pair_mor[c]: pair_obj[tuple(objs[i].src[c[i]] for i in range(len(objs)))]
        for c in mor_combos
    }
    tgt = {
        pair_mor[c]: pair_obj[tuple(objs[i].tgt[c[i]] for i in range(len(objs)))]
        for c in mor_combos
    }
    ids = {
        pair_obj[c]: pair_mor[tuple(objs[i].ids[c[i]] for i in range(len(objs)))]
        for c in obj_combos
    }
    comp = {}
    for g in mor_combos:
        for f in mor_combos:
            if all(objs[i].src[g[i]] == objs[i].tgt[f[i]] for i in range(len(objs))):
                comp[(pair_mor[g], pair_mor[f])] = pair_mor[
                    tuple(objs[i].comp[(g[i], f[i])] for i in range(len(objs)))
                ]
    P = cats.FiniteCategory(
        fs.tuple_label([C.name for C in objs]),
        tuple(pair_obj[c] for c in obj_combos),
        tuple(pair_mor[c] for c in mor_combos),
        src,
        tgt,
        ids,
        comp,
    )
    projections = tuple(
        cats.FunctorData(
            P,
            objs[i],
            {pair_obj[c]: c[i] for c in obj_combos},
            {pair_mor[c]: c[i] for c in mor_combos},
        )
        for i in range(len(objs))
    )
    return _CatProductResult(P, projections, pair_obj, pair_mor)
