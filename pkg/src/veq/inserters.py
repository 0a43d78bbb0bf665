"""Categories of pairs (object, comparison arrow) over a finite base.

Given a parallel pair of functors F, G between finite categories, the pair
category has objects (A, r: FA -> GA) and morphisms the base arrows whose
naturality square for the chosen r's commutes. The module builds that
category with its forgetful functor and inserted transformation, checks the
forgetful functor's standard properties, realizes the adjoint shift
isomorphisms, constructs depth-bounded free algebras for polynomial set
functors, and compares signature algebras against their pair-category
presentation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import cats
from . import finset as fs
from . import posets as po
from .errors import (
    AdjunctionInvalid,
    BoundsTooLarge,
    BoundTooLarge,
    DepthTooSmall,
    InvariantError,
    NotParallel,
    SourceMismatch,
)


def pair_label(obj: str, r: str) -> str:
    return f"({obj},{r})"


def _mor_label(base: str, src: str, tgt: str) -> str:
    return f"{base}|{src}>{tgt}"


@dataclass(frozen=True)
class InserterResult:
    """The pair category with its forgetful functor and inserted
    transformation; pairs maps each object label back to (base object, r)."""

    category: cats.FiniteCategory
    forgetful: cats.FunctorData
    inserted: cats.NatTransData
    pairs: dict[str, tuple[str, str]] = field(compare=False)
    lhs_functor: cats.FunctorData = field(compare=False, default=None)
    rhs_functor: cats.FunctorData = field(compare=False, default=None)


def _check_parallel(F: cats.FunctorData, G: cats.FunctorData):
    if F.source != G.source or F.target != G.target:
        raise NotParallel("the two functors must share source and target")


def inserter(F: cats.FunctorData, G: cats.FunctorData, name: str | None = None) -> InserterResult:
    """Build the category of pairs (A, r: FA -> GA) over the source of F."""
    _check_parallel(F, G)
    base, target = F.source, F.target
    pairs: dict[str, tuple[str, str]] = {}
    objects: list[str] = []
    for x in base.objects:
        for r in target.hom(F.obj_map[x], G.obj_map[x]):
            lab = pair_label(x, r)
            pairs[lab] = (x, r)
            objects.append(lab)
    morphisms: list[str] = []
    src: dict[str, str] = {}
    tgt: dict[str, str] = {}
    base_of: dict[str, str] = {}
    for p in objects:
        x, r = pairs[p]
        for q in objects:
            y, s = pairs[q]
            for d in base.hom(x, y):
                if target.comp[(G.mor_map[d], r)] == target.comp[(s, F.mor_map[d])]:
                    m = _mor_label(d, p, q)
                    morphisms.append(m)
                    src[m] = p
                    tgt[m] = q
                    base_of[m] = d
    ids = {p: _mor_label(base.ids[pairs[p][0]], p, p) for p in objects}
    comp: dict[tuple[str, str], str] = {}
    for after in morphisms:
        for first in morphisms:
            if src[after] != tgt[first]:
                continue
            d = base.comp[(base_of[after], base_of[first])]
            comp[(after, first)] = _mor_label(d, src[first], tgt[after])
    cat = cats.FiniteCategory(
        name or f"Ins({base.name},{target.name})",
        tuple(objects), tuple(morphisms), src, tgt, ids, comp,
    )
    forgetful = cats.FunctorData(cat, base, {p: pairs[p][0] for p in objects}, base_of)
    inserted = cats.NatTransData(
        cats.compose_functors(F, forgetful),
        cats.compose_functors(G, forgetful),
        {p: pairs[p][1] for p in objects},
    )
    return InserterResult(cat, forgetful, inserted, pairs, F, G)


def verify_forgetful(U: cats.FunctorData) -> dict[str, bool]:
    """Decide faithfulness, conservativity, amnesticity, and unique
    transportability by exhaustive search."""
    dom, cod = U.source, U.target
    faithful = True
    for x in dom.objects:
        for y in dom.objects:
            images = [U.mor_map[m] for m in dom.hom(x, y)]
            if len(set(images)) != len(images):
                faithful = False
    conservative = all(
        dom.is_iso(m) for m in dom.morphisms if cod.is_iso(U.mor_map[m])
    )
    dom_ids = set(dom.ids.values())
    cod_ids = set(cod.ids.values())
    amnestic = all(
        m in dom_ids
        for m in dom.morphisms
        if dom.is_iso(m) and U.mor_map[m] in cod_ids
    )
    transportable = True
    for x in dom.objects:
        ux = U.obj_map[x]
        for b in cod.objects:
            for h in cod.hom(ux, b):
                if not cod.is_iso(h):
                    continue
                lifts = [
                    (y, m)
                    for y in dom.objects
                    if U.obj_map[y] == b
                    for m in dom.hom(x, y)
                    if U.mor_map[m] == h and dom.is_iso(m)
                ]
                if len(lifts) != 1:
                    transportable = False
    return {
        "faithful": faithful,
        "conservative": conservative,
        "amnestic": amnestic,
        "uniquely_transportable": transportable,
    }


def mediating_functor(ins: InserterResult, V: cats.FunctorData, alpha: cats.NatTransData) -> cats.FunctorData:
    """The unique functor W into the pair category with U o W = V and the
    inserted transformation restricting to alpha along W."""
    F, G = ins.lhs_functor, ins.rhs_functor
    if not cats.functors_equal(alpha.source, cats.compose_functors(F, V)):
        raise SourceMismatch("transformation must start at the first functor composed with the cone")
    if not cats.functors_equal(alpha.target, cats.compose_functors(G, V)):
        raise SourceMismatch("transformation must end at the second functor composed with the cone")
    shape = V.source
    obj_map = {x: pair_label(V.obj_map[x], alpha.at(x)) for x in shape.objects}
    mor_map = {
        m: _mor_label(V.mor_map[m], obj_map[shape.src[m]], obj_map[shape.tgt[m]])
        for m in shape.morphisms
    }
    return cats.FunctorData(shape, ins.category, obj_map, mor_map)


def verify_universal_property(ins: InserterResult, V: cats.FunctorData, alpha: cats.NatTransData) -> bool:
    """Check the mediating functor exists, satisfies both equations, and is
    the only functor that does. Exhaustive over all functors, so keep the
    cone's shape small."""
    W = mediating_functor(ins, V, alpha)
    U, lam = ins.forgetful, ins.inserted

    def fits(cand: cats.FunctorData) -> bool:
        if not cats.functors_equal(cats.compose_functors(U, cand), V):
            return False
        return all(lam.at(cand.obj_map[x]) == alpha.at(x) for x in V.source.objects)

    if not fits(W):
        return False
    matches = sum(1 for cand in cats.all_functors(V.source, ins.category) if fits(cand))
    return matches == 1


def _concrete_functor(src_ins: InserterResult, tgt_ins: InserterResult, obj_map: dict[str, str]) -> cats.FunctorData:
    """A functor between pair categories acting as the identity on base
    arrows; the object map decides everything else."""
    C = src_ins.category
    mor_map = {
        m: _mor_label(src_ins.forgetful.mor_map[m], obj_map[C.src[m]], obj_map[C.tgt[m]])
        for m in C.morphisms
    }
    return cats.FunctorData(C, tgt_ins.category, obj_map, mor_map)


def shift_left(F: cats.FunctorData, G: cats.FunctorData, adj: cats.AdjunctionData) -> tuple[cats.FunctorData, cats.FunctorData]:
    """For H left adjoint to G, the pair category for (F, G) is concretely
    isomorphic to the one for (H o F, identity); returns the isomorphism pair
    (there, back)."""
    _check_parallel(F, G)
    if not cats.functors_equal(adj.right, G):
        raise AdjunctionInvalid("the adjunction's right side must be the second functor")
    H = adj.left
    base, target = F.source, F.target
    ins_fg = inserter(F, G)
    ins_shift = inserter(cats.compose_functors(H, F), cats.identity_functor(base))
    there_obj = {}
    for p, (x, r) in ins_fg.pairs.items():
        there_obj[p] = pair_label(x, base.comp[(adj.counit.at(x), H.mor_map[r])])
    there = _concrete_functor(ins_fg, ins_shift, there_obj)
    back_obj = {}
    for p, (x, r) in ins_shift.pairs.items():
        eta = adj.unit.at(F.obj_map[x])
        back_obj[p] = pair_label(x, target.comp[(G.mor_map[r], eta)])
    back = _concrete_functor(ins_shift, ins_fg, back_obj)
    return there, back


def shift_right(F: cats.FunctorData, G: cats.FunctorData, adj: cats.AdjunctionData) -> tuple[cats.FunctorData, cats.FunctorData]:
    """For H right adjoint to F, the pair category for (F, G) is concretely
    isomorphic to the one for (identity, H o G)."""
    _check_parallel(F, G)
    if not cats.functors_equal(adj.left, F):
        raise AdjunctionInvalid("the adjunction's left side must be the first functor")
    H = adj.right
    base, target = F.source, F.target
    ins_fg = inserter(F, G)
    ins_shift = inserter(cats.identity_functor(base), cats.compose_functors(H, G))
    there_obj = {}
    for p, (x, r) in ins_fg.pairs.items():
        there_obj[p] = pair_label(x, base.comp[(H.mor_map[r], adj.unit.at(x))])
    there = _concrete_functor(ins_fg, ins_shift, there_obj)
    back_obj = {}
    for p, (x, s) in ins_shift.pairs.items():
        eps = adj.counit.at(G.obj_map[x])
        back_obj[p] = pair_label(x, target.comp[(eps, F.mor_map[s])])
    back = _concrete_functor(ins_shift, ins_fg, back_obj)
    return there, back


def inserter_poset(f: po.MonotoneMap, g: po.MonotoneMap) -> tuple[po.Poset, po.MonotoneMap]:
    """Pointwise oracle for thin bases: the sub-poset of elements where f
    lands below g, with its inclusion."""
    if f.dom != g.dom or f.cod != g.cod:
        raise NotParallel("monotone comparison needs a parallel pair")
    keep = [x for x in f.dom.elements if f.cod.leq(f(x), g(x))]
    return po.sub_poset(f.dom, keep, name=f"{f.dom.name}|ins")


# --- limit existence and creation -----------------------------------------


def _is_product_cone(C: cats.FiniteCategory, x: str, y: str, apex: str, p1: str, p2: str) -> bool:
    for z in C.objects:
        for f in C.hom(z, x):
            for g in C.hom(z, y):
                mediators = [
                    u for u in C.hom(z, apex)
                    if C.comp[(p1, u)] == f and C.comp[(p2, u)] == g
                ]
                if len(mediators) != 1:
                    return False
    return True


def binary_product_cone(C: cats.FiniteCategory, x: str, y: str):
    """First product cone over (x, y) in object order, or None."""
    for apex in C.objects:
        for p1 in C.hom(apex, x):
            for p2 in C.hom(apex, y):
                if _is_product_cone(C, x, y, apex, p1, p2):
                    return apex, p1, p2
    return None


def has_binary_products(C: cats.FiniteCategory) -> bool:
    return all(
        binary_product_cone(C, x, y) is not None
        for x in C.objects for y in C.objects
    )


def preserves_binary_products(F: cats.FunctorData) -> bool:
    """Every product cone the source has must map to a product cone."""
    C, D = F.source, F.target
    for x in C.objects:
        for y in C.objects:
            cone = binary_product_cone(C, x, y)
            if cone is None:
                continue
            apex, p1, p2 = cone
            if not _is_product_cone(
                D, F.obj_map[x], F.obj_map[y],
                F.obj_map[apex], F.mor_map[p1], F.mor_map[p2],
            ):
                return False
    return True


def _is_equalizer_cone(C: cats.FiniteCategory, f: str, g: str, m: str) -> bool:
    if C.comp[(f, m)] != C.comp[(g, m)]:
        return False
    x = C.src[f]
    for z in C.objects:
        for h in C.hom(z, x):
            if C.comp[(f, h)] != C.comp[(g, h)]:
                continue
            mediators = [u for u in C.hom(z, C.src[m]) if C.comp[(m, u)] == h]
            if len(mediators) != 1:
                return False
    return True


def equalizer_cone(C: cats.FiniteCategory, f: str, g: str):
    """First equalizing arrow of the parallel pair (f, g), or None."""
    if C.src[f] != C.src[g] or C.tgt[f] != C.tgt[g]:
        raise NotParallel("equalizer needs a parallel pair")
    for e in C.objects:
        for m in C.hom(e, C.src[f]):
            if _is_equalizer_cone(C, f, g, m):
                return e, m
    return None


def has_equalizers(C: cats.FiniteCategory) -> bool:
    for f in C.morphisms:
        for g in C.morphisms:
            if f == g or C.src[f] != C.src[g] or C.tgt[f] != C.tgt[g]:
                continue
            if equalizer_cone(C, f, g) is None:
                return False
    return True


def preserves_equalizers(F: cats.FunctorData) -> bool:
    C, D = F.source, F.target
    for f in C.morphisms:
        for g in C.morphisms:
            if f == g or C.src[f] != C.src[g] or C.tgt[f] != C.tgt[g]:
                continue
            cone = equalizer_cone(C, f, g)
            if cone is None:
                continue
            if not _is_equalizer_cone(D, F.mor_map[f], F.mor_map[g], F.mor_map[cone[1]]):
                return False
    return True


def limit_creation_report(F: cats.FunctorData, G: cats.FunctorData) -> dict:
    """When the base has binary products (or equalizers) and the second
    functor preserves them, the pair category must have them too and the
    forgetful functor must preserve them. Reports hypothesis and outcome
    per limit kind; outcome is None when the hypothesis fails."""
    _check_parallel(F, G)
    ins = inserter(F, G)
    U = ins.forgetful
    base = F.source
    report: dict[str, dict] = {}
    prod_hyp = has_binary_products(base) and preserves_binary_products(G)
    prod = {"hypothesis": prod_hyp, "created": None}
    if prod_hyp:
        prod["created"] = has_binary_products(ins.category) and preserves_binary_products(U)
    report["products"] = prod
    eq_hyp = has_equalizers(base) and preserves_equalizers(G)
    eq = {"hypothesis": eq_hyp, "created": None}
    if eq_hyp:
        eq["created"] = has_equalizers(ins.category) and preserves_equalizers(U)
    report["equalizers"] = eq
    return report


# --- polynomial set functors and bounded free algebras ---------------------


@dataclass(frozen=True)
class PolyFunctor:
    """A formal sum of powers of the argument: each summand is a pair
    (constructor label, exponent). The single unnamed summand ("", 1) is the
    identity functor, whose elements pass through without wrapping; every
    named summand wraps its arguments as cons(a0,...,ak)."""

    summands: tuple[tuple[str, int], ...]

    def __post_init__(self):
        labels = [c for c, _ in self.summands]
        if len(set(labels)) != len(labels):
            raise InvariantError("summand labels must be distinct")
        for c, k in self.summands:
            if k < 0:
                raise InvariantError("negative exponent in polynomial")
            if c == "" and (k != 1 or len(self.summands) != 1):
                raise InvariantError("the unnamed summand is reserved for the bare identity polynomial")

    def term(self, cons: str, args: tuple[str, ...]) -> str:
        if cons == "":
            return args[0]
        if not args:
            return cons
        return f"{cons}({','.join(args)})"

    def on_set(self, X: fs.FinSetObj) -> fs.FinSetObj:
        labels = []
        for cons, k in self.summands:
            for args in itertools.product(X.elements, repeat=k):
                labels.append(self.term(cons, args))
        return fs.FinSetObj(tuple(labels))

    def on_map(self, f: fs.FinFunction) -> fs.FinFunction:
        mapping = {}
        for cons, k in self.summands:
            for args in itertools.product(f.dom.elements, repeat=k):
                mapping[self.term(cons, args)] = self.term(cons, tuple(f(a) for a in args))
        return fs.fin_function(self.on_set(f.dom), self.on_set(f.cod), mapping)


IDENTITY_POLY = PolyFunctor((("", 1),))


def parse_poly(text: str) -> PolyFunctor:
    """Parse e.g. "succ:X + zero:1" or "pair:X^2"; a bare "X" alone is the
    identity polynomial, other unnamed summands get labels in0, in1, ..."""
    raw = [part.strip() for part in text.split("+")]
    if not raw or any(not p for p in raw):
        raise InvariantError(f"bad polynomial {text!r}")
    summands = []
    for i, part in enumerate(raw):
        if ":" in part:
            name, body = (s.strip() for s in part.split(":", 1))
        else:
            name, body = None, part
        if body == "1":
            k = 0
        elif body == "X":
            k = 1
        elif body.startswith("X^"):
            k = int(body[2:])
            if k < 0:
                raise InvariantError(f"bad power in {part!r}")
        else:
            raise InvariantError(f"bad summand {part!r}")
        if name is None:
            name = "" if (body == "X" and len(raw) == 1) else f"in{i}"
        summands.append((name, k))
    return PolyFunctor(tuple(summands))


@dataclass(frozen=True)
class FreeFAlgebra:
    """Depth-bounded free algebra for a polynomial functor: carrier holds all
    terms over the generators up to the depth; the structure map is partial
    exactly at the frontier (terms whose construction would exceed it)."""

    functor: PolyFunctor
    generators: fs.FinSetObj
    depth: int
    carrier: fs.FinSetObj
    insertion: fs.FinFunction
    applied: fs.FinSetObj
    structure: dict[str, str] = field(compare=False)
    frontier: frozenset[str] = field(default_factory=frozenset)
    recipes: dict[str, tuple[str, tuple[str, ...]]] = field(compare=False, default_factory=dict)

    def apply(self, label: str) -> str:
        if label in self.frontier:
            raise DepthTooSmall(f"applying the structure map to {label!r} exceeds depth {self.depth}")
        if label not in self.structure:
            raise InvariantError(f"{label!r} is not in the functor's image of the carrier")
        return self.structure[label]

    def structure_function(self) -> fs.FinFunction:
        if self.frontier:
            raise DepthTooSmall("structure map is partial at the frontier; raise the depth")
        return fs.fin_function(self.applied, self.carrier, dict(self.structure))


def free_f_algebra(functor: PolyFunctor, generators: fs.FinSetObj, depth: int, cap: int = 5000) -> FreeFAlgebra:
    """Terms over the generators, grown breadth-first one constructor layer
    per depth step. Earlier layers are a prefix of later ones, so depth d
    embeds in depth d+1 by carrier inclusion."""
    if depth < 0:
        raise InvariantError("depth must be non-negative")
    seen: list[str] = list(generators.elements)
    index = set(seen)
    recipes: dict[str, tuple[str, tuple[str, ...]]] = {}
    for _ in range(depth):
        layer = []
        for cons, k in functor.summands:
            for args in itertools.product(seen, repeat=k):
                t = functor.term(cons, args)
                if t not in index:
                    index.add(t)
                    layer.append(t)
                    recipes[t] = (cons, args)
        seen.extend(layer)
        if len(seen) > cap:
            raise BoundsTooLarge(f"free carrier exceeds {cap} terms")
    carrier = fs.FinSetObj(tuple(seen))
    applied = functor.on_set(carrier)
    structure = {lab: lab for lab in applied.elements if lab in index}
    frontier = frozenset(lab for lab in applied.elements if lab not in index)
    insertion = fs.FinFunction(generators, carrier, generators.elements)
    return FreeFAlgebra(
        functor, generators, depth, carrier, insertion, applied,
        structure, frontier, recipes,
    )


def free_universal_map(free: FreeFAlgebra, target: fs.FinFunction, gen_map: fs.FinFunction, exhaustive: bool = False) -> fs.FinFunction:
    """The unique map into a finite algebra (target: F(B) -> B) extending
    gen_map and commuting with the structure maps wherever the free one is
    defined. With exhaustive=True, uniqueness is re-checked by enumeration."""
    functor = free.functor
    B = target.cod
    expected = functor.on_set(B)
    if target.dom.elements != expected.elements:
        raise SourceMismatch("target structure map must start at the functor applied to its codomain")
    if gen_map.dom.elements != free.generators.elements:
        raise SourceMismatch("generator assignment must start at the generators")
    if gen_map.cod != B:
        raise SourceMismatch("generator assignment must land in the target carrier")
    values: dict[str, str] = {}
    for t in free.carrier.elements:
        if t in free.recipes:
            cons, args = free.recipes[t]
            values[t] = target(functor.term(cons, tuple(values[a] for a in args)))
        else:
            values[t] = gen_map(t)
    h = fs.fin_function(free.carrier, B, values)
    for e in free.applied.elements:
        if e in free.frontier:
            continue
        cons, args = free.recipes.get(e, (None, None))
        if cons is None:
            # the functor image of a carrier element that is itself a
            # generator only happens for the identity polynomial
            mapped = values[e]
        else:
            mapped = target(functor.term(cons, tuple(values[a] for a in args)))
        if values[free.structure[e]] != mapped:
            raise InvariantError("constructed map fails the homomorphism law")
    if exhaustive:
        count = 0
        for combo in itertools.product(B.elements, repeat=len(free.carrier)):
            cand = dict(zip(free.carrier.elements, combo))
            if any(cand[g] != gen_map(g) for g in free.generators.elements):
                continue
            good = True
            for e in free.applied.elements:
                if e in free.frontier:
                    continue
                cons, args = free.recipes.get(e, ("", (e,)))
                if cand[free.structure[e]] != target(functor.term(cons, tuple(cand[a] for a in args))):
                    good = False
                    break
            if good:
                count += 1
        if count != 1:
            raise InvariantError(f"universal map is not unique: {count} candidates")
    return h


# --- signature algebras as a pair category ---------------------------------


@dataclass(frozen=True)
class SortedSignature:
    """Finitely many sorts and operation symbols; each symbol carries an
    argument word over the sorts and a result sort."""

    sorts: tuple[str, ...]
    ops: tuple[tuple[str, tuple[str, ...], str], ...]

    def __post_init__(self):
        if not self.sorts or len(set(self.sorts)) != len(self.sorts):
            raise InvariantError("sorts must be non-empty and distinct")
        names = [n for n, _, _ in self.ops]
        if len(set(names)) != len(names):
            raise InvariantError("operation names must be distinct")
        for n, word, res in self.ops:
            if res not in self.sorts or any(s not in self.sorts for s in word):
                raise InvariantError(f"operation {n} uses unknown sorts")


class _FamilyCatBuilder:
    """Accumulates a category whose objects are tuples of finite sets and
    whose morphisms are componentwise functions, stored as output tables."""

    def __init__(self):
        self.objects: dict[str, tuple[fs.FinSetObj, ...]] = {}
        self.entries: dict[str, tuple[str, str, tuple[tuple[str, ...], ...]]] = {}
        self.rev: dict[tuple, str] = {}
        self.counts: dict[tuple[str, str], int] = {}

    def add_object(self, name: str, comps) -> str:
        comps = tuple(comps)
        if name in self.objects:
            if self.objects[name] != comps:
                raise InvariantError(f"object name collision at {name}")
        else:
            self.objects[name] = comps
        return name

    def morphism(self, src: str, tgt: str, tables) -> str:
        tables = tuple(tuple(t) for t in tables)
        key = (src, tgt, tables)
        if key in self.rev:
            return self.rev[key]
        k = self.counts.get((src, tgt), 0)
        self.counts[(src, tgt)] = k + 1
        label = f"{src}>{tgt}#{k}"
        self.rev[key] = label
        self.entries[label] = key
        return label

    def identity(self, name: str) -> str:
        return self.morphism(name, name, tuple(c.elements for c in self.objects[name]))

    def add_all_functions(self, src: str, tgt: str):
        pools = [
            list(itertools.product(t.elements, repeat=len(s)))
            for s, t in zip(self.objects[src], self.objects[tgt])
        ]
        for tables in itertools.product(*pools):
            self.morphism(src, tgt, tables)

    def compose_key(self, after: str, first: str) -> tuple:
        asrc, atgt, a_tab = self.entries[after]
        fsrc, ftgt, f_tab = self.entries[first]
        if ftgt != asrc:
            raise InvariantError("composing non-composable family maps")
        mid = self.objects[asrc]
        out = tuple(
            tuple(a_tab[i][mid[i].elements.index(v)] for v in f_tab[i])
            for i in range(len(mid))
        )
        return (fsrc, atgt, out)

    def close(self, cap: int):
        for name in self.objects:
            self.identity(name)
        changed = True
        while changed:
            changed = False
            labels = list(self.entries)
            for after in labels:
                for first in labels:
                    if self.entries[first][1] != self.entries[after][0]:
                        continue
                    key = self.compose_key(after, first)
                    if key not in self.rev:
                        self.morphism(*key)
                        changed = True
            if len(self.entries) > cap:
                raise BoundTooLarge(f"category closure exceeds {cap} morphisms")

    def build(self, name: str) -> cats.FiniteCategory:
        objects = tuple(self.objects)
        morphs = tuple(self.entries)
        src = {m: self.entries[m][0] for m in morphs}
        tgt = {m: self.entries[m][1] for m in morphs}
        ids = {x: self.identity(x) for x in objects}
        comp = {}
        for after in morphs:
            for first in morphs:
                if src[after] != tgt[first]:
                    continue
                comp[(after, first)] = self.rev[self.compose_key(after, first)]
        return cats.FiniteCategory(name, objects, morphs, src, tgt, ids, comp)


def _family_name(prefix: str, comps) -> str:
    return f"{prefix}[{';'.join(','.join(c.elements) for c in comps)}]"


def _word_product(comps: tuple[fs.FinSetObj, ...]) -> fs.FinSetObj:
    if len(comps) == 0:
        return fs.FinSetObj(("()",))
    if len(comps) == 1:
        return comps[0]
    combos = itertools.product(*(c.elements for c in comps))
    return fs.FinSetObj(tuple(fs.tuple_label(c) for c in combos))


def _mapped_word_label(word_comps, combo, tables_by_sort, sort_index, word):
    if len(word) == 0:
        return "()"
    outs = []
    for j, s in enumerate(word):
        comp = word_comps[j]
        outs.append(tables_by_sort[sort_index[s]][comp.elements.index(combo[j])])
    if len(word) == 1:
        return outs[0]
    return fs.tuple_label(outs)


def sigma_alg_as_inserter(sig: SortedSignature, size_bound: int,
                          base_cap: int = 4000, sigma_cap: int = 4000,
                          direct_cap: int = 4000) -> dict:
    """Build the category of signature algebras with carriers of size up to
    the bound twice: directly, and as the pair category for the arity
    functors (argument-tuple family vs result family). Returns the matching
    report with the object bijection."""
    if size_bound < 0:
        raise InvariantError("size bound must be non-negative")
    sorts = sig.sorts
    sort_index = {s: i for i, s in enumerate(sorts)}

    families: dict[str, tuple[fs.FinSetObj, ...]] = {}
    for sizes in itertools.product(range(size_bound + 1), repeat=len(sorts)):
        comps = tuple(
            fs.FinSetObj(tuple(f"{s}{i}" for i in range(k)))
            for s, k in zip(sorts, sizes)
        )
        families[f"A({','.join(map(str, sizes))})"] = comps

    planned = sum(
        _hom_size(x, y) for x in families.values() for y in families.values()
    )
    if planned > base_cap:
        raise BoundTooLarge(f"base category would hold {planned} morphisms (cap {base_cap})")
    base_b = _FamilyCatBuilder()
    for name, comps in families.items():
        base_b.add_object(name, comps)
    for xn in families:
        for yn in families:
            base_b.add_all_functions(xn, yn)
    base_b.close(base_cap * 2)
    base_cat = base_b.build("SetFam")

    def shape_src(comps):
        return tuple(
            _word_product(tuple(comps[sort_index[s]] for s in word))
            for _, word, _ in sig.ops
        )

    def shape_tgt(comps):
        return tuple(comps[sort_index[res]] for _, _, res in sig.ops)

    sigma_b = _FamilyCatBuilder()
    src_name: dict[str, str] = {}
    tgt_name: dict[str, str] = {}
    for name, comps in families.items():
        src_name[name] = sigma_b.add_object(_family_name("S", shape_src(comps)), shape_src(comps))
        tgt_name[name] = sigma_b.add_object(_family_name("S", shape_tgt(comps)), shape_tgt(comps))
    planned = sum(
        _hom_size(sigma_b.objects[src_name[xn]], sigma_b.objects[tgt_name[yn]])
        for xn in families for yn in families
    )
    if planned > sigma_cap:
        raise BoundTooLarge(f"operation-family category would hold {planned} morphisms (cap {sigma_cap})")
    seen_pairs = set()
    for xn in families:
        for yn in families:
            pair = (src_name[xn], tgt_name[yn])
            if pair not in seen_pairs:
                seen_pairs.add(pair)
                sigma_b.add_all_functions(*pair)

    src_mor: dict[str, str] = {}
    tgt_mor: dict[str, str] = {}
    for d in base_cat.morphisms:
        xn, yn, tables = base_b.entries[d]
        xcomps = families[xn]
        out_src = []
        for _, word, _ in sig.ops:
            word_comps = tuple(xcomps[sort_index[s]] for s in word)
            table = tuple(
                _mapped_word_label(word_comps, combo, tables, sort_index, word)
                for combo in (itertools.product(*(c.elements for c in word_comps))
                              if word else [()])
            )
            out_src.append(table)
        src_mor[d] = sigma_b.morphism(src_name[xn], src_name[yn], out_src)
        out_tgt = [tables[sort_index[res]] for _, _, res in sig.ops]
        tgt_mor[d] = sigma_b.morphism(tgt_name[xn], tgt_name[yn], out_tgt)
    sigma_b.close(sigma_cap * 4)
    sigma_cat = sigma_b.build("OpFam")

    arg_functor = cats.FunctorData(
        base_cat, sigma_cat, {xn: src_name[xn] for xn in families}, src_mor)
    res_functor = cats.FunctorData(
        base_cat, sigma_cat, {xn: tgt_name[xn] for xn in families}, tgt_mor)
    ins = inserter(arg_functor, res_functor, name="Ins(args,results)")

    # direct side: objects are (family, one output table per operation)
    alg_objects: list[str] = []
    alg_content: dict[str, tuple[str, tuple]] = {}
    content_index: dict[tuple[str, tuple], str] = {}
    for xn, comps in families.items():
        pools = []
        for (_, word, res), dom_obj in zip(sig.ops, shape_src(comps)):
            res_obj = comps[sort_index[res]]
            pools.append(list(itertools.product(res_obj.elements, repeat=len(dom_obj))))
        for k, tables in enumerate(itertools.product(*pools)):
            name = f"{xn}!{k}"
            alg_objects.append(name)
            alg_content[name] = (xn, tuple(tables))
            content_index[(xn, tuple(tables))] = name
            if len(alg_objects) > direct_cap:
                raise BoundTooLarge(f"more than {direct_cap} algebras at this bound")

    alg_morphs: list[str] = []
    asrc: dict[str, str] = {}
    atgt: dict[str, str] = {}
    abase: dict[str, str] = {}
    for d in base_cat.morphisms:
        xn, yn, tables = base_b.entries[d]
        xcomps, ycomps = families[xn], families[yn]
        for an in alg_objects:
            if alg_content[an][0] != xn:
                continue
            for bn in alg_objects:
                if alg_content[bn][0] != yn:
                    continue
                if _is_family_hom(sig, sort_index, xcomps, ycomps,
                                  alg_content[an][1], alg_content[bn][1], tables):
                    m = f"{an}>{bn}|{d}"
                    alg_morphs.append(m)
                    asrc[m], atgt[m], abase[m] = an, bn, d
    aids = {an: f"{an}>{an}|{base_cat.ids[alg_content[an][0]]}" for an in alg_objects}
    acomp = {}
    for after in alg_morphs:
        for first in alg_morphs:
            if asrc[after] != atgt[first]:
                continue
            d = base_cat.comp[(abase[after], abase[first])]
            acomp[(after, first)] = f"{asrc[first]}>{atgt[after]}|{d}"
    direct_cat = cats.FiniteCategory(
        "SigAlg", tuple(alg_objects), tuple(alg_morphs), asrc, atgt, aids, acomp)

    # match the two sides
    object_map: dict[str, str] = {}
    matched = len(ins.category.objects) == len(alg_objects)
    for p, (xn, r) in ins.pairs.items():
        tables = sigma_b.entries[r][2]
        direct = content_index.get((xn, tables))
        if direct is None:
            matched = False
            break
        object_map[p] = direct
    if matched and len(set(object_map.values())) != len(object_map):
        matched = False
    mor_matched = matched and len(ins.category.morphisms) == len(alg_morphs)
    if mor_matched:
        direct_set = set(alg_morphs)
        for m in ins.category.morphisms:
            d = ins.forgetful.mor_map[m]
            lifted = f"{object_map[ins.category.src[m]]}>{object_map[ins.category.tgt[m]]}|{d}"
            if lifted not in direct_set:
                mor_matched = False
                break
    return {
        "matched": bool(matched and mor_matched),
        "object_count": len(alg_objects),
        "morphism_count": len(alg_morphs),
        "object_map": object_map,
        "ins_category": ins.category,
        "direct_category": direct_cat,
        "forgetful": ins.forgetful,
    }


def _hom_size(xcomps, ycomps) -> int:
    total = 1
    for xc, yc in zip(xcomps, ycomps):
        total *= len(yc) ** len(xc)
    return total


def _is_family_hom(sig, sort_index, xcomps, ycomps, x_tables, y_tables, map_tables) -> bool:
    for op_idx, (_, word, res) in enumerate(sig.ops):
        word_comps = tuple(xcomps[sort_index[s]] for s in word)
        combos = list(itertools.product(*(c.elements for c in word_comps))) if word else [()]
        y_dom = _word_product(tuple(ycomps[sort_index[s]] for s in word))
        y_lookup = dict(zip(y_dom.elements, y_tables[op_idx]))
        res_idx = sort_index[res]
        for i, combo in enumerate(combos):
            out = x_tables[op_idx][i]
            mapped_out = map_tables[res_idx][xcomps[res_idx].elements.index(out)]
            mapped_combo = _mapped_word_label(word_comps, combo, map_tables, sort_index, word)
            if mapped_out != y_lookup[mapped_combo]:
                return False
    return True
