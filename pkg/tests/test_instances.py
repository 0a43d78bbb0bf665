import random

import pytest

from veq import algebras as alg
from veq import cats
from veq import posets as po
from veq.equations import (
    CoEquationSystem,
    Equation,
    EquationSystem,
    general_cosolution,
    general_solution,
)
from veq.errors import CapabilityMissing, NotParallel
from veq.instances import FinAlgCat, FinCatCat, FinPosetCat
from veq.theories import Signature

AC = FinAlgCat()
PC = FinPosetCat()
CC = FinCatCat()

SL = Signature((("meet", 2),))


def sl(name, labels):
    return alg.make_algebra(name, SL, labels, {"meet": min})


def test_algebra_equalizer_is_agreement_subalgebra():
    A = sl("A", ["0", "1", "2"])
    B = sl("B", ["0", "1"])
    p = alg.alg_hom(A, B, {"0": "0", "1": "0", "2": "1"})
    q = alg.alg_hom(A, B, {"0": "0", "1": "1", "2": "1"})
    v = AC.equalizer(p, q)
    assert v.dom.carrier.elements == ("0", "2")
    with pytest.raises(NotParallel):
        AC.equalizer(p, alg.identity_alg_hom(A))


def test_algebra_general_solution_through_calculus():
    A = sl("A", ["0", "1", "2"])
    B = sl("B", ["0", "1"])
    p = alg.alg_hom(A, B, {"0": "0", "1": "0", "2": "1"})
    q = alg.alg_hom(A, B, {"0": "0", "1": "1", "2": "1"})
    r = alg.alg_hom(A, B, {"0": "0", "1": "0", "2": "0"})
    s = alg.alg_hom(A, B, {"0": "0", "1": "0", "2": "1"})
    E = EquationSystem(AC, (Equation(p, q), Equation(r, s)))
    v = general_solution(E)
    assert v.dom.carrier.elements == ("0",)


def test_algebra_coequalizer_universal():
    A = sl("A", ["0", "1"])
    B = sl("B", ["0", "1", "2"])
    f = alg.alg_hom(A, B, {"0": "0", "1": "1"})
    g = alg.alg_hom(A, B, {"0": "0", "1": "2"})
    c = AC.coequalizer(f, g)
    assert AC.morphisms_equal(AC.compose(c, f), AC.compose(c, g))
    assert c.is_surjective()
    assert len(c.cod.carrier) == 2  # 1 and 2 merge


def test_algebra_coequalizer_congruence_not_just_partition():
    A = sl("pt", ["x"])
    B = sl("B", ["0", "1", "2"])
    # identifying the endpoints of the chain drags the middle in:
    # min(1,0) ~ min(1,2) forces 0 ~ 1
    f = alg.alg_hom(A, B, {"x": "0"})
    g = alg.alg_hom(A, B, {"x": "2"})
    c = AC.coequalizer(f, g)
    assert len(c.cod.carrier) == 1
    # identifying adjacent elements is already compatible with meet
    f2 = alg.alg_hom(A, B, {"x": "1"})
    g2 = alg.alg_hom(A, B, {"x": "2"})
    c2 = AC.coequalizer(f2, g2)
    assert len(c2.cod.carrier) == 2
    assert c2("1") == c2("2") and c2("0") != c2("1")


def test_algebra_product_and_pullback():
    A = sl("A", ["0", "1"])
    prod = AC.product([A, A])
    assert len(prod.obj.carrier) == 4
    diag = prod.tuple_of([alg.identity_alg_hom(A), alg.identity_alg_hom(A)])
    assert diag.table == ("(0,0)", "(1,1)")
    B = sl("B", ["0", "1", "2"])
    f = alg.alg_hom(B, A, {"0": "0", "1": "0", "2": "1"})
    m = alg.alg_hom(A, A, {"0": "0", "1": "1"})
    p0, p1 = AC.pullback(f, m)
    assert p0.dom is p1.dom
    for x in p0.dom.carrier.elements:
        assert f(p0(x)) == m(p1(x))


def test_algebra_cosolution_via_iterated_coequalizers():
    B = sl("B", ["0", "1", "2", "3"])
    A = sl("pt", ["x"])
    eqs = (
        Equation(alg.alg_hom(A, B, {"x": "0"}), alg.alg_hom(A, B, {"x": "1"})),
        Equation(alg.alg_hom(A, B, {"x": "2"}), alg.alg_hom(A, B, {"x": "3"})),
    )
    c = general_cosolution(CoEquationSystem(AC, eqs))
    assert c("0") == c("1") and c("2") == c("3") and c("0") != c("2")


def test_algebra_capability_flags():
    assert not AC.has_coproducts and not AC.has_cokernel_pairs
    with pytest.raises(CapabilityMissing):
        AC.coproduct([sl("A", ["0"])])


def test_poset_equalizer_and_factor():
    P = po.chain("P", ["a", "b", "c"])
    f = po.identity_map(P)
    g = po.MonotoneMap(P, P, ("a", "b", "b"))
    v = PC.equalizer(f, g)
    assert v.dom.elements == ("a", "b")
    w = PC.factor(v, po.identity_map(P))
    assert w is not None


def test_poset_product_is_componentwise_order():
    P = po.chain("P", ["0", "1"])
    prod = PC.product([P, P])
    assert len(prod.obj) == 4
    assert prod.obj.leq("(0,0)", "(1,1)")
    assert not prod.obj.leq("(0,1)", "(1,0)")
    legs = [po.identity_map(P), po.MonotoneMap(P, P, ("0", "0"))]
    t = prod.tuple_of(legs)
    assert t.table == ("(0,0)", "(1,0)")


def test_poset_coequalizer_collapses_cycles():
    P = po.chain("P", ["0", "1", "2"])
    pt = po.antichain("pt", ["*"])
    c = PC.coequalizer(
        po.MonotoneMap(pt, P, ("0",)), po.MonotoneMap(pt, P, ("2",))
    )
    # merging the endpoints of a chain traps the middle in an order cycle
    assert len(c.cod) == 1
    # merging incomparable elements collapses nothing else
    V = po.poset_from_cover("V", ["a", "b", "c"], [("a", "b"), ("a", "c")])
    c2 = PC.coequalizer(
        po.MonotoneMap(pt, V, ("b",)), po.MonotoneMap(pt, V, ("c",))
    )
    assert len(c2.cod) == 2
    assert c2("b") == c2("c")


def test_poset_coequalizer_universal():
    rng = random.Random(5)
    for _ in range(20):
        P = po.random_poset(rng, rng.randint(1, 4), "P")
        Q = po.random_poset(rng, rng.randint(1, 4), "Q")
        maps = po.all_monotone_maps(Q, P)
        if len(maps) < 2:
            continue
        f, g = rng.choice(maps), rng.choice(maps)
        c = PC.coequalizer(f, g)
        assert PC.morphisms_equal(PC.compose(c, f), PC.compose(c, g))
        # universal: any map coequalizing f,g factors through c
        T = po.chain("T", ["t0", "t1"])
        for a in po.all_monotone_maps(P, T):
            if po.compose_maps(a, f) != po.compose_maps(a, g):
                continue
            table = {}
            ok = True
            for x in P.elements:
                k = c(x)
                if k in table and table[k] != a(x):
                    ok = False
                table[k] = a(x)
            assert ok
            h = po.monotone(c.cod, T, table)
            assert po.compose_maps(h, c) == a


def test_poset_cokernel_pair_detects_epis():
    P = po.chain("P", ["0", "1"])
    Q = po.chain("Q", ["a", "b", "c"])
    m = po.MonotoneMap(P, Q, ("a", "b"))
    p, q = PC.cokernel_pair(m)
    assert p.table != q.table  # not epi: the pair separates the escape
    e = po.MonotoneMap(Q, P, ("0", "0", "1"))
    p2, q2 = PC.cokernel_pair(e)
    assert p2.table == q2.table  # epi: cokernel pair degenerates


def test_cat_equalizer_agreement_subcategory():
    C = po.to_category(po.chain("P", ["0", "1"]))
    D = po.to_category(po.chain("Q", ["a", "b", "c"]))
    fs_ = cats.all_functors(C, D)
    F = next(f for f in fs_ if f.obj_map == {"0": "a", "1": "b"})
    G = next(f for f in fs_ if f.obj_map == {"0": "a", "1": "c"})
    v = CC.equalizer(F, G)
    assert v.source.objects == ("0",)
    E = EquationSystem(CC, (Equation(F, G),))
    assert general_solution(E).source.objects == ("0",)


def test_cat_product_projections_and_tupling():
    C = po.to_category(po.chain("P", ["0", "1"]))
    prod = CC.product([C, C])
    assert len(prod.obj.objects) == 4
    d = prod.tuple_of([CC.identity(C), CC.identity(C)])
    assert d.obj_map["0"] == "(0,0)"
    p0, p1 = prod.projections
    assert CC.morphisms_equal(CC.compose(p0, d), CC.identity(C))
    assert CC.morphisms_equal(CC.compose(p1, d), CC.identity(C))


def test_cat_pullback_and_mono():
    C = po.to_category(po.chain("P", ["0", "1"]))
    D = po.to_category(po.chain("Q", ["a", "b", "c"]))
    fs_ = cats.all_functors(C, D)
    F = next(f for f in fs_ if f.obj_map == {"0": "a", "1": "b"})
    assert CC.is_mono(F)
    collapse = next(f for f in fs_ if f.obj_map == {"0": "a", "1": "a"})
    assert not CC.is_mono(collapse)
    q0, q1 = CC.pullback(F, F)
    for x in q0.source.objects:
        assert F.obj_map[q0.obj_map[x]] == F.obj_map[q1.obj_map[x]]


def test_cat_factorization():
    C = po.to_category(po.chain("P", ["0", "1"]))
    D = po.to_category(po.chain("Q", ["a", "b", "c"]))
    fs_ = cats.all_functors(C, D)
    F = next(f for f in fs_ if f.obj_map == {"0": "a", "1": "b"})
    h = CC.factor(F, F)
    assert h is not None and CC.morphisms_equal(CC.compose(F, h), F)
    # inclusion of the full subcategory of D on {a, b}, built as an
    # equalizer inside the category of categories
    endos = cats.all_functors(D, D)
    ident = CC.identity(D)
    squash = next(
        f for f in endos if f.obj_map == {"a": "a", "b": "b", "c": "b"}
    )
    sub = CC.equalizer(ident, squash)
    assert set(sub.source.objects) == {"a", "b"}
    w = CC.factor(F, sub)
    assert w is not None and CC.morphisms_equal(CC.compose(sub, w), F)
    # no factorization when the image escapes the subcategory
    big = next(f for f in fs_ if f.obj_map == {"0": "a", "1": "c"})
    assert CC.factor(big, sub) is None


def test_cat_capability_flags():
    assert not CC.has_coequalizers and not CC.has_coproducts
    with pytest.raises(CapabilityMissing):
        CC.coequalizer(None, None)
