import itertools

import pytest

from veq import finset as fs
from veq.errors import CodMismatch, EmptyList, InvariantError, NotParallel, TargetMismatch

A = fs.finset("a", "b", "c")
BITS = fs.finset("0", "1")
P = fs.FinFunction(A, BITS, ("0", "1", "1"))
Q = fs.FinFunction(A, BITS, ("0", "0", "1"))


def small_objects(max_size=3):
    """Canonical test objects of each size up to max_size, empty included."""
    atoms = "uvwxyz"
    return [fs.FinSetObj(tuple(atoms[:n])) for n in range(max_size + 1)]


def test_finsetobj_rejects_duplicates():
    with pytest.raises(InvariantError):
        fs.FinSetObj(("a", "a"))


def test_function_table_validated():
    with pytest.raises(InvariantError):
        fs.FinFunction(A, BITS, ("0", "1"))
    with pytest.raises(InvariantError):
        fs.FinFunction(A, BITS, ("0", "1", "2"))


def test_compose_and_identity():
    ida = fs.identity(A)
    assert fs.compose(P, ida) == P
    assert fs.compose(fs.identity(BITS), P) == P
    swap = fs.FinFunction(BITS, BITS, ("1", "0"))
    assert fs.compose(swap, P).table == ("1", "0", "0")


def test_equalizer_matches_brute_filter():
    e = fs.equalizer(P, Q)
    assert e.carrier.elements == ("a", "c")
    assert e.inclusion.table == ("a", "c")


def test_equalizer_identity_and_empty_cases():
    assert fs.equalizer(P, P).carrier == A
    r = fs.FinFunction(A, BITS, ("1", "0", "0"))
    assert fs.equalizer(P, r).carrier.elements == ()


def test_equalizer_requires_parallel_pair():
    other = fs.FinFunction(BITS, BITS, ("0", "1"))
    with pytest.raises(NotParallel):
        fs.equalizer(P, other)


def test_equalizer_agrees_with_filter_exhaustively():
    # every parallel pair over sets of size <= 3 (size 6 total is too many tables)
    for dom in small_objects(3):
        for cod in small_objects(2):
            for p in fs.all_functions(dom, cod):
                for q in fs.all_functions(dom, cod):
                    want = tuple(x for x in dom.elements if p(x) == q(x))
                    assert fs.equalizer(p, q).carrier.elements == want


def test_product_sizes_and_labels():
    r = fs.product([BITS, fs.finset("x", "y")])
    assert len(r.obj) == 4
    assert r.obj.elements == ("(0,x)", "(0,y)", "(1,x)", "(1,y)")
    assert r.projections[0].table == ("0", "0", "1", "1")
    assert r.projections[1].table == ("x", "y", "x", "y")
    assert len(fs.product([BITS, BITS, BITS]).obj) == 8
    single = fs.product([A])
    assert len(single.obj) == 3


def test_product_rejects_empty_list():
    with pytest.raises(EmptyList):
        fs.product([])


def test_product_universal_property_exhaustive():
    factors = [BITS, fs.finset("x", "y")]
    r = fs.product(factors)
    for apex in small_objects(2):
        for f in fs.all_functions(apex, factors[0]):
            for g in fs.all_functions(apex, factors[1]):
                med = r.tuple_of([f, g])
                assert fs.compose(r.projections[0], med) == f
                assert fs.compose(r.projections[1], med) == g
                # uniqueness among all candidates
                others = [
                    h
                    for h in fs.all_functions(apex, r.obj)
                    if fs.compose(r.projections[0], h) == f
                    and fs.compose(r.projections[1], h) == g
                ]
                assert others == [med]


def test_coproduct_tags_and_sizes():
    r = fs.coproduct([fs.finset("a"), fs.finset("a")])
    assert r.obj.elements == ("in0:a", "in1:a")
    assert len(fs.coproduct([BITS, fs.finset("x", "y", "z")]).obj) == 5
    assert len(fs.coproduct([A]).obj) == 3
    for i, cp in enumerate(r.coprojections):
        assert cp.is_injective()
    with pytest.raises(EmptyList):
        fs.coproduct([])


def test_coproduct_universal_property_exhaustive():
    summands = [BITS, fs.finset("x")]
    r = fs.coproduct(summands)
    cod = fs.finset("u", "v")
    for f in fs.all_functions(summands[0], cod):
        for g in fs.all_functions(summands[1], cod):
            med = r.cotuple_of([f, g])
            assert fs.compose(med, r.coprojections[0]) == f
            assert fs.compose(med, r.coprojections[1]) == g
            others = [
                h
                for h in fs.all_functions(r.obj, cod)
                if fs.compose(h, r.coprojections[0]) == f
                and fs.compose(h, r.coprojections[1]) == g
            ]
            assert others == [med]


def test_coequalizer_glues_named_pair():
    pt = fs.finset("pt")
    three = fs.finset("0", "1", "2")
    p = fs.FinFunction(pt, three, ("0",))
    q = fs.FinFunction(pt, three, ("1",))
    c = fs.coequalizer(p, q)
    assert c.cod.elements == ("0", "2")
    assert c.table == ("0", "0", "2")


def test_coequalizer_identity_and_total_collapse():
    assert fs.coequalizer(P, P).cod == BITS
    pair = fs.finset("u", "v")
    p = fs.FinFunction(pair, A, ("a", "b"))
    q = fs.FinFunction(pair, A, ("b", "c"))
    c = fs.coequalizer(p, q)
    assert len(c.cod) == 1
    assert c.cod.elements == ("a",)


def test_coequalizer_universal_property_exhaustive():
    pair = fs.finset("u", "v")
    for p in fs.all_functions(pair, A):
        for q in fs.all_functions(pair, A):
            c = fs.coequalizer(p, q)
            for cod in small_objects(2):
                for h in fs.all_functions(A, cod):
                    if fs.compose(h, p) != fs.compose(h, q):
                        continue
                    mediators = [
                        m for m in fs.all_functions(c.cod, cod) if fs.compose(m, c) == h
                    ]
                    assert len(mediators) == 1


def test_cokernel_pair_cases():
    pt = fs.finset("pt")
    f = fs.FinFunction(pt, BITS, ("0",))
    p, q = fs.cokernel_pair(f)
    assert p.cod == q.cod
    assert len(p.cod) == 3
    assert fs.compose(p, f) == fs.compose(q, f)
    # p and q differ exactly off the image of f
    assert [x for x in BITS.elements if p(x) != q(x)] == ["1"]

    surj = fs.FinFunction(A, BITS, ("0", "1", "0"))
    p2, q2 = fs.cokernel_pair(surj)
    assert p2 == q2
    assert p2.is_injective() and p2.is_surjective()

    empty = fs.FinSetObj(())
    f3 = fs.FinFunction(empty, fs.finset("0"), ())
    p3, q3 = fs.cokernel_pair(f3)
    assert p3.cod.elements == ("in0:0", "in1:0")
    assert (p3.table, q3.table) == (("in0:0",), ("in1:0",))


def test_cokernel_pair_trivial_iff_epi():
    for dom in small_objects(3):
        for f in fs.all_functions(dom, BITS):
            p, q = fs.cokernel_pair(f)
            assert (p == q) == f.is_surjective()


def test_pullback_cases():
    U = fs.finset("u", "v")
    f = fs.FinFunction(BITS, U, ("u", "v"))
    m = fs.FinFunction(fs.finset("a"), U, ("u",))
    sq = fs.pullback(f, m)
    assert sq.apex.elements == ("(0,a)",)
    assert sq.to_f_dom.table == ("0",)
    assert sq.to_m_dom.table == ("a",)

    ident = fs.identity(U)
    sq2 = fs.pullback(f, ident)
    assert sq2.to_m_dom.table == f.table

    miss = fs.FinFunction(fs.finset("a"), U, ("v",))
    const_u = fs.FinFunction(BITS, U, ("u", "u"))
    assert len(fs.pullback(const_u, miss).apex) == 0

    with pytest.raises(CodMismatch):
        fs.pullback(f, fs.FinFunction(fs.finset("a"), BITS, ("0",)))


def test_pullback_preserves_monos_and_universal_property():
    U = fs.finset("u", "v", "w")
    for f in fs.all_functions(BITS, U):
        for m_table in itertools.permutations(U.elements, 2):
            m = fs.FinFunction(BITS, U, m_table)
            sq = fs.pullback(f, m)
            assert sq.to_f_dom.is_injective()
            # universal property over small apexes
            for apex in small_objects(2):
                for u in fs.all_functions(apex, BITS):
                    for v in fs.all_functions(apex, BITS):
                        if fs.compose(f, u) != fs.compose(m, v):
                            continue
                        mediators = [
                            h
                            for h in fs.all_functions(apex, sq.apex)
                            if fs.compose(sq.to_f_dom, h) == u
                            and fs.compose(sq.to_m_dom, h) == v
                        ]
                        assert len(mediators) == 1


def test_intersect():
    ac = fs.sub(A, ["a", "c"])
    ab = fs.sub(A, ["a", "b"])
    assert fs.intersect([ac, ab]).carrier.elements == ("a",)
    assert fs.intersect([ac]).carrier.elements == ("a", "c")
    bc = fs.sub(A, ["b"])
    assert fs.intersect([ac, bc]).carrier.elements == ()
    with pytest.raises(EmptyList):
        fs.intersect([])
    with pytest.raises(TargetMismatch):
        fs.intersect([ac, fs.sub(BITS, ["0"])])


def test_factor_through():
    inc = fs.sub(BITS, ["0"]).inclusion
    const0 = fs.FinFunction(A, BITS, ("0", "0", "0"))
    h = fs.factor_through(const0, inc)
    assert h is not None and fs.compose(inc, h) == const0

    assert fs.factor_through(P, inc) is None

    h2 = fs.factor_through(P, P)
    assert h2 is not None and fs.compose(P, h2) == P

    with pytest.raises(CodMismatch):
        fs.factor_through(P, fs.identity(A))


def test_factor_through_agrees_with_search():
    for dom in small_objects(2):
        for f in fs.all_functions(dom, BITS):
            for g in fs.all_functions(A, BITS):
                h = fs.factor_through(f, g)
                all_h = [k for k in fs.all_functions(dom, A) if fs.compose(g, k) == f]
                if h is None:
                    assert all_h == []
                else:
                    assert h in all_h
                    if g.is_injective():
                        assert all_h == [h]


def test_determinism():
    r1 = fs.product([A, BITS])
    r2 = fs.product([A, BITS])
    assert r1 == r2
    assert fs.coequalizer(P, Q) == fs.coequalizer(P, Q)
