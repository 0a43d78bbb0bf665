import pytest

from veq import groups as grp
from veq.errors import ElementNotInG, InvariantError


CORPUS = grp.corpus()


def test_corpus_has_fourteen_groups_up_to_order_sixteen():
    assert len(CORPUS) == 14
    assert all(len(G) <= 16 for G in CORPUS.values())
    orders = sorted(len(G) for G in CORPUS.values())
    assert orders == [1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 8, 12, 16]


def test_corpus_validates_on_load():
    # construction itself runs the exhaustive axiom checks; spot-check a few
    # structural facts on top
    assert CORPUS["C1"].elements == ("0",)
    assert len(CORPUS["D4"]) == 8
    assert len(CORPUS["D8"]) == 16
    assert not grp.is_abelian(CORPUS["S3"])
    assert grp.is_abelian(CORPUS["C8"])
    assert not grp.is_abelian(CORPUS["Q8"])


def test_bad_table_rejected():
    with pytest.raises(InvariantError):
        grp.Group("bad", ("a", "b"), (("a", "a"), ("a", "a")))


def test_cayley_basics():
    S3 = CORPUS["S3"]
    assert S3.identity == "e"
    assert S3.mul("(12)", "(12)") == "e"
    assert S3.mul("(123)", "(123)") == "(132)"
    assert S3.inverse("(123)") == "(132)"
    # conjugation permutes transpositions
    assert S3.conjugate("(123)", "(12)") in {"(13)", "(23)"}


def test_subgroup_and_normal_closure():
    S3 = CORPUS["S3"]
    assert grp.subgroup_closure(S3, ["(12)"]) == ("e", "(12)")
    assert grp.subgroup_closure(S3, []) == ("e",)
    assert grp.subgroup_closure(S3, ["(123)"]) == ("e", "(123)", "(132)")
    # the 2-element subgroup is not normal; its closure is everything
    assert grp.normal_closure(S3, ["(12)"]) == S3.elements
    assert grp.normal_closure(S3, ["(123)"]) == ("e", "(123)", "(132)")
    with pytest.raises(ElementNotInG):
        grp.subgroup_closure(S3, ["nope"])


def test_quotient_group():
    S3 = CORPUS["S3"]
    Q, proj = grp.quotient_group(S3, ("e", "(123)", "(132)"))
    assert len(Q) == 2
    assert proj.is_surjective()
    assert grp.find_isomorphism(Q, CORPUS["C2"]) is not None
    # kernel is exactly the normal subgroup
    assert tuple(x for x in S3.elements if proj(x) == Q.identity) == (
        "e",
        "(123)",
        "(132)",
    )


def test_commutator_subgroups():
    assert grp.commutator_subgroup(CORPUS["S3"]) == ("e", "(123)", "(132)")
    assert grp.commutator_subgroup(CORPUS["Q8"]) == ("1", "-1")
    assert grp.commutator_subgroup(CORPUS["C6"]) == ("0",)
    a4_comm = grp.commutator_subgroup(CORPUS["A4"])
    assert len(a4_comm) == 4  # the Klein-type normal subgroup


def test_brute_centralizer():
    S3 = CORPUS["S3"]
    assert grp.brute_centralizer(S3, ["(12)"]) == ("e", "(12)")
    assert grp.brute_centralizer(S3, ["e"]) == S3.elements
    assert grp.brute_centralizer(S3, S3.elements) == ("e",)
    C6 = CORPUS["C6"]
    assert grp.brute_centralizer(C6, ["3"]) == C6.elements


def test_all_homs_counts():
    C2, C4 = CORPUS["C2"], CORPUS["C4"]
    assert len(grp.all_homs(C2, C4)) == 2  # 0 -> 0, 1 -> 2
    assert len(grp.all_homs(C4, C2)) == 2
    assert len(grp.all_homs(CORPUS["C3"], C2)) == 1
    # homs S3 -> C2: trivial and sign
    assert len(grp.all_homs(CORPUS["S3"], C2)) == 2


def test_all_homs_are_exactly_the_homomorphisms():
    C2, V4 = CORPUS["C2"], CORPUS["V4"]
    found = {h.table for h in grp.all_homs(C2, V4)}
    brute = set()
    for img in V4.elements:
        if V4.mul(img, img) == V4.identity:
            brute.add((V4.identity, img))
    assert found == brute


def test_find_isomorphism():
    assert grp.find_isomorphism(CORPUS["C4"], CORPUS["V4"]) is None
    assert grp.find_isomorphism(CORPUS["C6"], CORPUS["S3"]) is None
    iso = grp.find_isomorphism(CORPUS["V4"], CORPUS["V4"])
    assert iso is not None and iso.is_injective()
    # D4 and Q8 share order-profiles only partially; they are not isomorphic
    assert grp.find_isomorphism(CORPUS["D4"], CORPUS["Q8"]) is None


def test_element_orders():
    orders = grp.element_orders(CORPUS["A4"])
    assert sorted(orders.values()) == [1, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3]
    assert grp.element_orders(CORPUS["Q8"])["-1"] == 2
    assert grp.element_orders(CORPUS["Q8"])["i"] == 4


def test_conjugation_hom_is_automorphism():
    for G in (CORPUS["S3"], CORPUS["D4"]):
        for g in G.elements:
            phi = grp.conjugation_hom(G, g)
            assert phi.is_injective() and phi.is_surjective()


def test_dihedral_relations():
    D4 = CORPUS["D4"]
    # reflection conjugates rotation to its inverse
    r, s = "r1", "s0"
    assert D4.mul(D4.mul(s, r), s) == D4.inverse(r)
    assert grp.element_orders(D4)[r] == 4
    assert grp.element_orders(D4)[s] == 2
