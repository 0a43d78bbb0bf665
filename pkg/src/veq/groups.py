"""Finite groups as Cayley tables, homomorphisms, quotients, and a validated
corpus of the groups of order up to 16 used throughout the test suites."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import CodMismatch, ElementNotInG, InvariantError


@dataclass(frozen=True)
class Group:
    name: str
    elements: tuple[str, ...]
    table: tuple[tuple[str, ...], ...]  # table[i][j] = elements[i] * elements[j]

    def __post_init__(self):
        n = len(self.elements)
        if len(set(self.elements)) != n:
            raise InvariantError("duplicate element labels")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise InvariantError("table shape mismatch")
        idx = self._index
        for row in self.table:
            for v in row:
                if v not in idx:
                    raise InvariantError(f"table value {v!r} outside carrier")
        # identity
        e = None
        for cand in self.elements:
            i = idx[cand]
            if all(self.table[i][j] == x and self.table[j][i] == x
                   for j, x in enumerate(self.elements)):
                e = cand
                break
        if e is None:
            raise InvariantError("no identity element")
        # inverses
        for i, a in enumerate(self.elements):
            if e not in self.table[i]:
                raise InvariantError(f"{a!r} has no inverse")
        # associativity
        for i in range(n):
            for j in range(n):
                ij = idx[self.table[i][j]]
                for k in range(n):
                    if self.table[ij][k] != self.table[i][idx[self.table[j][k]]]:
                        raise InvariantError("associativity fails")

    @property
    def _index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def mul(self, a: str, b: str) -> str:
        idx = self._index
        if a not in idx or b not in idx:
            raise ElementNotInG(f"{a!r} or {b!r} not in {self.name}")
        return self.table[idx[a]][idx[b]]

    @property
    def identity(self) -> str:
        idx = self._index
        for cand in self.elements:
            i = idx[cand]
            if all(self.table[i][j] == x for j, x in enumerate(self.elements)):
                return cand
        raise InvariantError("no identity")  # unreachable after validation

    def inverse(self, a: str) -> str:
        e = self.identity
        for b in self.elements:
            if self.mul(a, b) == e:
                return b
        raise ElementNotInG(f"{a!r} not in {self.name}")

    def conjugate(self, g: str, x: str) -> str:
        return self.mul(self.mul(g, x), self.inverse(g))

    def __len__(self) -> int:
        return len(self.elements)


def make_group(name: str, elements, mul) -> Group:
    elements = tuple(elements)
    table = tuple(tuple(mul(a, b) for b in elements) for a in elements)
    return Group(name, elements, table)


@dataclass(frozen=True)
class GroupHom:
    dom: Group
    cod: Group
    table: tuple[str, ...]  # aligned with dom.elements

    def __post_init__(self):
        if len(self.table) != len(self.dom):
            raise InvariantError("hom table length mismatch")
        idx = {x: i for i, x in enumerate(self.dom.elements)}
        for a in self.dom.elements:
            for b in self.dom.elements:
                lhs = self.table[idx[self.dom.mul(a, b)]]
                rhs = self.cod.mul(self.table[idx[a]], self.table[idx[b]])
                if lhs != rhs:
                    raise InvariantError("not a homomorphism")

    def __call__(self, a: str) -> str:
        return self.table[self.dom.elements.index(a)]

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return set(self.table) == set(self.cod.elements)

    def image(self) -> tuple[str, ...]:
        seen = set(self.table)
        return tuple(x for x in self.cod.elements if x in seen)


def hom_from_map(dom: Group, cod: Group, mapping: dict[str, str]) -> GroupHom:
    return GroupHom(dom, cod, tuple(mapping[a] for a in dom.elements))


def identity_hom(G: Group) -> GroupHom:
    return GroupHom(G, G, G.elements)


def compose_homs(g: GroupHom, f: GroupHom) -> GroupHom:
    if f.cod != g.dom:
        raise CodMismatch("homs not composable")
    return GroupHom(f.dom, g.cod, tuple(g(y) for y in f.table))


def conjugation_hom(G: Group, g: str) -> GroupHom:
    if g not in G.elements:
        raise ElementNotInG(f"{g!r} not in {G.name}")
    return GroupHom(G, G, tuple(G.conjugate(g, x) for x in G.elements))


def subgroup_closure(G: Group, gens) -> tuple[str, ...]:
    """Smallest subgroup containing gens, as labels in ambient order."""
    for g in gens:
        if g not in G.elements:
            raise ElementNotInG(f"{g!r} not in {G.name}")
    members = {G.identity, *gens}
    changed = True
    while changed:
        changed = False
        for a in list(members):
            for b in list(members):
                p = G.mul(a, b)
                if p not in members:
                    members.add(p)
                    changed = True
        for a in list(members):
            inv = G.inverse(a)
            if inv not in members:
                members.add(inv)
                changed = True
    return tuple(x for x in G.elements if x in members)


def normal_closure(G: Group, gens) -> tuple[str, ...]:
    """Smallest normal subgroup containing gens."""
    seeds = set(gens)
    changed = True
    while changed:
        changed = False
        current = subgroup_closure(G, seeds)
        for g in G.elements:
            for x in current:
                c = G.conjugate(g, x)
                if c not in seeds and c not in current:
                    seeds.add(c)
                    changed = True
            seeds.update(current)
    return subgroup_closure(G, seeds)


def sub_group(G: Group, members, name: str | None = None) -> tuple[Group, GroupHom]:
    """The subgroup on the given closed member set, with its inclusion."""
    members = tuple(x for x in G.elements if x in set(members))
    H = Group(name or f"{G.name}|sub", members,
              tuple(tuple(G.mul(a, b) for b in members) for a in members))
    return H, GroupHom(H, G, members)


def quotient_group(G: Group, normal_members, name: str | None = None) -> tuple[Group, GroupHom]:
    """Quotient by a normal subgroup; cosets named by their earliest member."""
    N = set(normal_members)
    seen: dict[str, str] = {}
    reps: list[str] = []
    for x in G.elements:
        if x in seen:
            continue
        coset = {G.mul(x, n) for n in N}
        rep = min(coset, key=G.elements.index)
        reps.append(rep)
        for c in coset:
            seen[c] = rep
    Q = make_group(name or f"{G.name}/N", tuple(reps),
                   lambda a, b: seen[G.mul(a, b)])
    return Q, GroupHom(G, Q, tuple(seen[x] for x in G.elements))


def generating_set(G: Group) -> tuple[str, ...]:
    """Deterministic small generating set (greedy in carrier order)."""
    gens: list[str] = []
    closure = {G.identity}
    for x in G.elements:
        if x not in closure:
            gens.append(x)
            closure = set(subgroup_closure(G, gens))
        if len(closure) == len(G):
            break
    return tuple(gens)


def all_homs(G: Group, H: Group) -> list[GroupHom]:
    """Every homomorphism G -> H, by backtracking over generator images."""
    gens = generating_set(G)
    out = []
    for images in itertools.product(H.elements, repeat=len(gens)):
        table = _extend_hom(G, H, gens, images)
        if table is not None:
            out.append(GroupHom(G, H, table))
    return out


def _extend_hom(G, H, gens, images):
    mapping = {G.identity: H.identity}
    frontier = [G.identity]
    gen_img = dict(zip(gens, images))
    while frontier:
        a = frontier.pop()
        for g, h in gen_img.items():
            p, q = G.mul(a, g), H.mul(mapping[a], h)
            if p in mapping:
                if mapping[p] != q:
                    return None
            else:
                mapping[p] = q
                frontier.append(p)
    if len(mapping) != len(G):
        return None
    table = tuple(mapping[x] for x in G.elements)
    idx = {x: i for i, x in enumerate(G.elements)}
    for a in G.elements:
        for b in G.elements:
            if table[idx[G.mul(a, b)]] != H.mul(table[idx[a]], table[idx[b]]):
                return None
    return table


def find_isomorphism(G: Group, H: Group) -> GroupHom | None:
    if len(G) != len(H):
        return None
    if sorted(element_orders(G).values()) != sorted(element_orders(H).values()):
        return None
    for h in all_homs(G, H):
        if h.is_injective() and h.is_surjective():
            return h
    return None


def element_orders(G: Group) -> dict[str, int]:
    out = {}
    for x in G.elements:
        n, cur = 1, x
        while cur != G.identity:
            cur = G.mul(cur, x)
            n += 1
        out[x] = n
    return out


def is_abelian(G: Group) -> bool:
    return all(G.mul(a, b) == G.mul(b, a) for a in G.elements for b in G.elements)


def commutator_subgroup(G: Group) -> tuple[str, ...]:
    comms = {G.mul(G.mul(a, b), G.inverse(G.mul(b, a)))
             for a in G.elements for b in G.elements}
    return normal_closure(G, comms)


def brute_centralizer(G: Group, S) -> tuple[str, ...]:
    for s in S:
        if s not in G.elements:
            raise ElementNotInG(f"{s!r} not in {G.name}")
    return tuple(x for x in G.elements
                 if all(G.mul(x, s) == G.mul(s, x) for s in S))


# -- corpus -------------------------------------------------------------------

def _cyclic(n: int) -> Group:
    return make_group(f"C{n}", tuple(str(i) for i in range(n)),
                      lambda a, b: str((int(a) + int(b)) % n))


def _klein() -> Group:
    def mul(a, b):
        if a == "e":
            return b
        if b == "e":
            return a
        if a == b:
            return "e"
        return ({"a", "b", "c"} - {a, b}).pop()
    return make_group("V4", ("e", "a", "b", "c"), mul)


_S3_PERMS = {
    "e": (1, 2, 3),
    "(12)": (2, 1, 3),
    "(13)": (3, 2, 1),
    "(23)": (1, 3, 2),
    "(123)": (2, 3, 1),
    "(132)": (3, 1, 2),
}


def _perm_group(name: str, perms: dict[str, tuple[int, ...]]) -> Group:
    by_perm = {p: lbl for lbl, p in perms.items()}

    def mul(a, b):
        pa, pb = perms[a], perms[b]
        return by_perm[tuple(pa[pb[i] - 1] for i in range(len(pa)))]

    return make_group(name, tuple(perms), mul)


def _s3() -> Group:
    return _perm_group("S3", _S3_PERMS)


def _a4() -> Group:
    base = list(range(1, 5))
    perms = {}
    for p in itertools.permutations(base):
        inversions = sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j])
        if inversions % 2 == 0:
            perms[_cycle_label(p)] = p
    ordered = sorted(perms.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return _perm_group("A4", dict(ordered))


def _cycle_label(p: tuple[int, ...]) -> str:
    seen, parts = set(), []
    for start in range(1, len(p) + 1):
        if start in seen:
            continue
        cycle, cur = [start], p[start - 1]
        seen.add(start)
        while cur != start:
            cycle.append(cur)
            seen.add(cur)
            cur = p[cur - 1]
        if len(cycle) > 1:
            parts.append("(" + "".join(str(c) for c in cycle) + ")")
    return "".join(parts) if parts else "e"


def _dihedral(n: int, name: str) -> Group:
    # r{i} rotations, s{i} = reflection s * r^i, with s r s = r^-1
    labels = tuple(f"r{i}" for i in range(n)) + tuple(f"s{i}" for i in range(n))

    def mul(a, b):
        fa, ia = a[0], int(a[1:])
        fb, ib = b[0], int(b[1:])
        if fa == "r" and fb == "r":
            return f"r{(ia + ib) % n}"
        if fa == "r" and fb == "s":
            return f"s{(ib - ia) % n}"
        if fa == "s" and fb == "r":
            return f"s{(ia + ib) % n}"
        return f"r{(ib - ia) % n}"

    return make_group(name, labels, mul)


def _q8() -> Group:
    labels = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
    base = {"i": ("j", "k"), "j": ("k", "i"), "k": ("i", "j")}

    def mul(a, b):
        sa, ua = (-1, a[1:]) if a.startswith("-") else (1, a)
        sb, ub = (-1, b[1:]) if b.startswith("-") else (1, b)
        sign = sa * sb
        if ua == "1":
            unit = ub
        elif ub == "1":
            unit = ua
        elif ua == ub:
            unit, sign = "1", -sign
        else:
            other, third = base[ua]
            if ub == other:
                unit = third
            else:
                unit, sign = {"i", "j", "k"}.difference({ua, ub}).pop(), -sign
        return unit if sign == 1 else ("-1" if unit == "1" else f"-{unit}")

    return make_group("Q8", labels, mul)


@lru_cache(maxsize=1)
def corpus() -> dict[str, Group]:
    """The 14 bundled groups of order <= 16, validated on construction."""
    groups = [
        _cyclic(1), _cyclic(2), _cyclic(3), _cyclic(4), _cyclic(5),
        _cyclic(6), _cyclic(7), _cyclic(8),
        _klein(), _s3(), _dihedral(4, "D4"), _q8(), _a4(), _dihedral(8, "D8"),
    ]
    return {g.name: g for g in groups}
