"""Declarative workspace language and its canonical printer.

One small language covers every definition kind the command surface needs:
sets, functions, equation systems, algebras, groups, theories, theory
morphisms, categories, functors, adjunctions, and series. A file is loaded
top to bottom; references resolve immediately and every value is validated
by its home module's constructor on the spot, so a parsed workspace is a
checked workspace.

Printing is canonical: parse(print_workspace(w)) rebuilds w exactly, and
printing an already-canonical source is the identity.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction

from . import cats
from .algebras import FiniteAlgebra
from .equations import CoEquationSystem, Equation, EquationSystem
from .errors import InvariantError, ParseError, ResolutionError, VeqError
from .finset import FinFunction, FinSetObj, fin_function
from .groups import corpus as group_corpus
from .instances import FinSetCat
from .series import TruncatedSeries, from_ratio, from_recurrence, series
from .theories import (
    App,
    Signature,
    Term,
    TheoryMorphismData,
    TheoryPresentation,
    Var,
    check_term,
    print_term,
)

FINSET_CAT = FinSetCat()

KINDS = (
    "set", "fun", "system", "cosystem", "algebra", "group",
    "theory", "thmor", "category", "functor", "adjunction", "series",
)

VAR_NAME = re.compile(r"[u-z][0-9]*")


class Workspace:
    """Named definitions, one namespace per kind, in declaration order."""

    def __init__(self):
        self.defs: dict[str, dict[str, object]] = {k: {} for k in KINDS}
        self.order: list[tuple[str, str]] = []
        self.lines: dict[tuple[str, str], str] = {}
        self.cat_generators: dict[str, tuple[str, ...]] = {}

    def add(self, kind: str, name: str, value, line: str):
        if name in self.defs[kind]:
            raise ResolutionError(f"duplicate {kind} {name!r}")
        self.defs[kind][name] = value
        self.order.append((kind, name))
        self.lines[(kind, name)] = line

    def get(self, kind: str, name: str):
        try:
            return self.defs[kind][name]
        except KeyError:
            raise ResolutionError(f"undefined {kind} {name!r}") from None

    def __eq__(self, other):
        return (
            isinstance(other, Workspace)
            and self.order == other.order
            and self.lines == other.lines
        )


def print_workspace(w: Workspace) -> str:
    if not w.order:
        return ""
    return "\n".join(w.lines[key] for key in w.order) + "\n"


# --- tokens -----------------------------------------------------------------

_SINGLE = {
    "{": "LBRACE", "}": "RBRACE", "(": "LPAREN", ")": "RPAREN",
    "[": "LBRACK", "]": "RBRACK", ",": "COMMA", ";": "SEMI",
    ":": "COLON", "=": "EQUALS", "~": "TILDE", "/": "SLASH", ".": "DOT",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str, where: str = "<input>") -> list[Token]:
    out = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and src[i] != "\n":
                i += 1
            continue
        if src.startswith("->", i):
            out.append(Token("ARROW", "->", line, col))
            i += 2
            col += 2
            continue
        if ch == "-" and i + 1 < n and src[i + 1].isdigit():
            j = i + 1
            while j < n and src[j].isdigit():
                j += 1
            out.append(Token("NUMBER", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            out.append(Token("NUMBER", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            out.append(Token("IDENT", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _SINGLE:
            out.append(Token(_SINGLE[ch], ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"{where}: unexpected character {ch!r}", line, col)
    out.append(Token("EOF", "", line, col))
    return out


# --- parser -----------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token], ws: Workspace, where: str):
        self.toks = tokens
        self.pos = 0
        self.ws = ws
        self.where = where

    def peek(self) -> Token:
        return self.toks[self.pos]

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def eat(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, expected: str):
        t = self.peek()
        found = t.text if t.kind != "EOF" else "end of input"
        raise ParseError(
            f"{self.where}: expected {expected}, found {found!r}", t.line, t.col)

    def expect(self, kind: str, text: str | None = None, expected: str | None = None) -> Token:
        if not self.at(kind, text):
            self.fail(expected or (text if text is not None else kind.lower()))
        return self.eat()

    def keyword(self, word: str) -> Token:
        if not (self.at("IDENT", word)):
            self.fail(f"keyword {word!r}")
        return self.eat()

    # -- shared small pieces --

    def _name(self, what: str) -> str:
        return self.expect("IDENT", expected=what).text

    def _element(self) -> str:
        t = self.peek()
        if t.kind == "IDENT" or (t.kind == "NUMBER" and not t.text.startswith("-")):
            return self.eat().text
        self.fail("an element label")

    def _element_list(self, closing: str) -> list[str]:
        out = []
        if not self.at(closing):
            out.append(self._element())
            while self.at("COMMA"):
                self.eat()
                out.append(self._element())
        self.expect(closing)
        return out

    def _rational(self) -> Fraction:
        t = self.expect("NUMBER", expected="a number")
        num = int(t.text)
        if self.at("SLASH"):
            self.eat()
            den = int(self.expect("NUMBER", expected="a denominator").text)
            return Fraction(num, den)
        return Fraction(num)

    def _rational_list(self, stop_kinds: tuple[str, ...]) -> list[Fraction]:
        out = [self._rational()]
        while self.at("COMMA"):
            self.eat()
            out.append(self._rational())
        if self.peek().kind not in stop_kinds:
            self.fail(" or ".join(k.lower() for k in stop_kinds))
        return out

    def term(self, mode: str, reg: dict[str, int]) -> Term:
        name = self._name("a term")
        if self.at("LPAREN"):
            self.eat()
            args = []
            if not self.at("RPAREN"):
                args.append(self.term(mode, reg))
                while self.at("COMMA"):
                    self.eat()
                    args.append(self.term(mode, reg))
            self.expect("RPAREN")
            return App(name, tuple(args))
        if mode == "indexed":
            m = re.fullmatch(r"x([0-9]+)", name)
            if m:
                return Var(int(m.group(1)))
            return App(name, ())
        if VAR_NAME.fullmatch(name):
            if name not in reg:
                reg[name] = len(reg)
            return Var(reg[name])
        return App(name, ())

    # -- declarations --

    def file(self):
        while not self.at("EOF"):
            if self.at("SEMI"):
                self.eat()
                continue
            self.declaration()

    def declaration(self):
        t = self.peek()
        if t.kind != "IDENT" or t.text not in KINDS:
            self.fail("one of " + ", ".join(KINDS))
        handler = getattr(self, "_decl_" + t.text)
        self.eat()
        name = self._name(f"a {t.text} name")
        try:
            value, line = handler(name)
        except (ParseError, ResolutionError):
            raise
        except VeqError as e:
            raise InvariantError(f"{t.text} {name}: {e}") from e
        self.ws.add(t.text, name, value, line)

    def _decl_set(self, name):
        self.expect("EQUALS")
        self.expect("LBRACE")
        elems = self._element_list("RBRACE")
        obj = FinSetObj(tuple(elems))
        return obj, f"set {name} = {{{', '.join(elems)}}}"

    def _decl_fun(self, name):
        self.expect("COLON")
        dom_name = self._name("a set name")
        self.expect("ARROW")
        cod_name = self._name("a set name")
        self.expect("EQUALS")
        self.expect("LBRACE")
        mapping: dict[str, str] = {}
        if not self.at("RBRACE"):
            while True:
                k = self._element()
                self.expect("ARROW")
                v = self._element()
                if k in mapping:
                    raise ResolutionError(f"fun {name}: {k!r} mapped twice")
                mapping[k] = v
                if not self.at("COMMA"):
                    break
                self.eat()
        self.expect("RBRACE")
        dom = self.ws.get("set", dom_name)
        cod = self.ws.get("set", cod_name)
        f = fin_function(dom, cod, mapping)
        body = ", ".join(f"{x} -> {f(x)}" for x in dom.elements)
        return f, f"fun {name} : {dom_name} -> {cod_name} = {{{body}}}"

    def _equation_pairs(self):
        pairs = []
        self.expect("LBRACE")
        while True:
            lhs = self._name("a function name")
            self.expect("TILDE")
            rhs = self._name("a function name")
            pairs.append((lhs, rhs))
            if not self.at("COMMA"):
                break
            self.eat()
        self.expect("RBRACE")
        return pairs

    def _decl_system(self, name):
        self.keyword("on")
        on_name = self._name("a set name")
        pairs = self._equation_pairs()
        on = self.ws.get("set", on_name)
        eqs = tuple(
            Equation(self.ws.get("fun", p), self.ws.get("fun", q)) for p, q in pairs)
        system = EquationSystem(FINSET_CAT, eqs)
        if system.domain != on:
            raise InvariantError(
                f"system {name} is declared on {on_name} but its equations start elsewhere")
        body = ", ".join(f"{p} ~ {q}" for p, q in pairs)
        return system, f"system {name} on {on_name} {{ {body} }}"

    def _decl_cosystem(self, name):
        self.keyword("on")
        on_name = self._name("a set name")
        pairs = self._equation_pairs()
        on = self.ws.get("set", on_name)
        eqs = tuple(
            Equation(self.ws.get("fun", p), self.ws.get("fun", q)) for p, q in pairs)
        cosystem = CoEquationSystem(FINSET_CAT, eqs)
        if cosystem.codomain != on:
            raise InvariantError(
                f"cosystem {name} is declared on {on_name} but its equations end elsewhere")
        body = ", ".join(f"{p} ~ {q}" for p, q in pairs)
        return cosystem, f"cosystem {name} on {on_name} {{ {body} }}"

    def _decl_algebra(self, name):
        self.keyword("on")
        self.expect("LBRACE")
        elems = self._element_list("RBRACE")
        carrier = FinSetObj(tuple(elems))
        self.expect("LBRACE")
        ops: list[tuple[str, int]] = []
        tables: dict[str, dict[tuple[str, ...], str]] = {}
        while True:
            self.keyword("op")
            sym = self._name("an operation name")
            self.expect("SLASH")
            arity = int(self.expect("NUMBER", expected="an arity").text)
            self.expect("EQUALS")
            self.expect("LBRACE")
            table: dict[tuple[str, ...], str] = {}
            if not self.at("RBRACE"):
                while True:
                    self.expect("LPAREN")
                    key = tuple(self._element_list("RPAREN"))
                    self.expect("ARROW")
                    out = self._element()
                    if key in table:
                        raise ResolutionError(
                            f"algebra {name}: duplicate entry for {key} in {sym}")
                    table[key] = out
                    if not self.at("COMMA"):
                        break
                    self.eat()
            self.expect("RBRACE")
            ops.append((sym, arity))
            tables[sym] = table
            if not self.at("COMMA"):
                break
            self.eat()
        self.expect("RBRACE")
        algebra = FiniteAlgebra(name, Signature(tuple(ops)), carrier, tables)
        parts = []
        for sym, arity in ops:
            entries = ", ".join(
                f"({','.join(key)}) -> {tables[sym][key]}"
                for key in itertools.product(carrier.elements, repeat=arity))
            parts.append(f"op {sym}/{arity} = {{{entries}}}")
        body = ", ".join(parts)
        return algebra, f"algebra {name} on {{{', '.join(elems)}}} {{ {body} }}"

    def _decl_group(self, name):
        self.expect("EQUALS")
        ref = self._name("a bundled group name")
        groups = group_corpus()
        if ref not in groups:
            raise ResolutionError(
                f"group {name}: no bundled group {ref!r} "
                f"(have {', '.join(sorted(groups))})")
        return groups[ref], f"group {name} = {ref}"

    def _decl_theory(self, name):
        self.expect("LBRACE")
        self.keyword("sig")
        ops = []
        while True:
            sym = self._name("an operation name")
            self.expect("SLASH")
            arity = int(self.expect("NUMBER", expected="an arity").text)
            ops.append((sym, arity))
            if not self.at("COMMA"):
                break
            self.eat()
        sig = Signature(tuple(ops))
        axioms = []
        while self.at("IDENT", "ax"):
            self.eat()
            reg: dict[str, int] = {}
            lhs = self.term("named", reg)
            self.expect("TILDE")
            rhs = self.term("named", reg)
            check_term(sig, lhs)
            check_term(sig, rhs)
            axioms.append((lhs, rhs))
        self.expect("RBRACE")
        theory = TheoryPresentation(name, sig, tuple(axioms))
        sig_txt = ", ".join(f"{s}/{a}" for s, a in ops)
        ax_txt = "".join(
            f" ax {print_term(l)} ~ {print_term(r)}" for l, r in axioms)
        return theory, f"theory {name} {{ sig {sig_txt}{ax_txt} }}"

    def _decl_thmor(self, name):
        self.expect("COLON")
        src_name = self._name("a theory name")
        self.expect("ARROW")
        tgt_name = self._name("a theory name")
        src = self.ws.get("theory", src_name)
        tgt = self.ws.get("theory", tgt_name)
        self.expect("LBRACE")
        images: dict[str, Term] = {}
        if not self.at("RBRACE"):
            while True:
                sym = self._name("a source operation name")
                self.expect("ARROW")
                img = self.term("indexed", {})
                if sym in images:
                    raise ResolutionError(f"thmor {name}: {sym!r} mapped twice")
                images[sym] = img
                if not self.at("COMMA"):
                    break
                self.eat()
        self.expect("RBRACE")
        ordered = tuple(
            (sym, images[sym]) for sym, _ in src.signature.ops if sym in images)
        morphism = TheoryMorphismData(src, tgt, ordered + tuple(
            (sym, img) for sym, img in images.items()
            if sym not in {s for s, _ in ordered}))
        body = ", ".join(f"{sym} -> {print_term(img)}" for sym, img in morphism.images)
        return morphism, f"thmor {name} : {src_name} -> {tgt_name} {{ {body} }}"

    def _word(self) -> tuple[str, ...]:
        parts = [self._name("an arrow name")]
        while self.at("DOT"):
            self.eat()
            parts.append(self._name("an arrow name"))
        return tuple(parts)

    def _decl_category(self, name):
        self.expect("LBRACE")
        self.keyword("ob")
        objects = [self._name("an object name")]
        while self.at("COMMA"):
            self.eat()
            objects.append(self._name("an object name"))
        generators: dict[str, tuple[str, str]] = {}
        gen_order: list[str] = []
        while self.at("IDENT", "ar"):
            self.eat()
            arrow = self._name("an arrow name")
            self.expect("COLON")
            a = self._name("an object name")
            self.expect("ARROW")
            b = self._name("an object name")
            if arrow in generators:
                raise ResolutionError(f"category {name}: duplicate arrow {arrow!r}")
            if a not in objects or b not in objects:
                raise ResolutionError(
                    f"category {name}: arrow {arrow} uses an undeclared object")
            generators[arrow] = (a, b)
            gen_order.append(arrow)
        relations: dict[tuple[str, ...], tuple[str, ...]] = {}
        rel_order: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
        while self.at("IDENT", "rel"):
            self.eat()
            lhs = self._word()
            self.expect("EQUALS")
            if self.at("IDENT", "id"):
                self.eat()
                rhs: tuple[str, ...] = ()
            else:
                rhs = self._word()
            for part in lhs + rhs:
                if part not in generators:
                    raise ResolutionError(
                        f"category {name}: relation uses unknown arrow {part!r}")
            relations[lhs] = rhs
            rel_order.append((lhs, rhs))
        self.expect("RBRACE")
        C = cats.category_from_generators(name, objects, generators, relations)
        self.ws.cat_generators[name] = tuple(gen_order)
        parts = ["ob " + ", ".join(objects)]
        for arrow in gen_order:
            a, b = generators[arrow]
            parts.append(f"ar {arrow} : {a} -> {b}")
        for lhs, rhs in rel_order:
            parts.append(f"rel {'.'.join(lhs)} = {'.'.join(rhs) if rhs else 'id'}")
        return C, f"category {name} {{ {' '.join(parts)} }}"

    def _decl_functor(self, name):
        self.expect("COLON")
        src_name = self._name("a category name")
        self.expect("ARROW")
        tgt_name = self._name("a category name")
        C = self.ws.get("category", src_name)
        D = self.ws.get("category", tgt_name)
        self.expect("LBRACE")
        self.keyword("ob")
        obj_map: dict[str, str] = {}
        while True:
            a = self._name("an object name")
            self.expect("ARROW")
            b = self._name("an object name")
            if a in obj_map:
                raise ResolutionError(f"functor {name}: object {a!r} mapped twice")
            obj_map[a] = b
            if not self.at("COMMA"):
                break
            self.eat()
        ar_map: dict[str, str] = {}
        if self.at("IDENT", "ar"):
            self.eat()
            while True:
                f = self._name("an arrow name")
                self.expect("ARROW")
                g = self._name("a target morphism name")
                if f in ar_map:
                    raise ResolutionError(f"functor {name}: arrow {f!r} mapped twice")
                ar_map[f] = g
                if not self.at("COMMA"):
                    break
                self.eat()
        self.expect("RBRACE")
        F = self._complete_functor(name, src_name, C, D, obj_map, ar_map)
        gens = self.ws.cat_generators.get(src_name, ())
        parts = ["ob " + ", ".join(f"{a} -> {obj_map[a]}" for a in C.objects)]
        if gens:
            parts.append("ar " + ", ".join(f"{g} -> {ar_map[g]}" for g in gens))
        return F, f"functor {name} : {src_name} -> {tgt_name} {{ {' '.join(parts)} }}"

    def _complete_functor(self, name, src_name, C, D, obj_map, ar_map):
        for x in C.objects:
            if x not in obj_map:
                raise ResolutionError(f"functor {name}: no image for object {x!r}")
            if obj_map[x] not in D.objects:
                raise ResolutionError(
                    f"functor {name}: image {obj_map[x]!r} is not an object of {D.name}")
        gens = self.ws.cat_generators.get(src_name, ())
        for g in gens:
            if g not in ar_map:
                raise ResolutionError(f"functor {name}: no image for arrow {g!r}")
        for g, img in ar_map.items():
            if g not in gens:
                raise ResolutionError(f"functor {name}: {g!r} is not a generating arrow")
            if img not in D.morphisms:
                raise ResolutionError(
                    f"functor {name}: image {img!r} is not a morphism of {D.name}")
        mor_map: dict[str, str] = {}
        for m in C.morphisms:
            if m.startswith("id_") and m[3:] in C.objects:
                mor_map[m] = D.ids[obj_map[m[3:]]]
                continue
            if "@" in m:
                raise ResolutionError(
                    f"functor {name}: composite {m!r} is ambiguous, rename the arrows")
            parts = m.split(".")
            for p in parts:
                if p not in ar_map:
                    raise ResolutionError(f"functor {name}: no image for arrow {p!r}")
            cur = ar_map[parts[-1]]
            for p in reversed(parts[:-1]):
                cur = D.comp[(ar_map[p], cur)]
            mor_map[m] = cur
        return cats.FunctorData(C, D, dict(obj_map), mor_map)

    def _decl_adjunction(self, name):
        self.expect("EQUALS")
        self.expect("LPAREN")
        left_name = self._name("a functor name")
        self.expect("COMMA")
        right_name = self._name("a functor name")
        self.expect("RPAREN")
        L = self.ws.get("functor", left_name)
        R = self.ws.get("functor", right_name)
        C, D = L.source, L.target
        if R.source != D or R.target != C:
            raise ResolutionError(
                f"adjunction {name}: {right_name} must run opposite to {left_name}")
        for cat in (C, D):
            for x in cat.objects:
                for y in cat.objects:
                    if len(cat.hom(x, y)) > 1:
                        raise InvariantError(
                            f"adjunction {name}: unit and counit are only derivable "
                            f"for thin categories, {cat.name} is not thin")
        unit_parts: dict[str, str] = {}
        for x in C.objects:
            hom = C.hom(x, R.obj_map[L.obj_map[x]])
            if not hom:
                raise InvariantError(
                    f"adjunction {name}: no unit component at {x}, not an adjunction")
            unit_parts[x] = hom[0]
        counit_parts: dict[str, str] = {}
        for y in D.objects:
            hom = D.hom(L.obj_map[R.obj_map[y]], y)
            if not hom:
                raise InvariantError(
                    f"adjunction {name}: no counit component at {y}, not an adjunction")
            counit_parts[y] = hom[0]
        unit = cats.NatTransData(
            cats.identity_functor(C), cats.compose_functors(R, L), unit_parts)
        counit = cats.NatTransData(
            cats.compose_functors(L, R), cats.identity_functor(D), counit_parts)
        adj = cats.AdjunctionData(L, R, unit, counit)
        return adj, f"adjunction {name} = ({left_name}, {right_name})"

    def _decl_series(self, name):
        self.expect("EQUALS")
        if self.at("LBRACK"):
            self.eat()
            coeffs = self._rational_list(("RBRACK",))
            self.expect("RBRACK")
            value = series(coeffs)
            body = "[" + ", ".join(str(c) for c in coeffs) + "]"
            return value, f"series {name} = {body}"
        form = self._name("one of rec, ratio, or a coefficient list")
        if form not in ("rec", "ratio"):
            self.fail("one of rec, ratio, or a coefficient list")
        self.expect("LPAREN")
        first = self._rational_list(("SEMI",))
        self.expect("SEMI")
        second = self._rational_list(("RPAREN",))
        self.expect("RPAREN")
        self.keyword("prec")
        prec = int(self.expect("NUMBER", expected="a precision").text)
        if form == "rec":
            value = from_recurrence(first, second, prec)
        else:
            value = from_ratio(first, second, prec)
        body = (
            f"{form}({', '.join(str(c) for c in first)}; "
            f"{', '.join(str(c) for c in second)}) prec {prec}")
        return value, f"series {name} = {body}"


def parse(source: str, where: str = "<input>", into: Workspace | None = None) -> Workspace:
    ws = into if into is not None else Workspace()
    parser = _Parser(tokenize(source, where), ws, where)
    parser.file()
    return ws


def parse_files(paths) -> Workspace:
    ws = Workspace()
    for path in paths:
        with open(path, "r", encoding="utf-8") as fh:
            parse(fh.read(), where=str(path), into=ws)
    return ws


# --- term literals for command arguments ------------------------------------


def parse_term_texts(texts, sig: Signature | None = None):
    """Parse standalone term literals sharing one variable registry.

    Returns the terms plus the variable names in index order, for printing
    substitutions with the caller's own names.
    """
    reg: dict[str, int] = {}
    terms = []
    for text in texts:
        p = _Parser(tokenize(text, "<term>"), Workspace(), "<term>")
        t = p.term("named", reg)
        p.expect("EOF", expected="end of term")
        if sig is not None:
            check_term(sig, t)
        terms.append(t)
    names = [None] * len(reg)
    for n, i in reg.items():
        names[i] = n
    return terms, names


def parse_axiom_text(text: str, sig: Signature):
    """Parse one "lhs ~ rhs" pair against a signature."""
    p = _Parser(tokenize(text, "<axiom>"), Workspace(), "<axiom>")
    reg: dict[str, int] = {}
    lhs = p.term("named", reg)
    p.expect("TILDE", expected="~")
    rhs = p.term("named", reg)
    p.expect("EOF", expected="end of axiom")
    check_term(sig, lhs)
    check_term(sig, rhs)
    return lhs, rhs
