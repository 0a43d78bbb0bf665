"""One-sorted equational theories: terms, unification, and congruence proofs.

Theories are finite presentations (signature + axiom pairs). Congruence of two
terms is only ever semi-decided: Provable comes with a replayable certificate,
everything else is Unknown. Theory morphisms fix objects (the skeletal
one-sorted setting) and are determined by symbol images.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import BudgetInvalid, InvariantError, NotParallel, SignatureMismatch, SourceMismatch


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise InvariantError("variable indices are naturals")


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple = ()


Term = Var | App


@dataclass(frozen=True)
class Signature:
    """Operation symbols with arities, in declaration order."""

    ops: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [n for n, _ in self.ops]
        if len(set(names)) != len(names):
            raise InvariantError("duplicate operation symbols")
        if any(a < 0 for _, a in self.ops):
            raise InvariantError("arities are naturals")

    def arity(self, symbol: str) -> int:
        for n, a in self.ops:
            if n == symbol:
                return a
        raise SignatureMismatch(f"unknown symbol {symbol!r}")

    def __contains__(self, symbol: str) -> bool:
        return any(n == symbol for n, _ in self.ops)


def check_term(sig: Signature, t: Term, context: int | None = None) -> None:
    """Validate arities (and variable bounds when a context size is given)."""
    if isinstance(t, Var):
        if context is not None and t.index >= context:
            raise InvariantError(f"variable {t.index} outside context of size {context}")
        return
    if sig.arity(t.symbol) != len(t.args):
        raise SignatureMismatch(f"{t.symbol!r} applied to {len(t.args)} arguments")
    for a in t.args:
        check_term(sig, a, context)


def term_vars(t: Term) -> set[int]:
    if isinstance(t, Var):
        return {t.index}
    out: set[int] = set()
    for a in t.args:
        out |= term_vars(a)
    return out


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def term_depth(t: Term) -> int:
    """Height: variables 0, applications 1 + max over arguments."""
    if isinstance(t, Var):
        return 0
    return 1 + max((term_depth(a) for a in t.args), default=0)


def print_term(t: Term, names: list[str] | None = None) -> str:
    if isinstance(t, Var):
        if names is not None and t.index < len(names):
            return names[t.index]
        return f"x{t.index}"
    if not t.args:
        return t.symbol
    return t.symbol + "(" + ",".join(print_term(a, names) for a in t.args) + ")"


# -- substitution ------------------------------------------------------------

Substitution = dict[int, Term]


def substitute(t: Term, s: Substitution) -> Term:
    """Simultaneous substitution; variables outside s are untouched."""
    if isinstance(t, Var):
        return s.get(t.index, t)
    return App(t.symbol, tuple(substitute(a, s) for a in t.args))


def compose_subst(first: Substitution, then: Substitution) -> Substitution:
    """Substitution doing `first`, then `then`."""
    out = {v: substitute(t, then) for v, t in first.items()}
    for v, t in then.items():
        out.setdefault(v, t)
    return out


def is_idempotent(s: Substitution) -> bool:
    return all(substitute(t, s) == t for t in s.values())


# -- unification -------------------------------------------------------------

def unify(t1: Term, t2: Term) -> Substitution | None:
    """Most general unifier with occurs check, or None; result is idempotent."""
    subst: Substitution = {}
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        a, b = substitute(a, subst), substitute(b, subst)
        if a == b:
            continue
        if isinstance(a, Var):
            if a.index in term_vars(b):
                return None
            bind = {a.index: b}
            subst = {v: substitute(t, bind) for v, t in subst.items()}
            subst[a.index] = b
        elif isinstance(b, Var):
            stack.append((b, a))
        else:
            if a.symbol != b.symbol or len(a.args) != len(b.args):
                return None
            stack.extend(zip(a.args, b.args))
    return subst


def match(pattern: Term, subject: Term) -> Substitution | None:
    """One-sided unification: bind pattern variables only."""
    binding: Substitution = {}
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            if p.index in binding:
                if binding[p.index] != s:
                    return None
            else:
                binding[p.index] = s
        else:
            if not isinstance(s, App) or s.symbol != p.symbol or len(s.args) != len(p.args):
                return None
            stack.extend(zip(p.args, s.args))
    return binding


# -- presentations and congruence proofs -------------------------------------

@dataclass(frozen=True)
class TheoryPresentation:
    name: str
    signature: Signature
    axioms: tuple[tuple[Term, Term], ...]

    def __post_init__(self):
        for lhs, rhs in self.axioms:
            check_term(self.signature, lhs)
            check_term(self.signature, rhs)


@dataclass(frozen=True)
class Budget:
    """Proof-search limits: node expansions and a term-size cap."""

    steps: int = 10_000
    max_term_size: int = 64

    def __post_init__(self):
        if self.steps <= 0 or self.max_term_size <= 0:
            raise BudgetInvalid("budget limits must be positive")


@dataclass(frozen=True)
class ProofStep:
    """One rewrite: an axiom instance applied at a position.

    position addresses the rewritten subterm by argument indices from the
    root; forward means the axiom was used left-to-right.
    """

    position: tuple[int, ...]
    axiom: int
    subst: tuple[tuple[int, Term], ...]
    forward: bool


@dataclass(frozen=True)
class CongruenceResult:
    status: str  # "provable" | "unknown"
    certificate: tuple[ProofStep, ...] | None
    expansions: int

    @property
    def provable(self) -> bool:
        return self.status == "provable"


def subterm_at(t: Term, pos: tuple[int, ...]) -> Term:
    for i in pos:
        if not isinstance(t, App) or i >= len(t.args):
            raise InvariantError(f"position {pos} does not exist")
        t = t.args[i]
    return t


def replace_at(t: Term, pos: tuple[int, ...], new: Term) -> Term:
    if not pos:
        return new
    if not isinstance(t, App):
        raise InvariantError(f"position {pos} does not exist")
    i = pos[0]
    args = list(t.args)
    args[i] = replace_at(args[i], pos[1:], new)
    return App(t.symbol, tuple(args))


def positions(t: Term):
    """All positions in preorder."""
    yield ()
    if isinstance(t, App):
        for i, a in enumerate(t.args):
            for rest in positions(a):
                yield (i,) + rest


def _one_step_rewrites(theory: TheoryPresentation, t: Term, max_size: int):
    """Deterministic successor enumeration: (new term, step).

    Steps that would introduce variables absent from the matched side are
    skipped; they need instantiation guessing. The bidirectional search in
    congruent() recovers them from the opposite endpoint, where the same
    axiom application is variable-dropping.
    """
    for pos in positions(t):
        sub = subterm_at(t, pos)
        for i, (lhs, rhs) in enumerate(theory.axioms):
            for forward, (src, dst) in ((True, (lhs, rhs)), (False, (rhs, lhs))):
                if not term_vars(dst) <= term_vars(src):
                    continue
                binding = match(src, sub)
                if binding is None:
                    continue
                new = replace_at(t, pos, substitute(dst, binding))
                if term_size(new) > max_size:
                    continue
                step = ProofStep(pos, i, tuple(sorted(binding.items())), forward)
                yield new, step


def _invert(step: ProofStep) -> ProofStep:
    return ProofStep(step.position, step.axiom, step.subst, not step.forward)


def congruent(
    theory: TheoryPresentation, lhs: Term, rhs: Term, budget: Budget | int = Budget()
) -> CongruenceResult:
    """Semi-decide lhs ~ rhs under the theory's axioms.

    Bidirectional breadth-first search over single axiom-instance rewrites.
    Provable always carries a certificate replayable by replay_certificate;
    budget exhaustion yields Unknown, never a negative.
    """
    if isinstance(budget, int):
        budget = Budget(steps=budget)
    if lhs == rhs:
        return CongruenceResult("provable", (), 0)

    # parents[side][term] = (previous term, step applied to previous)
    sides = ({lhs: None}, {rhs: None})
    frontiers = (deque([lhs]), deque([rhs]))
    expansions = 0

    def build(meeting: Term) -> tuple[ProofStep, ...]:
        fwd = []
        cur = meeting
        while sides[0][cur] is not None:
            prev, step = sides[0][cur]
            fwd.append(step)
            cur = prev
        fwd.reverse()
        back = []
        cur = meeting
        while sides[1][cur] is not None:
            prev, step = sides[1][cur]
            back.append(_invert(step))
            cur = prev
        return tuple(fwd + back)

    while expansions < budget.steps and (frontiers[0] or frontiers[1]):
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) and frontiers[0] else 1
        if not frontiers[side]:
            side = 1 - side
        current = frontiers[side].popleft()
        expansions += 1
        for new, step in _one_step_rewrites(theory, current, budget.max_term_size):
            if new in sides[side]:
                continue
            sides[side][new] = (current, step)
            if new in sides[1 - side]:
                return CongruenceResult("provable", build(new), expansions)
            frontiers[side].append(new)
    return CongruenceResult("unknown", None, expansions)


def replay_certificate(
    theory: TheoryPresentation, lhs: Term, rhs: Term, certificate
) -> bool:
    """Re-run a proof chain step by step, validating each rewrite."""
    cur = lhs
    for step in certificate:
        l, r = theory.axioms[step.axiom]
        src, dst = (l, r) if step.forward else (r, l)
        binding = dict(step.subst)
        if substitute(src, binding) != subterm_at(cur, step.position):
            return False
        cur = replace_at(cur, step.position, substitute(dst, binding))
    return cur == rhs


# -- theory morphisms and quotients -------------------------------------------

@dataclass(frozen=True)
class TheoryMorphismData:
    """Determined by symbol images: each n-ary symbol goes to a term over
    variables x0..x(n-1) of the target theory. Objects (naturals) are fixed."""

    source: TheoryPresentation
    target: TheoryPresentation
    images: tuple[tuple[str, Term], ...]

    def __post_init__(self):
        named = dict(self.images)
        for sym, arity in self.source.signature.ops:
            if sym not in named:
                raise InvariantError(f"morphism misses image for {sym!r}")
            img = named[sym]
            check_term(self.target.signature, img, context=arity)
        if len(named) != len(self.source.signature.ops):
            raise InvariantError("morphism names symbols outside the source signature")

    def image_of(self, symbol: str) -> Term:
        for s, t in self.images:
            if s == symbol:
                return t
        raise SignatureMismatch(f"no image for {symbol!r}")

    def apply(self, t: Term) -> Term:
        if isinstance(t, Var):
            return t
        translated = tuple(self.apply(a) for a in t.args)
        return substitute(self.image_of(t.symbol), dict(enumerate(translated)))


def identity_morphism(T: TheoryPresentation) -> TheoryMorphismData:
    images = tuple(
        (sym, App(sym, tuple(Var(i) for i in range(ar)))) for sym, ar in T.signature.ops
    )
    return TheoryMorphismData(T, T, images)


def quotient_theory(
    T: TheoryPresentation, extra, name: str | None = None
) -> tuple[TheoryPresentation, TheoryMorphismData]:
    """Presentation with added axioms plus the canonical morphism into it.

    The morphism is identity on symbols, hence full and bijective on objects
    by construction.
    """
    extra = tuple((l, r) for l, r in extra)
    quotient = TheoryPresentation(
        name or (T.name + "/~"), T.signature, T.axioms + extra
    )
    m = identity_morphism(T)
    return quotient, TheoryMorphismData(T, quotient, m.images)


def general_cosolution_theories(
    pairs, name: str | None = None
) -> tuple[TheoryPresentation, TheoryMorphismData]:
    """Universal quotient coequalizing each (P, Q) pair of theory morphisms.

    Generators: one axiom P(sym) ~ Q(sym) per source symbol; congruences are
    closed under composition and tupling, so symbol images suffice.
    """
    pairs = tuple(pairs)
    if not pairs:
        raise SourceMismatch("need at least one morphism pair")
    T = pairs[0][0].target
    for P, Q in pairs:
        if P.target != T:
            raise SourceMismatch("all pairs must land in one common theory")
        if Q.target != P.target:
            raise SourceMismatch("pair members must share their target")
        if Q.source != P.source:
            raise SourceMismatch("pair members must share their source")
    extra = []
    for P, Q in pairs:
        for sym, _ in P.source.signature.ops:
            l, r = P.image_of(sym), Q.image_of(sym)
            if l != r:
                extra.append((l, r))
    return quotient_theory(T, extra, name)


def kernel_pair_membership(
    M: TheoryMorphismData, f: Term, g: Term, budget: Budget | int = Budget()
) -> str:
    """"InKernel" when M(f) ~ M(g) is provable in the target, else "Unknown"."""
    res = congruent(M.target, M.apply(f), M.apply(g), budget)
    return "InKernel" if res.provable else "Unknown"


@dataclass(frozen=True)
class AgreementSubtheory:
    """Wide subtheory of terms on which two parallel morphisms provably agree.

    Not materialized as a presentation (it rarely has a finite one); offers a
    budgeted membership test instead.
    """

    P: TheoryMorphismData
    Q: TheoryMorphismData

    def contains(self, t: Term, budget: Budget | int = Budget()) -> str:
        res = congruent(self.P.target, self.P.apply(t), self.Q.apply(t), budget)
        return "InSubtheory" if res.provable else "Unknown"


@dataclass(frozen=True)
class LawvereEquationResult:
    holds: bool
    witness: AgreementSubtheory


def is_lawvere_equation(P: TheoryMorphismData, Q: TheoryMorphismData) -> LawvereEquationResult:
    """Every parallel pair qualifies here: morphisms fix objects (naturals),
    so the agreement subtheory is wide and its inclusion is surjective on
    objects. The witness is returned as a membership tester."""
    if P.source != Q.source or P.target != Q.target:
        raise NotParallel("morphism pair must share source and target theories")
    return LawvereEquationResult(True, AgreementSubtheory(P, Q))
