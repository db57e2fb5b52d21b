"""Nijenhuis operators on Lie affgebras: deformation, power towers, blends, retraction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import engine
from .affgebra import BiAffineMap
from .engine import Law
from .errors import BudgetExceededError, InternalConsistencyError, LawViolation
from .heap import fold
from .lie import LieAffgebra, LieAlgebraView, certified, retract_lie
from .module import AffineMap, enumerate_affine_maps, linearise


def nijenhuis_bracket(L: LieAffgebra, N: AffineMap, a, b):
    """[a,b]_N = ⟨[Na,b], N[a,b], [a,Nb]⟩ (defined for any affine N)."""
    br = L.bracket
    return L.module.tern(br(N(a), b), N(br(a, b)), br(a, N(b)))


def nijenhuis_bracket_map(L: LieAffgebra, N: AffineMap) -> BiAffineMap:
    return BiAffineMap.from_function(L.module, lambda a, b: nijenhuis_bracket(L, N, a, b))


def nijenhuis_law(L: LieAffgebra, N: AffineMap) -> Law:
    A, br = L.module, L.bracket
    return Law("nijenhuis.condition", (A, A),
               lambda a, b: (br(N(a), N(b)), N(nijenhuis_bracket(L, N, a, b))), A, (1, 1), ("a", "b"))


def is_nijenhuis(L: LieAffgebra, N: AffineMap, strategy="auto", budget=engine.DEFAULT_BUDGET, jobs=1):
    return engine.check(nijenhuis_law(L, N), strategy, budget, jobs)


@dataclass
class NijenhuisCandidate:
    L: LieAffgebra
    N: AffineMap
    verified: bool = False
    verdict: engine.VerdictReport | None = None


def verify_nijenhuis(L: LieAffgebra, N, strategy="auto", budget=engine.DEFAULT_BUDGET) -> NijenhuisCandidate:
    if isinstance(N, NijenhuisCandidate):
        if N.verified:
            return N
        N = N.N
    verdict = is_nijenhuis(L, N, strategy, budget)
    return NijenhuisCandidate(L, N, verdict.passed, verdict)


def _verified(L, N, strategy="auto", budget=engine.DEFAULT_BUDGET) -> NijenhuisCandidate:
    cand = verify_nijenhuis(L, N, strategy, budget)
    if not cand.verified:
        raise LawViolation("operator is not Nijenhuis", cand.verdict)
    return cand


def _theorem(check, reason):
    if not check:
        raise InternalConsistencyError(f"{reason} failed at {check.failing().law}", check, reason)
    return check


def deform(L: LieAffgebra, N, strategy="auto", budget=engine.DEFAULT_BUDGET) -> LieAffgebra:
    """The Lie affgebra with bracket [−,−]_N; N must pass the Nijenhuis condition."""
    cand = _verified(L, N, strategy, budget)
    return certified(L.module, nijenhuis_bracket_map(L, cand.N), "deformed bracket",
                     chirality=L.chirality, strategy=strategy, budget=budget)


# -- powers and the hierarchy ---------------------------------------------

def power_identity_laws(L: LieAffgebra, N: AffineMap, k: int, powers) -> list[Law]:
    """The four commutation identities between N^k, N and the bracket."""
    A, br = L.module, L.bracket
    Nk, Nk1 = powers[k], powers[k + 1]
    slots, deg, names = (A, A), (1, 1), ("a", "b")
    return [
        Law(f"tower.power_left[k={k}]", slots,
            lambda a, b: (br(Nk(a), N(b)), A.tern(N(br(Nk(a), b)), Nk1(br(a, b)), Nk(br(a, N(b))))), A, deg, names),
        Law(f"tower.power_right[k={k}]", slots,
            lambda a, b: (br(N(a), Nk(b)), A.tern(N(br(a, Nk(b))), Nk1(br(a, b)), Nk(br(N(a), b)))), A, deg, names),
        Law(f"tower.power_shift[k={k}]", slots,
            lambda a, b: (Nk1(br(a, b)), A.tern(N(br(Nk(a), b)), br(Nk(a), N(b)), Nk(br(a, N(b))))), A, deg, names),
        Law(f"tower.power_shift_alt[k={k}]", slots,
            lambda a, b: (Nk1(br(a, b)), A.tern(Nk(br(N(a), b)), br(N(a), Nk(b)), N(br(a, Nk(b))))), A, deg, names),
    ]


def level_shift_law(L: LieAffgebra, powers, k: int, l: int) -> Law:
    """N^l [a,b]_{N^{k+l}} = [N^l a, N^l b]_{N^k}."""
    A = L.module
    Nl, Nkl, Nk = powers[l], powers[k + l], powers[k]
    return Law(f"tower.level_shift[k={k},l={l}]", (A, A),
               lambda a, b: (Nl(nijenhuis_bracket(L, Nkl, a, b)), nijenhuis_bracket(L, Nk, Nl(a), Nl(b))),
               A, (1, 1), ("a", "b"))


def coherence_law(L: LieAffgebra, N: AffineMap, powers, k: int) -> Law:
    """[a,b]_{N^{k+1}} = ⟨[Na,b]_{N^k}, N[a,b]_{N^k}, [a,Nb]_{N^k}⟩."""
    A, Nk = L.module, powers[k]

    def bk(a, b):
        return nijenhuis_bracket(L, Nk, a, b)

    return Law(f"tower.coherence[k={k}]", (A, A),
               lambda a, b: (nijenhuis_bracket(L, powers[k + 1], a, b), A.tern(bk(N(a), b), N(bk(a, b)), bk(a, N(b)))),
               A, (1, 1), ("a", "b"))


@dataclass
class BracketTower:
    base: LieAffgebra
    N: AffineMap
    powers: list = field(default_factory=list)
    levels: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    def level(self, k: int) -> LieAffgebra:
        return self.levels[k]

    def to_record(self):
        return {
            "levels": [{"k": k, "bracket": lvl.structure_constants()} for k, lvl in enumerate(self.levels)],
            "checks": [c.to_record() for c in self.checks],
        }


def _powers(N: AffineMap, kmax: int) -> list[AffineMap]:
    out = [AffineMap.identity(N.source)]
    for _ in range(kmax):
        out.append(N.compose(out[-1]))
    return out


def power_tower(L: LieAffgebra, N, kmax: int, strategy="auto", budget=engine.DEFAULT_BUDGET,
                check_identities: bool = True) -> BracketTower:
    """Levels 0..kmax of [−,−]_{N^k}, each certified, with the hierarchy identities cross-checked.

    Any failure here contradicts the hierarchy theorem and raises
    :class:`InternalConsistencyError`.
    """
    N = _verified(L, N, strategy, budget).N
    powers = _powers(N, 2 * kmax + 1)
    tower = BracketTower(L, N, powers)
    for k in range(kmax + 1):
        tower.checks.append(_theorem(is_nijenhuis(L, powers[k], strategy, budget), f"N^{k} Nijenhuis"))
        tower.levels.append(certified(L.module, nijenhuis_bracket_map(L, powers[k]), f"level {k} bracket",
                                      chirality=L.chirality, strategy=strategy, budget=budget))
    if check_identities:
        for k in range(kmax + 1):
            tower.checks.append(_theorem(
                engine.check_all(f"tower.powers[k={k}]", power_identity_laws(L, N, k, powers), strategy, budget),
                f"power identities at k={k}"))
            tower.checks.append(_theorem(engine.check(coherence_law(L, N, powers, k), strategy, budget),
                                         f"coherence at k={k}"))
            for l in range(kmax + 1):
                tower.checks.append(_theorem(engine.check(level_shift_law(L, powers, k, l), strategy, budget),
                                             f"level shift at k={k}, l={l}"))
    return tower


def blend_operator(L: LieAffgebra, N, k: int, l: int, alpha, strategy="auto", budget=engine.DEFAULT_BUDGET,
                   verify: bool = True) -> AffineMap:
    """a ↦ α▷_{N^k a} N^l a, itself a Nijenhuis operator."""
    N = _verified(L, N, strategy, budget).N
    A = L.module
    powers = _powers(N, max(k, l))
    alpha = A.ring.canonical(alpha)
    M = AffineMap.from_function(A, A, lambda a: A.act(alpha, powers[k](a), powers[l](a)))
    if verify:
        _theorem(is_nijenhuis(L, M, strategy, budget), f"blend N_{alpha}^({k},{l}) Nijenhuis")
    return M


def compatibility_bracket(L: LieAffgebra, N, k: int, l: int, alpha, strategy="auto",
                          budget=engine.DEFAULT_BUDGET) -> LieAffgebra:
    """(a,b) ↦ α▷_{[a,b]_{N^k}} [a,b]_{N^l}, certified and matched against the blend's bracket."""
    N = _verified(L, N, strategy, budget).N
    A = L.module
    powers = _powers(N, max(k, l))
    alpha = A.ring.canonical(alpha)
    br = BiAffineMap.from_function(
        A, lambda a, b: A.act(alpha, nijenhuis_bracket(L, powers[k], a, b), nijenhuis_bracket(L, powers[l], a, b)))
    blend = blend_operator(L, N, k, l, alpha, strategy, budget)
    if br != nijenhuis_bracket_map(L, blend):
        raise InternalConsistencyError(f"compatibility bracket ({k},{l},{alpha}) differs from the blend bracket",
                                       None, "compatibility")
    return certified(A, br, f"compatibility bracket ({k},{l},{alpha})", chirality=L.chirality,
                     strategy=strategy, budget=budget)


# -- retraction -------------------------------------------------------------

def classical_nijenhuis_law(view: LieAlgebraView, No: AffineMap) -> Law:
    """[N_o a, N_o b]_o = N_o([N_o a, b]_o − N_o[a,b]_o + [a, N_o b]_o)."""
    A, R, br = view.module, view.retract, view.bracket

    def sides(a, b):
        inner = R.combination([br(No(a), b), br(a, No(b))], [No(br(a, b))])
        return br(No(a), No(b)), No(inner)

    return Law("nijenhuis.classical", (A, A), sides, A, (1, 1), ("a", "b"))


def is_nijenhuis_linear(view: LieAlgebraView, No: AffineMap, strategy="auto", budget=engine.DEFAULT_BUDGET):
    return engine.check(classical_nijenhuis_law(view, No), strategy, budget)


def retract_operator(L: LieAffgebra, N, o, strategy="auto", budget=engine.DEFAULT_BUDGET) -> AffineMap:
    """N_o a = ⟨Na, No, o⟩, checked against the classical Nijenhuis condition on the retract."""
    N = _verified(L, N, strategy, budget).N
    view = retract_lie(L, o)
    No = linearise(N, view.origin, view.origin)
    _theorem(is_nijenhuis_linear(view, No, strategy, budget), "retracted operator classical Nijenhuis")
    return No


def retraction_square_law(L: LieAffgebra, N: AffineMap, o) -> Law:
    """Deform-then-retract equals retract-then-classically-deform."""
    A = L.module
    view = retract_lie(L, o)
    No = linearise(N, view.origin, view.origin)
    R, br, o = view.retract, view.bracket, view.origin

    def deformed_then_retracted(a, b):
        def bN(x, y):
            return nijenhuis_bracket(L, N, x, y)

        return fold(A, [bN(a, b), bN(a, o), bN(o, o), bN(o, b), o])

    def retracted_then_deformed(a, b):
        return R.combination([br(No(a), b), br(a, No(b))], [No(br(a, b))])

    return Law("nijenhuis.retraction_square", (A, A),
               lambda a, b: (deformed_then_retracted(a, b), retracted_then_deformed(a, b)), A, (1, 1), ("a", "b"))


def check_retraction_square(L: LieAffgebra, N, o, strategy="auto", budget=engine.DEFAULT_BUDGET):
    N = _verified(L, N, strategy, budget).N
    return engine.check(retraction_square_law(L, N, o), strategy, budget)


# -- search -----------------------------------------------------------------

@dataclass
class NijenhuisSearch:
    found: list
    examined: int
    truncated: bool

    def __iter__(self):
        return iter(self.found)

    def __len__(self):
        return len(self.found)

    def maps(self):
        return [c.N for c in self.found]


def search_nijenhuis(L: LieAffgebra, budget=engine.DEFAULT_BUDGET, candidates=None, strategy="auto") -> NijenhuisSearch:
    """Affine endomorphisms passing the Nijenhuis condition, in lexicographic (M, t) order.

    ``candidates`` restricts the search to a given iterable of maps.  When
    more than ``budget`` candidates exist, the first ``budget`` are examined
    and the result is flagged as truncated.
    """
    A = L.module
    truncated = False
    if candidates is None:
        try:
            candidates = list(enumerate_affine_maps(A, A, budget=budget))
        except BudgetExceededError:
            candidates = list(itertools.islice(enumerate_affine_maps(A, A, budget=None), budget))
            truncated = True
    else:
        candidates = list(candidates)
        if budget is not None and len(candidates) > budget:
            candidates, truncated = candidates[:budget], True
    found = []
    for N in candidates:
        verdict = is_nijenhuis(L, N, strategy)
        if verdict:
            found.append(NijenhuisCandidate(L, N, True, verdict))
    return NijenhuisSearch(found, len(candidates), truncated)
