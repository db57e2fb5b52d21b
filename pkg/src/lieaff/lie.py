"""Lie affgebras: heap-form antisymmetry and Jacobi, standard brackets, retractions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np


from . import engine
from .affgebra import (
    Affgebra,
    BiAffineMap,
    derivations,
    endomorphism_affgebra,
    is_derivation_along,
    maps_subset,
)
from .engine import Law
from .errors import (
    BudgetExceededError,
    DomainError,
    InternalConsistencyError,
    LawViolation,
    NotAUnitError,
    UnsupportedError,
)
from .heap import fold
from .module import AffineMap, RetractedModule, enumerate_affine_maps

LEFT, RIGHT = "left", "right"

# largest module accepted by the brute-force isomorphism search
ISOMORPHISM_MAX_SIZE = 32


def _degree(op: BiAffineMap) -> int:
    return op.diagonal_degree()


def antisymmetry_law(A, br, alt: bool = False, domain=None) -> Law:
    """⟨[a,b],[a,a],[b,a]⟩ = [b,b]  (alt: ⟨[a,b],[b,b],[b,a]⟩ = [a,a]).

    ``domain`` restricts the variables to a subset of ``A``.
    """
    D = _degree(br)
    S = domain or A
    if alt:
        return Law("lie.antisymmetry_alt", (S, S),
                   lambda a, b: (A.tern(br(a, b), br(b, b), br(b, a)), br(a, a)), A, (D, D), ("a", "b"))
    return Law("lie.antisymmetry", (S, S),
               lambda a, b: (A.tern(br(a, b), br(a, a), br(b, a)), br(b, b)), A, (D, D), ("a", "b"))


def jacobi_law(A, br, chirality: str = LEFT, order=(0, 1, 2), domain=None) -> Law:
    """Heap-form Jacobi identity.

    ``order`` places the diagonal terms: the two inner slots receive the
    diagonals of variables ``order[0]``, ``order[1]`` and the right-hand
    side that of ``order[2]``.
    """
    if chirality not in (LEFT, RIGHT):
        raise DomainError(f"unknown chirality {chirality!r}")
    D = _degree(br)

    def sides(a, b, c):
        v = (a, b, c)
        if chirality == LEFT:
            terms = br(a, br(b, c)), br(b, br(c, a)), br(c, br(a, b))
        else:
            terms = br(br(a, b), c), br(br(b, c), a), br(br(c, a), b)
        d = [br(v[i], v[i]) for i in order]
        return fold(A, [terms[0], d[0], terms[1], d[1], terms[2]]), d[2]

    suffix = "" if tuple(order) == (0, 1, 2) else "_" + "".join("abc"[i] for i in order)
    return Law(f"lie.jacobi_{chirality}{suffix}", (domain or A,) * 3, sides, A, (D, D, D), tuple("abc"))


def idempotency_law(A, br) -> Law:
    D = _degree(br)
    return Law("lie.idempotent", (A,), lambda a: (br(a, a), a), A, (D,), ("a",))


class LieAffgebra:
    """An affine module with a bi-affine bracket satisfying antisymmetry and Jacobi.

    With ``certify`` (the default) both laws are checked at construction and
    a :class:`LawViolation` is raised if either fails.
    """

    def __init__(self, module, bracket: BiAffineMap, chirality: str = LEFT, certify: bool = True,
                 strategy: str = "auto", budget=engine.DEFAULT_BUDGET):
        if chirality not in (LEFT, RIGHT):
            raise DomainError(f"unknown chirality {chirality!r}")
        if bracket.module is not module and bracket.module != module:
            raise DomainError("bracket lives on a different module")
        self.module = module
        self.bracket_map = bracket
        self.chirality = chirality
        self.certificate = None
        if certify:
            verdict = engine.combine("lie.certificate", [
                check_antisymmetry(self, strategy, budget, alt=False),
                check_jacobi(self, strategy, budget),
            ])
            if not verdict:
                raise LawViolation(f"bracket violates {verdict.failing().law}", verdict)
            self.certificate = verdict
        self._idempotent = None

    def __repr__(self):
        return f"LieAffgebra({self.module!r}, {self.chirality})"

    @property
    def ring(self):
        return self.module.ring

    def bracket(self, a, b):
        return self.bracket_map(a, b)

    @property
    def is_idempotent(self) -> bool:
        if self._idempotent is None:
            self._idempotent = engine.check(idempotency_law(self.module, self.bracket_map)).passed
        return self._idempotent

    def structure_constants(self):
        return self.bracket_map.to_json()

    def same_bracket(self, other: LieAffgebra) -> bool:
        return self.bracket_map == other.bracket_map


def bracket(L: LieAffgebra, a, b):
    return L.bracket(a, b)


def check_antisymmetry(L: LieAffgebra, strategy="auto", budget=engine.DEFAULT_BUDGET, jobs=1, alt: bool = True):
    """The antisymmetry law, plus (by default) its equivalent alternative form."""
    laws = [antisymmetry_law(L.module, L.bracket_map)]
    if alt:
        laws.append(antisymmetry_law(L.module, L.bracket_map, alt=True))
    return engine.check_all("lie.antisymmetry", laws, strategy, budget, jobs)


def check_jacobi(L: LieAffgebra, strategy="auto", budget=engine.DEFAULT_BUDGET, jobs=1, chirality=None):
    return engine.check(jacobi_law(L.module, L.bracket_map, chirality or L.chirality), strategy, budget, jobs)


def check_jacobi_variants(L: LieAffgebra, strategy="auto", budget=engine.DEFAULT_BUDGET, chirality=None):
    """All six placements of the diagonal terms; each is equivalent to the canonical one."""
    laws = [jacobi_law(L.module, L.bracket_map, chirality or L.chirality, p)
            for p in itertools.permutations(range(3))]
    return [engine.check(law, strategy, budget) for law in laws]


def check_lie(L: LieAffgebra, strategy="auto", budget=engine.DEFAULT_BUDGET, jobs=1):
    return engine.combine("lie.axioms", [check_antisymmetry(L, strategy, budget, jobs),
                                         check_jacobi(L, strategy, budget, jobs)])


def certified(module, br: BiAffineMap, reason: str, chirality=LEFT, strategy="auto", budget=engine.DEFAULT_BUDGET):
    """Certify a bracket that a theorem guarantees to be lawful."""
    try:
        return LieAffgebra(module, br, chirality, True, strategy, budget)
    except LawViolation as exc:
        raise InternalConsistencyError(f"{reason}: {exc}", exc.verdict, reason) from exc


# -- constructions -------------------------------------------------------

def make_sigma_bracket(A, sigma: AffineMap, **kw) -> LieAffgebra:
    """[a,b] = σ(a)."""
    br = BiAffineMap.from_function(A, lambda a, b: sigma(a))
    return certified(A, br, "sigma bracket", **kw)


def make_action_bracket(A, zeta, **kw) -> LieAffgebra:
    """[a,b] = ζ▷_a b."""
    zeta = A.ring.canonical(zeta)
    br = BiAffineMap.from_function(A, lambda a, b: A.act(zeta, a, b))
    return certified(A, br, "action bracket", **kw)


def make_commutator_bracket(G: Affgebra, **kw) -> LieAffgebra:
    """[a,b] = ⟨ab, ba, b⟩ for an associative affgebra."""
    from .affgebra import check_associative

    verdict = check_associative(G)
    if not verdict:
        raise LawViolation("commutator bracket needs an associative multiplication", verdict)
    A, m = G.module, G.mul
    br = BiAffineMap.from_function(A, lambda a, b: A.tern(m(a, b), m(b, a), b))
    return certified(A, br, "commutator bracket", **kw)


def pre_lie_laws(G: Affgebra, chirality: str = LEFT) -> list[Law]:
    A, m = G.module, G.mul
    if chirality == LEFT:
        def sides(a, b, c):
            return m(m(a, b), c), fold(A, [m(a, m(b, c)), m(b, m(a, c)), m(m(b, a), c)])
    elif chirality == RIGHT:
        def sides(a, b, c):
            return m(a, m(b, c)), fold(A, [m(m(a, b), c), m(m(a, c), b), m(a, m(c, b))])
    else:
        raise DomainError(f"unknown chirality {chirality!r}")
    return [Law(f"pre_lie.{chirality}", (A,) * 3, sides, A, (1, 1, 1), tuple("abc"))]


def check_pre_lie(G: Affgebra, chirality: str = LEFT, strategy="auto", budget=engine.DEFAULT_BUDGET):
    return engine.check_all(f"pre_lie.{chirality}", pre_lie_laws(G, chirality), strategy, budget)


def make_pre_lie_bracket(G: Affgebra, chirality: str = LEFT, **kw) -> LieAffgebra:
    """[a,b] = ⟨a·b, b·a, b⟩ for a pre-Lie product; refused if the pre-Lie law fails."""
    verdict = check_pre_lie(G, chirality)
    if not verdict:
        raise LawViolation(f"product is not {chirality} pre-Lie", verdict)
    A, m = G.module, G.mul
    br = BiAffineMap.from_function(A, lambda a, b: A.tern(m(a, b), m(b, a), b))
    return certified(A, br, "pre-Lie bracket", **kw)


# -- vector-valued brackets ------------------------------------------------

@dataclass
class VectorValuedBracket:
    """A bi-affine map A × A → A_o, written with values in A."""

    module: object
    origin: object
    map: BiAffineMap

    @property
    def retract(self) -> RetractedModule:
        return RetractedModule(self.module, self.origin)

    def __call__(self, a, b):
        return self.map(a, b)

    def laws(self) -> list[Law]:
        A, v, o, R = self.module, self.map, self.origin, self.retract

        def lin(a, u):
            # linear part of v(a, −) at the origin, applied to u
            return A.tern(v(a, u), v(a, A.batch(o, len(a))), o)

        def ggu(a, b, c):
            return R.combination([lin(a, v(b, c)), lin(b, v(c, a)), lin(c, v(a, b))]), A.batch(o, len(a))

        def jacobi_o(a, b, c):
            def br(x, y):
                return A.tern(v(x, y), o, y)

            return R.combination(
                [br(a, br(b, c)), br(b, br(c, a)), br(c, br(a, b))],
                [br(a, a), br(b, b), br(c, c)],
            ), A.batch(o, len(a))

        D = v.diagonal_degree()
        return [
            Law("vv.antisymmetry", (A, A), lambda a, b: (R.add(v(a, b), v(b, a)), A.batch(o, len(a))),
                A, (D, D), ("a", "b")),
            Law("vv.jacobi", (A,) * 3, ggu, A, (1, 1, 1), tuple("abc")),
            Law("vv.jacobi_o", (A,) * 3, jacobi_o, A, (D, D, D), tuple("abc")),
        ]

    def check(self, strategy="auto", budget=engine.DEFAULT_BUDGET):
        return engine.check_all("vv.axioms", self.laws(), strategy, budget)


def to_vector_valued(L: LieAffgebra, o) -> VectorValuedBracket:
    """[a,b]_v = ⟨[a,b], b, o⟩; needs an idempotent bracket."""
    A = L.module
    verdict = engine.check(idempotency_law(A, L.bracket_map))
    if not verdict:
        raise LawViolation("vector-valued form needs an idempotent bracket", verdict)
    o = A.point(o)
    v = BiAffineMap.from_function(A, lambda a, b: A.tern(L.bracket(a, b), b, o))
    return VectorValuedBracket(A, o, v)


def from_vector_valued(V: VectorValuedBracket, **kw) -> LieAffgebra:
    """[a,b] = [a,b]_v + b in A_o; needs 2 to be a unit of the scalar ring."""
    A = V.module
    if not A.ring.is_unit(2):
        raise NotAUnitError(f"2 is not a unit in {A.ring}")
    verdict = V.check()
    if not verdict:
        raise LawViolation(f"vector-valued bracket violates {verdict.failing().law}", verdict)
    o = V.origin
    br = BiAffineMap.from_function(A, lambda a, b: A.tern(V(a, b), o, b))
    return certified(A, br, "vector-valued correspondence", **kw)


def adjoint_map(L: LieAffgebra, a) -> AffineMap:
    """X_a: b ↦ [a, b]."""
    A = L.module
    a = A.point(a)
    return AffineMap.from_function(A, A, lambda b: L.bracket(A.batch(a, len(b)), b))


def bracket_affgebra(L: LieAffgebra) -> Affgebra:
    """The bracket viewed as a (non-associative) multiplication."""
    return Affgebra(L.module, L.bracket_map)


def is_adjoint_derivation(L: LieAffgebra, a, strategy="auto"):
    A = L.module
    return is_derivation_along(adjoint_map(L, a), AffineMap.identity(A), bracket_affgebra(L), strategy)


# -- the Lie affgebra of derivations ------------------------------------------

@dataclass
class DerivationAlgebra:
    """A set of affine endomorphisms with [X,Y] = ⟨XY, YX, σ⟩, as points of Aff(A)."""

    affgebra: Affgebra
    sigma: AffineMap
    maps: list

    def __post_init__(self):
        self.endo = endomorphism_affgebra(self.affgebra.module)
        E, comp = self.endo.module, self.endo.mul
        s = self.endo.point_of(self.sigma)
        self.bracket_map = BiAffineMap.from_function(E, lambda x, y: E.tern(comp(x, y), comp(y, x), s))
        self.domain = maps_subset(self.endo, self.maps)

    def bracket(self, X: AffineMap, Y: AffineMap) -> AffineMap:
        p = self.bracket_map(self.endo.point_of(X), self.endo.point_of(Y))
        return self.endo.map_of(p)

    def check_closure(self) -> engine.VerdictReport:
        """Every bracket of two members is again a member."""
        E = self.endo.module
        members = {E.encode(p) for p in self.domain.elements()}
        law = Law("derivations.closure", (self.domain, self.domain),
                  lambda x, y: (_member(E, self.bracket_map(x, y), members), np.ones(len(x), dtype=bool)),
                  _BOOL, None, ("X", "Y"))
        return engine.exhaustive_check(law)

    def check_lie(self, budget=engine.DEFAULT_BUDGET) -> engine.VerdictReport:
        E, br, S = self.endo.module, self.bracket_map, self.domain
        return engine.check_all("derivations.lie", [
            antisymmetry_law(E, br, domain=S), antisymmetry_law(E, br, alt=True, domain=S),
            jacobi_law(E, br, LEFT, domain=S)], engine.EXHAUSTIVE, budget)


class _BoolDomain:
    def equal(self, x, y):
        return np.asarray(x) == np.asarray(y)

    def batch(self, value, n):
        return np.broadcast_to(np.asarray(value), (n,))

    def format_value(self, value):
        return bool(value)


_BOOL = _BoolDomain()


def _member(E, points, members):
    return np.array([E.encode(p) in members for p in points], dtype=bool)


def derivation_algebra(G: Affgebra, sigma: AffineMap, require_commuting: bool = True, maps=None,
                       budget=engine.DEFAULT_BUDGET) -> DerivationAlgebra:
    """Der_σ(G) (or the Leibniz-only set when ``require_commuting`` is false) with its bracket."""
    if maps is None:
        maps = derivations(G, sigma, require_commuting, budget)
    return DerivationAlgebra(G, sigma, list(maps))


# -- retraction to a Lie algebra ---------------------------------------------

@dataclass
class LieAlgebraView:
    """A_o with the bilinear bracket [a,b]_o = ⟨[a,b],[a,o],[o,o],[o,b],o⟩."""

    lie: LieAffgebra
    origin: object
    retract: RetractedModule = field(init=False)

    def __post_init__(self):
        self.retract = RetractedModule(self.lie.module, self.origin)

    @property
    def module(self):
        return self.lie.module

    def bracket(self, a, b):
        br, o = self.lie.bracket, self.origin
        return fold(self.lie.module, [br(a, b), br(a, o), br(o, o), br(o, b), o])

    def laws(self) -> list[Law]:
        A, R, br, o = self.module, self.retract, self.bracket, self.origin
        D = self.lie.bracket_map.diagonal_degree()
        K = A.ring

        def zero(a):
            return A.batch(o, len(a))

        return [
            Law("lie_o.additive_left", (A,) * 3,
                lambda a, b, c: (br(R.add(a, b), c), R.add(br(a, c), br(b, c))), A, (1, 1, 1), tuple("abc")),
            Law("lie_o.additive_right", (A,) * 3,
                lambda a, b, c: (br(c, R.add(a, b)), R.add(br(c, a), br(c, b))), A, (1, 1, 1), tuple("abc")),
            Law("lie_o.homogeneous_left", (K, A, A),
                lambda s, a, b: (br(R.smul(s, a), b), R.smul(s, br(a, b))), A, (1, 1, 1), ("alpha", "a", "b")),
            Law("lie_o.homogeneous_right", (K, A, A),
                lambda s, a, b: (br(b, R.smul(s, a)), R.smul(s, br(b, a))), A, (1, 1, 1), ("alpha", "a", "b")),
            Law("lie_o.alternating", (A,), lambda a: (br(a, a), zero(a)), A, (D,), ("a",)),
            Law("lie_o.jacobi", (A,) * 3,
                lambda a, b, c: (R.combination([br(a, br(b, c)), br(b, br(c, a)), br(c, br(a, b))]), zero(a)),
                A, (1, 1, 1), tuple("abc")),
        ]

    def check(self, strategy="auto", budget=engine.DEFAULT_BUDGET):
        return engine.check_all("lie_o.axioms", self.laws(), strategy, budget)

    def structure_constants(self):
        from .affgebra import _bilinear_constants

        return _bilinear_constants(self.module, self.origin, self.bracket)


def retract_lie(L: LieAffgebra, o) -> LieAlgebraView:
    return LieAlgebraView(L, L.module.point(o))


def intertwining_law(L: LieAffgebra) -> Law:
    """τ_o^u([a,b]_o) = [τ_o^u a, τ_o^u b]_u for all o, u, a, b."""
    A, br = L.module, L.bracket

    def bracket_at(o, a, b):
        return fold(A, [br(a, b), br(a, o), br(o, o), br(o, b), o])

    def sides(o, u, a, b):
        lhs = A.tern(bracket_at(o, a, b), o, u)
        return lhs, bracket_at(u, A.tern(a, o, u), A.tern(b, o, u))

    return Law("lie_o.intertwining", (A,) * 4, sides, A, (2, 2, 1, 1), ("o", "u", "a", "b"))


def check_intertwining(L: LieAffgebra, strategy="auto", budget=engine.DEFAULT_BUDGET, jobs=1):
    return engine.check(intertwining_law(L), strategy, budget, jobs)


# -- isomorphism search ----------------------------------------------------

@dataclass
class IsomorphismVerdict:
    isomorphic: bool
    witness: AffineMap | None
    candidates: int

    def __bool__(self):
        return self.isomorphic

    def to_record(self):
        rec = {"isomorphic": self.isomorphic, "candidates": self.candidates}
        if self.witness is not None:
            rec["witness"] = self.witness.to_json()
        return rec


def isomorphism_law(L1: LieAffgebra, L2: LieAffgebra, f: AffineMap) -> Law:
    A = L1.module
    return Law("lie.isomorphism", (A, A), lambda a, b: (L2.bracket(f(a), f(b)), f(L1.bracket(a, b))),
               L2.module, (1, 1), ("a", "b"))


def are_isomorphic_small(L1: LieAffgebra, L2: LieAffgebra, budget=engine.DEFAULT_BUDGET) -> IsomorphismVerdict:
    """Search affine bijections f in lexicographic order for [fa, fb]₂ = f[a,b]₁."""
    A, B = L1.module, L2.module
    if not (A.is_finite and B.is_finite):
        raise UnsupportedError("isomorphism search needs finite modules")
    if max(A.size, B.size) > ISOMORPHISM_MAX_SIZE:
        raise BudgetExceededError(f"modules larger than {ISOMORPHISM_MAX_SIZE} points are not searched",
                                  ISOMORPHISM_MAX_SIZE, max(A.size, B.size))
    if A.size != B.size:
        return IsomorphismVerdict(False, None, 0)
    tried = 0
    for f in enumerate_affine_maps(A, B, budget=budget):
        if not f.is_bijective():
            continue
        tried += 1
        if engine.exhaustive_check(isomorphism_law(L1, L2, f), budget):
            return IsomorphismVerdict(True, f, tried)
    return IsomorphismVerdict(False, None, tried)
