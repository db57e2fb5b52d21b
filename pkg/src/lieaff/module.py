"""Affine K-modules: the ternary action α▷_a b, affine maps and retracts."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import engine
from .engine import Law
from .errors import BudgetExceededError, DomainError, LawViolation, UnsupportedError
from .heap import CoordinateHeap, Heap, TableHeap, fold
from .scalars import Ring, Scalar


class AffineModule(Heap):
    """Mixin interface: a heap with a scalar ring and the action ``act``."""

    ring: Ring

    def act(self, alpha, a, b):
        raise NotImplementedError

    @property
    def dimension(self):
        raise NotImplementedError

    def _alpha(self, alpha):
        if isinstance(alpha, Scalar):
            if alpha.ring != self.ring:
                raise DomainError(f"scalar from {alpha.ring} acting on a {self.ring}-module")
            alpha = alpha.value
        if isinstance(alpha, (int, np.integer, Fraction)):
            return self.ring.canonical(alpha)
        return np.asarray(alpha)


class CoordinateModule(CoordinateHeap, AffineModule):
    """``ring**dim`` with α▷_a b = αb − αa + a componentwise.

    The coordinates are a distinguished chart used for serialisation, for
    structure constants and for frame checks; nothing else depends on the
    chart origin.
    """

    def act(self, alpha, a, b):
        alpha = self._alpha(alpha)
        if isinstance(alpha, np.ndarray):
            alpha = alpha[..., None]
        a = np.asarray(a)
        return self.ring.reduce(alpha * (np.asarray(b) - a) + a)

    @property
    def dimension(self):
        return self.dim


class TableModule(TableHeap, AffineModule):
    """A finite affine module over a finite ring, given by heap and action tables.

    ``action[alpha][a][b]`` is the index of α▷_a b, with ``alpha`` the
    canonical residue of the scalar.
    """

    def __init__(self, op, ring: Ring, action, verify: bool = True):
        super().__init__(op, verify=verify)
        if not ring.is_finite:
            raise UnsupportedError("table modules need a finite scalar ring")
        action = np.asarray(action, dtype=np.int64)
        n = self.size
        if action.shape != (ring.size, n, n):
            raise DomainError(f"action table must have shape {(ring.size, n, n)}, got {action.shape}")
        if action.min() < 0 or action.max() >= n:
            raise DomainError("action table entries must be point indices")
        self.ring = ring
        self.action = action
        if verify:
            verdict = check_affine_axioms(self)
            if not verdict:
                raise LawViolation(f"tables violate {verdict.failing().law}", verdict)

    def __repr__(self):
        return f"TableModule(size={self.size}, ring={self.ring})"

    def act(self, alpha, a, b):
        alpha = self._alpha(alpha)
        self.check(a, b)
        return self.action[alpha, a, b]

    @property
    def dimension(self):
        """Rank of the retract when it is a vector space over a prime field, else ``None``."""
        if not self.ring.is_field:
            return None
        k = round(math.log(self.size, self.ring.size))
        return k if self.ring.size**k == self.size else None


def translate(A: Heap, o, u, a):
    """τ_o^u(a) = ⟨a, o, u⟩."""
    return A.tern(a, o, u)


def translation_laws(A: "AffineModule") -> list[Law]:
    """τ_o^u carries addition and scalar action of A_o onto those of A_u."""
    K = A.ring

    def additive(o, u, a, b):
        return translate(A, o, u, A.tern(a, o, b)), A.tern(translate(A, o, u, a), u, translate(A, o, u, b))

    def homogeneous(s, o, u, a):
        return translate(A, o, u, A.act(s, o, a)), A.act(s, u, translate(A, o, u, a))

    return [
        Law("translation.additive", (A, A, A, A), additive, A, (1,) * 4, ("o", "u", "a", "b")),
        Law("translation.homogeneous", (K, A, A, A), homogeneous, A, (1,) * 4, ("alpha", "o", "u", "a")),
    ]


@dataclass(frozen=True)
class RetractedModule:
    """The K-module A_o: a + b = ⟨a,o,b⟩, αa = α▷_o a, zero = o."""

    base: AffineModule
    origin: object

    @property
    def ring(self):
        return self.base.ring

    @property
    def zero(self):
        return self.origin

    def add(self, a, b):
        return self.base.tern(a, self.origin, b)

    def sub(self, a, b):
        return self.base.tern(a, b, self.origin)

    def neg(self, a):
        return self.base.tern(self.origin, a, self.origin)

    def smul(self, alpha, a):
        return self.base.act(alpha, self.origin, a)

    def arrow(self, b, c):
        """The vector from b to c, ⟨o,b,c⟩."""
        return self.base.tern(self.origin, b, c)

    def combination(self, plus=(), minus=()):
        """Σ plus − Σ minus evaluated in A_o as one heap fold."""
        plus, minus = list(plus), list(minus)
        while len(minus) < len(plus):
            minus.append(self.origin)
        while len(plus) < len(minus) + 1:
            plus.append(self.origin)
        seq = [plus[0]]
        for m, p in zip(minus, plus[1:]):
            seq += [m, p]
        return fold(self.base, seq)


def retract_module(A: AffineModule, o) -> RetractedModule:
    return RetractedModule(A, A.point(o))


def retracted_module_laws(R: RetractedModule) -> list[Law]:
    A, K = R.base, R.ring
    return [
        Law("retract.add_assoc", (A,) * 3,
            lambda a, b, c: (R.add(R.add(a, b), c), R.add(a, R.add(b, c))), A, (1, 1, 1)),
        Law("retract.add_comm", (A, A), lambda a, b: (R.add(a, b), R.add(b, a)), A, (1, 1)),
        Law("retract.add_zero", (A,), lambda a: (R.add(a, R.zero), a), A, (1,)),
        Law("retract.add_neg", (A,), lambda a: (R.add(a, R.neg(a)), R.zero), A, (1,)),
        Law("retract.smul_add", (K, A, A),
            lambda s, a, b: (R.smul(s, R.add(a, b)), R.add(R.smul(s, a), R.smul(s, b))), A, (1, 1, 1)),
        Law("retract.add_smul", (K, K, A),
            lambda s, t, a: (R.smul(K.reduce(s + t), a), R.add(R.smul(s, a), R.smul(t, a))), A, (1, 1, 1)),
        Law("retract.smul_assoc", (K, K, A),
            lambda s, t, a: (R.smul(K.reduce(s * t), a), R.smul(s, R.smul(t, a))), A, (1, 1, 1)),
        Law("retract.smul_one", (A,), lambda a: (R.smul(K.one, a), a), A, (1,)),
    ]


# -- affine maps --------------------------------------------------------

class AffineMap:
    """An affine homomorphism between two affine modules.

    Chart form stores ``(M, t)`` with f(x) = Mx + t in the coordinate
    charts; table form stores the image index of every source point.
    """

    def __init__(self, source, target, *, M=None, t=None, table=None):
        self.source = source
        self.target = target
        if table is not None:
            self.kind = "table"
            self.table = target.point(np.asarray(table, dtype=np.int64))
            if self.table.shape != (source.size,):
                raise DomainError(f"map table must list {source.size} images")
        else:
            self.kind = "chart"
            ring = target.ring
            if source.ring != ring:
                raise DomainError("chart maps need a common scalar ring")
            self.M = ring.array(M).reshape(target.dim, source.dim)
            self.t = ring.array(t).reshape(target.dim)

    # -- constructors -------------------------------------------------
    @classmethod
    def chart(cls, source, target, M, t):
        return cls(source, target, M=M, t=t)

    @classmethod
    def from_table(cls, source, target, table, verify: bool = True):
        f = cls(source, target, table=table)
        if verify:
            verdict = is_affine_hom(f)
            if not verdict:
                raise LawViolation(f"table map violates {verdict.failing().law}", verdict)
        return f

    @classmethod
    def from_function(cls, source, target, fn):
        """Materialise an affine function (chart by interpolation, table by tabulation).

        Exact whenever ``fn`` is affine, which every construction in this
        package guarantees.
        """
        if isinstance(source, CoordinateHeap) and isinstance(target, CoordinateHeap):
            pts = source.frame(1)
            vals = target.batch(fn(pts), len(pts))
            t = vals[0]
            M = target.ring.reduce(vals[1:] - t).T
            return cls(source, target, M=M, t=t)
        return cls(source, target, table=fn(source.elements()))

    @classmethod
    def identity(cls, A):
        return cls.from_function(A, A, lambda x: x)

    @classmethod
    def constant(cls, source, target, c):
        c = target.point(c)
        return cls.from_function(source, target, lambda x: target.batch(c, len(x)))

    @classmethod
    def linear(cls, A, M):
        return cls.chart(A, A, M, A.ring.zeros((A.dim,)))

    # -- evaluation ---------------------------------------------------
    def __call__(self, a):
        if self.kind == "table":
            self.source.check(a)
            return self.table[a]
        self.source.check(a)
        a = np.asarray(a)
        return self.target.ring.reduce(a @ self.M.T + self.t)

    def compose(self, other: AffineMap) -> AffineMap:
        """``self ∘ other``."""
        if other.target != self.source and other.target is not self.source:
            raise DomainError("maps are not composable")
        if self.kind == other.kind == "chart":
            ring = self.target.ring
            return AffineMap(other.source, self.target,
                             M=ring.reduce(self.M @ other.M), t=ring.reduce(self.M @ other.t + self.t))
        return AffineMap.from_function(other.source, self.target, lambda x: self(other(x)))

    def power(self, k: int) -> AffineMap:
        out = AffineMap.identity(self.source)
        for _ in range(k):
            out = self.compose(out)
        return out

    def values(self):
        """Images of all source points, in enumeration order."""
        return self(self.source.elements())

    def key(self):
        if self.kind == "table":
            return ("table", tuple(int(v) for v in self.table))
        return ("chart", tuple(map(str, self.M.reshape(-1))), tuple(map(str, self.t)))

    def __eq__(self, other):
        if not isinstance(other, AffineMap):
            return NotImplemented
        if self.kind == other.kind:
            return self.key() == other.key()
        return bool(np.all(self.source.equal(self.values(), other.values())))

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.kind == "table":
            return f"AffineMap(table={self.table.tolist()})"
        fmt = self.target.ring.format
        return f"AffineMap(M={[[fmt(x) for x in row] for row in self.M]}, t={[fmt(x) for x in self.t]})"

    def is_bijective(self) -> bool:
        if not self.source.is_finite:
            raise UnsupportedError("bijectivity is only decided on finite modules")
        if self.source.size != self.target.size:
            return False
        codes = {self.target.encode(v) for v in self.values()}
        return len(codes) == self.source.size

    def inverse(self) -> AffineMap:
        if not self.is_bijective():
            raise DomainError("map is not bijective")
        src = self.source.elements()
        inv = np.empty(self.source.size, dtype=np.int64)
        inv[_encode_batch(self.target, self.values())] = np.arange(self.source.size)
        return AffineMap.from_function(self.target, self.source, lambda x: src[inv[_encode_batch(self.target, x)]])

    def to_json(self):
        if self.kind == "table":
            return {"table": [int(v) for v in self.table]}
        fmt = self.target.ring.format
        return {"M": [[fmt(x) for x in row] for row in self.M], "t": [fmt(x) for x in self.t]}


def _encode_batch(A, x):
    x = np.asarray(x)
    if isinstance(A, CoordinateHeap):
        n = A.ring.size
        weights = np.array([n ** (A.dim - 1 - i) for i in range(A.dim)], dtype=np.int64)
        return (x.astype(np.int64) * weights).sum(axis=-1)
    return x


def apply_map(f: AffineMap, a):
    return f(a)


def map_laws(f: AffineMap) -> list[Law]:
    S, T = f.source, f.target
    return [
        Law("map.heap_hom", (S,) * 3,
            lambda a, b, c: (f(S.tern(a, b, c)), T.tern(f(a), f(b), f(c))), T, (1, 1, 1), tuple("abc")),
        Law("map.action_hom", (S.ring, S, S),
            lambda s, a, b: (f(S.act(s, a, b)), T.act(s, f(a), f(b))), T, (1, 1, 1), ("alpha", "a", "b")),
    ]


def is_affine_hom(f: AffineMap, strategy: str = "auto", budget=engine.DEFAULT_BUDGET):
    return engine.check_all("map.affine", map_laws(f), strategy, budget)


def linearise(f: AffineMap, o_A, o_B) -> AffineMap:
    """a ↦ ⟨f(a), f(o_A), o_B⟩, a K-linear map A_{o_A} → B_{o_B}."""
    T = f.target
    fo = f(f.source.point(o_A))
    o_B = T.point(o_B)
    return AffineMap.from_function(f.source, T, lambda a: T.tern(f(a), fo, o_B))


def _same_signature(*maps):
    f = maps[0]
    for g in maps[1:]:
        if g.source != f.source or g.target != f.target:
            raise DomainError("maps must share source and target")


def heap_of_maps(f: AffineMap, g: AffineMap, h: AffineMap) -> AffineMap:
    """Pointwise ⟨f, g, h⟩."""
    _same_signature(f, g, h)
    T = f.target
    return AffineMap.from_function(f.source, T, lambda a: T.tern(f(a), g(a), h(a)))


def act_on_maps(alpha, f: AffineMap, g: AffineMap) -> AffineMap:
    """(α▷_f g)(a) = α▷_{f(a)} g(a)."""
    _same_signature(f, g)
    T = f.target
    return AffineMap.from_function(f.source, T, lambda a: T.act(alpha, f(a), g(a)))


def enumerate_affine_maps(source, target=None, budget: int | None = engine.DEFAULT_BUDGET):
    """All affine maps source → target in lexicographic (M, t) order (tables: by image list)."""
    target = source if target is None else target
    if isinstance(source, CoordinateHeap) and isinstance(target, CoordinateHeap):
        ring = source.ring
        n = ring.size
        count = n ** (target.dim * source.dim + target.dim)
        if budget is not None and count > budget:
            raise BudgetExceededError(f"{count} affine maps exceed the budget of {budget}", budget, count)
        nm = target.dim * source.dim
        for coeffs in itertools.product(range(n), repeat=nm + target.dim):
            yield AffineMap(source, target, M=np.array(coeffs[:nm], dtype=ring.dtype).reshape(target.dim, source.dim),
                            t=np.array(coeffs[nm:], dtype=ring.dtype))
        return
    count = target.size**source.size
    if budget is not None and count > budget:
        raise BudgetExceededError(f"{count} functions exceed the budget of {budget}", budget, count)
    for images in itertools.product(range(target.size), repeat=source.size):
        f = AffineMap(source, target, table=images)
        if is_affine_hom(f):
            yield f


# -- laws of Def. (a)-(d) ---------------------------------------------------

def affine_module_laws(A: AffineModule) -> list[Law]:
    K = A.ring
    act, tern = A.act, A.tern

    def scalar_tern(x, y, z):
        return K.reduce(x - y + z)

    return [
        Law("affine.action_heap_hom", (K, A, A, A, A),
            lambda s, a, b, c, d: (act(s, a, tern(b, c, d)), tern(act(s, a, b), act(s, a, c), act(s, a, d))),
            A, (1,) * 5, ("alpha", "a", "b", "c", "d")),
        Law("affine.scalar_heap_hom", (K, K, K, A, A),
            lambda s, t, u, a, b: (act(scalar_tern(s, t, u), a, b), tern(act(s, a, b), act(t, a, b), act(u, a, b))),
            A, (1,) * 5, ("alpha", "beta", "gamma", "a", "b")),
        Law("affine.assoc", (K, K, A, A),
            lambda s, t, a, b: (act(K.reduce(s * t), a, b), act(s, a, act(t, a, b))),
            A, (1,) * 4, ("alpha", "beta", "a", "b")),
        Law("affine.base_change", (K, A, A, A),
            lambda s, a, b, c: (act(s, a, b), tern(act(s, c, b), act(s, c, a), a)),
            A, (1,) * 4, ("alpha", "a", "b", "c")),
        Law("affine.zero", (A, A), lambda a, b: (act(K.zero, a, b), a), A, (1, 1), ("a", "b")),
        Law("affine.one", (A, A), lambda a, b: (act(K.one, a, b), b), A, (1, 1), ("a", "b")),
        Law("affine.heap_middle", (K, A, A, A, A),
            lambda s, a, b, c, d: (act(s, tern(a, b, c), d), tern(act(s, a, d), act(s, b, d), act(s, c, d))),
            A, (1,) * 5, ("alpha", "a", "b", "c", "d")),
        Law("affine.aa", (K, A), lambda s, a: (act(s, a, a), a), A, (1, 1), ("alpha", "a")),
    ]


def check_affine_axioms(A: AffineModule, strategy: str = "exhaustive", budget=engine.DEFAULT_BUDGET, jobs: int = 1):
    return engine.check_all("affine.axioms", affine_module_laws(A), strategy, budget, jobs)


def action(alpha, a, b, A: AffineModule):
    return A.act(alpha, a, b)
