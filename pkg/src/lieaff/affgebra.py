"""Affgebras: bi-affine multiplications, Aff(A), retracted algebras and derivations."""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import engine
from .engine import Law, Subset
from .errors import BudgetExceededError, DomainError, UnsupportedError
from .heap import CoordinateHeap, fold
from .linalg import solve_mod_p, span_elements
from .module import (
    AffineMap,
    CoordinateModule,
    RetractedModule,
    TableModule,
    enumerate_affine_maps,
    heap_of_maps,
)


class BiAffineMap:
    """A binary operation on an affine module that is affine in each slot.

    Chart form: op(x, y)_i = Σ B_ijk x_j y_k + Σ P_ij x_j + Σ Q_ik y_k + r_i.
    Table form: ``table[a][b]`` is the index of op(a, b).
    """

    def __init__(self, module, *, B=None, P=None, Q=None, r=None, table=None):
        self.module = module
        if table is not None:
            self.kind = "table"
            table = np.asarray(table, dtype=np.int64)
            if table.shape != (module.size, module.size):
                raise DomainError(f"operation table must have shape {(module.size,) * 2}")
            self.table = module.point(table)
        else:
            self.kind = "chart"
            ring, d = module.ring, module.dim
            self.B = ring.array(B).reshape(d, d, d)
            self.P = ring.array(P).reshape(d, d)
            self.Q = ring.array(Q).reshape(d, d)
            self.r = ring.array(r).reshape(d)

    @classmethod
    def chart(cls, module, B, P, Q, r):
        return cls(module, B=B, P=P, Q=Q, r=r)

    @classmethod
    def from_table(cls, module, table):
        return cls(module, table=table)

    @classmethod
    def from_function(cls, module, fn):
        """Materialise a bi-affine function of two point batches.

        Charts are recovered from the values on (affine frame)²; tables are
        tabulated.  Exact whenever ``fn`` is bi-affine.
        """
        if isinstance(module, CoordinateHeap):
            d = module.dim
            frame = module.frame(1)
            xs = np.repeat(frame, d + 1, axis=0)
            ys = np.tile(frame, (d + 1, 1))
            vals = module.batch(fn(xs, ys), (d + 1) ** 2).reshape(d + 1, d + 1, d)
            red = module.ring.reduce
            r = vals[0, 0]
            P = red(vals[1:, 0] - r).T
            Q = red(vals[0, 1:] - r).T
            B = red(vals[1:, 1:] - vals[1:, :1] - vals[:1, 1:] + r)  # (j, k, i)
            return cls(module, B=np.transpose(B, (2, 0, 1)), P=P, Q=Q, r=r)
        pts = module.elements()
        n = len(pts)
        a = np.repeat(pts, n, axis=0)
        b = np.tile(pts, n)
        return cls(module, table=np.asarray(fn(a, b)).reshape(n, n))

    def __call__(self, a, b):
        A = self.module
        if self.kind == "table":
            A.check(a, b)
            return self.table[a, b]
        A.check(a, b)
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        d = A.dim
        shape = a.shape
        x = a.reshape(-1, d)
        y = b.reshape(-1, d)
        xy = (x[:, :, None] * y[:, None, :]).reshape(len(x), d * d)
        if self._float_exact and x.dtype == np.int64:
            # small residues: BLAS float products are exact and much faster than integer matmul
            xy, x, y = xy.astype(np.float64), x.astype(np.float64), y.astype(np.float64)
            out = xy @ self._fB + x @ self._fP + y @ self._fQ + self.r
            return A.ring.reduce(out.astype(np.int64)).reshape(shape)
        out = xy @ self.B.reshape(d, d * d).T + x @ self.P.T + y @ self.Q.T + self.r
        return A.ring.reduce(out).reshape(shape)

    @functools.cached_property
    def _float_exact(self) -> bool:
        K = self.module.ring
        if not K.is_finite or self.B.dtype != np.int64:
            return False
        d = self.module.dim
        return (d * d + 2 * d + 1) * K.size ** 3 < 2 ** 52

    @functools.cached_property
    def _fB(self):
        d = self.module.dim
        return self.B.reshape(d, d * d).T.astype(np.float64)

    @functools.cached_property
    def _fP(self):
        return self.P.T.astype(np.float64)

    @functools.cached_property
    def _fQ(self):
        return self.Q.T.astype(np.float64)

    def diagonal_degree(self) -> int:
        """Polynomial degree of x ↦ op(x, x) in the chart (1 or 2)."""
        if self.kind == "table":
            return 2
        sym = self.B + np.transpose(self.B, (0, 2, 1))
        d = self.module.dim
        ring = self.module.ring
        for i in range(d):
            for j in range(d):
                if ring.canonical(self.B[i, j, j]) != 0:
                    return 2
                for k in range(j + 1, d):
                    if ring.canonical(sym[i, j, k]) != 0:
                        return 2
        return 1

    def key(self):
        if self.kind == "table":
            return ("table", tuple(int(v) for v in self.table.reshape(-1)))
        return ("chart",) + tuple(tuple(map(str, m.reshape(-1))) for m in (self.B, self.P, self.Q, self.r))

    def __eq__(self, other):
        if not isinstance(other, BiAffineMap):
            return NotImplemented
        if self.kind == other.kind:
            return self.key() == other.key()
        pts = self.module.elements()
        n = len(pts)
        a, b = np.repeat(pts, n, axis=0), np.tile(pts, (n,) + (1,) * (pts.ndim - 1))
        return bool(np.all(self.module.equal(self(a, b), other(a, b))))

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"BiAffineMap({self.kind}, {self.module!r})"

    def to_json(self):
        if self.kind == "table":
            return {"table": self.table.tolist()}
        fmt = self.module.ring.format

        def nested(arr):
            if arr.ndim == 0:
                return fmt(arr)
            return [nested(x) for x in arr]

        return {"B": nested(self.B), "P": nested(self.P), "Q": nested(self.Q), "r": nested(self.r)}

    def structure_constants(self):
        return self.to_json()


def bi_affine_laws(op: BiAffineMap, name="op") -> list[Law]:
    A = op.module
    K = A.ring
    return [
        Law(f"{name}.heap_hom_left", (A,) * 4,
            lambda a, b, c, d: (op(A.tern(a, b, c), d), A.tern(op(a, d), op(b, d), op(c, d))), A, (1,) * 4),
        Law(f"{name}.heap_hom_right", (A,) * 4,
            lambda a, b, c, d: (op(d, A.tern(a, b, c)), A.tern(op(d, a), op(d, b), op(d, c))), A, (1,) * 4),
        Law(f"{name}.action_left", (K, A, A, A),
            lambda s, a, b, c: (op(A.act(s, a, b), c), A.act(s, op(a, c), op(b, c))), A, (1,) * 4),
        Law(f"{name}.action_right", (K, A, A, A),
            lambda s, a, b, c: (op(c, A.act(s, a, b)), A.act(s, op(c, a), op(c, b))), A, (1,) * 4),
    ]


def check_bi_affine(op: BiAffineMap, strategy="auto", budget=engine.DEFAULT_BUDGET):
    return engine.check_all("op.bi_affine", bi_affine_laws(op), strategy, budget)


class Affgebra:
    """An affine module with a bi-affine multiplication (associativity is a verdict)."""

    def __init__(self, module, mul: BiAffineMap):
        if mul.module is not module and mul.module != module:
            raise DomainError("multiplication lives on a different module")
        self.module = module
        self.mul = mul
        self._associative = None

    def __repr__(self):
        return f"Affgebra({self.module!r})"

    @property
    def ring(self):
        return self.module.ring

    def multiply(self, a, b):
        return self.mul(a, b)

    @property
    def associative(self) -> bool:
        if self._associative is None:
            self._associative = check_associative(self).passed
        return self._associative


def multiply(A: Affgebra, a, b):
    return A.mul(a, b)


def associativity_law(A: Affgebra) -> Law:
    M, m = A.module, A.mul
    return Law("mul.associativity", (M,) * 3, lambda a, b, c: (m(m(a, b), c), m(a, m(b, c))), M, (1, 1, 1), tuple("abc"))


def truss_laws(A: Affgebra) -> list[Law]:
    M, m, t = A.module, A.mul, A.module.tern
    return [
        Law("mul.truss_left", (M,) * 4,
            lambda a, b, c, d: (m(a, t(b, c, d)), t(m(a, b), m(a, c), m(a, d))), M, (1,) * 4, tuple("abcd")),
        Law("mul.truss_right", (M,) * 4,
            lambda a, b, c, d: (m(t(b, c, d), a), t(m(b, a), m(c, a), m(d, a))), M, (1,) * 4, tuple("abcd")),
    ]


def check_associative(A: Affgebra, strategy="auto", budget=engine.DEFAULT_BUDGET, jobs=1):
    return engine.check(associativity_law(A), strategy, budget, jobs)


def check_truss(A: Affgebra, strategy="auto", budget=engine.DEFAULT_BUDGET, jobs=1):
    return engine.check_all("mul.truss", truss_laws(A), strategy, budget, jobs)


def abelian_affgebra(module, o) -> Affgebra:
    """ab = ⟨a, o, b⟩: the addition of A_o viewed as a multiplication."""
    o = module.point(o)
    return Affgebra(module, BiAffineMap.from_function(module, lambda a, b: module.tern(a, o, b)))


# -- Aff(A) -------------------------------------------------------------

def endo_compose(f: AffineMap, g: AffineMap) -> AffineMap:
    """f ∘ g."""
    if f.source is not g.target and f.source != g.target:
        raise DomainError("maps are not composable")
    return f.compose(g)


class EndomorphismAffgebra(Affgebra):
    """Aff(A): affine endomorphisms with pointwise heap/action and composition.

    For a chart module of dimension d the maps are the points of a chart
    module of dimension d² + d (coordinates: M row-major, then t).  For a
    table module every affine endomorphism is enumerated and indexed.
    """

    def __init__(self, base, budget=engine.DEFAULT_BUDGET):
        self.base = base
        if isinstance(base, CoordinateModule):
            d = base.dim
            E = CoordinateModule(base.ring, d * d + d)
            ring = base.ring

            def compose(x, y):
                Mx, tx = x[..., : d * d].reshape(x.shape[:-1] + (d, d)), x[..., d * d:]
                My, ty = y[..., : d * d].reshape(y.shape[:-1] + (d, d)), y[..., d * d:]
                M = (Mx @ My).reshape(x.shape[:-1] + (d * d,))
                t = (Mx @ ty[..., None])[..., 0] + tx
                return ring.reduce(np.concatenate([M, t], axis=-1))

            self._maps = None
            super().__init__(E, BiAffineMap.from_function(E, compose))
        else:
            maps = list(enumerate_affine_maps(base, base, budget=budget))
            self._maps = maps
            vals = np.array([f.values() for f in maps], dtype=np.int64)  # (n, |A|)
            index = {tuple(row): i for i, row in enumerate(vals.tolist())}
            n = len(maps)

            def lookup(images):
                return np.array([index[tuple(row)] for row in np.asarray(images).tolist()], dtype=np.int64)

            i, j, k = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
            op = lookup(base.tern(vals[i.reshape(-1)], vals[j.reshape(-1)], vals[k.reshape(-1)])).reshape(n, n, n)
            K = base.ring
            act = np.empty((K.size, n, n), dtype=np.int64)
            for s in range(K.size):
                act[s] = lookup(base.act(s, vals[i[:, :, 0].reshape(-1)], vals[j[:, :, 0].reshape(-1)])).reshape(n, n)
            E = TableModule(op, K, act, verify=False)
            comp = lookup(np.array([vals[a][vals[b]] for a in range(n) for b in range(n)]))
            super().__init__(E, BiAffineMap.from_table(E, comp.reshape(n, n)))

    def point_of(self, f: AffineMap):
        if self._maps is None:
            return self.module.point(np.concatenate([f.M.reshape(-1), f.t]))
        return np.int64([g.key() for g in self._maps].index(AffineMap.from_function(self.base, self.base, f).key()))

    def map_of(self, p) -> AffineMap:
        if self._maps is None:
            d = self.base.dim
            p = np.asarray(p)
            return AffineMap.chart(self.base, self.base, p[: d * d].reshape(d, d), p[d * d:])
        return self._maps[int(p)]


def endomorphism_affgebra(A, budget=engine.DEFAULT_BUDGET) -> EndomorphismAffgebra:
    return EndomorphismAffgebra(A, budget)


# -- retraction to an associative algebra ------------------------------------

@dataclass(frozen=True)
class RetractedAlgebra:
    """A_o with a•b = ab − ao + o² − ob."""

    affgebra: Affgebra
    origin: object

    @property
    def retract(self) -> RetractedModule:
        return RetractedModule(self.affgebra.module, self.origin)

    def product(self, a, b):
        m, o = self.affgebra.mul, self.origin
        return fold(self.affgebra.module, [m(a, b), m(a, o), m(o, o), m(o, b), o])

    def laws(self) -> list[Law]:
        A, R, p = self.affgebra.module, self.retract, self.product
        return [
            Law("retract_algebra.associativity", (A,) * 3,
                lambda a, b, c: (p(p(a, b), c), p(a, p(b, c))), A, (1, 1, 1), tuple("abc")),
            Law("retract_algebra.additive_left", (A,) * 3,
                lambda a, b, c: (p(R.add(a, b), c), R.add(p(a, c), p(b, c))), A, (1, 1, 1), tuple("abc")),
            Law("retract_algebra.additive_right", (A,) * 3,
                lambda a, b, c: (p(c, R.add(a, b)), R.add(p(c, a), p(c, b))), A, (1, 1, 1), tuple("abc")),
            Law("retract_algebra.homogeneous", (A.ring, A, A),
                lambda s, a, b: (p(R.smul(s, a), b), R.smul(s, p(a, b))), A, (1, 1, 1), ("alpha", "a", "b")),
        ]

    def structure_constants(self):
        """C[i][j][k]: coordinates of (o+e_j)•(o+e_k) − o.  Chart modules only."""
        return _bilinear_constants(self.affgebra.module, self.origin, self.product)


def _bilinear_constants(A, o, product):
    if not isinstance(A, CoordinateHeap):
        raise UnsupportedError("structure constants need a chart module")
    d = A.dim
    basis = A.ring.reduce(A.frame(1)[1:] + o)
    xs = np.repeat(basis, d, axis=0)
    ys = np.tile(basis, (d, 1))
    vals = A.ring.reduce(A.batch(product(xs, ys), d * d) - o).reshape(d, d, d)
    return np.transpose(vals, (2, 0, 1))


def retract_algebra(A: Affgebra, o) -> RetractedAlgebra:
    return RetractedAlgebra(A, A.module.point(o))


# -- σ-compatibility and derivations ---------------------------------------

def sigma_law(A: Affgebra, sigma: AffineMap) -> Law:
    M, m = A.module, A.mul

    def sides(a, b):
        sab = sigma(m(a, b))
        return sab, M.tern(m(sigma(a), b), sab, m(a, sigma(b)))

    return Law("sigma.compat", (M, M), sides, M, (1, 1), ("a", "b"))


def check_sigma_compat(A: Affgebra, sigma: AffineMap, strategy="auto", budget=engine.DEFAULT_BUDGET):
    return engine.check(sigma_law(A, sigma), strategy, budget)


def derivation_laws(X: AffineMap, sigma: AffineMap, A: Affgebra) -> list[Law]:
    M, m = A.module, A.mul
    return [
        Law("deriv.comm", (M,), lambda a: (X(sigma(a)), sigma(X(a))), M, (1,), ("a",)),
        Law("deriv.leibniz", (M, M),
            lambda a, b: (X(m(a, b)), M.tern(m(X(a), b), sigma(m(a, b)), m(a, X(b)))), M, (1, 1), ("a", "b")),
    ]


def is_derivation_along(X: AffineMap, sigma: AffineMap, A: Affgebra, strategy="auto", budget=engine.DEFAULT_BUDGET):
    return engine.check_all("derivation", derivation_laws(X, sigma, A), strategy, budget)


def derivation_bracket(X: AffineMap, Y: AffineMap, sigma: AffineMap) -> AffineMap:
    """[X, Y] = ⟨XY, YX, σ⟩."""
    return heap_of_maps(X.compose(Y), Y.compose(X), sigma)


def derivations(A: Affgebra, sigma: AffineMap, require_commuting: bool = True, budget=engine.DEFAULT_BUDGET):
    """Der_σ(A) (or, with ``require_commuting=False``, the Leibniz-only set Aff(A)_σ).

    Over a prime field with a chart module the conditions are affine in the
    unknown coefficients (M, t) and are imposed on frame points, so the
    solution set is computed by elimination mod p.  Otherwise the affine
    endomorphisms are enumerated and filtered (within ``budget``).  The
    result is sorted in lexicographic (M, t) order.
    """
    M = A.module
    if isinstance(M, CoordinateModule) and M.ring.is_finite and M.ring.is_field:
        return _derivations_linear(A, sigma, require_commuting, budget)
    out = []
    for X in enumerate_affine_maps(M, M, budget=budget):
        laws = derivation_laws(X, sigma, A)
        if not require_commuting:
            laws = laws[1:]
        if engine.check_all("derivation", laws, "auto", budget):
            out.append(X)
    return out


def _derivations_linear(A, sigma, require_commuting, budget):
    Mod, m = A.module, A.mul
    ring = Mod.ring
    p, d = ring.size, Mod.dim
    frame = Mod.frame(1)
    a = np.repeat(frame, d + 1, axis=0)
    b = np.tile(frame, (d + 1, 1))

    def residual(z):
        X = AffineMap.chart(Mod, Mod, z[: d * d].reshape(d, d), z[d * d:])
        parts = [ring.reduce(X(m(a, b)) - Mod.tern(m(X(a), b), sigma(m(a, b)), m(a, X(b))))]
        if require_commuting:
            parts.append(ring.reduce(X(sigma(frame)) - sigma(X(frame))))
        return np.concatenate([q.reshape(-1) for q in parts])

    nvar = d * d + d
    zero = np.zeros(nvar, dtype=np.int64)
    r0 = residual(zero)
    cols = []
    for i in range(nvar):
        e = zero.copy()
        e[i] = 1
        cols.append(ring.reduce(residual(e) - r0))
    J = np.stack(cols, axis=1)
    sol = solve_mod_p(J, ring.reduce(-r0), p)
    if sol is None:
        return []
    particular, basis = sol
    count = p ** len(basis)
    if budget is not None and count > budget:
        raise BudgetExceededError(f"{count} derivations exceed the budget of {budget}", budget, count)
    return [
        AffineMap.chart(Mod, Mod, np.array(z[: d * d]).reshape(d, d), np.array(z[d * d:]))
        for z in span_elements(particular, basis, p)
    ]


def maps_subset(E: EndomorphismAffgebra, maps) -> Subset:
    """The given maps as an explicit domain of points of Aff(A)."""
    pts = [E.point_of(f) for f in maps]
    return Subset(E.module, np.array(pts))

