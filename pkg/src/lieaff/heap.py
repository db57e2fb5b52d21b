"""Abelian heaps: the ternary operation ⟨a,b,c⟩, folds, retracts and axiom checks.

Points are numpy arrays.  A coordinate host stores a point as a vector of
ring elements (shape ``(dim,)``, batches ``(..., dim)``); a table host
stores a point as an integer index (batches of any shape).  All
operations are vectorised over leading batch axes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import engine
from .engine import Law
from .errors import ArityError, DomainError, LawViolation, UnsupportedError
from .scalars import Ring

# refuse to materialise point lists larger than this
MAX_POINTS = 10**7


class Heap:
    """Common interface of coordinate and table heaps."""

    dtype = np.int64

    def tern(self, a, b, c):
        raise NotImplementedError

    def point(self, value):
        raise NotImplementedError

    def elements(self):
        raise NotImplementedError

    @property
    def size(self) -> int:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return True

    def frame(self, degree):
        raise UnsupportedError(f"{self} has no chart, no affine frame available")

    def equal(self, x, y):
        raise NotImplementedError

    def batch(self, value, n):
        raise NotImplementedError

    def format_value(self, value):
        raise NotImplementedError

    def encode(self, value) -> int:
        """Position of a point in :meth:`elements` order."""
        raise NotImplementedError


class CoordinateHeap(Heap):
    """``ring**dim`` with ⟨a,b,c⟩ = a − b + c componentwise (a heap by construction)."""

    def __init__(self, ring: Ring, dim: int):
        if dim < 0:
            raise DomainError("dimension must be non-negative")
        self.ring = ring
        self.dim = int(dim)
        self.dtype = ring.dtype

    def __repr__(self):
        return f"{type(self).__name__}({self.ring}, dim={self.dim})"

    def __eq__(self, other):
        return type(self) is type(other) and (self.ring, self.dim) == (other.ring, other.dim)

    def __hash__(self):
        return hash((type(self).__name__, self.ring, self.dim))

    @property
    def is_finite(self):
        return self.ring.is_finite

    @property
    def size(self):
        return self.ring.size**self.dim

    def point(self, value):
        arr = self.ring.array(value)
        if arr.shape[-1:] != (self.dim,) and not (self.dim == 0 and arr.shape == (0,)):
            raise DomainError(f"point of shape {arr.shape} does not live in dimension {self.dim}")
        return arr

    def check(self, *points):
        for p in points:
            if np.shape(p)[-1:] != (self.dim,):
                raise DomainError(f"point of shape {np.shape(p)} is not in {self}")

    @property
    def origin(self):
        return self.ring.zeros((self.dim,))

    def unit(self, i):
        e = self.ring.zeros((self.dim,))
        e[i] = self.ring.one
        return e

    def tern(self, a, b, c):
        self.check(a, b, c)
        return self.ring.reduce(np.asarray(a) - b + c)

    def elements(self):
        n = self.ring.size
        if n**self.dim > MAX_POINTS:
            raise UnsupportedError(f"{self} has too many points to enumerate")
        pts = list(itertools.product(range(n), repeat=self.dim))
        return np.array(pts, dtype=self.dtype).reshape(len(pts), self.dim)

    def frame(self, degree):
        pts = []
        for total in range(degree + 1):
            for combo in itertools.combinations_with_replacement(range(self.dim), total):
                c = [0] * self.dim
                for i in combo:
                    c[i] += 1
                pts.append(c)
        return self.ring.array(pts).reshape(len(pts), self.dim)

    def equal(self, x, y):
        return np.all(np.asarray(x) == np.asarray(y), axis=-1)

    def batch(self, value, n):
        return np.broadcast_to(np.asarray(value), (n, self.dim))

    def format_value(self, value):
        return [self.ring.format(v) for v in np.asarray(value).reshape(-1)]

    def encode(self, value):
        idx = 0
        for v in np.asarray(value).reshape(-1):
            idx = idx * self.ring.size + int(v)
        return idx


class TableHeap(Heap):
    """A finite heap given by its full value table ``op[a][b][c] = ⟨a,b,c⟩``."""

    def __init__(self, op, verify: bool = True):
        op = np.asarray(op, dtype=np.int64)
        n = op.shape[0] if op.ndim else 0
        if op.ndim != 3 or op.shape != (n, n, n) or n == 0:
            raise DomainError(f"heap table must have shape (n, n, n) with n >= 1, got {op.shape}")
        if op.min() < 0 or op.max() >= n:
            raise DomainError("heap table entries must be indices below the table size")
        self.op = op
        self._size = n
        if verify:
            verdict = check_heap_axioms(self)
            if not verdict:
                raise LawViolation(f"table is not an abelian heap ({verdict.failing().law})", verdict)

    def __repr__(self):
        return f"{type(self).__name__}(size={self._size})"

    @property
    def size(self):
        return self._size

    def point(self, value):
        v = np.asarray(value, dtype=np.int64)
        if np.any((v < 0) | (v >= self._size)):
            raise DomainError(f"index {value} is not a point of a heap of size {self._size}")
        return v

    def check(self, *points):
        for p in points:
            p = np.asarray(p)
            if p.size and (p.min() < 0 or p.max() >= self._size):
                raise DomainError(f"index out of range for {self}")

    def tern(self, a, b, c):
        self.check(a, b, c)
        return self.op[a, b, c]

    def elements(self):
        return np.arange(self._size, dtype=np.int64)

    def equal(self, x, y):
        return np.asarray(x) == np.asarray(y)

    def batch(self, value, n):
        return np.broadcast_to(np.asarray(value), (n,))

    def format_value(self, value):
        return int(value)

    def encode(self, value):
        return int(value)


def ternary(h: Heap, a, b, c):
    """⟨a,b,c⟩ in ``h``."""
    return h.tern(a, b, c)


def fold(h: Heap, points):
    """Left-nested ⟨a_1, ..., a_{2n+1}⟩; the bracketing is immaterial up to parity."""
    points = list(points)
    if len(points) % 2 == 0:
        raise ArityError(f"heap folds need an odd number of entries, got {len(points)}")
    acc = points[0]
    for i in range(1, len(points), 2):
        acc = h.tern(acc, points[i], points[i + 1])
    return acc


@dataclass(frozen=True)
class GroupView:
    """The abelian group obtained by retracting a heap at ``origin``."""

    heap: Heap
    origin: object

    @property
    def zero(self):
        return self.origin

    def add(self, a, b):
        return self.heap.tern(a, self.origin, b)

    def neg(self, a):
        return self.heap.tern(self.origin, a, self.origin)

    def sub(self, a, b):
        return self.heap.tern(a, b, self.origin)


def retract_group(h: Heap, o) -> GroupView:
    return GroupView(h, h.point(o))


def z_action(h: Heap, n: int, a, b):
    """The ℤ-action n▷_a b = nb − na + a, computed as a heap fold."""
    if n > 0:
        seq = [b if i % 2 == 0 else a for i in range(2 * n - 1)]
    else:
        seq = [a if i % 2 == 0 else b for i in range(1 - 2 * n)]
    return fold(h, seq)


# -- laws ---------------------------------------------------------------

def para_associativity_law(h: Heap) -> Law:
    def sides(a, b, c, d, e):
        return h.tern(h.tern(a, b, c), d, e), h.tern(a, b, h.tern(c, d, e))

    return Law("heap.para_associativity", (h,) * 5, sides, h, (1,) * 5, tuple("abcde"))


def malcev_right_law(h: Heap) -> Law:
    return Law("heap.malcev_right", (h, h), lambda a, b: (h.tern(a, b, b), a), h, (1, 1), ("a", "b"))


def malcev_left_law(h: Heap) -> Law:
    return Law("heap.malcev_left", (h, h), lambda a, b: (h.tern(b, b, a), a), h, (1, 1), ("a", "b"))


def symmetry_law(h: Heap) -> Law:
    return Law(
        "heap.symmetry", (h,) * 3, lambda a, b, c: (h.tern(a, b, c), h.tern(c, b, a)), h, (1, 1, 1), tuple("abc")
    )


def cyclic_law(h: Heap) -> Law:
    """With d = ⟨a,b,c⟩ one has ⟨b,c,d⟩ = a."""
    return Law(
        "heap.cyclic", (h,) * 3, lambda a, b, c: (h.tern(b, c, h.tern(a, b, c)), a), h, (1, 1, 1), tuple("abc")
    )


def heap_laws(h: Heap) -> list[Law]:
    return [para_associativity_law(h), malcev_right_law(h), malcev_left_law(h), symmetry_law(h)]


def check_heap_axioms(h: Heap, strategy: str = "exhaustive", budget=engine.DEFAULT_BUDGET, jobs: int = 1):
    """Para-associativity, Mal'cev and symmetry, in that order."""
    return engine.check_all("heap.axioms", heap_laws(h), strategy, budget, jobs)
