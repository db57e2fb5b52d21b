"""Identity verification: exhaustive enumeration and polynomial-frame checks.

A :class:`Law` is an equation ``lhs(x_1, ..., x_s) = rhs(x_1, ..., x_s)``
between vectorised expressions.  Each slot ranges over a *domain*: a ring
(scalar slot), a module (point slot), or an explicit :class:`Subset`.
Domains provide ``elements()``, ``frame(degree)``, ``format_value`` and,
for the target domain, ``equal`` and ``batch``.

Frame sufficiency.  Over a chart, every expression used by a law is a
polynomial map in the coordinates of each slot.  If the per-slot degree
is at most ``m`` then the difference ``lhs - rhs`` is determined by its
values on the lattice ``{o + sum c_i e_i : c_i >= 0, sum c_i <= m}``
(forward-difference/Newton expansion, valid over any commutative ring),
taken as a product over the slots.  For ``m = 1`` this is the affine
frame ``{o, o + e_1, ..., o + e_d}``.  Laws declare their per-slot
degrees; a law without declared degrees is refused by :func:`frame_check`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import BudgetExceededError, UnsupportedError

DEFAULT_BUDGET = 10**6
PASS, FAIL, ERROR = "pass", "fail", "error"
FRAME, EXHAUSTIVE = "frame", "exhaustive"


@dataclass(frozen=True)
class Law:
    name: str
    slots: tuple
    sides: Callable  # (*batches) -> (lhs, rhs)
    target: object
    degrees: tuple | None = None
    slot_names: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        if self.degrees is not None:
            object.__setattr__(self, "degrees", tuple(self.degrees))
            if len(self.degrees) != len(self.slots):
                raise ValueError(f"{self.name}: one degree per slot required")
        if self.slot_names is None:
            object.__setattr__(self, "slot_names", tuple(f"x{i}" for i in range(len(self.slots))))

    @property
    def arity(self) -> int:
        return len(self.slots)

    def holds_at(self, *values) -> bool:
        """Evaluate the law at a single tuple (used to re-check witnesses)."""
        batches = [_as_batch(slot, v) for slot, v in zip(self.slots, values)]
        lhs, rhs = self.sides(*batches)
        ok = self.target.equal(self.target.batch(lhs, 1), self.target.batch(rhs, 1))
        return bool(np.all(ok))


@dataclass(frozen=True)
class VerdictReport:
    law: str
    strategy: str
    result: str
    witness: dict | None = None
    count: int = 0
    details: tuple = ()
    message: str | None = None
    raw: tuple | None = field(default=None, compare=False, repr=False)

    @property
    def passed(self) -> bool:
        return self.result == PASS

    def __bool__(self):
        return self.passed

    def to_record(self) -> dict:
        rec = {"law": self.law, "strategy": self.strategy, "result": self.result, "count": self.count}
        if self.witness is not None:
            rec["witness"] = self.witness
        if self.message:
            rec["message"] = self.message
        if self.details:
            rec["details"] = [d.to_record() for d in self.details]
        return rec

    def failing(self):
        """The first failing sub-report (or ``self``)."""
        if self.result == FAIL and self.details:
            for d in self.details:
                if d.result == FAIL:
                    return d.failing()
        return self


def combine(name: str, reports: Sequence[VerdictReport]) -> VerdictReport:
    reports = tuple(reports)
    strategies = {r.strategy for r in reports}
    strategy = strategies.pop() if len(strategies) == 1 else "mixed"
    results = [r.result for r in reports]
    if FAIL in results:
        result = FAIL
    elif ERROR in results:
        result = ERROR
    else:
        result = PASS
    first = next((r for r in reports if r.result == FAIL), None)
    return VerdictReport(
        law=name,
        strategy=strategy,
        result=result,
        witness=None if first is None else dict(first.witness, law=first.law),
        count=sum(r.count for r in reports),
        details=reports,
        raw=None if first is None else first.raw,
    )


class Subset:
    """An explicit, finite list of elements of a parent domain (no chart frame)."""

    def __init__(self, parent, elements):
        self.parent = parent
        self._elements = np.asarray(elements)

    def elements(self):
        return self._elements

    @property
    def size(self):
        return len(self._elements)

    def frame(self, degree):
        raise UnsupportedError("explicit subsets have no affine frame")

    def format_value(self, value):
        return self.parent.format_value(value)

    def equal(self, x, y):
        return self.parent.equal(x, y)

    def batch(self, value, n):
        return self.parent.batch(value, n)


def _as_batch(slot, value):
    arr = np.asarray(value, dtype=getattr(slot, "dtype", None) or object)
    return arr[None, ...]


def _witness(law, batches, lhs, rhs, i):
    values = tuple(b[i] for b in batches)
    return (
        {
            "slots": {n: _fmt(s, v) for n, s, v in zip(law.slot_names, law.slots, values)},
            "lhs": _fmt(law.target, lhs[i]),
            "rhs": _fmt(law.target, rhs[i]),
        },
        values,
    )


def _fmt(domain, value):
    return domain.format_value(value)


def _evaluate(law, batches, n):
    lhs, rhs = law.sides(*batches)
    lhs = law.target.batch(lhs, n)
    rhs = law.target.batch(rhs, n)
    ok = np.broadcast_to(law.target.equal(lhs, rhs), (n,))
    return lhs, rhs, ok


def _product_batches(domains, flat):
    sizes = [len(d) for d in domains]
    idx = np.unravel_index(flat, sizes)
    return [d[i] for d, i in zip(domains, idx)]


def _run(law, domains, strategy, budget, jobs, chunk):
    total = math.prod(len(d) for d in domains)
    if budget is not None and total > budget:
        raise BudgetExceededError(
            f"{law.name}: {total} tuples exceed the enumeration budget of {budget}",
            budget=budget,
            required=total,
        )

    def work(start):
        flat = np.arange(start, min(start + chunk, total))
        batches = _product_batches(domains, flat)
        lhs, rhs, ok = _evaluate(law, batches, len(flat))
        if ok.all():
            return None
        i = int(np.argmin(ok))
        witness, raw = _witness(law, batches, lhs, rhs, i)
        return start + i, witness, raw

    starts = range(0, total, chunk)
    if jobs and jobs > 1 and total > chunk:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(work, starts)
            found = next((r for r in results if r is not None), None)
    else:
        found = None
        for s in starts:
            found = work(s)
            if found is not None:
                break
    if found is None:
        return VerdictReport(law.name, strategy, PASS, count=total)
    pos, witness, raw = found
    return VerdictReport(law.name, strategy, FAIL, witness=witness, count=pos + 1, raw=raw)


def exhaustive_check(law: Law, budget: int | None = DEFAULT_BUDGET, jobs: int = 1, chunk: int = 1 << 14):
    """Evaluate ``law`` on every tuple, in lexicographic order; first failure is the witness."""
    domains = [slot.elements() for slot in law.slots]
    return _run(law, domains, EXHAUSTIVE, budget, jobs, chunk)


def frame_check(law: Law, budget: int | None = DEFAULT_BUDGET, jobs: int = 1, chunk: int = 1 << 14):
    """Evaluate ``law`` on the product of per-slot polynomial frames only."""
    if law.degrees is None:
        raise UnsupportedError(f"{law.name}: no per-slot degree certificate, frame check refused")
    domains = [slot.frame(deg) for slot, deg in zip(law.slots, law.degrees)]
    return _run(law, domains, FRAME, budget, jobs, chunk)


def frame_size(law: Law) -> int:
    return math.prod(len(slot.frame(deg)) for slot, deg in zip(law.slots, law.degrees))


def supports_frame(law: Law) -> bool:
    if law.degrees is None:
        return False
    try:
        for slot, deg in zip(law.slots, law.degrees):
            slot.frame(deg)
    except UnsupportedError:
        return False
    return True


def check(law: Law, strategy: str = "auto", budget: int | None = DEFAULT_BUDGET, jobs: int = 1) -> VerdictReport:
    """Run one law.  ``auto`` prefers the frame check and falls back to enumeration."""
    if strategy == FRAME:
        return frame_check(law, budget, jobs)
    if strategy == EXHAUSTIVE:
        return exhaustive_check(law, budget, jobs)
    if strategy == "auto":
        if supports_frame(law):
            return frame_check(law, budget, jobs)
        return exhaustive_check(law, budget, jobs)
    raise ValueError(f"unknown strategy {strategy!r}")


def check_all(name: str, laws, strategy="auto", budget=DEFAULT_BUDGET, jobs=1) -> VerdictReport:
    return combine(name, [check(law, strategy, budget, jobs) for law in laws])
