"""Randomised corruption self-test: frame and exhaustive checks must agree."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from . import engine
from .affgebra import BiAffineMap
from .errors import BudgetExceededError
from .laws import dependencies, run_task
from .module import AffineMap, CoordinateModule


def corrupt_biaffine(op: BiAffineMap, rng: np.random.Generator) -> BiAffineMap:
    """Add a random nonzero scalar to one random structure constant."""
    K = op.module.ring
    parts = {"B": op.B.copy(), "P": op.P.copy(), "Q": op.Q.copy(), "r": op.r.copy()}
    name = ("B", "P", "Q", "r")[rng.integers(4)]
    arr = parts[name]
    pos = tuple(int(rng.integers(s)) for s in arr.shape)
    arr[pos] = K.canonical(int(arr[pos]) + int(rng.integers(1, K.size)))
    return BiAffineMap.chart(op.module, **parts)


def corrupt_map(f: AffineMap, rng: np.random.Generator) -> AffineMap:
    K = f.target.ring
    M, t = f.M.copy(), f.t.copy()
    if rng.integers(2):
        pos = tuple(int(rng.integers(s)) for s in M.shape)
        M[pos] = K.canonical(int(M[pos]) + int(rng.integers(1, K.size)))
    else:
        i = int(rng.integers(len(t)))
        t[i] = K.canonical(int(t[i]) + int(rng.integers(1, K.size)))
    return AffineMap.chart(f.source, f.target, M, t)


def corrupt_instance(inst, deps, rng):
    """A copy of ``inst`` with one structure constant of one dependency changed."""
    dep = deps[int(rng.integers(len(deps)))]
    if dep == "mul":
        return dataclasses.replace(inst, mul=corrupt_biaffine(inst.mul, rng))
    if dep == "bracket":
        return dataclasses.replace(inst, bracket=corrupt_biaffine(inst.bracket, rng))
    maps = dict(inst.maps)
    maps[dep] = corrupt_map(maps[dep], rng)
    return dataclasses.replace(inst, maps=maps)


@dataclass
class AgreementReport:
    task: str
    agree: bool
    base_result: str
    corruptions: int = 0
    breaking: int = 0
    disagreements: list = field(default_factory=list)
    applicable: bool = True

    def to_record(self):
        return {"task": self.task, "agree": self.agree, "base": self.base_result, "corruptions": self.corruptions,
                "breaking": self.breaking, "applicable": self.applicable, "disagreements": self.disagreements}


def agreement(inst, task: str, breaking: int = 100, max_attempts: int = 2000, seed: int = 0,
              budget=4 * engine.DEFAULT_BUDGET) -> AgreementReport:
    """Compare strategies on ``task``, then on random corruptions until ``breaking`` of them fail.

    Every corruption, breaking or not, must get the same verdict from both
    strategies.  Tasks that read no corruptible component are compared on
    the base instance only.
    """
    if not isinstance(inst.module, CoordinateModule):
        raise ValueError("agreement testing needs a chart instance")
    f = run_task(inst, task, engine.FRAME, budget)
    e = run_task(inst, task, engine.EXHAUSTIVE, budget)
    rep = AgreementReport(task, f.result == e.result, e.result)
    deps = dependencies(inst, task)
    if not deps:
        rep.applicable = False
        return rep
    rng = np.random.default_rng(seed)
    while rep.breaking < breaking and rep.corruptions < max_attempts:
        bad = corrupt_instance(inst, deps, rng)
        try:
            fr = run_task(bad, task, engine.FRAME, budget).result
            ex = run_task(bad, task, engine.EXHAUSTIVE, budget).result
        except BudgetExceededError:
            continue
        rep.corruptions += 1
        if ex == engine.FAIL:
            rep.breaking += 1
        if fr != ex:
            rep.agree = False
            rep.disagreements.append({"corruption": rep.corruptions, "frame": fr, "exhaustive": ex})
    return rep
