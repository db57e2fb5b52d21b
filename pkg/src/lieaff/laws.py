"""Named law groups ("tasks") over a parsed instance, shared by the CLI and the tests.

A task name is a law-group identifier, optionally followed by map names
separated by colons, e.g. ``nijenhuis.condition:N`` or ``derivation:X:sigma``.
"""

from __future__ import annotations

import itertools

from . import engine
from .affgebra import associativity_law, bi_affine_laws, derivation_laws, sigma_law, truss_laws
from .errors import DocumentError
from .heap import heap_laws
from .lie import LieAffgebra, antisymmetry_law, idempotency_law, jacobi_law, pre_lie_laws
from .module import affine_module_laws, map_laws
from .nijenhuis import nijenhuis_law

# group name -> (components used, number of map arguments)
TASKS = {
    "heap.axioms": ((), 0),
    "affine.axioms": ((), 0),
    "mul.associativity": (("mul",), 0),
    "mul.truss": (("mul",), 0),
    "mul.bi_affine": (("mul",), 0),
    "pre_lie.left": (("mul",), 0),
    "pre_lie.right": (("mul",), 0),
    "lie.antisymmetry": (("bracket",), 0),
    "lie.jacobi": (("bracket",), 0),
    "lie.jacobi_variants": (("bracket",), 0),
    "lie.idempotent": (("bracket",), 0),
    "map.affine": ((), 1),
    "sigma.compat": (("mul",), 1),
    "derivation": (("mul",), 2),
    "nijenhuis.condition": (("bracket",), 1),
}


def parse_task(name: str):
    group, *args = name.split(":")
    if group not in TASKS:
        raise DocumentError(f"unknown law {group!r}", "/tasks")
    needs, nargs = TASKS[group]
    if len(args) != nargs:
        raise DocumentError(f"{group} takes {nargs} map name(s), got {len(args)}", "/tasks")
    return group, args


def dependencies(inst, name: str) -> tuple:
    """Components of the instance a task reads: 'mul', 'bracket' and/or map names."""
    group, args = parse_task(name)
    return TASKS[group][0] + tuple(args)


def default_tasks(inst) -> list[str]:
    tasks = ["heap.axioms", "affine.axioms"]
    if inst.mul is not None:
        tasks += ["mul.bi_affine", "mul.truss", "mul.associativity"]
    if inst.bracket is not None:
        tasks += ["lie.antisymmetry", "lie.jacobi"]
    return tasks


def task_laws(inst, name: str) -> list:
    group, args = parse_task(name)
    needs = TASKS[group][0]
    if "mul" in needs and inst.mul is None:
        raise DocumentError(f"{group} needs a mul entry", "/mul")
    if "bracket" in needs and inst.bracket is None:
        raise DocumentError(f"{group} needs a bracket entry", "/bracket")
    maps = [inst.map(a) for a in args]
    A = inst.module
    G = inst.affgebra
    L = LieAffgebra(A, inst.bracket, inst.chirality, certify=False) if inst.bracket is not None else None
    if group == "heap.axioms":
        return heap_laws(A)
    if group == "affine.axioms":
        return affine_module_laws(A)
    if group == "mul.associativity":
        return [associativity_law(G)]
    if group == "mul.truss":
        return truss_laws(G)
    if group == "mul.bi_affine":
        return bi_affine_laws(inst.mul, "mul")
    if group.startswith("pre_lie."):
        return pre_lie_laws(G, group.split(".")[1])
    if group == "lie.antisymmetry":
        return [antisymmetry_law(A, inst.bracket), antisymmetry_law(A, inst.bracket, alt=True)]
    if group == "lie.jacobi":
        return [jacobi_law(A, inst.bracket, inst.chirality)]
    if group == "lie.jacobi_variants":
        return [jacobi_law(A, inst.bracket, inst.chirality, p) for p in itertools.permutations(range(3))]
    if group == "lie.idempotent":
        return [idempotency_law(A, inst.bracket)]
    if group == "map.affine":
        return map_laws(maps[0])
    if group == "sigma.compat":
        return [sigma_law(G, maps[0])]
    if group == "derivation":
        return derivation_laws(maps[0], maps[1], G)
    if group == "nijenhuis.condition":
        return [nijenhuis_law(L, maps[0])]
    raise AssertionError(group)


def run_task(inst, name: str, strategy="auto", budget=engine.DEFAULT_BUDGET, jobs=1) -> engine.VerdictReport:
    return engine.check_all(name, task_laws(inst, name), strategy, budget, jobs)


# laws that every chart instance satisfies by construction, so corrupting
# structure constants cannot break them
STRUCTURAL = {"heap.axioms", "affine.axioms", "map.affine", "mul.bi_affine", "mul.truss"}


def all_tasks(inst) -> list[str]:
    """Every registered task that applies to ``inst``, map tasks over all named maps."""
    names = sorted(inst.maps)
    out = []
    for group, (needs, nargs) in TASKS.items():
        if "mul" in needs and inst.mul is None or "bracket" in needs and inst.bracket is None:
            continue
        for args in itertools.product(names, repeat=nargs):
            out.append(":".join((group, *args)))
    return out
