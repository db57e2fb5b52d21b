"""JSON instance documents: strict parsing (with error locations) and serialisation.

Top-level keys are exactly ``ring``, ``module`` and optionally ``mul``,
``bracket``, ``maps`` and ``tasks``.  Scalars are decimal strings (``"p/q"``
for rationals); plain JSON integers are accepted too.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .affgebra import Affgebra, BiAffineMap
from .errors import AlgebraError, DocumentError
from .lie import LEFT, RIGHT, LieAffgebra
from .module import AffineMap, CoordinateModule, TableModule
from .scalars import Ring

TOP_KEYS = {"ring", "module", "mul", "bracket", "maps", "tasks"}
CONSTRUCTIONS = ("commutator", "action", "sigma", "pre_lie")


@dataclass
class Instance:
    ring: Ring
    module: object
    mul: BiAffineMap | None = None
    bracket: BiAffineMap | None = None
    chirality: str = LEFT
    maps: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)
    bracket_source: dict | None = None

    @property
    def affgebra(self) -> Affgebra | None:
        return None if self.mul is None else Affgebra(self.module, self.mul)

    def lie(self, certify: bool = False, **kw) -> LieAffgebra | None:
        if self.bracket is None:
            return None
        return LieAffgebra(self.module, self.bracket, self.chirality, certify=certify, **kw)

    def map(self, name: str) -> AffineMap:
        if name not in self.maps:
            raise DocumentError(f"unknown map {name!r}", f"/maps/{name}")
        return self.maps[name]

    def point(self, value, location="/point"):
        return _point(self.module, value, location)


# -- parsing helpers --------------------------------------------------------

def _expect(cond, message, loc):
    if not cond:
        raise DocumentError(message, loc)


def _keys(obj, allowed, required, loc):
    _expect(isinstance(obj, dict), "expected an object", loc)
    extra = set(obj) - set(allowed)
    _expect(not extra, f"unknown key(s) {sorted(extra)}", loc)
    missing = set(required) - set(obj)
    _expect(not missing, f"missing key(s) {sorted(missing)}", loc)


def _scalar(ring: Ring, value, loc):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise DocumentError(f"scalar must be a string or integer, got {value!r}", loc)
    try:
        return ring.canonical(value)
    except AlgebraError as exc:
        raise DocumentError(str(exc), loc) from exc


def _tensor(ring: Ring, value, shape, loc):
    if not shape:
        return _scalar(ring, value, loc)
    _expect(isinstance(value, list) and len(value) == shape[0], f"expected a list of length {shape[0]}", loc)
    return [_tensor(ring, v, shape[1:], f"{loc}/{i}") for i, v in enumerate(value)]


def _index_array(value, shape, bound, loc):
    try:
        arr = np.array(value, dtype=object)
    except ValueError as exc:
        raise DocumentError("ragged table", loc) from exc
    _expect(arr.shape == tuple(shape), f"table must have shape {tuple(shape)}, got {arr.shape}", loc)
    for pos, v in np.ndenumerate(arr):
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < bound:
            raise DocumentError(f"entry {v!r} is not an index below {bound}", loc + "".join(f"/{p}" for p in pos))
    return arr.astype(np.int64)


def _point(module, value, loc):
    if isinstance(module, CoordinateModule):
        return module.ring.array(_tensor(module.ring, value, (module.dim,), loc))
    _expect(isinstance(value, int) and not isinstance(value, bool) and 0 <= value < module.size,
            f"point must be an index below {module.size}", loc)
    return np.int64(value)


def parse_ring(obj, loc="/ring") -> Ring:
    _keys(obj, {"kind", "modulus"}, {"kind"}, loc)
    try:
        return Ring(obj["kind"], obj.get("modulus"))
    except AlgebraError as exc:
        raise DocumentError(str(exc), loc) from exc


def parse_module(obj, ring: Ring, loc="/module"):
    _keys(obj, {"heap", "action"}, {"heap"}, loc)
    heap = obj["heap"]
    hl = f"{loc}/heap"
    _expect(isinstance(heap, dict), "expected an object", hl)
    if "dim" in heap:
        _keys(heap, {"dim", "ring"}, {"dim"}, hl)
        _expect("action" not in obj, "coordinate modules take no action table", f"{loc}/action")
        if "ring" in heap:
            _expect(parse_ring(heap["ring"], f"{hl}/ring") == ring, "heap ring differs from the document ring",
                    f"{hl}/ring")
        dim = heap["dim"]
        _expect(isinstance(dim, int) and not isinstance(dim, bool) and dim >= 1, "dim must be a positive integer",
                f"{hl}/dim")
        return CoordinateModule(ring, dim)
    _keys(heap, {"size", "op"}, {"size", "op"}, hl)
    n = heap["size"]
    _expect(isinstance(n, int) and not isinstance(n, bool) and n >= 1, "size must be a positive integer", f"{hl}/size")
    _expect(ring.is_finite, "table modules need a finite ring", "/ring")
    _expect("action" in obj, "table modules need an action table", f"{loc}/action")
    op = _index_array(heap["op"], (n, n, n), n, f"{hl}/op")
    action = _index_array(obj["action"], (ring.size, n, n), n, f"{loc}/action")
    return TableModule(op, ring, action, verify=False)


def parse_biaffine(obj, module, loc, extra=()):
    if isinstance(module, CoordinateModule):
        _keys(obj, {"B", "P", "Q", "r", *extra}, {"B", "P", "Q", "r"}, loc)
        d, K = module.dim, module.ring
        return BiAffineMap.chart(module, _tensor(K, obj["B"], (d, d, d), f"{loc}/B"),
                                 _tensor(K, obj["P"], (d, d), f"{loc}/P"),
                                 _tensor(K, obj["Q"], (d, d), f"{loc}/Q"), _tensor(K, obj["r"], (d,), f"{loc}/r"))
    _keys(obj, {"table", *extra}, {"table"}, loc)
    n = module.size
    return BiAffineMap.from_table(module, _index_array(obj["table"], (n, n), n, f"{loc}/table"))


def parse_map(obj, module, loc):
    _keys(obj, {"map"}, {"map"}, loc)
    body, loc = obj["map"], f"{loc}/map"
    if isinstance(module, CoordinateModule):
        _keys(body, {"M", "t"}, {"M", "t"}, loc)
        d, K = module.dim, module.ring
        return AffineMap.chart(module, module, _tensor(K, body["M"], (d, d), f"{loc}/M"),
                               _tensor(K, body["t"], (d,), f"{loc}/t"))
    _keys(body, {"table"}, {"table"}, loc)
    return AffineMap(module, module, table=_index_array(body["table"], (module.size,), module.size, f"{loc}/table"))


def _construct_bracket(obj, module, mul, maps, loc):
    kind = obj["construction"]
    _expect(kind in CONSTRUCTIONS, f"unknown construction {kind!r}", f"{loc}/construction")
    allowed = {"construction", "chirality"}
    if kind in ("commutator", "pre_lie"):
        _keys(obj, allowed, set(), loc)
        _expect(mul is not None, f"{kind} bracket needs a mul entry", loc)
        return BiAffineMap.from_function(module, lambda a, b: module.tern(mul(a, b), mul(b, a), b))
    if kind == "action":
        _keys(obj, allowed | {"zeta"}, {"zeta"}, loc)
        zeta = _scalar(module.ring, obj["zeta"], f"{loc}/zeta")
        return BiAffineMap.from_function(module, lambda a, b: module.act(zeta, a, b))
    _keys(obj, allowed | {"map"}, {"map"}, loc)
    name = obj["map"]
    _expect(name in maps, f"unknown map {name!r}", f"{loc}/map")
    sigma = maps[name]
    return BiAffineMap.from_function(module, lambda a, b: sigma(a))


def parse_document(doc) -> Instance:
    _keys(doc, TOP_KEYS, {"ring", "module"}, "")
    ring = parse_ring(doc["ring"])
    module = parse_module(doc["module"], ring)
    mul = parse_biaffine(doc["mul"], module, "/mul") if "mul" in doc else None
    maps = {}
    if "maps" in doc:
        _expect(isinstance(doc["maps"], dict), "expected an object", "/maps")
        for name, body in doc["maps"].items():
            maps[name] = parse_map(body, module, f"/maps/{name}")
    br, chirality, source = None, LEFT, None
    if "bracket" in doc:
        obj = doc["bracket"]
        _expect(isinstance(obj, dict), "expected an object", "/bracket")
        chirality = obj.get("chirality", LEFT)
        _expect(chirality in (LEFT, RIGHT), f"chirality must be {LEFT!r} or {RIGHT!r}", "/bracket/chirality")
        if "construction" in obj:
            br = _construct_bracket(obj, module, mul, maps, "/bracket")
            source = dict(obj)
        else:
            br = parse_biaffine(obj, module, "/bracket", extra=("chirality",))
    tasks = doc.get("tasks", [])
    _expect(isinstance(tasks, list) and all(isinstance(t, str) for t in tasks), "tasks must be a list of strings",
            "/tasks")
    return Instance(ring, module, mul, br, chirality, maps, list(tasks), source)


def load(path) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read document: {exc}", "") from exc
    return loads(text)


def loads(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", "") from exc
    return parse_document(doc)


# -- serialisation ----------------------------------------------------------

def module_to_json(module) -> dict:
    if isinstance(module, CoordinateModule):
        return {"heap": {"dim": module.dim}}
    return {"heap": {"size": module.size, "op": module.op.tolist()}, "action": module.action.tolist()}


def to_document(module, mul: BiAffineMap | None = None, bracket=None, maps=None, tasks=None,
                chirality: str = LEFT) -> dict:
    """``bracket`` is a :class:`BiAffineMap` or a construction dict."""
    doc = {"ring": module.ring.to_json(), "module": module_to_json(module)}
    if mul is not None:
        doc["mul"] = mul.to_json()
    if bracket is not None:
        body = dict(bracket) if isinstance(bracket, dict) else bracket.to_json()
        if chirality != LEFT:
            body["chirality"] = chirality
        doc["bracket"] = body
    if maps:
        doc["maps"] = {name: {"map": f.to_json()} for name, f in maps.items()}
    if tasks:
        doc["tasks"] = list(tasks)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"
