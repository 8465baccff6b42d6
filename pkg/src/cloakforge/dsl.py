"""Instance documents: JSON with positions, name resolution, validation, serialization and recipes."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from json.decoder import JSONArray, JSONObject
from json.scanner import py_make_scanner
from pathlib import Path

from .errors import (CloakforgeError, ParseError, ResolveError, UnknownRecipe, ValidationError)
from .fincat import FinCategory, Functor
from .fusion import FiniteMonoid, all_monoids, comonad_from_right_adjoint
from .magmal import MagmalCategory, MagmalComonad, MagmalFunctor, OpmagmalMonad
from .procomonad import Procomonad, gamma_from, gamma_hom
from .prof import Profunctor, presheaf

KINDS = ("category", "poset", "monoid", "magmal", "comonad", "monad", "profunctor", "presheaf",
         "procomonad", "bundle")

# payload keys in the order they are written; required keys first in each entry
SCHEMA: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "category": (("objects", "morphisms", "identities", "compose"), ()),
    "poset": (("elements", "leq"), ()),
    "monoid": (("elements", "unit", "mul"), ()),
    "magmal": (("base", "tensor_obj"), ("tensor_mor",)),
    "comonad": (("base", "obj_map"), ("mor_map", "eps", "delta", "g2")),
    "monad": (("base", "obj_map"), ("mor_map", "eps", "delta", "g2")),
    "profunctor": (("dom", "cod"), ("values", "left", "right")),
    "presheaf": (("base",), ("values", "act")),
    "procomonad": (("base", "from"), ()),
    "bundle": (("S", "U", "C", "B", "K", "N"), ()),
}

CORPUS_DIR = Path(__file__).parent / "corpus"


# ---------------------------------------------------------------------------
# positions

class _Positions:
    """Start offsets of every JSON object and array, keyed by identity of the parsed value."""

    def __init__(self, text: str):
        self.text = text
        self.offsets: dict[int, int] = {}
        self._keep: list = []

    def record(self, value, offset: int):
        self.offsets[id(value)] = offset
        self._keep.append(value)

    def line_col(self, offset: int) -> tuple[int, int]:
        line = self.text.count("\n", 0, offset) + 1
        col = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return line, col

    def of(self, value) -> tuple[int, int] | None:
        off = self.offsets.get(id(value))
        return None if off is None else self.line_col(off)


class _Decoder(json.JSONDecoder):
    def __init__(self, pos: _Positions):
        super().__init__()
        self._pos = pos

        def parse_object(s_and_end, strict, scan_once, object_hook, object_pairs_hook, memo=None):
            s, end = s_and_end
            pairs, new_end = JSONObject(s_and_end, strict, scan_once, None, lambda p: p, memo)
            out = {}
            for k, v in pairs:
                if k in out:
                    line, col = pos.line_col(end - 1)
                    raise ParseError(f"duplicate key {k!r}", line, col, ["unique keys"])
                out[k] = v
            pos.record(out, end - 1)
            return out, new_end

        def parse_array(s_and_end, scan_once):
            s, end = s_and_end
            value, new_end = JSONArray(s_and_end, scan_once)
            pos.record(value, end - 1)
            return value, new_end

        self.parse_object = parse_object
        self.parse_array = parse_array
        self.memo = {}
        self.scan_once = py_make_scanner(self)


_EXPECTED = {
    "Expecting value": ["a JSON value"],
    "Expecting ',' delimiter": ["','"],
    "Expecting ':' delimiter": ["':'"],
    "Expecting property name enclosed in double quotes": ["a double-quoted key"],
    "Unterminated string starting at": ["'\"'"],
    "Extra data": ["end of input"],
    "Invalid control character at": ["an escaped character"],
    "Invalid \\escape": ["a valid escape"],
}


def _load(text: str) -> tuple[object, _Positions]:
    pos = _Positions(text)
    try:
        value = _Decoder(pos).decode(text)
    except json.JSONDecodeError as e:
        expected = next((v for k, v in _EXPECTED.items() if e.msg.startswith(k)), [])
        raise ParseError(e.msg, e.lineno, e.colno, expected) from None
    return value, pos


# ---------------------------------------------------------------------------
# documents

@dataclass
class InstanceDoc:
    kind: str
    name: str
    payload: dict
    positions: _Positions | None = field(default=None, compare=False, repr=False)

    def where(self, node) -> tuple[int | None, int | None]:
        if self.positions is None:
            return None, None
        lc = self.positions.of(node)
        return lc if lc else (None, None)


def _doc_from_json(value, pos: _Positions | None, top: bool) -> InstanceDoc:
    line, col = pos.of(value) if pos and pos.of(value) else (None, None)
    if not isinstance(value, dict):
        raise ParseError("instance document must be an object", line, col, ["'{'"])
    for key in ("kind", "payload") + (("name",) if top else ()):
        if key not in value:
            raise ParseError(f"missing key {key!r}", line, col, [repr(key)])
    extra = set(value) - {"kind", "name", "payload"}
    if extra:
        raise ParseError(f"unexpected key {sorted(extra)[0]!r}", line, col, ["'kind'", "'name'", "'payload'"])
    kind, name, payload = value["kind"], value.get("name", ""), value["payload"]
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}", line, col, [repr(k) for k in KINDS])
    if not isinstance(name, str):
        raise ParseError("name must be a string", line, col, ["a string"])
    pl, pc = pos.of(payload) if pos and pos.of(payload) else (line, col)
    if not isinstance(payload, dict):
        raise ParseError("payload must be an object", pl, pc, ["'{'"])
    required, optional = SCHEMA[kind]
    for key in required:
        if key not in payload:
            raise ParseError(f"{kind} payload lacks {key!r}", pl, pc, [repr(key)])
    for key in payload:
        if key not in required + optional:
            raise ParseError(f"unexpected key {key!r} in {kind} payload", pl, pc,
                             [repr(k) for k in required + optional])
    return InstanceDoc(kind, name, payload, pos)


def parse_documents(text: str) -> list[InstanceDoc]:
    """A document is one instance object or an array of them; later ones may refer to earlier names."""
    value, pos = _load(text)
    items = value if isinstance(value, list) else [value]
    docs = [_doc_from_json(v, pos, top=True) for v in items]
    seen = set()
    for d in docs:
        if d.name in seen:
            line, col = d.where(d.payload)
            raise ParseError(f"duplicate instance name {d.name!r}", line, col, ["unique names"])
        seen.add(d.name)
    Workspace(docs).build_all()
    return docs


def parse_instance(text: str) -> InstanceDoc:
    docs = parse_documents(text)
    if len(docs) != 1:
        raise ParseError(f"expected one instance, found {len(docs)}", 1, 1, ["a single object"])
    return docs[0]


def _canonical(doc: InstanceDoc | dict) -> dict:
    if isinstance(doc, dict):
        doc = InstanceDoc(doc["kind"], doc.get("name", ""), doc["payload"])
    required, optional = SCHEMA[doc.kind]
    payload = {}
    for key in required + optional:
        if key in doc.payload:
            payload[key] = _canonical_value(doc.payload[key])
    return {"kind": doc.kind, "name": doc.name, "payload": payload}


def _canonical_value(v):
    if isinstance(v, dict) and "kind" in v and "payload" in v:
        return _canonical(v)
    if isinstance(v, dict):
        return {k: _canonical_value(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_canonical_value(x) for x in v]
    return v


def serialize(docs: InstanceDoc | list[InstanceDoc]) -> str:
    body = _canonical(docs) if isinstance(docs, InstanceDoc) else [_canonical(d) for d in docs]
    return json.dumps(body, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# building

class Workspace:
    """Resolves names across a list of documents and builds each one once."""

    def __init__(self, docs: list[InstanceDoc]):
        self.docs = {d.name: d for d in docs}
        self.order = [d.name for d in docs]
        self._built: dict[int, object] = {}
        self._keep: list = []
        self._active: set[int] = set()

    def build_all(self) -> list[tuple[str, object]]:
        return [(n, self.build(self.docs[n])) for n in self.order]

    def get(self, name: str):
        return self.build(self.docs[name])

    def build(self, doc: InstanceDoc):
        key = id(doc.payload)
        if key in self._built:
            return self._built[key]
        if key in self._active:
            line, col = doc.where(doc.payload)
            raise ResolveError(doc.name, "cyclic reference to", line, col)
        self._active.add(key)
        try:
            obj = _BUILDERS[doc.kind](self, doc)
        except (ParseError, ResolveError, ValidationError):
            raise
        except CloakforgeError as e:
            line, col = doc.where(doc.payload)
            raise ValidationError(f"{doc.kind} {doc.name or '(inline)'}", e, line, col) from None
        finally:
            self._active.discard(key)
        self._built[key] = obj
        self._keep.append(doc)
        return obj

    def ref(self, doc: InstanceDoc, key: str, kinds: tuple[str, ...]):
        """Resolve ``payload[key]``: a sibling name, an inline document, or ``recipe:...``."""
        v = doc.payload[key]
        line, col = doc.where(v) if isinstance(v, (dict, list)) else doc.where(doc.payload)
        if isinstance(v, dict):
            sub = _doc_from_json(v, doc.positions, top=False)
            obj = self.build(sub)
        elif isinstance(v, str) and v.startswith("recipe:"):
            found = recipe_objects(v[len("recipe:"):])
            if len(found) != 1:
                raise ResolveError(v, f"single-instance recipe for {key!r}", line, col)
            obj = found[0][1]
        elif isinstance(v, str):
            if v not in self.docs:
                raise ResolveError(v, f"instance for {key!r}", line, col)
            obj = self.get(v)
        else:
            raise ParseError(f"{key!r} must be a name or an inline document", line, col,
                             ["a string", "an object"])
        got = _kind_of(obj)
        if got not in kinds:
            raise ResolveError(v if isinstance(v, str) else got,
                               f"{' or '.join(kinds)} for {key!r}; got a {got}", line, col)
        return obj


def _kind_of(obj) -> str:
    if isinstance(obj, MagmalComonad):
        return "comonad"
    if isinstance(obj, OpmagmalMonad):
        return "monad"
    if isinstance(obj, MagmalCategory):
        return "magmal"
    if isinstance(obj, FinCategory):
        return "category"
    if isinstance(obj, FiniteMonoid):
        return "monoid"
    if isinstance(obj, Procomonad):
        return "procomonad"
    if isinstance(obj, Profunctor):
        return "presheaf" if obj.meta.get("presheaf") else "profunctor"
    return type(obj).__name__.lower()


def _category(ws: Workspace, doc: InstanceDoc, key: str) -> FinCategory:
    obj = ws.ref(doc, key, ("category", "magmal", "comonad", "monad"))
    if isinstance(obj, (MagmalComonad, OpmagmalMonad)):
        return obj.base
    return obj.base if isinstance(obj, MagmalCategory) else obj


def _magmal(ws: Workspace, doc: InstanceDoc, key: str = "base") -> MagmalCategory:
    obj = ws.ref(doc, key, ("magmal", "comonad", "monad"))
    return obj if isinstance(obj, MagmalCategory) else obj.C


def _list(doc: InstanceDoc, key: str, arity: int | None = None) -> list:
    v = doc.payload.get(key, [])
    line, col = doc.where(v) if isinstance(v, (list, dict)) else doc.where(doc.payload)
    if not isinstance(v, list):
        raise ParseError(f"{key!r} must be an array", line, col, ["'['"])
    if arity is not None:
        for row in v:
            if not isinstance(row, list) or len(row) != arity:
                rl, rc = doc.where(row) if isinstance(row, list) else (line, col)
                raise ParseError(f"each entry of {key!r} has {arity} items", rl or line, rc or col,
                                 [f"an array of {arity} items"])
    return v


def _map(doc: InstanceDoc, key: str) -> dict:
    v = doc.payload.get(key, {})
    line, col = doc.where(v) if isinstance(v, (list, dict)) else doc.where(doc.payload)
    if not isinstance(v, dict):
        raise ParseError(f"{key!r} must be an object", line, col, ["'{'"])
    return v


def _name_lookup(names, what: str, doc: InstanceDoc, node):
    idx = {str(n): i for i, n in enumerate(names)}

    def look(x):
        try:
            return idx[str(x)]
        except KeyError:
            line, col = doc.where(node)
            raise ResolveError(str(x), what, line, col) from None
    return look


def _build_category(ws, doc):
    p = doc.payload
    objects = [str(o) for o in _list(doc, "objects")]
    ob = _name_lookup(objects, "object", doc, p["objects"])
    mors = _list(doc, "morphisms")
    rows = []
    for m in mors:
        if not isinstance(m, dict) or set(m) != {"name", "src", "dst"}:
            line, col = doc.where(m) if isinstance(m, dict) else doc.where(mors)
            raise ParseError("morphism entries are {name, src, dst}", line, col, ["'name'", "'src'", "'dst'"])
        rows.append((str(m["name"]), ob(m["src"]), ob(m["dst"])))
    mo = _name_lookup([r[0] for r in rows], "morphism", doc, mors)
    ids_map = _map(doc, "identities")
    identity = []
    for o in objects:
        if o not in ids_map:
            line, col = doc.where(ids_map)
            raise ParseError(f"no identity given for {o!r}", line, col, [repr(o)])
        identity.append(mo(ids_map[o]))
    comp = _list(doc, "compose", 3)
    table = {(mo(g), mo(f)): mo(gf) for g, f, gf in comp}
    return FinCategory(objects, rows, identity, table, name=doc.name)


def _build_poset(ws, doc):
    els = [str(e) for e in _list(doc, "elements")]
    look = _name_lookup(els, "element", doc, doc.payload["leq"])
    leq = [(els[look(a)], els[look(b)]) for a, b in _list(doc, "leq", 2)]
    return FinCategory.from_poset(els, leq, name=doc.name)


def _build_monoid(ws, doc):
    els = tuple(str(e) for e in _list(doc, "elements"))
    look = _name_lookup(els, "monoid element", doc, doc.payload["elements"])
    mul = {}
    for a, b, ab in _list(doc, "mul", 3):
        mul[(els[look(a)], els[look(b)])] = els[look(ab)]
    return FiniteMonoid(els, els[look(doc.payload["unit"])], mul)


def _build_magmal(ws, doc):
    B = _category(ws, doc, "base")
    ob = _name_lookup(B.objects, "object", doc, doc.payload["tensor_obj"])
    tobj = {(ob(x), ob(y)): ob(xy) for x, y, xy in _list(doc, "tensor_obj", 3)}
    n = B.n_obj
    missing = [(x, y) for x in range(n) for y in range(n) if (x, y) not in tobj]
    if missing:
        line, col = doc.where(doc.payload["tensor_obj"])
        x, y = missing[0]
        raise ParseError(f"tensor_obj lacks {B.objects[x]}⊗{B.objects[y]}", line, col,
                         [f"[{B.objects[x]!r}, {B.objects[y]!r}, ...]"])
    if "tensor_mor" not in doc.payload:
        if not B.is_thin():
            line, col = doc.where(doc.payload)
            raise ParseError("tensor_mor is required when the base is not thin", line, col, ["'tensor_mor'"])
        return MagmalCategory.from_table(B, tobj, name=doc.name)
    mo = _name_lookup(B.mor_names, "morphism", doc, doc.payload["tensor_mor"])
    tmor = {(mo(f), mo(g)): mo(fg) for f, g, fg in _list(doc, "tensor_mor", 3)}
    m = B.n_mor
    mor_map = [tmor.get((f, g)) for f in range(m) for g in range(m)]
    if None in mor_map:
        k = mor_map.index(None)
        line, col = doc.where(doc.payload["tensor_mor"])
        raise ParseError(f"tensor_mor lacks {B.mor_names[k // m]}⊗{B.mor_names[k % m]}", line, col,
                         ["a complete table"])
    obj_map = [tobj[(x, y)] for x in range(n) for y in range(n)]
    return MagmalCategory.from_maps(B, obj_map, mor_map, name=doc.name)


def _build_operator(ws, doc):
    C = _magmal(ws, doc)
    B = C.base
    p = doc.payload
    ob = _name_lookup(B.objects, "object", doc, p["obj_map"])
    om = _map(doc, "obj_map")
    obj_map = [None] * B.n_obj
    for x, gx in om.items():
        obj_map[ob(x)] = ob(gx)
    if None in obj_map:
        line, col = doc.where(om)
        raise ParseError(f"obj_map lacks {B.objects[obj_map.index(None)]!r}", line, col, ["a total map"])
    structural = ("mor_map", "eps", "delta", "g2")
    if B.is_thin() and not any(k in p for k in structural):
        if doc.kind == "comonad":
            return MagmalComonad.thin(C, obj_map, name=doc.name)
        return OpmagmalMonad.thin(C, obj_map, name=doc.name)
    for k in structural:
        if k not in p:
            line, col = doc.where(p)
            raise ParseError(f"{doc.kind} payload needs {k!r} unless the base is thin", line, col, [repr(k)])
    mo = _name_lookup(B.mor_names, "morphism", doc, p["mor_map"])
    mm = _map(doc, "mor_map")
    mor_map = [None] * B.n_mor
    for f, gf in mm.items():
        mor_map[mo(f)] = mo(gf)
    if None in mor_map:
        line, col = doc.where(mm)
        raise ParseError(f"mor_map lacks {B.mor_names[mor_map.index(None)]!r}", line, col, ["a total map"])
    e = [None] * B.n_obj
    d = [None] * B.n_obj
    for tbl, out in (("eps", e), ("delta", d)):
        for x, f in _map(doc, tbl).items():
            out[ob(x)] = mo(f)
        if None in out:
            line, col = doc.where(p[tbl])
            raise ParseError(f"{tbl} lacks {B.objects[out.index(None)]!r}", line, col, ["a total map"])
    g2 = {(ob(x), ob(y)): mo(f) for x, y, f in _list(doc, "g2", 3)}
    F = Functor(B, B, obj_map, mor_map, name=doc.name)
    if doc.kind == "comonad":
        return MagmalComonad(MagmalFunctor(F, C, C, g2, name=doc.name), e, d, name=doc.name)
    return OpmagmalMonad(C, F, e, d, g2, name=doc.name)


def _build_profunctor(ws, doc):
    A = _category(ws, doc, "dom")
    Bc = _category(ws, doc, "cod")
    p = doc.payload
    bo = _name_lookup(Bc.objects, "codomain object", doc, p.get("values", p))
    ao = _name_lookup(A.objects, "domain object", doc, p.get("values", p))
    sets = {}
    for b, a, xs in _list(doc, "values", 3):
        sets[(bo(b), ao(a))] = [str(x) for x in xs]
    gm = _name_lookup(Bc.mor_names, "codomain morphism", doc, p.get("left", p))
    fm = _name_lookup(A.mor_names, "domain morphism", doc, p.get("right", p))
    left, right = {}, {}
    for g, a, x, y in _list(doc, "left", 4):
        left.setdefault((gm(g), ao(a)), {})[str(x)] = str(y)
    for f, b, x, y in _list(doc, "right", 4):
        right.setdefault((fm(f), bo(b)), {})[str(x)] = str(y)
    for g in Bc.mor_ids():
        for a in A.obj_ids():
            left.setdefault((g, a), {})
    for f in A.mor_ids():
        for b in Bc.obj_ids():
            right.setdefault((f, b), {})
    return Profunctor(A, Bc, sets, left, right, name=doc.name)


def _build_presheaf(ws, doc):
    C = _category(ws, doc, "base")
    p = doc.payload
    ob = _name_lookup(C.objects, "object", doc, p.get("values", p))
    mo = _name_lookup(C.mor_names, "morphism", doc, p.get("act", p))
    sets = {ob(x): [str(s) for s in xs] for x, xs in _list(doc, "values", 2)}
    act = {f: {} for f in C.mor_ids()}
    for f, s, t in _list(doc, "act", 3):
        act[mo(f)][str(s)] = str(t)
    return presheaf(C, sets, act, name=doc.name)


def _build_procomonad(ws, doc):
    src = doc.payload["from"]
    if src == "hom":
        return gamma_hom(_magmal(ws, doc))
    C = _magmal(ws, doc)
    X = ws.ref(doc, "from", ("comonad", "monad"))
    if X.C is not C and X.C.base != C.base:
        line, col = doc.where(doc.payload)
        raise ResolveError(X.name, "operator on this base", line, col)
    return gamma_from(X)


def _build_bundle(ws, doc):
    from .generators import Bundle
    parts = {k: ws.ref(doc, k, ("profunctor", "presheaf")) for k in ("S", "U", "C", "B", "K", "N")}
    return Bundle(doc.name, **parts)


_BUILDERS = {
    "category": _build_category, "poset": _build_poset, "monoid": _build_monoid, "magmal": _build_magmal,
    "comonad": _build_operator, "monad": _build_operator, "profunctor": _build_profunctor,
    "presheaf": _build_presheaf, "procomonad": _build_procomonad, "bundle": _build_bundle,
}


def load_file(path: str | Path) -> list[tuple[str, object]]:
    text = Path(path).read_text(encoding="utf-8")
    docs = parse_documents(text)
    return Workspace(docs).build_all()


# ---------------------------------------------------------------------------
# objects to documents

def _label(x) -> str:
    if isinstance(x, str):
        return x
    return json.dumps(_plain(x), ensure_ascii=False, separators=(",", ":"))


def _plain(x):
    if isinstance(x, (tuple, list)):
        return [_plain(v) for v in x]
    if isinstance(x, (int, str)) or x is None:
        return x
    return repr(x)


def _is_plain_poset(C: FinCategory) -> bool:
    if not C.is_poset():
        return False
    P = FinCategory.from_poset(C.objects, [(C.objects[C.src[f]], C.objects[C.dst[f]]) for f in C.mor_ids()])
    return P == C and P.mor_names == C.mor_names


def _covers(C: FinCategory) -> list[list[str]]:
    out = []
    n = C.n_obj
    for a in range(n):
        for b in range(n):
            if a != b and C.leq(a, b) and not any(c not in (a, b) and C.leq(a, c) and C.leq(c, b) for c in range(n)):
                out.append([C.objects[a], C.objects[b]])
    return out


def to_doc(obj, name: str = "") -> InstanceDoc:
    """The canonical document of a built object (inverse of building up to element labels)."""
    from .generators import Bundle
    if isinstance(obj, FinCategory):
        nm = name or obj.name
        if _is_plain_poset(obj):
            return InstanceDoc("poset", nm, {"elements": list(obj.objects), "leq": _covers(obj)})
        if len(set(obj.mor_names)) != obj.n_mor or len(set(obj.objects)) != obj.n_obj:
            raise CloakforgeError(f"category {nm} has repeated names and cannot be written")
        mn = obj.mor_names
        return InstanceDoc("category", nm, {
            "objects": list(obj.objects),
            "morphisms": [{"name": mn[f], "src": obj.objects[obj.src[f]], "dst": obj.objects[obj.dst[f]]}
                          for f in obj.mor_ids()],
            "identities": {obj.objects[x]: mn[obj.id(x)] for x in obj.obj_ids()},
            "compose": [[mn[g], mn[f], mn[h]] for (g, f), h in sorted(obj.table.items())],
        })
    if isinstance(obj, MagmalCategory):
        B = obj.base
        o = B.objects
        payload = {"base": _inline(B), "tensor_obj": [[o[x], o[y], o[obj.t(x, y)]] for x in B.obj_ids()
                                                      for y in B.obj_ids()]}
        if not B.is_thin():
            mn = B.mor_names
            payload["tensor_mor"] = [[mn[f], mn[g], mn[obj.tm(f, g)]] for f in B.mor_ids() for g in B.mor_ids()]
        return InstanceDoc("magmal", name or obj.name, payload)
    if isinstance(obj, (MagmalComonad, OpmagmalMonad)):
        co = isinstance(obj, MagmalComonad)
        C = obj.C
        B = C.base
        o, mn = B.objects, B.mor_names
        payload = {"base": _inline(C), "obj_map": {o[x]: o[obj.ob(x)] for x in B.obj_ids()}}
        if not B.is_thin():
            e, d = (obj.eps, obj.delta) if co else (obj.eta, obj.mu)
            two = (lambda x, y: obj.g2(x, y)) if co else (lambda x, y: obj.t2[(x, y)])
            payload.update({
                "mor_map": {mn[f]: mn[obj.fmap(f)] for f in B.mor_ids()},
                "eps": {o[x]: mn[e[x]] for x in B.obj_ids()},
                "delta": {o[x]: mn[d[x]] for x in B.obj_ids()},
                "g2": [[o[x], o[y], mn[two(x, y)]] for x in B.obj_ids() for y in B.obj_ids()],
            })
        return InstanceDoc("comonad" if co else "monad", name or obj.name, payload)
    if isinstance(obj, FiniteMonoid):
        s = str
        return InstanceDoc("monoid", name or "monoid", {
            "elements": [s(e) for e in obj.elements], "unit": s(obj.unit),
            "mul": [[s(a), s(b), s(obj.mul[(a, b)])] for a in obj.elements for b in obj.elements]})
    if isinstance(obj, Profunctor):
        A, B = obj.dom, obj.cod
        if obj.meta.get("presheaf"):
            return InstanceDoc("presheaf", name or obj.name, {
                "base": _inline(B),
                "values": [[B.objects[x], [_label(s) for s in obj.val(x, 0)]] for x in B.obj_ids()],
                "act": [[B.mor_names[f], _label(s), _label(obj.lact(f, 0, s))]
                        for f in B.mor_ids() for s in obj.val(B.dst[f], 0)]})
        for b, a in obj.cells():
            if len({_label(x) for x in obj.val(b, a)}) != len(obj.val(b, a)):
                raise CloakforgeError(f"profunctor {obj.name} has elements with equal labels")
        return InstanceDoc("profunctor", name or obj.name, {
            "dom": _inline(A), "cod": _inline(B),
            "values": [[B.objects[b], A.objects[a], [_label(x) for x in obj.val(b, a)]] for b, a in obj.cells()],
            "left": [[B.mor_names[g], A.objects[a], _label(x), _label(obj.lact(g, a, x))]
                     for g in B.mor_ids() for a in A.obj_ids() for x in obj.val(B.dst[g], a)],
            "right": [[A.mor_names[f], B.objects[b], _label(x), _label(obj.ract(f, b, x))]
                      for f in A.mor_ids() for b in B.obj_ids() for x in obj.val(b, A.src[f])]})
    if isinstance(obj, Bundle):
        return InstanceDoc("bundle", name or obj.name, {
            k: _inline(getattr(obj, k)) for k in ("S", "U", "C", "B", "K", "N")})
    raise CloakforgeError(f"no document form for {type(obj).__name__}")


def _inline(obj) -> dict:
    d = to_doc(obj)
    return {"kind": d.kind, "name": d.name, "payload": d.payload}


# ---------------------------------------------------------------------------
# recipes

_RECIPE = re.compile(r"^\s*([a-z][a-z0-9-]*)\s*(?:\((.*)\))?\s*$", re.S)


def _lattice_by_name(arg: str) -> MagmalCategory:
    from . import generators as g
    m = re.fullmatch(r"chain(\d+)|heyting-chain\((\d+)\)", arg)
    if m:
        return g.heyting_chain(int(m.group(1) or m.group(2)))
    for L in g.heyting_lattices(5):
        if L.name == arg:
            return L
    raise UnknownRecipe(f"unknown lattice {arg!r}")


def _int(arg: str, recipe: str) -> int:
    try:
        return int(arg)
    except ValueError:
        raise UnknownRecipe(f"{recipe} takes an integer, got {arg!r}") from None


def recipe_objects(recipe: str) -> list[tuple[str, object]]:
    """Evaluate ``name(args)`` to named instances."""
    from . import generators as g
    m = _RECIPE.match(recipe)
    if not m:
        raise UnknownRecipe(f"cannot read recipe {recipe!r}")
    name, arg = m.group(1), (m.group(2) or "").strip()
    if name == "heyting-chain":
        L = g.heyting_chain(_int(arg, name))
        return [(L.name, L)]
    if name == "diamond":
        return [("diamond", g.diamond())]
    if name == "all-heyting":
        return [(L.name, L) for L in g.heyting_lattices(_int(arg or "5", name))]
    if name == "interior-operators":
        L = _lattice_by_name(arg)
        return [(f"{L.name}/{G.name}", G) for G in g.interior_operators(L)]
    if name == "closure-operators":
        L = _lattice_by_name(arg)
        return [(f"{L.name}/{T.name}", T) for T in g.closure_operators(L)]
    if name == "delta-comonads-from-adjoints":
        L = _lattice_by_name(arg)
        out = []
        for T, adj in g.adjoint_pairs(L):
            G = comonad_from_right_adjoint(T, adj)
            out.append((f"{L.name}/{G.name}", G))
        return out
    if name == "monoid":
        try:
            rows = json.loads(arg)
            return [("monoid", FiniteMonoid.from_table(rows))]
        except (ValueError, TypeError, IndexError, KeyError):
            raise UnknownRecipe(f"monoid takes a square table, got {arg!r}") from None
    if name == "all-monoids":
        # all-monoids(n) is order exactly n; all-monoids(<=n) collects orders 1..n
        if arg.startswith("<="):
            n = _int(arg[2:].strip(), name)
            return [(f"monoid{k}", H) for k, H in enumerate(g.monoids_upto(n))]
        n = _int(arg, name)
        return [(f"monoid{n}.{k}", H) for k, H in enumerate(all_monoids(n))]
    if name == "cyclic-group":
        return [(f"Z{arg}", g.cyclic_group(_int(arg, name)))]
    if name == "mnd-suite":
        return [(m.name, m) for m in g.mnd_suite()]
    if name == "bundle-suite":
        return [(b.name, b) for b in g.bundle_suite()]
    if name == "dubuc-suite":
        return [(d.name, d) for d in g.dubuc_suite()]
    raise UnknownRecipe(f"unknown recipe {name!r}")


def generate_instance(recipe: str) -> list[InstanceDoc]:
    return [to_doc(obj, name) for name, obj in recipe_objects(recipe)]


def load_input(arg: str) -> list[tuple[str, object]]:
    """A ``recipe:...`` string or a path to a document file."""
    if arg.startswith("recipe:"):
        return recipe_objects(arg[len("recipe:"):])
    return load_file(arg)


def corpus_files() -> list[Path]:
    return sorted(CORPUS_DIR.glob("*.json"))
