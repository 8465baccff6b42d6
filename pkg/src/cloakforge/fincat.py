"""Finite categories given by total composition tables.

Object and morphism ids are dense integers; names live in side tables.  Every
search in this module walks ids in increasing order, so any witness it
returns is the least one in that order.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import LawViolation, MalformedTable, NotParallel, ShapeMismatch, SizeLimitExceeded

DEFAULT_SIZE_LIMIT = 20000


def size_limit(default: int = DEFAULT_SIZE_LIMIT) -> int:
    raw = os.environ.get("CLOAKFORGE_SIZE_LIMIT")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return default


class FinCategory:
    """A finite category.

    ``morphisms`` is a sequence of ``(name, src, dst)``; ``compose`` maps
    ``(g, f)`` to ``g∘f`` and must be defined exactly on composable pairs.
    ``obj_labels``/``mor_labels`` carry arbitrary payloads for derived
    categories (coalgebras, functors, ...).
    """

    def __init__(
        self,
        objects: Sequence[str],
        morphisms: Sequence[tuple[str, int, int]],
        identity: Sequence[int],
        compose: Mapping[tuple[int, int], int],
        *,
        obj_labels: Sequence | None = None,
        mor_labels: Sequence | None = None,
        name: str = "",
        check: bool = True,
    ):
        self.name = name
        self.objects = tuple(str(o) for o in objects)
        self.mor_names = tuple(str(m[0]) for m in morphisms)
        self.src = tuple(int(m[1]) for m in morphisms)
        self.dst = tuple(int(m[2]) for m in morphisms)
        self.identity = tuple(int(i) for i in identity)
        self.table = dict(compose)
        self.obj_labels = tuple(obj_labels) if obj_labels is not None else self.objects
        self.mor_labels = tuple(mor_labels) if mor_labels is not None else self.mor_names
        self._op: FinCategory | None = None
        self._hom: dict[tuple[int, int], tuple[int, ...]] = {}
        n = len(self.objects)
        for f, (a, b) in enumerate(zip(self.src, self.dst)):
            if not (0 <= a < n and 0 <= b < n):
                raise MalformedTable(f"morphism {self.mor_names[f]} has unknown endpoints")
            self._hom.setdefault((a, b), ())
            self._hom[(a, b)] += (f,)
        self._key = (self.objects, self.src, self.dst, self.identity)
        if check:
            violations = validate_category(self)
            if violations:
                raise LawViolation(violations, f"category {name or '?'}")

    # -- basic access -------------------------------------------------------
    @property
    def n_obj(self) -> int:
        return len(self.objects)

    @property
    def n_mor(self) -> int:
        return len(self.src)

    def obj_ids(self) -> range:
        return range(len(self.objects))

    def mor_ids(self) -> range:
        return range(len(self.src))

    def hom(self, a: int, b: int) -> tuple[int, ...]:
        return self._hom.get((a, b), ())

    def id(self, a: int) -> int:
        return self.identity[a]

    def comp(self, g: int, f: int) -> int:
        try:
            return self.table[(g, f)]
        except KeyError:
            raise MalformedTable(
                f"cannot compose {self.mor_names[g]} after {self.mor_names[f]}"
            ) from None

    def compose(self, *fs: int) -> int:
        """Compose right-to-left: ``compose(h, g, f) = h∘g∘f``."""
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.comp(g, out)
        return out

    def is_identity(self, f: int) -> bool:
        return self.identity[self.src[f]] == f

    def obj_index(self, name) -> int:
        if isinstance(name, int):
            return name
        try:
            return self.objects.index(str(name))
        except ValueError:
            raise KeyError(f"unknown object {name!r}") from None

    def mor_index(self, name) -> int:
        if isinstance(name, int):
            return name
        try:
            return self.mor_names.index(str(name))
        except ValueError:
            raise KeyError(f"unknown morphism {name!r}") from None

    def is_poset(self) -> bool:
        return all(len(h) <= 1 for h in self._hom.values()) and all(
            not (self.hom(a, b) and self.hom(b, a)) or a == b
            for (a, b) in self._hom
        )

    def is_thin(self) -> bool:
        return all(len(h) <= 1 for h in self._hom.values())

    def leq(self, a: int, b: int) -> bool:
        return bool(self.hom(a, b))

    def the(self, a: int, b: int) -> int:
        """The unique morphism a→b of a thin category."""
        h = self.hom(a, b)
        if len(h) != 1:
            raise MalformedTable(
                f"expected exactly one morphism {self.objects[a]}→{self.objects[b]}, found {len(h)}"
            )
        return h[0]

    # -- structure ----------------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinCategory):
            return NotImplemented
        return self._key == other._key and self.table == other.table

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<FinCategory{label}: {self.n_obj} objects, {self.n_mor} morphisms>"

    def op(self) -> FinCategory:
        if self._op is None:
            morphisms = [(f"{n}^op", b, a) for n, a, b in zip(self.mor_names, self.src, self.dst)]
            table = {(f, g): h for (g, f), h in self.table.items()}
            opc = FinCategory(
                self.objects, morphisms, self.identity, table,
                obj_labels=self.obj_labels, mor_labels=self.mor_labels,
                name=f"{self.name}^op" if self.name else "", check=False,
            )
            opc._op = self
            self._op = opc
        return self._op

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_poset(cls, elements: Sequence[str], leq: Iterable[tuple], name: str = "") -> FinCategory:
        """Poset as a category; ``leq`` is closed reflexively and transitively."""
        elements = [str(e) for e in elements]
        idx = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        rel = [[i == j for j in range(n)] for i in range(n)]
        for a, b in leq:
            try:
                rel[idx[str(a)]][idx[str(b)]] = True
            except KeyError as exc:
                raise MalformedTable(f"unknown element {exc.args[0]!r} in order relation") from None
        for k in range(n):
            for i in range(n):
                if rel[i][k]:
                    for j in range(n):
                        if rel[k][j]:
                            rel[i][j] = True
        for i in range(n):
            for j in range(i + 1, n):
                if rel[i][j] and rel[j][i]:
                    raise LawViolation(
                        [f"{elements[i]} and {elements[j]} are mutually below each other"], "poset"
                    )
        morphisms, ids, mid = [], [0] * n, {}
        for i in range(n):
            for j in range(n):
                if rel[i][j]:
                    mid[(i, j)] = len(morphisms)
                    nm = f"1_{elements[i]}" if i == j else f"{elements[i]}<={elements[j]}"
                    morphisms.append((nm, i, j))
                    if i == j:
                        ids[i] = mid[(i, j)]
        table = {}
        for (j, k), g in mid.items():
            for (i, j2), f in mid.items():
                if j2 == j:
                    table[(g, f)] = mid[(i, k)]
        return cls(elements, morphisms, ids, table, name=name, check=False)

    @classmethod
    def from_monoid(cls, elements: Sequence[str], unit: str, mul: Mapping[tuple, str], name: str = "") -> FinCategory:
        """One-object category; composition ``g∘f`` is ``mul[(g, f)]``."""
        elements = [str(e) for e in elements]
        idx = {e: i for i, e in enumerate(elements)}
        table = {}
        for (a, b), c in mul.items():
            table[(idx[str(a)], idx[str(b)])] = idx[str(c)]
        return cls(["*"], [(e, 0, 0) for e in elements], [idx[str(unit)]], table, name=name)

    @classmethod
    def discrete(cls, names: Sequence[str], name: str = "") -> FinCategory:
        names = [str(x) for x in names]
        morphisms = [(f"1_{x}", i, i) for i, x in enumerate(names)]
        table = {(i, i): i for i in range(len(names))}
        return cls(names, morphisms, list(range(len(names))), table, name=name, check=False)

    @classmethod
    def terminal(cls) -> FinCategory:
        return cls.discrete(["*"], name="1")


def validate_category(C: FinCategory) -> list[str]:
    """Every violated identity/associativity/typing instance; empty means lawful."""
    out: list[str] = []
    n, m = C.n_obj, C.n_mor
    nm = C.mor_names
    if len(C.identity) != n:
        raise MalformedTable("identity table must have one entry per object")
    for a, i in enumerate(C.identity):
        if not 0 <= i < m:
            raise MalformedTable(f"identity of {C.objects[a]} is an unknown morphism")
        if C.src[i] != a or C.dst[i] != a:
            out.append(f"identity of {C.objects[a]} is {nm[i]}: {C.objects[C.src[i]]}→{C.objects[C.dst[i]]}")
    for (g, f), h in C.table.items():
        if not (0 <= g < m and 0 <= f < m and 0 <= h < m):
            raise MalformedTable(f"composition entry {(g, f, h)} references unknown morphisms")
        if C.dst[f] != C.src[g]:
            out.append(f"composite {nm[g]}∘{nm[f]} defined for non-composable pair")
        elif C.src[h] != C.src[f] or C.dst[h] != C.dst[g]:
            out.append(f"composite {nm[g]}∘{nm[f]}={nm[h]} has wrong endpoints")
    by_src: dict[int, list[int]] = {}
    for g in range(m):
        by_src.setdefault(C.src[g], []).append(g)
    for f in range(m):
        for g in by_src.get(C.dst[f], []):
            if (g, f) not in C.table:
                out.append(f"composite {nm[g]}∘{nm[f]} missing")
    if out:
        return out
    for f in range(m):
        a, b = C.src[f], C.dst[f]
        if C.table[(f, C.identity[a])] != f:
            out.append(f"right identity law fails at {nm[f]}")
        if C.table[(C.identity[b], f)] != f:
            out.append(f"left identity law fails at {nm[f]}")
    for f in range(m):
        for g in by_src.get(C.dst[f], []):
            gf = C.table[(g, f)]
            for h in by_src.get(C.dst[g], []):
                if C.table[(h, gf)] != C.table[(C.table[(h, g)], f)]:
                    out.append(f"associativity fails at ({nm[h]}, {nm[g]}, {nm[f]})")
    return out


# ---------------------------------------------------------------------------
# products

def product(C: FinCategory, D: FinCategory) -> FinCategory:
    """C×D with object ids ``a*|D|+b`` and morphism ids ``f*|Mor D|+g``."""
    n, m = D.n_obj, D.n_mor
    objects = [f"({a},{b})" for a in C.objects for b in D.objects]
    labels = [(a, b) for a in C.obj_ids() for b in D.obj_ids()]
    morphisms = [
        (f"({C.mor_names[f]},{D.mor_names[g]})", C.src[f] * n + D.src[g], C.dst[f] * n + D.dst[g])
        for f in C.mor_ids() for g in D.mor_ids()
    ]
    mlabels = [(f, g) for f in C.mor_ids() for g in D.mor_ids()]
    identity = [C.identity[a] * m + D.identity[b] for a in C.obj_ids() for b in D.obj_ids()]
    table = {}
    for (g1, f1), h1 in C.table.items():
        for (g2, f2), h2 in D.table.items():
            table[(g1 * m + g2, f1 * m + f2)] = h1 * m + h2
    return FinCategory(objects, morphisms, identity, table, obj_labels=labels, mor_labels=mlabels,
                       name=f"{C.name}x{D.name}", check=False)


# ---------------------------------------------------------------------------
# functors and natural transformations

class Functor:
    __slots__ = ("dom", "cod", "obj_map", "mor_map", "name", "_op")

    def __init__(self, dom: FinCategory, cod: FinCategory, obj_map: Sequence[int],
                 mor_map: Sequence[int], name: str = "", check: bool = True):
        self.dom = dom
        self.cod = cod
        self.obj_map = tuple(obj_map)
        self.mor_map = tuple(mor_map)
        self.name = name
        self._op = None
        if check:
            v = validate_functor(self)
            if v:
                raise LawViolation(v, f"functor {name or '?'}")

    def ob(self, x: int) -> int:
        return self.obj_map[x]

    def fmap(self, f: int) -> int:
        return self.mor_map[f]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Functor):
            return NotImplemented
        return (self.obj_map == other.obj_map and self.mor_map == other.mor_map
                and self.dom == other.dom and self.cod == other.cod)

    def __hash__(self):
        return hash((self.obj_map, self.mor_map))

    def __repr__(self):
        return f"<Functor {self.name or '?'}: {self.obj_map}>"

    def op(self) -> Functor:
        if self._op is None:
            o = Functor(self.dom.op(), self.cod.op(), self.obj_map, self.mor_map,
                        name=f"{self.name}^op", check=False)
            o._op = self
            self._op = o
        return self._op

    @classmethod
    def from_object_map(cls, dom: FinCategory, cod: FinCategory, obj_map: Sequence[int], name: str = "") -> Functor:
        """Functor into a thin category, morphisms forced."""
        mor_map = []
        for f in dom.mor_ids():
            a, b = obj_map[dom.src[f]], obj_map[dom.dst[f]]
            h = cod.hom(a, b)
            if len(h) != 1:
                raise LawViolation(
                    [f"no unique morphism {cod.objects[a]}→{cod.objects[b]} for {dom.mor_names[f]}"],
                    f"functor {name or '?'}",
                )
            mor_map.append(h[0])
        return cls(dom, cod, obj_map, mor_map, name=name)


def validate_functor(F: Functor) -> list[str]:
    C, D = F.dom, F.cod
    out = []
    if len(F.obj_map) != C.n_obj or len(F.mor_map) != C.n_mor:
        return ["functor tables do not cover the domain"]
    for f in C.mor_ids():
        g = F.mor_map[f]
        if not 0 <= g < D.n_mor:
            return [f"image of {C.mor_names[f]} is unknown"]
        if D.src[g] != F.obj_map[C.src[f]] or D.dst[g] != F.obj_map[C.dst[f]]:
            out.append(f"{C.mor_names[f]} mapped to {D.mor_names[g]} with wrong endpoints")
    if out:
        return out
    for a in C.obj_ids():
        if F.mor_map[C.identity[a]] != D.identity[F.obj_map[a]]:
            out.append(f"identity of {C.objects[a]} not preserved")
    for (g, f), h in C.table.items():
        if D.comp(F.mor_map[g], F.mor_map[f]) != F.mor_map[h]:
            out.append(f"composite {C.mor_names[g]}∘{C.mor_names[f]} not preserved")
    return out


def identity_functor(C: FinCategory) -> Functor:
    return Functor(C, C, tuple(C.obj_ids()), tuple(C.mor_ids()), name="1", check=False)


def compose_functors(G: Functor, F: Functor) -> Functor:
    """G∘F."""
    if G.dom != F.cod:
        raise ShapeMismatch("functors are not composable")
    return Functor(F.dom, G.cod, [G.obj_map[x] for x in F.obj_map],
                   [G.mor_map[f] for f in F.mor_map], name=f"{G.name}{F.name}", check=False)


def product_functor(F: Functor, G: Functor, dom: FinCategory | None = None,
                    cod: FinCategory | None = None) -> Functor:
    """F×G between product categories."""
    dom = dom or product(F.dom, G.dom)
    cod = cod or product(F.cod, G.cod)
    n2, m2 = G.cod.n_obj, G.cod.n_mor
    obj_map = [F.ob(a) * n2 + G.ob(b) for a in F.dom.obj_ids() for b in G.dom.obj_ids()]
    mor_map = [F.fmap(f) * m2 + G.fmap(g) for f in F.dom.mor_ids() for g in G.dom.mor_ids()]
    return Functor(dom, cod, obj_map, mor_map, check=False)


class NatTrans:
    __slots__ = ("dom", "cod", "components", "name")

    def __init__(self, dom: Functor, cod: Functor, components: Sequence[int], name: str = "",
                 check: bool = True):
        self.dom = dom
        self.cod = cod
        self.components = tuple(components)
        self.name = name
        if check:
            v = validate_nat_trans(self)
            if v:
                raise LawViolation(v, f"natural transformation {name or '?'}")

    def __getitem__(self, x: int) -> int:
        return self.components[x]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, NatTrans):
            return NotImplemented
        return self.components == other.components and self.dom == other.dom and self.cod == other.cod

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"<NatTrans {self.name or '?'}: {self.components}>"

    @property
    def source_category(self) -> FinCategory:
        return self.dom.dom

    @property
    def target_category(self) -> FinCategory:
        return self.dom.cod

    def op(self) -> NatTrans:
        return NatTrans(self.cod.op(), self.dom.op(), self.components, name=f"{self.name}^op", check=False)

    def vcomp(self, other: NatTrans) -> NatTrans:
        """self∘other (other first)."""
        if other.cod != self.dom:
            raise ShapeMismatch("natural transformations are not composable")
        D = self.target_category
        return NatTrans(other.dom, self.cod,
                        [D.comp(a, b) for a, b in zip(self.components, other.components)],
                        check=False)

    def is_invertible(self) -> bool:
        D = self.target_category
        return all(is_iso(D, c) for c in self.components)

    def inverse(self) -> NatTrans:
        D = self.target_category
        comps = []
        for c in self.components:
            inv = iso_inverse(D, c)
            if inv is None:
                raise LawViolation([f"component {D.mor_names[c]} is not invertible"], "inverse")
            comps.append(inv)
        return NatTrans(self.cod, self.dom, comps, check=False)


def validate_nat_trans(t: NatTrans) -> list[str]:
    F, G = t.dom, t.cod
    if F.dom != G.dom or F.cod != G.cod:
        return ["functors do not share domain and codomain"]
    C, D = F.dom, F.cod
    if len(t.components) != C.n_obj:
        return ["components do not cover the domain"]
    out = []
    for x in C.obj_ids():
        c = t.components[x]
        if not 0 <= c < D.n_mor or D.src[c] != F.ob(x) or D.dst[c] != G.ob(x):
            out.append(f"component at {C.objects[x]} has wrong endpoints")
    if out:
        return out
    for f in C.mor_ids():
        a, b = C.src[f], C.dst[f]
        if D.comp(t.components[b], F.fmap(f)) != D.comp(G.fmap(f), t.components[a]):
            out.append(f"naturality fails at {C.mor_names[f]}")
    return out


def identity_nat(F: Functor) -> NatTrans:
    D = F.cod
    return NatTrans(F, F, [D.id(F.ob(x)) for x in F.dom.obj_ids()], check=False)


def whisker_left(H: Functor, t: NatTrans) -> NatTrans:
    """Hθ : HF ⇒ HG."""
    return NatTrans(compose_functors(H, t.dom), compose_functors(H, t.cod),
                    [H.fmap(c) for c in t.components], check=False)


def whisker_right(t: NatTrans, K: Functor) -> NatTrans:
    """θK : FK ⇒ GK."""
    return NatTrans(compose_functors(t.dom, K), compose_functors(t.cod, K),
                    [t.components[K.ob(x)] for x in K.dom.obj_ids()], check=False)


def vcompose(*ts: NatTrans) -> NatTrans:
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = t.vcomp(out)
    return out


# ---------------------------------------------------------------------------
# adjunctions

@dataclass(frozen=True, eq=False)
class Adjunction:
    left: Functor      # F : C → D
    right: Functor     # G : D → C
    unit: NatTrans     # 1_C ⇒ GF
    counit: NatTrans   # FG ⇒ 1_D

    def validate(self) -> list[str]:
        F, G = self.left, self.right
        C, D = F.dom, F.cod
        out = []
        if G.dom != D or G.cod != C:
            return ["left and right functors do not form an opposite pair"]
        for x in C.obj_ids():
            if D.comp(self.counit[F.ob(x)], F.fmap(self.unit[x])) != D.id(F.ob(x)):
                out.append(f"triangle identity fails at {C.objects[x]}")
        for y in D.obj_ids():
            if C.comp(G.fmap(self.counit[y]), self.unit[G.ob(y)]) != C.id(G.ob(y)):
                out.append(f"triangle identity fails at {D.objects[y]}")
        return out

    def op(self) -> Adjunction:
        """F ⊣ G becomes G^op ⊣ F^op."""
        return Adjunction(self.right.op(), self.left.op(), self.counit.op(), self.unit.op())

    def transpose(self, x: int, g: int) -> int:
        """For g: F x → y, the unique f: x → G y with counit∘Ff = g."""
        F, G = self.left, self.right
        C = F.dom
        return C.comp(G.fmap(g), self.unit[x])


def identity_adjunction(C: FinCategory) -> Adjunction:
    one = identity_functor(C)
    i = identity_nat(one)
    return Adjunction(one, one, i, i)


def _unique_lift(F: Functor, c: int, e: int, cprime: int, f: int) -> list[int]:
    """All g: c' → c with e∘F g = f."""
    D = F.cod
    return [g for g in F.dom.hom(cprime, c) if D.comp(e, F.fmap(g)) == f]


def _is_terminal_arrow(F: Functor, c: int, e: int, d: int) -> bool:
    C, D = F.dom, F.cod
    for cp in C.obj_ids():
        for f in D.hom(F.ob(cp), d):
            if len(_unique_lift(F, c, e, cp, f)) != 1:
                return False
    return True


def find_right_adjoint(F: Functor) -> Adjunction | None:
    """Right adjoint by representability search, or None."""
    C, D = F.dom, F.cod
    G_obj, eps = [], []
    for d in D.obj_ids():
        hit = None
        for c in C.obj_ids():
            for e in D.hom(F.ob(c), d):
                if _is_terminal_arrow(F, c, e, d):
                    hit = (c, e)
                    break
            if hit:
                break
        if hit is None:
            return None
        G_obj.append(hit[0])
        eps.append(hit[1])
    G_mor = []
    for h in D.mor_ids():
        d, dp = D.src[h], D.dst[h]
        target = D.comp(h, eps[d])
        (g,) = _unique_lift(F, G_obj[dp], eps[dp], G_obj[d], target)
        G_mor.append(g)
    G = Functor(D, C, G_obj, G_mor, name="R")
    GF = compose_functors(G, F)
    FG = compose_functors(F, G)
    unit = []
    for c in C.obj_ids():
        (g,) = _unique_lift(F, G_obj[F.ob(c)], eps[F.ob(c)], c, D.id(F.ob(c)))
        unit.append(g)
    adj = Adjunction(F, G, NatTrans(identity_functor(C), GF, unit),
                     NatTrans(FG, identity_functor(D), eps))
    v = adj.validate()
    if v:
        raise LawViolation(v, "adjunction")
    return adj


def find_left_adjoint(G: Functor) -> Adjunction | None:
    adj = find_right_adjoint(G.op())
    return None if adj is None else adj.op()


def mate(adj1: Adjunction, adj2: Adjunction, phi: NatTrans, s: Functor, t: Functor,
         direction: str = "right") -> NatTrans:
    """The mate of a 2-cell in the square with horizontal functors s, t.

    adj1 = (f1 ⊣ u1), u1: A → B; adj2 = (f2 ⊣ u2), u2: A' → B';
    s: A → A', t: B → B'.  ``direction="right"`` sends phi: t u1 ⇒ u2 s to
    f2 t ⇒ s f1; ``direction="left"`` is the inverse correspondence.
    """
    f1, u1, f2, u2 = adj1.left, adj1.right, adj2.left, adj2.right
    if direction == "right":
        if phi.dom != compose_functors(t, u1) or phi.cod != compose_functors(u2, s):
            raise ShapeMismatch("phi must be t∘u1 ⇒ u2∘s")
        A2 = f2.cod
        comps = []
        for b in f1.dom.obj_ids():
            fb = f1.ob(b)
            comps.append(A2.compose(adj2.counit[s.ob(fb)], f2.fmap(phi[fb]),
                                    f2.fmap(t.fmap(adj1.unit[b]))))
        return NatTrans(compose_functors(f2, t), compose_functors(s, f1), comps)
    if direction == "left":
        if phi.dom != compose_functors(f2, t) or phi.cod != compose_functors(s, f1):
            raise ShapeMismatch("phi must be f2∘t ⇒ s∘f1")
        B2 = u2.cod
        comps = []
        for a in u1.dom.obj_ids():
            ua = u1.ob(a)
            comps.append(B2.compose(u2.fmap(s.fmap(adj1.counit[a])), u2.fmap(phi[ua]),
                                    adj2.unit[t.ob(ua)]))
        return NatTrans(compose_functors(t, u1), compose_functors(u2, s), comps)
    raise ValueError(f"unknown mate direction {direction!r}")


# ---------------------------------------------------------------------------
# morphism properties, equalizers

def iso_inverse(C: FinCategory, f: int) -> int | None:
    a, b = C.src[f], C.dst[f]
    for g in C.hom(b, a):
        if C.comp(g, f) == C.id(a) and C.comp(f, g) == C.id(b):
            return g
    return None


def is_iso(C: FinCategory, f: int) -> bool:
    return iso_inverse(C, f) is not None


def is_mono(C: FinCategory, f: int) -> bool:
    a = C.src[f]
    for x in C.obj_ids():
        seen = set()
        for g in C.hom(x, a):
            h = C.comp(f, g)
            if h in seen:
                return False
            seen.add(h)
    return True


def is_epi(C: FinCategory, f: int) -> bool:
    b = C.dst[f]
    for y in C.obj_ids():
        seen = set()
        for g in C.hom(b, y):
            h = C.comp(g, f)
            if h in seen:
                return False
            seen.add(h)
    return True


def is_equalizer(C: FinCategory, f: int, g: int, k: int) -> bool:
    """Does k equalize f, g universally?"""
    a = C.src[f]
    e = C.src[k]
    if C.dst[k] != a or C.comp(f, k) != C.comp(g, k):
        return False
    for x in C.obj_ids():
        for h in C.hom(x, a):
            if C.comp(f, h) != C.comp(g, h):
                continue
            if sum(1 for u in C.hom(x, e) if C.comp(k, u) == h) != 1:
                return False
    return True


def find_equalizer(C: FinCategory, f: int, g: int) -> tuple[int, int] | None:
    if C.src[f] != C.src[g] or C.dst[f] != C.dst[g]:
        raise NotParallel(f"{C.mor_names[f]} and {C.mor_names[g]} are not parallel")
    a = C.src[f]
    for e in C.obj_ids():
        for k in C.hom(e, a):
            if is_equalizer(C, f, g, k):
                return e, k
    return None


def find_coequalizer(C: FinCategory, f: int, g: int) -> tuple[int, int] | None:
    hit = find_equalizer(C.op(), f, g)
    return hit


def regular_mono_witness(C: FinCategory, f: int) -> tuple[int, int] | None:
    """A parallel pair that f equalizes, or None."""
    b = C.dst[f]
    for w in C.obj_ids():
        homs = C.hom(b, w)
        for p in homs:
            for q in homs:
                if is_equalizer(C, p, q, f):
                    return p, q
    return None


@dataclass(frozen=True)
class MorphismClass:
    mono: bool
    epi: bool
    regular_mono: bool
    iso: bool


def morphism_class(C: FinCategory, f: int) -> MorphismClass:
    return MorphismClass(
        mono=is_mono(C, f),
        epi=is_epi(C, f),
        regular_mono=regular_mono_witness(C, f) is not None,
        iso=is_iso(C, f),
    )


def are_isomorphic_objects(C: FinCategory, a: int, b: int) -> int | None:
    """An isomorphism a→b, or None."""
    for f in C.hom(a, b):
        if is_iso(C, f):
            return f
    return None


# ---------------------------------------------------------------------------
# enumeration of functors and natural transformations

def _composition_constraints(A: FinCategory) -> dict[int, list[tuple[int, int, int]]]:
    """For each morphism, composites (g, f, h) whose largest id it is."""
    cons: dict[int, list[tuple[int, int, int]]] = {}
    for (g, f), h in A.table.items():
        cons.setdefault(max(g, f, h), []).append((g, f, h))
    return cons


def iter_functors(A: FinCategory, C: FinCategory) -> Iterator[Functor]:
    """All functors A → C in deterministic order."""
    n = A.n_obj
    needs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for f in A.mor_ids():
        a, b = A.src[f], A.dst[f]
        needs[max(a, b)].append((a, b))
    cons = _composition_constraints(A)
    ids = set(A.identity)
    obj_map = [0] * n

    def assign_obj(i):
        if i == n:
            yield from assign_mor(0, [None] * A.n_mor)
            return
        for c in C.obj_ids():
            obj_map[i] = c
            if all(C.hom(obj_map[a], obj_map[b]) for a, b in needs[i]):
                yield from assign_obj(i + 1)

    def assign_mor(k, mor_map):
        if k == A.n_mor:
            yield Functor(A, C, tuple(obj_map), tuple(mor_map), check=False)
            return
        if k in ids:
            cands = (C.id(obj_map[A.src[k]]),)
        else:
            cands = C.hom(obj_map[A.src[k]], obj_map[A.dst[k]])
        for c in cands:
            mor_map[k] = c
            if all(C.comp(mor_map[g], mor_map[f]) == mor_map[h] for g, f, h in cons.get(k, ())):
                yield from assign_mor(k + 1, mor_map)
        mor_map[k] = None

    yield from assign_obj(0)


def iter_nat_trans(F: Functor, G: Functor) -> Iterator[NatTrans]:
    C, D = F.dom, F.cod
    n = C.n_obj
    checks: list[list[int]] = [[] for _ in range(n)]
    for f in C.mor_ids():
        checks[max(C.src[f], C.dst[f])].append(f)
    comps = [0] * n

    def go(i):
        if i == n:
            yield NatTrans(F, G, tuple(comps), check=False)
            return
        for c in D.hom(F.ob(i), G.ob(i)):
            comps[i] = c
            ok = True
            for f in checks[i]:
                a, b = C.src[f], C.dst[f]
                if D.comp(comps[b], F.fmap(f)) != D.comp(G.fmap(f), comps[a]):
                    ok = False
                    break
            if ok:
                yield from go(i + 1)

    yield from go(0)


def all_functors(A: FinCategory, C: FinCategory, limit: int | None = None) -> list[Functor]:
    limit = size_limit() if limit is None else limit
    out = []
    for F in iter_functors(A, C):
        out.append(F)
        if len(out) > limit:
            raise SizeLimitExceeded(f"more than {limit} functors {A.name or 'A'} → {C.name or 'C'}")
    return out


def functor_category(A: FinCategory, C: FinCategory, limit: int | None = None) -> FinCategory:
    """[A, C]: objects are functors (labels), morphisms natural transformations."""
    functors = all_functors(A, C, limit)
    morphisms, labels, identity = [], [], []
    homs: dict[tuple[int, int], list[int]] = {}
    for i, F in enumerate(functors):
        for j, G in enumerate(functors):
            for t in iter_nat_trans(F, G):
                homs.setdefault((i, j), []).append(len(morphisms))
                morphisms.append((f"θ{len(morphisms)}", i, j))
                labels.append(t)
    index = {(morphisms[k][1], morphisms[k][2], labels[k].components): k for k in range(len(labels))}
    for i, F in enumerate(functors):
        identity.append(index[(i, i, identity_nat(F).components)])
    table = {}
    for (j, k), gs in homs.items():
        for (i, j2), fs in homs.items():
            if j2 != j:
                continue
            for g in gs:
                for f in fs:
                    comps = labels[g].vcomp(labels[f]).components
                    table[(g, f)] = index[(i, k, comps)]
    names = [f"F{i}" for i in range(len(functors))]
    return FinCategory(names, morphisms, identity, table, obj_labels=functors, mor_labels=labels,
                       name=f"[{A.name},{C.name}]", check=len(morphisms) <= 400)


# ---------------------------------------------------------------------------
# isomorphism of categories

def find_isomorphism(C: FinCategory, D: FinCategory) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """An isomorphism of categories C ≅ D as (object map, morphism map), or None."""
    if C.n_obj != D.n_obj or C.n_mor != D.n_mor:
        return None
    n = C.n_obj

    def sig(K, a):
        outs = sorted(len(K.hom(a, b)) for b in K.obj_ids())
        ins = sorted(len(K.hom(b, a)) for b in K.obj_ids())
        return (len(K.hom(a, a)), tuple(outs), tuple(ins))

    sigC = [sig(C, a) for a in C.obj_ids()]
    sigD = [sig(D, a) for a in D.obj_ids()]
    obj_map = [None] * n
    used = [False] * n

    def assign(i):
        if i == n:
            mm = _match_morphisms(C, D, obj_map)
            if mm is not None:
                return tuple(obj_map), mm
            return None
        for b in D.obj_ids():
            if used[b] or sigD[b] != sigC[i]:
                continue
            if any(len(C.hom(i, j)) != len(D.hom(b, obj_map[j])) or
                   len(C.hom(j, i)) != len(D.hom(obj_map[j], b)) for j in range(i)):
                continue
            obj_map[i] = b
            used[b] = True
            r = assign(i + 1)
            if r is not None:
                return r
            used[b] = False
            obj_map[i] = None
        return None

    return assign(0)


def _match_morphisms(C: FinCategory, D: FinCategory, obj_map) -> tuple[int, ...] | None:
    order = list(C.mor_ids())
    cons = _composition_constraints(C)
    mor_map: list[int | None] = [None] * C.n_mor
    used: set[int] = set()
    ids = set(C.identity)

    def go(k):
        if k == len(order):
            return tuple(mor_map)
        f = order[k]
        if f in ids:
            cands = (D.id(obj_map[C.src[f]]),)
        else:
            cands = D.hom(obj_map[C.src[f]], obj_map[C.dst[f]])
        for c in cands:
            if c in used:
                continue
            mor_map[f] = c
            if all(D.comp(mor_map[g], mor_map[h1]) == mor_map[h]
                   for g, h1, h in cons.get(f, ())):
                used.add(c)
                r = go(k + 1)
                if r is not None:
                    return r
                used.discard(c)
            mor_map[f] = None
        return None

    return go(0)


def iso_over(C: FinCategory, U: Functor, D: FinCategory, V: Functor) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """An isomorphism Φ: C ≅ D with V∘Φ = U strictly, or None.

    U and V must be faithful for the morphism part to be determined; the
    search checks that.
    """
    if C.n_obj != D.n_obj or C.n_mor != D.n_mor or U.cod != V.cod:
        return None
    n = C.n_obj
    obj_map = [None] * n
    used = [False] * n

    def match_mor():
        mm = []
        for f in C.mor_ids():
            a, b = obj_map[C.src[f]], obj_map[C.dst[f]]
            cands = [g for g in D.hom(a, b) if V.fmap(g) == U.fmap(f)]
            if len(cands) != 1:
                return None
            mm.append(cands[0])
        if len(set(mm)) != len(mm):
            return None
        F = Functor(C, D, obj_map, mm, check=False)
        if validate_functor(F):
            return None
        return tuple(mm)

    def assign(i):
        if i == n:
            mm = match_mor()
            return None if mm is None else (tuple(obj_map), mm)
        for b in D.obj_ids():
            if used[b] or V.ob(b) != U.ob(i):
                continue
            obj_map[i] = b
            used[b] = True
            r = assign(i + 1)
            if r is not None:
                return r
            used[b] = False
        obj_map[i] = None
        return None

    return assign(0)


def terminal_functor(C: FinCategory, T: FinCategory | None = None) -> Functor:
    T = T or FinCategory.terminal()
    return Functor(C, T, [0] * C.n_obj, [0] * C.n_mor, check=False)


def constant_functor(A: FinCategory, C: FinCategory, c: int) -> Functor:
    return Functor(A, C, [c] * A.n_obj, [C.id(c)] * A.n_mor, name=f"const_{C.objects[c]}")


def subcategory_inclusion(C: FinCategory, objs: Sequence[int], name: str = "") -> Functor:
    """Full subcategory on ``objs`` (in the given order) with its inclusion."""
    objs = list(objs)
    pos = {o: i for i, o in enumerate(objs)}
    morphisms, mor_map, mid = [], [], {}
    for a in objs:
        for b in objs:
            for f in C.hom(a, b):
                mid[f] = len(morphisms)
                morphisms.append((C.mor_names[f], pos[a], pos[b]))
                mor_map.append(f)
    identity = [mid[C.id(o)] for o in objs]
    table = {}
    for f in mor_map:
        for g in mor_map:
            if C.dst[f] == C.src[g]:
                table[(mid[g], mid[f])] = mid[C.comp(g, f)]
    S = FinCategory([C.objects[o] for o in objs], morphisms, identity, table,
                    obj_labels=[C.obj_labels[o] for o in objs], name=name, check=False)
    return Functor(S, C, objs, mor_map, name=f"incl_{name}")


def is_fully_faithful(F: Functor) -> bool:
    C, D = F.dom, F.cod
    for a in C.obj_ids():
        for b in C.obj_ids():
            imgs = [F.fmap(f) for f in C.hom(a, b)]
            if len(set(imgs)) != len(imgs) or len(imgs) != len(D.hom(F.ob(a), F.ob(b))):
                return False
    return True


def nat_iso_between(F: Functor, G: Functor) -> NatTrans | None:
    for t in iter_nat_trans(F, G):
        if t.is_invertible():
            return t
    return None


def pairs(it: Iterable) -> Iterator[tuple]:
    return itertools.product(it, repeat=2)
