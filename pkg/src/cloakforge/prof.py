"""Finite set-valued profunctors, coend composition, presheaves and right liftings.

A profunctor ``M: A ↛ B`` has a finite set ``M(b, a)`` for every ``b`` in ``B``
and ``a`` in ``A``; ``B`` acts contravariantly on the left, ``A`` covariantly
on the right.  Composition ``N∘M`` (first ``M``, then ``N``) is the coend
``∫^b M(b,a) × N(c,b)``, computed as a union-find quotient of triples
``(b, m, n)``.  Every class is named by its least triple in enumeration order.

Presheaves on ``C`` are profunctors ``1 ↛ C`` from the terminal category.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import BoundaryMismatch, Inconsistency, LawViolation, ShapeMismatch, SizeLimitExceeded
from .fincat import FinCategory, Functor, constant_functor, size_limit
from .magmal import MagmalCategory


class UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}
        self.order = {x: i for i, x in enumerate(self.parent)}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        # keep the earliest element as root so it names the class
        if self.order[rx] < self.order[ry]:
            self.parent[ry] = rx
        else:
            self.parent[rx] = ry


class Profunctor:
    """``M: dom ↛ cod`` with values ``M(b, a)``, ``b`` in cod, ``a`` in dom."""

    def __init__(self, dom: FinCategory, cod: FinCategory, sets: Mapping[tuple[int, int], Sequence],
                 left: Mapping[tuple[int, int], Mapping], right: Mapping[tuple[int, int], Mapping],
                 name: str = "", check: bool = True):
        self.dom = dom
        self.cod = cod
        self.sets = {k: tuple(v) for k, v in sets.items()}
        self.left = {k: dict(v) for k, v in left.items()}
        self.right = {k: dict(v) for k, v in right.items()}
        self.name = name
        self.meta: dict = {}
        self._index: dict = {}
        for b in cod.obj_ids():
            for a in dom.obj_ids():
                self.sets.setdefault((b, a), ())
        if check:
            v = validate_profunctor(self)
            if v:
                raise LawViolation(v, f"profunctor {name or '?'}")

    def __repr__(self):
        return f"Profunctor({self.name or '?'}: {self.dom.name} -/-> {self.cod.name}, size {self.size()})"

    def val(self, b: int, a: int) -> tuple:
        return self.sets[(b, a)]

    def lact(self, g: int, a: int, x):
        """Left action of ``g: b' → b`` in cod, ``M(b, a) → M(b', a)``."""
        return self.left[(g, a)][x]

    def ract(self, f: int, b: int, x):
        """Right action of ``f: a → a'`` in dom, ``M(b, a) → M(b, a')``."""
        return self.right[(f, b)][x]

    def size(self) -> int:
        return sum(len(v) for v in self.sets.values())

    def index(self, b: int, a: int, x) -> int:
        key = (b, a)
        if key not in self._index:
            self._index[key] = {y: i for i, y in enumerate(self.sets[key])}
        return self._index[key][x]

    def cells(self) -> Iterator[tuple[int, int]]:
        for b in self.cod.obj_ids():
            for a in self.dom.obj_ids():
                yield b, a

    def elements(self) -> Iterator[tuple[int, int, object]]:
        for b, a in self.cells():
            for x in self.sets[(b, a)]:
                yield b, a, x

    def is_relation(self) -> bool:
        return all(len(v) <= 1 for v in self.sets.values())

    @classmethod
    def build(cls, dom: FinCategory, cod: FinCategory, setfn: Callable[[int, int], Iterable],
              lfn: Callable[[int, int, object], object], rfn: Callable[[int, int, object], object],
              name: str = "", check: bool = True) -> Profunctor:
        sets = {(b, a): tuple(setfn(b, a)) for b in cod.obj_ids() for a in dom.obj_ids()}
        left = {}
        for g in cod.mor_ids():
            for a in dom.obj_ids():
                left[(g, a)] = {x: lfn(g, a, x) for x in sets[(cod.dst[g], a)]}
        right = {}
        for f in dom.mor_ids():
            for b in cod.obj_ids():
                right[(f, b)] = {x: rfn(f, b, x) for x in sets[(b, dom.src[f])]}
        return cls(dom, cod, sets, left, right, name=name, check=check)


def validate_profunctor(M: Profunctor) -> list[str]:
    A, B = M.dom, M.cod
    out = []
    for g in B.mor_ids():
        for a in A.obj_ids():
            tgt = set(M.val(B.src[g], a))
            mp = M.left.get((g, a))
            if mp is None or set(mp) != set(M.val(B.dst[g], a)) or not set(mp.values()) <= tgt:
                out.append(f"left action of {B.mor_names[g]} at {A.objects[a]} is not a map of the right sets")
    for f in A.mor_ids():
        for b in B.obj_ids():
            tgt = set(M.val(b, A.dst[f]))
            mp = M.right.get((f, b))
            if mp is None or set(mp) != set(M.val(b, A.src[f])) or not set(mp.values()) <= tgt:
                out.append(f"right action of {A.mor_names[f]} at {B.objects[b]} is not a map of the right sets")
    if out:
        return out
    for b in B.obj_ids():
        for a in A.obj_ids():
            for x in M.val(b, a):
                if M.lact(B.id(b), a, x) != x or M.ract(A.id(a), b, x) != x:
                    out.append(f"identity does not act trivially on {x!r} at ({B.objects[b]},{A.objects[a]})")
    for (g, gp), ggp in B.table.items():
        # ggp = g∘gp, with gp: b'' → b' and g: b' → b
        for a in A.obj_ids():
            for x in M.val(B.dst[g], a):
                if M.lact(ggp, a, x) != M.lact(gp, a, M.lact(g, a, x)):
                    out.append(f"left action not functorial at {B.mor_names[g]}∘{B.mor_names[gp]}")
                    break
    for (f, fp), ffp in A.table.items():
        for b in B.obj_ids():
            for x in M.val(b, A.src[fp]):
                if M.ract(ffp, b, x) != M.ract(f, b, M.ract(fp, b, x)):
                    out.append(f"right action not functorial at {A.mor_names[f]}∘{A.mor_names[fp]}")
                    break
    for g in B.mor_ids():
        for f in A.mor_ids():
            for x in M.val(B.dst[g], A.src[f]):
                if M.lact(g, A.dst[f], M.ract(f, B.dst[g], x)) != M.ract(f, B.src[g], M.lact(g, A.src[f], x)):
                    out.append(f"actions of {B.mor_names[g]} and {A.mor_names[f]} do not commute")
                    break
    return out


# ---------------------------------------------------------------------------
# basic profunctors

def hom_prof(C: FinCategory) -> Profunctor:
    return Profunctor.build(
        C, C, lambda b, a: C.hom(b, a),
        lambda g, a, h: C.comp(h, g),
        lambda f, b, h: C.comp(f, h),
        name=f"hom_{C.name}", check=False)


def lower_star(F: Functor) -> Profunctor:
    """``F_*: A ↛ B`` with ``F_*(b, a) = B(b, F a)``."""
    B = F.cod
    return Profunctor.build(
        F.dom, B, lambda b, a: B.hom(b, F.ob(a)),
        lambda g, a, h: B.comp(h, g),
        lambda f, b, h: B.comp(F.fmap(f), h),
        name=f"{F.name or 'F'}_*", check=False)


def upper_star(F: Functor) -> Profunctor:
    """``F^*: B ↛ A`` with ``F^*(a, b) = B(F a, b)``."""
    B = F.cod
    return Profunctor.build(
        B, F.dom, lambda a, b: B.hom(F.ob(a), b),
        lambda g, b, h: B.comp(h, F.fmap(g)),
        lambda f, a, h: B.comp(f, h),
        name=f"{F.name or 'F'}^*", check=False)


def relation_prof(A: FinCategory, B: FinCategory, rel: Callable[[int, int], bool], name: str = "") -> Profunctor:
    """0/1-valued profunctor between thin categories from a predicate ``rel(b, a)``."""
    return Profunctor.build(
        A, B, lambda b, a: ((),) if rel(b, a) else (),
        lambda g, a, x: x, lambda f, b, x: x, name=name)


def constant_prof(A: FinCategory, B: FinCategory, labels: Sequence = ((),), name: str = "") -> Profunctor:
    return Profunctor.build(A, B, lambda b, a: tuple(labels), lambda g, a, x: x, lambda f, b, x: x,
                            name=name, check=False)


# ---------------------------------------------------------------------------
# morphisms of profunctors

class ModMorphism:
    __slots__ = ("src", "tgt", "comps", "name")

    def __init__(self, src: Profunctor, tgt: Profunctor, comps: Mapping[tuple[int, int], Mapping],
                 name: str = "", check: bool = True):
        if src.dom != tgt.dom or src.cod != tgt.cod:
            raise BoundaryMismatch("module morphism between profunctors with different boundaries")
        self.src = src
        self.tgt = tgt
        self.comps = {k: dict(v) for k, v in comps.items()}
        self.name = name
        if check:
            v = validate_mod_morphism(self)
            if v:
                raise LawViolation(v, f"module morphism {name or '?'}")

    def __call__(self, b: int, a: int, x):
        return self.comps[(b, a)][x]

    def __eq__(self, other):
        return isinstance(other, ModMorphism) and self.comps == other.comps

    def __hash__(self):
        return hash(tuple(sorted((k, tuple(v.items())) for k, v in self.comps.items())))

    def key(self) -> tuple:
        return tuple(tuple(self.comps[c][x] for x in self.src.val(*c)) for c in self.src.cells())

    @classmethod
    def from_fn(cls, src: Profunctor, tgt: Profunctor, fn: Callable[[int, int, object], object],
                name: str = "", check: bool = True) -> ModMorphism:
        comps = {(b, a): {x: fn(b, a, x) for x in src.val(b, a)} for b, a in src.cells()}
        return cls(src, tgt, comps, name=name, check=check)

    def vcomp(self, other: ModMorphism) -> ModMorphism:
        """``self ∘ other``."""
        return ModMorphism(other.src, self.tgt,
                           {c: {x: self.comps[c][y] for x, y in other.comps[c].items()} for c in other.comps},
                           check=False)

    def is_injective(self) -> bool:
        return all(len(set(m.values())) == len(m) for m in self.comps.values())

    def is_iso(self) -> bool:
        return all(len(set(m.values())) == len(m) == len(self.tgt.val(*c)) for c, m in self.comps.items())

    def inverse(self) -> ModMorphism:
        if not self.is_iso():
            raise ValueError("module morphism is not invertible")
        return ModMorphism(self.tgt, self.src, {c: {y: x for x, y in m.items()} for c, m in self.comps.items()},
                           check=False)

    def image(self, b: int, a: int) -> set:
        return set(self.comps[(b, a)].values())


def validate_mod_morphism(t: ModMorphism) -> list[str]:
    M, N = t.src, t.tgt
    A, B = M.dom, M.cod
    out = []
    for b, a in M.cells():
        m = t.comps.get((b, a))
        if m is None or set(m) != set(M.val(b, a)) or not set(m.values()) <= set(N.val(b, a)):
            out.append(f"component at ({B.objects[b]},{A.objects[a]}) is not a map of the right sets")
    if out:
        return out
    for g in B.mor_ids():
        for a in A.obj_ids():
            for x in M.val(B.dst[g], a):
                if t(B.src[g], a, M.lact(g, a, x)) != N.lact(g, a, t(B.dst[g], a, x)):
                    out.append(f"not natural for {B.mor_names[g]} at {x!r}")
                    break
    for f in A.mor_ids():
        for b in B.obj_ids():
            for x in M.val(b, A.src[f]):
                if t(b, A.dst[f], M.ract(f, b, x)) != N.ract(f, b, t(b, A.src[f], x)):
                    out.append(f"not natural for {A.mor_names[f]} at {x!r}")
                    break
    return out


def identity_mod(M: Profunctor) -> ModMorphism:
    return ModMorphism(M, M, {c: {x: x for x in M.val(*c)} for c in M.cells()}, check=False)


def iter_mod_morphisms(M: Profunctor, N: Profunctor, limit: int | None = None) -> Iterator[ModMorphism]:
    """All module morphisms ``M ⇒ N``, by assignment with propagation along the actions."""
    if M.dom != N.dom or M.cod != N.cod:
        raise BoundaryMismatch("module morphisms need parallel profunctors")
    A, B = M.dom, M.cod
    elems = list(M.elements())
    limit = size_limit() if limit is None else limit
    assign: dict = {}
    count = [0]

    def propagate(start):
        stack = [start]
        trail = []
        while stack:
            b, a, x = stack.pop()
            y = assign[(b, a, x)]
            nxt = []
            for g in B.mor_ids():
                if B.dst[g] == b:
                    nxt.append(((B.src[g], a, M.lact(g, a, x)), N.lact(g, a, y)))
            for f in A.mor_ids():
                if A.src[f] == a:
                    nxt.append(((b, A.dst[f], M.ract(f, b, x)), N.ract(f, b, y)))
            for key, val in nxt:
                old = assign.get(key)
                if old is None:
                    assign[key] = val
                    trail.append(key)
                    stack.append(key)
                elif old != val:
                    return False, trail
        return True, trail

    def go(i):
        while i < len(elems) and elems[i] in assign:
            i += 1
        if i == len(elems):
            count[0] += 1
            if count[0] > limit:
                raise SizeLimitExceeded(f"more than {limit} module morphisms")
            comps = {c: {} for c in M.cells()}
            for (b, a, x), y in assign.items():
                comps[(b, a)][x] = y
            yield ModMorphism(M, N, comps, check=False)
            return
        b, a, x = elems[i]
        for y in N.val(b, a):
            assign[(b, a, x)] = y
            ok, trail = propagate((b, a, x))
            if ok:
                yield from go(i + 1)
            for k in trail:
                del assign[k]
            del assign[(b, a, x)]

    yield from go(0)


def mod_isomorphism(M: Profunctor, N: Profunctor) -> ModMorphism | None:
    if sorted(len(M.val(*c)) for c in M.cells()) != sorted(len(N.val(*c)) for c in N.cells()):
        return None
    if any(len(M.val(*c)) != len(N.val(*c)) for c in M.cells()):
        return None
    for t in iter_mod_morphisms(M, N):
        if t.is_iso():
            return t
    return None


# ---------------------------------------------------------------------------
# composition

def compose(M: Profunctor, N: Profunctor, name: str = "") -> Profunctor:
    """``N∘M`` for ``M: A ↛ B`` and ``N: B ↛ C``: the coend ``∫^b M(b,a) × N(c,b)``."""
    if M.cod != N.dom:
        raise BoundaryMismatch(f"cannot compose {M.name} with {N.name}: middle categories differ")
    A, B, C = M.dom, M.cod, N.cod
    cls: dict[tuple[int, int], dict] = {}
    sets = {}
    for c in C.obj_ids():
        for a in A.obj_ids():
            triples = [(b, m, n) for b in B.obj_ids() for m in M.val(b, a) for n in N.val(c, b)]
            uf = UnionFind(triples)
            for g in B.mor_ids():
                bp, b = B.src[g], B.dst[g]
                for m in M.val(b, a):
                    mg = M.lact(g, a, m)
                    for np_ in N.val(c, bp):
                        uf.union((bp, mg, np_), (b, m, N.ract(g, c, np_)))
            rep = {t: uf.find(t) for t in triples}
            cls[(c, a)] = rep
            seen = []
            for t in triples:
                if rep[t] == t:
                    seen.append(t)
            sets[(c, a)] = tuple(seen)
    left = {}
    for h in C.mor_ids():
        cp, c = C.src[h], C.dst[h]
        for a in A.obj_ids():
            left[(h, a)] = {t: cls[(cp, a)][(t[0], t[1], N.lact(h, t[0], t[2]))] for t in sets[(c, a)]}
    right = {}
    for f in A.mor_ids():
        a, ap = A.src[f], A.dst[f]
        for c in C.obj_ids():
            right[(f, c)] = {t: cls[(c, ap)][(t[0], M.ract(f, t[0], t[1]), t[2])] for t in sets[(c, a)]}
    P = Profunctor(A, C, sets, left, right, name=name or f"({N.name}∘{M.name})", check=False)
    P.meta["composite"] = (M, N)
    P.meta["classes"] = cls
    return P


def klass(P: Profunctor, c: int, a: int, triple) -> tuple:
    """The element of a composite named by an arbitrary representative triple."""
    return P.meta["classes"][(c, a)][tuple(triple)]


def factors(P: Profunctor) -> tuple[Profunctor, Profunctor]:
    if "composite" not in P.meta:
        raise ShapeMismatch(f"{P.name} is not a computed composite")
    return P.meta["composite"]


def map_from_composite(P: Profunctor, tgt: Profunctor, fn: Callable[[int, int, tuple], object],
                       name: str = "", check: bool = True) -> ModMorphism:
    """Tabulate a map out of a coend, checking it is constant on every class."""
    comps = {}
    for (c, a), rep in P.meta["classes"].items():
        comp = {}
        for t, r in rep.items():
            y = fn(c, a, t)
            if r in comp and comp[r] != y:
                raise Inconsistency(f"{name or 'map'} is not constant on the class of {r!r}")
            comp[r] = y
        comps[(c, a)] = comp
    return ModMorphism(P, tgt, comps, name=name, check=check)


def whisker_mod_left(alpha: ModMorphism, N: Profunctor, src: Profunctor | None = None,
                     tgt: Profunctor | None = None) -> ModMorphism:
    """``N∘alpha: N∘M ⇒ N∘M'`` for ``alpha: M ⇒ M'``."""
    src = src or compose(alpha.src, N)
    tgt = tgt or compose(alpha.tgt, N)
    return map_from_composite(src, tgt, lambda c, a, t: klass(tgt, c, a, (t[0], alpha(t[0], a, t[1]), t[2])),
                              check=False)


def whisker_mod_right(M: Profunctor, beta: ModMorphism, src: Profunctor | None = None,
                      tgt: Profunctor | None = None) -> ModMorphism:
    """``beta∘M: N∘M ⇒ N'∘M`` for ``beta: N ⇒ N'``."""
    src = src or compose(M, beta.src)
    tgt = tgt or compose(M, beta.tgt)
    return map_from_composite(src, tgt, lambda c, a, t: klass(tgt, c, a, (t[0], t[1], beta(c, t[0], t[2]))),
                              check=False)


def left_unitor(M: Profunctor, P: Profunctor | None = None) -> ModMorphism:
    """``hom∘M ≅ M``, ``[b, m, g] ↦ M(g,1) m``."""
    P = P or compose(M, hom_prof(M.cod))
    return map_from_composite(P, M, lambda c, a, t: M.lact(t[2], a, t[1]), name="left unitor")


def right_unitor(M: Profunctor, P: Profunctor | None = None) -> ModMorphism:
    """``M∘hom ≅ M``, ``[a', f, m] ↦ M(1,f) m``."""
    P = P or compose(hom_prof(M.dom), M)
    return map_from_composite(P, M, lambda c, a, t: M.ract(t[1], c, t[2]), name="right unitor")


def associator(M: Profunctor, N: Profunctor, P: Profunctor,
               lhs: Profunctor | None = None, rhs: Profunctor | None = None) -> ModMorphism:
    """``P∘(N∘M) ≅ (P∘N)∘M`` sending ``[c, [b,m,n], p]`` to ``[b, m, [c,n,p]]``."""
    NM = compose(M, N) if lhs is None else factors(lhs)[0]
    lhs = lhs or compose(NM, P)
    PN = compose(N, P) if rhs is None else factors(rhs)[1]
    rhs = rhs or compose(M, PN)

    def fn(d, a, t):
        c, x, p = t
        b, m, n = x
        return klass(rhs, d, a, (b, m, klass(PN, d, b, (c, n, p))))

    return map_from_composite(lhs, rhs, fn, name="associator")


def relational_composite(M: Profunctor, N: Profunctor) -> set[tuple[int, int]]:
    """Support of ``N∘M`` computed as a relational product (an oracle for relations)."""
    A, B, C = M.dom, M.cod, N.cod
    return {(c, a) for c in C.obj_ids() for a in A.obj_ids()
            if any(M.val(b, a) and N.val(c, b) for b in B.obj_ids())}


def is_representable(M: Profunctor) -> Functor | None:
    """A functor ``F`` with ``M ≅ F_*``, found by Yoneda at every ``a``."""
    A, B = M.dom, M.cod
    reps = []
    for a in A.obj_ids():
        hit = None
        for r in B.obj_ids():
            for x in M.val(r, a):
                if all(sorted(map(repr, (M.lact(g, a, x) for g in B.hom(b, r)))) == sorted(map(repr, M.val(b, a)))
                       and len(B.hom(b, r)) == len(M.val(b, a)) for b in B.obj_ids()):
                    hit = (r, x)
                    break
            if hit:
                break
        if hit is None:
            return None
        reps.append(hit)
    mor_map = []
    for f in A.mor_ids():
        a, ap = A.src[f], A.dst[f]
        r, x = reps[a]
        rp, xp = reps[ap]
        target = M.ract(f, r, x)
        (g,) = [g for g in B.hom(r, rp) if M.lact(g, ap, xp) == target]
        mor_map.append(g)
    F = Functor(A, B, [r for r, _ in reps], mor_map, check=False)
    from .fincat import validate_functor
    if validate_functor(F):
        return None
    return F


# ---------------------------------------------------------------------------
# presheaves

_TERMINAL = FinCategory.terminal()


def presheaf(C: FinCategory, sets: Mapping[int, Sequence], act: Mapping[int, Mapping], name: str = "",
             check: bool = True) -> Profunctor:
    """Presheaf on ``C``: ``act[f]`` maps ``F(dst f) → F(src f)``."""
    T = _TERMINAL
    F = Profunctor(T, C, {(x, 0): sets.get(x, ()) for x in C.obj_ids()},
                   {(f, 0): act[f] for f in C.mor_ids()},
                   {(0, x): {s: s for s in sets.get(x, ())} for x in C.obj_ids()}, name=name, check=check)
    F.meta["presheaf"] = True
    return F


def pval(F: Profunctor, x: int) -> tuple:
    return F.val(x, 0)


def pact(F: Profunctor, f: int, s):
    return F.lact(f, 0, s)


def presheaf_from_fn(C: FinCategory, setfn, actfn, name: str = "", check: bool = True) -> Profunctor:
    sets = {x: tuple(setfn(x)) for x in C.obj_ids()}
    act = {f: {s: actfn(f, s) for s in sets[C.dst[f]]} for f in C.mor_ids()}
    return presheaf(C, sets, act, name=name, check=check)


def yo(C: FinCategory, y: int) -> Profunctor:
    P = lower_star(constant_functor(_TERMINAL, C, y))
    P.name = f"yo({C.objects[y]})"
    P.meta["presheaf"] = True
    return P


def empty_presheaf(C: FinCategory) -> Profunctor:
    return presheaf(C, {}, {f: {} for f in C.mor_ids()}, name="0")


def terminal_presheaf(C: FinCategory) -> Profunctor:
    return presheaf(C, {x: ((),) for x in C.obj_ids()}, {f: {(): ()} for f in C.mor_ids()}, name="1")


def bar(N: Profunctor, F: Profunctor) -> Profunctor:
    """``N̄(F)(c) = ∫^b F(b) × N(c, b)``."""
    return compose(F, N, name=f"bar({N.name},{F.name})")


def boxtimes(F: Profunctor, G: Profunctor, CC: FinCategory) -> Profunctor:
    """External product on ``C×D`` (ids ``x*|D|+y``)."""
    D = G.cod
    nD, mD = D.n_obj, D.n_mor
    return presheaf_from_fn(
        CC, lambda p: [(s, t) for s in pval(F, p // nD) for t in pval(G, p % nD)],
        lambda h, st: (pact(F, h // mD, st[0]), pact(G, h % mD, st[1])), check=False)


def day_convolution(CM: MagmalCategory, F: Profunctor, G: Profunctor) -> Profunctor:
    """``(F∗G)z = ∫^{x,y} C(z, x⊗y) × F x × G y``; elements ``(x*n+y, (s,t), k)``."""
    CC = CM.tensor.dom
    P = compose(boxtimes(F, G, CC), lower_star(CM.tensor), name=f"({F.name}*{G.name})")
    P.meta["day"] = (CM, F, G)
    return P


def day_element(P: Profunctor, z: int, x: int, y: int, k: int, s, t) -> tuple:
    CM = P.meta["day"][0]
    return klass(P, z, 0, (x * CM.base.n_obj + y, (s, t), k))


def day_yoneda_check(CM: MagmalCategory, y: int, z: int) -> ModMorphism:
    """The comparison ``yo(y)∗yo(z) → yo(y⊗z)``; raises unless it is an isomorphism."""
    C = CM.base
    P = day_convolution(CM, yo(C, y), yo(C, z))
    Y = yo(C, CM.t(y, z))

    def fn(w, _, t):
        p, (g, h), k = t
        return C.comp(CM.tm(g, h), k)

    cmp = map_from_composite(P, Y, fn, name="day comparison")
    if not cmp.is_iso():
        raise Inconsistency(f"yo({C.objects[y]})*yo({C.objects[z]}) is not yo of their tensor")
    return cmp


# ---------------------------------------------------------------------------
# presheaf cloaks

def _natural_families(V_objs: Sequence[int], dom_sets: Mapping[int, Sequence], cod_sets: Mapping[int, Sequence],
                      constraints: Sequence[tuple], limit: int) -> list[tuple]:
    """Families ``φ_v: dom(v) → cod(v)`` satisfying ``constraints``.

    Each constraint ``(v, s, v', fn_dom, fn_cod)`` asks
    ``fn_cod(φ_v(s)) == φ_{v'}(fn_dom(s))``.  Families are tuples (over
    ``V_objs``) of tuples (over ``dom_sets[v]``).
    """
    slots = [(v, s) for v in V_objs for s in dom_sets[v]]
    pos = {sl: i for i, sl in enumerate(slots)}
    by_slot: dict[int, list] = {}
    for v, s, vp, fd, fc in constraints:
        i, j = pos[(v, s)], pos[(vp, fd)]
        by_slot.setdefault(max(i, j), []).append((i, j, fc))
    out = []
    val: list = [None] * len(slots)

    def go(k):
        if k == len(slots):
            if len(out) >= limit:
                raise SizeLimitExceeded(f"more than {limit} natural families")
            fam = []
            it = iter(val)
            for v in V_objs:
                fam.append(tuple(next(it) for _ in dom_sets[v]))
            out.append(tuple(fam))
            return
        v, s = slots[k]
        for y in cod_sets[v]:
            val[k] = y
            if all(fc(val[i]) == val[j] for i, j, fc in by_slot.get(k, ())):
                go(k + 1)
        val[k] = None

    go(0)
    return out


@dataclass
class PresheafCloak:
    H: Profunctor
    K: Profunctor
    hom: Profunctor            # [H, K]
    CM: MagmalCategory

    def component(self, phi: tuple, v: int, s):
        return phi[v][self.H.index(v, 0, s)]

    def ev(self, day: Profunctor | None = None) -> ModMorphism:
        """``ev: [H,K]∗H → K``."""
        CM, K = self.CM, self.K
        n = CM.base.n_obj
        day = day or day_convolution(CM, self.hom, self.H)

        def fn(z, _, t):
            p, (phi, s), k = t
            return pact(K, k, self.component(phi, p % n, s))

        return map_from_composite(day, K, fn, name="ev")

    def curry(self, alpha: ModMorphism, X: Profunctor) -> ModMorphism:
        """For ``alpha: X∗H → K`` the transpose ``X → [H,K]``."""
        C = self.CM.base
        day = alpha.src

        def fn(u, _, p):
            return tuple(tuple(alpha(self.CM.t(u, v), 0, day_element(day, self.CM.t(u, v), u, v,
                                                                      C.id(self.CM.t(u, v)), p, s))
                               for s in pval(self.H, v)) for v in C.obj_ids())

        return ModMorphism.from_fn(X, self.hom, fn, name="curry")


def presheaf_cloak(CM: MagmalCategory, H: Profunctor, K: Profunctor, limit: int | None = None) -> PresheafCloak:
    """``[H,K]U = ∫_V [H V, K(U⊗V)]`` as natural families."""
    C = CM.base
    limit = size_limit() if limit is None else limit
    V = list(C.obj_ids())
    hsets = {v: pval(H, v) for v in V}
    sets, fams = {}, {}
    for u in C.obj_ids():
        ksets = {v: pval(K, CM.t(u, v)) for v in V}
        cons = []
        for k in C.mor_ids():
            vp, v = C.src[k], C.dst[k]
            uk = CM.tm(C.id(u), k)
            for s in hsets[v]:
                cons.append((v, s, vp, pact(H, k, s), (lambda y, uk=uk: pact(K, uk, y))))
        fams[u] = _natural_families(V, hsets, ksets, cons, limit)
        sets[u] = tuple(fams[u])

    def act(f, phi):
        return tuple(tuple(pact(K, CM.tm(f, C.id(v)), y) for y in phi[v]) for v in V)

    P = presheaf_from_fn(C, lambda u: sets[u], act, name=f"[{H.name},{K.name}]", check=False)
    return PresheafCloak(H, K, P, CM)


def representable_cloak_iso(CM: MagmalCategory, y: int, z: int) -> bool:
    """``[yo y, yo z]x ≅ C(x⊗y, z)`` by ``φ ↦ φ_y(1_y)``, checked bijective and natural."""
    C = CM.base
    pc = presheaf_cloak(CM, yo(C, y), yo(C, z))
    for x in C.obj_ids():
        img = [pc.component(phi, y, C.id(y)) for phi in pval(pc.hom, x)]
        if sorted(img) != sorted(C.hom(CM.t(x, y), z)) or len(set(img)) != len(img):
            return False
    for f in C.mor_ids():
        for phi in pval(pc.hom, C.dst[f]):
            lhs = pc.component(pact(pc.hom, f, phi), y, C.id(y))
            rhs = C.comp(pc.component(phi, y, C.id(y)), CM.tm(f, C.id(y)))
            if lhs != rhs:
                return False
    return True


def cloak_universal_check(pc: PresheafCloak, tests: Iterable[Profunctor]) -> list[str]:
    """``Nat(X, [H,K]) ≅ Nat(X∗H, K)`` via ``α ↦ ev∘(α∗1)`` on every test presheaf."""
    out = []
    CM = pc.CM
    for X in tests:
        dayX = day_convolution(CM, X, pc.H)
        dayP = day_convolution(CM, pc.hom, pc.H)
        ev = pc.ev(dayP)
        lhs = list(iter_mod_morphisms(X, pc.hom))
        rhs = {t.key() for t in iter_mod_morphisms(dayX, pc.K)}
        images = set()
        for a in lhs:
            a1 = map_from_composite(dayX, dayP, lambda z, _, t: klass(dayP, z, 0, (t[0], (a(t[0] // CM.base.n_obj, 0, t[1][0]), t[1][1]), t[2])), check=False)
            images.add(ev.vcomp(a1).key())
        if images != rhs or len(images) != len(lhs):
            out.append(f"cloak bijection fails for test presheaf {X.name}")
    return out


def presheaf_test_set(C: FinCategory, max_total: int = 12, max_count: int = 40) -> list[Profunctor]:
    """A bounded, deterministic family of presheaves on ``C``.

    Representables, the empty and terminal presheaves, subterminals given by
    down-sets (posets), and pairwise coproducts of representables, each kept
    only when its total size is at most ``max_total``.
    """
    out = [empty_presheaf(C), terminal_presheaf(C)]
    reps = [yo(C, y) for y in C.obj_ids()]
    out += reps
    if C.is_thin():
        for bits in itertools.product((0, 1), repeat=C.n_obj):
            down = {x for x in C.obj_ids() if bits[x]}
            if all(C.src[f] in down for f in C.mor_ids() if C.dst[f] in down):
                out.append(presheaf_from_fn(C, lambda x, d=down: ((),) if x in d else (),
                                            lambda f, s: s, name="down" + "".join(map(str, bits)), check=False))
    for i, j in itertools.combinations_with_replacement(range(len(reps)), 2):
        out.append(coproduct(reps[i], reps[j]))
    seen, res = set(), []
    for F in out:
        if F.size() > max_total:
            continue
        sig = (F.name, tuple(len(pval(F, x)) for x in C.obj_ids()))
        if sig in seen:
            continue
        seen.add(sig)
        res.append(F)
    return res[:max_count]


def coproduct(F: Profunctor, G: Profunctor) -> Profunctor:
    C = F.cod
    return presheaf_from_fn(C, lambda x: [(0, s) for s in pval(F, x)] + [(1, s) for s in pval(G, x)],
                            lambda f, e: (e[0], pact(F if e[0] == 0 else G, f, e[1])),
                            name=f"({F.name}+{G.name})", check=False)


def prof_coproduct(M: Profunctor, N: Profunctor, name: str = "") -> Profunctor:
    """Pointwise disjoint union ``M ⊔ N`` of parallel profunctors."""
    if M.dom != N.dom or M.cod != N.cod:
        raise ShapeMismatch("coproduct of non-parallel profunctors")
    parts = (M, N)
    return Profunctor.build(
        M.dom, M.cod, lambda b, a: [(0, x) for x in M.val(b, a)] + [(1, x) for x in N.val(b, a)],
        lambda g, a, e: (e[0], parts[e[0]].lact(g, a, e[1])),
        lambda f, b, e: (e[0], parts[e[0]].ract(f, b, e[1])),
        name=name or f"({M.name}⊔{N.name})", check=False)


# ---------------------------------------------------------------------------
# right liftings

@dataclass
class RightLifting:
    S: Profunctor
    B: Profunctor
    lift: Profunctor
    _counit: ModMorphism | None = None

    def family(self, phi: tuple, b: int, a: int, s):
        return phi[b][self.S.index(b, a, s)]

    @property
    def counit(self) -> ModMorphism:
        """``S∘rif(S,B) ⇒ B``, ``[a, φ, s] ↦ φ_b(s)``."""
        if self._counit is None:
            P = compose(self.lift, self.S)
            self._counit = map_from_composite(P, self.B, lambda b, k, t: self.family(t[1], b, t[0], t[2]),
                                              name="counit")
        return self._counit

    def transpose(self, theta: ModMorphism, H: Profunctor) -> ModMorphism:
        """For ``theta: S∘H ⇒ B`` the unique ``H ⇒ rif(S,B)`` pasting to it."""
        SH = theta.src
        Bc = self.S.cod

        def fn(a, k, h):
            return tuple(tuple(theta(b, k, klass(SH, b, k, (a, h, s))) for s in self.S.val(b, a))
                         for b in Bc.obj_ids())

        return ModMorphism.from_fn(H, self.lift, fn, name="transpose")

    def paste(self, sigma: ModMorphism, SH: Profunctor | None = None) -> ModMorphism:
        """For ``sigma: H ⇒ rif(S,B)`` the composite ``ε∘(S∘sigma)``."""
        SH = SH or compose(sigma.src, self.S)
        return map_from_composite(SH, self.B, lambda b, k, t: self.family(sigma(t[0], k, t[1]), b, t[0], t[2]),
                                  check=False)


def right_lifting(S: Profunctor, B: Profunctor, limit: int | None = None) -> RightLifting:
    """``rif(S,B)(a,k)``: families natural in ``b`` from ``S(b,a)`` to ``B(b,k)``."""
    if S.cod != B.cod:
        raise BoundaryMismatch("right lifting needs S and B with the same codomain")
    A, Bc, K = S.dom, S.cod, B.dom
    limit = size_limit() if limit is None else limit
    V = list(Bc.obj_ids())
    sets = {}
    for a in A.obj_ids():
        dom_sets = {b: S.val(b, a) for b in V}
        for k in K.obj_ids():
            cod_sets = {b: B.val(b, k) for b in V}
            cons = [(Bc.dst[g], s, Bc.src[g], S.lact(g, a, s), (lambda y, g=g, k=k: B.lact(g, k, y)))
                    for g in Bc.mor_ids() for s in dom_sets[Bc.dst[g]]]
            sets[(a, k)] = tuple(_natural_families(V, dom_sets, cod_sets, cons, limit))

    def lfn(f, k, phi):
        a, ap = A.src[f], A.dst[f]
        return tuple(tuple(phi[b][S.index(b, ap, S.ract(f, b, s))] for s in S.val(b, a)) for b in V)

    def rfn(h, a, phi):
        return tuple(tuple(B.ract(h, b, y) for y in phi[b]) for b in V)

    L = Profunctor.build(K, A, lambda a, k: sets[(a, k)], lfn, rfn,
                         name=f"rif({S.name},{B.name})", check=False)
    return RightLifting(S, B, L)


def rif_mor(R1: RightLifting, R2: RightLifting, alpha: ModMorphism) -> ModMorphism:
    """``rif(S, α): rif(S,B) ⇒ rif(S,C)`` by postcomposition with ``α``."""
    if R1.S is not R2.S and R1.S.sets != R2.S.sets:
        raise ShapeMismatch("liftings through different profunctors")
    V = list(R1.S.cod.obj_ids())
    return ModMorphism.from_fn(R1.lift, R2.lift,
                               lambda a, k, phi: tuple(tuple(alpha(b, k, y) for y in phi[b]) for b in V),
                               check=False)


def pasting_bijection_check(R: RightLifting, tests: Iterable[Profunctor]) -> list[str]:
    """``Nat(H, rif(S,B)) ≅ Nat(S∘H, B)`` for each test ``H``, both ways."""
    out = []
    for H in tests:
        SH = compose(H, R.S)
        lhs = list(iter_mod_morphisms(H, R.lift))
        rhs = list(iter_mod_morphisms(SH, R.B))
        pasted = {R.paste(sig, SH).key() for sig in lhs}
        if len(pasted) != len(lhs) or pasted != {t.key() for t in rhs}:
            out.append(f"pasting is not a bijection for {H.name}")
            continue
        for t in rhs:
            if R.paste(R.transpose(t, H), SH).key() != t.key():
                out.append(f"transpose does not invert pasting for {H.name}")
                break
    return out


def respect_comparison(R: RightLifting, K: Profunctor, RB: RightLifting | None = None) -> ModMorphism:
    """``rif(S,B)∘K ⇒ rif(S, B∘K)`` transposing ``ε·K``."""
    BK = compose(K, R.B)
    RB = RB or right_lifting(R.S, BK)
    LK = compose(K, R.lift)
    V = list(R.S.cod.obj_ids())

    def fn(a, d, t):
        k, x, phi = t
        return tuple(tuple(klass(BK, b, d, (k, x, y)) for y in phi[b]) for b in V)

    return map_from_composite(LK, RB.lift, fn, name="respect comparison", check=False)


def respects(R: RightLifting, K: Profunctor) -> bool:
    return respect_comparison(R, K).is_iso()


def test_profunctors(K: FinCategory, A: FinCategory, extra: Sequence[Profunctor] = ()) -> list[Profunctor]:
    """Deterministic test 1-morphisms ``K ↛ A``: empty, terminal, hom and the extras."""
    out = [constant_prof(K, A, (), name="0"), constant_prof(K, A, ((),), name="1")]
    if K == A:
        out.append(hom_prof(K))
    out.extend(extra)
    return out
