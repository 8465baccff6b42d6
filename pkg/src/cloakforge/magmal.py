"""Magmal categories, magmal functors and comonads, and cloaks (left internal homs)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import LawViolation, MissingCloaks, ShapeMismatch
from .fincat import (
    Adjunction,
    FinCategory,
    Functor,
    NatTrans,
    compose_functors,
    identity_functor,
    is_iso,
    mate,
    product,
    validate_functor,
)


class MagmalCategory:
    """A finite category with a tensor functor base×base → base."""

    def __init__(self, base: FinCategory, tensor: Functor, name: str = "", check: bool = True):
        self.base = base
        self.tensor = tensor
        self.name = name or base.name
        self._op = None
        self._cloaks: dict[tuple[int, int], Cloak | None] = {}
        if check:
            if tensor.cod != base or tensor.dom.n_obj != base.n_obj ** 2:
                raise ShapeMismatch("tensor must be a functor base×base → base")
            v = validate_functor(tensor)
            if v:
                raise LawViolation(v, "tensor")

    def t(self, x: int, y: int) -> int:
        return self.tensor.obj_map[x * self.base.n_obj + y]

    def tm(self, f: int, g: int) -> int:
        return self.tensor.mor_map[f * self.base.n_mor + g]

    def __repr__(self):
        return f"<MagmalCategory {self.name}: {self.base.n_obj} objects>"

    @classmethod
    def from_table(cls, base: FinCategory, tensor_obj: Mapping[tuple[int, int], int], name: str = "") -> MagmalCategory:
        """Tensor on a thin category from its object table."""
        P = product(base, base)
        n = base.n_obj
        obj_map = [tensor_obj[(a, b)] for a in range(n) for b in range(n)]
        return cls(base, Functor.from_object_map(P, base, obj_map, name="⊗"), name=name)

    @classmethod
    def from_maps(cls, base: FinCategory, obj_map: Sequence[int], mor_map: Sequence[int], name: str = "") -> MagmalCategory:
        P = product(base, base)
        return cls(base, Functor(P, base, obj_map, mor_map, name="⊗"), name=name)

    def op(self) -> MagmalCategory:
        """Same tensor on the opposite category."""
        if self._op is None:
            B = self.base.op()
            P = product(B, B)
            tens = Functor(P, B, self.tensor.obj_map, self.tensor.mor_map, name="⊗", check=False)
            o = MagmalCategory(B, tens, name=f"{self.name}^op", check=False)
            o._op = self
            self._op = o
        return self._op

    # -- cloaks ---------------------------------------------------------------
    def cloak(self, y: int, z: int) -> Cloak | None:
        key = (y, z)
        if key not in self._cloaks:
            self._cloaks[key] = find_cloak(self, y, z)
        return self._cloaks[key]

    def need_cloak(self, y: int, z: int) -> Cloak:
        c = self.cloak(y, z)
        if c is None:
            B = self.base
            raise MissingCloaks(f"no cloak of {B.objects[z]} by {B.objects[y]} in {self.name}")
        return c

    def has_cloaks_by(self, y: int) -> bool:
        return all(self.cloak(y, z) is not None for z in self.base.obj_ids())

    def curry(self, x: int, y: int, z: int, f: int) -> int:
        """The unique g: X → [Y,Z] with ev∘(g⊗1) = f, for f: X⊗Y → Z."""
        return self.need_cloak(y, z).curry(self, x, f)

    def hom_mor(self, h: int, k: int) -> int:
        """[h,k]: [Y,Z] → [Y',Z'] for h: Y'→Y, k: Z→Z'."""
        B = self.base
        y, yp, z, zp = B.dst[h], B.src[h], B.src[k], B.dst[k]
        c = self.need_cloak(y, z)
        f = B.compose(k, c.ev, self.tm(B.id(c.hom_obj), h))
        return self.curry(c.hom_obj, yp, zp, f)

    def ve(self, y: int, x: int) -> int:
        """Unit X → [Y, X⊗Y]."""
        xy = self.t(x, y)
        return self.curry(x, y, xy, self.base.id(xy))


@dataclass
class Cloak:
    y: int
    z: int
    hom_obj: int
    ev: int
    passing: int = 1

    def curry(self, C: MagmalCategory, x: int, f: int) -> int:
        B = C.base
        if B.src[f] != C.t(x, self.y) or B.dst[f] != self.z:
            raise ShapeMismatch(f"{B.mor_names[f]} is not a morphism {B.objects[x]}⊗{B.objects[self.y]} → {B.objects[self.z]}")
        idy = B.id(self.y)
        for g in B.hom(x, self.hom_obj):
            if B.comp(self.ev, C.tm(g, idy)) == f:
                return g
        raise ShapeMismatch(f"{B.mor_names[f]} does not factor through the evaluation")


def is_cloak(C: MagmalCategory, y: int, z: int, h: int, e: int) -> bool:
    """Is f ↦ e∘(f⊗1_Y) a bijection C(X,H) → C(X⊗Y,Z) for every X?"""
    B = C.base
    idy = B.id(y)
    for x in B.obj_ids():
        targets = B.hom(C.t(x, y), z)
        homs = B.hom(x, h)
        if len(homs) != len(targets):
            return False
        images = {B.comp(e, C.tm(f, idy)) for f in homs}
        if len(images) != len(targets):
            return False
    return True


def find_cloak(C: MagmalCategory, y: int, z: int) -> Cloak | None:
    """Exhaustive search; the least passing (H, e) is returned with the passing count."""
    B = C.base
    first, count = None, 0
    for h in B.obj_ids():
        for e in B.hom(C.t(h, y), z):
            if is_cloak(C, y, z, h, e):
                count += 1
                if first is None:
                    first = (h, e)
    if first is None:
        return None
    return Cloak(y, z, first[0], first[1], count)


def is_left_cloakal(C: MagmalCategory) -> list[tuple[int, int]]:
    """Pairs (Y, Z) lacking a cloak; empty means left cloakal."""
    return [(y, z) for y in C.base.obj_ids() for z in C.base.obj_ids() if C.cloak(y, z) is None]


def tensor_with(C: MagmalCategory, y: int) -> Functor:
    """-⊗Y as an endofunctor."""
    B = C.base
    return Functor(B, B, [C.t(x, y) for x in B.obj_ids()],
                   [C.tm(f, B.id(y)) for f in B.mor_ids()], name=f"-⊗{B.objects[y]}", check=False)


def hom_from(C: MagmalCategory, y: int) -> Functor:
    """[Y,-] as an endofunctor; needs all cloaks by Y."""
    B = C.base
    return Functor(B, B, [C.need_cloak(y, z).hom_obj for z in B.obj_ids()],
                   [C.hom_mor(B.id(y), k) for k in B.mor_ids()], name=f"[{B.objects[y]},-]", check=False)


def tensor_adjunction(C: MagmalCategory, y: int) -> Adjunction:
    """-⊗Y ⊣ [Y,-] with unit ve and counit ev."""
    B = C.base
    L, R = tensor_with(C, y), hom_from(C, y)
    unit = NatTrans(identity_functor(B), compose_functors(R, L), [C.ve(y, x) for x in B.obj_ids()])
    counit = NatTrans(compose_functors(L, R), identity_functor(B), [C.need_cloak(y, z).ev for z in B.obj_ids()])
    return Adjunction(L, R, unit, counit)


# ---------------------------------------------------------------------------
# magmal functors

class MagmalFunctor:
    """A functor S with S₂[X,Y]: SX⊗SY → S(X⊗Y)."""

    def __init__(self, functor: Functor, dom: MagmalCategory, cod: MagmalCategory,
                 s2: Mapping[tuple[int, int], int], name: str = "", check: bool = True):
        self.functor = functor
        self.dom = dom
        self.cod = cod
        self.s2 = dict(s2)
        self.name = name or functor.name
        if check:
            v = check_magmal_functor(self)
            if v:
                raise LawViolation(v, f"magmal functor {self.name}")

    def ob(self, x: int) -> int:
        return self.functor.ob(x)

    def fmap(self, f: int) -> int:
        return self.functor.fmap(f)

    def is_strong(self) -> bool:
        return all(is_iso(self.cod.base, m) for m in self.s2.values())

    @classmethod
    def identity(cls, C: MagmalCategory) -> MagmalFunctor:
        B = C.base
        s2 = {(x, y): B.id(C.t(x, y)) for x in B.obj_ids() for y in B.obj_ids()}
        return cls(identity_functor(B), C, C, s2, name="1", check=False)

    @classmethod
    def strict(cls, functor: Functor, dom: MagmalCategory, cod: MagmalCategory, name: str = "") -> MagmalFunctor:
        """Identity structure cells; fails unless S(X⊗Y) = SX⊗SY on the nose."""
        B = cod.base
        s2 = {}
        for x in dom.base.obj_ids():
            for y in dom.base.obj_ids():
                a, b = cod.t(functor.ob(x), functor.ob(y)), functor.ob(dom.t(x, y))
                if a != b:
                    raise LawViolation([f"tensor not preserved strictly at ({x},{y})"], "strict functor")
                s2[(x, y)] = B.id(a)
        return cls(functor, dom, cod, s2, name=name)

    @classmethod
    def thin(cls, functor: Functor, dom: MagmalCategory, cod: MagmalCategory, name: str = "") -> MagmalFunctor:
        """Structure cells forced in a thin codomain."""
        B = cod.base
        s2 = {}
        for x in dom.base.obj_ids():
            for y in dom.base.obj_ids():
                a, b = cod.t(functor.ob(x), functor.ob(y)), functor.ob(dom.t(x, y))
                h = B.hom(a, b)
                if len(h) != 1:
                    raise LawViolation(
                        [f"no structure morphism {B.objects[a]}→{B.objects[b]} at "
                         f"({dom.base.objects[x]},{dom.base.objects[y]})"], f"magmal functor {name}")
                s2[(x, y)] = h[0]
        return cls(functor, dom, cod, s2, name=name)


def check_magmal_functor(S: MagmalFunctor) -> list[str]:
    C, D = S.dom.base, S.cod.base
    out = []
    for x in C.obj_ids():
        for y in C.obj_ids():
            m = S.s2.get((x, y))
            if m is None:
                out.append(f"S₂ missing at ({C.objects[x]},{C.objects[y]})")
                continue
            if D.src[m] != S.cod.t(S.ob(x), S.ob(y)) or D.dst[m] != S.ob(S.dom.t(x, y)):
                out.append(f"S₂ at ({C.objects[x]},{C.objects[y]}) has wrong endpoints")
    if out:
        return out
    for f in C.mor_ids():
        for g in C.mor_ids():
            a, b, a2, b2 = C.src[f], C.src[g], C.dst[f], C.dst[g]
            lhs = D.comp(S.fmap(S.dom.tm(f, g)), S.s2[(a, b)])
            rhs = D.comp(S.s2[(a2, b2)], S.cod.tm(S.fmap(f), S.fmap(g)))
            if lhs != rhs:
                out.append(f"S₂ not natural at ({C.mor_names[f]},{C.mor_names[g]})")
    return out


def compose_magmal(T: MagmalFunctor, S: MagmalFunctor) -> MagmalFunctor:
    """T∘S with (TS)₂ = T(S₂)∘T₂."""
    E = T.cod.base
    s2 = {k: E.comp(T.fmap(m), T.s2[(S.ob(k[0]), S.ob(k[1]))]) for k, m in S.s2.items()}
    return MagmalFunctor(compose_functors(T.functor, S.functor), S.dom, T.cod, s2, check=False)


def check_magmal_nat(theta: NatTrans, S: MagmalFunctor, T: MagmalFunctor) -> list[str]:
    """θ_{X⊗Y}∘S₂ = T₂∘(θ_X⊗θ_Y)."""
    C, D = S.dom, S.cod
    out = []
    for x in C.base.obj_ids():
        for y in C.base.obj_ids():
            lhs = D.base.comp(theta[C.t(x, y)], S.s2[(x, y)])
            rhs = D.base.comp(T.s2[(x, y)], D.tm(theta[x], theta[y]))
            if lhs != rhs:
                out.append(f"not magmal at ({C.base.objects[x]},{C.base.objects[y]})")
    return out


# ---------------------------------------------------------------------------
# comonads

class MagmalComonad:
    """Magmal endofunctor G with counit ε: G⇒1 and comultiplication δ: G⇒GG."""

    def __init__(self, g: MagmalFunctor, eps: Sequence[int], delta: Sequence[int], name: str = "",
                 check: bool = True):
        self.g = g
        self.C = g.dom
        self.eps = tuple(eps)
        self.delta = tuple(delta)
        self.name = name or g.name
        if check:
            v = check_comonad(self)
            if v:
                raise LawViolation(v, f"magmal comonad {self.name}")

    @property
    def base(self) -> FinCategory:
        return self.C.base

    def ob(self, x):
        return self.g.ob(x)

    def fmap(self, f):
        return self.g.fmap(f)

    def g2(self, x, y):
        return self.g.s2[(x, y)]

    def __repr__(self):
        return f"<MagmalComonad {self.name} on {self.C.name}>"

    @classmethod
    def identity(cls, C: MagmalCategory) -> MagmalComonad:
        B = C.base
        ids = [B.id(x) for x in B.obj_ids()]
        return cls(MagmalFunctor.identity(C), ids, ids, name="1")

    @classmethod
    def thin(cls, C: MagmalCategory, obj_map: Sequence[int], name: str = "") -> MagmalComonad:
        """Comonad on a thin magmal category from its object map; structure forced."""
        B = C.base
        F = Functor.from_object_map(B, B, obj_map, name=name)
        g = MagmalFunctor.thin(F, C, C, name=name)
        eps, delta = [], []
        for x in B.obj_ids():
            for what, a, b, acc in (("counit", obj_map[x], x, eps), ("comultiplication", obj_map[x], obj_map[obj_map[x]], delta)):
                h = B.hom(a, b)
                if len(h) != 1:
                    raise LawViolation([f"{what} missing at {B.objects[x]}"], f"comonad {name}")
                acc.append(h[0])
        return cls(g, eps, delta, name=name)


def check_comonad(G: MagmalComonad) -> list[str]:
    B = G.base
    out = check_magmal_functor(G.g)
    if out:
        return out
    F = G.g.functor
    for name, comps, cod in (("ε", G.eps, identity_functor(B)), ("δ", G.delta, compose_functors(F, F))):
        try:
            NatTrans(F, cod, comps)
        except LawViolation as exc:
            out.extend(f"{name}: {v}" for v in exc.violations)
    if out:
        return out
    for x in B.obj_ids():
        gx = G.ob(x)
        d = G.delta[x]
        if B.comp(G.eps[gx], d) != B.id(gx):
            out.append(f"counit law εG∘δ=1 fails at {B.objects[x]}")
        if B.comp(G.fmap(G.eps[x]), d) != B.id(gx):
            out.append(f"counit law Gε∘δ=1 fails at {B.objects[x]}")
        if B.comp(G.delta[gx], d) != B.comp(G.fmap(d), d):
            out.append(f"coassociativity fails at {B.objects[x]}")
    C = G.C
    for x in B.obj_ids():
        for y in B.obj_ids():
            xy = C.t(x, y)
            if B.comp(G.eps[xy], G.g2(x, y)) != C.tm(G.eps[x], G.eps[y]):
                out.append(f"ε not magmal at ({B.objects[x]},{B.objects[y]})")
            lhs = B.comp(G.delta[xy], G.g2(x, y))
            rhs = B.compose(G.fmap(G.g2(x, y)), G.g2(G.ob(x), G.ob(y)), C.tm(G.delta[x], G.delta[y]))
            if lhs != rhs:
                out.append(f"δ not magmal at ({B.objects[x]},{B.objects[y]})")
    return out


class OpmagmalMonad:
    """Monad T with η, μ and T₂[X,Y]: T(X⊗Y) → TX⊗TY."""

    def __init__(self, C: MagmalCategory, functor: Functor, eta: Sequence[int], mu: Sequence[int],
                 t2: Mapping[tuple[int, int], int], name: str = "", check: bool = True):
        self.C = C
        self.functor = functor
        self.eta = tuple(eta)
        self.mu = tuple(mu)
        self.t2 = dict(t2)
        self.name = name or functor.name
        self._dual = None
        if check:
            self.dual()

    @property
    def base(self) -> FinCategory:
        return self.C.base

    def ob(self, x):
        return self.functor.ob(x)

    def fmap(self, f):
        return self.functor.fmap(f)

    def __repr__(self):
        return f"<OpmagmalMonad {self.name} on {self.C.name}>"

    def dual_unchecked(self) -> MagmalComonad:
        Cop = self.C.op()
        g = MagmalFunctor(self.functor.op(), Cop, Cop, self.t2, name=self.name, check=False)
        return MagmalComonad(g, self.eta, self.mu, name=f"{self.name}^op", check=False)

    def dual(self) -> MagmalComonad:
        """The same data read as a magmal comonad on the opposite category."""
        if self._dual is None:
            d = self.dual_unchecked()
            v = check_comonad(d)
            if v:
                raise LawViolation(v, f"opmagmal monad {self.name}")
            self._dual = d
        return self._dual

    @classmethod
    def identity(cls, C: MagmalCategory) -> OpmagmalMonad:
        B = C.base
        ids = [B.id(x) for x in B.obj_ids()]
        t2 = {(x, y): B.id(C.t(x, y)) for x in B.obj_ids() for y in B.obj_ids()}
        return cls(C, identity_functor(B), ids, ids, t2, name="1")

    @classmethod
    def thin(cls, C: MagmalCategory, obj_map: Sequence[int], name: str = "") -> OpmagmalMonad:
        G = MagmalComonad.thin(C.op(), obj_map, name=name)
        F = Functor(C.base, C.base, G.g.functor.obj_map, G.g.functor.mor_map, name=name, check=False)
        return cls(C, F, G.eps, G.delta, G.g.s2, name=name)


def comonad_as_monad(G: MagmalComonad) -> OpmagmalMonad:
    """A magmal comonad on C is an opmagmal monad on C^op."""
    Cop = G.C.op()
    return OpmagmalMonad(Cop, G.g.functor.op(), G.eps, G.delta, G.g.s2, name=G.name, check=False)


# ---------------------------------------------------------------------------
# the structure-cell bijection

def _s2_left_pointwise(S: MagmalFunctor, y: int, z: int) -> int:
    """S₂ℓ at Z: S[Y,Z] → [SY,SZ], the transpose of S(ev)∘S₂[[Y,Z],Y]."""
    C, D = S.dom, S.cod
    c = C.need_cloak(y, z)
    f = D.base.comp(S.fmap(c.ev), S.s2[(c.hom_obj, y)])
    return D.curry(S.ob(c.hom_obj), S.ob(y), S.ob(z), f)


def _s2_right_pointwise(S: MagmalFunctor, y: int, x: int, s2l: Mapping[int, int]) -> int:
    """S₂ at (X,Y) from the family S₂ℓ: ev∘((S₂ℓ∘S(ve_X))⊗1)."""
    C, D = S.dom, S.cod
    xy = C.t(x, y)
    sy = S.ob(y)
    left = D.base.comp(s2l[xy], S.fmap(C.ve(y, x)))
    ev = D.need_cloak(sy, S.ob(xy)).ev
    return D.base.comp(ev, D.tm(left, D.base.id(sy)))


def mate_bijection_s2(S: MagmalFunctor, y: int, direction: str = "to_left",
                      family: Mapping[int, int] | None = None) -> dict[int, int]:
    """Convert between S₂[-,Y] (indexed by X) and S₂ℓ[Y,-] (indexed by Z).

    ``to_left`` reads S₂ from S and returns {Z: S₂ℓ_Z}; ``to_right`` takes
    ``family`` = {Z: S₂ℓ_Z} (defaulting to the one derived from S) and returns
    {X: S₂[X,Y]}.  When both categories have all the relevant cloaks the
    result is cross-checked against the general mate correspondence.
    """
    C, D = S.dom, S.cod
    B = C.base
    if not C.has_cloaks_by(y):
        raise MissingCloaks(f"{C.name} lacks cloaks by {B.objects[y]}")
    sy = S.ob(y)
    for z in B.obj_ids():
        if D.cloak(sy, S.ob(z)) is None:
            raise MissingCloaks(f"{D.name} lacks the cloak of {D.base.objects[S.ob(z)]} by {D.base.objects[sy]}")
    full = D.has_cloaks_by(sy)
    if direction == "to_left":
        out = {z: _s2_left_pointwise(S, y, z) for z in B.obj_ids()}
        if full:
            m = _general_mate(S, y, "left", [S.s2[(x, y)] for x in B.obj_ids()])
            if tuple(out[z] for z in B.obj_ids()) != m.components:
                raise LawViolation(["pointwise and general mate disagree"], "structure-cell bijection")
        return out
    if direction == "to_right":
        fam = family if family is not None else {z: _s2_left_pointwise(S, y, z) for z in B.obj_ids()}
        out = {x: _s2_right_pointwise(S, y, x, fam) for x in B.obj_ids()}
        if full:
            m = _general_mate(S, y, "right", [fam[z] for z in B.obj_ids()])
            if tuple(out[x] for x in B.obj_ids()) != m.components:
                raise LawViolation(["pointwise and general mate disagree"], "structure-cell bijection")
        return out
    raise ValueError(f"unknown direction {direction!r}")


def _general_mate(S: MagmalFunctor, y: int, direction: str, comps) -> NatTrans:
    C, D = S.dom, S.cod
    adj1 = tensor_adjunction(C, y)
    adj2 = tensor_adjunction(D, S.ob(y))
    F = S.functor
    if direction == "left":
        phi = NatTrans(compose_functors(adj2.left, F), compose_functors(F, adj1.left), comps)
    else:
        phi = NatTrans(compose_functors(F, adj1.right), compose_functors(adj2.right, F), comps)
    return mate(adj1, adj2, phi, F, F, direction=direction)


def preserves_cloak(S: MagmalFunctor, y: int, z: int) -> bool:
    """Is S[Y,Z] with evaluation S(ev)∘S₂ a cloak of SZ by SY?"""
    C, D = S.dom, S.cod
    c = C.need_cloak(y, z)
    e = D.base.comp(S.fmap(c.ev), S.s2[(c.hom_obj, y)])
    return is_cloak(D, S.ob(y), S.ob(z), S.ob(c.hom_obj), e)


def check_magmal(structure, *args) -> list[str]:
    """Validation report for a magmal functor, comonad, or (θ, S, T) transformation."""
    if isinstance(structure, MagmalComonad):
        return check_comonad(structure)
    if isinstance(structure, MagmalFunctor):
        return check_magmal_functor(structure)
    if isinstance(structure, OpmagmalMonad):
        return check_comonad(structure.dual_unchecked())
    if isinstance(structure, NatTrans):
        return check_magmal_nat(structure, *args)
    raise TypeError(f"cannot check {type(structure).__name__}")


# ---------------------------------------------------------------------------
# thin helpers

def meet_semilattice(elements: Sequence[str], leq, name: str = "") -> MagmalCategory:
    """A finite poset with tensor = meet (raises if some meet is missing)."""
    P = FinCategory.from_poset(elements, leq, name=name)
    return MagmalCategory.from_table(P, meet_table(P), name=name)


def meet_table(P: FinCategory) -> dict[tuple[int, int], int]:
    out = {}
    for a in P.obj_ids():
        for b in P.obj_ids():
            lower = [c for c in P.obj_ids() if P.leq(c, a) and P.leq(c, b)]
            top = [c for c in lower if all(P.leq(d, c) for d in lower)]
            if len(top) != 1:
                raise LawViolation([f"no meet of {P.objects[a]} and {P.objects[b]}"], "meet")
            out[(a, b)] = top[0]
    return out


def join_table(P: FinCategory) -> dict[tuple[int, int], int]:
    out = {}
    for (a, b), c in meet_table(P.op()).items():
        out[(a, b)] = c
    return out
