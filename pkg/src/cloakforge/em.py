"""Eilenberg–Moore categories of magmal comonads and opmagmal monads, with their cloaks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import Inconsistency, MissingCloaks
from .fincat import (
    Adjunction,
    FinCategory,
    Functor,
    NatTrans,
    are_isomorphic_objects,
    compose_functors,
    find_equalizer,
    identity_functor,
    is_equalizer,
    is_fully_faithful,
    is_iso,
    product,
)
from .magmal import (
    Cloak,
    MagmalCategory,
    MagmalComonad,
    MagmalFunctor,
    OpmagmalMonad,
    _s2_left_pointwise,
    is_cloak,
)


def s2_left_at(S: MagmalFunctor, y: int, z: int) -> int:
    """S₂ℓ at Z: S[Y,Z] → [SY,SZ]; needs only the cloaks [Y,Z] and [SY,SZ]."""
    return _s2_left_pointwise(S, y, z)


class EMCategory:
    """Coalgebras of a magmal comonad (or, with ``kind="algebras"``, algebras of a monad).

    ``structures[i]`` is the (carrier, structure map) pair of object i;
    ``category`` is the finite category, ``magmal`` its tensor, ``und`` the
    strict underlying functor and ``adjunction`` the free/forgetful pair
    (und ⊣ cofree for coalgebras, free ⊣ und for algebras).
    """

    def __init__(self, kind: str, structures, category: FinCategory, magmal: MagmalCategory,
                 und: MagmalFunctor, free: Functor, adjunction: Adjunction, source):
        self.kind = kind
        self.structures = list(structures)
        self.index = {s: i for i, s in enumerate(self.structures)}
        self.category = category
        self.magmal = magmal
        self.und = und
        self.free = free
        self.adjunction = adjunction
        self.source = source
        self._mor_index = {(category.src[f], category.dst[f], category.mor_labels[f]): f
                           for f in category.mor_ids()}

    @property
    def cofree(self) -> Functor:
        return self.free

    def __repr__(self):
        return f"<EMCategory of {self.kind}: {len(self.structures)} objects>"

    def find(self, carrier: int, structure: int) -> int | None:
        return self.index.get((carrier, structure))

    def lift(self, src: int, dst: int, base_mor: int) -> int | None:
        """The morphism src → dst over the given base morphism, if it is one."""
        return self._mor_index.get((src, dst, base_mor))

    def carrier(self, i: int) -> int:
        return self.structures[i][0]

    def structure(self, i: int) -> int:
        return self.structures[i][1]

    def free_obj(self, z: int) -> int:
        return self.free.ob(z)

    cofree_obj = free_obj


def build_em(G: MagmalComonad) -> EMCategory:
    """Category of Eilenberg–Moore coalgebras with tensor G₂∘(ξ⊗υ)."""
    B = G.base
    C = G.C
    coalgebras = []
    for x in B.obj_ids():
        gx = G.ob(x)
        for xi in B.hom(x, gx):
            if B.comp(G.eps[x], xi) != B.id(x):
                continue
            if B.comp(G.fmap(xi), xi) != B.comp(G.delta[x], xi):
                continue
            coalgebras.append((x, xi))
    index = {c: i for i, c in enumerate(coalgebras)}
    morphisms, labels, mindex = [], [], {}
    for i, (x, xi) in enumerate(coalgebras):
        for j, (y, yi) in enumerate(coalgebras):
            for f in B.hom(x, y):
                if B.comp(G.fmap(f), xi) == B.comp(yi, f):
                    mindex[(i, j, f)] = len(morphisms)
                    morphisms.append((B.mor_names[f], i, j))
                    labels.append(f)
    identity = [mindex[(i, i, B.id(x))] for i, (x, _) in enumerate(coalgebras)]
    table = {}
    by_src: dict[int, list[int]] = {}
    for k, (_, i, _j) in enumerate(morphisms):
        by_src.setdefault(i, []).append(k)
    for f, (_, i, j) in enumerate(morphisms):
        for g in by_src.get(j, ()):
            k = morphisms[g][2]
            table[(g, f)] = mindex[(i, k, B.comp(labels[g], labels[f]))]
    names = [f"({B.objects[x]},{B.mor_names[xi]})" for x, xi in coalgebras]
    E = FinCategory(names, morphisms, identity, table, obj_labels=coalgebras, mor_labels=labels,
                    name=f"{C.name}^{G.name}", check=False)
    # tensor
    n, m = E.n_obj, E.n_mor
    t_obj = []
    for (x, xi) in coalgebras:
        for (y, yi) in coalgebras:
            s = (C.t(x, y), B.comp(G.g2(x, y), C.tm(xi, yi)))
            if s not in index:
                raise Inconsistency(f"tensor of coalgebras {B.objects[x]}, {B.objects[y]} is not a coalgebra")
            t_obj.append(index[s])
    t_mor = []
    for f in range(m):
        for g in range(m):
            a, b = t_obj[E.src[f] * n + E.src[g]], t_obj[E.dst[f] * n + E.dst[g]]
            h = mindex.get((a, b, C.tm(labels[f], labels[g])))
            if h is None:
                raise Inconsistency("tensor of coalgebra morphisms is not a coalgebra morphism")
            t_mor.append(h)
    EM = MagmalCategory(E, Functor(product(E, E), E, t_obj, t_mor, name="⊗", check=False),
                        name=E.name, check=False)
    und_f = Functor(E, B, [x for x, _ in coalgebras], labels, name="und", check=False)
    und = MagmalFunctor.strict(und_f, EM, C, name="und")
    cof_obj = [index[(G.ob(z), G.delta[z])] for z in B.obj_ids()]
    cof_mor = [mindex[(cof_obj[B.src[h]], cof_obj[B.dst[h]], G.fmap(h))] for h in B.mor_ids()]
    cofree = Functor(B, E, cof_obj, cof_mor, name="cofree")
    unit = NatTrans(identity_functor(E), compose_functors(cofree, und_f),
                    [mindex[(i, cof_obj[x], xi)] for i, (x, xi) in enumerate(coalgebras)])
    counit = NatTrans(compose_functors(und_f, cofree), identity_functor(B), list(G.eps))
    adj = Adjunction(und_f, cofree, unit, counit)
    v = adj.validate()
    if v:
        raise Inconsistency("; ".join(v))
    return EMCategory("coalgebras", coalgebras, E, EM, und, cofree, adj, G)


def build_em_monad(T: OpmagmalMonad) -> EMCategory:
    """Algebras (X, α: TX → X) with tensor (α⊗β)∘T₂, via coalgebras on the opposite."""
    dual = build_em(T.dual())
    E = dual.category.op()
    EM = dual.magmal.op()
    und_f = dual.und.functor.op()
    und = MagmalFunctor.strict(und_f, EM, T.C, name="und")
    free = dual.free.op()
    adj = dual.adjunction.op()
    return EMCategory("algebras", dual.structures, E, EM, und, free, adj, T)


def em_tensor(em: EMCategory, i: int, j: int) -> int:
    return em.magmal.t(i, j)


def coalgebra_fork(G: MagmalComonad, em: EMCategory, zc: int) -> tuple[int, int, int]:
    """The fork ζ: (Z,ζ) → (GZ,δ_Z) ⇉ (G²Z,δ_GZ) of δ_Z and Gζ, as EM morphisms."""
    z, zeta = em.structures[zc]
    a, b = em.cofree_obj(z), em.cofree_obj(G.ob(z))
    k = em.lift(zc, a, zeta)
    d = em.lift(a, b, G.delta[z])
    gz = em.lift(a, b, G.fmap(zeta))
    if None in (k, d, gz):
        raise Inconsistency("coalgebra fork does not live in the EM category")
    return k, d, gz


def fork_is_absolute(G: MagmalComonad, em: EMCategory, zc: int, functors: Sequence[Functor]) -> list[str]:
    """Check the fork is an equalizer in EM, in the base, and after each given functor out of the base."""
    k, d, gz = coalgebra_fork(G, em, zc)
    out = []
    if not is_equalizer(em.category, d, gz, k):
        out.append("not an equalizer among coalgebras")
    U = em.und.functor
    if not is_equalizer(G.base, U.fmap(d), U.fmap(gz), U.fmap(k)):
        out.append("not an equalizer in the base")
    for F in functors:
        if not is_equalizer(F.cod, F.fmap(U.fmap(d)), F.fmap(U.fmap(gz)), F.fmap(U.fmap(k))):
            out.append(f"not preserved by {F.name or 'a functor'}")
    return out


# ---------------------------------------------------------------------------
# cloaks among coalgebras

def equalevals_paths(G: MagmalComonad, y: int, ups: int, z: int) -> tuple[int, int, int]:
    """The three routes G[Y,Z]⊗Y → GZ around the evaluation diagram for cofree cloaks."""
    C, B = G.C, G.base
    c1 = C.need_cloak(y, z)
    c2 = C.need_cloak(G.ob(y), G.ob(z))
    h = c1.hom_obj
    gh = G.ob(h)
    g2l = s2_left_at(G.g, y, z)
    clockwise = B.compose(G.fmap(c1.ev), G.fmap(C.tm(G.eps[h], B.id(y))), G.g2(gh, y),
                          C.tm(G.delta[h], ups))
    middle = B.compose(G.fmap(c1.ev), G.g2(h, y), C.tm(B.id(gh), ups))
    direct = B.comp(c2.ev, C.tm(g2l, ups))
    return clockwise, middle, direct


def cofree_cloak(G: MagmalComonad, em: EMCategory, yc: int, z: int) -> Cloak:
    """Cloak of (GZ, δ_Z) by (Y, υ): the cofree coalgebra on [Y,Z] with the transported evaluation."""
    C, B = G.C, G.base
    y, ups = em.structures[yc]
    if C.cloak(y, z) is None or C.cloak(G.ob(y), G.ob(z)) is None:
        raise MissingCloaks(f"base lacks [{B.objects[y]},{B.objects[z]}] or its image under {G.name}")
    c1 = C.need_cloak(y, z)
    h = em.cofree_obj(c1.hom_obj)
    target = em.cofree_obj(z)
    paths = equalevals_paths(G, y, ups, z)
    if len(set(paths)) != 1:
        raise Inconsistency(f"evaluation routes disagree for cofree cloak at ({B.objects[y]},{B.objects[z]})")
    src = em.magmal.t(h, yc)
    ev = em.lift(src, target, paths[2])
    if ev is None:
        raise Inconsistency("cofree evaluation is not a coalgebra morphism")
    if not is_cloak(em.magmal, yc, target, h, ev):
        raise Inconsistency(f"cofree cloak at ({B.objects[y]},{B.objects[z]}) fails the universal property")
    return Cloak(yc, target, h, ev)


def _curry_in(M: MagmalCategory, cloak: Cloak, x: int, f: int) -> int:
    return cloak.curry(M, x, f)


def parallel_pair_011(G: MagmalComonad, em: EMCategory, yc: int, zc: int) -> tuple[Cloak, Cloak, int, int]:
    """[1,δ_Z], [1,Gζ] between the cofree cloaks of (GZ,δ_Z) and (G²Z,δ_GZ)."""
    z, zeta = em.structures[zc]
    a = cofree_cloak(G, em, yc, z)
    b = cofree_cloak(G, em, yc, G.ob(z))
    _, d, gz = coalgebra_fork(G, em, zc)
    E = em.category
    p = _curry_in(em.magmal, b, a.hom_obj, E.comp(d, a.ev))
    q = _curry_in(em.magmal, b, a.hom_obj, E.comp(gz, a.ev))
    return a, b, p, q


@dataclass
class EqualizerCloak:
    cloak: Cloak | None
    equalizer: tuple[int, int] | None
    solutions: int = 0


def cloak_via_equalizer(G: MagmalComonad, em: EMCategory, yc: int, zc: int) -> EqualizerCloak:
    """Cloak of (Z,ζ) by (Y,υ) from the equalizer of [1,δ_Z], [1,Gζ]."""
    a, _b, p, q = parallel_pair_011(G, em, yc, zc)
    E = em.category
    eq = find_equalizer(E, p, q)
    if eq is None:
        return EqualizerCloak(None, None)
    e_obj, k = eq
    zeta_em = coalgebra_fork(G, em, zc)[0]
    src = em.magmal.t(e_obj, yc)
    target = E.comp(a.ev, em.magmal.tm(k, E.id(yc)))
    sols = [e for e in E.hom(src, zc) if E.comp(zeta_em, e) == target]
    if len(sols) != 1:
        raise Inconsistency(f"evaluation from the equalizer has {len(sols)} solutions")
    if not is_cloak(em.magmal, yc, zc, e_obj, sols[0]):
        raise Inconsistency("equalizer with induced evaluation is not a cloak")
    return EqualizerCloak(Cloak(yc, zc, e_obj, sols[0]), eq, len(sols))


def lemma_equalizer_check(G: MagmalComonad, em: EMCategory, yc: int, zc: int) -> dict:
    """Compare the equalizer route with direct cloak search among coalgebras."""
    via = cloak_via_equalizer(G, em, yc, zc)
    direct = em.magmal.cloak(yc, zc)
    agree = (via.cloak is None) == (direct is None)
    if agree and direct is not None:
        agree = are_isomorphic_objects(em.category, via.cloak.hom_obj, direct.hom_obj) is not None
    return {"via_equalizer": via.cloak is not None, "direct": direct is not None, "agree": agree,
            "hom_obj": None if direct is None else em.category.objects[direct.hom_obj]}


# ---------------------------------------------------------------------------
# creation of cloaks

@dataclass
class Creation:
    created: bool
    h: int | None = None
    tau: int | None = None
    ebar: int | None = None
    cod_cloak: bool = True


def creation_check(K: MagmalFunctor, a: int, b: int) -> Creation:
    """Does K create the cloak of B by A?  Search over (H, τ) with the unique-ē condition."""
    A, C = K.dom, K.cod
    cb = C.base
    c = C.cloak(K.ob(a), K.ob(b))
    if c is None:
        return Creation(False, cod_cloak=False)
    ab = A.base
    for h in ab.obj_ids():
        for tau in cb.hom(K.ob(h), c.hom_obj):
            if not is_iso(cb, tau):
                continue
            target = cb.comp(c.ev, C.tm(tau, cb.id(K.ob(a))))
            k2 = K.s2[(h, a)]
            sols = [e for e in ab.hom(A.t(h, a), b) if cb.comp(K.fmap(e), k2) == target]
            if len(sols) == 1 and is_cloak(A, a, b, h, sols[0]):
                return Creation(True, h, tau, sols[0])
    return Creation(False)


def strict_pullback(Kp: MagmalFunctor, W: MagmalFunctor) -> tuple[MagmalCategory, MagmalFunctor, MagmalFunctor]:
    """Pullback of strict magmal functors K': A' → C' and W: C → C'.

    Returns (A, V: A → A', K: A → C).
    """
    Ap, Cc = Kp.dom.base, W.dom.base
    objs = [(x, c) for x in Ap.obj_ids() for c in Cc.obj_ids() if Kp.ob(x) == W.ob(c)]
    oidx = {o: i for i, o in enumerate(objs)}
    mors, midx = [], {}
    for i, (x, c) in enumerate(objs):
        for j, (y, d) in enumerate(objs):
            for f in Ap.hom(x, y):
                for g in Cc.hom(c, d):
                    if Kp.fmap(f) == W.fmap(g):
                        midx[(f, g)] = len(mors)
                        mors.append((f, g, i, j))
    identity = [midx[(Ap.id(x), Cc.id(c))] for x, c in objs]
    table = {}
    for k1, (f, g, i, j) in enumerate(mors):
        for k2, (f2, g2, i2, j2) in enumerate(mors):
            if i2 == j:
                table[(k2, k1)] = midx[(Ap.comp(f2, f), Cc.comp(g2, g))]
    P = FinCategory([f"({Ap.objects[x]},{Cc.objects[c]})" for x, c in objs],
                    [(f"({Ap.mor_names[f]},{Cc.mor_names[g]})", i, j) for f, g, i, j in mors],
                    identity, table, obj_labels=objs, mor_labels=[(f, g) for f, g, _, _ in mors],
                    name="pullback")
    t_obj = [oidx[(Kp.dom.t(x, y), W.dom.t(c, d))] for x, c in objs for y, d in objs]
    t_mor = [midx[(Kp.dom.tm(f, f2), W.dom.tm(g, g2))] for f, g, _, _ in mors for f2, g2, _, _ in mors]
    PM = MagmalCategory(P, Functor(product(P, P), P, t_obj, t_mor, name="⊗"), name="pullback")
    V = MagmalFunctor.strict(Functor(P, Ap, [x for x, _ in objs], [f for f, _, _, _ in mors], name="V"), PM, Kp.dom)
    K = MagmalFunctor.strict(Functor(P, Cc, [c for _, c in objs], [g for _, g, _, _ in mors], name="K"), PM, W.dom)
    return PM, V, K


def pullback_creation_check(K: MagmalFunctor, V: MagmalFunctor, Kp: MagmalFunctor, W: MagmalFunctor,
                            a: int, b: int) -> dict:
    """Cloak creation transferred along a pullback square with W fully faithful.

    Returns the hypotheses found and whether the conclusion holds; the
    implication is violated only if all hypotheses hold and K fails to create.
    """
    hyp_ff = is_fully_faithful(W.functor)
    cre = creation_check(Kp, V.ob(a), V.ob(b))
    ap = Kp.dom
    hyp_h = None
    c = ap.cloak(V.ob(a), V.ob(b))
    if c is not None:
        for h in K.dom.base.obj_ids():
            if are_isomorphic_objects(ap.base, V.ob(h), c.hom_obj) is not None:
                hyp_h = h
                break
    hyps = hyp_ff and cre.created and hyp_h is not None
    concl = creation_check(K, a, b).created
    return {"hypotheses": hyps, "fully_faithful": hyp_ff, "upstairs_creates": cre.created,
            "h": hyp_h, "creates": concl, "holds": (not hyps) or concl}
