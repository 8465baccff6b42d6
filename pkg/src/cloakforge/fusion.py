"""Wood fusion for magmal comonads, T-fusion for opmagmal monads, and the monoid case."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .errors import Inconsistency, LawViolation, MissingCloaks, NotAdjoint
from .fincat import (
    Adjunction,
    iso_inverse,
    iso_over,
    is_epi,
    is_iso,
)
from .em import EMCategory, build_em, build_em_monad, creation_check, parallel_pair_011, s2_left_at
from .magmal import MagmalComonad, MagmalFunctor, OpmagmalMonad, is_cloak


@dataclass
class FusionMorphism:
    kind: str
    source: int
    target: int
    mor: int
    invertible: bool
    inverse: int | None = None


def wood_fusion(G: MagmalComonad, y: int, ups: int, z: int) -> FusionMorphism:
    """w = [υ,1]∘G₂ℓ : G[Y,Z] → [Y,GZ] for the coalgebra (Y, υ)."""
    C, B = G.C, G.base
    gz = G.ob(z)
    for a, b in ((y, z), (G.ob(y), gz), (y, gz)):
        if C.cloak(a, b) is None:
            raise MissingCloaks(f"base lacks [{B.objects[a]},{B.objects[b]}]")
    g2l = s2_left_at(G.g, y, z)
    pre = C.hom_mor(ups, B.id(gz))
    w = B.comp(pre, g2l)
    inv = iso_inverse(B, w)
    return FusionMorphism("wood", B.src[w], B.dst[w], w, inv is not None, inv)


def wood_fusion_natural(G: MagmalComonad, y: int, ups: int) -> list[str]:
    """[1,Gh]∘w_Z = w_Z'∘G[1,h] for every h: Z → Z'."""
    C, B = G.C, G.base
    out = []
    for h in B.mor_ids():
        z, zp = B.src[h], B.dst[h]
        w, wp = wood_fusion(G, y, ups, z).mor, wood_fusion(G, y, ups, zp).mor
        lhs = B.comp(C.hom_mor(B.id(y), G.fmap(h)), w)
        rhs = B.comp(wp, G.fmap(C.hom_mor(B.id(y), h)))
        if lhs != rhs:
            out.append(f"w not natural at {B.mor_names[h]}")
    return out


def wood_opmorphism_check(G: MagmalComonad, y: int, ups: int) -> list[str]:
    """The family w: G[Y,-] ⇒ [Y,G-] as a comonad opmorphism structure on [Y,-]."""
    C, B = G.C, G.base
    out = []
    for z in B.obj_ids():
        w = wood_fusion(G, y, ups, z).mor
        hz = C.need_cloak(y, z).hom_obj
        if B.comp(C.hom_mor(B.id(y), G.eps[z]), w) != G.eps[hz]:
            out.append(f"counit condition fails at {B.objects[z]}")
        wg = wood_fusion(G, y, ups, G.ob(z)).mor
        lhs = B.comp(C.hom_mor(B.id(y), G.delta[z]), w)
        rhs = B.compose(wg, G.fmap(w), G.delta[hz])
        if lhs != rhs:
            out.append(f"comultiplication condition fails at {B.objects[z]}")
    return out


@dataclass
class HopfReport:
    hopf: bool
    counterexample: tuple | None = None
    cells: int = 0
    details: dict = field(default_factory=dict)


def _coalgebra_name(B, y, ups):
    return f"({B.objects[y]},{B.mor_names[ups]})"


def hopf_wood_check(G: MagmalComonad, mode: str = "all-coalgebras", em: EMCategory | None = None) -> HopfReport:
    """Scan Wood fusion invertibility.

    ``all-coalgebras`` scans every coalgebra and object; ``cofree-only``
    scans the cofree coalgebras (GY, δ_Y), checks the per-coalgebra reduction
    (invertible at δ_Y and epi at δ_GY implies invertible at υ) under both
    readings of "epi", and asserts agreement with the full scan.
    """
    B = G.base
    em = em or build_em(G)
    if mode == "all-coalgebras":
        cells = 0
        for (y, ups) in em.structures:
            for z in B.obj_ids():
                cells += 1
                if not wood_fusion(G, y, ups, z).invertible:
                    return HopfReport(False, (_coalgebra_name(B, y, ups), B.objects[z]), cells)
        return HopfReport(True, None, cells)
    if mode != "cofree-only":
        raise ValueError(f"unknown mode {mode!r}")
    hopf, first, cells = True, None, 0
    for y in B.obj_ids():
        for z in B.obj_ids():
            cells += 1
            if not wood_fusion(G, G.ob(y), G.delta[y], z).invertible:
                hopf = False
                first = first or (_coalgebra_name(B, G.ob(y), G.delta[y]), B.objects[z])
    full = hopf_wood_check(G, "all-coalgebras", em)
    reduction_failures, divergent = [], []
    for (y, ups) in em.structures:
        gy = G.ob(y)
        for z in B.obj_ids():
            w_cof = wood_fusion(G, gy, G.delta[y], z)
            w_two = wood_fusion(G, G.ob(gy), G.delta[gy], z)
            epi_c = is_epi(B, w_two.mor)
            epi_em = _epi_among_coalgebras(G, em, G.ob(gy), G.delta[gy], z)
            if epi_c != epi_em:
                divergent.append((_coalgebra_name(B, y, ups), B.objects[z]))
            if w_cof.invertible and epi_c and not wood_fusion(G, y, ups, z).invertible:
                reduction_failures.append((_coalgebra_name(B, y, ups), B.objects[z]))
    if hopf != full.hopf:
        raise Inconsistency("cofree-only and all-coalgebra Hopf verdicts disagree")
    return HopfReport(hopf, first, cells, {
        "agrees_with_all": hopf == full.hopf,
        "reduction_failures": reduction_failures,
        "epi_readings_diverge": divergent,
    })


def _epi_among_coalgebras(G: MagmalComonad, em: EMCategory, y: int, ups: int, z: int) -> bool:
    """Epi-ness of Gw∘δ: (G[Y,Z],δ) → (G[Y,GZ],δ) among coalgebras."""
    B = G.base
    w = wood_fusion(G, y, ups, z).mor
    h = B.src[w]
    m = B.comp(G.fmap(w), G.delta[h])
    src = em.cofree_obj(h)
    dst = em.cofree_obj(B.dst[w])
    k = em.lift(src, dst, m)
    if k is None:
        raise Inconsistency("transported fusion is not a coalgebra morphism")
    return is_epi(em.category, k)


def transported_pair_check(G: MagmalComonad, em: EMCategory, yc: int, zc: int) -> dict:
    """Compare the pair [1,δ_Z], [1,Gζ] of cofree cloaks with Gw∘δ, G[1,ζ]."""
    C, B, E = G.C, G.base, em.category
    y, ups = em.structures[yc]
    z, zeta = em.structures[zc]
    a, b, p, q = parallel_pair_011(G, em, yc, zc)
    w = wood_fusion(G, y, ups, z).mor
    h = C.need_cloak(y, z).hom_obj
    src, dst = em.cofree_obj(h), em.cofree_obj(B.dst[w])
    p2 = em.lift(src, dst, B.comp(G.fmap(w), G.delta[h]))
    q2 = em.lift(src, dst, G.fmap(C.hom_mor(B.id(y), zeta)))
    if p2 is None or q2 is None:
        raise Inconsistency("transported pair is not made of coalgebra morphisms")
    on_nose = (a.hom_obj, b.hom_obj, p, q) == (src, dst, p2, q2)
    iso = None
    for u in E.hom(a.hom_obj, src):
        if not is_iso(E, u):
            continue
        for v in E.hom(b.hom_obj, dst):
            if is_iso(E, v) and E.comp(v, p) == E.comp(p2, u) and E.comp(v, q) == E.comp(q2, u):
                iso = (u, v)
                break
        if iso:
            break
    return {"isomorphic": iso is not None, "on_the_nose": on_nose, "iso": iso}


def restricted_creation_check(G: MagmalComonad, em: EMCategory, yc: int, z: int) -> dict:
    """und creates the cloak of (GZ,δ_Z) by (Y,υ) iff [Y,GZ] exists and w is invertible."""
    C = G.C
    y, ups = em.structures[yc]
    create = creation_check(em.und, yc, em.cofree_obj(z)).created
    if C.cloak(y, G.ob(z)) is None:
        fusion = False
    else:
        fusion = wood_fusion(G, y, ups, z).invertible
    return {"creation": create, "fusion": fusion, "agree": create == fusion}


def magcomoncloaks_check(G: MagmalComonad, em: EMCategory, yc: int) -> dict:
    """All w at (Y,υ) invertible iff und creates every cloak by (Y,υ); in that case build the cloaks."""
    C, B, E = G.C, G.base, em.category
    y, ups = em.structures[yc]
    fusion = all(wood_fusion(G, y, ups, z).invertible for z in B.obj_ids())
    creation = all(creation_check(em.und, yc, zc).created for zc in E.obj_ids())
    built = {}
    if fusion:
        for zc, (z, zeta) in enumerate(em.structures):
            fm = wood_fusion(G, y, ups, z)
            c = C.need_cloak(y, z)
            kappa = B.comp(fm.inverse, C.hom_mor(B.id(y), zeta))
            hc = em.find(c.hom_obj, kappa)
            if hc is None:
                raise Inconsistency(f"constructed coaction on [{B.objects[y]},{B.objects[z]}] is not a coalgebra")
            ev = em.lift(em.magmal.t(hc, yc), zc, c.ev)
            if ev is None or not is_cloak(em.magmal, yc, zc, hc, ev):
                raise Inconsistency("constructed cloak fails among coalgebras")
            built[E.objects[zc]] = E.objects[hc]
    return {"fusion": fusion, "creation": creation, "agree": fusion == creation, "cloaks": built}


# ---------------------------------------------------------------------------
# monads

def t_fusion(T: OpmagmalMonad, x: int, y: int, beta: int) -> FusionMorphism:
    """v = (1⊗β)∘T₂ : T(X⊗Y) → TX⊗Y."""
    C, B = T.C, T.base
    v = B.comp(C.tm(B.id(T.ob(x)), beta), T.t2[(x, y)])
    inv = iso_inverse(B, v)
    return FusionMorphism("t-fusion", B.src[v], B.dst[v], v, inv is not None, inv)


def t_fusion_monad_morphism_check(T: OpmagmalMonad, y: int, beta: int) -> list[str]:
    """v: T(-⊗Y) ⇒ T(-)⊗Y as a monad morphism structure on -⊗Y."""
    C, B = T.C, T.base
    out = []
    idy = B.id(y)
    for x in B.obj_ids():
        v = t_fusion(T, x, y, beta).mor
        if B.comp(v, T.eta[C.t(x, y)]) != C.tm(T.eta[x], idy):
            out.append(f"unit condition fails at {B.objects[x]}")
        lhs = B.comp(v, T.mu[C.t(x, y)])
        rhs = B.compose(C.tm(T.mu[x], idy), t_fusion(T, T.ob(x), y, beta).mor, T.fmap(v))
        if lhs != rhs:
            out.append(f"multiplication condition fails at {B.objects[x]}")
    return out


@dataclass
class Transfer:
    comonad: MagmalComonad
    em_t: EMCategory
    em_g: EMCategory
    iso: tuple | None
    correspondence: dict
    verdicts: list
    holds: bool


def comonad_from_right_adjoint(T: OpmagmalMonad, adj: Adjunction) -> MagmalComonad:
    """The magmal comonad structure on the right adjoint G of T, by mates."""
    C, B = T.C, T.base
    if adj.left.obj_map != T.functor.obj_map or adj.left.mor_map != T.functor.mor_map:
        raise NotAdjoint("adjunction's left functor is not the monad")
    if adj.validate():
        raise NotAdjoint("triangle identities fail")
    Gf, iota, sigma = adj.right, adj.unit, adj.counit
    eps, delta = [], []
    for x in B.obj_ids():
        gx = Gf.ob(x)
        eps.append(B.comp(sigma[x], T.eta[gx]))
        tgx = T.ob(gx)
        delta.append(B.compose(Gf.fmap(Gf.fmap(sigma[x])), Gf.fmap(Gf.fmap(T.mu[gx])),
                               Gf.fmap(iota[tgx]), iota[gx]))
    g2 = {}
    for x in B.obj_ids():
        for y in B.obj_ids():
            gx, gy = Gf.ob(x), Gf.ob(y)
            tr = B.comp(C.tm(sigma[x], sigma[y]), T.t2[(gx, gy)])
            g2[(x, y)] = B.comp(Gf.fmap(tr), iota[C.t(gx, gy)])
    g = MagmalFunctor(Gf, C, C, g2, name=f"{T.name}⊣")
    return MagmalComonad(g, eps, delta, name=f"right adjoint of {T.name}")


def adjoint_transfer(T: OpmagmalMonad, adj: Adjunction) -> Transfer:
    """Comonad on the right adjoint, the iso of EM categories over the base, and the fusion equivalence."""
    G = comonad_from_right_adjoint(T, adj)
    B = T.base
    em_t, em_g = build_em_monad(T), build_em(G)
    iota = adj.unit
    corr = {}
    for i, (y, beta) in enumerate(em_t.structures):
        ups = B.comp(adj.right.fmap(beta), iota[y])
        j = em_g.find(y, ups)
        if j is None:
            raise Inconsistency(f"algebra on {B.objects[y]} does not transfer to a coalgebra")
        corr[i] = j
    iso = iso_over(em_t.category, em_t.und.functor, em_g.category, em_g.und.functor)
    if iso is not None and len(set(corr.values())) != len(corr):
        raise Inconsistency("algebra/coalgebra correspondence is not injective")
    verdicts = []
    for i, (y, beta) in enumerate(em_t.structures):
        ups = em_g.structures[corr[i]][1]
        v_all = all(t_fusion(T, x, y, beta).invertible for x in B.obj_ids())
        w_all = all(wood_fusion(G, y, ups, z).invertible for z in B.obj_ids())
        verdicts.append({"algebra": em_t.category.objects[i], "t_fusion": v_all, "wood": w_all,
                         "agree": v_all == w_all})
    holds = iso is not None and all(v["agree"] for v in verdicts)
    return Transfer(G, em_t, em_g, iso, corr, verdicts, holds)


# ---------------------------------------------------------------------------
# monoids

@dataclass(frozen=True)
class FiniteMonoid:
    elements: tuple
    unit: object
    mul: dict

    def __post_init__(self):
        v = self.violations()
        if v:
            raise LawViolation(v, "monoid")

    def violations(self) -> list[str]:
        out = []
        els = self.elements
        for a in els:
            for b in els:
                if (a, b) not in self.mul or self.mul[(a, b)] not in els:
                    return [f"product {a}·{b} undefined"]
        for a in els:
            if self.mul[(self.unit, a)] != a or self.mul[(a, self.unit)] != a:
                out.append(f"unit law fails at {a}")
        for a, b, c in itertools.product(els, repeat=3):
            if self.mul[(self.mul[(a, b)], c)] != self.mul[(a, self.mul[(b, c)])]:
                out.append(f"associativity fails at ({a},{b},{c})")
        return out

    def __hash__(self):
        return hash((self.elements, self.unit, tuple(sorted(self.mul.items(), key=repr))))

    @classmethod
    def from_table(cls, rows: Sequence[Sequence[int]], unit: int = 0) -> FiniteMonoid:
        n = len(rows)
        return cls(tuple(range(n)), unit, {(a, b): rows[a][b] for a in range(n) for b in range(n)})

    @classmethod
    def cyclic_group(cls, n: int) -> FiniteMonoid:
        return cls.from_table([[(a + b) % n for b in range(n)] for a in range(n)])


def is_group(H: FiniteMonoid) -> bool:
    return all(any(H.mul[(a, b)] == H.unit and H.mul[(b, a)] == H.unit for b in H.elements)
               for a in H.elements)


def monoid_fusion(H: FiniteMonoid) -> dict:
    """(x, y) ↦ (x, x·y): diagonal comultiplication followed by multiplication."""
    return {(x, y): (x, H.mul[(x, y)]) for x in H.elements for y in H.elements}


def monoid_hopf(H: FiniteMonoid) -> tuple[bool, dict]:
    table = monoid_fusion(H)
    return len(set(table.values())) == len(table), table


def all_monoids(n: int) -> list[FiniteMonoid]:
    """Monoids of order n up to isomorphism; the unit is element 0."""
    if n < 1:
        return []
    els = list(range(n))
    cells = [(a, b) for a in range(1, n) for b in range(1, n)]
    found: list[FiniteMonoid] = []
    seen: set = set()
    perms = [p for p in itertools.permutations(range(1, n))]

    def canon(mul):
        best = None
        for p in perms:
            sigma = (0,) + p
            inv = [0] * n
            for i, s in enumerate(sigma):
                inv[s] = i
            key = tuple(sigma[mul[(inv[a], inv[b])]] for a in els for b in els)
            if best is None or key < best:
                best = key
        return best

    mul = {}
    for a in els:
        mul[(0, a)] = a
        mul[(a, 0)] = a

    def assoc_ok():
        for a, b, c in itertools.product(els, repeat=3):
            ab, bc = mul.get((a, b)), mul.get((b, c))
            if ab is None or bc is None:
                continue
            l, r = mul.get((ab, c)), mul.get((a, bc))
            if l is not None and r is not None and l != r:
                return False
        return True

    def go(k):
        if k == len(cells):
            key = canon(mul)
            if key not in seen:
                seen.add(key)
                found.append(FiniteMonoid(tuple(els), 0, dict(mul)))
            return
        for v in els:
            mul[cells[k]] = v
            if assoc_ok():
                go(k + 1)
        del mul[cells[k]]

    go(0)
    return found
