"""Right liftings of profunctors: cancellation, equalizer descriptions, and Dubuc's triangle.

A 1-morphism ``X: A → B`` is a profunctor ``Profunctor(dom=A, cod=B)``; the
composite ``U S`` is ``compose(S, U)`` and ``B·K`` is ``compose(K, B)``.  In
the hom-categories of profunctors a 2-morphism is mono exactly when it is
componentwise injective, and equalizers are computed pointwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import HypothesisUnsatisfied, Inconsistency
from .fincat import (
    FinCategory,
    Functor,
    compose_functors,
    find_equalizer,
    find_right_adjoint,
    regular_mono_witness,
    iso_inverse,
)
from .prof import (
    ModMorphism,
    Profunctor,
    RightLifting,
    UnionFind,
    compose,
    hom_prof,
    klass,
    map_from_composite,
    pasting_bijection_check,
    respect_comparison,
    respects,
    right_lifting,
    right_unitor,
    rif_mor,
    whisker_mod_left,
    whisker_mod_right,
)


# ---------------------------------------------------------------------------
# sub-profunctors and pointwise equalizers

def subprofunctor(P: Profunctor, keep, name: str = "") -> Profunctor:
    """Restriction of ``P`` to the elements with ``keep(b, a, x)``; must be closed under both actions."""
    sets = {(b, a): tuple(x for x in P.val(b, a) if keep(b, a, x)) for b, a in P.cells()}
    members = {k: set(v) for k, v in sets.items()}
    left = {}
    for (g, a), tbl in P.left.items():
        b = P.cod.dst[g]
        left[(g, a)] = {x: tbl[x] for x in sets[(b, a)]}
        bp = P.cod.src[g]
        if any(y not in members[(bp, a)] for y in left[(g, a)].values()):
            raise Inconsistency(f"{name or 'subprofunctor'} is not closed under the left action")
    right = {}
    for (f, b), tbl in P.right.items():
        a = P.dom.src[f]
        right[(f, b)] = {x: tbl[x] for x in sets[(b, a)]}
        ap = P.dom.dst[f]
        if any(y not in members[(b, ap)] for y in right[(f, b)].values()):
            raise Inconsistency(f"{name or 'subprofunctor'} is not closed under the right action")
    return Profunctor(P.dom, P.cod, sets, left, right, name=name or f"sub({P.name})", check=False)


def cokernel_pair(k: ModMorphism, name: str = "") -> tuple[Profunctor, ModMorphism, ModMorphism]:
    """Pointwise pushout of ``k`` along itself, with its two coprojections."""
    X = k.tgt
    reps = {}
    sets = {}
    for b, a in X.cells():
        items = [(i, x) for i in (0, 1) for x in X.val(b, a)]
        uf = UnionFind(items)
        for y in k.src.val(b, a):
            uf.union((0, k(b, a, y)), (1, k(b, a, y)))
        reps[(b, a)] = {t: uf.find(t) for t in items}
        sets[(b, a)] = tuple(t for t in items if reps[(b, a)][t] == t)
    left = {(g, a): {t: reps[(X.cod.src[g], a)][(t[0], X.lact(g, a, t[1]))] for t in sets[(X.cod.dst[g], a)]}
            for g in X.cod.mor_ids() for a in X.dom.obj_ids()}
    right = {(f, b): {t: reps[(b, X.dom.dst[f])][(t[0], X.ract(f, b, t[1]))] for t in sets[(b, X.dom.src[f])]}
             for f in X.dom.mor_ids() for b in X.cod.obj_ids()}
    P = Profunctor(X.dom, X.cod, sets, left, right, name=name or f"coker({X.name})", check=False)
    i0 = ModMorphism.from_fn(X, P, lambda b, a, x: reps[(b, a)][(0, x)], check=False)
    i1 = ModMorphism.from_fn(X, P, lambda b, a, x: reps[(b, a)][(1, x)], check=False)
    return P, i0, i1


def inclusion(E: Profunctor, P: Profunctor) -> ModMorphism:
    return ModMorphism.from_fn(E, P, lambda b, a, x: x, name="inclusion", check=False)


def pointwise_equalizer(alpha: ModMorphism, beta: ModMorphism, name: str = "E") -> tuple[Profunctor, ModMorphism]:
    X = alpha.src
    E = subprofunctor(X, lambda b, a, x: alpha(b, a, x) == beta(b, a, x), name=name)
    return E, inclusion(E, X)


def is_equalizer_of(k: ModMorphism, alpha: ModMorphism, beta: ModMorphism) -> bool:
    """``k`` injective with image exactly the pointwise equalizer of the pair."""
    if not k.is_injective():
        return False
    for b, a in alpha.src.cells():
        eq = {x for x in alpha.src.val(b, a) if alpha(b, a, x) == beta(b, a, x)}
        if k.image(b, a) != eq:
            return False
    return True


def preserved_by(k: ModMorphism, alpha: ModMorphism, beta: ModMorphism, K: Profunctor) -> bool:
    """Is ``k·K`` an equalizer of ``alpha·K``, ``beta·K``?"""
    XK = compose(K, alpha.src)
    YK = compose(K, alpha.tgt)
    kK = whisker_mod_right(K, k, tgt=XK)
    aK = whisker_mod_right(K, alpha, src=XK, tgt=YK)
    bK = whisker_mod_right(K, beta, src=XK, tgt=YK)
    return is_equalizer_of(kK, aK, bK)


# ---------------------------------------------------------------------------
# cancellation

@dataclass
class CancelReport:
    iso: bool
    pasting: bool
    bijections: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.iso and self.pasting and not self.bijections


def rif_cancel_check(S: Profunctor, U: Profunctor, C: Profunctor, tests: Sequence[Profunctor] = ()) -> CancelReport:
    """``rif(S, rif(U,C)) ≅ rif(US, C)`` with the counit of the right side the pasted composite."""
    RU = right_lifting(U, C)
    L = right_lifting(S, RU.lift)
    US = compose(S, U)
    RUS = right_lifting(US, C)
    LUS = compose(L.lift, US)

    def pasted(c, k, t):
        a, phi, (b, s, u) = t
        return RU.family(L.family(phi, b, a, s), c, b, u)

    theta = map_from_composite(LUS, C, pasted, name="pasted counit")
    iso = RUS.transpose(theta, L.lift)
    ok_iso = iso.is_iso()
    ok_paste = RUS.paste(iso, LUS).key() == theta.key()
    bij = pasting_bijection_check(L, tests) + pasting_bijection_check(RUS, tests)
    return CancelReport(ok_iso, ok_paste, bij)


# ---------------------------------------------------------------------------
# equalizer description with a unit-like 2-morphism

def unit_whisker(eta: ModMorphism, X: Profunctor, MX: Profunctor | None = None) -> ModMorphism:
    """``ηX: X ⇒ M X`` for ``η: hom ⇒ M``."""
    M = eta.tgt
    MX = MX or compose(X, M)
    C = M.dom
    return ModMorphism.from_fn(X, MX, lambda b, k, x: klass(MX, b, k, (b, x, eta(b, b, C.id(b)))),
                               name="ηX", check=False)


@dataclass
class EqualizerReport:
    part_i: bool
    part_ii: bool | None
    part_iii: bool | None
    respects_b: bool | None = None
    preserved: bool | None = None

    @property
    def holds(self) -> bool:
        return bool(self.part_i) and self.part_ii is not False and self.part_iii is not False


def check_unit_hypotheses(eta: ModMorphism, B: Profunctor, tests: Sequence[Profunctor]) -> None:
    """``ηB`` regular mono and ``ηC`` mono on the tests plus the cokernel pair of ``ηB``."""
    etaB = unit_whisker(eta, B)
    if not etaB.is_injective():
        raise HypothesisUnsatisfied("ηB is a regular monomorphism")
    cok, i0, i1 = cokernel_pair(etaB)
    if not is_equalizer_of(etaB, i0, i1):
        raise HypothesisUnsatisfied("ηB is a regular monomorphism")
    for X in list(tests) + [cok]:
        if not unit_whisker(eta, X).is_injective():
            raise HypothesisUnsatisfied(f"ηC is a monomorphism (fails for C = {X.name})")


def rif_with_unit_check(S: Profunctor, eta: ModMorphism, B: Profunctor, K: Profunctor | None = None,
                        tests: Sequence[Profunctor] = ()) -> EqualizerReport:
    """The fork ``B → MB ⇉ M²B`` and the equalizer description of ``rif(S,B)``."""
    M = eta.tgt
    check_unit_hypotheses(eta, B, tests)
    MB = compose(B, M)
    MMB = compose(MB, M)
    etaB = unit_whisker(eta, B, MB)
    etaMB = unit_whisker(eta, MB, MMB)
    MetaB = whisker_mod_left(etaB, M, src=MB, tgt=MMB)
    part_i = is_equalizer_of(etaB, etaMB, MetaB)
    if K is None:
        return EqualizerReport(part_i, None, None)
    R_B = right_lifting(S, B)
    R_MB = right_lifting(S, MB)
    R_MMB = right_lifting(S, MMB)
    for R, what in ((R_MB, "rif(S,MB)"), (R_MMB, "rif(S,M²B)")):
        if not respects(R, K):
            raise HypothesisUnsatisfied(f"{what} is respected by K")
    top = rif_mor(R_MB, R_MMB, etaMB)
    bot = rif_mor(R_MB, R_MMB, MetaB)
    E, kappa = pointwise_equalizer(top, bot)
    preserved = preserved_by(kappa, top, bot, K)
    resp = respects(R_B, K)
    part_ii = resp == preserved
    j = rif_mor(R_B, R_MB, etaB)
    part_iii = is_equalizer_of(j, top, bot)
    return EqualizerReport(part_i, part_ii, part_iii, resp, preserved)


# ---------------------------------------------------------------------------
# the codensity-style description

def codensity_unit(U: Profunctor, RM: RightLifting | None = None) -> tuple[RightLifting, ModMorphism]:
    """``M = rif(U,U)`` and ``η: hom ⇒ M`` determined by ``ε·Uη = 1_U``."""
    RM = RM or right_lifting(U, U)
    Bc = U.dom
    eta = RM.transpose(right_unitor(U), hom_prof(Bc))
    direct = ModMorphism.from_fn(hom_prof(Bc), RM.lift,
                                 lambda b, bp, g: tuple(tuple(U.ract(g, c, u) for u in U.val(c, b))
                                                        for c in U.cod.obj_ids()), check=False)
    if direct.key() != eta.key():
        raise Inconsistency("the unit of rif(U,U) disagrees with its direct description")
    return RM, eta


@dataclass
class CodensityReport:
    matches: bool
    respects_b: bool | None = None
    preserved: bool | None = None

    @property
    def holds(self) -> bool:
        return self.matches and (self.respects_b == self.preserved)


def rif_via_codensity_check(S: Profunctor, U: Profunctor, B: Profunctor, K: Profunctor,
                            tests: Sequence[Profunctor] = ()) -> CodensityReport:
    """``rif(S,B)`` against the equalizer of the pair ``Q_B ⇉ Q_MB`` built from ``US``."""
    RM, eta = codensity_unit(U)
    M = RM.lift
    for X in list(tests) + [B]:
        if not respects(RM, X):
            raise HypothesisUnsatisfied(f"rif(U,U) is respected by {X.name}")
    check_unit_hypotheses(eta, B, tests)
    US = compose(S, U)
    UB = compose(B, U)
    MB = compose(B, M)
    UMB = compose(MB, U)
    QB = right_lifting(US, UB)
    QMB = right_lifting(US, UMB)
    for R, what in ((QB, "Q_B"), (QMB, "Q_MB")):
        if not respects(R, K):
            raise HypothesisUnsatisfied(f"{what} is respected by K")
    etaB = unit_whisker(eta, B, MB)
    UetaB = whisker_mod_left(etaB, U, src=UB, tgt=UMB)
    P0 = compose(QB.lift, US)
    eps_us = map_from_composite(
        P0, UB, lambda c, k, t: QB.family(t[1], c, t[0], t[2]), check=False)
    path1 = UetaB.vcomp(eps_us)

    # second path: U η S Q_B, the respect isomorphisms for M, and rif(U, ε^{US})
    SQ = compose(QB.lift, S)
    MSQ = compose(SQ, M)
    USQ = compose(SQ, U)
    R_USQ = right_lifting(U, USQ)
    R_UB = right_lifting(U, UB)
    cmp_sq = respect_comparison(RM, SQ, R_USQ)
    cmp_b = respect_comparison(RM, B, R_UB)
    if not cmp_b.is_iso() or not cmp_sq.is_iso():
        raise HypothesisUnsatisfied("rif(U,U) is respected by all 1-morphisms")
    cmp_b_inv = cmp_b.inverse()
    eps_prime = map_from_composite(
        USQ, UB, lambda c, k, t: QB.family(t[1][1], c, t[1][0], klass(US, c, t[1][0], (t[0], t[1][2], t[2]))),
        check=False)
    rif_eps = rif_mor(R_USQ, R_UB, eps_prime)
    etaSQ = unit_whisker(eta, SQ, MSQ)

    def second(c, k, t):
        a, q, (b, s, u) = t
        x = klass(SQ, b, k, (a, q, s))
        y = cmp_b_inv(b, k, rif_eps(b, k, cmp_sq(b, k, etaSQ(b, k, x))))
        return klass(UMB, c, k, (b, y, u))

    path2 = map_from_composite(P0, UMB, second, check=False)
    top = QMB.transpose(path1, QB.lift)
    bot = QMB.transpose(path2, QB.lift)

    R_B = right_lifting(S, B)
    PSB = compose(R_B.lift, US)

    def jfn(c, k, t):
        a, phi, (b, s, u) = t
        return klass(UB, c, k, (b, R_B.family(phi, b, a, s), u))

    j = QB.transpose(map_from_composite(PSB, UB, jfn, check=False), R_B.lift)
    matches = is_equalizer_of(j, top, bot)
    _, kappa = pointwise_equalizer(top, bot)
    return CodensityReport(matches, respects(R_B, K), preserved_by(kappa, top, bot, K))


# ---------------------------------------------------------------------------
# Dubuc's adjoint triangle in finite categories

@dataclass
class DubucReport:
    verdict: str                      # holds | fails | equalizer-not-found
    lhs: bool
    rhs: bool | None
    iso_to_adjoint: bool | None = None


@dataclass(frozen=True)
class DubucPair:
    S: Functor
    U: Functor
    name: str = ""


def dubuc_check(S: Functor, U: Functor) -> DubucReport:
    """``S`` has a right adjoint iff ``US`` has one and the coreflexive pair has an equalizer."""
    A, Bc = S.dom, S.cod
    adjU = find_right_adjoint(U)
    if adjU is None:
        raise HypothesisUnsatisfied("U has a right adjoint")
    eta = adjU.unit
    for b in Bc.obj_ids():
        if regular_mono_witness(Bc, eta[b]) is None:
            raise HypothesisUnsatisfied(f"the unit of U ⊣ R is a regular monomorphism (fails at {Bc.objects[b]})")
    R = adjU.right
    alpha_adj = find_right_adjoint(S)
    lhs = alpha_adj is not None
    adjQ = find_right_adjoint(compose_functors(U, S))
    if adjQ is None:
        return DubucReport("holds" if not lhs else "fails", lhs, False)
    Q, beta, alpha = adjQ.right, adjQ.unit, adjQ.counit
    QU = compose_functors(Q, U)
    eq = {}
    for b in Bc.obj_ids():
        qub = QU.ob(b)
        f = QU.fmap(eta[b])
        sqb = S.ob(Q.ob(U.ob(b)))
        g = A.comp(QU.fmap(R.fmap(alpha[U.ob(b)])), A.comp(QU.fmap(eta[sqb]), beta[qub]))
        e = find_equalizer(A, f, g)
        if e is None:
            return DubucReport("equalizer-not-found", lhs, None)
        eq[b] = e
    rhs = True
    iso_ok = None
    if lhs:
        T = alpha_adj.right
        iso_ok = all(_isomorphic(A, eq[b][0], T.ob(b)) for b in Bc.obj_ids())
    verdict = "holds" if lhs == rhs and iso_ok is not False else "fails"
    return DubucReport(verdict, lhs, rhs, iso_ok)


def _isomorphic(A: FinCategory, x: int, y: int) -> bool:
    return any(iso_inverse(A, f) is not None for f in A.hom(x, y))
