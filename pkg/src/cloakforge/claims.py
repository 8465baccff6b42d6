"""The claim registry: every claim id maps to one check over one kind of instance."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable
from weakref import WeakKeyDictionary

from .em import (EMCategory, build_em, build_em_monad, cofree_cloak, lemma_equalizer_check)
from .errors import CloakforgeError, HypothesisUnsatisfied, Inconsistency, MissingCloaks
from .fincat import (FinCategory, Functor, are_isomorphic_objects, constant_functor, find_right_adjoint,
                     identity_functor, subcategory_inclusion)
from .fusion import (FiniteMonoid, adjoint_transfer, hopf_wood_check, is_group, magcomoncloaks_check,
                     monoid_hopf, restricted_creation_check, transported_pair_check)
from .magmal import MagmalCategory, MagmalComonad, OpmagmalMonad
from .mnd import (MonadMorphism, MonadObject, doctrinal_fun, doctrinal_mnd, em_functoriality,
                  em_pseudofunctor, identity_morphism, lifting_a4, lifting_a5, roundtrip_from_morphism,
                  roundtrip_from_square, strong_squares)
from .generators import Bundle, all_morphisms, closure_operators, interior_operators, unit_into_coproduct
from .liftings import DubucPair, dubuc_check, rif_cancel_check, rif_via_codensity_check, rif_with_unit_check
from .procomonad import (BarComonad, Procomonad, build_gamma_algebras, fusion_coherence, gamma_from, gamma_hom,
                         gamma_power, gamma_pullback, lemma_bar_hopf, omega_and_theorem, thiebaud_iso)
from .prof import (cloak_universal_check, day_yoneda_check, presheaf_cloak, presheaf_test_set,
                   representable_cloak_iso, test_profunctors)


@dataclass
class Verdict:
    holds: bool | None            # None: the claim's hypotheses are not met by this instance
    cells: int = 0
    counterexample: object = None
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return {True: "holds", False: "fails", None: "not-applicable"}[self.holds]


@dataclass(frozen=True)
class Claim:
    id: str
    module: str
    summary: str
    kind: str                     # the instance kind the check consumes
    check: Callable[[object], Verdict]


def _first_failure(cells, test, label=None) -> Verdict:
    n = 0
    for cell in cells:
        n += 1
        ok, info = test(cell)
        if not ok:
            return Verdict(False, n, label(cell) if label else cell, info or {})
    return Verdict(True, n)


def _coalg(G, em, i) -> str:
    c, s = em.structures[i]
    return f"({G.base.objects[c]},{G.base.mor_names[s]})"


def _elem(x) -> str:
    if isinstance(x, tuple):
        return "(" + ",".join(_elem(v) for v in x) + ")"
    return str(x)


def _alg(P, ya) -> str:
    return f"({P.C.objects[ya[0]]},{_elem(ya[1])})"


def _yz(G, em, z_is_coalgebra: bool):
    ob = G.base.objects
    if z_is_coalgebra:
        return lambda c: {"Y": _coalg(G, em, c[0]), "Z": _coalg(G, em, c[1])}
    return lambda c: {"Y": _coalg(G, em, c[0]), "Z": ob[c[1]]}


def _xyz(P):
    ob = P.C.objects
    return lambda c: {"X": ob[c[0]], "Y": _alg(P, c[1]), "Z": ob[c[2]]}


# ---------------------------------------------------------------------------
# comonad claims

_EM: WeakKeyDictionary = WeakKeyDictionary()


def _em(G: MagmalComonad) -> EMCategory:
    if G not in _EM:
        _EM[G] = build_em(G)
    return _EM[G]


def _pairs(n: int, m: int):
    return [(i, j) for i in range(n) for j in range(m)]


def check_equalizer_cloaks(G: MagmalComonad) -> Verdict:
    em = _em(G)
    k = len(em.structures)

    def test(c):
        r = lemma_equalizer_check(G, em, *c)
        return r["agree"] and r["direct"], r
    return _first_failure(_pairs(k, k), test, _yz(G, em, True))


def check_cofree_cloaks(G: MagmalComonad) -> Verdict:
    em = _em(G)

    def test(c):
        yc, z = c
        try:
            cl = cofree_cloak(G, em, yc, z)
        except MissingCloaks:
            return True, {}
        direct = em.magmal.cloak(yc, em.cofree_obj(z))
        ok = direct is not None and are_isomorphic_objects(em.category, cl.hom_obj, direct.hom_obj) is not None
        return ok, {}
    return _first_failure(_pairs(len(em.structures), G.base.n_obj), test, _yz(G, em, False))


def check_cofree_suffice(G: MagmalComonad) -> Verdict:
    em = _em(G)
    try:
        r = hopf_wood_check(G, "cofree-only", em)
    except Inconsistency as e:
        return Verdict(False, 0, str(e))
    ok = r.details["agrees_with_all"] and not r.details["reduction_failures"]
    return Verdict(ok, r.cells, None if ok else r.details, {"hopf": r.hopf, "first_non_invertible": r.counterexample})


def check_transported_pair(G: MagmalComonad) -> Verdict:
    em = _em(G)
    k = len(em.structures)
    return _first_failure(_pairs(k, k), lambda c: (transported_pair_check(G, em, *c)["isomorphic"], {}),
                          _yz(G, em, True))


def check_restricted_creation(G: MagmalComonad) -> Verdict:
    em = _em(G)
    return _first_failure(_pairs(len(em.structures), G.base.n_obj),
                          lambda c: (restricted_creation_check(G, em, *c)["agree"], {}), _yz(G, em, False))


def check_creates_all(G: MagmalComonad) -> Verdict:
    em = _em(G)
    return _first_failure(range(len(em.structures)), lambda c: (magcomoncloaks_check(G, em, c)["agree"], {}),
                          lambda c: {"Y": _coalg(G, em, c)})


# ---------------------------------------------------------------------------
# monads and monoids

def check_adjoint_transfer(T: OpmagmalMonad) -> Verdict:
    adj = find_right_adjoint(T.functor)
    if adj is None:
        return Verdict(None, 0, None, {"hypothesis": "the monad has a right adjoint"})
    tr = adjoint_transfer(T, adj)
    bad = [v for v in tr.verdicts if not v["agree"]]
    return Verdict(tr.holds, len(tr.verdicts), bad[0] if bad else None, {"iso": tr.iso is not None})


def check_monoid_hopf(H: FiniteMonoid) -> Verdict:
    hopf, _ = monoid_hopf(H)
    grp = is_group(H)
    return Verdict(hopf == grp, 1, None if hopf == grp else {"hopf": hopf, "group": grp},
                   {"hopf": hopf, "group": grp})


def check_em_iso(X) -> Verdict:
    """Algebras of the induced procomonad against Eilenberg-Moore (co)algebras, strictly over the base."""
    P = gamma_from(X)
    alg = build_gamma_algebras(P)
    em = build_em(X) if isinstance(X, MagmalComonad) else build_em_monad(X)
    ok = thiebaud_iso(alg, em) is not None
    return Verdict(ok, 1, None if ok else {"algebras": len(alg.structures), "em": len(em.structures)})


# ---------------------------------------------------------------------------
# procomonad claims

_PER_P: WeakKeyDictionary = WeakKeyDictionary()


def _memo(P: Procomonad) -> dict:
    m = _PER_P.get(P)
    if m is None:
        m = _PER_P[P] = {"coherence": {}}
    return m


def _algebras(P: Procomonad):
    m = _memo(P)
    if "algebras" not in m:
        m["algebras"] = build_gamma_algebras(P)
    return m["algebras"]


def _bar(P: Procomonad) -> BarComonad:
    m = _memo(P)
    if "bar" not in m:
        m["bar"] = BarComonad(P)
    return m["bar"]


def _coherence(P: Procomonad, cell) -> dict:
    cache = _memo(P)["coherence"]
    if cell not in cache:
        cache[cell] = fusion_coherence(P, *cell, bar=_bar(P))
    return cache[cell]


def restriction_functors(C: FinCategory) -> list[Functor]:
    """Full inclusions of two-element subsets, points, and a non-full functor from two discrete points."""
    out = []
    n = C.n_obj
    for i in range(n):
        out.append(constant_functor(FinCategory.terminal(), C, i))
        for j in range(i + 1, n):
            out.append(subcategory_inclusion(C, [i, j], name=f"{{{C.objects[i]},{C.objects[j]}}}"))
    if n >= 2:
        D = FinCategory.discrete(["p", "q"], name="2")
        out.append(Functor.from_object_map(D, C, [0, n - 1], name="ends"))
    return out


def check_pullback(P: Procomonad) -> Verdict:
    alg = _algebras(P)

    def test(W):
        r = gamma_pullback(W, P, alg)
        return r.holds, {"W": W.name, "rho_bijective": r.rho_bijective}
    return _first_failure(restriction_functors(P.C), test, lambda W: {"W": W.name})


def power_exponents() -> list[FinCategory]:
    return [FinCategory.from_poset(["p", "q"], [("p", "q")], name="2"), FinCategory.discrete(["p", "q"], name="1+1")]


def check_power(P: Procomonad) -> Verdict:
    alg = _algebras(P)
    return _first_failure(power_exponents(), lambda A: (gamma_power(A, P, alg).holds, {}), lambda A: {"A": A.name})


def _cells(P: Procomonad):
    alg = _algebras(P)
    n = P.C.n_obj
    return [(x, ya, z) for ya in alg.structures for x in range(n) for z in range(n)]


def check_fusion_presheaf(P: Procomonad) -> Verdict:
    return _first_failure(_cells(P), lambda c: (_coherence(P, c)["coend_eq_presheaf"], {}), _xyz(P))


def check_fusion_cloaked(P: Procomonad) -> Verdict:
    def test(c):
        r = _coherence(P, c)
        if not r["cloaked"]:
            return True, {}
        return r["iso_bijective"] and r["coend_eq_cloaked"], r
    return _first_failure(_cells(P), test, _xyz(P))


def check_bar_hopf(P: Procomonad) -> Verdict:
    alg = _algebras(P)
    tests = presheaf_test_set(P.C)

    def test(ya):
        r = lemma_bar_hopf(P, ya, tests, bar=_bar(P))
        return r["consistent"], {"hopf": r["hopf"], "bar_hopf": r["bar_hopf"]}
    v = _first_failure(alg.structures, test, lambda ya: {"Y": _alg(P, ya)})
    v.details["test_presheaves"] = len(tests)
    return v


def check_theorem(P: Procomonad) -> Verdict:
    alg = _algebras(P)
    verdicts = {}

    def test(ya):
        r = omega_and_theorem(P, ya, alg)
        verdicts[_alg(P, ya)] = {"hopf": r.hopf, "creates": r.creates}
        return bool(r.consistent), {"hopf": r.hopf, "creates": r.creates}
    v = _first_failure(alg.structures, test, lambda ya: {"Y": _alg(P, ya)})
    v.details["per_algebra"] = verdicts
    return v


def check_presheaf_cloaks(CM: MagmalCategory) -> Verdict:
    C = CM.base
    n = C.n_obj

    def test(c):
        y, z = c
        day_yoneda_check(CM, y, z)
        return representable_cloak_iso(CM, y, z), {}
    v = _first_failure(_pairs(n, n), test, lambda c: {"Y": C.objects[c[0]], "Z": C.objects[c[1]]})
    if v.holds:
        tests = presheaf_test_set(C, max_total=6, max_count=6)
        pc = presheaf_cloak(CM, tests[2 % len(tests)], tests[-1])
        bad = cloak_universal_check(pc, tests)
        if bad:
            return Verdict(False, v.cells, bad[0])
    return v


# ---------------------------------------------------------------------------
# monad morphism claims

def check_a1(m: MonadMorphism) -> Verdict:
    r = doctrinal_mnd(m)
    return Verdict(r.holds, 1, None if r.holds else r.detail, {"left_adjoint": r.lhs, **r.detail})


def check_a2(m: MonadMorphism) -> Verdict:
    m = m if m.kind == "morphism" else m.op()
    f, _, _ = em_pseudofunctor(m)
    r = doctrinal_fun(f)
    return Verdict(r.holds, 1, None if r.holds else r.detail, {"left_adjoint": r.lhs, **r.detail})


def check_a3(m: MonadMorphism) -> Verdict:
    m = m if m.kind == "morphism" else m.op()
    rt = roundtrip_from_morphism(m)
    if not rt.holds:
        return Verdict(False, 1, {"from": "morphism", **rt.__dict__})
    func = em_functoriality(identity_morphism(m.tgt), m) and em_functoriality(m, identity_morphism(m.src))
    if not func:
        return Verdict(False, 1, {"from": "composite"})
    _, ems, emt = em_pseudofunctor(m)
    n = 1
    for sq in strong_squares(ems, emt, m.u):
        n += 1
        r = roundtrip_from_square(sq, ems, emt)
        if not (r.iso and r.remark):
            return Verdict(False, n, {"from": "square", "ubar": list(sq.ubar.obj_map)})
    return Verdict(True, n)


def check_a4(m: MonadMorphism) -> Verdict:
    m = m if m.kind == "morphism" else m.op()
    r = lifting_a4(m)
    return Verdict(r.holds, 1, None if r.holds else {"mnd": r.lhs, "fun": r.rhs}, {"left_adjoint": r.lhs})


def check_a5(m: MonadMorphism) -> Verdict:
    m = m if m.kind == "morphism" else m.op()
    try:
        r = lifting_a5(m)
    except HypothesisUnsatisfied as e:
        return Verdict(None, 0, None, {"hypothesis": e.hypothesis})
    return Verdict(r.holds, 1, None if r.holds else r.detail, r.detail)


# ---------------------------------------------------------------------------
# lifting claims

def _bundle_tests(b):
    return test_profunctors(b.B.dom, b.B.cod)


def check_b1(b) -> Verdict:
    r = rif_cancel_check(b.S, b.U, b.C, tests=test_profunctors(b.C.dom, b.S.dom))
    return Verdict(r.holds, 1, None if r.holds else r.__dict__)


def check_b2(b) -> Verdict:
    try:
        r = rif_with_unit_check(b.S, unit_into_coproduct(b.N), b.B, b.K, _bundle_tests(b))
    except HypothesisUnsatisfied as e:
        return Verdict(None, 0, None, {"hypothesis": e.hypothesis})
    return Verdict(r.holds, 3, None if r.holds else r.__dict__, {"respects": r.respects_b})


def check_b3(b) -> Verdict:
    try:
        r = rif_via_codensity_check(b.S, b.U, b.B, b.K, _bundle_tests(b))
    except HypothesisUnsatisfied as e:
        return Verdict(None, 0, None, {"hypothesis": e.hypothesis})
    return Verdict(r.holds, 1, None if r.holds else r.__dict__, {"respects": r.respects_b})


def check_dubuc(d: DubucPair) -> Verdict:
    try:
        r = dubuc_check(d.S, d.U)
    except HypothesisUnsatisfied as e:
        return Verdict(None, 0, None, {"hypothesis": e.hypothesis})
    if r.verdict == "equalizer-not-found":
        return Verdict(None, 1, None, {"verdict": r.verdict})
    ok = r.verdict == "holds"
    return Verdict(ok, 1, None if ok else r.__dict__, {"verdict": r.verdict, "right_adjoint": r.lhs})


# ---------------------------------------------------------------------------
# registry

CLAIMS: dict[str, Claim] = {c.id: c for c in (
    Claim("L2.4", "em", "cloaks among coalgebras come from the equalizer of the transported pair", "comonad",
          check_equalizer_cloaks),
    Claim("L2.5", "em", "the cofree coalgebra on [Y,Z] is the cloak of a cofree coalgebra", "comonad",
          check_cofree_cloaks),
    Claim("P3.3", "fusion", "cofree coalgebras decide the Hopf property", "comonad", check_cofree_suffice),
    Claim("L3.5", "fusion", "the equalizer pair is isomorphic to the fusion pair", "comonad",
          check_transported_pair),
    Claim("L3.8", "fusion", "creation of [Y,GZ] iff invertible fusion", "comonad", check_restricted_creation),
    Claim("P3.9", "fusion", "Hopf at (Y,υ) iff und creates all cloaks by (Y,υ)", "comonad", check_creates_all),
    Claim("P4.2", "fusion", "T-fusion invertible for all X iff Wood fusion invertible for all Z", "monad",
          check_adjoint_transfer),
    Claim("EX4", "fusion", "a finite monoid is Hopf iff it is a group", "monoid", check_monoid_hopf),
    Claim("EX5.3", "procomonad", "algebras of T^* and G_* are the Eilenberg-Moore categories", "operator",
          check_em_iso),
    Claim("P5.4", "procomonad", "algebras of the restricted procomonad form the pullback", "procomonad",
          check_pullback),
    Claim("P5.5", "procomonad", "algebras of the power procomonad are functors into the algebras", "procomonad",
          check_power),
    Claim("P5.6", "prof", "presheaves are cloakal; representable cloaks and Day products", "magmal",
          check_presheaf_cloaks),
    Claim("P5.8", "procomonad", "coend fusion agrees with the presheaf route", "procomonad",
          check_fusion_presheaf),
    Claim("C5.9", "procomonad", "coend fusion agrees with cloaked fusion", "procomonad", check_fusion_cloaked),
    Claim("L5.11", "procomonad", "Hopf at (Y,υ) iff the barred comonad is Hopf at yo Y", "procomonad",
          check_bar_hopf),
    Claim("T5.12", "procomonad", "Hopf at (Y,υ) iff und creates all cloaks by (Y,υ)", "procomonad",
          check_theorem),
    Claim("A1", "mnd", "left adjoints in Mnd", "monad-morphism", check_a1),
    Claim("A2", "mnd", "left adjoints in Fun are strong", "monad-morphism", check_a2),
    Claim("A3", "mnd", "EM is locally an equivalence", "monad-morphism", check_a3),
    Claim("A4", "mnd", "left adjoints lift to EM", "monad-morphism", check_a4),
    Claim("A5", "mnd", "right adjoints lift to EM when φ is invertible", "monad-morphism", check_a5),
    Claim("B1", "liftings", "right liftings cancel along composites", "bundle", check_b1),
    Claim("B2", "liftings", "right liftings as equalizers through a unit", "bundle", check_b2),
    Claim("B3", "liftings", "right liftings via the codensity profunctor", "bundle", check_b3),
    Claim("DUBUC", "liftings", "adjoint triangle in finite categories", "dubuc", check_dubuc),
)}


# ---------------------------------------------------------------------------
# expanding an input into the instances a claim consumes

def instance_kind(obj) -> str:
    if isinstance(obj, MagmalComonad):
        return "comonad"
    if isinstance(obj, OpmagmalMonad):
        return "monad"
    if isinstance(obj, MagmalCategory):
        return "magmal"
    if isinstance(obj, FiniteMonoid):
        return "monoid"
    if isinstance(obj, Procomonad):
        return "procomonad"
    if isinstance(obj, MonadMorphism):
        return "monad-morphism"
    if isinstance(obj, Bundle):
        return "bundle"
    if isinstance(obj, DubucPair):
        return "dubuc"
    return type(obj).__name__


def _endomorphisms(m: MonadObject) -> list[MonadMorphism]:
    return list(all_morphisms(m, m))


def expand(claim: Claim, obj, name: str) -> list[tuple[str, object]]:
    """The (instance name, instance) cells a claim runs over for an input object."""
    have = instance_kind(obj)
    want = claim.kind
    if want == have:
        return [(name, obj)]
    if want == "operator" and have in ("comonad", "monad"):
        return [(name, obj)]
    if have == "magmal":
        thin = obj.base.is_thin()
        if want == "comonad":
            ops = interior_operators(obj) if thin else [MagmalComonad.identity(obj)]
            return [(f"{name}/{G.name}", G) for G in ops]
        if want == "monad":
            ops = closure_operators(obj) if thin else [OpmagmalMonad.identity(obj)]
            return [(f"{name}/{T.name}", T) for T in ops]
        if want == "operator":
            return expand(CLAIMS["L2.4"], obj, name) + expand(CLAIMS["P4.2"], obj, name)
        if want == "procomonad":
            out = [(f"{name}/hom", gamma_hom(obj))]
            return out + [(f"{n}_*", gamma_from(G)) for n, G in expand(CLAIMS["L2.4"], obj, name)]
    if have in ("comonad", "monad"):
        if want == "procomonad":
            return [(f"{name}_*" if have == "comonad" else f"{name}^*", gamma_from(obj))]
        if want == "magmal":
            return [(name, obj.C)]
        if want == "monad-morphism":
            m = MonadObject.from_opmagmal(obj) if have == "monad" else MonadObject.from_magmal_comonad(obj).op()
            return [(f"{name}/{k}", mm) for k, mm in enumerate(_endomorphisms(m))]
        if want == "dubuc" and have == "comonad":
            em = build_em(obj)
            U = em.und.functor
            return [(f"{name}/id,und", DubucPair(identity_functor(U.dom), U, name))]
    if have == "procomonad" and want == "magmal" and obj.magmal:
        return [(name, obj.CM)]
    return []


def run_check(claim_id: str, inst) -> Verdict:
    try:
        return CLAIMS[claim_id].check(inst)
    except HypothesisUnsatisfied as e:
        return Verdict(None, 0, None, {"hypothesis": e.hypothesis})
    except CloakforgeError as e:
        return Verdict(False, 0, f"{type(e).__name__}: {e}")


def uses_enumeration(claim_id: str, obj) -> bool:
    """Operators came from the monotone-map enumeration of a thin base rather than from the input."""
    return (instance_kind(obj) == "magmal" and obj.base.is_thin()
            and CLAIMS[claim_id].kind in ("comonad", "monad", "operator", "procomonad"))


def verify(claim_id: str, obj, name: str) -> list[tuple[str, Verdict]]:
    return [(n, run_check(claim_id, inst)) for n, inst in expand(CLAIMS[claim_id], obj, name)]
