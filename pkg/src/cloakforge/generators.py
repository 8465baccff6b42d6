"""Instance generators: small Heyting lattices and their operators, monoids,
monad-morphism suites and profunctor bundles."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import HypothesisUnsatisfied
from .fincat import (FinCategory, Functor, all_functors, find_right_adjoint,
                     is_fully_faithful, iter_nat_trans)
from .fusion import FiniteMonoid, all_monoids
from .liftings import DubucPair, rif_via_codensity_check, rif_with_unit_check
from .magmal import MagmalCategory, MagmalComonad, OpmagmalMonad, meet_semilattice
from .mnd import MonadMorphism, MonadObject, cell_shape, check_cell
from .prof import (ModMorphism, constant_prof, hom_prof, lower_star, prof_coproduct, test_profunctors,
                   upper_star)

# ---------------------------------------------------------------------------
# lattices


def _is_lattice(n: int, le) -> bool:
    for a in range(n):
        for b in range(n):
            for rel in (lambda c, d: le[c][d], lambda c, d: le[d][c]):
                lower = [c for c in range(n) if rel(c, a) and rel(c, b)]
                if sum(all(rel(d, c) for d in lower) for c in lower) != 1:
                    return False
    return True


def _meet_join(n: int, le):
    meet, join = {}, {}
    for a in range(n):
        for b in range(n):
            lo = [c for c in range(n) if le[c][a] and le[c][b]]
            hi = [c for c in range(n) if le[a][c] and le[b][c]]
            meet[(a, b)] = next(c for c in lo if all(le[d][c] for d in lo))
            join[(a, b)] = next(c for c in hi if all(le[c][d] for d in hi))
    return meet, join


def _is_distributive(n: int, le) -> bool:
    meet, join = _meet_join(n, le)
    return all(meet[(a, join[(b, c)])] == join[(meet[(a, b)], meet[(a, c)])]
               for a in range(n) for b in range(n) for c in range(n))


def _canonical(n: int, le) -> tuple:
    best = None
    for p in itertools.permutations(range(n)):
        key = tuple(le[p[i]][p[j]] for i in range(n) for j in range(n))
        if best is None or key > best:
            best = key
    return best


def _names(n: int, le) -> list[str]:
    """Bottom "0", top "1", a single middle element "m", otherwise a, b, c."""
    if n == 1:
        return ["0"]
    middle = list(range(1, n - 1))
    if len(middle) == 1:
        return ["0", "m", "1"]
    return ["0"] + [chr(ord("a") + i) for i in range(len(middle))] + ["1"]


@lru_cache(maxsize=None)
def _lattice_orders(n: int, distributive: bool) -> tuple:
    """Lattice orders on range(n) with i ≤ j only if i ≤ j as integers, up to iso."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen, out = set(), []
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        le = [[i == j for j in range(n)] for i in range(n)]
        for (i, j), b in zip(pairs, bits):
            le[i][j] = bool(b)
        if any(le[i][j] and le[j][k] and not le[i][k] for i in range(n) for j in range(n) for k in range(n)):
            continue
        if not all(le[0][j] and le[j][n - 1] for j in range(n)):
            continue
        if not _is_lattice(n, le):
            continue
        if distributive and not _is_distributive(n, le):
            continue
        key = _canonical(n, le)
        if key in seen:
            continue
        seen.add(key)
        out.append(tuple(tuple(r) for r in le))
    # chains first, then by number of comparable pairs (descending)
    out.sort(key=lambda le: -sum(map(sum, le)))
    return tuple(out)


def _lattice_name(n: int, le, k: int) -> str:
    if sum(map(sum, le)) == n * (n + 1) // 2:
        return f"chain{n}"
    if n == 4:
        return "diamond"
    return f"heyting{n}_{k}"


def heyting_lattices(max_n: int = 5) -> list[MagmalCategory]:
    """Every Heyting lattice (finite distributive) with at most max_n elements, up to iso."""
    out = []
    for n in range(1, max_n + 1):
        for k, le in enumerate(_lattice_orders(n, True)):
            out.append(_lattice(n, le, _lattice_name(n, le, k)))
    return out


def _lattice(n: int, le, name: str) -> MagmalCategory:
    names = _names(n, le)
    leq = [(names[i], names[j]) for i in range(n) for j in range(n) if i != j and le[i][j]]
    return meet_semilattice(names, leq, name=name)


def heyting_chain(n: int) -> MagmalCategory:
    le = tuple(tuple(i <= j for j in range(n)) for i in range(n))
    return _lattice(n, le, f"chain{n}")


def chain3() -> MagmalCategory:
    return heyting_chain(3)


def diamond() -> MagmalCategory:
    return meet_semilattice(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")], name="diamond")


# ---------------------------------------------------------------------------
# operators on thin categories

def _monotone_maps(P: FinCategory, cands):
    n = P.n_obj
    for img in itertools.product(*[cands(x) for x in range(n)]):
        if all(P.leq(img[a], img[b]) for a in range(n) for b in range(n) if P.leq(a, b)):
            yield img


def interior_maps(P: FinCategory) -> list[tuple]:
    """Monotone, deflationary, idempotent maps in object-id order."""
    out = []
    for img in _monotone_maps(P, lambda x: [y for y in P.obj_ids() if P.leq(y, x)]):
        if all(img[img[x]] == img[x] for x in P.obj_ids()):
            out.append(img)
    return out


def closure_maps(P: FinCategory) -> list[tuple]:
    return interior_maps(P.op())


def operator_name(C: MagmalCategory, img, prefix: str) -> str:
    special = {("chain3", "g", (0, 0, 2)): "g_drop_m", ("diamond", "g", (0, 1, 0, 1)): "g_meet_a",
               ("chain3", "t", (0, 2, 2)): "t"}
    key = (C.name, prefix, tuple(img))
    if key in special:
        return special[key]
    B = C.base
    return f"{prefix}({','.join(B.objects[i] for i in img)})"


def is_lax(C: MagmalCategory, img) -> bool:
    """gX⊗gY ≤ g(X⊗Y): the only way an endomap of a thin magmal category carries magmal structure."""
    B = C.base
    return all(B.leq(C.t(img[x], img[y]), img[C.t(x, y)]) for x in B.obj_ids() for y in B.obj_ids())


def interior_operators(C: MagmalCategory) -> list[MagmalComonad]:
    """Interior operators that are magmal comonads for the tensor of ``C``."""
    return [MagmalComonad.thin(C, img, name=operator_name(C, img, "g"))
            for img in interior_maps(C.base) if is_lax(C, img)]


def closure_operators(C: MagmalCategory) -> list[OpmagmalMonad]:
    return [OpmagmalMonad.thin(C, img, name=operator_name(C, img, "t")) for img in closure_maps(C.base)]


def g_drop_m() -> MagmalComonad:
    return MagmalComonad.thin(chain3(), (0, 0, 2), name="g_drop_m")


def g_meet_a() -> MagmalComonad:
    return MagmalComonad.thin(diamond(), (0, 1, 0, 1), name="g_meet_a")


def closure_t() -> OpmagmalMonad:
    return OpmagmalMonad.thin(chain3(), (0, 2, 2), name="t")


def heyting_grid(max_n: int = 5) -> list[tuple[MagmalCategory, MagmalComonad]]:
    return [(C, G) for C in heyting_lattices(max_n) for G in interior_operators(C)]


def monad_grid(max_n: int = 5) -> list[tuple[MagmalCategory, OpmagmalMonad]]:
    return [(C, T) for C in heyting_lattices(max_n) for T in closure_operators(C)]


def adjoint_pairs(C: MagmalCategory) -> list[tuple]:
    """Closure operators T with a right adjoint G (necessarily an interior operator)."""
    out = []
    for T in closure_operators(C):
        adj = find_right_adjoint(T.functor)
        if adj is not None:
            out.append((T, adj))
    return out


def adjoint_grid(max_n: int = 5) -> list[tuple]:
    return [(C, T, adj) for C in heyting_lattices(max_n) for T, adj in adjoint_pairs(C)]


# ---------------------------------------------------------------------------
# monoids

def monoids_upto(n: int) -> list[FiniteMonoid]:
    return [H for k in range(1, n + 1) for H in all_monoids(k)]


def cyclic_group(n: int) -> FiniteMonoid:
    return FiniteMonoid.cyclic_group(n)


# ---------------------------------------------------------------------------
# small posets and categories

def poset(name: str) -> FinCategory:
    table = {
        "chain1": (["0"], []),
        "chain2": (["0", "1"], [("0", "1")]),
        "chain3": (["0", "m", "1"], [("0", "m"), ("m", "1")]),
        "V": (["0", "a", "b"], [("0", "a"), ("0", "b")]),
        "Λ": (["a", "b", "1"], [("a", "1"), ("b", "1")]),
        "diamond": (["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]),
        "discrete2": (["p", "q"], []),
    }
    els, leq = table[name]
    return FinCategory.from_poset(els, leq, name=name)


def codiscrete(n: int = 2) -> FinCategory:
    """The indiscrete category on n objects: exactly one arrow between any two."""
    objs = [f"p{i}" for i in range(n)]
    morphisms = [(f"{i}{j}", i, j) for i in range(n) for j in range(n)]
    idx = {(i, j): i * n + j for i in range(n) for j in range(n)}
    identity = [idx[(i, i)] for i in range(n)]
    table = {(idx[(j, k)], idx[(i, j)]): idx[(i, k)] for i in range(n) for j in range(n) for k in range(n)}
    return FinCategory(objs, morphisms, identity, table, name=f"codiscrete{n}")


# ---------------------------------------------------------------------------
# monad morphism suite

def thin_monads(P: FinCategory) -> list[MonadObject]:
    """Identity plus every closure operator on a thin category."""
    out = [MonadObject.identity(P)]
    for img in closure_maps(P):
        if list(img) != list(P.obj_ids()):
            out.append(MonadObject.thin(P, img, name=f"t({','.join(P.objects[i] for i in img)})"))
    return out


def all_morphisms(src: MonadObject, tgt: MonadObject):
    for u in all_functors(src.A, tgt.A):
        d, c = cell_shape("morphism", src, tgt, u)
        for phi in iter_nat_trans(d, c):
            if not check_cell("morphism", src, tgt, u, phi):
                yield MonadMorphism(src, tgt, u, phi, "morphism", f"{src.name}→{tgt.name} u={tuple(u.obj_map)}")


def mnd_suite(limit: int = 40) -> list[MonadMorphism]:
    """A deterministic suite of monad morphisms between small thin categories."""
    cats = [poset("chain2"), poset("chain3"), poset("V"), codiscrete(2)]
    monads = [m for P in cats for m in thin_monads(P)]
    out = []
    for src in monads:
        for tgt in monads:
            if src.A.n_obj * tgt.A.n_obj > 9:
                continue
            for m in all_morphisms(src, tgt):
                out.append(m)
    # spread the picks over the whole enumeration
    if len(out) <= limit:
        return out
    step = len(out) / limit
    return [out[int(i * step)] for i in range(limit)]


# ---------------------------------------------------------------------------
# profunctor bundles

@dataclass
class Bundle:
    name: str
    S: object          # A ↛ B
    U: object          # B ↛ C
    C: object          # K ↛ C  (target for cancellation)
    B: object          # K ↛ B
    K: object          # K' ↛ K
    N: object          # B ↛ B, giving M = hom ⊔ N


def codensity_functors() -> list[Functor]:
    """Functors whose lower star has a non-iso codensity unit satisfying the mono hypotheses."""
    V = poset("V")
    out = []
    for tgt, img in (("chain2", (0, 1, 1)), ("chain3", (0, 1, 1)), ("chain3", (0, 1, 2))):
        out.append(Functor.from_object_map(V, poset(tgt), img, name=f"V→{tgt}{img}"))
    return out


def _bundle_groups():
    groups = []
    for F in codensity_functors():
        Bc, Cc = F.dom, F.cod
        U = lower_star(F)
        N = prof_coproduct(constant_prof(Bc, Bc, ((),), name="1"), hom_prof(Bc))
        for A in (poset("chain1"), poset("chain2"), poset("V")):
            Ss = [lower_star(G) for G in all_functors(A, Bc)] + [upper_star(H) for H in all_functors(Bc, A)]
            Bs = [lower_star(G) for G in all_functors(A, Bc)]
            Cs = [lower_star(G) for G in all_functors(A, Cc)]
            Ks = ([hom_prof(A), constant_prof(A, A, ((),), name="1"), constant_prof(A, A, ((0,), (1,)), name="2")]
                  + [upper_star(G) for G in all_functors(A, A)] + [lower_star(G) for G in all_functors(A, A)])
            group = []
            for i, S in enumerate(Ss):
                B = Bs[(3 * i + 1) % len(Bs)]
                Cp = Cs[(5 * i + 2) % len(Cs)]
                K = Ks[i % len(Ks)]
                group.append(Bundle(f"{F.name}|{A.name}|{i}", S, U, Cp, B, K, N))
            groups.append(group)
    return groups


def bundle_is_admissible(b: Bundle) -> bool:
    """Every hypothesis of both equalizer descriptions is met."""
    tests = test_profunctors(b.B.dom, b.B.cod)
    try:
        rif_with_unit_check(b.S, unit_into_coproduct(b.N), b.B, b.K, tests)
        rif_via_codensity_check(b.S, b.U, b.B, b.K, tests)
    except HypothesisUnsatisfied:
        return False
    return True


def unit_into_coproduct(N):
    """η: hom ⇒ hom ⊔ N, the coproduct injection."""
    H = hom_prof(N.dom)
    M = prof_coproduct(H, N)
    return ModMorphism.from_fn(H, M, lambda b, a, x: (0, x), name="η", check=True)


@lru_cache(maxsize=None)
def bundle_suite(limit: int = 24) -> tuple:
    """Admissible bundles, taken round-robin over the (U, A) groups."""
    groups = _bundle_groups()
    out = []
    for i in range(max(len(g) for g in groups)):
        for g in groups:
            if i < len(g) and bundle_is_admissible(g[i]):
                out.append(g[i])
                if len(out) >= limit:
                    return tuple(out)
    return tuple(out)


def dubuc_suite() -> list[DubucPair]:
    """Pairs (S, U) with U fully faithful and having a right adjoint."""
    out = []
    for bname in ("chain3", "diamond", "V"):
        Bc = poset(bname)
        for cname in ("chain3", "diamond"):
            Cc = poset(cname)
            for U in all_functors(Bc, Cc):
                if not is_fully_faithful(U) or find_right_adjoint(U) is None:
                    continue
                for aname in ("chain2", "V"):
                    for k, S in enumerate(all_functors(poset(aname), Bc)):
                        out.append(DubucPair(S, U, f"{aname}→{bname}→{cname}#{len(out)}"))
    return out
