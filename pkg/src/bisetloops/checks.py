"""Random instance generators and the property checks shared by the test suite and ``verify``.

Each ``check_*`` function draws one random instance from ``rng`` (a
:class:`random.Random`) or runs an exhaustive sweep, and returns ``True``
when the identity holds exactly.
"""

from __future__ import annotations

import math
import random
from typing import Callable, Sequence

import numpy as np

from .bisets import VirtualBiset, canonical_key, compose, compose_oracle, transfer_biset
from .groups import FiniteGroup, Subgroup, all_subgroups, make_catalog_group
from .loops import (
    ev_matrix,
    iteration_embedding,
    kept_classes,
    loop_morphism,
    pev_matrix,
    projection_matrix,
    sigma_matrix,
    torus_extend,
    torus_times,
)
from .matrices import BisetMatrix
from .tuples import classify_tuples, commuting_tuples, zeta_biset
from .twist import ev_preimage, k_exponents, twist_morphism, untwist_morphism

CATALOG = ("C2", "C3", "C4", "C2xC2", "S3", "D8")


def catalog_groups(names: Sequence[str] = CATALOG) -> list[FiniteGroup]:
    return [make_catalog_group(n) for n in names]


def shared_modulus(*groups: FiniteGroup) -> int:
    return math.lcm(*[G.exponent() for G in groups])


# -- random generators -------------------------------------------------------------


def all_homs(R: FiniteGroup, H: FiniteGroup) -> list[np.ndarray]:
    """Every homomorphism ``R -> H`` as an image array, by extending generator images."""
    memo = R.cache("homs")
    if H in memo:
        return memo[H]
    gens = R.generators()
    # words reaching each element from the generators
    words: dict[int, tuple[int, int]] = {0: (-1, -1)}
    order = [0]
    for x in order:
        for gi, g in enumerate(gens):
            y = R.mul(x, g)
            if y not in words:
                words[y] = (x, gi)
                order.append(y)
    out = []
    choices = [range(H.order)] * len(gens)
    import itertools

    for imgs in itertools.product(*choices):
        im = np.zeros(R.order, dtype=np.int64)
        for y in order[1:]:
            x, gi = words[y]
            im[y] = H.mul(int(im[x]), imgs[gi])
        if np.array_equal(im[R.table], H.table[im[:, None], im[None, :]]):
            out.append(im)
    memo[H] = out
    return out


def random_key(rng: random.Random, G: FiniteGroup, H: FiniteGroup, surjective: bool = False):
    """A random basis element; with ``surjective`` only pairs whose hom maps onto ``H``.

    Returns ``None`` when no subgroup of ``G`` maps onto ``H``.
    """
    pairs = [(R, h) for R in all_subgroups(G) for h in all_homs(R.group(), H)] if surjective else None
    if surjective:
        pairs = [(R, h) for R, h in pairs if np.unique(h).size == H.order]
        if not pairs:
            return None
        R, h = rng.choice(pairs)
        return canonical_key(G, H, R.array, h)
    R = rng.choice(all_subgroups(G))
    return canonical_key(G, H, R.array, rng.choice(all_homs(R.group(), H)))


def random_biset(rng: random.Random, G: FiniteGroup, H: FiniteGroup, max_terms: int = 3, bound: int = 2) -> VirtualBiset:
    """Up to ``max_terms`` basis terms with coefficients in ``[-bound, bound]``."""
    out = VirtualBiset.zero(G, H)
    for _ in range(rng.randint(1, max_terms)):
        out = out + rng.randint(-bound, bound) * VirtualBiset.basis(random_key(rng, G, H))
    return out


def random_hom(rng: random.Random, G: FiniteGroup, H: FiniteGroup) -> np.ndarray:
    return rng.choice(all_homs(G, H))


# -- functoriality and theorem properties ----------------------------------------------


def check_functoriality(rng: random.Random, n: int, groups: Sequence[FiniteGroup] | None = None) -> bool:
    groups = groups or catalog_groups()
    G, H, K = (rng.choice(groups) for _ in range(3))
    ell = shared_modulus(G, H, K)
    X, Y = random_biset(rng, G, H), random_biset(rng, H, K)
    return twist_morphism(compose(X, Y), n, ell) == twist_morphism(X, n, ell) @ twist_morphism(Y, n, ell)


def check_loop_functoriality(rng: random.Random, n: int, groups: Sequence[FiniteGroup] | None = None) -> bool:
    groups = groups or catalog_groups()
    G, H, K = (rng.choice(groups) for _ in range(3))
    X, Y = random_biset(rng, G, H), random_biset(rng, H, K)
    return loop_morphism(compose(X, Y), n) == loop_morphism(X, n) @ loop_morphism(Y, n)


def check_zero_arity(rng: random.Random, groups=None) -> bool:
    groups = groups or catalog_groups()
    G, H = rng.choice(groups), rng.choice(groups)
    X = random_biset(rng, G, H)
    L = twist_morphism(X, 0, shared_modulus(G, H))
    return L.shape == (1, 1) and L[0, 0] == X


def check_induced(rng: random.Random, n: int, groups=None) -> bool:
    groups = groups or catalog_groups()
    G, H = rng.choice(groups), rng.choice(groups)
    ell = shared_modulus(G, H)
    im = random_hom(rng, G, H)
    X = VirtualBiset.basis(canonical_key(G, H, np.arange(G.order), im))
    return twist_morphism(X, n, ell) == torus_extend(loop_morphism(X, n), n, ell)


def check_ev_naturality(rng: random.Random, n: int, groups=None) -> bool:
    groups = groups or catalog_groups()
    G, H = rng.choice(groups), rng.choice(groups)
    ell = shared_modulus(G, H)
    X = random_biset(rng, G, H)
    lhs = twist_morphism(X, n, ell) @ ev_matrix(H, n, ell)
    rhs = ev_matrix(G, n, ell) @ BisetMatrix.from_biset(X)
    return lhs == rhs


def check_sigma(rng: random.Random, n: int = 2, groups=None) -> bool:
    groups = groups or catalog_groups()
    G, H = rng.choice(groups), rng.choice(groups)
    ell = shared_modulus(G, H)
    X = random_biset(rng, G, H)
    sigma = list(range(n))
    rng.shuffle(sigma)
    L = twist_morphism(X, n, ell)
    return sigma_matrix(G, n, sigma, ell) @ L == L @ sigma_matrix(H, n, sigma, ell)


def check_pev(rng: random.Random, n: int, groups=None) -> bool:
    groups = groups or catalog_groups()
    G, H = rng.choice(groups), rng.choice(groups)
    ell = shared_modulus(G, H)
    X = random_biset(rng, G, H)
    lhs = twist_morphism(X, n + 1, ell) @ pev_matrix(H, n, ell)
    rhs = pev_matrix(G, n, ell) @ twist_morphism(X, n, ell)
    return lhs == rhs


def check_iteration(rng: random.Random, n: int = 1, m: int = 1, groups=None) -> bool:
    groups = groups or catalog_groups()
    G, H = rng.choice(groups), rng.choice(groups)
    ell = shared_modulus(G, H)
    X = random_biset(rng, G, H)
    lhs = iteration_embedding(G, n, m, ell) @ twist_morphism(twist_morphism(X, n, ell), m, ell)
    rhs = twist_morphism(X, n + m, ell) @ iteration_embedding(H, n, m, ell)
    return lhs == rhs


def check_untwist(rng: random.Random, n: int, groups=None) -> bool:
    groups = groups or catalog_groups()
    G, H = rng.choice(groups), rng.choice(groups)
    ell = shared_modulus(G, H)
    X = random_biset(rng, G, H)
    return untwist_morphism(X, n, ell) == torus_extend(loop_morphism(X, n), n, ell)


# -- oracle agreements ---------------------------------------------------------------------


def basis_keys(G: FiniteGroup, H: FiniteGroup) -> list:
    """Every canonical basis element from ``G`` to ``H``."""
    keys = set()
    for R in all_subgroups(G):
        for im in all_homs(R.group(), H):
            keys.add(canonical_key(G, H, R.array, im))
    return sorted(keys, key=lambda k: k.sort_key())


def check_fixed_vs_orbit(G: FiniteGroup, H: FiniteGroup, n: int) -> bool:
    for key in basis_keys(G, H):
        X = VirtualBiset.basis(key)
        if loop_morphism(X, n, "fixed") != loop_morphism(X, n, "orbit"):
            return False
    return True


def check_surjective_case(rng: random.Random, groups=None) -> bool:
    """``[R, phi] . [T, psi] = [phi^-1(T), psi . phi]`` when ``phi`` maps onto the middle group."""
    groups = groups or catalog_groups()
    kx = None
    while kx is None:
        G, H, K = (rng.choice(groups) for _ in range(3))
        kx = random_key(rng, G, H, surjective=True)
    ky = random_key(rng, H, K)
    phi = kx.phi()
    R = np.asarray(kx.members)
    mask = np.zeros(H.order, dtype=bool)
    mask[list(ky.members)] = True
    inside = R[mask[phi[R]]]
    expected = VirtualBiset.basis(canonical_key(G, K, inside, ky.phi()[phi[inside]]))
    X, Y = VirtualBiset.basis(kx), VirtualBiset.basis(ky)
    return compose(X, Y) == expected and compose_oracle(X, Y) == expected


def check_compose_oracle(rng: random.Random, groups=None) -> bool:
    groups = groups or catalog_groups()
    G, H, K = (rng.choice(groups) for _ in range(3))
    X, Y = random_biset(rng, G, H), random_biset(rng, H, K)
    return compose(X, Y) == compose_oracle(X, Y)


# -- structural invariants -----------------------------------------------------------------


def check_prefix_closure(G: FiniteGroup, n_max: int = 3) -> bool:
    for n in range(1, n_max + 1):
        prev = set(classify_tuples(G, n - 1).reps)
        if any(r[:-1] not in prev for r in classify_tuples(G, n).reps):
            return False
    return True


def check_classification(G: FiniteGroup, n: int) -> bool:
    """Every commuting tuple is conjugate to exactly its located rep, and reps are lex-least."""
    table = classify_tuples(G, n)
    seen = [[] for _ in table.reps]
    for tup in commuting_tuples(G, n):
        i, g = table.locate(tup)
        if tuple(G.conj(g, x) for x in tup) != table.reps[i]:
            return False
        seen[i].append(tup)
    return all(min(s) == r and len(s) == table.class_size(i) for i, (s, r) in enumerate(zip(seen, table.reps)))


def check_zeta_cocycle(rng: random.Random, groups=None) -> bool:
    groups = groups or catalog_groups()
    G = rng.choice(groups)
    n = rng.randint(1, 2)
    table = classify_tuples(G, n)
    rep = rng.choice(table.reps)
    conj = [tuple(G.conj(g, x) for x in rep) for g in (rng.randrange(G.order) for _ in range(3))]
    a, b, c = conj
    lhs = zeta_biset(G, a, b) @ zeta_biset(G, b, c)
    back = zeta_biset(G, a, b) @ zeta_biset(G, b, a)
    return lhs == zeta_biset(G, a, c) and back == VirtualBiset.identity(back.source)


def check_membership_equivalence(G: FiniteGroup, ell: int | None = None) -> bool:
    """For n = 1: ``a in R`` iff ``k = 1`` iff ``ev_a^-1(R) = (Z/ell) x R``."""
    ell = ell or G.exponent()
    table = classify_tuples(G, 1)
    for i, a in enumerate(table.reps):
        C = table.centralizers[i]
        for R in all_subgroups(C.group()):
            Ramb = Subgroup(G, C.array[R.array])
            inside = all(Ramb.mask[x] for x in a)
            k_one = k_exponents(G, a, Ramb).k == (1,) * len(a)
            product = np.arange(ell)[:, None] * C.order + R.array[None, :]
            full = np.array_equal(ev_preimage(G, a, Ramb, ell), np.sort(product.ravel()))
            if not (inside == k_one == full):
                return False
    return True


# -- locality ---------------------------------------------------------------------------------


def check_cross_boundary(rng: random.Random, pred, groups: Sequence[FiniteGroup], n: int = 1) -> bool:
    G, H = rng.choice(groups), rng.choice(groups)
    ell = shared_modulus(G, H)
    X = random_biset(rng, G, H)
    L = twist_morphism(X, n, ell)
    keep_g = set(kept_classes(G, n, pred))
    keep_h = set(kept_classes(H, n, pred))
    for i in keep_g:
        for j in range(len(classify_tuples(H, n))):
            if j not in keep_h and L[i, j]:
                return False
    return True


def check_projection_square(rng: random.Random, pred, groups: Sequence[FiniteGroup], ell: int, ell2: int, n: int = 1) -> bool:
    G, H = rng.choice(groups), rng.choice(groups)
    X = random_biset(rng, G, H)
    lhs = projection_matrix(G, n, ell, ell2, pred) @ twist_morphism(X, n, ell2, pred)
    rhs = twist_morphism(X, n, ell, pred) @ projection_matrix(H, n, ell, ell2, pred)
    return lhs == rhs


# -- components and the golden example ---------------------------------------------------


def check_pi0_transfer(G: FiniteGroup, n: int) -> bool:
    """The component action of ``[H, id]`` from ``G`` to ``H`` against coset enumeration, for every ``H``."""
    from .pi0 import pi0_map, pi0_transfer_oracle

    reps = classify_tuples(G, n).reps
    for H in all_subgroups(G):
        P = pi0_map(transfer_biset(G, H), n)
        for i, a in enumerate(reps):
            if P[i].tolist() != pi0_transfer_oracle(G, H, a, n).coeffs:
                return False
    return True


def golden_c2() -> dict[str, bool]:
    """The worked ``C2`` example with ``n = 1``, ``ell = 2``, entry for entry."""
    from .locality import matrix_powers, padic_power_analysis, symbolic_entries
    from .matrices import augmentation_matrix

    G, one = make_catalog_group("C2"), make_catalog_group("1")
    T, T1 = torus_times(2, 1, G), torus_times(2, 1, one)

    def basis(A, B, members, images):
        return VirtualBiset.basis(canonical_key(A, B, members, images))

    inc = basis(one, G, [0], [0])
    tr = basis(G, one, [0], [0])
    X = tr @ inc - 2 * VirtualBiset.identity(G)
    # codes are t*|C| + z with t the loop coordinate
    circle = basis(T, T, [0, 2], [0, 2])
    wind = basis(T, T, [0, 3], [0, 2])
    L = twist_morphism(X, 1, 2)
    A = augmentation_matrix(L)
    idT = VirtualBiset.identity(T)
    ok_power = all(
        P.tolist() == [[0, 0], [-((-2) ** m), (-2) ** m]] for m, P in enumerate(matrix_powers(A, 10), start=1)
    )
    return {
        "identity": twist_morphism(VirtualBiset.identity(G), 1, 2) == BisetMatrix.from_sparse(
            L.domain, L.codomain, {(0, 0): idT, (1, 1): idT}
        ),
        "inclusion": (M := twist_morphism(inc, 1, 2)).shape == (1, 2)
        and M[0, 0] == basis(T1, T, [0, 1], [0, 2])
        and not M[0, 1],
        "transfer": (M := twist_morphism(tr, 1, 2)).shape == (2, 1)
        and M[0, 0] == basis(T, T1, [0, 2], [0, 1])
        and M[1, 0] == basis(T, T1, [0, 3], [0, 1]),
        "composite": twist_morphism(tr @ inc, 1, 2) == BisetMatrix.from_sparse(
            L.domain, L.codomain, {(0, 0): circle, (1, 0): wind}
        ),
        "X": L == BisetMatrix.from_sparse(L.domain, L.codomain, {(0, 0): circle - 2 * idT, (1, 0): wind, (1, 1): -2 * idT}),
        "augmentation": A.tolist() == [[0, 0], [2, -2]],
        "powers": ok_power,
        "2-adic": padic_power_analysis(A, 2, 6).first_power == {j: j for j in range(1, 7)},
        "symbolic": symbolic_entries(L) == [["s0 - 2", "0"], ["s1", "-2"]],
    }


def run_random(check: Callable[[random.Random], bool], count: int, seed: int = 0) -> tuple[int, int]:
    """Run ``count`` random instances; return ``(passed, count)``."""
    rng = random.Random(seed)
    passed = sum(bool(check(rng)) for _ in range(count))
    return passed, count


SUITE_NAMES = ("golden", "functoriality", "theorem", "oracle", "structural", "pi0", "plocal")


def _exhaustive(check, items) -> Callable[[int], tuple[int, int]]:
    def run(seed: int) -> tuple[int, int]:
        items_ = list(items)
        return sum(bool(check(*it)) for it in items_), len(items_)

    return run


def _random(check, count: int) -> Callable[[int], tuple[int, int]]:
    return lambda seed: run_random(check, count, seed)


def suites(count: int = 20) -> dict[str, list[tuple[str, Callable[[int], tuple[int, int]]]]]:
    """Named groups of checks; each runner takes a seed and returns ``(passed, total)``."""
    from .locality import abelian_p_groups

    cat = catalog_groups()
    pairs = [(G, H) for G in cat for H in cat]
    two = abelian_p_groups(2)

    def golden(seed):
        res = golden_c2()
        return sum(res.values()), len(res)

    return {
        "golden": [("C2 twisted example", golden)],
        "functoriality": [
            (f"twisted n={n}", _random(lambda r, n=n: check_functoriality(r, n), count)) for n in (1, 2)
        ],
        "theorem": [
            ("zero arity", _random(check_zero_arity, count)),
            ("induced", _random(lambda r: check_induced(r, 1), count)),
            ("ev naturality", _random(lambda r: check_ev_naturality(r, 1), count)),
            ("untwist", _random(lambda r: check_untwist(r, 1), count)),
            ("L^n functoriality", _random(lambda r: check_loop_functoriality(r, 1), count)),
            ("sigma", _random(check_sigma, count)),
            ("pev", _random(lambda r: check_pev(r, 1), count)),
            ("iteration", _random(check_iteration, count)),
        ],
        "oracle": [
            ("fixed vs orbit", _exhaustive(check_fixed_vs_orbit, [(G, H, n) for G, H in pairs for n in (1, 2)])),
            ("surjective case", _random(check_surjective_case, count)),
            ("compose vs tensor", _random(check_compose_oracle, count)),
        ],
        "structural": [
            ("prefix closure", _exhaustive(check_prefix_closure, [(G, 3) for G in cat])),
            ("classification", _exhaustive(check_classification, [(G, n) for G in cat for n in (1, 2)])),
            ("zeta cocycle", _random(check_zeta_cocycle, count)),
            ("membership equivalence", _exhaustive(check_membership_equivalence, [(G,) for G in cat])),
        ],
        "pi0": [("transfer vs cosets", _exhaustive(check_pi0_transfer, [(G, n) for G in catalog_groups(("S3", "D8")) for n in (1, 2)]))],
        "plocal": [
            ("cross boundary", _random(lambda r: check_cross_boundary(r, two, cat), count)),
            (
                "projection 4->2",
                _random(lambda r: check_projection_square(r, two, catalog_groups(("C2", "C2xC2", "S3")), 4, 2), count),
            ),
        ],
    }
