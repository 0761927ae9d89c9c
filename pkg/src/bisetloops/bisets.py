"""Transitive bisets, virtual bisets, and composition.

A transitive right-free ``(G, H)``-biset is ``[R, phi]`` for ``R <= G`` and a
homomorphism ``phi: R -> H``, realized as ``(G x H) / (g r, h) ~ (g, phi(r) h)``.
Two pairs give isomorphic bisets exactly when
``(R', phi') = (a R a^-1, x -> b^-1 phi(a^-1 x a) b)`` for some ``a in G, b in H``.

Composition ``X . Y`` is the tensor product ``X x_H Y`` (apply ``X`` first).
On basis elements it is computed with the double coset formula

    [R, phi] . [T, psi] = sum over b in phi(R) \\ H / T of
        [phi^-1(b T b^-1), x -> psi(b^-1 phi(x) b)]

and the set-theoretic tensor product is kept as an independent oracle.
"""

from __future__ import annotations

import functools
from collections import defaultdict
from typing import Iterable, Iterator, Mapping

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .groups import FiniteGroup, GroupError, Homomorphism, Subgroup, is_subgroup


class BisetError(GroupError):
    """Raised for malformed bisets or mismatched compositions."""


class FreenessError(BisetError):
    """Raised when the right action of a concrete biset is not free."""


# -- canonical keys --------------------------------------------------------------


class TransitiveBisetKey:
    """Canonical representative of a transitive biset ``[R, phi]`` from ``source`` to ``target``.

    ``members`` is the sorted member tuple of ``R`` and ``images[i]`` is
    ``phi(members[i])``. Build keys through :func:`canonical_key`, which
    picks the lexicographically least representative of the class.
    """

    __slots__ = ("source", "target", "members", "images", "_hash", "_phi")

    def __init__(self, source: FiniteGroup, target: FiniteGroup, members: tuple[int, ...], images: tuple[int, ...]):
        self.source = source
        self.target = target
        self.members = members
        self.images = images
        self._hash = hash((len(members), members, images, source, target))
        self._phi: np.ndarray | None = None

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, TransitiveBisetKey):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.members == other.members
            and self.images == other.images
            and self.source == other.source
            and self.target == other.target
        )

    def __lt__(self, other: "TransitiveBisetKey") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (len(self.members), self.members, self.images)

    def __repr__(self) -> str:
        return f"[{_fmt_subgroup(self)}, {_fmt_hom(self)}]"

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        """``|G : R|``, the augmentation of the basis element."""
        return self.source.order // len(self.members)

    def subgroup(self) -> Subgroup:
        return Subgroup(self.source, self.members)

    def phi(self) -> np.ndarray:
        """Image table over the whole source group, -1 outside ``R``."""
        if self._phi is None:
            full = np.full(self.source.order, -1, dtype=np.int64)
            full[list(self.members)] = self.images
            self._phi = full
        return self._phi

    def hom(self) -> Homomorphism:
        R = self.subgroup()
        return Homomorphism(R.group(), self.target, np.asarray(self.images))


def _fmt_subgroup(key: TransitiveBisetKey) -> str:
    G = key.source
    if key.order == 1:
        return "1"
    if key.order == G.order:
        return G.label
    return "{" + ",".join(G.name(x) for x in key.members) + "}"


def _fmt_hom(key: TransitiveBisetKey) -> str:
    if key.source == key.target and key.members == key.images:
        return "id"
    if all(y == 0 for y in key.images):
        return "triv"
    return "{" + ",".join(f"{key.source.name(x)}->{key.target.name(y)}" for x, y in zip(key.members, key.images)) + "}"


def _conj_table(G: FiniteGroup) -> tuple[np.ndarray, np.ndarray]:
    """Transversal ``T`` of ``G/Z(G)`` and the table ``t^-1 x t`` indexed by ``(T, x)``."""
    memo = G.cache("conj_table")
    if "t" not in memo:
        T = G.center_transversal()
        rng = np.arange(G.order)
        memo["t"] = (T, G.table[G.table[G.inverse[T][:, None], rng[None, :]], T[:, None]].astype(np.int64))
    return memo["t"]


def _lexmin_rows(rows: np.ndarray) -> np.ndarray:
    """Indices of the rows equal to the lexicographically least row."""
    alive = np.arange(rows.shape[0])
    for col in range(rows.shape[1]):
        if alive.size == 1:
            break
        vals = rows[alive, col]
        alive = alive[vals == vals.min()]
    return alive


def canonical_subgroup(G: FiniteGroup, members: tuple[int, ...]) -> tuple[tuple[int, ...], np.ndarray]:
    """Least conjugate ``a^-1 R a`` (as a sorted tuple) and every transversal ``a`` reaching it."""
    memo = G.cache("canonical_subgroup")
    hit = memo.get(members)
    if hit is None:
        T, conj = _conj_table(G)
        rows = np.sort(conj[:, list(members)], axis=1)
        best = _lexmin_rows(rows)
        least = tuple(rows[best[0]].tolist())
        hit = (least, T[best])
        memo[members] = hit
    return hit


def canonical_key(G: FiniteGroup, H: FiniteGroup, members, images, check: bool = False) -> TransitiveBisetKey:
    """Canonical key of ``[R, phi]`` given ``R``'s members and aligned images."""
    members = np.asarray(members, dtype=np.int64)
    images = np.asarray(images, dtype=np.int64)
    if members.shape != images.shape:
        raise BisetError("hom domain does not match the subgroup")
    order = np.argsort(members)
    members, images = members[order], images[order]
    if check:
        if members.size and (members.min() < 0 or members.max() >= G.order):
            raise BisetError("subgroup element out of range")
        if images.size and (images.min() < 0 or images.max() >= H.order):
            raise BisetError("hom image out of range")
        if not is_subgroup(G, members):
            raise BisetError("R is not a subgroup of the source")
        pos = np.full(G.order, -1, dtype=np.int64)
        pos[members] = np.arange(members.size)
        prod = pos[G.table[np.ix_(members, members)]]
        if not np.array_equal(images[prod], H.table[np.ix_(images, images)]):
            raise BisetError("phi is not a homomorphism")
    least, conjugators = canonical_subgroup(G, tuple(members.tolist()))
    phi = np.full(G.order, -1, dtype=np.int64)
    phi[members] = images
    Rmin = np.asarray(least, dtype=np.int64)
    # candidate images phi(a x a^-1) for x in the least conjugate
    src = G.table[G.table[conjugators[:, None], Rmin[None, :]], G.inverse[conjugators][:, None]]
    imgs = phi[src]
    _, hconj = _conj_table(H)
    cands = hconj[:, imgs].reshape(-1, Rmin.size)
    best = cands[_lexmin_rows(cands)[0]]
    return TransitiveBisetKey(G, H, least, tuple(best.tolist()))


def make_key(G: FiniteGroup, H: FiniteGroup, R: Subgroup | Iterable[int], phi: Homomorphism | Mapping | Iterable[int]) -> TransitiveBisetKey:
    """Validated key from a subgroup and a homomorphism.

    ``phi`` may be a :class:`Homomorphism` on ``R.group()``, a mapping from
    ambient members to images, or a sequence of images aligned with the
    sorted members.
    """
    if isinstance(R, Subgroup):
        if R.ambient != G:
            raise BisetError("subgroup does not live in the source group")
        members = R.array
    else:
        members = np.unique(np.asarray(list(R), dtype=np.int64))
    if isinstance(phi, Homomorphism):
        if phi.domain.order != members.size or phi.codomain != H:
            raise BisetError("hom domain does not match the subgroup")
        images = phi.images
    elif isinstance(phi, Mapping):
        try:
            images = np.array([phi[int(x)] for x in members], dtype=np.int64)
        except KeyError as exc:
            raise BisetError("hom domain does not match the subgroup") from exc
    else:
        images = np.asarray(list(phi), dtype=np.int64)
    return canonical_key(G, H, members, images, check=True)


# -- virtual bisets --------------------------------------------------------------


class VirtualBiset:
    """Integer combination of transitive bisets from ``source`` to ``target``."""

    __slots__ = ("source", "target", "terms")

    def __init__(self, source: FiniteGroup, target: FiniteGroup, terms: Mapping[TransitiveBisetKey, int] | None = None):
        self.source = source
        self.target = target
        clean = {}
        for key, c in (terms or {}).items():
            if c:
                if key.source != source or key.target != target:
                    raise BisetError("term does not match the source and target groups")
                clean[key] = int(c)
        self.terms = clean

    @classmethod
    def basis(cls, key: TransitiveBisetKey, coef: int = 1) -> "VirtualBiset":
        return cls(key.source, key.target, {key: coef})

    @classmethod
    def zero(cls, G: FiniteGroup, H: FiniteGroup) -> "VirtualBiset":
        return cls(G, H)

    @classmethod
    def identity(cls, G: FiniteGroup) -> "VirtualBiset":
        rng = np.arange(G.order)
        return cls.basis(canonical_key(G, G, rng, rng))

    def items(self) -> list[tuple[TransitiveBisetKey, int]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __iter__(self) -> Iterator[tuple[TransitiveBisetKey, int]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _check_same(self, other: "VirtualBiset"):
        if self.source != other.source or self.target != other.target:
            raise BisetError("virtual bisets live in different Burnside modules")

    def __add__(self, other: "VirtualBiset") -> "VirtualBiset":
        self._check_same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return VirtualBiset(self.source, self.target, out)

    def __neg__(self) -> "VirtualBiset":
        return VirtualBiset(self.source, self.target, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "VirtualBiset") -> "VirtualBiset":
        return self + (-other)

    def __rmul__(self, c: int) -> "VirtualBiset":
        return VirtualBiset(self.source, self.target, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, c: int) -> "VirtualBiset":
        return self.__rmul__(c)

    def __matmul__(self, other: "VirtualBiset") -> "VirtualBiset":
        return compose(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VirtualBiset):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.items():
            parts.append(f"{c}*{k!r}")
        return " + ".join(parts).replace("+ -", "- ")

    def augmentation(self) -> int:
        return augmentation(self)

    def is_effective(self) -> bool:
        return all(c > 0 for c in self.terms.values())


def augmentation(X: VirtualBiset) -> int:
    """``sum c * |G : R|``; equals ``|Z| / |H|`` for an actual biset ``Z``."""
    return sum(c * k.index for k, c in X.terms.items())


# -- composition -----------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def compose_keys(kx: TransitiveBisetKey, ky: TransitiveBisetKey) -> tuple[tuple[TransitiveBisetKey, int], ...]:
    """Double coset formula for a pair of basis elements."""
    if kx.target != ky.source:
        raise BisetError("middle groups do not match")
    G, H, K = kx.source, kx.target, ky.target
    R = np.asarray(kx.members, dtype=np.int64)
    phR = np.asarray(kx.images, dtype=np.int64)
    P = np.unique(phR)
    T = ky.members
    Tmask = np.zeros(H.order, dtype=bool)
    Tmask[list(T)] = True
    psi = ky.phi()
    coset_id, reps = H.left_cosets(T)
    seen = np.zeros(reps.size, dtype=bool)
    out: dict[TransitiveBisetKey, int] = defaultdict(int)
    for idx, b in enumerate(reps.tolist()):
        if seen[idx]:
            continue
        seen[coset_id[H.table[P, b]]] = True
        c = H.table[H.table[H.inverse[b], phR], b]
        mask = Tmask[c]
        key = canonical_key(G, K, R[mask], psi[c[mask]])
        out[key] += 1
    return tuple(sorted(out.items(), key=lambda kv: kv[0].sort_key()))


def compose(X: VirtualBiset, Y: VirtualBiset) -> VirtualBiset:
    """``X . Y = X x_H Y`` extended bilinearly."""
    if X.target != Y.source:
        raise BisetError("middle groups do not match")
    out: dict[TransitiveBisetKey, int] = defaultdict(int)
    for kx, cx in X.terms.items():
        for ky, cy in Y.terms.items():
            for k, m in compose_keys(kx, ky):
                out[k] += cx * cy * m
    return VirtualBiset(X.source, Y.target, out)


# -- concrete bisets -------------------------------------------------------------


class ConcreteBiset:
    """A finite set with a left ``source`` action and a free right ``target`` action.

    ``left[g, x]`` is ``g . x`` and ``right[x, h]`` is ``x . h``.
    """

    def __init__(self, source: FiniteGroup, target: FiniteGroup, left, right):
        self.source = source
        self.target = target
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        if self.left.shape[0] != source.order or self.right.shape[1] != target.order:
            raise BisetError("action tables have the wrong shape")
        if self.left.shape[1] != self.right.shape[0]:
            raise BisetError("action tables disagree on the number of points")

    @property
    def size(self) -> int:
        return self.right.shape[0]

    def is_free(self) -> bool:
        srt = np.sort(self.right, axis=1)
        return bool((np.diff(srt, axis=1) != 0).all())

    def is_valid(self) -> bool:
        """Both actions are actions and they commute."""
        G, H = self.source, self.target
        L, Rt = self.left, self.right
        pts = np.arange(self.size)
        ok = np.array_equal(L[0], pts) and np.array_equal(Rt[:, 0], pts)
        for g in range(G.order):
            # (g g') . x == g . (g' . x)
            if not np.array_equal(L[G.table[g, :]], L[g][L]):
                return False
        for h in range(H.order):
            if not np.array_equal(Rt[:, H.table[h, :]], Rt[Rt[:, h]]):
                return False
        for g in range(G.order):
            if not np.array_equal(Rt[L[g]], L[g][Rt]):
                return False
        return bool(ok)

    def relabel(self, perm) -> "ConcreteBiset":
        """Rename point ``x`` to ``perm[x]``."""
        perm = np.asarray(perm, dtype=np.int64)
        inv = np.argsort(perm)
        return ConcreteBiset(self.source, self.target, perm[self.left[:, inv]], perm[self.right[inv, :]])

    def restrict(self, A: Subgroup, B: Subgroup, points=None) -> "ConcreteBiset":
        """Restrict the actions to ``A`` on the left and ``B`` on the right.

        ``points`` (a boolean mask or index list) selects an invariant subset.
        """
        if points is None:
            pts = np.arange(self.size)
        else:
            pts = np.asarray(points)
            pts = np.flatnonzero(pts) if pts.dtype == bool else pts.astype(np.int64)
        pos = np.full(self.size, -1, dtype=np.int64)
        pos[pts] = np.arange(pts.size)
        left = pos[self.left[np.ix_(A.array, pts)]]
        right = pos[self.right[np.ix_(pts, B.array)]]
        if (left < 0).any() or (right < 0).any():
            raise BisetError("point subset is not invariant")
        return ConcreteBiset(A.group(), B.group(), left, right)

    def disjoint_union(self, other: "ConcreteBiset") -> "ConcreteBiset":
        if self.source != other.source or self.target != other.target:
            raise BisetError("groups differ")
        n = self.size
        return ConcreteBiset(
            self.source,
            self.target,
            np.hstack([self.left, other.left + n]),
            np.vstack([self.right, other.right + n]),
        )


def realize(key: TransitiveBisetKey) -> ConcreteBiset:
    """Points ``(i, h)`` with ``i`` indexing the left cosets ``g_i R`` (point ``i*|H| + h``)."""
    G, H = key.source, key.target
    coset_id, reps = G.left_cosets(key.members)
    phi = key.phi()
    nH = H.order
    # g g_i = g_j r
    gg = G.table[:, reps]
    j = coset_id[gg]
    r = G.table[G.inverse[reps[j]], gg]
    left = j[:, :, None] * nH + H.table[phi[r]]
    left = left.reshape(G.order, -1)
    right = (np.arange(reps.size)[:, None, None] * nH + H.table[None, :, :]).reshape(-1, nH)
    return ConcreteBiset(G, H, left, right)


def _orbits(X: ConcreteBiset) -> np.ndarray:
    n = X.size
    rows, cols = [], []
    for g in X.source.generators():
        rows.append(np.arange(n))
        cols.append(X.left[g])
    for h in X.target.generators():
        rows.append(np.arange(n))
        cols.append(X.right[:, h])
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
    else:
        r = c = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(r.size), (r, c)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return labels


def decompose(X: ConcreteBiset) -> VirtualBiset:
    """Sum of the canonical keys of the orbits of ``X``."""
    if not X.is_free():
        raise FreenessError("right action is not free")
    labels = _orbits(X)
    _, firsts = np.unique(labels, return_index=True)
    out: dict[TransitiveBisetKey, int] = defaultdict(int)
    for x in sorted(firsts.tolist()):
        which = np.full(X.size, -1, dtype=np.int64)
        which[X.right[x]] = np.arange(X.target.order)
        hvals = which[X.left[:, x]]
        members = np.flatnonzero(hvals >= 0)
        out[canonical_key(X.source, X.target, members, hvals[members])] += 1
    return VirtualBiset(X.source, X.target, out)


def tensor(X: ConcreteBiset, Y: ConcreteBiset) -> ConcreteBiset:
    """``X x_H Y`` with points ``(r, y)``, ``r`` the least point of each right ``H``-orbit of ``X``."""
    if X.target != Y.source:
        raise BisetError("middle groups do not match")
    H = X.target
    n = X.size
    rep_of = np.full(n, -1, dtype=np.int64)
    h_of = np.full(n, -1, dtype=np.int64)
    reps = []
    for x in range(n):
        if rep_of[x] >= 0:
            continue
        rep_of[X.right[x]] = len(reps)
        h_of[X.right[x]] = np.arange(H.order)
        reps.append(x)
    reps = np.asarray(reps, dtype=np.int64)
    ny = Y.size
    moved = X.left[:, reps]  # (G, reps)
    new_rep = rep_of[moved]
    hs = h_of[moved]
    # g.(r, y) = (r' h, y) ~ (r', h y)
    left = new_rep[:, :, None] * ny + Y.left[hs]
    left = left.reshape(X.source.order, -1)
    right = (np.arange(reps.size)[:, None, None] * ny + Y.right[None, :, :]).reshape(-1, Y.target.order)
    return ConcreteBiset(X.source, Y.target, left, right)


def compose_oracle(X: VirtualBiset, Y: VirtualBiset) -> VirtualBiset:
    """Composition by realizing basis elements, tensoring and decomposing."""
    if X.target != Y.source:
        raise BisetError("middle groups do not match")
    out = VirtualBiset.zero(X.source, Y.target)
    for kx, cx in X.terms.items():
        for ky, cy in Y.terms.items():
            out = out + (cx * cy) * decompose(tensor(realize(kx), realize(ky)))
    return out


# -- standard bisets -------------------------------------------------------------


def restriction_biset(G: FiniteGroup, A: Subgroup) -> VirtualBiset:
    """``[A, incl]`` from ``A`` to ``G``."""
    if A.ambient != G or not is_subgroup(G, A.array):
        raise BisetError("not a subgroup")
    AG = A.group()
    return VirtualBiset.basis(canonical_key(AG, G, np.arange(AG.order), A.array))


def transfer_biset(G: FiniteGroup, A: Subgroup) -> VirtualBiset:
    """``[A, id]`` from ``G`` to ``A``."""
    if A.ambient != G or not is_subgroup(G, A.array):
        raise BisetError("not a subgroup")
    AG = A.group()
    return VirtualBiset.basis(canonical_key(G, AG, A.array, np.arange(AG.order)))


def induced_biset(f: Homomorphism) -> VirtualBiset:
    """``[G, f]`` from ``G`` to ``H`` for ``f: G -> H``."""
    return VirtualBiset.basis(canonical_key(f.domain, f.codomain, np.arange(f.domain.order), f.images))
