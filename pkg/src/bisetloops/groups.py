"""Finite groups stored as explicit multiplication tables.

Element indices run over ``0..order-1`` and index 0 is always the identity.
Products of groups use a mixed-radix encoding with the first factor most
significant, so ``(x1, ..., xk)`` is stored as
``((x1 * |F2| + x2) * |F3| + ...) + xk``.

Conjugation follows the right-action convention ``c_g(x) = g^-1 x g``
throughout the package.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class GroupError(ValueError):
    """Raised for malformed groups, subgroups and homomorphisms."""


class CatalogError(GroupError):
    """Raised for an unknown catalog group name."""


_SCALAR_ROWS_LIMIT = 512


class FiniteGroup:
    """A finite group given by its multiplication table.

    Two groups compare equal when their tables agree; the label, the element
    names and the factor metadata are for display only.
    """

    def __init__(
        self,
        table,
        label: str = "G",
        names: Sequence[str] | None = None,
        factors: tuple["FiniteGroup", ...] | None = None,
        generator_names: dict[str, int] | None = None,
        check: bool = True,
    ):
        table = np.ascontiguousarray(np.asarray(table, dtype=np.int32))
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        order = table.shape[0]
        rng = np.arange(order)
        if check:
            if table.min() < 0 or table.max() >= order:
                raise GroupError("table entries out of range")
            if not (np.array_equal(table[0], rng) and np.array_equal(table[:, 0], rng)):
                raise GroupError("index 0 must be a two-sided identity")
            srt = np.sort(table, axis=1)
            if not (srt == rng).all() or not (np.sort(table, axis=0) == rng[:, None]).all():
                raise GroupError("table is not a Latin square")
        self.table = table
        self.order = order
        self.inverse = np.argmax(table == 0, axis=1).astype(np.int32)
        self.label = label
        self.names = list(names) if names is not None else None
        self.factors = factors
        self.generator_names = dict(generator_names or {})
        self._hash: int | None = None
        self._rows: list[list[int]] | None = None
        self._cache: dict = {}

    # -- identity and comparison -------------------------------------------------

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.order, self.table.tobytes()))
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (
            self.order == other.order
            and hash(self) == hash(other)
            and np.array_equal(self.table, other.table)
        )

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label!r}, order={self.order})"

    def cache(self, name: str) -> dict:
        """Per-group memo table for derived data."""
        return self._cache.setdefault(name, {})

    # -- scalar arithmetic -------------------------------------------------------

    @property
    def identity(self) -> int:
        return 0

    def mul(self, x: int, y: int) -> int:
        if self.order <= _SCALAR_ROWS_LIMIT:
            if self._rows is None:
                self._rows = self.table.tolist()
            return self._rows[x][y]
        return int(self.table[x, y])

    def inv(self, x: int) -> int:
        return int(self.inverse[x])

    def conj(self, g: int, x: int) -> int:
        """``g^-1 x g``."""
        return self.mul(self.mul(self.inv(g), x), g)

    def product(self, xs: Iterable[int]) -> int:
        acc = 0
        for x in xs:
            acc = self.mul(acc, x)
        return acc

    def powers(self, x: int) -> list[int]:
        """``[x^0, x^1, ..., x^(o-1)]`` where ``o`` is the order of ``x``."""
        memo = self.cache("powers")
        hit = memo.get(x)
        if hit is None:
            hit = [0]
            y = x
            while y != 0:
                hit.append(y)
                y = self.mul(y, x)
            memo[x] = hit
        return hit

    def power(self, x: int, k: int) -> int:
        pw = self.powers(x)
        return pw[k % len(pw)]

    def element_order(self, x: int) -> int:
        return len(self.powers(x))

    def commutes(self, x: int, y: int) -> bool:
        return self.mul(x, y) == self.mul(y, x)

    def name(self, x: int) -> str:
        if self.names is not None:
            return self.names[x]
        return str(x)

    def element_orders(self) -> np.ndarray:
        memo = self.cache("orders")
        if "all" not in memo:
            memo["all"] = np.array([self.element_order(x) for x in range(self.order)])
        return memo["all"]

    # -- structure ---------------------------------------------------------------

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def center(self) -> np.ndarray:
        memo = self.cache("center")
        if "z" not in memo:
            if self.factors:
                memo["z"] = _product_members([f.center() for f in self.factors], self.factors)
            else:
                memo["z"] = np.flatnonzero((self.table == self.table.T).all(axis=1))
        return memo["z"]

    def center_transversal(self) -> np.ndarray:
        """Representatives of ``G/Z(G)``; conjugation only depends on these."""
        memo = self.cache("center")
        if "t" not in memo:
            coset_id, reps = self.left_cosets(tuple(self.center().tolist()))
            memo["t"] = reps
        return memo["t"]

    def left_cosets(self, members: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
        """Coset ids ``x -> [xT]`` and the least element of each left coset ``xT``."""
        memo = self.cache("cosets")
        hit = memo.get(members)
        if hit is None:
            arr = np.asarray(members, dtype=np.int64)
            coset_id = np.full(self.order, -1, dtype=np.int64)
            reps = []
            for x in range(self.order):
                if coset_id[x] >= 0:
                    continue
                coset_id[self.table[x, arr]] = len(reps)
                reps.append(x)
            hit = (coset_id, np.asarray(reps, dtype=np.int64))
            memo[members] = hit
        return hit

    def generators(self) -> list[int]:
        """A small deterministic generating set (greedy by element index)."""
        memo = self.cache("generators")
        if "g" not in memo:
            if self.factors:
                gens = []
                for pos, f in enumerate(self.factors):
                    for g in f.generators():
                        coords = [0] * len(self.factors)
                        coords[pos] = g
                        gens.append(encode(self.factors, coords))
            else:
                gens = []
                mask = np.zeros(self.order, dtype=bool)
                mask[0] = True
                for x in range(self.order):
                    if not mask[x]:
                        gens.append(x)
                        mask[:] = False
                        mask[closure(self, gens)] = True
            memo["g"] = gens
        return memo["g"]

    def exponent(self) -> int:
        return math.lcm(*[int(o) for o in self.element_orders()])

    def check_axioms(self) -> bool:
        """Exhaustive associativity check (cubic in the order)."""
        t = self.table.astype(np.int64)
        if self.order <= 64:
            left = t[t[:, :, None], np.arange(self.order)[None, None, :]]
            right = t[np.arange(self.order)[:, None, None], t[None, :, :]]
            if not np.array_equal(left, right):
                return False
        else:
            for x in range(self.order):
                if not np.array_equal(t[t[x]][:, :], t[x][t]):
                    return False
        inv = self.inverse
        rng = np.arange(self.order)
        return bool((t[rng, inv] == 0).all() and (t[inv, rng] == 0).all())


def closure(G: FiniteGroup, gens: Iterable[int]) -> np.ndarray:
    """Sorted members of the subgroup generated by ``gens``."""
    gens = np.asarray(list(gens), dtype=np.int64)
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0])
    if gens.size == 0:
        return np.flatnonzero(mask)
    while frontier.size:
        new = G.table[frontier][:, gens].ravel()
        new = np.unique(new[~mask[new]])
        mask[new] = True
        frontier = new
    return np.flatnonzero(mask)


# -- products ------------------------------------------------------------------


def encode(factors: Sequence[FiniteGroup], coords: Sequence[int]) -> int:
    idx = 0
    for f, c in zip(factors, coords):
        idx = idx * f.order + c
    return idx


def decode(factors: Sequence[FiniteGroup], idx: int) -> tuple[int, ...]:
    out = []
    for f in reversed(factors):
        idx, c = divmod(idx, f.order)
        out.append(c)
    return tuple(reversed(out))


def _product_members(parts: Sequence[np.ndarray], factors: Sequence[FiniteGroup]) -> np.ndarray:
    acc = np.array([0], dtype=np.int64)
    for part, f in zip(parts, factors):
        acc = (acc[:, None] * f.order + np.asarray(part)[None, :]).ravel()
    return np.sort(acc)


@functools.lru_cache(maxsize=None)
def direct_product(*factors: FiniteGroup) -> FiniteGroup:
    """Direct product with mixed-radix element encoding."""
    if not factors:
        return trivial_group()
    if len(factors) == 1:
        return factors[0]
    table = factors[0].table.astype(np.int64)
    for f in factors[1:]:
        a, b = table.shape[0], f.order
        table = (table[:, None, :, None] * b + f.table[None, :, None, :]).reshape(a * b, a * b)
    label = "x".join(_wrap(f.label) for f in factors)
    names = None
    if all(f.order <= 4096 for f in factors) and math.prod(f.order for f in factors) <= 4096:
        names = [
            "(" + ",".join(f.name(c) for f, c in zip(factors, coords)) + ")"
            for coords in itertools.product(*[range(f.order) for f in factors])
        ]
    return FiniteGroup(table, label=label, names=names, factors=tuple(factors), check=False)


def _wrap(label: str) -> str:
    return f"({label})" if "x" in label else label


# -- subgroups -----------------------------------------------------------------


class Subgroup:
    """A subgroup of ``ambient`` given by its sorted member indices."""

    def __init__(self, ambient: FiniteGroup, members: Iterable[int], check: bool = False):
        arr = np.unique(np.asarray(list(members) if not isinstance(members, np.ndarray) else members, dtype=np.int64))
        self.ambient = ambient
        self.array = arr
        self.members = tuple(arr.tolist())
        self.mask = np.zeros(ambient.order, dtype=bool)
        self.mask[arr] = True
        self._pos: np.ndarray | None = None
        if check and not is_subgroup(ambient, arr):
            raise GroupError("members do not form a subgroup")

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.members == other.members and self.ambient == other.ambient

    def __hash__(self) -> int:
        return hash((self.ambient, self.members))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} in {self.ambient.label})"

    def local(self, x):
        """Translate ambient indices into indices of :meth:`group`."""
        if self._pos is None:
            self._pos = np.full(self.ambient.order, -1, dtype=np.int64)
            self._pos[self.array] = np.arange(len(self.array))
        out = self._pos[x]
        if np.any(np.asarray(out) < 0):
            raise GroupError("element is not in the subgroup")
        return out

    def group(self, label: str | None = None) -> FiniteGroup:
        """The subgroup as a group in its own right, indexed by member rank."""
        return _subgroup_group(self.ambient, self.members, label)


def _subgroup_group(ambient: FiniteGroup, members: tuple[int, ...], label: str | None) -> FiniteGroup:
    memo = ambient.cache("subgroup_groups")
    hit = memo.get(members)
    if hit is None:
        arr = np.asarray(members, dtype=np.int64)
        pos = np.full(ambient.order, -1, dtype=np.int64)
        pos[arr] = np.arange(arr.size)
        table = pos[ambient.table[np.ix_(arr, arr)]]
        names = [ambient.name(int(x)) for x in arr] if ambient.names is not None else None
        hit = FiniteGroup(table, label=label or _subgroup_label(ambient, arr), names=names, check=False)
        memo[members] = hit
    return hit


def _subgroup_label(G: FiniteGroup, arr: np.ndarray) -> str:
    if arr.size == G.order:
        return G.label
    if arr.size == 1:
        return "1"
    gens: list[int] = []
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    for x in arr.tolist():
        if not mask[x]:
            gens.append(x)
            mask[closure(G, gens)] = True
    return "<" + ",".join(G.name(g) for g in gens) + ">"


def is_subgroup(G: FiniteGroup, members) -> bool:
    arr = np.asarray(members, dtype=np.int64)
    if arr.size == 0 or 0 not in set(arr.tolist()):
        return False
    mask = np.zeros(G.order, dtype=bool)
    mask[arr] = True
    return bool(mask[G.table[np.ix_(arr, arr)]].all())


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, np.arange(G.order))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, [0])


def generated_subgroup(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    return Subgroup(G, closure(G, gens))


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, by joining cyclic subgroups until nothing new appears."""
    memo = G.cache("all_subgroups")
    if "s" not in memo:
        cyclic = {tuple(closure(G, [x]).tolist()) for x in range(G.order)}
        found = set(cyclic)
        frontier = set(cyclic)
        while frontier:
            new = set()
            for s in frontier:
                for c in cyclic:
                    if set(c) <= set(s):
                        continue
                    j = tuple(closure(G, list(s) + list(c)).tolist())
                    if j not in found:
                        new.add(j)
            found |= new
            frontier = new
        memo["s"] = [Subgroup(G, s) for s in sorted(found, key=lambda s: (len(s), s))]
    return memo["s"]


# -- homomorphisms -------------------------------------------------------------


@dataclass(eq=False)
class Homomorphism:
    domain: FiniteGroup
    codomain: FiniteGroup
    images: np.ndarray

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.int64)
        if self.images.shape != (self.domain.order,):
            raise GroupError("image table has the wrong length")

    def __call__(self, x):
        return self.images[x] if isinstance(x, np.ndarray) else int(self.images[x])

    def is_homomorphism(self) -> bool:
        im = self.images
        lhs = im[self.domain.table]
        rhs = self.codomain.table[im[:, None], im[None, :]]
        return bool(np.array_equal(lhs, rhs) and im[0] == 0)

    def then(self, other: "Homomorphism") -> "Homomorphism":
        """``other . self`` (apply ``self`` first)."""
        if other.domain != self.codomain:
            raise GroupError("composition of incompatible homomorphisms")
        return Homomorphism(self.domain, other.codomain, other.images[self.images])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Homomorphism)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and np.array_equal(self.images, other.images)
        )


def identity_hom(G: FiniteGroup) -> Homomorphism:
    return Homomorphism(G, G, np.arange(G.order))


def conjugation_hom(G: FiniteGroup, g: int) -> Homomorphism:
    """The automorphism ``x -> g^-1 x g``."""
    if not 0 <= g < G.order:
        raise GroupError("element index out of range")
    rng = np.arange(G.order)
    return Homomorphism(G, G, G.table[G.table[G.inverse[g], rng], g])


def hom_preimage(f: Homomorphism, target: Subgroup) -> Subgroup:
    if target.ambient != f.codomain:
        raise GroupError("subgroup does not live in the codomain")
    if not is_subgroup(f.codomain, target.array):
        raise GroupError("target is not a subgroup")
    return Subgroup(f.domain, np.flatnonzero(target.mask[f.images]))


def centralizer(G: FiniteGroup, tup: Sequence[int]) -> Subgroup:
    """Elements commuting with every entry of ``tup`` (all of G for the empty tuple)."""
    for x in tup:
        if not 0 <= x < G.order:
            raise GroupError(f"element index {x} out of range")
    memo = G.cache("centralizers")
    key = tuple(sorted(set(tup)))
    hit = memo.get(key)
    if hit is None:
        mask = np.ones(G.order, dtype=bool)
        for x in key:
            mask &= G.table[x, :] == G.table[:, x]
        hit = Subgroup(G, np.flatnonzero(mask))
        memo[key] = hit
    return hit


def exponent(G: FiniteGroup) -> int:
    return G.exponent()


# -- catalog -------------------------------------------------------------------


def _bfs_group(gens: Sequence, mul, identity, label: str, gen_symbols: Sequence[str], namer=None) -> FiniteGroup:
    """Enumerate a group from concrete generators, identity first, then BFS order."""
    elements = [identity]
    index = {identity: 0}
    words = [""]
    queue = 0
    while queue < len(elements):
        x = elements[queue]
        for g, sym in zip(gens, gen_symbols):
            y = mul(x, g)
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                words.append(words[queue] + sym)
        queue += 1
    n = len(elements)
    table = np.empty((n, n), dtype=np.int32)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            table[i, j] = index[mul(x, y)]
    if namer is not None:
        names = [namer(x) for x in elements]
    else:
        names = ["e"] + [_compress_word(w) for w in words[1:]]
    gen_names = {sym: index[g] for g, sym in zip(gens, gen_symbols)}
    return FiniteGroup(table, label=label, names=names, generator_names=gen_names)


def _compress_word(word: str) -> str:
    out = []
    for sym, run in itertools.groupby(word):
        k = len(list(run))
        out.append(sym if k == 1 else f"{sym}^{k}")
    return "".join(out)


@functools.lru_cache(maxsize=None)
def cyclic_group(m: int) -> FiniteGroup:
    if m < 1:
        raise CatalogError("cyclic group order must be positive")
    rng = np.arange(m)
    table = (rng[:, None] + rng[None, :]) % m
    names = ["e"] + [("a" if k == 1 else f"a^{k}") for k in range(1, m)]
    return FiniteGroup(table, label=f"C{m}", names=names, generator_names={"a": 1} if m > 1 else {})


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


@functools.lru_cache(maxsize=None)
def dihedral_group(order: int) -> FiniteGroup:
    """Dihedral group of the given order ``2m``, generated by rotation r and reflection s."""
    if order < 2 or order % 2:
        raise CatalogError("dihedral order must be even")
    m = order // 2

    def mul(x, y):
        (k1, f1), (k2, f2) = x, y
        return ((k1 + (-k2 if f1 else k2)) % m, f1 ^ f2)

    if m == 1:
        return _bfs_group([(0, 1)], mul, (0, 0), f"D{order}", ["s"])
    return _bfs_group([(1, 0), (0, 1)], mul, (0, 0), f"D{order}", ["r", "s"])


def _perm_mul(p, q):
    # left-to-right: apply p first, then q
    return tuple(q[i] for i in p)


def cycle_notation(p: Sequence[int]) -> str:
    seen = set()
    cycles = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        cycles.append("(" + "".join(str(c + 1) for c in cyc) + ")")
    return "".join(cycles) or "e"


@functools.lru_cache(maxsize=None)
def symmetric_group(k: int) -> FiniteGroup:
    if not 1 <= k <= 4:
        raise CatalogError("symmetric groups are limited to S1..S4")
    ident = tuple(range(k))
    if k == 1:
        return FiniteGroup([[0]], label="S1", names=["e"])
    transposition = (1, 0) + tuple(range(2, k))
    long_cycle = tuple((i + 1) % k for i in range(k))
    gens = [transposition] if k == 2 else [transposition, long_cycle]
    syms = ["t"] if k == 2 else ["t", "c"]
    G = _bfs_group(gens, _perm_mul, ident, f"S{k}", syms, namer=cycle_notation)
    G.cache("perms")["list"] = None
    return G


_QUAT = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


@functools.lru_cache(maxsize=None)
def quaternion_group() -> FiniteGroup:
    def mul(x, y):
        s, u = _QUAT[(x[1], y[1])]
        return (x[0] * y[0] * s, u)

    def namer(x):
        sign = "-" if x[0] < 0 else ""
        return "e" if x == (1, "1") else f"{sign}{x[1]}"

    return _bfs_group([(1, "i"), (1, "j")], mul, (1, "1"), "Q8", ["i", "j"], namer=namer)


_NAME = re.compile(r"^(C|D|S)(\d+)$")


@functools.lru_cache(maxsize=None)
def make_catalog_group(name: str) -> FiniteGroup:
    """Build a group from a catalog name.

    Accepted names: ``1``, ``C<m>``, ``D<2m>``, ``S<k>`` (k <= 4), ``Q8`` and
    products joined by ``x`` such as ``C2xC2`` or ``S3xC2``.
    """
    name = name.strip().replace("×", "x")
    if "x" in name:
        parts = [make_catalog_group(p) for p in name.split("x")]
        G = direct_product(*parts)
        G = FiniteGroup(G.table, label=name, names=G.names, factors=G.factors, check=False)
        G.generator_names = _product_generator_names(parts)
        return G
    if name in ("1", "C1"):
        return trivial_group()
    if name == "Q8":
        return quaternion_group()
    m = _NAME.match(name)
    if not m:
        raise CatalogError(f"unknown catalog group {name!r}")
    kind, num = m.group(1), int(m.group(2))
    if kind == "C":
        return cyclic_group(num)
    if kind == "D":
        return dihedral_group(num)
    return symmetric_group(num)


def _product_generator_names(parts: Sequence[FiniteGroup]) -> dict[str, int]:
    out = {}
    if all(p.generator_names.keys() <= {"a"} for p in parts):
        letters = "abcdefgh"
        for pos, p in enumerate(parts):
            coords = [0] * len(parts)
            coords[pos] = 1 if p.order > 1 else 0
            out[letters[pos]] = encode(parts, coords)
        return out
    for pos, p in enumerate(parts):
        for sym, g in p.generator_names.items():
            coords = [0] * len(parts)
            coords[pos] = g
            out[f"{sym}{pos + 1}"] = encode(parts, coords)
    return out


def parse_element(G: FiniteGroup, text: str) -> int:
    """Parse an element by name, cycle notation, or a word in the generator symbols.

    Words are sequences of ``sym`` or ``sym^k`` tokens (``k`` may be negative).
    """
    text = text.strip()
    if text in ("e", "1", ""):
        return 0
    if G.names is not None and text in G.names:
        return G.names.index(text)
    if text.startswith("(") and G.label.startswith("S"):
        k = int(G.label[1:])
        perm = list(range(k))
        for cyc in re.findall(r"\(([^)]*)\)", text):
            pts = [int(c) - 1 for c in cyc if c.isdigit()]
            step = list(range(k))
            for a, b in zip(pts, pts[1:] + pts[:1]):
                step[a] = b
            perm = list(_perm_mul(tuple(perm), tuple(step)))
        name = cycle_notation(perm)
        if name in G.names:
            return G.names.index(name)
        raise GroupError(f"cannot parse element {text!r}")
    syms = sorted(G.generator_names, key=len, reverse=True)
    if not syms:
        raise GroupError(f"cannot parse element {text!r} in {G.label}")
    token = re.compile("(" + "|".join(re.escape(s) for s in syms) + r")(?:\^(-?\d+))?")
    pos = 0
    acc = 0
    while pos < len(text):
        m = token.match(text, pos)
        if not m:
            raise GroupError(f"cannot parse element {text!r} in {G.label}")
        g = G.generator_names[m.group(1)]
        acc = G.mul(acc, G.power(g, int(m.group(2) or 1)))
        pos = m.end()
    return acc
