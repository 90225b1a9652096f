"""Bitset subgroup machinery.

An :class:`ElementSet` is a Python integer used as a bitset over the elements
of one group.  Subgroups are grown by coset enumeration: to adjoin ``x`` to a
subgroup ``H`` we keep a union of right cosets ``Hr`` and close it under
right multiplication by the generators, so the Python-level work is
proportional to the index rather than the order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptySeed, NotSubgroup, OrderBound
from .group import FiniteGroup

DEFAULT_LATTICE_BOUND = 256


class ElementSet:
    """Immutable set of elements of ``group``."""

    __slots__ = ("group", "bits", "_indices")

    def __init__(self, group: FiniteGroup, bits: int):
        self.group = group
        self.bits = bits
        self._indices = None

    @classmethod
    def from_indices(cls, group: FiniteGroup, indices: Iterable[int]) -> "ElementSet":
        bits = 0
        for i in indices:
            i = int(i)
            group._check(i)
            bits |= 1 << i
        return cls(group, bits)

    @classmethod
    def from_mask(cls, group: FiniteGroup, mask: np.ndarray) -> "ElementSet":
        return cls(group, _mask_to_bits(mask))

    @classmethod
    def trivial(cls, group: FiniteGroup) -> "ElementSet":
        return cls(group, 1)

    @classmethod
    def whole(cls, group: FiniteGroup) -> "ElementSet":
        return cls(group, (1 << group.order) - 1)

    @property
    def indices(self) -> np.ndarray:
        if self._indices is None:
            idx = _bits_to_indices(self.bits, self.group.order)
            idx.flags.writeable = False
            self._indices = idx
        return self._indices

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.order, dtype=bool)
        m[self.indices] = True
        return m

    def to_list(self) -> list[int]:
        return self.indices.tolist()

    def is_trivial(self) -> bool:
        return self.bits == 1

    def _other(self, other: "ElementSet") -> int:
        if other.group is not self.group:
            self.group.same_as(other.group)
        return other.bits

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self):
        return iter(self.to_list())

    def __contains__(self, x: int) -> bool:
        return bool(self.bits >> x & 1)

    def __and__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.group, self.bits & self._other(other))

    def __or__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.group, self.bits | self._other(other))

    def __le__(self, other: "ElementSet") -> bool:
        return self.bits & ~self._other(other) == 0

    def __lt__(self, other: "ElementSet") -> bool:
        return self <= other and self.bits != other.bits

    def __eq__(self, other) -> bool:
        if not isinstance(other, ElementSet):
            return NotImplemented
        return self.bits == other.bits and (self.group is other.group or self.group == other.group)

    def __hash__(self) -> int:
        return hash(self.bits)

    def __repr__(self) -> str:
        items = self.to_list()
        shown = ", ".join(map(str, items[:12])) + (", ..." if len(items) > 12 else "")
        return f"ElementSet({{{shown}}}, size={len(items)})"

    def sort_key(self) -> tuple[int, int]:
        return (len(self), self.bits)


def _mask_to_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def _bits_to_indices(bits: int, n: int) -> np.ndarray:
    raw = np.frombuffer(bits.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")[:n])


def as_set(g: FiniteGroup, x) -> ElementSet:
    if isinstance(x, ElementSet):
        g.same_as(x.group)
        return x
    return ElementSet.from_indices(g, x)


# -- closure -------------------------------------------------------------------


def _extend(g: FiniteGroup, base_mask, base_list: Sequence[int],
            gens: Sequence[int]) -> bytearray:
    """Membership mask of ``<base, gens>`` where ``base`` is a subgroup and
    ``gens`` together with ``base`` generate the result."""
    rows, cols = g.rows, g.cols
    mask = bytearray(base_mask)
    reps = [0]
    for r in reps:
        row = rows[r]
        for s in gens:
            x = row[s]
            if not mask[x]:
                col = cols[x]
                for h in base_list:
                    mask[col[h]] = 1
                reps.append(x)
    return mask


def _bytes_to_bits(mask: bytearray) -> int:
    return _mask_to_bits(np.frombuffer(mask, dtype=np.uint8))


def closure_with_generators(g: FiniteGroup, seed: Iterable[int]) -> tuple[ElementSet, tuple[int, ...]]:
    """Subgroup generated by ``seed`` together with the seed elements that
    were actually needed (taken in the given order)."""
    mask = bytearray(g.order)
    mask[0] = 1
    members = [0]
    used: list[int] = []
    for x in seed:
        if mask[x]:
            continue
        used.append(int(x))
        mask = _extend(g, mask, members, used)
        members = [i for i, b in enumerate(mask) if b]
    return ElementSet(g, _bytes_to_bits(mask)), tuple(used)


def closure(g: FiniteGroup, seed) -> ElementSet:
    """Smallest subgroup containing ``seed``."""
    s = as_set(g, seed)
    if s.bits == 0:
        raise EmptySeed("closure of an empty set")
    return closure_with_generators(g, s.to_list())[0]


def join(g: FiniteGroup, *parts) -> ElementSet:
    seed = 0
    for p in parts:
        seed |= as_set(g, p).bits
    return closure(g, ElementSet(g, seed or 1))


def generators_of(h: ElementSet) -> tuple[int, ...]:
    """Greedy generating set of the subgroup ``h`` (index order)."""
    g = h.group
    key = ("gens", h.bits)
    if key not in g._memo:
        g._memo[key] = closure_with_generators(g, h.to_list())[1]
    return g._memo[key]


def cyclic_subgroup(g: FiniteGroup, x: int) -> ElementSet:
    bits, y = 1, x
    while y != 0:
        bits |= 1 << y
        y = int(g.table[y, x])
    return ElementSet(g, bits)


def is_subgroup(h: ElementSet) -> bool:
    if not h.bits & 1:
        return False
    idx = h.indices
    prods = h.group.table[np.ix_(idx, idx)]
    return bool(h.mask[prods].all())


def _require_subgroup(h: ElementSet) -> None:
    if not is_subgroup(h):
        raise NotSubgroup(f"{h!r} is not a subgroup")


def is_cyclic(h: ElementSet) -> bool:
    g = h.group
    return bool(g.element_orders[h.indices].max() == len(h))


def _conjugates(g: FiniteGroup, elems: np.ndarray) -> np.ndarray:
    """``out[x, i] = x^-1 * elems[i] * x`` for every group element ``x``."""
    t = g.table
    xs = np.arange(g.order)
    return t[t[g.inverses[:, None], elems[None, :]], xs[:, None]]


# -- normalizers and friends -------------------------------------------------


def normalizer(g: FiniteGroup, h) -> ElementSet:
    h = as_set(g, h)
    _require_subgroup(h)
    gens = np.asarray(generators_of(h), dtype=np.int64)
    if len(gens) == 0:
        return ElementSet.whole(g)
    ok = h.mask[_conjugates(g, gens)].all(axis=1)
    return ElementSet.from_mask(g, ok)


def centralizer(g: FiniteGroup, h) -> ElementSet:
    h = as_set(g, h)
    _require_subgroup(h)
    gens = np.asarray(generators_of(h), dtype=np.int64)
    if len(gens) == 0:
        return ElementSet.whole(g)
    ok = (g.table[:, gens] == g.table[gens, :].T).all(axis=1)
    return ElementSet.from_mask(g, ok)


def center(g: FiniteGroup) -> ElementSet:
    return centralizer(g, ElementSet.whole(g))


def core(g: FiniteGroup, h) -> ElementSet:
    """Largest normal subgroup of ``g`` inside ``h``."""
    h = as_set(g, h)
    _require_subgroup(h)
    members = h.indices
    stays = h.mask[_conjugates(g, members)].all(axis=0)
    return ElementSet.from_indices(g, members[stays])


def normal_closure(g: FiniteGroup, h) -> ElementSet:
    h = as_set(g, h)
    _require_subgroup(h)
    gens = np.asarray(generators_of(h), dtype=np.int64)
    if len(gens) == 0:
        return ElementSet.trivial(g)
    conj = np.unique(_conjugates(g, gens))
    return closure_with_generators(g, conj.tolist())[0]


def is_normal(h: ElementSet) -> bool:
    g = h.group
    gens = np.asarray(generators_of(h), dtype=np.int64)
    if len(gens) == 0:
        return True
    return bool(h.mask[_conjugates(g, gens)].all())


def commutator(g: FiniteGroup, x, y) -> ElementSet:
    """Subgroup generated by all ``a^-1 b^-1 a b`` with ``a`` in x, ``b`` in y."""
    x, y = as_set(g, x), as_set(g, y)
    _require_subgroup(x)
    _require_subgroup(y)
    key = ("comm", x.bits, y.bits)
    if key in g._memo:
        return g._memo[key]
    t, inv = g.table, g.inverses
    a, b = x.indices, y.indices
    comms = t[t[t[inv[a][:, None], inv[b][None, :]], a[:, None]], b[None, :]]
    result = closure_with_generators(g, np.unique(comms).tolist())[0]
    g._memo[key] = result
    g._memo[("comm", y.bits, x.bits)] = result
    return result


# -- series --------------------------------------------------------------------


def derived_series(g: FiniteGroup, within: ElementSet | None = None) -> list[ElementSet]:
    """``[H, H', H'', ...]`` up to the first repeated term (not repeated)."""
    h = ElementSet.whole(g) if within is None else as_set(g, within)
    series = [h]
    while True:
        nxt = commutator(g, series[-1], series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)


def lower_central_series(g: FiniteGroup, within: ElementSet | None = None) -> list[ElementSet]:
    h = ElementSet.whole(g) if within is None else as_set(g, within)
    series = [h]
    while True:
        nxt = commutator(g, series[-1], h)
        if nxt == series[-1]:
            return series
        series.append(nxt)


def nilpotent_residual(g: FiniteGroup, within: ElementSet | None = None) -> ElementSet:
    return lower_central_series(g, within)[-1]


def is_nilpotent(g: FiniteGroup, within: ElementSet | None = None) -> bool:
    return nilpotent_residual(g, within).is_trivial()


def is_soluble(g: FiniteGroup, within: ElementSet | None = None) -> bool:
    return derived_series(g, within)[-1].is_trivial()


def is_metabelian(g: FiniteGroup, within: ElementSet | None = None) -> bool:
    series = derived_series(g, within)
    return series[-1].is_trivial() and len(series) <= 3


# -- lattice -------------------------------------------------------------------


@dataclass
class SubgroupLattice:
    """All subgroups of ``group`` sorted by ``(size, bits)``.

    ``min_generators[bits]`` is the minimal number of generators of that
    subgroup and ``generators[bits]`` a generating tuple of that length.
    """

    group: FiniteGroup
    subgroups: list[ElementSet]
    min_generators: dict[int, int]
    generators: dict[int, tuple[int, ...]]
    cyclic: list[tuple[ElementSet, int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)

    def __contains__(self, h: ElementSet) -> bool:
        return h.bits in self.min_generators

    @cached_property
    def position(self) -> dict[int, int]:
        return {h.bits: i for i, h in enumerate(self.subgroups)}

    @cached_property
    def inclusion(self) -> list[list[int]]:
        """``inclusion[i]`` lists the positions of subgroups contained in subgroup ``i``."""
        bits = [h.bits for h in self.subgroups]
        return [[j for j, b in enumerate(bits[: i + 1]) if b & ~a == 0]
                for i, a in enumerate(bits)]

    def subgroups_of(self, h: ElementSet) -> list[ElementSet]:
        return [k for k in self.subgroups if k.bits & ~h.bits == 0]

    def rank_of(self, h: ElementSet) -> int:
        """Prüfer rank of the subgroup ``h``: largest ``d`` among its subgroups."""
        return max(self.min_generators[k.bits] for k in self.subgroups_of(h))

    def normal_subgroups(self) -> list[ElementSet]:
        return [h for h in self.subgroups if is_normal(h)]

    def of_order(self, size: int) -> list[ElementSet]:
        return [h for h in self.subgroups if len(h) == size]


def cyclic_subgroups(g: FiniteGroup) -> list[tuple[ElementSet, int]]:
    """Every cyclic subgroup with its smallest generator, sorted by (size, bits)."""
    key = ("cyclic",)
    if key not in g._memo:
        seen: dict[int, tuple[ElementSet, int]] = {}
        for x in range(g.order):
            z = cyclic_subgroup(g, x)
            if z.bits not in seen:
                seen[z.bits] = (z, x)
        g._memo[key] = sorted(seen.values(), key=lambda p: p[0].sort_key())
    return g._memo[key]


def _conjugate_class(g: FiniteGroup, h: ElementSet, gens: tuple[int, ...]):
    """Distinct conjugates of ``h`` as ``(bits, conjugated generators)`` pairs."""
    n = g.order
    conj = _conjugates(g, h.indices)
    rows = np.zeros((n, n), dtype=bool)
    rows[np.arange(n)[:, None], conj] = True
    packed = np.packbits(rows, axis=1, bitorder="little")
    t, inv = g.table, g.inverses
    out: dict[int, tuple[int, ...]] = {}
    for x in range(n):
        bits = int.from_bytes(packed[x].tobytes(), "little")
        if bits not in out:
            out[bits] = tuple(int(t[t[inv[x], s], x]) for s in gens)
    return out


def all_subgroups(g: FiniteGroup, bound: int = DEFAULT_LATTICE_BOUND,
                  verify: bool = True) -> SubgroupLattice:
    """Enumerate the subgroup lattice.

    Layer ``k`` holds conjugacy-class representatives of the subgroups first
    reached as joins of ``k`` cyclic subgroups, so the layer index is exactly
    the minimal number of generators.  A subgroup generated by ``k + 1``
    elements is the join of a ``k``-generated subgroup and a cyclic one, and
    conjugating that pair moves the smaller subgroup onto its class
    representative; joining representatives with every cyclic subgroup and
    then adding whole conjugacy classes is therefore exhaustive.
    """
    if g.order > bound:
        raise OrderBound(f"lattice of a group of order {g.order} exceeds bound {bound}")
    memo = g._memo.get("lattice")
    if memo is not None:
        return memo
    cyclic = cyclic_subgroups(g)
    d: dict[int, int] = {1: 0}
    gens: dict[int, tuple[int, ...]] = {1: ()}

    def add_class(h: ElementSet, h_gens: tuple[int, ...], depth: int) -> None:
        for bits, conj_gens in _conjugate_class(g, h, h_gens).items():
            d[bits] = depth
            gens[bits] = conj_gens

    layer = []
    for z, x in cyclic:
        if z.bits not in d:
            add_class(z, (x,), 1)
            layer.append(z)
    depth = 1
    while layer:
        depth += 1
        nxt = []
        for h in layer:
            hb = h.bits
            base, members = None, None
            for z, x in cyclic:
                if z.bits & ~hb == 0 or hb & ~z.bits == 0:
                    continue
                if base is None:
                    members = h.to_list()
                    base = bytearray(g.order)
                    for i in members:
                        base[i] = 1
                jb = _bytes_to_bits(_extend(g, base, members, gens[hb] + (x,)))
                if jb not in d:
                    k = ElementSet(g, jb)
                    add_class(k, gens[hb] + (x,), depth)
                    nxt.append(k)
        layer = nxt
    subgroups = sorted((ElementSet(g, b) for b in d), key=ElementSet.sort_key)
    lattice = SubgroupLattice(g, subgroups, d, gens, cyclic)
    if verify:
        _verify_lattice(lattice)
    g._memo["lattice"] = lattice
    return lattice


def _verify_lattice(lattice: SubgroupLattice) -> None:
    g = lattice.group
    known = lattice.min_generators
    full = (1 << g.order) - 1
    if 1 not in known or full not in known:
        raise AssertionError("lattice is missing the trivial subgroup or the whole group")
    bits = list(known)
    for i, a in enumerate(bits):
        for b in bits[i + 1:]:
            if a & b not in known:
                raise AssertionError("lattice is not closed under intersection")
    for h in lattice.subgroups:
        if g.order % len(h):
            raise AssertionError("subgroup order does not divide the group order")


def minimal_generators(g: FiniteGroup, h) -> int:
    """``d(h)`` by exhaustive search over generator tuples of increasing size.

    Candidates are the smallest generators of the cyclic subgroups of ``h`` in
    index order; a candidate already inside the span of the chosen prefix is
    skipped.
    """
    h = as_set(g, h)
    _require_subgroup(h)
    if h.is_trivial():
        return 0
    cands = []
    seen = set()
    for x in h.to_list():
        if x == 0:
            continue
        z = cyclic_subgroup(g, x).bits
        if z not in seen:
            seen.add(z)
            cands.append(x)
    target = h.bits

    def search(mask, members, used, start, left) -> bool:
        for i in range(start, len(cands)):
            x = cands[i]
            if mask[x]:
                continue
            new = _extend(g, mask, members, used + [x])
            if left == 1:
                if _bytes_to_bits(new) == target:
                    return True
            elif search(new, [j for j, b in enumerate(new) if b], used + [x], i + 1, left - 1):
                return True
        return False

    start = bytearray(g.order)
    start[0] = 1
    k = 1
    while not search(start, [0], [], 0, k):
        k += 1
    return k


def prufer_rank(g: FiniteGroup, bound: int = DEFAULT_LATTICE_BOUND) -> int:
    """Largest minimal generator count over all subgroups; 0 for the trivial group."""
    return max(all_subgroups(g, bound).min_generators.values())


def subgroup_rank(g: FiniteGroup, h, bound: int = DEFAULT_LATTICE_BOUND) -> int:
    return all_subgroups(g, bound).rank_of(as_set(g, h))
