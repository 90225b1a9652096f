"""Finite groups as multiplication tables, plus the constructors that build them.

Elements are the integers ``0..n-1`` and ``0`` is always the identity.
Tables are numpy arrays and are frozen after construction, so a group can be
shared freely between threads or shipped to worker processes.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .errors import (
    GroupMismatch,
    IndexOutOfRange,
    InvalidAction,
    NotNormal,
    NotSubgroup,
    OrderBound,
    TableInvalid,
)

DEFAULT_MAX_ORDER = 512
DEFAULT_ASSOC_BOUND = 512


class FiniteGroup:
    """A finite group given by its Cayley table.

    ``table[i, j]`` is the product ``i * j``.  ``generators`` is an optional
    ordered generating list; constructors always supply one, and for groups
    read from a table a greedy one is computed on demand.
    """

    def __init__(
        self,
        table,
        *,
        name: str = "",
        generators: Sequence[int] | None = None,
        check: bool = True,
        assoc_bound: int = DEFAULT_ASSOC_BOUND,
    ):
        table = np.array(table, dtype=np.int32, copy=True)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise TableInvalid(f"table must be a non-empty square array, got shape {table.shape}")
        n = table.shape[0]
        if check:
            _validate_table(table, assoc_bound)
        table.flags.writeable = False
        self.table = table
        self.order = n
        self.name = name
        inverses = np.argmax(table == 0, axis=1).astype(np.int32)
        inverses.flags.writeable = False
        self.inverses = inverses
        self.element_orders = _element_orders(table)
        if generators is not None:
            gens = [int(x) for x in generators]
            for x in gens:
                if not 0 <= x < n:
                    raise IndexOutOfRange(f"generator {x} out of range for order {n}")
            self._generators = tuple(gens)
        else:
            self._generators = None
        # per-group memo for lattices, series and friends; see lattice.memo
        self._memo: dict = {}

    # -- element arithmetic -------------------------------------------------

    def _check(self, x: int) -> int:
        if not 0 <= x < self.order:
            raise IndexOutOfRange(f"element {x} out of range for group of order {self.order}")
        return x

    def multiply(self, x: int, y: int) -> int:
        return int(self.table[self._check(x), self._check(y)])

    def inverse(self, x: int) -> int:
        return int(self.inverses[self._check(x)])

    def conjugate(self, x: int, by: int) -> int:
        """``by^-1 * x * by``."""
        t = self.table
        return int(t[t[self.inverses[self._check(by)], self._check(x)], by])

    def power(self, x: int, k: int) -> int:
        self._check(x)
        k %= int(self.element_orders[x])
        result, base = 0, x
        while k:
            if k & 1:
                result = int(self.table[result, base])
            base = int(self.table[base, base])
            k >>= 1
        return result

    def element_order(self, x: int) -> int:
        return int(self.element_orders[self._check(x)])

    # -- structure ----------------------------------------------------------

    @property
    def generators(self) -> tuple[int, ...]:
        if self._generators is None:
            self._generators = _greedy_generators(self)
        return self._generators

    @cached_property
    def rows(self) -> list[list[int]]:
        return self.table.tolist()

    @cached_property
    def cols(self) -> list[list[int]]:
        """``cols[x][h] == h * x``."""
        return self.table.T.tolist()

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def digest(self) -> str:
        return hashlib.sha256(self.table.tobytes()).hexdigest()

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash(self.digest)

    def __repr__(self) -> str:
        label = self.name or "FiniteGroup"
        return f"<{label} of order {self.order}>"

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_memo"] = {}
        state.pop("rows", None)
        state.pop("cols", None)
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self.table.flags.writeable = False

    def same_as(self, other: "FiniteGroup") -> None:
        if other is not self and other != self:
            raise GroupMismatch("elements belong to different groups")

    def to_cayley_text(self) -> str:
        lines = [str(self.order)]
        lines.extend(" ".join(map(str, row)) for row in self.table.tolist())
        return "\n".join(lines) + "\n"

    def relabel(self, new_index: Sequence[int], name: str | None = None) -> "FiniteGroup":
        """Return the same group with element ``i`` renamed to ``new_index[i]``."""
        perm = np.asarray(new_index, dtype=np.int32)
        if perm[0] != 0:
            raise TableInvalid("relabeling must fix the identity")
        new_table = np.empty_like(self.table)
        new_table[np.ix_(perm, perm)] = perm[self.table]
        gens = [int(perm[x]) for x in self.generators]
        return FiniteGroup(new_table, name=self.name if name is None else name,
                           generators=gens, check=False)


def _validate_table(table: np.ndarray, assoc_bound: int) -> None:
    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        raise TableInvalid(f"entries must lie in [0, {n})")
    ident = np.arange(n)
    if not np.array_equal(table[0], ident) or not np.array_equal(table[:, 0], ident):
        raise TableInvalid("element 0 does not act as the identity")
    rows_ok = (np.sort(table, axis=1) == ident).all(axis=1)
    if not rows_ok.all():
        raise TableInvalid(f"row {int(np.argmin(rows_ok))} is not a permutation")
    cols_ok = (np.sort(table, axis=0) == ident[:, None]).all(axis=0)
    if not cols_ok.all():
        raise TableInvalid(f"column {int(np.argmin(cols_ok))} is not a permutation")
    if n <= assoc_bound:
        for i in range(n):
            # (i*j)*k against i*(j*k) for all j, k at once
            if not np.array_equal(table[table[i]], table[i][table]):
                raise TableInvalid(f"associativity fails for left factor {i}")


def _element_orders(table: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    ident = np.arange(n)
    orders = np.zeros(n, dtype=np.int64)
    cur = ident.copy()
    k = 1
    while True:
        fresh = (cur == 0) & (orders == 0)
        orders[fresh] = k
        if orders.all() or k > n:
            break
        cur = table[cur, ident]
        k += 1
    orders.flags.writeable = False
    return orders


def _greedy_generators(g: FiniteGroup) -> tuple[int, ...]:
    """Elements taken in index order whenever they leave the current span."""
    inside = np.zeros(g.order, dtype=bool)
    inside[0] = True
    gens: list[int] = []
    for x in range(1, g.order):
        if inside[x]:
            continue
        gens.append(x)
        inside = _span(g.table, gens)
        if inside.all():
            break
    return tuple(gens)


def _span(table: np.ndarray, gens: Sequence[int]) -> np.ndarray:
    inside = np.zeros(table.shape[0], dtype=bool)
    inside[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = int(table[x, s])
                if not inside[y]:
                    inside[y] = True
                    nxt.append(y)
        frontier = nxt
    return inside


# -- recipes ------------------------------------------------------------------


@dataclass(frozen=True)
class Cyclic:
    n: int

    @property
    def name(self) -> str:
        return f"C{self.n}"


@dataclass(frozen=True)
class Dihedral:
    """Dihedral group of order ``2n``: rotations ``0..n-1`` then reflections."""

    n: int

    @property
    def name(self) -> str:
        return f"D{self.n}"


@dataclass(frozen=True)
class GeneralizedQuaternion:
    """Generalized quaternion group; ``order`` is a power of two, at least 8."""

    order: int

    @property
    def name(self) -> str:
        return f"Q{self.order}"


@dataclass(frozen=True)
class InvertedCyclicExtension:
    """``<a, b | a^(2^n), b^(2^m), b^(2^(m-1)) = a^(2^(n-1)), a^b = a^-1>``.

    Order ``2^(n+m-1)``.  With ``m == 2`` this is the generalized quaternion
    group; larger ``m`` gives a cyclic 2-group on top of an inverted one whose
    involution it shares.
    """

    n: int
    m: int

    @property
    def name(self) -> str:
        return f"C{2 ** self.n}.C{2 ** self.m}"


@dataclass(frozen=True)
class DirectProduct:
    left: "GroupRecipe"
    right: "GroupRecipe"

    @property
    def name(self) -> str:
        return f"{_wrap(self.left)}x{_wrap(self.right)}"


@dataclass(frozen=True)
class SemidirectProduct:
    """``normal ⋊ acting``.

    ``action[i]`` is the automorphism of the normal factor induced by the i-th
    generator of the acting factor, written as the tuple of images of the
    normal factor's elements.  Elements are pairs ``(x, k)`` stored at index
    ``x * |acting| + k`` with ``(x1, k1)(x2, k2) = (x1 * k1(x2), k1 k2)``.
    """

    normal: "GroupRecipe"
    acting: "GroupRecipe"
    action: tuple[tuple[int, ...], ...]
    label: str = ""

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        return f"{_wrap(self.normal)}:{_wrap(self.acting)}"


@dataclass(frozen=True)
class FromCayleyFile:
    path: str

    @property
    def name(self) -> str:
        return Path(self.path).stem


@dataclass(frozen=True)
class FromPermutations:
    """Permutation group on points ``1..degree``.

    Products compose left to right: ``x * y`` applies ``x`` first.
    """

    degree: int
    generators: tuple[str, ...]
    label: str = ""

    @property
    def name(self) -> str:
        return self.label or "<" + ", ".join(self.generators) + ">"


GroupRecipe = Union[
    Cyclic, Dihedral, GeneralizedQuaternion, InvertedCyclicExtension,
    DirectProduct, SemidirectProduct, FromCayleyFile, FromPermutations,
]


def _wrap(recipe) -> str:
    name = recipe.name
    return f"({name})" if isinstance(recipe, (DirectProduct, SemidirectProduct)) and not getattr(recipe, "label", "") else name


def recipe_to_dict(recipe) -> dict:
    kind = type(recipe).__name__
    if isinstance(recipe, DirectProduct):
        return {"kind": kind, "left": recipe_to_dict(recipe.left), "right": recipe_to_dict(recipe.right)}
    if isinstance(recipe, SemidirectProduct):
        return {"kind": kind, "normal": recipe_to_dict(recipe.normal),
                "acting": recipe_to_dict(recipe.acting),
                "action": [list(a) for a in recipe.action], "label": recipe.label}
    if isinstance(recipe, FromPermutations):
        return {"kind": kind, "degree": recipe.degree, "generators": list(recipe.generators),
                "label": recipe.label}
    return {"kind": kind, **recipe.__dict__}


def cyclic_action(m: int, u: int) -> tuple[int, ...]:
    """Automorphism ``x -> u*x`` of the cyclic group of order ``m``."""
    return tuple((u * x) % m for x in range(m))


def cyclic_semidirect(m: int, k: int, u: int) -> SemidirectProduct:
    """``C_m ⋊ C_k`` where the generator of ``C_k`` acts as ``x -> u*x``."""
    return SemidirectProduct(Cyclic(m), Cyclic(k), (cyclic_action(m, u),),
                             label=f"C{m}:C{k}[{u % m}]")


# -- build --------------------------------------------------------------------


def build(recipe, *, max_order: int = DEFAULT_MAX_ORDER,
          assoc_bound: int = DEFAULT_ASSOC_BOUND) -> FiniteGroup:
    """Construct the group described by ``recipe``.

    Raises ``OrderBound`` when the group would exceed ``max_order``,
    ``InvalidAction`` for a bad semidirect action and ``TableInvalid`` for a
    malformed input file.
    """
    expected = _expected_order(recipe)
    if expected is not None and expected > max_order:
        raise OrderBound(f"{recipe.name} has order {expected} > {max_order}")
    if isinstance(recipe, Cyclic):
        g = _cyclic(recipe.n)
    elif isinstance(recipe, Dihedral):
        g = _dihedral(recipe.n)
    elif isinstance(recipe, GeneralizedQuaternion):
        g = _quaternion(recipe.order)
    elif isinstance(recipe, InvertedCyclicExtension):
        g = _inverted_extension(recipe.n, recipe.m)
    elif isinstance(recipe, DirectProduct):
        g = direct_product(build(recipe.left, max_order=max_order),
                           build(recipe.right, max_order=max_order))
    elif isinstance(recipe, SemidirectProduct):
        g = semidirect_product(build(recipe.normal, max_order=max_order),
                               build(recipe.acting, max_order=max_order), recipe.action)
    elif isinstance(recipe, FromCayleyFile):
        from .io import parse_group_text

        return parse_group_text(Path(recipe.path).read_text(), max_order=max_order,
                                assoc_bound=assoc_bound, name=recipe.name)
    elif isinstance(recipe, FromPermutations):
        from .io import parse_cycles

        perms = [parse_cycles(s, recipe.degree, line=i + 1) for i, s in enumerate(recipe.generators)]
        g = permutation_group(recipe.degree, perms, max_order=max_order)
    else:
        raise TypeError(f"unknown recipe {recipe!r}")
    if g.order > max_order:
        raise OrderBound(f"{recipe.name} has order {g.order} > {max_order}")
    if g.order <= assoc_bound:
        _validate_table(np.asarray(g.table), assoc_bound)
    g.name = recipe.name
    return g


def _expected_order(recipe) -> int | None:
    if isinstance(recipe, Cyclic):
        if recipe.n < 1:
            raise ValueError("cyclic order must be positive")
        return recipe.n
    if isinstance(recipe, Dihedral):
        if recipe.n < 1:
            raise ValueError("dihedral parameter must be positive")
        return 2 * recipe.n
    if isinstance(recipe, GeneralizedQuaternion):
        o = recipe.order
        if o < 8 or o & (o - 1):
            raise ValueError("generalized quaternion order must be a power of two >= 8")
        return o
    if isinstance(recipe, InvertedCyclicExtension):
        if recipe.n < 2 or recipe.m < 2:
            raise ValueError("inverted cyclic extension needs n >= 2 and m >= 2")
        return 2 ** (recipe.n + recipe.m - 1)
    if isinstance(recipe, DirectProduct):
        a, b = _expected_order(recipe.left), _expected_order(recipe.right)
        return None if a is None or b is None else a * b
    if isinstance(recipe, SemidirectProduct):
        a, b = _expected_order(recipe.normal), _expected_order(recipe.acting)
        return None if a is None or b is None else a * b
    return None


def _from_rule(n: int, mul, generators) -> FiniteGroup:
    i = np.arange(n)
    table = mul(i[:, None], i[None, :])
    return FiniteGroup(table, generators=generators, check=False)


def _cyclic(n: int) -> FiniteGroup:
    return _from_rule(n, lambda a, b: (a + b) % n, [1] if n > 1 else [])


def _dihedral(n: int) -> FiniteGroup:
    # index i -> r^i, index n + i -> r^i s ; s r = r^-1 s
    def mul(x, y):
        xi, xs = x % n, x // n
        yi, ys = y % n, y // n
        rot = np.where(xs == 0, xi + yi, xi - yi) % n
        return rot + n * ((xs + ys) % 2)

    gens = [1 % n, n] if n > 1 else [1]
    return _from_rule(2 * n, mul, [x for x in dict.fromkeys(gens) if x])


def _inverted_rule(half: int, top: int, n_total: int):
    """Elements ``a^i b^j`` (index ``i + half*j``) with ``b^top = a^(half/2)``."""

    def mul(x, y):
        xi, xj = x % half, x // half
        yi, yj = y % half, y // half
        exp = np.where(xj % 2 == 0, xi + yi, xi - yi)
        j = xj + yj
        wrap = j >= top
        exp = exp + np.where(wrap, half // 2, 0)
        j = np.where(wrap, j - top, j)
        return exp % half + half * j

    return mul


def _quaternion(order: int) -> FiniteGroup:
    half = order // 2
    return _from_rule(order, _inverted_rule(half, 2, order), [1, half])


def _inverted_extension(n: int, m: int) -> FiniteGroup:
    half = 2 ** n
    top = 2 ** (m - 1)
    return _from_rule(half * top, _inverted_rule(half, top, half * top), [1, half])


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Pairs ``(x, y)`` at index ``x * |g2| + y``."""
    n1, n2 = g1.order, g2.order
    idx = np.arange(n1 * n2)
    a, b = idx // n2, idx % n2
    table = g1.table[a[:, None], a[None, :]] * n2 + g2.table[b[:, None], b[None, :]]
    gens = [x * n2 for x in g1.generators] + list(g2.generators)
    return FiniteGroup(table, generators=gens, check=False)


def _check_automorphism(g: FiniteGroup, image: np.ndarray) -> bool:
    if image.shape != (g.order,) or image.min() < 0 or image.max() >= g.order:
        return False
    if len(np.unique(image)) != g.order:
        return False
    return bool(np.array_equal(image[g.table], g.table[image[:, None], image[None, :]]))


def semidirect_product(normal: FiniteGroup, acting: FiniteGroup, action) -> FiniteGroup:
    n, k = normal.order, acting.order
    gens = acting.generators
    if len(action) != len(gens):
        raise InvalidAction(f"action lists {len(action)} automorphisms for {len(gens)} generators")
    images = []
    for i, auto in enumerate(action):
        arr = np.asarray(auto, dtype=np.int64)
        if not _check_automorphism(normal, arr):
            raise InvalidAction(f"image of acting generator {i} is not an automorphism")
        images.append(arr)
    # extend generator images to every element of the acting group
    phi: list[np.ndarray | None] = [None] * k
    phi[0] = np.arange(n)
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s, img in zip(gens, images):
                y = int(acting.table[x, s])
                cand = phi[x][img]
                if phi[y] is None:
                    phi[y] = cand
                    nxt.append(y)
                elif not np.array_equal(phi[y], cand):
                    raise InvalidAction("action does not define a homomorphism")
        frontier = nxt
    if any(p is None for p in phi):
        raise InvalidAction("acting generators do not generate the acting group")
    phi_arr = np.stack(phi)
    # composed[a, b] = phi[a] o phi[b]; must equal phi[a*b]
    composed = phi_arr[np.arange(k)[:, None, None], phi_arr[None, :, :]]
    if not np.array_equal(composed, phi_arr[acting.table]):
        raise InvalidAction("action does not define a homomorphism")
    idx = np.arange(n * k)
    x, kk = idx // k, idx % k
    moved = phi_arr[kk[:, None], x[None, :]]
    table = normal.table[x[:, None], moved] * k + acting.table[kk[:, None], kk[None, :]]
    out_gens = [s * k for s in normal.generators] + list(gens)
    return FiniteGroup(table, generators=out_gens, check=False)


def permutation_group(degree: int, perms: Sequence[Sequence[int]],
                      *, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Group generated by 0-based image tuples, elements in BFS order."""
    ident = tuple(range(degree))
    gens = [tuple(p) for p in perms]
    elems = [ident]
    index = {ident: 0}
    gen_index = []
    head = 0
    while head < len(elems):
        x = elems[head]
        head += 1
        for s in gens:
            y = tuple(s[x[i]] for i in range(degree))
            if y not in index:
                if len(elems) >= max_order:
                    raise OrderBound(f"permutation group exceeds order {max_order}")
                index[y] = len(elems)
                elems.append(y)
    for s in gens:
        gen_index.append(index[s])
    arr = np.array(elems, dtype=np.int64).reshape(len(elems), degree)
    n = len(elems)
    prods = arr[np.arange(n)[None, :, None], arr[:, None, :]]
    # prods[i, j] = arr[j][arr[i]], i.e. apply i then j
    weights = degree ** np.arange(degree, dtype=np.int64)
    codes = {int(c): i for i, c in enumerate(arr @ weights)}
    table = np.vectorize(codes.__getitem__, otypes=[np.int32])(prods @ weights)
    return FiniteGroup(table, generators=[x for x in dict.fromkeys(gen_index) if x], check=False)


def quotient(g: FiniteGroup, normal_subgroup) -> tuple[FiniteGroup, np.ndarray]:
    """Factor group ``g / normal_subgroup`` and the projection onto it.

    Cosets are represented by their smallest element and numbered in
    increasing order of that representative.
    """
    from .lattice import ElementSet, is_normal, is_subgroup

    if isinstance(normal_subgroup, ElementSet):
        g.same_as(normal_subgroup.group)
        nset = normal_subgroup
    else:
        nset = ElementSet.from_indices(g, normal_subgroup)
    if not is_subgroup(nset):
        raise NotSubgroup("quotient needs a subgroup")
    if not is_normal(nset):
        raise NotNormal("quotient needs a normal subgroup")
    members = nset.indices
    proj = np.full(g.order, -1, dtype=np.int64)
    reps = []
    for x in range(g.order):
        if proj[x] < 0:
            proj[g.table[members, x]] = len(reps)
            reps.append(x)
    reps = np.asarray(reps)
    table = proj[g.table[reps[:, None], reps[None, :]]]
    q = FiniteGroup(table, check=False, name=f"{g.name}/N" if g.name else "")
    return q, proj
