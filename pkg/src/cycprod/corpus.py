"""Deterministic corpus of small groups used by the batch verifier."""

from __future__ import annotations

import hashlib
import math
import os
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .group import (
    Cyclic,
    Dihedral,
    DirectProduct,
    FiniteGroup,
    FromPermutations,
    GeneralizedQuaternion,
    InvertedCyclicExtension,
    build,
    cyclic_semidirect,
    recipe_to_dict,
)
from .io import format_cycles
from .lattice import _extend, all_subgroups

MAX_ORDER_ENV = "CYCPROD_MAX_ORDER"


@dataclass
class CorpusConfig:
    max_order: int = 128
    cyclic_max: int = 64
    dihedral_max: int = 32
    quaternion_max_exp: int = 6
    inverting_max_exp: int = 6
    extension_max_order: int = 128
    semidirect_max: int = 128
    direct_max: int = 128
    symmetric_degree: int = 5

    @classmethod
    def from_env(cls, **overrides) -> "CorpusConfig":
        cfg = cls(**overrides)
        env = os.environ.get(MAX_ORDER_ENV)
        if env and "max_order" not in overrides:
            cfg.max_order = int(env)
        if cfg.max_order < 1:
            raise ValueError("max_order must be positive")
        return cfg


@dataclass
class CatalogEntry:
    name: str
    recipe: object
    group: FiniteGroup
    aliases: list[str] = field(default_factory=list)
    factorizations: list = field(default_factory=list)
    multi_products: list = field(default_factory=list)
    results: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.group.order

    def manifest(self) -> dict:
        return {"name": self.name, "order": self.order, "recipe": recipe_to_dict(self.recipe),
                "aliases": list(self.aliases), "digest": self.group.digest}


def _units_of_order_dividing(m: int, k: int) -> list[int]:
    if m == 1:
        return [0]
    return [u for u in range(1, m) if math.gcd(u, m) == 1 and pow(u, k, m) == 1]


def _recipes(cfg: CorpusConfig):
    top = cfg.max_order
    for n in range(1, min(cfg.cyclic_max, top) + 1):
        yield Cyclic(n)
    for n in range(2, cfg.dihedral_max + 1):
        if 2 * n <= top:
            yield Dihedral(n)
    for e in range(3, cfg.quaternion_max_exp + 1):
        if 2 ** e <= top:
            yield GeneralizedQuaternion(2 ** e)
    for e in range(1, cfg.inverting_max_exp + 1):
        if 2 ** (e + 1) <= top:
            yield cyclic_semidirect(2 ** e, 2, -1)
    for total in range(4, 64):
        for n in range(2, total):
            m = total - n + 1
            if m >= 3 and 2 ** total <= min(top, cfg.extension_max_order):
                yield InvertedCyclicExtension(n, m)
    for m in range(2, top):
        for k in range(2, top):
            if m * k > min(top, cfg.semidirect_max):
                continue
            for u in _units_of_order_dividing(m, k):
                yield cyclic_semidirect(m, k, u)


def _base_pool(cfg: CorpusConfig) -> list:
    pool = [Cyclic(n) for n in range(2, min(cfg.cyclic_max, cfg.direct_max // 2) + 1)]
    pool += [Dihedral(n) for n in range(2, cfg.dihedral_max + 1) if 4 * n <= cfg.direct_max]
    pool += [GeneralizedQuaternion(2 ** e) for e in range(3, cfg.quaternion_max_exp + 1)
             if 2 ** (e + 1) <= cfg.direct_max]
    return pool


def _order_of(recipe) -> int:
    from .group import _expected_order

    return _expected_order(recipe)


def _direct_products(cfg: CorpusConfig):
    pool = _base_pool(cfg)
    limit = min(cfg.max_order, cfg.direct_max)
    for i, left in enumerate(pool):
        for right in pool[i:]:
            if _order_of(left) * _order_of(right) <= limit:
                yield DirectProduct(left, right)


def _symmetric_subgroups(degree: int, max_order: int):
    """Each subgroup of Sym(degree), as a permutation recipe on its own generators."""
    if degree < 2:
        return
    cycle = "(" + " ".join(str(i) for i in range(1, degree + 1)) + ")"
    sym = build(FromPermutations(degree, (cycle, "(1 2)")), max_order=math.factorial(degree))
    # recover permutations by acting on the points through the BFS words
    perms = _permutation_images(sym, degree, [cycle, "(1 2)"])
    lattice = all_subgroups(sym, bound=max(256, sym.order))
    for i, h in enumerate(lattice.subgroups):
        if len(h) > max_order:
            continue
        gens = lattice.generators[h.bits]
        strings = tuple(format_cycles(perms[x]) for x in gens)
        yield FromPermutations(degree, strings, label=f"S{degree}:sub{i}[{len(h)}]")


def _permutation_images(g: FiniteGroup, degree: int, gen_strings) -> list[list[int]]:
    from .io import parse_cycles

    gen_perms = [parse_cycles(s, degree) for s in gen_strings]
    images: list[list[int] | None] = [None] * g.order
    images[0] = list(range(degree))
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s, p in zip(g.generators, gen_perms):
                y = g.rows[x][s]
                if images[y] is None:
                    images[y] = [p[images[x][i]] for i in range(degree)]
                    nxt.append(y)
        frontier = nxt
    return images


def element_profiles(g: FiniteGroup) -> list[tuple[int, int, int]]:
    """Per-element isomorphism invariant: order, centralizer size, number of square roots."""
    t = g.table
    central = (t == t.T).sum(axis=1).tolist()
    roots = np.bincount(np.diagonal(t), minlength=g.order).tolist()
    orders = g.element_orders.tolist()
    return [(orders[x], central[x], roots[x]) for x in range(g.order)]


def group_invariant(g: FiniteGroup) -> tuple:
    return (g.order, tuple(sorted(Counter(element_profiles(g)).items())))


def find_isomorphism(g: FiniteGroup, h: FiniteGroup) -> list[int] | None:
    """An isomorphism ``g -> h`` as an image list, or ``None``.

    Generators of ``g`` are picked greedily, largest order and rarest
    profile first.  Their images are searched among elements of ``h`` with
    the same profile.  Every partial assignment is extended along the Cayley
    graph of the subgroup it generates and dropped on the first clash.
    """
    n = g.order
    if h.order != n:
        return None
    pg, ph = element_profiles(g), element_profiles(h)
    if Counter(pg) != Counter(ph):
        return None
    if n == 1:
        return [0]
    classes: dict = {}
    for y, prof in enumerate(ph):
        classes.setdefault(prof, []).append(y)
    freq = Counter(pg)
    ranked = sorted(range(1, n), key=lambda x: (-pg[x][0], freq[pg[x]], x))
    gens: list[int] = []
    mask = bytearray(n)
    mask[0] = 1
    members = [0]
    for x in ranked:
        if not mask[x]:
            gens.append(x)
            mask = _extend(g, mask, members, gens)
            members = [i for i, b in enumerate(mask) if b]
            if len(members) == n:
                break
    grows, hrows, horders = g.rows, h.rows, h.element_orders.tolist()
    gorders = g.element_orders.tolist()
    pair_orders = {(i, j): gorders[grows[gens[i]][gens[j]]]
                   for i in range(len(gens)) for j in range(i)}

    def extend(images: list[int]) -> list[int] | None:
        # map <gens[:k]> onto <images> along the Cayley graph; None on a clash
        sub = gens[:len(images)]
        phi = [-1] * n
        phi[0] = 0
        used = bytearray(n)
        used[0] = 1
        queue = [0]
        for x in queue:
            gx, hx = grows[x], hrows[phi[x]]
            for s, t in zip(sub, images):
                y, z = gx[s], hx[t]
                if phi[y] < 0:
                    if used[z]:
                        return None
                    phi[y] = z
                    used[z] = 1
                    queue.append(y)
                elif phi[y] != z:
                    return None
        return phi

    def search(images: list[int]) -> list[int] | None:
        k = len(images)
        if k == len(gens):
            return extend(images)
        for t in classes[pg[gens[k]]]:
            if any(horders[hrows[t][images[j]]] != pair_orders[(k, j)] for j in range(k)):
                continue
            if k + 1 < len(gens) and extend(images + [t]) is None:
                continue
            found = search(images + [t])
            if found is not None:
                return found
        return None

    return search([])


def generate_corpus(config: CorpusConfig | None = None) -> list[CatalogEntry]:
    """Build, validate and deduplicate every corpus family.

    The first occurrence of each isomorphism type is kept and later
    duplicates are recorded as its aliases.
    """
    cfg = config or CorpusConfig.from_env()
    recipes = list(_recipes(cfg))
    recipes += list(_direct_products(cfg))
    if cfg.symmetric_degree >= 2:
        recipes += list(_symmetric_subgroups(cfg.symmetric_degree, cfg.max_order))
    entries: list[CatalogEntry] = []
    buckets: dict[tuple, list[CatalogEntry]] = {}
    seen: set[str] = set()
    for recipe in recipes:
        # some families overlap (C2^e:C2 by inversion is also a cyclic semidirect)
        if recipe.name in seen:
            continue
        seen.add(recipe.name)
        g = build(recipe, max_order=cfg.max_order)
        bucket = buckets.setdefault(group_invariant(g), [])
        for entry in bucket:
            if find_isomorphism(entry.group, g) is not None:
                entry.aliases.append(recipe.name)
                break
        else:
            entry = CatalogEntry(recipe.name, recipe, g)
            bucket.append(entry)
            entries.append(entry)
    return entries


def corpus_hash(entries) -> str:
    h = hashlib.sha256()
    for e in entries:
        h.update(e.name.encode())
        h.update(b"\0")
        h.update(e.group.digest.encode())
        h.update(b"\n")
    return h.hexdigest()
