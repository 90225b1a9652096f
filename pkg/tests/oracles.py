"""Brute-force reference implementations used as test oracles.

These work on plain nested lists and frozensets and share no code with the
package beyond reading a Cayley table.  They are slow on purpose: every
answer comes from exhaustive search.
"""

from __future__ import annotations

from itertools import combinations


def table_of(g) -> list[list[int]]:
    return g.table.tolist()


def identity_inverse(t: list[list[int]]) -> list[int]:
    n = len(t)
    return [next(j for j in range(n) if t[i][j] == 0) for i in range(n)]


def order_of(t, x: int) -> int:
    k, y = 1, x
    while y != 0:
        y = t[y][x]
        k += 1
    return k


def closure(t, seed) -> frozenset:
    """Fixed point of pairwise products, starting from ``seed`` plus the identity."""
    elems = set(seed) | {0}
    while True:
        new = {t[a][b] for a in elems for b in elems} | elems
        if new == elems:
            return frozenset(elems)
        elems = new


def subgroups(t) -> set[frozenset]:
    """Every subgroup, found by adjoining one element at a time from the top index down."""
    n = len(t)
    found = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        nxt = []
        for h in frontier:
            for x in range(n - 1, 0, -1):
                if x in h:
                    continue
                k = _span(t, h, x)
                if k not in found:
                    found.add(k)
                    nxt.append(k)
        frontier = nxt
    return found


def _span(t, h: frozenset, x: int) -> frozenset:
    elems = set(h)
    queue = [0]
    seen = {0}
    gens = list(h) + [x]
    while queue:
        y = queue.pop()
        for s in gens:
            z = t[y][s]
            if z not in seen:
                seen.add(z)
                queue.append(z)
    return frozenset(seen | elems)


def is_cyclic(t, h) -> bool:
    return any(order_of(t, x) == len(h) for x in h)


def min_generators(t, h: frozenset) -> int:
    """Smallest k with a k-subset of ``h`` generating ``h``.

    Candidates are one generator per cyclic subgroup (any generator of the
    same cyclic subgroup spans the same thing), tried in decreasing index.
    """
    if len(h) == 1:
        return 0
    reps = {}
    for x in sorted(h, reverse=True):
        reps.setdefault(closure(t, [x]), x)
    cands = list(reps.values())
    for k in range(1, len(h) + 1):
        for combo in combinations(cands, k):
            if len(closure(t, combo)) == len(h):
                return k
    raise AssertionError("unreachable")


def prufer_rank(t) -> int:
    return max(min_generators(t, h) for h in subgroups(t))


def is_normal(t, h) -> bool:
    inv = identity_inverse(t)
    return all(t[t[inv[g]][x]][g] in h for g in range(len(t)) for x in h)


def normal_subgroups(t) -> list[frozenset]:
    return [h for h in subgroups(t) if is_normal(t, h)]


def supersoluble_by_chains(t) -> bool:
    """Exhaustive search for 1 = N_0 < ... < N_k = G, each N_i normal in G
    and each N_{i+1}/N_i cyclic."""
    n = len(t)
    normals = normal_subgroups(t)
    whole = frozenset(range(n))

    def cyclic_over(big, small) -> bool:
        return any(_span(t, small, x) == big for x in big)

    seen = set()

    def climb(cur) -> bool:
        if cur == whole:
            return True
        if cur in seen:
            return False
        seen.add(cur)
        for m in normals:
            if cur < m and cyclic_over(m, cur) and climb(m):
                return True
        return False

    return climb(frozenset({0}))


def product(t, x, y) -> frozenset:
    return frozenset(t[a][b] for a in x for b in y)


def cyclic_factorizations(t) -> list[tuple[frozenset, frozenset]]:
    """Unordered pairs of cyclic subgroups whose product set is the group."""
    n = len(t)
    cyc = sorted({closure(t, [x]) for x in range(n)}, key=lambda s: (len(s), sorted(s)))
    whole = frozenset(range(n))
    out = []
    for i, a in enumerate(cyc):
        for b in cyc[: i + 1]:
            if product(t, a, b) == whole:
                out.append((a, b))
    return out


def abelian_rank(t) -> int:
    """Largest r with some prime p and p^r elements satisfying x^p = 1."""
    n = len(t)
    best = 0
    for p in range(2, n + 1):
        if n % p or any(p % q == 0 for q in range(2, p)):
            continue
        count = 0
        for x in range(n):
            y = 0
            for _ in range(p):
                y = t[y][x]
            count += y == 0
        r = 0
        while count > 1:
            count //= p
            r += 1
        best = max(best, r)
    return best


def normalizer(t, h) -> frozenset:
    inv = identity_inverse(t)
    return frozenset(g for g in range(len(t))
                     if {t[t[inv[g]][x]][g] for x in h} == set(h))


def commutator_subgroup(t, x, y) -> frozenset:
    inv = identity_inverse(t)
    return closure(t, [t[t[inv[a]][inv[b]]][t[a][b]] for a in x for b in y])
