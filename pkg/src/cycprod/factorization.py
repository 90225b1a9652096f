"""Cyclic factorizations ``G = AB`` and the Sylow data they determine."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import (
    BasisNotPermutable,
    InvalidFactorization,
    NotCyclic,
    NotPermutable,
    NotSubgroup,
    OrderBound,
    ProductNotSubgroup,
    ProductNotWhole,
)
from .group import FiniteGroup
from .lattice import (
    DEFAULT_LATTICE_BOUND,
    ElementSet,
    all_subgroups,
    as_set,
    cyclic_subgroup,
    cyclic_subgroups,
    is_cyclic,
    is_normal,
    is_subgroup,
    normalizer,
)


def prime_divisors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def pi_part(n: int, primes) -> int:
    """Largest divisor of ``n`` whose prime factors all lie in ``primes``."""
    part = 1
    for p in primes:
        while n % p == 0:
            n //= p
            part *= p
    return part


def primes_of(h: ElementSet) -> set[int]:
    return set(prime_divisors(len(h)))


def _product_bits(g: FiniteGroup, x: ElementSet, y: ElementSet) -> int:
    prods = g.table[np.ix_(x.indices, y.indices)].ravel()
    mask = np.zeros(g.order, dtype=bool)
    mask[prods] = True
    return ElementSet.from_mask(g, mask).bits


def raw_product(g: FiniteGroup, *sets) -> ElementSet:
    """``{x1 x2 ... xn}`` for arbitrary element sets."""
    acc = as_set(g, sets[0])
    for s in sets[1:]:
        acc = ElementSet(g, _product_bits(g, acc, as_set(g, s)))
    return acc


def product_set(g: FiniteGroup, x, y) -> ElementSet:
    """The set ``XY = {xy}`` of two subgroups (not necessarily a subgroup)."""
    x, y = as_set(g, x), as_set(g, y)
    for s in (x, y):
        if not is_subgroup(s):
            raise NotSubgroup(f"{s!r} is not a subgroup")
    return ElementSet(g, _product_bits(g, x, y))


def permutes(g: FiniteGroup, x, y) -> bool:
    xy = product_set(g, x, y)
    if xy != product_set(g, y, x):
        return False
    if not is_subgroup(xy):
        raise ProductNotSubgroup("XY = YX but XY is not a subgroup")
    return True


def _generator(h: ElementSet) -> int:
    g = h.group
    orders = g.element_orders[h.indices]
    hits = h.indices[orders == len(h)]
    if len(hits) == 0:
        raise NotCyclic(f"{h!r} is not cyclic")
    return int(hits[0])


def cyclic_pi_part(h: ElementSet, primes) -> ElementSet:
    """The unique Sylow π-subgroup of a cyclic subgroup."""
    g = h.group
    x = _generator(h)
    m = len(h)
    return cyclic_subgroup(g, g.power(x, m // pi_part(m, primes)))


@dataclass(frozen=True, eq=False)
class Factorization:
    group: FiniteGroup
    A: ElementSet
    B: ElementSet
    sylow_a: dict = field(repr=False)
    sylow_b: dict = field(repr=False)

    @property
    def primes(self) -> list[int]:
        return prime_divisors(self.group.order)

    def a_part(self, primes) -> ElementSet:
        return cyclic_pi_part(self.A, primes)

    def b_part(self, primes) -> ElementSet:
        return cyclic_pi_part(self.B, primes)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Factorization) and self.A == other.A and self.B == other.B)

    def __hash__(self) -> int:
        return hash((self.A.bits, self.B.bits))

    def to_dict(self) -> dict:
        return {"A": self.A.to_list(), "B": self.B.to_list(),
                "orders": [len(self.A), len(self.B)]}


def make_factorization(g: FiniteGroup, a, b) -> Factorization:
    """Validate ``G = AB`` with cyclic ``A`` and ``B``.

    ``a`` and ``b`` may be element sets or single generating elements.
    """
    A = cyclic_subgroup(g, a) if isinstance(a, (int, np.integer)) else as_set(g, a)
    B = cyclic_subgroup(g, b) if isinstance(b, (int, np.integer)) else as_set(g, b)
    for name, s in (("A", A), ("B", B)):
        if not is_subgroup(s) or not is_cyclic(s):
            raise InvalidFactorization(f"{name} is not a cyclic subgroup")
    if len(A) * len(B) != g.order * len(A & B):
        raise InvalidFactorization("|A||B| != |G||A∩B|")
    if product_set(g, A, B) != ElementSet.whole(g):
        raise InvalidFactorization("AB is not the whole group")
    primes = prime_divisors(g.order)
    return Factorization(
        g, A, B,
        {p: cyclic_pi_part(A, [p]) for p in primes},
        {p: cyclic_pi_part(B, [p]) for p in primes},
    )


def find_cyclic_factorizations(g: FiniteGroup, bound: int = DEFAULT_LATTICE_BOUND) -> list[Factorization]:
    """Every unordered pair ``{A, B}`` of cyclic subgroups with ``G = AB``.

    Each pair is listed once, with ``A`` the larger of the two in
    ``(size, bits)`` order; the list is sorted by ``(|A|, |B|, bits)``.
    """
    if g.order > bound:
        raise OrderBound(f"group of order {g.order} exceeds bound {bound}")
    key = ("factorizations",)
    if key in g._memo:
        return g._memo[key]
    n = g.order
    cyc = [z for z, _ in cyclic_subgroups(g)]
    whole = ElementSet.whole(g)
    found = []
    for j, A in enumerate(cyc):
        la = len(A)
        for B in cyc[: j + 1]:
            lb = len(B)
            if la * lb < n:
                continue
            if la * lb != n * (A.bits & B.bits).bit_count():
                continue
            if ElementSet(g, _product_bits(g, A, B)) != whole:
                continue
            found.append(make_factorization(g, A, B))
    found.sort(key=lambda f: (len(f.A), len(f.B), f.A.bits, f.B.bits))
    g._memo[key] = found
    return found


# -- Sylow machinery ----------------------------------------------------------


def sylow_subgroup(g: FiniteGroup, f: Factorization, primes) -> ElementSet:
    """``A_π B_π``, checked to be a subgroup of order the π-part of ``|G|``."""
    primes = sorted(set(primes))
    prod = product_set(g, f.a_part(primes), f.b_part(primes))
    if not is_subgroup(prod):
        raise ProductNotSubgroup(f"A_π B_π is not a subgroup for π = {primes}")
    if len(prod) != pi_part(g.order, primes):
        raise ProductNotSubgroup(
            f"A_π B_π has order {len(prod)}, expected {pi_part(g.order, primes)} for π = {primes}")
    return prod


@dataclass(frozen=True)
class SylowBasis:
    by_prime: dict

    def __getitem__(self, p: int) -> ElementSet:
        return self.by_prime[p]


def sylow_basis(g: FiniteGroup, f: Factorization) -> SylowBasis:
    basis = {p: sylow_subgroup(g, f, [p]) for p in f.primes}
    for p, q in combinations(sorted(basis), 2):
        if not permutes(g, basis[p], basis[q]):
            raise BasisNotPermutable(f"G_{p} and G_{q} do not permute")
    return SylowBasis(basis)


def basis_normalizer(g: FiniteGroup, basis: SylowBasis) -> ElementSet:
    result = ElementSet.whole(g)
    for p in sorted(basis.by_prime):
        result = result & normalizer(g, basis[p])
    return result


def factor_stabilizers(g: FiniteGroup, f: Factorization) -> tuple[ElementSet, ElementSet]:
    """``(A*, B*)``: the elements of A (resp. B) normalizing every ``G_p = A_p B_p``."""
    key = ("stabilizers", f.A.bits, f.B.bits)
    if key not in g._memo:
        a_star, b_star = f.A, f.B
        for p in f.primes:
            n = normalizer(g, sylow_subgroup(g, f, [p]))
            a_star, b_star = a_star & n, b_star & n
        g._memo[key] = (a_star, b_star)
    return g._memo[key]


@dataclass
class PairVerdict:
    p: int
    q: int
    normalizes: bool
    hall: bool

    @property
    def ok(self) -> bool:
        return self.normalizes and self.hall


@dataclass
class SylowTowerReport:
    pairs: list[PairVerdict]

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.pairs)


def check_sylow_tower(g: FiniteGroup, f: Factorization) -> SylowTowerReport:
    """For primes ``p > q``: ``G_q`` normalizes ``G_p`` and ``G_p G_q`` is the Hall {p, q}-subgroup."""
    basis = {p: sylow_subgroup(g, f, [p]) for p in f.primes}
    pairs = []
    for q, p in combinations(sorted(basis), 2):
        gp, gq = basis[p], basis[q]
        prod = product_set(g, gp, gq)
        hall = is_subgroup(prod) and len(prod) == pi_part(g.order, [p, q])
        pairs.append(PairVerdict(p, q, gq <= normalizer(g, gp), hall))
    return SylowTowerReport(pairs)


def generic_sylow(g: FiniteGroup, p: int) -> ElementSet:
    """A Sylow p-subgroup found by lattice scan, for cross-validation only."""
    size = pi_part(g.order, [p])
    for h in all_subgroups(g).subgroups:
        if len(h) == size:
            return h
    raise AssertionError(f"no subgroup of order {size}")


# -- products of several cyclic subgroups -------------------------------------


@dataclass(frozen=True, eq=False)
class MultiProduct:
    group: FiniteGroup
    factors: tuple[ElementSet, ...]

    def to_dict(self) -> dict:
        return {"factors": [h.to_list() for h in self.factors],
                "orders": [len(h) for h in self.factors]}


def build_multi_product(g: FiniteGroup, factors) -> MultiProduct:
    """Validate ``G = A_1 ... A_n`` with pairwise permutable cyclic ``A_i``."""
    sets = []
    for i, a in enumerate(factors):
        h = cyclic_subgroup(g, a) if isinstance(a, (int, np.integer)) else as_set(g, a)
        if not is_subgroup(h) or not is_cyclic(h):
            raise NotCyclic(f"factor {i} is not a cyclic subgroup")
        sets.append(h)
    if not sets:
        raise ProductNotWhole("no factors given")
    covered = raw_product(g, *sets)
    if covered != ElementSet.whole(g):
        raise ProductNotWhole(f"product of the factors has {len(covered)} of {g.order} elements")
    for i, j in combinations(range(len(sets)), 2):
        if _product_bits(g, sets[i], sets[j]) != _product_bits(g, sets[j], sets[i]):
            raise NotPermutable(i, j)
    return MultiProduct(g, tuple(sets))


@dataclass
class LargestPrimeReport:
    p: int | None
    P: ElementSet
    Q: ElementSet
    verdicts: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())


def largest_prime_sylow_normal(g: FiniteGroup, mp: MultiProduct) -> LargestPrimeReport:
    """``P = P_1...P_n`` for the largest prime ``p`` is a normal Sylow subgroup
    and ``Q = Q_1...Q_n`` (the p-complements) complements it."""
    primes = prime_divisors(g.order)
    if not primes:
        t = ElementSet.trivial(g)
        return LargestPrimeReport(None, t, t, {"trivial": True})
    p = max(primes)
    others = [q for q in primes if q != p]
    P = raw_product(g, *[cyclic_pi_part(a, [p]) for a in mp.factors])
    Q = raw_product(g, *[cyclic_pi_part(a, others) for a in mp.factors])
    p_sub, q_sub = is_subgroup(P), is_subgroup(Q)
    verdicts = {
        "P_subgroup": p_sub,
        "P_sylow": p_sub and len(P) == pi_part(g.order, [p]),
        "P_normal": p_sub and is_normal(P),
        "Q_subgroup": q_sub,
        "Q_order": len(Q) == g.order // pi_part(g.order, [p]),
        "P_meet_Q_trivial": (P & Q).is_trivial(),
        "PQ_whole": raw_product(g, P, Q) == ElementSet.whole(g),
    }
    return LargestPrimeReport(p, P, Q, verdicts)


def find_multi_products(g: FiniteGroup, n: int = 3, limit: int = 2) -> list[MultiProduct]:
    """Up to ``limit`` genuinely ``n``-fold products of pairwise permutable
    nontrivial cyclic subgroups: no proper sub-product already gives ``G``."""
    cyc = [z for z, _ in cyclic_subgroups(g) if not z.is_trivial() and len(z) < g.order]
    m = len(cyc)
    perm = [[False] * m for _ in range(m)]
    prod_bits: dict[tuple[int, int], int] = {}
    for i in range(m):
        for j in range(i + 1, m):
            xy = _product_bits(g, cyc[i], cyc[j])
            if xy == _product_bits(g, cyc[j], cyc[i]):
                perm[i][j] = perm[j][i] = True
                prod_bits[i, j] = xy
    whole = (1 << g.order) - 1
    out: list[MultiProduct] = []

    def extend(chosen: list[int], acc: ElementSet) -> None:
        if len(out) >= limit:
            return
        if len(chosen) == n:
            if acc.bits == whole:
                out.append(MultiProduct(g, tuple(cyc[i] for i in chosen)))
            return
        for k in range(chosen[-1] + 1, m):
            if not all(perm[c][k] for c in chosen):
                continue
            if any(prod_bits[min(c, k), max(c, k)] == whole for c in chosen):
                continue
            nxt = ElementSet(g, _product_bits(g, acc, cyc[k]))
            if len(chosen) + 1 < n and nxt.bits == whole:
                continue
            extend(chosen + [k], nxt)
            if len(out) >= limit:
                return

    for i in range(m):
        extend([i], cyc[i])
        if len(out) >= limit:
            break
    return out


def minimal_factorized_overgroup(g: FiniteGroup, f: Factorization, h) -> ElementSet:
    """Smallest subgroup ``E ⊇ h`` with ``E = (A∩E)(B∩E)`` (lattice scan)."""
    h = as_set(g, h)
    if not is_subgroup(h):
        raise NotSubgroup(f"{h!r} is not a subgroup")
    for e in all_subgroups(g).subgroups:
        if h <= e and ElementSet(g, _product_bits(g, f.A & e, f.B & e)) == e:
            return e
    raise AssertionError("the whole group always qualifies")
