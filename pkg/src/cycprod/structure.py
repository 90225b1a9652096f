"""The decomposition ``G = (S×T)⋊H = (S×A*)(T×B*)`` and related tests.

:func:`decompose` builds every subgroup of the decomposition for one cyclic
factorization and reports each structural clause separately, so a failing
instance shows exactly which property broke.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import ActionNotAutomorphism, InvalidFactorization, NoHallSubgroup, NotSoluble
from .factorization import (
    Factorization,
    cyclic_pi_part,
    factor_stabilizers,
    make_factorization,
    pi_part,
    prime_divisors,
    primes_of,
    product_set,
    raw_product,
)
from .group import FiniteGroup, quotient
from .lattice import (
    ElementSet,
    all_subgroups,
    closure,
    commutator,
    cyclic_subgroups,
    derived_series,
    is_cyclic,
    is_metabelian,
    is_nilpotent,
    is_normal,
    is_soluble,
    is_subgroup,
    nilpotent_residual,
)

CLAUSES = (
    "SNormalCyclic",
    "TNormalCyclic",
    "InternalSemidirect",
    "DoubleFactorization",
    "PiDisjointS",
    "PiDisjointT",
    "SCommutatorFull",
    "TCommutatorFull",
    "HNilpotent",
    "GMetabelian",
)

REPORT_SUBGROUPS = ("A", "B", "R", "H", "Astar", "Bstar", "Astab", "Bstab", "S", "T", "A0", "B0")


@dataclass
class DecompositionReport:
    A: ElementSet
    B: ElementSet
    R: ElementSet
    H: ElementSet
    Astar: ElementSet
    Bstar: ElementSet
    S: ElementSet
    T: ElementSet
    A0: ElementSet
    B0: ElementSet
    Astab: ElementSet
    Bstab: ElementSet
    clauses: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.clauses.values())

    @property
    def failed(self) -> list[str]:
        return [name for name, good in self.clauses.items() if not good]

    def to_dict(self) -> dict:
        out = {name: getattr(self, name).to_list() for name in REPORT_SUBGROUPS}
        out["orders"] = {name: len(getattr(self, name)) for name in REPORT_SUBGROUPS}
        out["clauses"] = dict(self.clauses)
        return out

    def same_as(self, other: "DecompositionReport") -> bool:
        return self.to_dict() == other.to_dict()


def _commute(g: FiniteGroup, x: ElementSet, y: ElementSet) -> bool:
    a, b = x.indices, y.indices
    return bool(np.array_equal(g.table[np.ix_(a, b)], g.table[np.ix_(b, a)].T))


def _genuine_direct(g: FiniteGroup, x: ElementSet, y: ElementSet) -> bool:
    return (x & y).is_trivial() and _commute(g, x, y)


def decompose(g: FiniteGroup, f: Factorization) -> DecompositionReport:
    """Run the decomposition pipeline for the factorization ``f``.

    ``Astab``/``Bstab`` are the factor stabilizers of the Sylow basis and
    define ``S`` and ``T``.  When ``A`` and ``B`` meet, a stabilizer can
    carry a p-part already lying in the other factor; ``Astar``/``Bstar``
    drop the primes of ``S`` and ``T`` respectively, and the clause
    ``HNilpotent`` also requires that this leaves ``H`` unchanged.
    """
    if f.group is not g and f.group != g:
        raise InvalidFactorization("factorization belongs to another group")
    whole = ElementSet.whole(g)
    if product_set(g, f.A, f.B) != whole:
        raise InvalidFactorization("AB is not the whole group")
    A, B = f.A, f.B
    R = nilpotent_residual(g)
    a_stab, b_stab = factor_stabilizers(g, f)
    S = R & closure(g, A | b_stab)
    T = R & closure(g, a_stab | B)
    everything = prime_divisors(g.order)
    a_star = cyclic_pi_part(a_stab, [p for p in everything if p not in primes_of(S)])
    b_star = cyclic_pi_part(b_stab, [p for p in everything if p not in primes_of(T)])
    H = raw_product(g, a_star, b_star)
    h_same = H == raw_product(g, a_stab, b_stab)
    A0 = A & product_set(g, B, S)
    B0 = product_set(g, A, T) & B

    ST = raw_product(g, S, T)
    st_sub = is_subgroup(ST)
    s_ok = is_subgroup(S)
    t_ok = is_subgroup(T)
    h_ok = is_subgroup(H)
    sa = raw_product(g, S, a_star)
    tb = raw_product(g, T, b_star)
    clauses = {
        "SNormalCyclic": s_ok and is_normal(S) and is_cyclic(S),
        "TNormalCyclic": t_ok and is_normal(T) and is_cyclic(T),
        "InternalSemidirect": (
            s_ok and t_ok and h_ok and st_sub
            and (S & T).is_trivial()
            and is_normal(ST)
            and (ST & H).is_trivial()
            and raw_product(g, ST, H) == whole
            and _commute(g, S, T)
        ),
        "DoubleFactorization": (
            s_ok and t_ok
            and _genuine_direct(g, S, a_star)
            and _genuine_direct(g, T, b_star)
            and raw_product(g, sa, tb) == whole
        ),
        "PiDisjointS": not (primes_of(S) & primes_of(a_star)),
        "PiDisjointT": not (primes_of(T) & primes_of(b_star)),
        "SCommutatorFull": s_ok and commutator(g, S, b_star) == S,
        "TCommutatorFull": t_ok and commutator(g, T, a_star) == T,
        "HNilpotent": h_ok and h_same and is_nilpotent(g, H),
        "GMetabelian": is_metabelian(g),
    }
    return DecompositionReport(A, B, R, H, a_star, b_star, S, T, A0, B0, a_stab, b_stab, clauses)


@dataclass
class UniquenessVerdict:
    deterministic: bool
    distinct_pairs: list[tuple[list[int], list[int]]]

    @property
    def all_equal(self) -> bool:
        return len(self.distinct_pairs) <= 1


def check_uniqueness(g: FiniteGroup, reports: list[DecompositionReport]) -> UniquenessVerdict:
    """Re-run each report's pipeline and collect the distinct ``{S, T}`` pairs.

    Agreement across different factorizations is recorded, not required.
    """
    deterministic = True
    seen: dict[tuple[int, int], tuple[list[int], list[int]]] = {}
    for rep in reports:
        again = decompose(g, make_factorization(g, rep.A, rep.B))
        deterministic &= again.same_as(rep)
        key = tuple(sorted((rep.S.bits, rep.T.bits)))
        if key not in seen:
            first, second = sorted((rep.S, rep.T), key=lambda s: s.bits)
            seen[key] = (first.to_list(), second.to_list())
    return UniquenessVerdict(deterministic, list(seen.values()))


# -- supersolubility and friends ---------------------------------------------

_SUPERSOLUBLE_MEMO: dict[bytes, bool] = {}


def is_supersoluble(g: FiniteGroup) -> bool:
    """Peel off normal subgroups of prime order until the quotient is trivial.

    A non-trivial supersoluble group always has a normal subgroup of prime
    order and every quotient of it is supersoluble, so the first such
    subgroup found decides the question.
    """
    if g.order == 1:
        return True
    key = g.table.tobytes()
    hit = _SUPERSOLUBLE_MEMO.get(key)
    if hit is not None:
        return hit
    result = False
    for z, x in cyclic_subgroups(g):
        if prime_divisors(len(z)) == [len(z)] and is_normal(z):
            result = is_supersoluble(quotient(g, z)[0])
            break
    _SUPERSOLUBLE_MEMO[key] = result
    return result


def hall_subgroup(g: FiniteGroup, primes) -> ElementSet | None:
    size = pi_part(g.order, primes)
    for h in all_subgroups(g).subgroups:
        if len(h) == size:
            return h
    return None


@dataclass
class HallRankVerdict:
    primes: list[int]
    sylow_rank: int
    hall_rank: int

    @property
    def ok(self) -> bool:
        return self.hall_rank <= self.sylow_rank + 1


def hall_rank_bound(g: FiniteGroup, primes, r: int | None = None) -> HallRankVerdict:
    """Rank of a Hall π-subgroup is at most (max Sylow rank over π) + 1.

    ``r`` defaults to the largest Prüfer rank of a Sylow p-subgroup, p in π.
    """
    if not is_soluble(g):
        raise NotSoluble(f"{g!r} is not soluble")
    primes = sorted(set(primes))
    lattice = all_subgroups(g)
    if r is None:
        r = 0
        for p in primes:
            sylow = hall_subgroup(g, [p])
            r = max(r, lattice.rank_of(sylow))
    hall = hall_subgroup(g, primes)
    if hall is None:
        raise NoHallSubgroup(f"no Hall subgroup for π = {primes}")
    return HallRankVerdict(primes, r, lattice.rank_of(hall))


# -- derivations -------------------------------------------------------------


@dataclass
class DerivationTable:
    """A map ``phi: B -> A1`` with ``B`` acting on the abelian group ``A1``.

    ``action[b][a]`` is the image of ``a`` under ``b`` (a left action:
    ``action[b*c] = action[b] o action[c]``).
    """

    acting: FiniteGroup
    module: FiniteGroup
    action: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        self.action = np.asarray(self.action, dtype=np.int64)
        self.phi = np.asarray(self.phi, dtype=np.int64)


def validate_derivation(d: DerivationTable) -> bool:
    """True iff ``phi(bc) = phi(b) * b(phi(c))`` for all ``b, c``."""
    B, A1, act = d.acting, d.module, d.action
    if not A1.is_abelian:
        raise ActionNotAutomorphism("the module group must be abelian")
    if act.shape != (B.order, A1.order) or d.phi.shape != (B.order,):
        raise ActionNotAutomorphism("action or phi has the wrong shape")
    for b in range(B.order):
        img = act[b]
        if len(np.unique(img)) != A1.order or not np.array_equal(
                img[A1.table], A1.table[img[:, None], img[None, :]]):
            raise ActionNotAutomorphism(f"element {b} does not act as an automorphism")
    composed = act[np.arange(B.order)[:, None, None], act[None, :, :]]
    if not np.array_equal(composed, act[B.table]):
        raise ActionNotAutomorphism("the action is not a homomorphism")
    phi = d.phi
    lhs = phi[B.table]
    rhs = A1.table[phi[:, None], act[np.arange(B.order)[:, None], phi[None, :]]]
    return bool(np.array_equal(lhs, rhs))


__all__ = [
    "CLAUSES", "DecompositionReport", "DerivationTable", "HallRankVerdict", "UniquenessVerdict",
    "check_uniqueness", "decompose", "derived_series", "hall_rank_bound", "hall_subgroup",
    "is_metabelian", "is_nilpotent", "is_supersoluble", "validate_derivation",
]
