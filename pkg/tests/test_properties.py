"""Property tests over a pool of small groups."""

from functools import lru_cache
from math import prod

import numpy as np
from hypothesis import given, strategies as st

import oracles as O
from cycprod.corpus import find_isomorphism
from cycprod.factorization import (
    basis_normalizer,
    factor_stabilizers,
    find_cyclic_factorizations,
    permutes,
    primes_of,
    product_set,
    raw_product,
    sylow_basis,
    sylow_subgroup,
)
from cycprod.group import (
    Cyclic,
    Dihedral,
    DirectProduct,
    FromPermutations,
    GeneralizedQuaternion,
    InvertedCyclicExtension,
    build,
    cyclic_semidirect,
    quotient,
)
from cycprod.io import format_cycles, parse_cycles
from cycprod.lattice import (
    ElementSet,
    all_subgroups,
    closure,
    commutator,
    core,
    derived_series,
    is_nilpotent,
    is_normal,
    minimal_generators,
    normal_closure,
    normalizer,
    prufer_rank,
)
from cycprod.structure import DerivationTable, decompose, validate_derivation
from test_corpus import relabel

RECIPES = [
    Cyclic(1), Cyclic(12), Dihedral(4), Dihedral(5), Dihedral(6), GeneralizedQuaternion(8),
    GeneralizedQuaternion(16), InvertedCyclicExtension(2, 3), cyclic_semidirect(3, 4, -1),
    cyclic_semidirect(7, 6, 3), cyclic_semidirect(9, 6, 2), cyclic_semidirect(3, 18, 2),
    DirectProduct(Cyclic(2), Dihedral(3)), DirectProduct(Cyclic(4), Cyclic(6)),
    DirectProduct(Cyclic(2), Dihedral(4)), FromPermutations(4, ("(1 2 3)", "(1 2)(3 4)")),
    FromPermutations(4, ("(1 2 3 4)", "(1 2)")),
]
ABELIAN = [Cyclic(12), DirectProduct(Cyclic(4), Cyclic(6)), DirectProduct(Cyclic(2), Cyclic(8)),
           DirectProduct(Cyclic(6), Cyclic(6)), DirectProduct(Cyclic(2), DirectProduct(Cyclic(2), Cyclic(2)))]


@lru_cache(maxsize=None)
def group(i: int, pool: str = "all"):
    return build((RECIPES if pool == "all" else ABELIAN)[i])


@lru_cache(maxsize=None)
def factorizations(i: int):
    return find_cyclic_factorizations(group(i))


@lru_cache(maxsize=None)
def lattice(i: int):
    return all_subgroups(group(i))


group_ids = st.integers(0, len(RECIPES) - 1)


@st.composite
def group_and_elements(draw, k: int):
    i = draw(group_ids)
    n = group(i).order
    return i, [draw(st.integers(0, n - 1)) for _ in range(k)]


@st.composite
def group_and_subgroups(draw, k: int):
    i = draw(group_ids)
    subs = lattice(i).subgroups
    return i, [subs[draw(st.integers(0, len(subs) - 1))] for _ in range(k)]


@st.composite
def factorized(draw):
    i = draw(st.sampled_from([j for j in range(len(RECIPES)) if factorizations(j)]))
    fs = factorizations(i)
    return i, fs[draw(st.integers(0, len(fs) - 1))]


# -- group core ------------------------------------------------------------


@given(group_and_elements(3))
def test_associativity(data):
    i, (x, y, z) = data
    g = group(i)
    assert g.multiply(g.multiply(x, y), z) == g.multiply(x, g.multiply(y, z))


@given(group_ids)
def test_build_is_deterministic(i):
    assert np.array_equal(build(RECIPES[i]).table, group(i).table)


@given(group_and_elements(3))
def test_quotient_projection_multiplies(data):
    i, (s, x, y) = data
    g = group(i)
    n = normal_closure(g, closure(g, [s]))
    q, proj = quotient(g, n)
    assert q.order * len(n) == g.order
    assert proj[g.multiply(x, y)] == q.multiply(int(proj[x]), int(proj[y]))


@given(st.integers(0, 5), st.integers(0, 5))
def test_direct_product_order(a, b):
    left, right = [Cyclic(3), Dihedral(3), Cyclic(4), GeneralizedQuaternion(8), Cyclic(2), Dihedral(4)][a], \
        [Cyclic(2), Cyclic(5), Dihedral(3), Cyclic(4), Cyclic(1), Cyclic(3)][b]
    g, l, r = build(DirectProduct(left, right)), build(left), build(right)
    assert g.order == l.order * r.order
    lefts = [x * r.order for x in range(l.order)]
    for x in lefts:
        for y in range(r.order):
            assert g.multiply(x, y) == g.multiply(y, x)


@given(st.permutations(list(range(6))))
def test_cycles_round_trip(perm):
    assert parse_cycles(format_cycles(perm), 6) == list(perm)


@given(group_ids, st.integers(0, 2 ** 16))
def test_isomorphic_after_relabel(i, seed):
    g = group(i)
    h, perm = relabel(g, seed)
    iso = find_isomorphism(g, h)
    assert iso is not None
    assert all(h.element_order(iso[x]) == g.element_order(x) for x in range(g.order))


# -- subgroup lattice ------------------------------------------------------


@given(group_and_elements(2))
def test_closure_idempotent_and_extensive(data):
    i, seed = data
    g = group(i)
    c = closure(g, seed)
    assert closure(g, c) == c
    assert all(x in c for x in seed)
    assert g.order % len(c) == 0


@given(group_and_subgroups(1))
def test_core_normalizer_sandwich(data):
    i, (h,) = data
    g = group(i)
    c, nc = core(g, h), normal_closure(g, h)
    assert c <= h <= normalizer(g, h)
    assert is_normal(c) and is_normal(nc) and h <= nc


@given(group_and_subgroups(2))
def test_commutator_symmetric(data):
    i, (x, y) = data
    g = group(i)
    assert commutator(g, x, y) == commutator(g, y, x)
    whole = ElementSet.whole(g)
    series = derived_series(g)
    if len(series) > 1:
        assert commutator(g, whole, whole) == series[1]


@given(group_ids)
def test_lagrange_and_rank(i):
    g = group(i)
    lat = lattice(i)
    r = prufer_rank(g)
    assert r >= minimal_generators(g, ElementSet.whole(g))
    for h in lat:
        assert g.order % len(h) == 0
        assert lat.rank_of(h) <= r


@given(st.integers(0, len(ABELIAN) - 1))
def test_abelian_rank_matches_torsion_count(i):
    g = group(i, "abelian")
    assert prufer_rank(g) == O.abelian_rank(O.table_of(g))


# -- factorizations --------------------------------------------------------


@given(group_and_subgroups(2))
def test_product_size(data):
    i, (x, y) = data
    g = group(i)
    assert len(raw_product(g, x, y)) * len(x & y) == len(x) * len(y)


@given(factorized())
def test_factorization_invariants(data):
    i, f = data
    g = group(i)
    assert len(f.A) * len(f.B) == g.order * len(f.A & f.B)
    assert product_set(g, f.A, f.B) == ElementSet.whole(g) == product_set(g, f.B, f.A)
    basis = sylow_basis(g, f)
    for p, gp in basis.by_prime.items():
        assert len(gp) == prod(q ** e for q, e in _factor(g.order) if q == p)
    primes = sorted(basis.by_prime)
    pi = primes[: max(1, len(primes) // 2)]
    s = sylow_subgroup(g, f, pi)
    assert len(s) == prod(q ** e for q, e in _factor(g.order) if q in pi)
    assert s == product_set(g, f.a_part(pi), f.b_part(pi))
    n = basis_normalizer(g, basis)
    assert n == product_set(g, *factor_stabilizers(g, f))
    assert is_nilpotent(g, n)


@given(factorized())
def test_factorization_list_is_symmetric(data):
    i, f = data
    pairs = {frozenset((x.A.bits, x.B.bits)) for x in factorizations(i)}
    assert frozenset((f.B.bits, f.A.bits)) in pairs
    assert len(pairs) == len(factorizations(i))


@given(factorized(), st.data())
def test_subgroups_of_factors_permute_in_p_groups(data, draw):
    i, f = data
    g = group(i)
    if len(primes_of(ElementSet.whole(g))) != 1:
        return
    subs = lattice(i).subgroups
    below_a = [c for c in subs if c <= f.A]
    below_b = [d for d in subs if d <= f.B]
    c = draw.draw(st.sampled_from(below_a))
    d = draw.draw(st.sampled_from(below_b))
    assert permutes(g, c, d)


# -- structure -------------------------------------------------------------


@given(factorized())
def test_decompose_deterministic_and_true(data):
    i, f = data
    g = group(i)
    a, b = decompose(g, f), decompose(g, f)
    assert a.same_as(b) and a.to_dict() == b.to_dict()
    assert a.ok, a.failed
    series = derived_series(g)
    assert a.R <= (series[1] if len(series) > 1 else ElementSet.trivial(g))
    if (a.R & normalizer(g, a.H)).is_trivial():
        assert normalizer(g, a.H) == a.H


@st.composite
def cyclic_modules(draw):
    m = draw(st.sampled_from([3, 4, 5, 7, 8, 9]))
    k = draw(st.sampled_from([2, 3, 4, 6]))
    units = [u for u in range(1, m) if np.gcd(u, m) == 1 and pow(u, k, m) == 1]
    u = draw(st.sampled_from(units))
    a = draw(st.integers(0, m - 1))
    return m, k, u, a


@given(cyclic_modules())
def test_principal_derivations_are_derivations(data):
    # phi(b) = b.a - a is always a derivation
    m, k, u, a = data
    action = np.array([[(pow(u, j, m) * x) % m for x in range(m)] for j in range(k)])
    phi = [(action[j][a] - a) % m for j in range(k)]
    assert validate_derivation(DerivationTable(build(Cyclic(k)), build(Cyclic(m)), action, phi))


def _factor(n: int):
    out, p = [], 2
    while n > 1:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    return out
