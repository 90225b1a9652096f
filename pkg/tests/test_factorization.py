import pytest

import oracles as O
from cycprod.errors import (
    InvalidFactorization,
    NotCyclic,
    NotPermutable,
    NotSubgroup,
    OrderBound,
    ProductNotWhole,
)
from cycprod.group import (
    Cyclic,
    Dihedral,
    DirectProduct,
    FromPermutations,
    GeneralizedQuaternion,
    build,
    cyclic_semidirect,
)
from cycprod.factorization import (
    basis_normalizer,
    build_multi_product,
    check_sylow_tower,
    cyclic_pi_part,
    factor_stabilizers,
    find_cyclic_factorizations,
    find_multi_products,
    generic_sylow,
    largest_prime_sylow_normal,
    make_factorization,
    minimal_factorized_overgroup,
    permutes,
    product_set,
    raw_product,
    sylow_basis,
    sylow_subgroup,
)
from cycprod.lattice import ElementSet, all_subgroups, cyclic_subgroup, is_nilpotent, normalizer


def test_product_set_examples(d3, klein):
    a, s = cyclic_subgroup(d3, 1), cyclic_subgroup(d3, 3)
    assert product_set(d3, a, ElementSet.trivial(d3)) == a
    assert product_set(d3, a, s) == ElementSet.whole(d3)
    assert permutes(d3, a, s)
    assert not permutes(d3, cyclic_subgroup(d3, 3), cyclic_subgroup(d3, 4))
    x, y = cyclic_subgroup(klein, 1), cyclic_subgroup(klein, 2)
    assert product_set(klein, x, y) == ElementSet.whole(klein)
    with pytest.raises(NotSubgroup):
        product_set(d3, ElementSet.from_indices(d3, [0, 3, 4]), a)


def test_product_size_formula(s4):
    subs = all_subgroups(s4).subgroups
    for x in subs[::3]:
        for y in subs[::5]:
            assert len(raw_product(s4, x, y)) * len(x & y) == len(x) * len(y)


def test_cyclic_group_factorizations():
    g = build(Cyclic(6))
    pairs = {(len(f.A), len(f.B)) for f in find_cyclic_factorizations(g)}
    assert (6, 1) in pairs and (3, 2) in pairs


def test_quaternion_factorization(q8):
    found = find_cyclic_factorizations(q8)
    pair = {frozenset(cyclic_subgroup(q8, 1).to_list()), frozenset(cyclic_subgroup(q8, 4).to_list())}
    assert any({frozenset(f.A.to_list()), frozenset(f.B.to_list())} == pair for f in found)
    f = make_factorization(q8, 1, 4)
    assert len(f.A & f.B) == 2


def test_negative_controls(s4, a4):
    assert find_cyclic_factorizations(s4) == []
    assert find_cyclic_factorizations(a4) == []


@pytest.mark.parametrize("recipe", [
    Dihedral(3), Dihedral(6), GeneralizedQuaternion(16), cyclic_semidirect(3, 4, -1),
    DirectProduct(Cyclic(2), Dihedral(3)), cyclic_semidirect(7, 3, 2),
])
def test_factorizations_match_brute_force(recipe):
    g = build(recipe)
    mine = {frozenset((frozenset(f.A.to_list()), frozenset(f.B.to_list())))
            for f in find_cyclic_factorizations(g)}
    ref = {frozenset(p) for p in O.cyclic_factorizations(O.table_of(g))}
    assert mine == ref


def test_factorization_order_and_uniqueness(d3):
    found = find_cyclic_factorizations(d3)
    keys = [(len(f.A), len(f.B), f.A.bits, f.B.bits) for f in found]
    assert keys == sorted(keys)
    assert len({(f.A.bits, f.B.bits) for f in found}) == len(found)
    assert all(f.A.sort_key() >= f.B.sort_key() for f in found)


def test_make_factorization_rejects(d3, klein):
    with pytest.raises(InvalidFactorization):
        make_factorization(d3, 3, 4)
    with pytest.raises(InvalidFactorization):
        make_factorization(klein, ElementSet.whole(klein), 0)


def test_find_bound():
    with pytest.raises(OrderBound):
        find_cyclic_factorizations(build(Cyclic(300)))


def test_sylow_subgroups(d3):
    f = make_factorization(d3, 1, 3)
    assert sylow_subgroup(d3, f, [5]).is_trivial()
    assert sylow_subgroup(d3, f, [3]) == cyclic_subgroup(d3, 1)
    assert sylow_subgroup(d3, f, [2, 3]) == ElementSet.whole(d3)
    assert len(generic_sylow(d3, 2)) == 2


def test_sylow_basis_examples(d3, q8):
    g = build(Cyclic(12))
    f = make_factorization(g, ElementSet.whole(g), ElementSet.trivial(g))
    assert basis_normalizer(g, sylow_basis(g, f)) == ElementSet.whole(g)
    assert factor_stabilizers(g, f) == (f.A, f.B)

    f = make_factorization(d3, 1, 3)
    basis = sylow_basis(d3, f)
    assert basis[3] == cyclic_subgroup(d3, 1) and basis[2] == cyclic_subgroup(d3, 3)
    n = basis_normalizer(d3, basis)
    a_star, b_star = factor_stabilizers(d3, f)
    assert n == cyclic_subgroup(d3, 3)
    assert a_star.is_trivial() and b_star == f.B
    assert product_set(d3, a_star, b_star) == n

    f = make_factorization(q8, 1, 4)
    assert basis_normalizer(q8, sylow_basis(q8, f)) == ElementSet.whole(q8)


def test_basis_normalizer_brute_force():
    g = build(cyclic_semidirect(7, 6, 3))
    t = O.table_of(g)
    for f in find_cyclic_factorizations(g):
        basis = sylow_basis(g, f)
        ref = set(range(g.order))
        for p in basis.by_prime:
            ref &= O.normalizer(t, basis[p].to_list())
        n = basis_normalizer(g, basis)
        assert set(n.to_list()) == ref
        assert product_set(g, *factor_stabilizers(g, f)) == n
        assert is_nilpotent(g, n)


def test_sylow_tower(d3, c3c4, q8):
    assert check_sylow_tower(q8, make_factorization(q8, 1, 4)).pairs == []
    rep = check_sylow_tower(d3, make_factorization(d3, 1, 3))
    assert [(v.p, v.q) for v in rep.pairs] == [(3, 2)] and rep.ok
    a = next(x for x in range(12) if c3c4.element_order(x) == 3)
    b = next(x for x in range(12) if c3c4.element_order(x) == 4)
    f = make_factorization(c3c4, a, b)
    rep = check_sylow_tower(c3c4, f)
    assert rep.ok and f.B <= normalizer(c3c4, f.A)


def test_multi_products(d3):
    c5 = build(Cyclic(5))
    assert len(build_multi_product(c5, [1]).factors) == 1
    mp = build_multi_product(d3, [1, 3])
    rep = largest_prime_sylow_normal(d3, mp)
    assert rep.p == 3 and rep.ok
    assert rep.P == cyclic_subgroup(d3, 1) and rep.Q == cyclic_subgroup(d3, 3)
    with pytest.raises(NotCyclic):
        build_multi_product(d3, [ElementSet.whole(d3)])


def test_multi_product_not_whole():
    g = build(FromPermutations(4, ("(1 2 3 4)", "(1 2 3)")))
    four, three = g.generators
    assert g.order == 24
    assert len(raw_product(g, cyclic_subgroup(g, four), cyclic_subgroup(g, three))) == 12
    with pytest.raises(ProductNotWhole):
        build_multi_product(g, [four, three])


def test_multi_product_not_permutable():
    # two reflections and a rotation of D3 cover the group, but the reflections do not permute
    d3 = build(Dihedral(3))
    with pytest.raises(NotPermutable) as info:
        build_multi_product(d3, [3, 4, 1])
    assert (info.value.i, info.value.j) == (0, 1)


def test_largest_prime_for_p_group(q8):
    rep = largest_prime_sylow_normal(q8, build_multi_product(q8, [1, 4]))
    assert rep.P == ElementSet.whole(q8) and rep.Q.is_trivial() and rep.ok


def test_three_factor_search():
    g = build(DirectProduct(Cyclic(2), DirectProduct(Cyclic(2), Cyclic(2))))
    found = find_multi_products(g, 3, limit=5)
    assert found
    for mp in found:
        assert len(mp.factors) == 3
        assert raw_product(g, *mp.factors) == ElementSet.whole(g)
        for i in range(3):
            for j in range(i + 1, 3):
                assert raw_product(g, mp.factors[i], mp.factors[j]) != ElementSet.whole(g)


def test_cyclic_pi_part():
    g = build(Cyclic(12))
    whole = ElementSet.whole(g)
    assert len(cyclic_pi_part(whole, [2])) == 4
    assert len(cyclic_pi_part(whole, [3])) == 3
    assert cyclic_pi_part(whole, [5]).is_trivial()


def test_minimal_overgroup(d3):
    f = make_factorization(d3, 1, 3)
    assert minimal_factorized_overgroup(d3, f, f.A) == f.A
    assert minimal_factorized_overgroup(d3, f, ElementSet.whole(d3)) == ElementSet.whole(d3)
    assert minimal_factorized_overgroup(d3, f, cyclic_subgroup(d3, 4)) == ElementSet.whole(d3)
    with pytest.raises(NotSubgroup):
        minimal_factorized_overgroup(d3, f, [0, 3, 4])
