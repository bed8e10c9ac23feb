import numpy as np
import pytest

from smolab.errors import (ClosureExceedsLimit, InvalidPermutation,
                           UnknownCatalogEntry)
from smolab.groups import (BUNDLED_CATALOG, build_group, bundled_catalog,
                           catalog, central_product_mod_diagonal_center,
                           cyclic, dihedral, direct_product, parse_group_file,
                           parse_permutation, perm_to_cycles, q8_power_family,
                           quaternion8, quotient_by_central, symmetric)


def brute_closure(gen_maps, cap=10000):
    """Independent set-based closure oracle (no numbering, no tables)."""
    degree = max((max(m) for m in gen_maps if m), default=0)
    def full(m):
        return tuple(m.get(i, i) - 1 for i in range(1, degree + 1))
    identity = tuple(range(degree))
    gens = [full(m) for m in gen_maps]
    seen = {identity}
    frontier = [identity]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = tuple(g[i] for i in x)
            if y not in seen:
                assert len(seen) < cap
                seen.add(y)
                frontier.append(y)
    return seen


def brute_class_sizes(G):
    """Exhaustive conjugation oracle on the multiplication table."""
    sizes = []
    remaining = set(range(G.order))
    while remaining:
        x = min(remaining)
        orbit = {G.mul(G.mul(G.inverse(g), x), g) for g in range(G.order)}
        sizes.append(len(orbit))
        remaining -= orbit
    return sorted(sizes)


def test_parse_cycles():
    assert parse_permutation("(1 2 3)(4 5)") == {1: 2, 2: 3, 3: 1, 4: 5, 5: 4}
    assert parse_permutation("(1,2)") == {1: 2, 2: 1}
    assert parse_permutation("()") == {}
    assert parse_permutation("") == {}


@pytest.mark.parametrize("bad", ["(1 2", "1 2)", "(1 2)(2 3)", "(1 1)", "(a b)", "(0 1)"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(InvalidPermutation):
        parse_permutation(bad)


def test_cycle_roundtrip():
    for text in ["(1 2 3)(4 5)", "(2 7)", "()"]:
        m = parse_permutation(text)
        degree = max(m, default=0)
        perm = tuple(m.get(i, i) - 1 for i in range(1, degree + 1))
        assert parse_permutation(perm_to_cycles(perm)) == m


def test_single_transposition_gives_c2():
    G = build_group(["(1 2)"])
    assert G.order == 2
    G.validate()


def test_empty_generators_give_trivial_group():
    G = build_group([])
    assert G.order == 1
    assert G.conjugacy_classes().class_sizes == (1,)
    G.validate()


def test_quaternion_group_matches_brute_closure():
    G = quaternion8()
    oracle = brute_closure([parse_permutation(g) for g in G.generators])
    assert G.order == len(oracle) == 8
    assert G.conjugacy_classes().class_sizes == (1, 1, 2, 2, 2)
    assert brute_class_sizes(G) == [1, 1, 2, 2, 2]
    G.validate()


def test_s3_classes_match_exhaustive_conjugation():
    G = build_group(["(1 2)", "(1 2 3)"])
    assert G.order == 6
    assert G.conjugacy_classes().class_sizes == (1, 2, 3)
    assert brute_class_sizes(G) == [1, 2, 3]


def test_closure_limit_enforced():
    with pytest.raises(ClosureExceedsLimit):
        build_group(["(1 2)", "(1 2 3 4 5 6 7)"], limit=10)


def test_table_matches_direct_composition():
    G = symmetric(4)
    for i in range(G.order):
        for j in range(G.order):
            composed = tuple(G.perms[j][x] for x in G.perms[i])
            assert G.perms[G.mul(i, j)] == composed


def test_conjugacy_class_invariants():
    for expr in ("symmetric(4)", "dihedral(6)", "quaternion8"):
        G = catalog(expr)
        part = G.conjugacy_classes()
        assert sum(part.class_sizes) == G.order
        for size in part.class_sizes:
            assert G.order % size == 0
        # class_of constant on conjugates
        for x in range(G.order):
            for g in range(G.order):
                y = G.mul(G.mul(G.inverse(g), x), g)
                assert part.class_of[y] == part.class_of[x]


def test_direct_product_order_and_commuting_blocks():
    G = direct_product(quaternion8(), cyclic(2))
    assert G.order == 16
    G.validate()


def test_quotient_by_central_involution():
    q8 = quaternion8()
    minus_one = next(z for z in q8.center() if z != 0)
    Q = quotient_by_central(q8, [minus_one])
    assert Q.order == 4
    assert Q.conjugacy_classes().num_classes == 4  # Klein four group


def test_central_product_is_extraspecial_size():
    G = central_product_mod_diagonal_center(quaternion8(), quaternion8())
    assert G.order == 32
    assert G.conjugacy_classes().num_classes == 17
    G.validate()


def test_central_product_requires_unique_involution():
    # the Klein four group has three central involutions: ambiguous
    with pytest.raises(UnknownCatalogEntry):
        central_product_mod_diagonal_center(direct_product(cyclic(2), cyclic(2)), quaternion8())


def test_q8_power_family_orders():
    G1 = q8_power_family(1)
    assert G1.order == 16
    G2 = q8_power_family(2)
    assert G2.order == 64
    G2.validate()


def test_catalog_expressions():
    assert catalog("cyclic(6)").order == 6
    assert catalog("cyclic(6)").conjugacy_classes().num_classes == 6
    assert catalog("quaternion8").order == 8
    assert catalog("direct_product(quaternion8,cyclic(2))").order == 16
    with pytest.raises(UnknownCatalogEntry):
        catalog("frobnicate(3)")
    with pytest.raises(UnknownCatalogEntry):
        catalog("cyclic(x)")


def test_bundled_catalog_complete_and_small():
    cat = bundled_catalog()
    assert len(cat) >= 20
    for name, G in cat.items():
        assert G.order <= 64, name
    for required in ("quaternion8", "dihedral(4)", "symmetric(3)", "symmetric(4)",
                     "direct_product(quaternion8,cyclic(2))", "q8_power_family(1)"):
        assert required in cat
    # at least two extraspecial central products
    assert sum(1 for name in cat if name.startswith("central_product")) >= 2


def test_group_file_parsing():
    text = "# a comment\n(1 2 3 4)\n\n(1 3) # inline\n"
    assert parse_group_file(text) == ["(1 2 3 4)", "(1 3)"]


def test_validate_large_group_sampled():
    G = cyclic(500)  # order above the exhaustive threshold
    G.validate(sample_triples=2000)
