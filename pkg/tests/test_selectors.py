from fractions import Fraction

import numpy as np
import pytest

from smolab.errors import ParseError
from smolab.fields import FieldSpec
from smolab.selectors import (AllPrimes, Complement, CongruenceSelector,
                              DegreeSelector, ExplicitList, Intersection,
                              NoPrimes, Union, parse_selector)
from smolab.sieve import prime_array

PRIMES = prime_array(1000)


def members(selector, primes=PRIMES):
    return set(primes[selector.mask(primes)].tolist())


def test_all_and_none():
    assert members(AllPrimes()) == set(PRIMES.tolist())
    assert members(NoPrimes()) == set()


def test_congruence_excludes_ramified():
    sel = CongruenceSelector(4, frozenset({1}))
    got = members(sel)
    assert 2 not in got
    assert got == {int(p) for p in PRIMES if p % 4 == 1}
    assert sel.analytic_density() == Fraction(1, 2)


def test_degree_selector_matches_residue_degrees():
    fs = FieldSpec(4)
    inert = DegreeSelector(fs, 2)
    assert members(inert) == {int(p) for p in PRIMES if p % 4 == 3}
    assert inert.norm_exponent == 2
    assert inert.norms(np.array([3, 7]))[0] == 9.0
    assert inert.analytic_density() == Fraction(1, 2)
    assert inert.max_prime_for_norm(10**6) == 1000


def test_degree_selector_multiplicity():
    fs = FieldSpec(5)
    split = DegreeSelector(fs, 1)
    assert list(split.place_multiplicity(np.array([11, 31]))) == [4, 4]
    quad = DegreeSelector(fs, 2)
    assert list(quad.place_multiplicity(np.array([19]))) == [2]
    with pytest.raises(ParseError):
        DegreeSelector(fs, 3)  # 3 does not divide 4


def test_explicit_list_and_complement():
    chosen = ExplicitList((5, 11, 13))
    assert members(chosen) == {5, 11, 13}
    assert chosen.analytic_density() == 0
    rest = Complement(chosen)
    assert members(rest) == set(PRIMES.tolist()) - {5, 11, 13}


def test_complement_respects_exclusions():
    sel = CongruenceSelector(4, frozenset({1}))
    comp = Complement(sel)
    got = members(comp)
    assert 2 not in got  # ramified stays excluded on both sides
    assert got == {int(p) for p in PRIMES if p % 4 == 3}
    assert comp.analytic_density() == Fraction(1, 2)


def test_boolean_combinations():
    a = CongruenceSelector(4, frozenset({1}))
    b = CongruenceSelector(3, frozenset({1}))
    both = Intersection(a, b)
    either = Union(a, b)
    ga, gb = members(a), members(b)
    assert members(both) == (ga & gb) - {2, 3}
    assert members(either) == (ga | gb) - {2, 3}
    assert both.analytic_density() == Fraction(1, 4)
    assert either.analytic_density() == Fraction(3, 4)


def test_density_of_degree_classes_sums_to_one():
    fs = FieldSpec(7, (6,))
    total = sum(DegreeSelector(fs, j).analytic_density() for j in (1, 3))
    assert total == 1


def test_parse_mini_language(tmp_path):
    assert isinstance(parse_selector("all"), AllPrimes)
    sel = parse_selector("mod:8:1,3")
    assert members(sel) == {int(p) for p in PRIMES if p % 8 in (1, 3)}
    combo = parse_selector("mod:4:1 and not mod:3:1")
    expect = {int(p) for p in PRIMES if p % 4 == 1 and p % 3 != 1 and p != 3}
    assert members(combo) == expect

    spec = tmp_path / "field.txt"
    spec.write_text("N=4\nH=\n")
    sel2 = parse_selector(f"degree:{spec.name}:2", base_dir=tmp_path)
    assert sel2.norm_exponent == 2

    listfile = tmp_path / "primes.txt"
    listfile.write_text("5\n11\n")
    sel3 = parse_selector(f"list:{listfile.name}", base_dir=tmp_path)
    assert members(sel3) == {5, 11}

    grouped = parse_selector("( mod:4:1 or mod:4:3 ) and not mod:8:1")
    assert members(grouped) == {int(p) for p in PRIMES if p % 2 and p % 8 != 1}


@pytest.mark.parametrize("bad", ["", "bogus", "mod:4", "mod:a:1", "degree:x", "all extra"])
def test_parse_rejects(bad):
    with pytest.raises(ParseError):
        parse_selector(bad)


def test_membership_is_pure():
    sel = CongruenceSelector(8, frozenset({1}))
    first = sel.mask(PRIMES).tolist()
    second = sel.mask(PRIMES).tolist()
    assert first == second
