import pytest

from smolab.errors import LimitExceeded
from smolab.tau import (discriminant_coefficients, eta_block_coefficients,
                        generate_tau, poly_mul_trunc, tau_csv_text)


def naive_eta_product_24(limit):
    """Independent oracle: multiply out (1-q^n)^24 term by term, exact ints."""
    order = limit - 1
    coeffs = [1] + [0] * order
    for n in range(1, order + 1):
        for _ in range(24):
            for i in range(order, n - 1, -1):
                coeffs[i] -= coeffs[i - n]
    return coeffs


def test_poly_mul_matches_schoolbook():
    a = [1, -1, 2, 0, 3]
    b = [3, 0, -5, 7]
    order = 6
    expected = [0] * (order + 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j <= order:
                expected[i + j] += x * y
    assert poly_mul_trunc(a, b, order) == expected


def test_eta_block_is_pentagonal():
    coeffs = eta_block_coefficients(15)
    assert coeffs == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 0, -1]


def test_small_coefficients_match_naive_oracle():
    assert discriminant_coefficients(120) == naive_eta_product_24(120)


def test_classic_values():
    tau = generate_tau(100)
    assert tau[2] == -24
    assert tau[3] == 252
    assert tau[5] == 4830
    assert tau[7] == -16744
    # value cross-checked by the naive product oracle and the mod-691 congruence
    assert tau[97] == 75013568546


def test_hecke_multiplicativity():
    d = discriminant_coefficients(300)
    tau = lambda n: d[n - 1]
    assert tau(6) == tau(2) * tau(3)
    assert tau(10) == tau(2) * tau(5)
    assert tau(4) == tau(2) ** 2 - 2**11 * tau(1)
    assert tau(9) == tau(3) ** 2 - 3**11 * tau(1)
    assert tau(8) == tau(2) * tau(4) - 2**11 * tau(2)


def test_congruence_mod_691():
    # tau(n) = sigma_11(n) mod 691, an independent arithmetic identity
    def sigma11(n):
        return sum(d**11 for d in range(1, n + 1) if n % d == 0)

    d = discriminant_coefficients(200)
    for n in range(1, 201):
        assert (d[n - 1] - sigma11(n)) % 691 == 0


def test_limit_enforced():
    with pytest.raises(LimitExceeded):
        generate_tau(10**5 + 1)


def test_csv_output_shape():
    text = tau_csv_text(20)
    lines = text.strip().splitlines()
    assert lines[0] == "p,a_p"
    assert lines[1] == "2,-24"
    assert len(lines) == 1 + 8  # primes up to 20
