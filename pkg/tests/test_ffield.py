"""Field construction, arithmetic axioms, primality, irreducibility."""

import random

import pytest

from valueset.errors import (
    NotMonicError,
    NotPrimeError,
    OrderTooLargeError,
    SingularMatrixError,
)
from valueset.ffield import (
    is_irreducible,
    is_prime,
    make_field,
    solve_linear,
    split_range,
)


def trial_division(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def test_make_field_prime():
    f = make_field(5, 1)
    assert (f.p, f.m, f.q, f.modulus) == (5, 1, 5, None)


def test_make_field_f4_unique_modulus():
    f = make_field(2, 2)
    assert f.modulus == (1, 1, 1)  # x^2 + x + 1, the only irreducible quadratic


def test_make_field_rejects_composite():
    with pytest.raises(NotPrimeError):
        make_field(4, 1)


def test_make_field_explicit_modulus():
    f = make_field(2, 3, modulus=[1, 1, 0, 1])
    assert f.modulus == (1, 1, 0, 1)
    with pytest.raises(ValueError):
        make_field(2, 2, modulus=[1, 0, 1])  # (x+1)^2


def test_f4_multiplication():
    f4 = make_field(2, 2)
    x = f4.gen
    assert f4.mul(x, f4.add(x, 1)) == 1  # x * (x+1) = x^2 + x = 1


def test_inverse_mod_5():
    f5 = make_field(5)
    assert f5.inv(2) == 3
    with pytest.raises(ZeroDivisionError):
        f5.inv(0)


@pytest.mark.parametrize("p,m", [(5, 1), (2, 2), (3, 2), (7, 1), (2, 4)])
def test_lagrange(p, m):
    f = make_field(p, m)
    for a in range(1, f.q):
        assert f.pow(a, f.q - 1) == 1


def test_pow_zero_conventions():
    f = make_field(7)
    assert f.pow(0, 0) == 1
    assert f.pow(3, 0) == 1
    assert f.pow(0, 12) == 0


def test_enumerate_small_fields():
    assert list(make_field(3).elements()) == [0, 1, 2]
    f4 = make_field(2, 2)
    assert [f4.coeffs(e) for e in f4.elements()] == [(0, 0), (1, 0), (0, 1), (1, 1)]
    f8 = make_field(2, 3)
    seen = list(f8.elements())
    assert len(seen) == 8 and len(set(seen)) == 8


def test_enumeration_cap():
    f = make_field(2, 27)
    with pytest.raises(OrderTooLargeError):
        f.elements()
    with pytest.raises(OrderTooLargeError):
        make_field(2, 27, require_enumerable=True)


def test_is_prime_examples():
    assert is_prime(67)
    assert not is_prime(2 ** 16)
    assert is_prime(4099)
    assert not is_prime(1)
    assert not is_prime(0)
    assert is_prime(2)
    assert not is_prime(561)  # Carmichael
    assert is_prime(2 ** 89 - 1)  # Mersenne prime, exercises the big-n path


def test_is_prime_against_trial_division():
    rng = random.Random(11)
    for _ in range(400):
        n = rng.randrange(2, 10 ** 6)
        assert is_prime(n) == trial_division(n), n


def test_is_irreducible_examples():
    assert is_irreducible([1, 1, 1], 2)
    assert not is_irreducible([1, 0, 1], 2)  # (x+1)^2
    assert is_irreducible([1, 1, 0, 1], 2)
    with pytest.raises(NotMonicError):
        is_irreducible([1, 1, 2], 3)


def test_is_irreducible_matches_root_search_for_low_degree():
    # degree 2/3 polynomials are reducible over F_p iff they have a root,
    # except for deg-3 splitting into an irreducible quadratic times nothing
    rng = random.Random(23)
    for p in (2, 3, 5):
        for _ in range(60):
            deg = rng.choice((2, 3))
            coeffs = [rng.randrange(p) for _ in range(deg)] + [1]
            has_root = any(
                sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p == 0
                for x in range(p))
            if has_root:
                assert not is_irreducible(coeffs, p), (p, coeffs)


def test_every_found_modulus_is_irreducible():
    for p, m in [(2, 2), (2, 3), (2, 8), (3, 2), (3, 3), (5, 2), (7, 2)]:
        f = make_field(p, m)
        assert is_irreducible(list(f.modulus), p)
        # a same-degree reducible: x^m is divisible by x
        assert not is_irreducible([0] * m + [1], p)


@pytest.mark.parametrize("p,m", [(7, 1), (67, 1), (2, 3), (3, 2), (7, 2)])
def test_field_axioms_random_sample(p, m):
    f = make_field(p, m)
    rng = random.Random(f.q)
    for _ in range(60):
        a, b, c = (rng.randrange(f.q) for _ in range(3))
        assert f.add(a, b) == f.add(b, a)
        assert f.mul(a, b) == f.mul(b, a)
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.sub(f.add(a, b), b) == a
        if b != 0:
            assert f.mul(f.mul(a, b), f.inv(b)) == a


@pytest.mark.parametrize("p,m", [(2, 12), (3, 4), (5, 3), (61, 1)])
def test_index_coeffs_roundtrip_exhaustive(p, m):
    f = make_field(p, m)
    for e in range(f.q):
        coeffs = f.coeffs(e)
        assert len(coeffs) == m
        assert all(0 <= c < p for c in coeffs)
        assert f.from_coeffs(coeffs) == e


@pytest.mark.parametrize("p,m", [(7, 1), (3, 2), (2, 4)])
def test_pow_additivity(p, m):
    f = make_field(p, m)
    rng = random.Random(p * m)
    for _ in range(40):
        a = rng.randrange(f.q)
        e1 = rng.randrange(f.q ** 2)
        e2 = rng.randrange(f.q ** 2)
        assert f.pow(a, e1 + e2) == f.mul(f.pow(a, e1), f.pow(a, e2))


def test_mul_agrees_with_polynomial_route():
    # table-backed multiplication vs direct polynomial reduction
    f = make_field(3, 3)
    rng = random.Random(27)
    for _ in range(100):
        a, b = rng.randrange(27), rng.randrange(27)
        assert f.mul(a, b) == f._mul_poly(a, b)


def test_solve_linear():
    f5 = make_field(5)
    assert solve_linear([[1, 0], [0, 1]], [2, 3], f5) == [2, 3]
    assert solve_linear([[2]], [3], f5) == [4]
    with pytest.raises(SingularMatrixError):
        solve_linear([[0]], [1], f5)
    # a full 3x3 system over F_7, checked by substitution
    f7 = make_field(7)
    matrix = [[1, 2, 3], [4, 5, 6], [1, 0, 2]]
    rhs = [3, 1, 5]
    sol = solve_linear(matrix, rhs, f7)
    for row, want in zip(matrix, rhs):
        got = 0
        for coef, val in zip(row, sol):
            got = f7.add(got, f7.mul(coef, val))
        assert got == want


def test_split_range():
    assert split_range(10, 3) == [(0, 4), (4, 7), (7, 10)]
    assert split_range(2, 8) == [(0, 1), (1, 2)]
    assert split_range(0, 4) == [(0, 0)]
    for n, parts in [(100, 7), (5, 5), (64, 1)]:
        chunks = split_range(n, parts)
        assert chunks[0][0] == 0 and chunks[-1][1] == n
        assert all(a[1] == b[0] for a, b in zip(chunks, chunks[1:]))


def test_field_description():
    assert make_field(5).describe() == {"p": 5, "m": 1}
    assert make_field(2, 2).describe() == {"p": 2, "m": 2, "modulus": [1, 1, 1]}
