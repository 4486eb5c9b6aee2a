"""Representations, parsing, evaluation, degree accounting, dense arithmetic."""

import random

import pytest

from valueset.errors import (
    DegreeCapExceededError,
    FieldMismatchError,
    ParseError,
)
from valueset.ffield import make_field
from valueset.polyrep import (
    DensePoly,
    SlpBuilder,
    SparsePoly,
    SparseShiftPoly,
    Slp,
    degree_bound,
    dense_add,
    dense_gcd,
    dense_mod,
    dense_mul,
    dense_powmod,
    evaluate,
    evaluator,
    parse_poly,
    reduce_exponents,
    serialize_poly,
    to_dense,
)

F3 = make_field(3)
F5 = make_field(5)
F7 = make_field(7)
F9 = make_field(3, 2)
F67 = make_field(67)


def test_parse_alpha_gadget():
    f = parse_poly("sparse p=67: 34*x^33 + 34*x^66")
    assert isinstance(f, SparsePoly)
    assert f.terms == ((34, 33), (34, 66))
    assert f.field.p == 67


def test_parse_dense_little_endian():
    f = parse_poly("dense p=5: 1 0 1")
    assert f.coeffs == (1, 0, 1)
    assert evaluate(f, 2) == 0  # 4 + 1 = 5


def test_parse_trims_trailing_zeros():
    assert parse_poly("dense p=5: 1 0 1 0").coeffs == (1, 0, 1)


def test_parse_rejects_out_of_range_coefficient():
    with pytest.raises(FieldMismatchError):
        parse_poly("dense p=5: 7 0 1")


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_poly("dense p=5: 1 $ 1")
    assert err.value.line == 1 and err.value.column is not None
    with pytest.raises(ParseError):
        parse_poly("cubic p=5: 1 2")
    with pytest.raises(ParseError):
        parse_poly("dense q=5: 1")


def test_parse_comments_and_whitespace():
    f = parse_poly("# header comment\ndense p=5:   1 0 1   # body comment\n")
    assert f.coeffs == (1, 0, 1)


def test_parse_extension_elements():
    f = parse_poly("dense p=2 m=2 mod=1,1,1: 1.0 0.1")
    assert f.coeffs == (1, 2)
    assert f.field.modulus == (1, 1, 1)
    with pytest.raises(FieldMismatchError):
        parse_poly("dense p=2 m=2 mod=1,1,1: 2.0")


def test_parse_sparse_duplicate_exponents_combine():
    f = parse_poly("sparse p=5: 3*x^2 + 4*x^2")
    assert f.terms == ((2, 2),)
    g = parse_poly("sparse p=5: 3*x^2 + 2*x^2")
    assert g.is_zero()


def test_parse_shift_with_constant():
    f = parse_poly("shift p=11: 3*(x+1)^2 + const 9")
    assert f.triples == ((3, 1, 2),) and f.constant == 9


def test_slp_parse_and_eval():
    text = ("slp p=5 mode=strict\n"
            "r1 := one\nr2 := x\nr3 := mul r2 r2\nr4 := add r3 r1\nout r4")
    f = parse_poly(text)
    assert evaluate(f, 2) == 0  # x^2 + 1 at 2 over F_5


def test_slp_parse_errors():
    with pytest.raises(ParseError):
        parse_poly("slp p=5 mode=strict\nr1 := one\nr2 := x\nout r9")
    with pytest.raises(ParseError):
        parse_poly("slp p=5 mode=strict\nr1 := one\nr2 := x\nr3 := add r3 r1\nout r3")
    with pytest.raises(ParseError):
        parse_poly("slp p=5 mode=strict\nr1 := one\nr2 := x")
    with pytest.raises(ParseError):  # const forbidden in strict mode
        parse_poly("slp p=5 mode=strict\nr1 := one\nr2 := x\nr3 := const 2\nout r3")
    with pytest.raises(ParseError):  # strict programs start one, x
        parse_poly("slp p=5 mode=strict\nr1 := x\nr2 := one\nout r1")


@pytest.mark.parametrize("text", [
    "dense p=5: 1 0 1",
    "dense p=5: 0",
    "sparse p=67: 34*x^33 + 34*x^66",
    "sparse p=67:",
    "shift p=11: 3*(x+1)^2 + const 9",
    "shift p=11: 3*(x+1)^2 + 5*(x+0)^1",
    "dense p=2 m=2 mod=1,1,1: 1.0 0.1",
    "sparse p=3 m=2 mod=1,0,1: 2.1*x^7",
    "slp p=5 mode=strict\nr1 := one\nr2 := x\nr3 := mul r2 r2\nout r3",
    "slp p=7 mode=extended\nr1 := x\nr2 := const 3\nr3 := sub r1 r2\nout r3",
    "slp p=3 m=2 mod=1,0,1 mode=extended\nr1 := gen\nr2 := x\nr3 := mul r1 r2\nout r3",
])
def test_serialize_parse_roundtrip(text):
    f = parse_poly(text)
    assert parse_poly(serialize_poly(f)) == f


def test_evaluate_spec_examples():
    alpha = parse_poly("sparse p=67: 34*x^33 + 34*x^66")
    assert evaluate(alpha, 1) == 1
    slp = Slp(F5, (("one",), ("x",), ("mul", 2, 2), ("add", 3, 1)), 4, "strict")
    assert evaluate(slp, 2) == 0


def test_cross_representation_agreement_exhaustive():
    # x^2 + 1 in all four representations over F_5 and F_9
    for field in (F5, F9):
        dense = DensePoly(field, (1, 0, 1))
        sparse = SparsePoly(field, ((1, 0), (1, 2)))
        shift = SparseShiftPoly(field, ((1, 0, 2),), 1)
        builder = SlpBuilder(field, "extended")
        x = builder.x()
        slp = builder.build(builder.add(builder.mul(x, x), builder.const(1)))
        for x0 in range(field.q):
            want = evaluate(dense, x0)
            assert evaluate(sparse, x0) == want
            assert evaluate(shift, x0) == want
            assert evaluate(slp, x0) == want


def test_cross_representation_random():
    rng = random.Random(5)
    for field in (F7, F9):
        for _ in range(20):
            d = rng.randrange(1, 6)
            coeffs = [rng.randrange(field.q) for _ in range(d)]
            coeffs.append(rng.randrange(1, field.q))
            dense = DensePoly(field, tuple(coeffs))
            sparse = SparsePoly(
                field, tuple((c, e) for e, c in enumerate(coeffs) if c))
            assert to_dense(sparse, 10) == dense
            for x0 in range(field.q):
                assert evaluate(dense, x0) == evaluate(sparse, x0)


def test_degree_bounds():
    assert degree_bound(parse_poly("dense p=5: 1 0 1")) == (2, True)
    assert degree_bound(DensePoly(F5, ())) == (None, True)
    assert degree_bound(SparsePoly(F5, ((3, 10 ** 30),))) == (10 ** 30, True)

    builder = SlpBuilder(F5, "strict")
    reg = builder.x()
    for _ in range(10):
        reg = builder.mul(reg, reg)
    assert degree_bound(builder.build(reg)) == (1024, False)

    cancel = SparseShiftPoly(F7, ((1, 1, 3), (6, 0, 3)))  # (x+1)^3 - x^3
    assert degree_bound(cancel) == (3, False)
    assert to_dense(cancel, 10).degree == 2
    no_cancel = SparseShiftPoly(F7, ((1, 1, 3), (2, 0, 3)))
    assert degree_bound(no_cancel) == (3, True)
    assert degree_bound(SparseShiftPoly(F7, (), 4)) == (0, True)
    assert degree_bound(SparseShiftPoly(F7, (), 0)) == (None, True)


def test_reduce_exponents():
    assert reduce_exponents(SparsePoly(F5, ((1, 5),))).terms == ((1, 1),)
    assert reduce_exponents(SparsePoly(F67, ((1, 66),))).terms == ((1, 66),)
    assert reduce_exponents(SparsePoly(F67, ((1, 67),))).terms == ((1, 1),)


@pytest.mark.parametrize("field", [F9, make_field(5, 2)])
def test_reduce_exponents_preserves_function(field):
    rng = random.Random(field.q)
    for _ in range(15):
        terms = tuple((rng.randrange(1, field.q), rng.randrange(0, 5 * field.q))
                      for _ in range(4))
        f = SparsePoly(field, terms)
        g = reduce_exponents(f)
        assert g.degree is None or g.degree < field.q
        for x in range(field.q):
            assert evaluate(f, x) == evaluate(g, x)


def test_dense_gcd():
    a = DensePoly(F7, (6, 0, 1))  # x^2 - 1
    b = DensePoly(F7, (6, 1))     # x - 1
    g = dense_gcd(a, b)
    assert g.coeffs == (6, 1)
    # gcd divides both and is monic
    assert dense_mod(a, g).is_zero() and dense_mod(b, g).is_zero()
    assert g.coeffs[-1] == 1
    with pytest.raises(ZeroDivisionError):
        dense_gcd(DensePoly(F7, ()), DensePoly(F7, ()))


def test_dense_powmod():
    x = DensePoly(F5, (0, 1))
    mod = DensePoly(F5, (1, 0, 1))
    assert dense_powmod(x, 5, mod).coeffs == (0, 1)  # x^5 = x mod x^2+1 over F_5
    assert dense_mod(DensePoly(F5, (0, 0, 0, 1)), x).is_zero()
    with pytest.raises(ZeroDivisionError):
        dense_mod(x, DensePoly(F5, ()))


def test_dense_powmod_vs_naive():
    rng = random.Random(31)
    for _ in range(25):
        field = rng.choice((F5, F7))
        g = DensePoly(field, tuple([rng.randrange(field.q) for _ in range(3)] + [1]))
        base = DensePoly(field, tuple(rng.randrange(field.q) for _ in range(3)))
        e = rng.randrange(0, 65)
        naive = DensePoly(field, (1,))
        for _ in range(e):
            naive = dense_mod(dense_mul(naive, base), g)
        assert dense_powmod(base, e, g) == naive


def test_dense_add_mul():
    a = DensePoly(F5, (1, 2))
    b = DensePoly(F5, (4, 3))
    assert dense_add(a, b).is_zero()  # (1+4, 2+3) vanishes mod 5
    assert dense_mul(a, b).coeffs == (4, 1, 1)


def test_to_dense():
    assert to_dense(SparsePoly(F5, ((1, 2), (1, 0))), 10).coeffs == (1, 0, 1)
    assert to_dense(SparseShiftPoly(F5, ((1, 1, 2),)), 10).coeffs == (1, 2, 1)
    builder = SlpBuilder(F5, "extended")
    reg = builder.power(builder.x(), 2 ** 40)
    with pytest.raises(DegreeCapExceededError):
        to_dense(builder.build(reg), 10 ** 6)


def test_to_dense_slp_matches_eval():
    builder = SlpBuilder(F7, "strict")
    x = builder.x()
    c3 = builder.const(3)
    reg = builder.sub(builder.mul(builder.mul(x, x), x), builder.mul(c3, x))
    slp = builder.build(reg)
    dense = to_dense(slp, 100)
    for x0 in range(7):
        assert evaluate(dense, x0) == evaluate(slp, x0)


def test_strict_const_chains():
    rng = random.Random(67)
    for _ in range(20):
        c = rng.randrange(0, 67)
        builder = SlpBuilder(F67, "strict")
        prog = builder.build(builder.const(c))
        assert evaluate(prog, 5) == c


def test_builder_power_chain():
    builder = SlpBuilder(F67, "extended")
    prog = builder.build(builder.power(builder.x(), 33))
    for x0 in (0, 1, 2, 63):
        assert evaluate(prog, x0) == pow(x0, 33, 67)


def test_slp_validation():
    with pytest.raises(ValueError):
        Slp(F5, (("x",), ("one",)), 1, "strict")  # wrong strict prefix
    with pytest.raises(ValueError):
        Slp(F5, (("one",), ("x",), ("const", 2)), 3, "strict")
    with pytest.raises(ValueError):
        Slp(F5, (("one",), ("x",), ("add", 3, 1)), 3, "extended")
    with pytest.raises(ValueError):
        Slp(F5, (("gen",),), 1, "extended")  # no generator in a prime field


def test_evaluator_matches_evaluate():
    rng = random.Random(9)
    f = SparsePoly(F9, tuple((rng.randrange(1, 9), rng.randrange(30)) for _ in range(3)))
    ev = evaluator(f)
    for x0 in range(9):
        assert ev(x0) == evaluate(f, x0)


def test_field_mismatch_errors():
    with pytest.raises(FieldMismatchError):
        dense_add(DensePoly(F5, (1,)), DensePoly(F7, (1,)))
    with pytest.raises(FieldMismatchError):
        evaluate(DensePoly(F5, (1, 1)), 9)  # point index outside F_5


def test_fixture_files_roundtrip():
    import pathlib

    fixtures = sorted(pathlib.Path(__file__).parent.glob("fixtures/*.poly"))
    assert len(fixtures) >= 5
    for path in fixtures:
        f = parse_poly(path.read_text())
        assert parse_poly(serialize_poly(f)) == f, path.name
