"""Polynomial representations: dense, sparse, sparse-shift, straight-line.

All four representations share a Field and evaluate to the same induced map
F_q -> F_q.  Coefficients are canonical element indices (see ffield); sparse
and sparse-shift exponents are arbitrary-precision nonnegative integers.
Values are immutable after construction, so they are safe to share between
workers.
"""

from __future__ import annotations

import re
from collections import namedtuple
from dataclasses import dataclass

from .errors import (
    DegreeCapExceededError,
    FieldMismatchError,
    ParseError,
)
from .ffield import Field, make_field

SLP_STRICT = "strict"
SLP_EXTENDED = "extended"

# Degree bounds: `bound` is None for the zero polynomial (degree -infinity),
# `exact` is False when only an upper bound is known.
DegreeBound = namedtuple("DegreeBound", ["bound", "exact"])


def _check_coeff(field: Field, c: int) -> int:
    if not 0 <= c < field.q:
        raise FieldMismatchError(f"coefficient index {c} out of range for q={field.q}")
    return c


@dataclass(frozen=True)
class DensePoly:
    """Coefficient list, index i = coefficient of x^i, trailing zeros trimmed."""

    field: Field
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = list(self.coeffs)
        for c in coeffs:
            _check_coeff(self.field, c)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class SparsePoly:
    """Nonzero (coeff, exponent) terms, exponents strictly increasing."""

    field: Field
    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        combined: dict[int, int] = {}
        for c, e in self.terms:
            _check_coeff(self.field, c)
            if e < 0:
                raise ValueError("exponents must be nonnegative")
            combined[e] = self.field.add(combined.get(e, 0), c)
        terms = tuple((c, e) for e, c in sorted(combined.items()) if c != 0)
        object.__setattr__(self, "terms", terms)

    @property
    def degree(self) -> int | None:
        return self.terms[-1][1] if self.terms else None

    def is_zero(self) -> bool:
        return not self.terms


@dataclass(frozen=True)
class SparseShiftPoly:
    """Sum of a_i * (x + b_i)^e_i plus an additive constant."""

    field: Field
    triples: tuple[tuple[int, int, int], ...]
    constant: int = 0

    def __post_init__(self):
        triples = []
        for a, b, e in self.triples:
            _check_coeff(self.field, a)
            _check_coeff(self.field, b)
            if e < 0:
                raise ValueError("exponents must be nonnegative")
            if a != 0:
                triples.append((a, b, e))
        object.__setattr__(self, "triples", tuple(triples))
        object.__setattr__(self, "constant", _check_coeff(self.field, self.constant))


# Straight-line programs.  Instructions are tuples; register numbers are
# 1-based and every operand must refer to an earlier instruction.
_SLP_NULLARY = ("one", "gen", "x")


@dataclass(frozen=True)
class Slp:
    field: Field
    instructions: tuple[tuple, ...]
    output: int
    mode: str = SLP_EXTENDED

    def __post_init__(self):
        if self.mode not in (SLP_STRICT, SLP_EXTENDED):
            raise ValueError(f"unknown SLP mode {self.mode!r}")
        instrs = []
        for i, ins in enumerate(self.instructions, start=1):
            op = ins[0]
            if op in _SLP_NULLARY:
                if op == "gen" and self.field.m == 1:
                    raise ValueError("gen is only available in extension fields")
                if self.mode == SLP_STRICT and i > 2:
                    raise ValueError(
                        "strict programs allow only add/sub/mul after the "
                        "two seed registers")
                instrs.append((op,))
            elif op == "const":
                if self.mode == SLP_STRICT:
                    raise ValueError("const is not part of the strict model")
                instrs.append(("const", ins[1] % self.field.p))
            elif op in ("add", "sub", "mul"):
                j, k = ins[1], ins[2]
                if not (1 <= j < i and 1 <= k < i):
                    raise ValueError(f"instruction {i} refers to a later register")
                instrs.append((op, j, k))
            else:
                raise ValueError(f"unknown SLP instruction {op!r}")
        if self.mode == SLP_STRICT:
            want_first = "one" if self.field.m == 1 else "gen"
            if len(instrs) < 2 or instrs[0] != (want_first,) or instrs[1] != ("x",):
                raise ValueError(
                    f"strict programs must start with {want_first}, x")
        if not 1 <= self.output <= len(instrs):
            raise ValueError("output register out of range")
        object.__setattr__(self, "instructions", tuple(instrs))


PolyInput = (DensePoly, SparsePoly, SparseShiftPoly, Slp)


class SlpBuilder:
    """Incrementally assemble an Slp; returns 1-based register indices."""

    def __init__(self, field: Field, mode: str = SLP_EXTENDED):
        self.field = field
        self.mode = mode
        self._instrs: list[tuple] = []
        if mode == SLP_STRICT:
            self._instrs.append(("one",) if field.m == 1 else ("gen",))
            self._instrs.append(("x",))

    def _emit(self, ins) -> int:
        self._instrs.append(ins)
        return len(self._instrs)

    def one(self) -> int:
        if self.mode == SLP_STRICT:
            return 1 if self.field.m == 1 else self.const(1)
        return self._emit(("one",))

    def x(self) -> int:
        if self.mode == SLP_STRICT:
            return 2
        return self._emit(("x",))

    def gen(self) -> int:
        if self.mode == SLP_STRICT and self.field.m > 1:
            return 1
        return self._emit(("gen",))

    def add(self, j: int, k: int) -> int:
        return self._emit(("add", j, k))

    def sub(self, j: int, k: int) -> int:
        return self._emit(("sub", j, k))

    def mul(self, j: int, k: int) -> int:
        return self._emit(("mul", j, k))

    def const(self, c: int) -> int:
        """Register holding the constant c (reduced mod p).

        In extended mode this is a CONST instruction.  In strict mode the
        constant is compiled from 1 by a double-and-add chain, so the
        program stays inside the minimal instruction set.
        """
        if self.mode == SLP_EXTENDED:
            return self._emit(("const", c % self.field.p))
        if self.field.m != 1:
            raise ValueError("strict constant chains require a prime field")
        c %= self.field.p
        if c == 0:
            return self._emit(("sub", 1, 1))
        if c == 1:
            return 1
        reg = 1
        for bit in bin(c)[3:]:
            reg = self._emit(("add", reg, reg))
            if bit == "1":
                reg = self._emit(("add", reg, 1))
        return reg

    def power(self, j: int, e: int) -> int:
        """Register holding r_j ** e by a square-and-multiply chain."""
        if e < 0:
            raise ValueError("exponents must be nonnegative")
        if e == 0:
            return self.one()
        reg = j
        for bit in bin(e)[3:]:
            reg = self._emit(("mul", reg, reg))
            if bit == "1":
                reg = self._emit(("mul", reg, j))
        return reg

    def build(self, output: int, mode: str | None = None) -> Slp:
        return Slp(self.field, tuple(self._instrs), output, mode or self.mode)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _check_point(f, x: int) -> None:
    if not 0 <= x < f.field.q:
        raise FieldMismatchError(f"point index {x} out of range for q={f.field.q}")


def evaluate(f, x: int) -> int:
    """Evaluate any representation at the element with canonical index x."""
    _check_point(f, x)
    return evaluator(f)(x)


def evaluator(f):
    """Compile a representation into a fast callable index -> index.

    Sparse exponents are folded through x^q = x first; this changes the
    polynomial but not the induced map, which is all evaluation sees.
    """
    field = f.field
    if isinstance(f, DensePoly):
        rev = tuple(reversed(f.coeffs))
        if field.m == 1:
            p = field.p

            def eval_dense_prime(x, _rev=rev, _p=p):
                acc = 0
                for c in _rev:
                    acc = (acc * x + c) % _p
                return acc

            return eval_dense_prime
        add, mul = field.add, field.mul

        def eval_dense_ext(x, _rev=rev):
            acc = 0
            for c in _rev:
                acc = add(mul(acc, x), c)
            return acc

        return eval_dense_ext
    if isinstance(f, SparsePoly):
        terms = reduce_exponents(f).terms
        add, powf = field.add, field.pow

        def eval_sparse(x, _terms=terms):
            acc = 0
            for c, e in _terms:
                acc = add(acc, field.mul(c, powf(x, e)))
            return acc

        return eval_sparse
    if isinstance(f, SparseShiftPoly):
        qm1 = field.q - 1
        folded = tuple(
            (a, b, e if e == 0 else 1 + (e - 1) % qm1) for a, b, e in f.triples)
        add, mul, powf, const = field.add, field.mul, field.pow, f.constant

        def eval_shift(x, _triples=folded, _c=const):
            acc = _c
            for a, b, e in _triples:
                acc = add(acc, mul(a, powf(add(x, b), e)))
            return acc

        return eval_shift
    if isinstance(f, Slp):
        instrs, out = f.instructions, f.output
        add, sub, mul = field.add, field.sub, field.mul
        gen = field.p if field.m > 1 else None

        def eval_slp(x, _instrs=instrs, _out=out):
            regs = []
            for ins in _instrs:
                op = ins[0]
                if op == "add":
                    regs.append(add(regs[ins[1] - 1], regs[ins[2] - 1]))
                elif op == "mul":
                    regs.append(mul(regs[ins[1] - 1], regs[ins[2] - 1]))
                elif op == "sub":
                    regs.append(sub(regs[ins[1] - 1], regs[ins[2] - 1]))
                elif op == "x":
                    regs.append(x)
                elif op == "one":
                    regs.append(1)
                elif op == "gen":
                    regs.append(gen)
                else:  # const
                    regs.append(ins[1])
            return regs[_out - 1]

        return eval_slp
    raise TypeError(f"not a polynomial representation: {type(f).__name__}")


# ---------------------------------------------------------------------------
# Degree accounting and exponent folding
# ---------------------------------------------------------------------------


def degree_bound(f) -> DegreeBound:
    """Degree (exact where the representation allows) or an upper bound."""
    if isinstance(f, DensePoly):
        return DegreeBound(f.degree, True)
    if isinstance(f, SparsePoly):
        return DegreeBound(f.degree, True)
    if isinstance(f, SparseShiftPoly):
        if not f.triples:
            return DegreeBound(0 if f.constant else None, True)
        top = max(e for _, _, e in f.triples)
        lead = 0
        for a, _, e in f.triples:
            if e == top:
                lead = f.field.add(lead, a)
        return DegreeBound(top, lead != 0)
    if isinstance(f, Slp):
        bounds = []
        for ins in f.instructions:
            op = ins[0]
            if op == "x":
                bounds.append(1)
            elif op in ("one", "gen", "const"):
                bounds.append(0)
            elif op == "mul":
                bounds.append(bounds[ins[1] - 1] + bounds[ins[2] - 1])
            else:
                bounds.append(max(bounds[ins[1] - 1], bounds[ins[2] - 1]))
        return DegreeBound(bounds[f.output - 1], False)
    raise TypeError(f"not a polynomial representation: {type(f).__name__}")


def reduce_exponents(f: SparsePoly) -> SparsePoly:
    """Fold exponents through x^q = x; the induced map is unchanged.

    Every exponent e >= 1 becomes 1 + (e-1) mod (q-1), terms with equal
    folded exponents are combined, and the result has degree < q.
    """
    qm1 = f.field.q - 1
    terms = [(c, e if e == 0 else 1 + (e - 1) % qm1) for c, e in f.terms]
    return SparsePoly(f.field, tuple(terms))


# ---------------------------------------------------------------------------
# Dense arithmetic (coefficient lists of canonical indices)
# ---------------------------------------------------------------------------


def _dense_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _dense_add(field: Field, a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = field.add(out[i], c)
    return _dense_trim(out)


def _dense_sub(field: Field, a: list[int], b: list[int]) -> list[int]:
    out = list(a) + [0] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = field.sub(out[i], c)
    return _dense_trim(out)


def _dense_mul(field: Field, a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    mul, add = field.mul, field.add
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = add(out[i + j], mul(ai, bj))
    return _dense_trim(out)


def _dense_mod(field: Field, a: list[int], g: list[int]) -> list[int]:
    if not g:
        raise ZeroDivisionError("polynomial modulus is zero")
    a = list(a)
    dg = len(g) - 1
    inv_lead = field.inv(g[-1])
    mul, sub = field.mul, field.sub
    while _dense_trim(a) and len(a) - 1 >= dg:
        coef = mul(a[-1], inv_lead)
        shift = len(a) - 1 - dg
        for i, gi in enumerate(g):
            a[shift + i] = sub(a[shift + i], mul(coef, gi))
    return a


def _dense_powmod(field: Field, base: list[int], e: int, g: list[int]) -> list[int]:
    result = [1]
    base = _dense_mod(field, base, g)
    while e > 0:
        if e & 1:
            result = _dense_mod(field, _dense_mul(field, result, base), g)
        e >>= 1
        if e:
            base = _dense_mod(field, _dense_mul(field, base, base), g)
    return result


def _dense_gcd(field: Field, a: list[int], b: list[int]) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _dense_mod(field, a, b)
    if a:
        inv = field.inv(a[-1])
        a = [field.mul(c, inv) for c in a]
    return a


def _same_field(a, b) -> Field:
    if a.field != b.field:
        raise FieldMismatchError("operands belong to different fields")
    return a.field


def dense_add(g: DensePoly, h: DensePoly) -> DensePoly:
    f = _same_field(g, h)
    return DensePoly(f, tuple(_dense_add(f, list(g.coeffs), list(h.coeffs))))


def dense_mul(g: DensePoly, h: DensePoly) -> DensePoly:
    f = _same_field(g, h)
    return DensePoly(f, tuple(_dense_mul(f, list(g.coeffs), list(h.coeffs))))


def dense_mod(g: DensePoly, h: DensePoly) -> DensePoly:
    f = _same_field(g, h)
    if h.is_zero():
        raise ZeroDivisionError("polynomial modulus is zero")
    return DensePoly(f, tuple(_dense_mod(f, list(g.coeffs), list(h.coeffs))))


def dense_powmod(g: DensePoly, e: int, h: DensePoly) -> DensePoly:
    f = _same_field(g, h)
    if h.is_zero():
        raise ZeroDivisionError("polynomial modulus is zero")
    return DensePoly(f, tuple(_dense_powmod(f, list(g.coeffs), e, list(h.coeffs))))


def dense_gcd(g: DensePoly, h: DensePoly) -> DensePoly:
    """Monic gcd; the zero polynomial is absorbed, gcd(0, 0) is an error."""
    f = _same_field(g, h)
    if g.is_zero() and h.is_zero():
        raise ZeroDivisionError("gcd of two zero polynomials")
    return DensePoly(f, tuple(_dense_gcd(f, list(g.coeffs), list(h.coeffs))))


def _dense_pow(field: Field, base: list[int], e: int) -> list[int]:
    result = [1]
    while e > 0:
        if e & 1:
            result = _dense_mul(field, result, base)
        e >>= 1
        if e:
            base = _dense_mul(field, base, base)
    return result


def to_dense(f, cap: int) -> DensePoly:
    """Expand any representation to exact dense coefficients.

    Raises DegreeCapExceededError when the degree bound is above `cap`;
    callers are expected to fall back to evaluation-only methods.
    """
    bound = degree_bound(f).bound
    if bound is not None and bound > cap:
        raise DegreeCapExceededError(
            f"degree bound {bound} exceeds expansion cap {cap}")
    field = f.field
    if isinstance(f, DensePoly):
        return f
    if isinstance(f, SparsePoly):
        if f.is_zero():
            return DensePoly(field, ())
        coeffs = [0] * (f.degree + 1)
        for c, e in f.terms:
            coeffs[e] = c
        return DensePoly(field, tuple(coeffs))
    if isinstance(f, SparseShiftPoly):
        acc = [f.constant] if f.constant else []
        for a, b, e in f.triples:
            term = _dense_pow(field, [b, 1], e)
            term = [field.mul(a, c) for c in term]
            acc = _dense_add(field, acc, term)
        return DensePoly(field, tuple(acc))
    if isinstance(f, Slp):
        needed = set()
        stack = [f.output]
        while stack:
            i = stack.pop()
            if i in needed:
                continue
            needed.add(i)
            ins = f.instructions[i - 1]
            if ins[0] in ("add", "sub", "mul"):
                stack.extend(ins[1:])
        regs: dict[int, list[int]] = {}
        for i, ins in enumerate(f.instructions, start=1):
            if i not in needed:
                continue
            op = ins[0]
            if op == "one":
                regs[i] = [1]
            elif op == "gen":
                regs[i] = [field.p]
            elif op == "const":
                regs[i] = [ins[1]] if ins[1] else []
            elif op == "x":
                regs[i] = [0, 1]
            elif op == "add":
                regs[i] = _dense_add(field, regs[ins[1]], regs[ins[2]])
            elif op == "sub":
                regs[i] = _dense_sub(field, regs[ins[1]], regs[ins[2]])
            else:
                regs[i] = _dense_mul(field, regs[ins[1]], regs[ins[2]])
        return DensePoly(field, tuple(regs[f.output]))
    raise TypeError(f"not a polynomial representation: {type(f).__name__}")


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r":=|\d+(?:\.\d+)*|[A-Za-z][A-Za-z0-9_]*|[=:,+*^()]")


def _tokenize(text: str):
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        for match in _TOKEN_RE.finditer(line):
            gap = line[pos:match.start()]
            if gap.strip():
                raise ParseError(f"unexpected character {gap.strip()[0]!r}",
                                 lineno, pos + 1)
            tokens.append((match.group(), lineno, match.start() + 1))
            pos = match.end()
        if line[pos:].strip():
            raise ParseError(f"unexpected character {line[pos:].strip()[0]!r}",
                             lineno, pos + 1)
        tokens.append((None, lineno, len(line) + 1))  # end of line marker
    return tokens


class _TokenStream:
    def __init__(self, tokens, skip_newlines=True):
        self.tokens = tokens
        self.pos = 0
        self.skip_newlines = skip_newlines

    def peek(self):
        pos = self.pos
        while pos < len(self.tokens):
            tok = self.tokens[pos]
            if tok[0] is None and self.skip_newlines:
                pos += 1
                continue
            return tok
        return (None, self.tokens[-1][1] if self.tokens else 1, 1)

    def next(self):
        tok = self.peek()
        while self.pos < len(self.tokens):
            cur = self.tokens[self.pos]
            self.pos += 1
            if cur[0] is None and self.skip_newlines:
                continue
            return cur
        return tok

    def expect(self, want: str):
        tok, line, col = self.next()
        if tok != want:
            raise ParseError(f"expected {want!r}, found {tok!r}", line, col)
        return tok

    def at_end(self) -> bool:
        return self.peek()[0] is None


def _parse_int(tok, line, col) -> int:
    if tok is None or not tok.isdigit():
        raise ParseError(f"expected an integer, found {tok!r}", line, col)
    return int(tok)


def _parse_element(field: Field, tok, line, col) -> int:
    if tok is None or not re.fullmatch(r"\d+(?:\.\d+)*", tok):
        raise ParseError(f"expected a field element, found {tok!r}", line, col)
    digits = [int(d) for d in tok.split(".")]
    if len(digits) > field.m:
        raise FieldMismatchError(
            f"element {tok!r} has {len(digits)} coordinates but m={field.m}")
    if any(d >= field.p for d in digits):
        raise FieldMismatchError(f"element {tok!r} has a digit >= p={field.p}")
    return field.from_coeffs(digits + [0] * (field.m - len(digits)))


def _format_element(field: Field, e: int) -> str:
    if field.m == 1:
        return str(e)
    return ".".join(str(d) for d in field.coeffs(e))


def _parse_header(stream: _TokenStream, end: str = ":"):
    """Read `key=value` pairs until the `end` token (or end of input)."""
    keys = {}
    while True:
        tok, line, col = stream.next()
        if tok == end or tok is None:
            if tok is None and end == ":":
                raise ParseError("header not terminated by ':'", line, col)
            break
        stream.expect("=")
        if tok in ("p", "m"):
            val, vline, vcol = stream.next()
            keys[tok] = _parse_int(val, vline, vcol)
        elif tok == "mod":
            coeffs = []
            while True:
                val, vline, vcol = stream.next()
                coeffs.append(_parse_int(val, vline, vcol))
                if stream.peek()[0] != ",":
                    break
                stream.next()
            keys["mod"] = coeffs
        elif tok == "mode":
            val, vline, vcol = stream.next()
            if val not in (SLP_STRICT, SLP_EXTENDED):
                raise ParseError(f"unknown mode {val!r}", vline, vcol)
            keys["mode"] = val
        else:
            raise ParseError(f"unknown header key {tok!r}", line, col)
    if "p" not in keys:
        raise ParseError("header is missing p=<prime>", *stream.peek()[1:])
    return keys


def _field_from_header(keys) -> Field:
    m = keys.get("m", 1)
    mod = keys.get("mod")
    if mod is not None and m == 1:
        raise ParseError("mod= requires m > 1")
    try:
        return make_field(keys["p"], m, modulus=mod)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def parse_poly(text: str):
    """Parse the one-polynomial text format into a representation."""
    tokens = _tokenize(text)
    stream = _TokenStream(tokens)
    kind, line, col = stream.next()
    if kind == "dense":
        field = _field_from_header(_parse_header(stream))
        coeffs = []
        while not stream.at_end():
            coeffs.append(_parse_element(field, *stream.next()))
        return DensePoly(field, tuple(coeffs))
    if kind == "sparse":
        field = _field_from_header(_parse_header(stream))
        terms = []
        while not stream.at_end():
            if terms:
                stream.expect("+")
            c = _parse_element(field, *stream.next())
            stream.expect("*")
            stream.expect("x")
            stream.expect("^")
            terms.append((c, _parse_int(*stream.next())))
        return SparsePoly(field, tuple(terms))
    if kind == "shift":
        field = _field_from_header(_parse_header(stream))
        triples = []
        constant = 0
        first = True
        while not stream.at_end():
            if not first:
                stream.expect("+")
            first = False
            if stream.peek()[0] == "const":
                stream.next()
                constant = field.add(constant, _parse_element(field, *stream.next()))
                continue
            a = _parse_element(field, *stream.next())
            stream.expect("*")
            stream.expect("(")
            stream.expect("x")
            stream.expect("+")
            b = _parse_element(field, *stream.next())
            stream.expect(")")
            stream.expect("^")
            triples.append((a, b, _parse_int(*stream.next())))
        return SparseShiftPoly(field, tuple(triples), constant)
    if kind == "slp":
        return _parse_slp(tokens)
    raise ParseError(f"unknown polynomial kind {kind!r}", line, col)


def _parse_slp(tokens) -> Slp:
    header_line = next(t[1] for t in tokens if t[0] is not None)
    header = _TokenStream(
        [t for t in tokens if t[1] == header_line], skip_newlines=False)
    header.expect("slp")
    keys = _parse_header(header, end=None)
    field = _field_from_header(keys)
    mode = keys.get("mode", SLP_STRICT)

    lines: dict[int, list] = {}
    for tok in tokens:
        if tok[1] <= header_line:
            continue
        lines.setdefault(tok[1], []).append(tok)

    def reg_index(tok, line, col, limit):
        if tok is None or not re.fullmatch(r"r\d+", tok):
            raise ParseError(f"expected a register, found {tok!r}", line, col)
        idx = int(tok[1:])
        if not 1 <= idx <= limit:
            raise ParseError(f"register {tok} out of range", line, col)
        return idx

    instructions: list[tuple] = []
    output = None
    for lineno in sorted(lines):
        ls = _TokenStream(lines[lineno], skip_newlines=False)
        first = ls.peek()[0]
        if first is None:
            continue
        if output is not None:
            raise ParseError("instructions after 'out'", lineno, 1)
        if first == "out":
            ls.next()
            output = reg_index(*ls.next(), len(instructions))
        else:
            idx = reg_index(*ls.next(), len(instructions) + 1)
            if idx != len(instructions) + 1:
                raise ParseError(
                    f"expected r{len(instructions) + 1}, found r{idx}", lineno, 1)
            ls.expect(":=")
            op, oline, ocol = ls.next()
            if op in _SLP_NULLARY:
                instructions.append((op,))
            elif op == "const":
                instructions.append(("const", _parse_int(*ls.next())))
            elif op in ("add", "sub", "mul"):
                j = reg_index(*ls.next(), len(instructions))
                k = reg_index(*ls.next(), len(instructions))
                instructions.append((op, j, k))
            else:
                raise ParseError(f"unknown instruction {op!r}", oline, ocol)
        rest = ls.peek()
        if rest[0] is not None:
            raise ParseError(f"trailing token {rest[0]!r}", rest[1], rest[2])
    if output is None:
        raise ParseError("missing 'out r<i>' line")
    try:
        return Slp(field, tuple(instructions), output, mode)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _header_text(kind: str, field: Field, mode: str | None = None) -> str:
    parts = [kind, f"p={field.p}"]
    if field.m > 1:
        parts.append(f"m={field.m}")
        parts.append("mod=" + ",".join(str(c) for c in field.modulus))
    if mode is not None:
        parts.append(f"mode={mode}")
    return " ".join(parts)


def serialize_poly(f) -> str:
    """Canonical text form; parse(serialize(f)) reproduces f structurally."""
    field = f.field
    if isinstance(f, DensePoly):
        body = " ".join(_format_element(field, c) for c in f.coeffs) or "0"
        return f"{_header_text('dense', field)}: {body}"
    if isinstance(f, SparsePoly):
        body = " + ".join(
            f"{_format_element(field, c)}*x^{e}" for c, e in f.terms)
        return f"{_header_text('sparse', field)}: {body}".rstrip()
    if isinstance(f, SparseShiftPoly):
        parts = [
            f"{_format_element(field, a)}*(x+{_format_element(field, b)})^{e}"
            for a, b, e in f.triples]
        if f.constant or not parts:
            parts.append(f"const {_format_element(field, f.constant)}")
        return f"{_header_text('shift', field)}: " + " + ".join(parts)
    if isinstance(f, Slp):
        lines = [_header_text("slp", field, f.mode)]
        for i, ins in enumerate(f.instructions, start=1):
            op = ins[0]
            if op in _SLP_NULLARY:
                rhs = op
            elif op == "const":
                rhs = f"const {ins[1]}"
            else:
                rhs = f"{op} r{ins[1]} r{ins[2]}"
            lines.append(f"r{i} := {rhs}")
        lines.append(f"out r{f.output}")
        return "\n".join(lines)
    raise TypeError(f"not a polynomial representation: {type(f).__name__}")
