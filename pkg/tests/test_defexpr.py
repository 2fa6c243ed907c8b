"""Expression DSL: grammar, realness typing, evaluation, oracle equivalence."""

import cmath
import math
import random

import numpy as np
import pytest

from discgeom import defexpr
from discgeom.defexpr import (
    Binary,
    Const,
    ImagUnit,
    Num,
    Param,
    Pow,
    Unary,
    Var,
    evaluate,
    parse,
    pretty,
)
from discgeom.errors import (
    DimensionError,
    EvalDomainError,
    ExprSyntaxError,
    MissingParameterError,
    RealnessError,
)


class TestParsing:
    def test_basic_structure(self):
        ast = parse("Re(z1) + abs2(z2)", 2)
        assert ast.root == Binary("add", Unary("re", Var(1)), Unary("abs2", Var(2)))

    def test_flat_exponential_expression(self):
        ast = parse("Re(z1) + exp(-1/abs2(z2))", 2)
        assert evaluate(ast, (0j, 1 + 0j)) == pytest.approx(math.exp(-1))

    def test_complex_root_rejected(self):
        with pytest.raises(RealnessError):
            parse("z1 + z2", 2)

    def test_dimension_error(self):
        with pytest.raises(DimensionError):
            parse("Re(z3)", 2)
        with pytest.raises(DimensionError):
            parse("Re(z0)", 2)

    def test_syntax_error_position(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse("Re(z1) + ", 2)
        assert err.value.position == 9

    def test_unknown_identifier(self):
        with pytest.raises(ExprSyntaxError):
            parse("Re(z1) + foo(z2)", 2)

    def test_no_implicit_multiplication(self):
        with pytest.raises(ExprSyntaxError):
            parse("2 Re(z1)", 2)

    def test_precedence_pow_over_unary_minus(self):
        # -x^2 parses as -(x^2)
        ast = parse("-abs2(z1)^2", 2)
        assert isinstance(ast.root, Unary) and ast.root.op == "neg"
        assert isinstance(ast.root.arg, Pow)

    def test_pow_requires_literal_exponent(self):
        with pytest.raises(ExprSyntaxError):
            parse("abs2(z1)^abs2(z2)", 2)

    def test_noninteger_pow_needs_nonneg_base(self):
        parse("abs(z1)^0.5", 2)  # fine
        parse("abs2(z1)^1.5 + exp(Re(z1))^0.25", 2)  # fine
        with pytest.raises(RealnessError):
            parse("Re(z1)^0.5", 2)
        with pytest.raises(RealnessError):
            parse("z1^0.5", 2)

    def test_integer_pow_on_complex_base(self):
        ast = parse("abs2(z2^2 - z3^3)", 3)
        assert evaluate(ast, (0j, 0.001 + 0j, 0.01 + 0j)) == pytest.approx(0.0, abs=1e-30)

    def test_log_of_complex_rejected(self):
        with pytest.raises(RealnessError):
            parse("Re(log(z1))", 2)

    def test_parameters(self):
        ast = parse("abs2(z1) - $radius", 2)
        assert evaluate(ast, (1 + 0j, 0j), {"radius": 2.0}) == pytest.approx(-1.0)
        with pytest.raises(MissingParameterError):
            evaluate(ast, (1 + 0j, 0j), {})


class TestEvaluation:
    def test_unit_sphere_point(self):
        ast = parse("abs2(z1) + abs2(z2) - 1", 2)
        assert evaluate(ast, (1 + 0j, 0j)) == 0.0

    def test_dangelo_curve_point(self):
        ast = parse("Re(z1) + abs2(z2^2 - z3^3)", 3)
        zeta = 0.1
        val = evaluate(ast, (0j, complex(zeta) ** 3, complex(zeta) ** 2))
        assert abs(val) < 1e-30

    def test_log_of_nonpositive_raises(self):
        ast = parse("log(Re(z1))", 2)
        with pytest.raises(EvalDomainError):
            evaluate(ast, (-1 + 0j, 0j))
        with pytest.raises(EvalDomainError):
            evaluate(ast, (0j, 0j))

    def test_division_by_zero_raises(self):
        ast = parse("1/Re(z1)", 2)
        with pytest.raises(EvalDomainError) as err:
            evaluate(ast, (0j, 0j))
        assert "/Re(z1)" in str(err.value)  # offending subexpression named

    def test_sqrt_of_negative_raises(self):
        ast = parse("sqrt(Re(z1))", 2)
        with pytest.raises(EvalDomainError):
            evaluate(ast, (-4 + 0j, 0j))

    def test_pure_deterministic(self):
        ast = parse("exp(Im(z1*conj(z2))) - abs(z2)^0.5", 2)
        z = (0.3 + 0.7j, 1.1 - 0.2j)
        assert evaluate(ast, z) == evaluate(ast, z)

    def test_complex_exponential(self):
        # e^{i theta} with theta = log |z2|^2, as in twisted defining functions
        ast = parse("Re(exp(i*log(abs2(z2))) * conj(z1))", 2)
        theta = math.log(abs(0.5 + 0.25j) ** 2)
        expected = (cmath.exp(1j * theta) * (2 + 1j).conjugate()).real
        assert evaluate(ast, (2 + 1j, 0.5 + 0.25j)) == pytest.approx(expected, rel=1e-12)


# --- round trip & oracle equivalence on random ASTs ---------------------------
#
# The reference evaluator below is written directly against the grammar using
# python complex arithmetic; it shares no code with the production evaluator.


def ref_eval(node, zs, params):
    if isinstance(node, Num):
        return complex(node.value)
    if isinstance(node, ImagUnit):
        return 1j
    if isinstance(node, Const):
        return complex({"pi": math.pi, "e": math.e}[node.name])
    if isinstance(node, Var):
        return complex(zs[node.index - 1])
    if isinstance(node, Param):
        return complex(params[node.name])
    if isinstance(node, Unary):
        a = ref_eval(node.arg, zs, params)
        if node.op == "neg":
            return -a
        if node.op == "conj":
            return a.conjugate()
        if node.op == "re":
            return complex(a.real)
        if node.op == "im":
            return complex(a.imag)
        if node.op == "abs":
            return complex(abs(a))
        if node.op == "abs2":
            return complex(a.real * a.real + a.imag * a.imag)
        if node.op == "exp":
            return cmath.exp(a)
        if node.op == "log":
            if a.real <= 0:
                raise ZeroDivisionError("log domain")
            return complex(math.log(a.real))
        if node.op == "sqrt":
            if a.real < 0:
                raise ZeroDivisionError("sqrt domain")
            return complex(math.sqrt(a.real))
        raise AssertionError(node.op)
    if isinstance(node, Binary):
        lhs = ref_eval(node.lhs, zs, params)
        rhs = ref_eval(node.rhs, zs, params)
        if node.op == "add":
            return lhs + rhs
        if node.op == "sub":
            return lhs - rhs
        if node.op == "mul":
            return lhs * rhs
        if rhs == 0:
            raise ZeroDivisionError("division by zero")
        return lhs / rhs
    if isinstance(node, Pow):
        base = ref_eval(node.base, zs, params)
        if float(node.exponent).is_integer():
            k = int(node.exponent)
            if k < 0 and base == 0:
                raise ZeroDivisionError("zero base")
            out = 1 + 0j
            for _ in range(abs(k)):
                out *= base
            return out if k >= 0 else 1.0 / out
        if base.real <= 0:
            raise ZeroDivisionError("pow domain")
        return complex(math.exp(node.exponent * math.log(base.real)))
    raise AssertionError(type(node))


def random_ast(rng, n, depth, want_real):
    """Depth-bounded random node of the requested realness type."""
    if depth == 0:
        if want_real:
            choices = ["num", "const", "param", "re", "abs2"]
        else:
            choices = ["var", "i", "num"]
        kind = rng.choice(choices)
        if kind == "num":
            return Num(round(rng.uniform(0.1, 3.0), 3))
        if kind == "const":
            return Const(rng.choice(["pi", "e"]))
        if kind == "param":
            return Param(rng.choice(["a", "b"]))
        if kind == "i":
            return ImagUnit()
        if kind == "re":
            return Unary("re", Var(rng.randint(1, n)))
        if kind == "abs2":
            return Unary("abs2", Var(rng.randint(1, n)))
        return Var(rng.randint(1, n))
    if want_real:
        kind = rng.choice(["add", "sub", "mul", "div", "neg", "re", "im", "abs",
                           "abs2", "exp", "log", "sqrt", "powint", "powreal"])
        if kind in ("add", "sub", "mul", "div"):
            return Binary(kind, random_ast(rng, n, depth - 1, True),
                          random_ast(rng, n, depth - 1, True))
        if kind == "neg":
            return Unary("neg", random_ast(rng, n, depth - 1, True))
        if kind in ("re", "im", "abs", "abs2"):
            return Unary(kind, random_ast(rng, n, depth - 1, rng.random() < 0.3))
        if kind == "exp":
            return Unary("exp", random_ast(rng, n, depth - 1, True))
        if kind in ("log", "sqrt"):
            # keep arguments provably positive: 0.5 + abs2(...)
            inner = Binary("add", Num(0.5),
                           Unary("abs2", random_ast(rng, n, depth - 1, False)))
            return Unary(kind, inner)
        if kind == "powint":
            return Pow(random_ast(rng, n, depth - 1, True), float(rng.randint(1, 3)))
        # non-integer power of a provably nonnegative base
        base = Unary("abs2", random_ast(rng, n, depth - 1, False))
        return Pow(base, rng.choice([0.5, 1.5, 2.5]))
    kind = rng.choice(["add", "sub", "mul", "div", "neg", "conj", "exp", "powint",
                       "mix"])
    if kind in ("add", "sub", "mul", "div"):
        return Binary(kind, random_ast(rng, n, depth - 1, False),
                      random_ast(rng, n, depth - 1, False))
    if kind == "neg":
        return Unary("neg", random_ast(rng, n, depth - 1, False))
    if kind == "conj":
        return Unary("conj", random_ast(rng, n, depth - 1, False))
    if kind == "exp":
        return Unary("exp", random_ast(rng, n, depth - 1, False))
    if kind == "powint":
        return Pow(random_ast(rng, n, depth - 1, False), float(rng.randint(1, 3)))
    return Binary("mul", random_ast(rng, n, depth - 1, True),
                  random_ast(rng, n, depth - 1, False))


def make_random_exprs(count, seed=1234):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, 3)
        root = random_ast(rng, n, rng.randint(1, 3), True)
        text = defexpr.pretty_node(root)
        try:
            ast = parse(text, n)
        except (RealnessError, ExprSyntaxError):
            continue
        out.append((ast, n, rng.random()))
    return out


class TestRoundTripAndOracle:
    def test_round_trip_identity(self):
        for ast, n, _ in make_random_exprs(300):
            again = parse(pretty(ast), n)
            assert again.root == ast.root

    def test_round_trip_catalog_expressions(self):
        for text, n in [("abs2(z1) + abs2(z2) - 1", 2),
                        ("abs2(z1) + abs2(z2)^3 - 1", 2),
                        ("Re(z1) + abs2(z2^2 - z3^3)", 3),
                        ("Re(z1) + exp(-1/abs2(z2))", 2),
                        ("abs(z1)^0.5 - $a*abs2(z2)", 2)]:
            ast = parse(text, n)
            assert parse(pretty(ast), n).root == ast.root

    def test_oracle_equivalence_1000_random_asts(self):
        rng = random.Random(99)
        params = {"a": 0.7, "b": 1.3}
        cases = 0
        for ast, n, _ in make_random_exprs(1000, seed=4321):
            z = tuple(complex(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2))
                      for _ in range(n))
            try:
                mine = evaluate(ast, z, params)
                errored = False
            except EvalDomainError:
                errored = True
            try:
                ref = ref_eval(ast.root, z, params)
                ref_errored = False
            except ZeroDivisionError:
                ref_errored = True
            assert errored == ref_errored, pretty(ast)
            if not errored:
                assert abs(ref.imag) <= 1e-9 * max(1.0, abs(ref))
                assert mine == pytest.approx(ref.real, rel=1e-12, abs=1e-12), pretty(ast)
                cases += 1
        assert cases >= 800  # the vast majority must be evaluable


class TestPointValidation:
    def test_wrong_dimension_point(self):
        ast = parse("abs2(z1) + abs2(z2)", 2)
        with pytest.raises(DimensionError):
            evaluate(ast, (1 + 0j,))

    def test_n_must_be_at_least_two(self):
        with pytest.raises(DimensionError):
            parse("abs2(z1)", 1)
