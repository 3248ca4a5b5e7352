import random
from fractions import Fraction

import pytest

from hallalg.coeffring import (
    CycloSqrt,
    LaurentPolyV,
    QPolynomial,
    RationalFunctionV,
    SqrtExt,
    eval_v,
    interpolate_q,
    parse_rf,
    quantum_factorial,
    quantum_integer,
    render_rf,
    rf_arith,
    v_power,
)

V = RationalFunctionV.v()
Q = RationalFunctionV.q()
ONE = RationalFunctionV.one()


class TestRationalFunctionArithmetic:
    def test_difference_of_squares(self):
        assert rf_arith(V - V ** -1, V + V ** -1, "mul") == V ** 2 - V ** -2

    def test_q_substitution(self):
        # q^(rn)/(q^n - 1) at r=2, n=1 is v^4/(v^2 - 1)
        f = Q ** 2 / (Q - 1)
        assert f == V ** 4 / (V ** 2 - 1)

    def test_pairing_sum_reduces(self):
        # 1/(q-1) + 1/(q-1) - (q-1)/(q-1)^2 = 1/(q-1); hand expansion over the
        # common denominator (q-1)^2 gives ((q-1)+(q-1)-(q-1))/(q-1)^2
        lhs = rf_arith(rf_arith(ONE / (Q - 1), ONE / (Q - 1), "add"),
                       (Q - 1) / ((Q - 1) * (Q - 1)), "sub")
        assert lhs == ONE / (Q - 1)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            rf_arith(ONE, RationalFunctionV.zero(), "div")

    def test_unknown_op(self):
        with pytest.raises(ValueError):
            rf_arith(ONE, ONE, "pow")

    def test_canonical_equality_is_congruence(self):
        a = (Q - 1) / (Q ** 2 - 1)
        b = ONE / (Q + 1)
        assert a == b
        assert a + V == b + V
        assert a * (Q + 1) == ONE

    def test_canonical_vs_cross_multiplication_randomized(self):
        rng = random.Random(20240611)

        def random_poly():
            return LaurentPolyV({rng.randint(-4, 4): rng.randint(-3, 3)
                                 for _ in range(rng.randint(1, 4))})

        checked = 0
        while checked < 200:
            n1, d1 = random_poly(), random_poly()
            n2, d2 = random_poly(), random_poly()
            if d1.is_zero() or d2.is_zero():
                continue
            f = RationalFunctionV(n1, d1)
            g = RationalFunctionV(n2, d2)
            assert (f == g) == f.cross_equal(g)
            # scaling numerator and denominator together never changes the value
            s = LaurentPolyV({rng.randint(-2, 2): rng.randint(1, 3)})
            if not s.is_zero():
                assert RationalFunctionV(n1 * s, d1 * s) == f
            checked += 1


class TestEvalV:
    def test_pure_q_value(self):
        assert eval_v(V ** 2, 3) == SqrtExt(3, 3, 0)

    def test_twisted_quotient(self):
        # v^(2rn-n)/(v^n - v^-n) at r=2, n=1: simplifies to v^4/(v^2-1) = 4 at q=2
        f = V ** 3 / (V - V ** -1)
        value = eval_v(f, 2)
        assert value == SqrtExt(2, 4, 0)
        assert eval_v(V ** 4 / (V ** 2 - 1), 2) == value

    def test_perfect_square_folding(self):
        assert eval_v(V ** -1, 4) == SqrtExt(4, Fraction(1, 2), 0)

    def test_pole_detection(self):
        with pytest.raises(ZeroDivisionError):
            eval_v(ONE / (Q - 2), 2)

    def test_ring_homomorphism_randomized(self):
        rng = random.Random(7)
        for _ in range(60):
            f = RationalFunctionV(
                LaurentPolyV({rng.randint(-3, 3): rng.randint(-2, 2) for _ in range(3)}),
                LaurentPolyV({0: 1, rng.randint(1, 3): rng.randint(1, 2)}))
            g = RationalFunctionV(
                LaurentPolyV({rng.randint(-3, 3): rng.randint(-2, 2) for _ in range(3)}),
                LaurentPolyV({0: 2, rng.randint(1, 3): rng.randint(1, 2)}))
            for q0 in (2, 3, 5):
                assert eval_v(f * g, q0) == eval_v(f, q0) * eval_v(g, q0)
                assert eval_v(f + g, q0) == eval_v(f, q0) + eval_v(g, q0)


class TestInterpolation:
    def test_collinear_points(self):
        assert interpolate_q([(2, 3), (3, 4), (5, 6)], 2) == QPolynomial({1: 1, 0: 1})

    def test_constant(self):
        assert interpolate_q([(2, 1), (3, 1)], 1) == QPolynomial({0: 1})

    def test_reproduces_samples(self):
        pts = [(2, 7), (3, 13), (5, 31), (7, 57)]
        poly = interpolate_q(pts, 2)
        for q0, val in pts:
            assert poly.evaluate(q0) == val

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            interpolate_q([(2, 1)], 1)

    def test_inconsistent_extra_point_named(self):
        with pytest.raises(ValueError, match="q=7"):
            interpolate_q([(2, 3), (3, 4), (7, 999)], 1)


class TestQuantumFactorial:
    def test_base_cases(self):
        assert quantum_factorial(0) == LaurentPolyV.one()
        assert quantum_factorial(1) == LaurentPolyV.one()

    def test_two(self):
        assert quantum_factorial(2) == LaurentPolyV({1: 1, -1: 1})

    def test_three_against_defining_product(self):
        # direct product of (v^s - v^-s)/(v - v^-1) for s = 1, 2, 3
        expected = RationalFunctionV.one()
        for s in (1, 2, 3):
            expected = expected * ((V ** s - V ** -s) / (V - V ** -1))
        assert RationalFunctionV(quantum_factorial(3)) == expected

    def test_quantum_integer(self):
        assert quantum_integer(2) == LaurentPolyV({1: 1, -1: 1})
        assert quantum_integer(3) == LaurentPolyV({2: 1, 0: 1, -2: 1})


class TestSqrtExt:
    def test_rational_embedding(self):
        rng = random.Random(99)
        for _ in range(50):
            a = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            b = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            x, y = SqrtExt(3, a, 0), SqrtExt(3, b, 0)
            assert (x + y).a == a + b and (x + y).b == 0
            assert (x * y).a == a * b and (x * y).b == 0
            if b:
                assert (x / y).a == a / b

    def test_irrational_arithmetic(self):
        x = SqrtExt(2, 1, 1)  # 1 + sqrt(2)
        assert x * x == SqrtExt(2, 3, 2)
        assert x * x.inverse() == SqrtExt(2, 1, 0)

    def test_base_mixing_rejected(self):
        with pytest.raises(TypeError):
            SqrtExt(2, 1, 1) + SqrtExt(3, 1, 1)

    def test_square_base_folds(self):
        assert SqrtExt(9, 0, 1) == SqrtExt(9, 3, 0)

    def test_v_power(self):
        assert v_power(2, 3) == SqrtExt(3, 3, 0)
        assert v_power(-1, 2) == SqrtExt(2, 0, Fraction(1, 2))
        assert v_power(3, 2) * v_power(-3, 2) == SqrtExt(2, 1, 0)


class TestCycloSqrt:
    def test_zeta2_is_minus_one(self):
        assert CycloSqrt.zeta(2, 2, 1) == SqrtExt(2, -1, 0)

    def test_cubic_relation(self):
        z = CycloSqrt.zeta(3, 3, 1)
        assert z + z * z == CycloSqrt.from_scalar(3, 3, -1)
        assert z * z * z == CycloSqrt.one(3, 3)

    def test_p5_and_p7_cycles(self):
        for p, q0 in ((5, 5), (7, 7)):
            z = CycloSqrt.zeta(p, q0, 1)
            total = CycloSqrt.zero(p, q0)
            acc = CycloSqrt.one(p, q0)
            for _ in range(p):
                total = total + acc
                acc = acc * z
            assert total.is_zero()
            assert acc == CycloSqrt.one(p, q0)

    def test_scalar_division(self):
        z = CycloSqrt.zeta(3, 3, 1)
        assert (z + z) / 2 == z

    def test_context_mixing_rejected(self):
        with pytest.raises(TypeError):
            CycloSqrt.zeta(3, 3, 1) + CycloSqrt.zeta(5, 5, 1)

    def test_json_coords(self):
        z = CycloSqrt.zeta(3, 2, 1)
        assert z.to_json() == {"a": ["0", "1"], "b": ["0", "0"]}


class TestRendering:
    def test_documented_form(self):
        f = V ** 4 / (V ** 2 - 1)
        assert render_rf(f) == "(v^2-1)^-1 * v^4"

    def test_round_trip(self):
        samples = [
            V ** 4 / (V ** 2 - 1),
            ONE / (Q - 1),
            (V - V ** -1) * (V + V ** -1),
            RationalFunctionV.zero(),
            RationalFunctionV(LaurentPolyV({0: Fraction(3, 2), 2: -1})),
            (Q ** 2 + Q + 1) / (Q ** 3 - 1),
        ]
        for f in samples:
            assert parse_rf(render_rf(f)) == f

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_rf("v ++ 1")
        with pytest.raises(ValueError):
            parse_rf("w^2")
