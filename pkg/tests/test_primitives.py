from fractions import Fraction

import pytest

from hallalg.coeffring import QPolynomial, v_power
from hallalg.hallcore import (
    HallElement,
    comultiply_restricted,
    green_form,
    is_primitive,
    multiply,
    one_d,
    one_reg,
    primitive_subspace,
)
from hallalg.partitions import Partition, partitions_of
from hallalg.primitives import (
    PrimitiveSpec,
    c_central,
    difference_basis_check,
    jordan_primitive_coeff,
    kernel_theorem_check,
    kron_p0,
    kron_pinf,
    kron_pK2,
    kron_tube_classes,
    kronecker_tubes,
    p_cyclic,
    p_jordan,
    p_jordan_symbolic,
    p_tube_homog,
    tube_primitive,
    verify_aut_sum_identities,
    verify_key_pairing,
    verify_xi_identity,
    x_element,
    xi_partition_sum_value,
)
from hallalg.repengine import get_brute_engine, get_nilpotent_engine, kronecker_quiver


class TestJordanFamily:
    def test_p1_is_single_class(self):
        engine = get_nilpotent_engine(1, 2)
        p1 = p_jordan(engine, 1)
        assert p1 == HallElement.basis(engine, engine.simple(0))

    def test_p2_coefficients(self):
        coeffs = dict((lam.parts, poly) for lam, poly in p_jordan_symbolic(2))
        assert coeffs[(2,)] == QPolynomial.one()
        assert coeffs[(1, 1)] == QPolynomial({0: 1, 1: -1})  # 1 - q

    @pytest.mark.parametrize("q0", (2, 3))
    @pytest.mark.parametrize("n", (1, 2, 3, 4))
    def test_primitive(self, n, q0):
        engine = get_nilpotent_engine(1, q0)
        assert is_primitive(p_jordan(engine, n))

    def test_spans_the_primitive_line(self):
        engine = get_nilpotent_engine(1, 2)
        basis = primitive_subspace(engine, (3,))
        assert len(basis) == 1
        from hallalg.hallcore import in_span
        assert in_span(basis, p_jordan(engine, 3))


class TestCentralFamily:
    @pytest.mark.parametrize("q0", (2, 3))
    def test_c1_explicit(self, q0):
        engine = get_nilpotent_engine(2, q0)
        c1 = c_central(engine, 1)
        scale = v_power(-4, q0) * (q0 - 1)
        assert c1.coefficient(engine.segment_class(0, 2)) == scale
        assert c1.coefficient(engine.segment_class(1, 2)) == scale
        ss = engine.make_class((((0, 1), 1), ((1, 1), 1)))
        assert c1.coefficient(ss) == scale * (1 - q0)
        assert len(c1.terms) == 3

    def test_needs_r_at_least_two(self):
        with pytest.raises(ValueError):
            c_central(get_nilpotent_engine(1, 2), 1)

    def test_commutes_with_simples(self):
        engine = get_nilpotent_engine(2, 2)
        c1 = c_central(engine, 1)
        for i in range(2):
            si = HallElement.basis(engine, engine.simple(i))
            assert multiply(c1, si) == multiply(si, c1)

    def test_coproduct_group_like_family(self):
        from hallalg.primitives import central_family_check
        rep = central_family_check(2, 1, 2)
        assert rep.passed, rep.to_json()


class TestCyclicPrimitives:
    def test_x1_equals_c1(self):
        engine = get_nilpotent_engine(2, 3)
        assert x_element(engine, 1) == c_central(engine, 1)

    def test_x2_primitive(self):
        engine = get_nilpotent_engine(2, 2)
        assert is_primitive(x_element(engine, 2))

    @pytest.mark.parametrize("q0", (2, 3))
    def test_p1_cyclic_explicit(self, q0):
        engine = get_nilpotent_engine(2, q0)
        p1 = p_cyclic(engine, 1)
        assert p1.coefficient(engine.segment_class(0, 2)) == 1
        assert p1.coefficient(engine.segment_class(1, 2)) == 1
        ss = engine.make_class((((0, 1), 1), ((1, 1), 1)))
        assert p1.coefficient(ss) == 1 - q0
        assert len(p1.terms) == 3

    @pytest.mark.parametrize("r,q0", [(2, 2), (2, 3), (3, 2)])
    def test_normalization_coefficient_one(self, r, q0):
        engine = get_nilpotent_engine(r, q0)
        for n in (1, 2):
            p = p_cyclic(engine, n)
            for i in range(r):
                assert p.coefficient(engine.segment_class(i, r * n)) == 1

    def test_leading_form_of_x(self):
        # coefficient of [S_i[rn]] in x_n is v^(n-2rn) (v^n - v^-n)
        for q0 in (2, 3):
            engine = get_nilpotent_engine(2, q0)
            for n in (1, 2):
                xn = x_element(engine, n)
                expected = v_power(n - 4 * n, q0) * (
                    v_power(n, q0) - v_power(-n, q0))
                for i in range(2):
                    assert xn.coefficient(engine.segment_class(i, 2 * n)) == expected

    @pytest.mark.parametrize("q0", (2, 3))
    def test_embedded_jordan_coefficients(self, q0):
        # the coefficient of S_1[lambda_1*r] + S_1[lambda_2*r] + ... equals the
        # Jordan coefficient prod (1 - q^s), here for r = 2, n = 2
        engine = get_nilpotent_engine(2, q0)
        p2 = p_cyclic(engine, 2)
        for lam in partitions_of(2):
            cls = engine.make_class(tuple(
                ((0, part * 2), mult) for part, mult in lam.exponential().items()))
            assert p2.coefficient(cls) == jordan_primitive_coeff(lam, q0=q0)


class TestTubePrimitives:
    def test_m1_is_quasi_simple(self):
        engine = get_brute_engine(kronecker_quiver(), 2)
        tubes = kronecker_tubes(engine, 1)
        assert len(tubes) == 3
        for tube in tubes:
            p1 = tube_primitive(engine, tube, 1)
            assert p1 == HallElement.basis(engine, tube.simple)

    def test_p2_explicit_shape(self):
        # p_2(x) = [E_x[2]] + (1 - q)[2 E_x] for a degree-1 point at q = 2
        engine = get_brute_engine(kronecker_quiver(), 2)
        tube = [t for t in kronecker_tubes(engine, 2) if t.degree == 1][0]
        p2 = tube_primitive(engine, tube, 2)
        e2 = tube.classes[(2,)]
        two_e = tube.classes[(1, 1)]
        assert p2.coefficient(e2) == 1
        assert p2.coefficient(two_e) == -1  # 1 - q at q = 2
        assert len(p2.terms) == 2

    def test_primitive_in_its_tube(self):
        # each tube spans an extension-closed subcategory; the tube primitive
        # is primitive for the coproduct restricted to the tube's classes
        engine = get_brute_engine(kronecker_quiver(), 2)
        for tube in kronecker_tubes(engine, 2):
            m = 2 // tube.degree
            members = _tube_members(engine, tube, m)
            p = tube_primitive(engine, tube, m)
            assert is_primitive(p, predicate=lambda c: c in members)

    def test_degree_structure_n2_q2(self):
        engine = get_brute_engine(kronecker_quiver(), 2)
        tubes = kronecker_tubes(engine, 2)
        degrees = sorted(t.degree for t in tubes)
        assert degrees == [1, 1, 1, 2]  # three degree-1 tubes and one degree-2

    def test_missing_partition_class_rejected(self):
        engine = get_brute_engine(kronecker_quiver(), 2)
        with pytest.raises(ValueError):
            p_tube_homog(engine, 1, 2, {})


def _tube_members(engine, tube, m):
    """All direct sums from the tube with quasi-length total <= m."""
    members = set()
    for j in range(1, m + 1):
        for lam in partitions_of(j):
            cls = tube.classes.get(lam.parts)
            if cls is not None:
                members.add(cls)
    # sums of smaller quasi-lengths also live in the tube's subcategory
    chain = [tube.classes.get((j,)) for j in range(1, m + 1)]
    for a in chain:
        for b in chain:
            if a is not None and b is not None and \
                    sum(a.grade) + sum(b.grade) <= 2 * m * tube.degree:
                members.add(engine.direct_sum_class([a, b]))
    return members


class TestKroneckerPrimitives:
    def test_p1_difference(self):
        engine = get_brute_engine(kronecker_quiver(), 2)
        p = kron_pK2(engine, 1)
        assert len(p.terms) == 2
        vals = sorted(v.a for v in p.terms.values())
        assert vals == [Fraction(-1), Fraction(1)]

    @pytest.mark.parametrize("q0", (2, 3))
    @pytest.mark.parametrize("n", (1, 2))
    def test_difference_primitive_full(self, n, q0):
        engine = get_brute_engine(kronecker_quiver(), q0)
        assert is_primitive(kron_pK2(engine, n))

    @pytest.mark.parametrize("q0", (2, 3))
    @pytest.mark.parametrize("n", (1, 2))
    def test_tube_pairing_values(self, n, q0):
        engine = get_brute_engine(kronecker_quiver(), q0)
        reg = one_reg(engine, n)
        value = green_form(kron_p0(engine, n), reg)
        assert value == Fraction(1, q0 ** n - 1)
        assert value == xi_partition_sum_value(n, q0)
        assert green_form(kron_pinf(engine, n), reg) == value
        assert green_form(kron_pK2(engine, n), reg).is_zero()

    def test_single_tube_primitives_not_full_primitive(self):
        engine = get_brute_engine(kronecker_quiver(), 2)
        assert not is_primitive(kron_p0(engine, 1))

    def test_restriction_of_full_primitive_is_tube_primitive(self):
        # restricting a full primitive to an extension-closed subcategory
        # keeps it primitive for the restricted coproduct
        engine = get_brute_engine(kronecker_quiver(), 2)
        p = kron_pK2(engine, 1)
        from hallalg.repengine import is_regular_kronecker
        reg = lambda c: is_regular_kronecker(engine, c)
        restricted = p.restrict(reg)
        delta = comultiply_restricted(restricted, reg)
        zero = engine.zero_class()
        from hallalg.hallcore import TensorElement
        expected = {}
        for cls, coeff in restricted.terms.items():
            expected[(cls, zero)] = coeff
            expected[(zero, cls)] = coeff
        assert delta == TensorElement(engine, expected)

    def test_tube_classes_match_constructors(self):
        engine = get_brute_engine(kronecker_quiver(), 2)
        zero_classes = kron_tube_classes(engine, 2, infinity=False)
        assert set(zero_classes) == {(2,), (1, 1)}

    def test_cap_validation(self):
        engine = get_brute_engine(kronecker_quiver(), 3)
        with pytest.raises(ValueError):
            kron_p0(engine, 3)


class TestIdentityVerifiers:
    @pytest.mark.parametrize("n", range(1, 13))
    def test_xi_identity(self, n):
        assert verify_xi_identity(n).passed

    def test_xi_n2_by_hand(self):
        # 1/(q(q-1)) + (1-q)/(q(q-1)(q^2-1)) = 1/(q^2-1)
        for q0 in (2, 3, 5):
            lhs = Fraction(1, q0 * (q0 - 1)) + \
                Fraction(1 - q0, q0 * (q0 - 1) * (q0 ** 2 - 1))
            assert lhs == Fraction(1, q0 ** 2 - 1)
            assert xi_partition_sum_value(2, q0) == lhs

    @pytest.mark.parametrize("n", range(1, 11))
    def test_aut_sum_identities(self, n):
        assert verify_aut_sum_identities(n).passed

    def test_aut_sum_n2_by_hand(self):
        # sum 1/a_lambda at n=2: 1/(q(q-1)) + 1/(q(q-1)(q^2-1)) = q/((q-1)(q^2-1))
        for q0 in (2, 3):
            lhs = Fraction(1, q0 * (q0 - 1)) + \
                Fraction(1, q0 * (q0 - 1) * (q0 ** 2 - 1))
            assert lhs == Fraction(q0, (q0 - 1) * (q0 ** 2 - 1))

    def test_xi_out_of_range(self):
        with pytest.raises(ValueError):
            verify_xi_identity(13)


class TestPairing:
    @pytest.mark.parametrize("r", (1, 2, 3))
    @pytest.mark.parametrize("n", (1, 2))
    @pytest.mark.parametrize("q0", (2, 3))
    def test_pairing_identity(self, r, n, q0):
        rep = verify_key_pairing(r, n, q0)
        assert rep.passed, rep.to_json()

    def test_r1_n2_value(self):
        # {p_2, 1_2} = 1/a_(2) + (1-q)/a_(1,1) = 1/2 - 1/6 = 1/3 at q = 2
        engine = get_nilpotent_engine(1, 2)
        pairing = green_form(p_jordan(engine, 2), one_d(engine, (2,)))
        assert pairing == Fraction(1, 3)


class TestMainTheoremChecks:
    @pytest.mark.parametrize("n,q0", [(1, 2), (1, 3), (2, 2)])
    def test_kernel_description(self, n, q0):
        rep = kernel_theorem_check(n, q0)
        assert rep.passed, rep.to_json()

    @pytest.mark.parametrize("n,q0", [(1, 2), (1, 3), (2, 2)])
    def test_difference_basis(self, n, q0):
        rep = difference_basis_check(n, q0)
        assert rep.passed, rep.to_json()

    def test_dimensions_n1(self):
        # q = 2: three degree-1 points, dim regular-primitive 3, full 2
        engine = get_brute_engine(kronecker_quiver(), 2)
        from hallalg.repengine import is_regular_kronecker
        reg = lambda c: is_regular_kronecker(engine, c)
        assert len(primitive_subspace(engine, (1, 1))) == 2
        assert len(primitive_subspace(engine, (1, 1), predicate=reg)) == 3

    def test_dimensions_n2_q2(self):
        engine = get_brute_engine(kronecker_quiver(), 2)
        from hallalg.repengine import is_regular_kronecker
        reg = lambda c: is_regular_kronecker(engine, c)
        assert len(primitive_subspace(engine, (2, 2))) == 3  # phi_1 + phi_2
        assert len(primitive_subspace(engine, (2, 2), predicate=reg)) == 4

    def test_anchor_out_of_range(self):
        rep = difference_basis_check(1, 2, anchor_index=99)
        assert not rep.passed


class TestFullCyclicPrimitiveBasis:
    def test_basis_of_full_two_cycle_at_delta(self):
        # over the full (not nilpotent) 2-cycle at q = 2 the primitive space at
        # (1,1) has dimension q = 2, spanned by the nilpotent normalized
        # primitive and the point classes of the invertible-loop orbits
        from hallalg.repengine import cyclic_quiver
        from hallalg.hallcore import in_span, rank_of_elements
        engine = get_brute_engine(cyclic_quiver(2), 2)
        s12 = engine.class_of_point((((1,),), ((0,),)), (1, 1))
        s22 = engine.class_of_point((((0,),), ((1,),)), (1, 1))
        ss = engine.class_of_point((((0,),), ((0,),)), (1, 1))
        p1 = HallElement(engine, {s12: 1, s22: 1, ss: -1})  # 1 - q at q = 2
        ex = HallElement.basis(engine, engine.class_of_point(
            (((1,),), ((1,),)), (1, 1)))
        assert is_primitive(p1)
        assert is_primitive(ex)
        basis = primitive_subspace(engine, (1, 1))
        assert len(basis) == 2
        assert rank_of_elements([p1, ex]) == 2
        assert in_span(basis, p1) and in_span(basis, ex)


class TestPrimitiveSpec:
    def test_known_families(self):
        spec = PrimitiveSpec("cyclic_pnr", r=2, n=1, q0=3)
        assert spec.family == "cyclic_pnr"

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            PrimitiveSpec("mystery")
