from itertools import product

import pytest

from hallalg.partitions import Partition, partitions_of
from hallalg.repengine import (
    BruteForceEngine,
    NilpotentCyclicEngine,
    a2_quiver,
    add_dim,
    cyclic_quiver,
    euler_form,
    get_brute_engine,
    get_nilpotent_engine,
    hall_polynomial,
    is_regular_kronecker,
    jordan_matrix,
    jordan_quiver,
    kronecker_point_infty,
    kronecker_point_zero,
    kronecker_quiver,
    kronecker_regular_classes,
    multisegment_str,
    parse_multisegment,
)


class TestEulerForm:
    def test_jordan_loop(self):
        assert euler_form(jordan_quiver(), (1,), (1,)) == 0

    def test_c2_simples(self):
        assert euler_form(cyclic_quiver(2), (1, 0), (0, 1)) == -1

    def test_kronecker_null_root(self):
        assert euler_form(kronecker_quiver(), (1, 1), (1, 1)) == 0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            euler_form(cyclic_quiver(2), (1,), (1, 1))


class TestIsoclassEnumeration:
    def test_nilpotent_c2_delta(self):
        engine = get_nilpotent_engine(2, 2)
        classes = engine.classes((1, 1))
        assert sorted(c.render() for c in classes) == ["S1[1]+S2[1]", "S1[2]", "S2[2]"]

    def test_nilpotent_c2_delta_brute_oracle(self):
        brute = get_brute_engine(cyclic_quiver(2), 2, nilpotent=True)
        assert len(brute.classes((1, 1))) == 3

    def test_kronecker_11_q2(self):
        # orbits of (a, b) in F_2^2 under the trivial torus: all four pairs
        engine = get_brute_engine(kronecker_quiver(), 2)
        assert len(engine.classes((1, 1))) == 4

    def test_zero_grade(self):
        for engine in (get_nilpotent_engine(2, 2),
                       get_brute_engine(kronecker_quiver(), 2)):
            classes = engine.classes((0, 0))
            assert len(classes) == 1
            assert classes[0] == engine.zero_class()

    def test_jordan_counts_are_partition_counts(self):
        for q0 in (2, 3):
            engine = get_nilpotent_engine(1, q0)
            brute = get_brute_engine(jordan_quiver(), q0, nilpotent=True)
            for n in range(5 if q0 == 2 else 4):
                assert len(engine.classes((n,))) == len(partitions_of(n))
                if q0 == 2 or n <= 3:
                    assert len(brute.classes((n,))) == len(partitions_of(n))

    def test_a2_counts_are_rank_counts(self):
        engine = get_brute_engine(a2_quiver(), 2)
        for a in range(3):
            for b in range(3):
                assert len(engine.classes((a, b))) == min(a, b) + 1

    def test_brute_total_dim_cap(self):
        engine = get_brute_engine(kronecker_quiver(), 2)
        with pytest.raises(ValueError):
            engine.classes((5, 4))


class TestOrbitPartition:
    @pytest.mark.parametrize("q0", (2, 3))
    def test_orbit_sizes_partition_variety(self, q0):
        engine = get_brute_engine(kronecker_quiver(), q0)
        for d in ((1, 1), (2, 1), (2, 2)):
            total = sum(engine.orbit_size(c) for c in engine.classes(d))
            points = q0 ** sum(d[t] * d[h] for (t, h) in engine.quiver.arrows)
            assert total == points

    def test_orbit_stabilizer_identity(self):
        engine = get_brute_engine(kronecker_quiver(), 2)
        for d in ((1, 1), (2, 1), (2, 2)):
            for c in engine.classes(d):
                assert engine.orbit_size(c) * engine.aut_order(c) == \
                    engine.group_order(d)

    def test_key_soundness_roundtrip(self):
        # a representative point always resolves back to its own class
        engine = get_brute_engine(kronecker_quiver(), 2)
        for d in ((1, 1), (2, 1), (1, 2), (2, 2)):
            for c in engine.classes(d):
                mats, dims = engine.rep_point(c)
                assert engine.class_of_point(mats, dims) == c

    def test_structured_aut_orders_partition_nilpotent_variety(self):
        # sum over classes of |G_V| / a_M equals the number of nilpotent points
        for r, q0, d in ((1, 2, (3,)), (2, 2, (2, 1)), (2, 3, (1, 1))):
            engine = get_nilpotent_engine(r, q0)
            brute = get_brute_engine(cyclic_quiver(r), q0, nilpotent=True)
            points = sum(brute.orbit_size(c) for c in brute.classes(d))
            mass = sum(brute.group_order(d) // engine.aut_order(c)
                       for c in engine.classes(d))
            assert mass == points
        # for the Jordan quiver the count is the classical q^(n^2 - n)
        engine = get_nilpotent_engine(1, 2)
        brute = get_brute_engine(jordan_quiver(), 2, nilpotent=True)
        assert sum(brute.orbit_size(c) for c in brute.classes((3,))) == 2 ** 6

    def test_brute_and_structured_keys_biject(self):
        # each brute orbit over the nilpotent Jordan variety carries a distinct
        # multisegment, so orbit identity agrees with multisegment identity
        structured = get_nilpotent_engine(1, 2)
        brute = get_brute_engine(jordan_quiver(), 2, nilpotent=True)
        for n in range(1, 5):
            seen = set()
            for c in brute.classes((n,)):
                mats, dims = brute.rep_point(c)
                ms = structured.class_of_point(mats, dims).key
                assert ms not in seen
                seen.add(ms)
            assert len(seen) == len(structured.classes((n,)))

    def test_nilpotent_points_have_nilpotent_cycle(self):
        engine = get_brute_engine(cyclic_quiver(2), 2, nilpotent=True)
        from hallalg import gf
        for c in engine.classes((2, 1)):
            mats, dims = engine.rep_point(c)
            M = gf.mat_mul(engine.field, mats[1], mats[0])  # cycle at vertex 0
            P = M
            for _ in range(dims[0]):
                P = gf.mat_mul(engine.field, P, M)
            assert all(x == 0 for row in P for x in row)


class TestAutOrders:
    def test_segment_examples(self):
        c2 = get_nilpotent_engine(2, 2)
        assert c2.aut_order(c2.segment_class(0, 2)) == 1  # q - 1
        c2q3 = get_nilpotent_engine(2, 3)
        ss = c2q3.make_class((((0, 1), 1), ((1, 1), 1)))
        assert c2q3.aut_order(ss) == 4  # (q-1)^2

    def test_gl2_from_semisimple(self):
        c1 = get_nilpotent_engine(1, 2)
        assert c1.aut_order(c1.make_class((((0, 1), 2),))) == 6

    @pytest.mark.parametrize("r,q0", [(r, q) for r in (1, 2, 3) for q in (2, 3)])
    def test_structured_matches_orbit_stabilizer(self, r, q0):
        engine = get_nilpotent_engine(r, q0)
        brute = get_brute_engine(cyclic_quiver(r), q0, nilpotent=True)
        for d in product(range(5), repeat=r):
            if not 0 < sum(d) <= 4:
                continue
            for c in engine.classes(d):
                mats, dims = engine.rep_point(c)
                assert engine.aut_order(c) == brute.aut_order_point(mats, dims), \
                    (r, q0, c.render())


class TestHallNumbers:
    def test_jordan_lines(self):
        c1 = get_nilpotent_engine(1, 2)
        i11 = c1.make_class((((0, 1), 2),))
        assert c1.hall_number(i11, c1.simple(0), c1.simple(0)) == 3  # q + 1

    def test_unique_socle_submodule(self):
        for q0 in (2, 3):
            c2 = get_nilpotent_engine(2, q0)
            s12 = c2.segment_class(0, 2)
            assert c2.hall_number(s12, c2.simple(0), c2.simple(1)) == 1
            assert c2.hall_number(s12, c2.simple(1), c2.simple(0)) == 0

    def test_zero_submodule(self):
        c2 = get_nilpotent_engine(2, 2)
        for d in ((1, 1), (2, 1)):
            for L in c2.classes(d):
                assert c2.hall_number(L, L, c2.zero_class()) == 1
                assert c2.hall_number(L, c2.zero_class(), L) == 1

    def test_grading_violation_gives_zero(self):
        c2 = get_nilpotent_engine(2, 2)
        s12 = c2.segment_class(0, 2)
        assert c2.hall_number(s12, c2.simple(0), c2.simple(0)) == 0

    def test_associativity_precursor(self):
        # sum_X F^L_{M,X} F^X_{N,P} = sum_Y F^L_{Y,P} F^Y_{M,N}
        engine = get_nilpotent_engine(2, 2)
        small = [engine.simple(0), engine.simple(1),
                 engine.segment_class(0, 2), engine.segment_class(1, 2)]
        for M in small:
            for N in small:
                for P in small:
                    target = add_dim(add_dim(M.grade, N.grade), P.grade)
                    if sum(target) > 5:
                        continue
                    for L in engine.classes(target):
                        lhs = sum(engine.hall_number(L, M, X)
                                  * engine.hall_number(X, N, P)
                                  for X in engine.classes(add_dim(N.grade, P.grade)))
                        rhs = sum(engine.hall_number(L, Y, P)
                                  * engine.hall_number(Y, M, N)
                                  for Y in engine.classes(add_dim(M.grade, N.grade)))
                        assert lhs == rhs


class TestHomAndSocle:
    @pytest.mark.parametrize("r,q0", [(r, q) for r in (1, 2, 3) for q in (2, 3)])
    def test_hom_rule_matches_linear_solve(self, r, q0):
        engine = get_nilpotent_engine(r, q0)
        segments = [engine.segment_class(i, l)
                    for i in range(r) for l in range(1, 5)]
        for c1 in segments:
            for c2 in segments:
                assert engine.hom_dim(c1, c2) == engine.hom_dim_solve(c1, c2)

    def test_hom_examples(self):
        c2 = get_nilpotent_engine(2, 2)
        assert c2.hom_dim(c2.segment_class(0, 2), c2.segment_class(0, 2)) == 1
        assert c2.hom_dim(c2.simple(0), c2.simple(1)) == 0
        c1 = get_nilpotent_engine(1, 2)
        i11 = c1.make_class((((0, 1), 2),))
        assert c1.hom_dim(i11, i11) == 4

    def test_socle_examples(self):
        c2 = get_nilpotent_engine(2, 2)
        assert c2.socle(c2.segment_class(0, 2)) == (0, 1)
        assert c2.socle(c2.make_class((((0, 1), 1), ((1, 1), 1)))) == (1, 1)
        c1 = get_nilpotent_engine(1, 2)
        assert c1.socle(c1.make_class((((0, 2), 1), ((0, 1), 1)))) == (2,)

    @pytest.mark.parametrize("r,q0", [(r, q) for r in (2, 3) for q in (2, 3)])
    def test_socle_rule_matches_kernel(self, r, q0):
        engine = get_nilpotent_engine(r, q0)
        for d in product(range(5), repeat=r):
            if not 0 < sum(d) <= 4:
                continue
            for c in engine.classes(d):
                assert engine.socle(c) == engine.socle_solve(c)


class TestDecomposition:
    def test_segment_indecomposable(self):
        c2 = get_nilpotent_engine(2, 2)
        assert c2.is_indecomposable(c2.segment_class(0, 2))
        assert c2.decompose(c2.make_class((((0, 1), 1), ((1, 1), 1)))) == \
            [c2.simple(0), c2.simple(1)]

    def test_kronecker_regular_simple_indecomposable(self):
        engine = get_brute_engine(kronecker_quiver(), 2)
        # the class of the pair (1, 1) at (1,1) is a regular simple
        cls = engine.class_of_point((((1,),), ((1,),)), (1, 1))
        assert engine.is_indecomposable(cls)
        assert engine.is_indecomposable_by_idempotents(cls)

    def test_split_semisimple(self):
        engine = get_brute_engine(kronecker_quiver(), 2)
        zero_pt = engine.class_of_point((((0,),), ((0,),)), (1, 1))
        parts = engine.decompose(zero_pt)
        assert sorted(p.grade for p in parts) == [(0, 1), (1, 0)]
        assert not engine.is_indecomposable_by_idempotents(zero_pt)

    def test_idempotent_criterion_agrees(self):
        engine = get_brute_engine(kronecker_quiver(), 2)
        for d in ((1, 1), (2, 1)):
            for c in engine.classes(d):
                assert engine.is_indecomposable(c) == \
                    engine.is_indecomposable_by_idempotents(c)


class TestKroneckerHelpers:
    def test_regular_count_q2(self):
        engine = get_brute_engine(kronecker_quiver(), 2)
        regs = kronecker_regular_classes(engine, 1)
        assert len(regs) == 3  # P^1(F_2)
        non_reg = [c for c in engine.classes((1, 1)) if c not in regs]
        assert len(non_reg) == 1  # S1 + S2

    def test_regular_count_q3(self):
        engine = get_brute_engine(kronecker_quiver(), 3)
        assert len(kronecker_regular_classes(engine, 1)) == 4  # P^1(F_3)

    def test_matrix_constructors(self):
        engine = get_brute_engine(kronecker_quiver(), 2)
        lam = Partition((1,))
        e0 = kronecker_point_zero(engine, lam)
        einf = kronecker_point_infty(engine, lam)
        assert e0 != einf
        assert is_regular_kronecker(engine, e0)
        assert is_regular_kronecker(engine, einf)
        assert engine.is_indecomposable(e0)

    def test_jordan_matrix(self):
        assert jordan_matrix(Partition((2, 1))) == ((0, 0, 0), (1, 0, 0), (0, 0, 0))


class TestHallPolynomial:
    def test_lines(self):
        poly = hall_polynomial(1, (((0, 1), 2),), (((0, 1), 1),), (((0, 1), 1),))
        assert poly.render() == "q+1"
        # evaluates back to the sampled counts 3, 4, 6 at q = 2, 3, 5
        for q0, count in ((2, 3), (3, 4), (5, 6)):
            assert poly.evaluate(q0) == count

    def test_unique_submodule(self):
        poly = hall_polynomial(1, (((0, 2), 1),), (((0, 1), 1),), (((0, 1), 1),))
        assert poly.render() == "1"

    def test_c2_extension(self):
        poly = hall_polynomial(
            2, (((0, 1), 1), ((1, 1), 1)), (((0, 1), 1),), (((1, 1), 1),))
        assert poly.render() == "1"

    def test_evaluates_to_hall_numbers(self):
        L, M, N = (((0, 2), 1), ((0, 1), 1)), (((0, 1), 1),), (((0, 2), 1),)
        poly = hall_polynomial(1, L, M, N)
        for q0 in (2, 3, 4, 5):
            engine = NilpotentCyclicEngine(1, q0)
            assert poly.evaluate(q0) == engine.hall_number(
                engine.class_from_key(L), engine.class_from_key(M),
                engine.class_from_key(N))


class TestTextForms:
    def test_multisegment_render(self):
        assert multisegment_str((((0, 2), 1), ((1, 1), 1))) == "S1[2]+S2[1]"
        assert multisegment_str((((0, 3), 2),)) == "2*S1[3]"
        assert multisegment_str(()) == "0"

    def test_multisegment_parse(self):
        assert parse_multisegment("S1[2]+S2[1]", 2) == (((0, 2), 1), ((1, 1), 1))
        assert parse_multisegment("2*S1[3]", 2) == (((0, 3), 2),)
        assert parse_multisegment("0", 2) == ()

    def test_parse_rejects_bad_vertex(self):
        with pytest.raises(ValueError):
            parse_multisegment("S3[1]", 2)

    def test_orbit_class_render(self):
        engine = BruteForceEngine(kronecker_quiver(), 2)
        cls = engine.classes((1, 1))[3]
        assert cls.render() == "Q:K2|q:2|d:(1,1)|#3"

    def test_render_stable_across_instances(self):
        a = BruteForceEngine(kronecker_quiver(), 2)
        b = BruteForceEngine(kronecker_quiver(), 2)
        assert [c.render() for c in a.classes((2, 1))] == \
            [c.render() for c in b.classes((2, 1))]
