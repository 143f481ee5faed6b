import random
from fractions import Fraction

import pytest

from ptl import fixtures
from ptl.errors import DescriptorMismatch, InputError, NonInvertible, PreconditionError
from ptl.exactfield import (
    elem_arith,
    finite_extension,
    frobenius,
    galois_map,
    identity_map,
    is_inert_cubic,
    make_field,
    min_poly_over_Q,
    mult_order,
    mult_order_mod_signs,
    norm_cyclic,
    nth_power_class,
    parse_element,
    prime_field,
    rationals,
    verify_galois_map,
)

QF_DOC = {"base": "Q", "tower": [{"name": "a", "minpoly": ["-64", "0", "12", "1"], "witness": 5}]}
ZETA3_DOC = {"base": "Q", "tower": [{"name": "z3", "minpoly": ["1", "1", "1"], "witness": 2}]}
KUMMER_DOC = {
    "base": "Q",
    "tower": [
        {"name": "z3", "minpoly": ["1", "1", "1"], "witness": 2},
        {"name": "c7", "minpoly": [["-7"], ["0"], ["0"], ["1"]], "witness": {"prime": 31, "images": [5]}},
    ],
}


class TestMakeField:
    def test_cubic_splitting_field_degree(self):
        assert make_field(QF_DOC).degree() == 3

    def test_eisenstein_field(self):
        K = make_field(ZETA3_DOC)
        assert K.degree() == 2
        z = K.gen(0)
        assert (z * z + z + 1).is_zero()

    def test_kummer_tower_degree_six(self):
        assert make_field(KUMMER_DOC).degree() == 6

    def test_reducible_over_prime_field_rejected(self):
        with pytest.raises(InputError):
            make_field({"base": "5", "tower": [{"name": "t", "minpoly": [4, 0, 1]}]})

    def test_missing_witness_over_Q_rejected(self):
        with pytest.raises(InputError):
            make_field({"base": "Q", "tower": [{"name": "t", "minpoly": ["1", "1", "1"]}]})

    def test_bad_witness_rejected(self):
        # x^2+x+1 splits mod 7, so 7 cannot certify it
        with pytest.raises(InputError):
            make_field({"base": "Q", "tower": [{"name": "t", "minpoly": ["1", "1", "1"], "witness": 7}]})

    def test_nonmonic_rejected(self):
        with pytest.raises(InputError):
            make_field({"base": "Q", "tower": [{"name": "t", "minpoly": ["1", "0", "2"], "witness": 5}]})


class TestArithmetic:
    def test_zeta3_cube_is_one(self):
        K = make_field(ZETA3_DOC)
        z = K.gen(0)
        assert elem_arith("mul", [z, z, z]) == K.one()

    def test_cbrt7_cube(self):
        L = make_field(KUMMER_DOC)
        w = L.gen(1)
        assert w**3 == L.scalar(7)

    def test_inverse_of_one_plus_zeta(self):
        # extended-gcd oracle in Q[x]/(x^2+x+1): (1+x)(a+bx) = (a-b) + a x,
        # so the inverse is -x
        K = make_field(ZETA3_DOC)
        z = K.gen(0)
        assert (1 + z).inv() == -z
        assert elem_arith("inv", [1 + z]) == -z

    def test_division_by_zero(self):
        K = make_field(ZETA3_DOC)
        with pytest.raises(NonInvertible):
            K.zero().inv()

    def test_descriptor_mismatch(self):
        K = make_field(ZETA3_DOC)
        QF = make_field(QF_DOC)
        with pytest.raises(DescriptorMismatch):
            K.one() + QF.one()

    def test_field_axioms_randomized(self):
        rng = random.Random(7)
        L = make_field(KUMMER_DOC)
        gens = [L.one(), L.gen(0), L.gen(1), L.gen(0) * L.gen(1)]

        def rand():
            x = L.zero()
            for g in gens:
                x = x + g * rng.randrange(-3, 4)
            return x

        for _ in range(60):
            x, y, z = rand(), rand(), rand()
            assert (x + y) * z == x * z + y * z
            assert x * y == y * x
            if not x.is_zero():
                assert x * x.inv() == L.one()


class TestSerialization:
    def test_round_trip_random(self):
        rng = random.Random(11)
        L = make_field(KUMMER_DOC)
        gens = [L.one(), L.gen(0), L.gen(1), L.gen(1) ** 2, L.gen(0) * L.gen(1)]
        for _ in range(50):
            x = L.zero()
            for g in gens:
                x = x + g * Fraction(rng.randrange(-9, 10), rng.randrange(1, 5))
            doc = x.serialize()
            assert parse_element(L, doc) == x

    def test_finite_field_round_trip(self):
        F = finite_extension(31, "eta", [-25, 0, 0, 1])
        rng = random.Random(13)
        for _ in range(50):
            x = F.element(tuple(rng.randrange(31) for _ in range(3)))
            assert parse_element(F, x.serialize()) == x


class TestGaloisMaps:
    def test_sigma_moves_cbrt7(self):
        L = make_field(KUMMER_DOC)
        z, w = L.gen(0), L.gen(1)
        sigma = fixtures.cbrt7_sigma()
        assert sigma(w) == z * w

    def test_base_field_fixed(self):
        sigma = fixtures.qf_sigma()
        QF = sigma.field
        assert sigma(QF.scalar(5)) == QF.scalar(5)

    def test_qf_sigma_has_exact_order_three(self):
        sigma = fixtures.qf_sigma()
        ok, report = verify_galois_map(sigma)
        assert ok, report
        A = sigma.field.gen(0)
        b = sigma(A)
        assert b != A
        assert sigma(sigma(b)) == A

    def test_conjugate_image_matches_discriminant_formula(self):
        # independent oracle: b = (-(12+a) + 576/(3a^2+24a))/2 satisfies f(b)=0
        QF = make_field(QF_DOC)
        A = QF.gen(0)
        b = (-(A + 12) + 576 * (3 * A * A + 24 * A).inv()) / 2
        assert (b**3 + 12 * b * b - 64).is_zero()
        assert fixtures.qf_sigma()(A) in (b, (-(A + 12) - 576 * (3 * A * A + 24 * A).inv()) / 2)

    def test_bad_image_rejected(self):
        K = make_field(ZETA3_DOC)
        bad = galois_map(K, [K.one().value], 1, "bad")  # z3 -> 1
        ok, report = verify_galois_map(bad)
        assert not ok
        assert any("annihilate" in line for line in report)

    def test_identity_map_order_one(self):
        K = make_field(ZETA3_DOC)
        ok, report = verify_galois_map(identity_map(K))
        assert ok, report

    def test_homomorphism_randomized(self):
        rng = random.Random(3)
        sigma = fixtures.qf_sigma()
        QF = sigma.field
        A = QF.gen(0)
        for _ in range(200):
            x = QF.scalar(rng.randrange(-5, 6)) + A * rng.randrange(-5, 6)
            y = QF.scalar(rng.randrange(-5, 6)) + (A * A) * rng.randrange(-5, 6)
            assert sigma(x + y) == sigma(x) + sigma(y)
            assert sigma(x * y) == sigma(x) * sigma(y)


class TestNorm:
    def test_norm_of_cbrt7(self):
        L = make_field(KUMMER_DOC)
        assert norm_cyclic(fixtures.cbrt7_sigma(), L.gen(1)) == L.scalar(7)

    def test_norm_of_one(self):
        L = make_field(KUMMER_DOC)
        assert norm_cyclic(fixtures.cbrt7_sigma(), L.one()) == L.one()

    def test_norm_of_one_plus_cbrt7(self):
        # expansion oracle: prod over j of (1 + zeta^j w) = 1 + w^3 = 8
        L = make_field(KUMMER_DOC)
        z, w = L.gen(0), L.gen(1)
        expected = (1 + w) * (1 + z * w) * (1 + z * z * w)
        assert expected == L.scalar(8)
        assert norm_cyclic(fixtures.cbrt7_sigma(), 1 + w) == L.scalar(8)

    def test_norm_multiplicative_and_fixed(self):
        rng = random.Random(5)
        L = make_field(KUMMER_DOC)
        sigma = fixtures.cbrt7_sigma()
        z, w = L.gen(0), L.gen(1)
        basis = [L.one(), z, w, z * w, w * w, z * w * w]
        for _ in range(50):
            x = L.zero()
            y = L.zero()
            for g in basis:
                x = x + g * rng.randrange(-2, 3)
                y = y + g * rng.randrange(-2, 3)
            if x.is_zero() or y.is_zero():
                continue
            nx, ny = norm_cyclic(sigma, x), norm_cyclic(sigma, y)
            assert norm_cyclic(sigma, x * y) == nx * ny
            assert sigma(nx) == nx


class TestResidueTests:
    def test_cube_classes_mod_31(self):
        F = prime_field(31)
        assert nth_power_class(F.scalar(8), 3) is True
        assert nth_power_class(F.scalar(1), 3) is True
        assert nth_power_class(F.scalar(7), 3) is False

    def test_agrees_with_exhaustive_tables(self):
        for p in (5, 7, 11, 13, 31, 61):
            F = prime_field(p)
            for n in (2, 3, 5):
                table = {pow(x, n, p) for x in range(1, p)}
                for x in range(1, p):
                    assert nth_power_class(F.scalar(x), n) == (x in table)

    def test_zero_rejected(self):
        with pytest.raises(PreconditionError):
            nth_power_class(prime_field(7).zero(), 3)

    def test_char_zero_rejected(self):
        with pytest.raises(PreconditionError):
            nth_power_class(rationals().one(), 3)


class TestInertness:
    def test_two_inert_in_splitting_field(self):
        verdict, report = is_inert_cubic([-64, 0, 12, 1], 2, attested_disc=81)
        assert verdict == "inert"
        assert any("rescaled" in line for line in report)

    def test_three_inert_in_real_cyclotomic(self):
        verdict, _ = is_inert_cubic([-1, -2, 1, 1], 3, attested_disc=49)
        assert verdict == "inert"

    def test_31_splits_for_cube_root_of_two(self):
        # oracle: 2 is a cube mod 31 (2 has order 5 dividing 10), so t^3-2
        # acquires a root and the prime splits
        assert pow(2, 10, 31) == 1
        verdict, _ = is_inert_cubic([-2, 0, 0, 1], 31)
        assert verdict == "split"

    def test_ramified_prime_rejected(self):
        with pytest.raises(PreconditionError):
            is_inert_cubic([-64, 0, 12, 1], 3, attested_disc=81)

    def test_reducible_rejected(self):
        with pytest.raises(PreconditionError):
            is_inert_cubic([-8, 0, 0, 1], 5)


class TestOrders:
    def test_order_of_three_mod_seven(self):
        assert mult_order(3, 7) == 6
        assert mult_order_mod_signs(3, 7) == 3

    def test_order_of_one(self):
        assert mult_order(1, 7) == 1

    def test_order_of_q_mod_nine(self):
        assert mult_order(31, 9) == 3

    def test_non_unit_rejected(self):
        with pytest.raises(PreconditionError):
            mult_order(3, 9)


class TestMinPoly:
    def test_generator_min_poly(self):
        QF = make_field(QF_DOC)
        assert min_poly_over_Q(QF, QF.gen(0).value) == [
            Fraction(-64), Fraction(0), Fraction(12), Fraction(1),
        ]

    def test_rational_element(self):
        QF = make_field(QF_DOC)
        mp = min_poly_over_Q(QF, QF.scalar(5).value)
        assert mp == [Fraction(-5), Fraction(1)]


class TestFrobenius:
    def test_frobenius_order_three(self):
        F = finite_extension(31, "eta", [-25, 0, 0, 1])
        pi = frobenius(F)
        ok, report = verify_galois_map(pi)
        assert ok, report
        eta = F.gen(0)
        assert pi(eta) == F.scalar(pow(25, 10, 31)) * eta
