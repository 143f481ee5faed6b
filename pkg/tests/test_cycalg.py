import random

import pytest

from ptl import fixtures
from ptl.cycalg import (
    CyclicAlgebraSpec,
    classify_standard_sigma_image,
    norm_triviality,
    pgl3_cocycle_of,
)
from ptl.errors import InputError, PreconditionError
from ptl.exactfield import norm_cyclic
from ptl.projlin import ProjMatrix, parse_matrix
from ptl.twistlab import Cocycle, cyclic_presentation, verify_cocycle


def qf_spec(a):
    Q = fixtures.field("q")
    return CyclicAlgebraSpec(
        Q,
        fixtures.field("qf"),
        fixtures.qf_sigma(),
        Q.scalar(a),
        attested_disc=fixtures.field_attested("qf")["field_disc"],
    )


def kummer_spec(a):
    K = fixtures.field("q_zeta3")
    if not hasattr(a, "field"):
        a = K.scalar(a)
    return CyclicAlgebraSpec(K, fixtures.field("q_zeta3_cbrt7"), fixtures.cbrt7_sigma(), a)


class TestSpecValidation:
    def test_zero_a_rejected(self):
        with pytest.raises(InputError):
            qf_spec(0)

    def test_wrong_degree_rejected(self):
        K = fixtures.field("q_zeta3")
        with pytest.raises(InputError):
            CyclicAlgebraSpec(K, K, fixtures.cbrt7_sigma(), K.one())


class TestCocycleMatrix:
    def test_companion_shape_and_validity(self):
        spec = qf_spec(2)
        xi = pgl3_cocycle_of(spec)
        ok, report = verify_cocycle(xi)
        assert ok, report
        v = xi.value("s")
        QF = fixtures.field("qf")
        expected = ProjMatrix(
            QF,
            [
                [QF.zero(), QF.zero(), QF.scalar(2)],
                [QF.one(), QF.zero(), QF.zero()],
                [QF.zero(), QF.one(), QF.zero()],
            ],
        )
        assert v == expected

    def test_cube_is_a_times_identity(self):
        xi = pgl3_cocycle_of(qf_spec(2))
        assert (xi.value("s") ** 3).is_identity()

    def test_kummer_cocycle_valid(self):
        xi = pgl3_cocycle_of(kummer_spec(fixtures.field("q_zeta3").gen(0)))
        ok, report = verify_cocycle(xi)
        assert ok, report


class TestNormTriviality:
    def test_two_is_not_a_norm(self):
        verdict = norm_triviality(qf_spec(2))
        assert verdict.status == "nontrivial"
        assert verdict.obstruction == {"test": "inert-prime", "prime": 2, "valuation": 1}
        assert verdict.witness is None

    def test_seven_is_a_norm_with_witness(self):
        verdict = norm_triviality(kummer_spec(7))
        assert verdict.status == "trivial"
        K = fixtures.field("q_zeta3")
        L = fixtures.field("q_zeta3_cbrt7")
        n = norm_cyclic(fixtures.cbrt7_sigma(), verdict.witness)
        from ptl.exactfield import lift_raw

        assert n.value == lift_raw(L, K, K.scalar(7).value)

    def test_one_is_a_norm(self):
        verdict = norm_triviality(kummer_spec(1))
        assert verdict.status == "trivial"

    def test_zeta3_obstructed_at_the_ramified_prime(self):
        # cube table mod 7: {1, 6}; the residues of the cube root of unity
        # are 2 and 4, neither a cube
        assert sorted({pow(x, 3, 7) for x in range(1, 7)}) == [1, 6]
        K = fixtures.field("q_zeta3")
        verdict = norm_triviality(kummer_spec(K.gen(0)))
        assert verdict.status == "nontrivial"
        assert verdict.obstruction["test"] == "ramified-unit"
        assert verdict.obstruction["prime"] == 7

    def test_never_witness_and_obstruction(self):
        for a in (1, 2, 7):
            v = norm_triviality(qf_spec(a) if a == 2 else kummer_spec(a))
            assert not (v.witness is not None and v.obstruction is not None)

    def test_random_small_norms_found(self):
        rng = random.Random(19)
        K = fixtures.field("q_zeta3")
        L = fixtures.field("q_zeta3_cbrt7")
        sigma = fixtures.cbrt7_sigma()
        from ptl.exactfield import restrict_raw

        found = 0
        for _ in range(6):
            z, w = L.gen(0), L.gen(1)
            basis = [L.one(), z, w, z * w, w * w, z * w * w]
            x = L.zero()
            for g in basis:
                x = x + g * rng.randrange(-1, 2)
            if x.is_zero():
                continue
            n = norm_cyclic(sigma, x)
            down = restrict_raw(L, K, n.value)
            assert down is not None
            a = K.element(down)
            if a.is_zero():
                continue
            verdict = norm_triviality(kummer_spec(a))
            assert verdict.status == "trivial"
            found += 1
        assert found >= 3

    def test_witnesses_multiply(self):
        v7 = norm_triviality(kummer_spec(7))
        v8 = norm_triviality(kummer_spec(8))
        assert v7.status == v8.status == "trivial"
        sigma = fixtures.cbrt7_sigma()
        prod = v7.witness * v8.witness
        n = norm_cyclic(sigma, prod)
        L = fixtures.field("q_zeta3_cbrt7")
        assert n == L.scalar(56)

    def test_undecided_is_an_honest_output(self):
        # 11 = 2 mod 3 stays prime in the Eisenstein field and is unramified
        # in the Kummer layer, so neither local test applies, and a bounded
        # search cannot certify a negative
        K = fixtures.field("q_zeta3")
        verdict = norm_triviality(kummer_spec(11), search_bound=1)
        assert verdict.status == "undecided"


class TestClassification:
    def test_theorem_obstruction_cocycle(self):
        xi = fixtures.load_cocycle("real_cyclotomic_p3")
        spec, detail = classify_standard_sigma_image(xi)
        assert spec is not None
        assert spec.a == fixtures.field("q").scalar(3)

    def test_trivial_cocycle_gives_unit_parameter(self):
        xi = fixtures.load_cocycle("trivial")
        spec, detail = classify_standard_sigma_image(xi)
        assert spec is not None
        assert spec.a == fixtures.field("q").one()

    def test_product_tu_classifies_to_zeta3(self):
        K = fixtures.field("q_zeta3")
        L = fixtures.field("q_zeta3_cbrt7")
        from ptl.exactfield import lift_raw

        T = parse_matrix(L, "[Z:X:Y]")
        z_in_L = L.element(lift_raw(L, K, K.gen(0).value))
        U = ProjMatrix(
            L,
            [
                [L.one(), L.zero(), L.zero()],
                [L.zero(), L.one(), L.zero()],
                [L.zero(), L.zero(), z_in_L],
            ],
        )
        pres = cyclic_presentation(L, fixtures.cbrt7_sigma(), "s")
        pres.base = K
        xi = Cocycle(pres, {"s": T * U})
        spec, detail = classify_standard_sigma_image(xi)
        assert spec is not None
        assert spec.a == K.gen(0)
        assert norm_triviality(spec).status == "nontrivial"

    def test_non_monomial_value_not_recognized(self):
        QF = fixtures.field("qf")
        pres = cyclic_presentation(QF, fixtures.qf_sigma(), "s")
        pres.base = fixtures.field("q")
        M = parse_matrix(QF, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
        xi = Cocycle(pres, {"s": M})
        # the unipotent matrix is not even a cocycle for the order-3 relation
        with pytest.raises(PreconditionError):
            classify_standard_sigma_image(xi)
