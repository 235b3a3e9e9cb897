"""
Groebner bases, Jacobian rings and Griffiths bases
"""

from fractions import Fraction

import numpy as np
import pytest

from periodplan import (
    Budget,
    BudgetExceededError,
    BudgetMeter,
    IdealError,
    IdealMembershipError,
    JacobianRing,
    Polynomial,
    RingCache,
    SingularHypersurfaceError,
    buchberger,
    express_in_ideal,
    griffiths_basis,
    is_smooth,
)
from periodplan._jacobian import jacobian_ideal, residue_degree
from periodplan._monomial import ONE, monomials_of_degree

SMOOTH_COUNTS = [1, 4, 10, 16, 19, 16, 10, 4, 1]
QUARTICS = monomials_of_degree(4)


def random_quartic(rng):
    """Either a perturbed Fermat quartic or a sparse 3 to 5 term quartic"""
    if rng.random() < 0.5:
        terms = {m: int(rng.integers(1, 4)) for m in QUARTICS if max(m) == 4}
        extra = int(rng.integers(1, 3))
    else:
        terms = {}
        extra = int(rng.integers(3, 6))
    for i in rng.choice(len(QUARTICS), size=extra, replace=False):
        terms[QUARTICS[int(i)]] = int(rng.integers(-2, 3)) or 1
    return Polynomial(terms)


class TestJacobianIdeal:
    """Test the partial derivatives of a quartic"""

    def test_fermat_partials(self, fermat):
        partials = jacobian_ideal(fermat)
        assert partials == tuple(
            Polynomial.parse(s) for s in ("4*x^3", "4*y^3", "4*z^3", "4*w^3")
        )

    def test_v4_partials(self, v4_example):
        partials = jacobian_ideal(v4_example)
        assert partials[0] == Polynomial.parse("3*x^2*y + y^3")
        assert partials[3] == Polynomial.parse("z^3 + 4*w^3")

    def test_inhomogeneous_rejected(self):
        with pytest.raises(IdealError):
            jacobian_ideal(Polynomial.parse("x^4 + y^3"))

    def test_residue_degree(self):
        assert [residue_degree(k, 4) for k in (1, 2, 3)] == [0, 4, 8]


class TestBuchberger:
    """Test the reduced grevlex Groebner basis"""

    def test_monomial_ideal(self):
        gens = [Polynomial.parse("x^2*y"), Polynomial.parse("x*y^2")]
        gb = buchberger(gens)
        assert set(gb.leading_monomials) == {(2, 1, 0, 0), (1, 2, 0, 0)}
        assert gb.check_cofactors()

    def test_generators_are_monic(self):
        gb = buchberger([Polynomial.parse("4*x^3")])
        assert gb.generators == (Polynomial.parse("x^3"),)
        assert gb.cofactors == ((Polynomial.constant(Fraction(1, 4)),),)

    def test_v4_basis_is_groebner(self, v4_example):
        """Every S-polynomial of the reduced basis reduces to zero"""
        gb = buchberger(list(jacobian_ideal(v4_example)))
        assert gb.s_polynomials_reduce_to_zero()
        assert gb.check_cofactors()
        assert gb.is_zero_dimensional()

    def test_normal_forms(self, fermat):
        ring = JacobianRing(fermat)
        assert not ring.normal_form(Polynomial.parse("x^3"))
        assert not ring.normal_form(Polynomial.parse("x^3*y - 2*w^5"))
        assert ring.normal_form(Polynomial.parse("x^2*y^2")) == Polynomial.parse("x^2*y^2")

    def test_division_certificate(self, v4_example):
        """p = sum(q_j g_j) + r for the basis elements g_j"""
        ring = JacobianRing(v4_example)
        p = Polynomial.parse("x^5 + x*y*z^3 + 3*w^5")
        div = ring.divide(p)
        total = div.remainder
        for q, g in zip(div.quotients, ring.gb.generators):
            total = total + q * g
        assert total == p

    def test_empty_and_zero_generators(self):
        with pytest.raises(IdealError):
            buchberger([])
        with pytest.raises(IdealError):
            buchberger([Polynomial.parse("x^2"), Polynomial.zero()])

    def test_step_budget(self, v4_example):
        meter = BudgetMeter(Budget(step_limit=1))
        with pytest.raises(BudgetExceededError) as exc_info:
            buchberger(list(jacobian_ideal(v4_example)), meter=meter)
        assert exc_info.value.reason == "steps"

    @pytest.mark.parametrize("seed", range(8))
    def test_reduced_basis_ignores_generator_order(self, seed, v4_example):
        """The reduced basis depends on the ideal only"""
        rng = np.random.default_rng(seed)
        f = v4_example if seed == 0 else random_quartic(rng)
        partials = [p for p in jacobian_ideal(f) if p]
        expected = buchberger(partials).generators
        shuffled = [partials[int(i)] for i in rng.permutation(len(partials))]
        assert buchberger(shuffled).generators == expected
        scaled = [p.scalar_mul(Fraction(int(rng.integers(1, 5)), 3)) for p in partials]
        assert buchberger(scaled).generators == expected


class TestSmoothness:
    """Test the zero-dimensionality check of jac(f)"""

    def test_fermat_is_smooth(self, fermat):
        assert is_smooth(fermat)

    def test_v4_example_is_smooth(self, v4_example):
        assert is_smooth(v4_example)

    def test_missing_variable_is_singular(self):
        assert not is_smooth(Polynomial.parse("x^4 + y^4 + z^4"))

    def test_singular_point(self):
        """x^2 y^2 + z^4 + w^4 is singular at (1:0:0:0)"""
        assert not is_smooth(Polynomial.parse("x^2*y^2 + z^4 + w^4"))

    def test_require_smooth_carries_leading_terms(self):
        ring = JacobianRing(Polynomial.parse("x^2*y^2 + z^4 + w^4"))
        with pytest.raises(SingularHypersurfaceError) as exc_info:
            ring.require_smooth()
        assert exc_info.value.leading_terms

    @pytest.mark.parametrize("seed", range(20))
    def test_smoothness_matches_ring_dimension(self, seed):
        """Smooth iff the Jacobian ring vanishes in degree 9, with the complete intersection counts"""
        f = random_quartic(np.random.default_rng(seed))
        ring = JacobianRing(f)
        counts = [len(ring.standard_monomials(d)) for d in range(10)]
        smooth = is_smooth(f)
        assert smooth == (counts[9] == 0)
        assert smooth == ring.is_zero_dimensional()
        if smooth:
            assert counts[:9] == SMOOTH_COUNTS
            assert ring.dimension() == 81


class TestGriffithsBasis:
    """Test the monomial basis of primitive cohomology"""

    def test_fermat_counts(self, fermat):
        basis = griffiths_basis(fermat)
        assert basis.counts() == (1, 19, 1)
        assert basis.m0 == 21
        assert basis.rows[0] == (ONE, 1)
        assert basis.rows[-1] == ((2, 2, 2, 2), 3)

    def test_rows_ordered(self, fermat):
        basis = griffiths_basis(fermat)
        orders = [k for _, k in basis.rows]
        assert orders == sorted(orders)
        middle = basis.rows_of_order(2)
        assert basis.rows[middle[0]][0] == (2, 2, 0, 0)
        assert all(max(m) <= 2 for m, _ in basis.rows)

    def test_v4_has_21_rows(self, v4_example):
        basis = griffiths_basis(v4_example)
        assert basis.m0 == 21
        assert basis.counts() == (1, 19, 1)

    def test_index(self, fermat):
        basis = griffiths_basis(fermat)
        assert basis.index(ONE, 1) == 0
        assert basis.index((2, 2, 2, 2), 3) == 20
        assert basis.describe()[0] == "1 / f^1"

    def test_ring_dimension(self, fermat):
        """The Jacobian ring of the Fermat quartic has dimension 3^4"""
        assert JacobianRing(fermat).dimension() == 81

    @pytest.mark.slow
    def test_sampled_four_term_vertices(self, four_term_vertices):
        rng = np.random.default_rng(4)
        members = list(four_term_vertices)
        for i in rng.choice(len(members), size=10, replace=False):
            basis = griffiths_basis(members[int(i)])
            assert basis.counts() == (1, 19, 1)

    @pytest.mark.slow
    def test_sampled_five_term_vertices(self, five_term_vertices):
        rng = np.random.default_rng(5)
        members = list(five_term_vertices)
        for i in rng.choice(len(members), size=10, replace=False):
            ring = JacobianRing(members[int(i)])
            assert ring.griffiths_basis().counts() == (1, 19, 1)
            assert ring.dimension() == 81


class TestExpress:
    """Test ideal membership with cofactors"""

    def test_single_partial(self, fermat):
        ring = JacobianRing(fermat)
        cof = express_in_ideal(Polynomial.parse("4*x^3"), ring)
        assert cof == (
            Polynomial.constant(1),
            Polynomial.zero(),
            Polynomial.zero(),
            Polynomial.zero(),
        )

    def test_sum_of_partials(self, fermat):
        ring = JacobianRing(fermat)
        cof = ring.express(Polynomial.parse("x^3 + y^3"))
        assert cof[0] == Polynomial.constant(Fraction(1, 4))
        assert cof[1] == Polynomial.constant(Fraction(1, 4))
        assert not cof[2] and not cof[3]

    def test_cofactors_reconstruct(self, v4_example):
        ring = JacobianRing(v4_example)
        p = Polynomial.parse("x^3*y^2 + z^2*w^3 - 2*x*y^4")
        p = p - ring.normal_form(p)
        cof = ring.express(p)
        total = Polynomial.zero()
        for a, d in zip(cof, ring.partials):
            total = total + a * d
        assert total == p

    def test_non_member(self, fermat):
        ring = JacobianRing(fermat)
        with pytest.raises(IdealMembershipError):
            ring.express(Polynomial.parse("x^2*y^2"))


class TestRingCache:
    """Test sharing of Jacobian rings"""

    def test_one_ring_per_quartic(self, fermat):
        cache = RingCache()
        first = cache.get(fermat)
        second = cache.get(Polynomial.parse("w^4 + z^4 + y^4 + x^4"))
        assert first is second
        assert len(cache) == 1
        assert fermat in cache

    def test_persist(self, fermat, tmp_path):
        cache = RingCache(tmp_path / "rings.json")
        cache.get(fermat)
        cache.save()
        bases = cache.load_bases()
        assert bases[fermat.canonical_key()] == [
            Polynomial.parse(s) for s in ("w^3", "z^3", "y^3", "x^3")
        ]
