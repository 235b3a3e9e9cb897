"""
Griffiths-Dwork reduction, Gauss-Manin matrices and linear translates
"""

import random
from fractions import Fraction

import pytest

from periodplan import (
    ConnectionMatrix,
    JacobianRing,
    Pencil,
    PoleForm,
    Polynomial,
    ReductionError,
    RingCache,
    SingularHypersurfaceError,
    SingularMatrixError,
    gm_connection_at,
    griffiths_dwork_reduce,
    translate_matrix,
)
from periodplan._linalg import identity, matmul
from periodplan._monomial import ONE

SWAP_XY = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
SWAP_YZ = [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]


class TestReduction:
    """Test reduction of pole forms to Griffiths coordinates"""

    def test_basis_element_is_unit_vector(self, fermat):
        ring = JacobianRing(fermat)
        basis = ring.griffiths_basis()
        coords = griffiths_dwork_reduce(PoleForm(Polynomial.parse("x^2*y^2"), 2, fermat), ring)
        idx = basis.index((2, 2, 0, 0), 2)
        assert coords[idx] == 1
        assert sum(1 for c in coords if c) == 1

    def test_pole_order_drops(self, fermat):
        """x^4 / f^2 = (x / 4) d_x f / f^2 lands on 1 / f with coefficient 1/4"""
        ring = JacobianRing(fermat)
        coords = griffiths_dwork_reduce(PoleForm(Polynomial.parse("x^4"), 2, fermat), ring)
        assert coords[0] == Fraction(1, 4)
        assert not any(coords[1:])

    def test_exact_form_reduces_to_zero(self, fermat):
        """f / f^2 reduces to 1/f"""
        ring = JacobianRing(fermat)
        coords = griffiths_dwork_reduce(PoleForm(fermat, 2, fermat), ring)
        assert coords[0] == 1
        assert not any(coords[1:])

    def test_wrong_numerator_degree(self, fermat):
        with pytest.raises(ReductionError):
            PoleForm(Polynomial.parse("x^3"), 2, fermat)

    def test_pole_order_at_least_one(self, fermat):
        with pytest.raises(ReductionError):
            PoleForm(Polynomial.parse("x^4"), 0, fermat)

    def test_koszul_perturbation_is_invisible(self, v4_example):
        """Adding Koszul syzygies to the cofactors does not change the coordinates"""
        ring = JacobianRing(v4_example)
        numerator = Polynomial.parse("x^4*y^3*z - 2*z^5*w^3 + y^8")
        plain = griffiths_dwork_reduce(PoleForm(numerator, 3, v4_example), ring)
        for seed in range(3):
            perturbed = griffiths_dwork_reduce(
                PoleForm(numerator, 3, v4_example), ring, perturb=random.Random(seed)
            )
            assert perturbed == plain


class TestConnectionMatrix:
    """Test the first-order Gauss-Manin matrix"""

    def test_trivial_pencil_is_zero(self, fermat):
        m = gm_connection_at(Pencil(fermat, fermat), Fraction(0))
        assert m.size == 21
        assert m.is_zero()

    def test_diagonal_pencil_first_row(self, diagonal_pencil):
        """d/dt 1/f_t on (1 + t) x^4 + y^4 + z^4 + w^4 is -1 / (4 (1 + t)) times 1/f_t"""
        m = gm_connection_at(diagonal_pencil, Fraction(0))
        assert m.entries[0][0] == Fraction(-1, 4)
        assert not any(m.entries[0][1:])
        m2 = gm_connection_at(diagonal_pencil, Fraction(2))
        assert m2.entries[0][0] == Fraction(-1, 12)

    def test_swap_law(self, fermat, v4_example):
        """Reversing the pencil and reflecting t0 negates the matrix"""
        pencil = Pencil(fermat, v4_example)
        forward = gm_connection_at(pencil, Fraction(0))
        backward = gm_connection_at(pencil.reversed(), Fraction(1))
        assert backward.rows() == forward.scaled(Fraction(-1))

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(20))
    def test_swap_law_on_vertex_pairs(self, seed, four_term_vertices):
        f, g = random.Random(seed).sample(list(four_term_vertices), 2)
        pencil = Pencil(f, g)
        forward = gm_connection_at(pencil, Fraction(0))
        backward = gm_connection_at(pencil.reversed(), Fraction(1))
        assert backward.rows() == forward.scaled(Fraction(-1))

    @pytest.mark.parametrize("c", [Fraction(2), Fraction(-1)])
    def test_linear_in_direction(self, fermat, v4_example, c):
        """Scaling g - f by c scales the matrix at a fixed member by c"""
        base = gm_connection_at(Pencil(fermat, v4_example), Fraction(0))
        stretched_g = fermat + (v4_example - fermat) * c
        stretched = gm_connection_at(Pencil(fermat, stretched_g), Fraction(0))
        assert stretched.rows() == base.scaled(c)

    def test_koszul_perturbation(self, fermat, v4_example):
        pencil = Pencil(fermat, v4_example)
        plain = gm_connection_at(pencil, Fraction(0))
        perturbed = gm_connection_at(pencil, Fraction(0), perturb=random.Random(7))
        assert perturbed.entries == plain.entries

    def test_singular_member(self, fermat):
        """The diagonal-direction pencil degenerates at t = -1"""
        pencil = Pencil(fermat, Polynomial.parse("2*x^4 + y^4 + z^4 + w^4"))
        with pytest.raises(SingularHypersurfaceError):
            gm_connection_at(pencil, Fraction(-1))

    def test_shared_cache(self, fermat, v4_example):
        cache = RingCache()
        pencil = Pencil(fermat, v4_example)
        gm_connection_at(pencil, Fraction(0), cache=cache)
        gm_connection_at(Pencil(fermat, fermat), Fraction(0), cache=cache)
        assert len(cache) == 1

    def test_record_round_trip(self, diagonal_pencil):
        m = gm_connection_at(diagonal_pencil, Fraction(1, 2))
        record = m.to_record()
        assert record.size == 21
        assert record.t0 == "1/2"
        restored = ConnectionMatrix.from_record(record)
        assert restored.entries == m.entries
        assert restored.basis.rows == m.basis.rows


class TestTranslateMatrix:
    """Test the basis change of a linear change of variables"""

    def test_identity(self, fermat):
        n = translate_matrix(identity(4), fermat)
        assert n.rows() == identity(21)
        assert n.image == fermat

    def test_permutation(self, fermat):
        """Permuting variables of the Fermat quartic permutes its basis"""
        n = translate_matrix(SWAP_XY, fermat)
        assert n.image == fermat
        rows = n.rows()
        assert all(v in (0, 1) for row in rows for v in row)
        assert all(sum(row) == 1 for row in rows)
        assert all(sum(col) == 1 for col in zip(*rows))
        basis = JacobianRing(fermat).griffiths_basis()
        assert rows[basis.index((2, 0, 2, 0), 2)][basis.index((0, 2, 2, 0), 2)] == 1
        assert rows[basis.index(ONE, 1)][basis.index(ONE, 1)] == 1

    def test_composition(self, fermat):
        """N(u1 u2, f) = N(u1, f) N(u2, u1 . f)"""
        n1 = translate_matrix(SWAP_XY, fermat)
        n2 = translate_matrix(SWAP_YZ, n1.image)
        n12 = translate_matrix(matmul(SWAP_XY, SWAP_YZ), fermat)
        assert n12.rows() == matmul(n1.rows(), n2.rows())

    def test_scaling(self):
        """x -> 2x turns x^4 into 16 x^4 and leaves the coordinate of 1/f at 1"""
        f = Polynomial.parse("x^4 + y^4 + z^4 + w^4")
        n = translate_matrix([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], f)
        assert n.image == Polynomial.parse("16*x^4 + y^4 + z^4 + w^4")
        assert n.rows()[0][0] == 1

    def test_singular_substitution(self, fermat):
        with pytest.raises(SingularMatrixError):
            translate_matrix([[1, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], fermat)

    def test_record(self, fermat):
        record = translate_matrix(SWAP_XY, fermat).to_record()
        assert record.size == 21
        assert len(record.entries) == 21 * 21
        assert len(record.u) == 16
