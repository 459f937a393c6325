from fractions import Fraction

import pytest

from src.cli.generators import linear_order, shatter_family
from src.core.exceptions import WitnessIndexError, WitnessShapeError
from src.core.witnesses import (
    CoefVector,
    Orientation,
    ShatterWitness,
    StaircaseWitness,
    check_chain,
    check_shatter,
    check_staircase,
)


class TestStaircaseWitness:
    def test_linear_order_diagonal(self, unit_thresholds):
        M = linear_order(4)
        w = StaircaseWitness((0, 1, 2, 3), (0, 1, 2, 3), unit_thresholds)
        assert check_staircase(M, w)
        assert w.length == 4

    def test_first_violation_in_row_major_order(self, unit_thresholds):
        M = linear_order(3)
        w = StaircaseWitness((0, 1, 2), (1, 0, 2), unit_thresholds)
        outcome = check_staircase(M, w)
        assert not outcome
        assert outcome.position == (0, 0)
        assert outcome.cell == (0, 1)

    def test_orientation_flip_via_transpose(self, unit_thresholds):
        M = linear_order(3)
        w = StaircaseWitness((0, 1, 2), (0, 1, 2), unit_thresholds)
        flipped = w.transposed()
        assert flipped.orientation is Orientation.COL_DOMINANT
        assert check_staircase(M.transpose(), flipped)

    def test_shape_errors(self, unit_thresholds):
        with pytest.raises(WitnessShapeError):
            StaircaseWitness((0, 1), (0,), unit_thresholds)
        with pytest.raises(WitnessShapeError):
            StaircaseWitness((0, 0), (0, 1), unit_thresholds)
        with pytest.raises(WitnessShapeError):
            StaircaseWitness((), (), unit_thresholds)

    def test_index_out_of_range(self, unit_thresholds):
        with pytest.raises(WitnessIndexError):
            check_staircase(linear_order(2), StaircaseWitness((0, 5), (0, 1), unit_thresholds))

    def test_serialized_form(self, unit_thresholds):
        w = StaircaseWitness((2, 0), (1, 0), unit_thresholds, Orientation.COL_DOMINANT)
        data = w.to_dict()
        assert data["orientation"] == "col-dominant"
        assert data["thresholds"] == {"s": "0", "r": "1"}
        assert StaircaseWitness.from_dict(data) == w


class TestShatterWitness:
    def test_generated_family_is_shattered(self, unit_thresholds, shatter_witness):
        M = shatter_family(3)
        w = shatter_witness(3, unit_thresholds)
        assert w.is_total()
        assert check_shatter(M, w)

    def test_wrong_column_reports_subset(self, unit_thresholds):
        M = shatter_family(2)
        mapping = {frozenset(): 0, frozenset({0}): 1, frozenset({1}): 1, frozenset({0, 1}): 3}
        outcome = check_shatter(M, ShatterWitness((0, 1), mapping, unit_thresholds))
        assert not outcome
        assert outcome.subset == frozenset({1})

    def test_missing_subset(self, unit_thresholds):
        M = shatter_family(2)
        w = ShatterWitness((0, 1), {frozenset(): 0, frozenset({0}): 1}, unit_thresholds)
        with pytest.raises(WitnessShapeError):
            check_shatter(M, w)

    def test_subset_outside_rows(self, unit_thresholds):
        with pytest.raises(WitnessShapeError):
            ShatterWitness((0,), {frozenset({1}): 0}, unit_thresholds)

    def test_restrict_keeps_validity(self, unit_thresholds, shatter_witness):
        M = shatter_family(3)
        sub = shatter_witness(3, unit_thresholds).restrict((0, 2))
        assert sub.size == 2
        assert check_shatter(M, sub)

    def test_chain_form(self, unit_thresholds):
        M = shatter_family(3)
        w = ShatterWitness.chain((0, 1, 2), (0, 1, 3, 7), unit_thresholds)
        assert w.chain_only
        assert check_chain(M, w)
        with pytest.raises(WitnessShapeError):
            check_shatter(M, w)
        with pytest.raises(WitnessShapeError):
            ShatterWitness.chain((0, 1), (0, 1), unit_thresholds)

    def test_serialized_form(self, unit_thresholds, shatter_witness):
        w = shatter_witness(2, unit_thresholds)
        data = w.to_dict()
        assert [item["column"] for item in data["witness"]] == [0, 1, 2, 3]
        assert dict(ShatterWitness.from_dict(data).witness) == dict(w.witness)


class TestCoefVector:
    def test_convex_validation(self):
        CoefVector((0, 1), (Fraction(1, 3), Fraction(2, 3)), convex=True)
        with pytest.raises(WitnessShapeError):
            CoefVector((0, 1), (Fraction(1, 2), Fraction(1, 3)), convex=True)
        with pytest.raises(WitnessShapeError):
            CoefVector((0, 1), (Fraction(2), Fraction(-1)), convex=True)
        with pytest.raises(WitnessShapeError):
            CoefVector((0, 0), (1, 1))

    def test_combine_and_norm(self):
        M = linear_order(3)
        c = CoefVector((0, 2), (Fraction(1, 2), Fraction(-1)))
        assert c.l1_norm() == Fraction(3, 2)
        assert c.combine(M) == [Fraction(-1, 2), Fraction(-1), Fraction(-1)]
