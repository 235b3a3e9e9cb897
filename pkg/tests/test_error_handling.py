"""
Exception hierarchy and error surfacing
"""

from fractions import Fraction

import pytest

from periodplan import (
    AlgebraError,
    BudgetExceededError,
    CheckpointError,
    IdealError,
    LearningError,
    NotZeroDimensionalError,
    ParseError,
    PeriodPlanError,
    PoleError,
    Polynomial,
    RationalFunction,
    SearchError,
    SingularHypersurfaceError,
    StoreError,
    UndefinedMetricError,
    UPoly,
)
from periodplan._cli import EXIT_ERROR, main
from periodplan._stores import read_json


class TestHierarchy:
    """Test the exception tree"""

    @pytest.mark.parametrize(
        "child, parent",
        [
            (SingularHypersurfaceError, NotZeroDimensionalError),
            (NotZeroDimensionalError, IdealError),
            (BudgetExceededError, IdealError),
            (ParseError, AlgebraError),
            (UndefinedMetricError, LearningError),
            (CheckpointError, SearchError),
            (StoreError, PeriodPlanError),
            (IdealError, PeriodPlanError),
        ],
    )
    def test_subclass(self, child, parent):
        assert issubclass(child, parent)

    def test_repr_and_message(self):
        exc = SearchError("no oracle")
        assert exc.message == "no oracle"
        assert repr(exc) == "SearchError(message='no oracle')"
        assert str(exc) == "no oracle"


class TestErrorDetails:
    """Test the structured fields errors carry"""

    def test_parse_error_position(self):
        with pytest.raises(ParseError) as exc_info:
            Polynomial.parse("x^4 + $")
        assert exc_info.value.position == 6
        assert "position 6" in exc_info.value.message

    def test_checkpoint_line_number(self):
        exc = CheckpointError("corrupt checkpoint", line_number=4)
        assert exc.line_number == 4
        assert exc.message == "corrupt checkpoint (line 4)"

    def test_budget_reason(self):
        exc = BudgetExceededError("out of steps", reason="steps", steps=10)
        assert (exc.reason, exc.steps) == ("steps", 10)

    def test_pole_error(self):
        r = RationalFunction(UPoly.constant(1), UPoly((1, 1)))
        with pytest.raises(PoleError):
            r.evaluate(Fraction(-1))

    def test_missing_json(self, tmp_path):
        with pytest.raises(StoreError):
            read_json(tmp_path / "absent.json")


class TestCommandLineErrors:
    """Test that library errors become exit codes"""

    def test_library_error_exits_with_code(self, workdir, capsys, mocker):
        mocker.patch("periodplan._cli.cmd_search", side_effect=SearchError("queue exhausted"))
        assert main(["--workdir", str(workdir), "search", "--toy"]) == EXIT_ERROR
        assert capsys.readouterr().err == "error: queue exhausted\n"

    def test_unexpected_errors_propagate(self, workdir, mocker):
        mocker.patch("periodplan._cli.cmd_search", side_effect=RuntimeError("bug"))
        with pytest.raises(RuntimeError):
            main(["--workdir", str(workdir), "search", "--toy"])
