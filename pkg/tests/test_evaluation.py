import pytest

from heatalign.engine import AlignmentMatrix, AlignmentRow, CandidateScore
from heatalign.errors import EvalError
from heatalign.evaluation import (
    default_thresholds,
    matrix_predictions,
    precision_recall,
    precision_recall_pairs,
)
from heatalign.ingest import GroundTruth

TRUTH = GroundTruth(pairs=frozenset({
    ("p1", "q1"), ("p2", "q2"), ("p3", "q3"), ("p4", "q4"),
}))


def test_hand_example_half_precision_quarter_recall():
    predictions = [("p1", "q1", 0.9), ("p2", "q9", 0.8)]
    point = precision_recall_pairs(predictions, TRUTH, [0.5]).points[0]
    assert point.precision == 0.5
    assert point.recall == 0.25
    assert point.n_predicted == 2 and point.n_correct == 1
    assert not point.precision_defaulted


def test_threshold_is_strict():
    predictions = [("p1", "q1", 0.5)]
    point = precision_recall_pairs(predictions, TRUTH, [0.5]).points[0]
    assert point.n_predicted == 0 and point.precision_defaulted


def test_either_orientation_counts_once():
    # self-alignment emits both sides of the same truth pair
    predictions = [("p1", "q1", 0.9), ("q1", "p1", 0.9)]
    point = precision_recall_pairs(predictions, TRUTH, [0.5]).points[0]
    assert point.precision == 1.0
    assert point.recall == 0.25  # one distinct pair covered
    assert point.n_predicted == 2 and point.n_correct == 2


def test_empty_predictions_default_precision():
    point = precision_recall_pairs([], TRUTH, [0.5]).points[0]
    assert point.precision == 1.0 and point.precision_defaulted
    assert point.recall == 0.0


def test_empty_truth_rejected():
    with pytest.raises(EvalError):
        precision_recall_pairs([], GroundTruth(pairs=frozenset()), [0.5])


def test_thresholds_must_increase():
    with pytest.raises(EvalError):
        precision_recall_pairs([], TRUTH, [0.5, 0.3])
    with pytest.raises(EvalError):
        precision_recall_pairs([], TRUTH, [0.5, 0.5])


def test_recall_monotone_in_threshold():
    predictions = [("p1", "q1", 0.9), ("p2", "q2", 0.6), ("p3", "q3", 0.3)]
    report = precision_recall_pairs(predictions, TRUTH, [0.2, 0.5, 0.8])
    recalls = [p.recall for p in report.points]
    assert recalls == sorted(recalls, reverse=True)
    assert recalls == [0.75, 0.5, 0.25]


def test_matrix_predictions_use_mergeable_argmax():
    rows = {
        "p1": AlignmentRow("p1", [CandidateScore("q1", 1.0, 1.0, 0.8),
                                  CandidateScore("NEW", 0.0, 1.0, 0.2)]),
        "p2": AlignmentRow("p2", [CandidateScore("NEW", 0.0, 1.0, 0.7),
                                  CandidateScore("q2", 0.0, 1.0, 0.3)]),
        "p3": AlignmentRow("p3", [], unalignable=True),
    }
    preds = matrix_predictions(AlignmentMatrix(rows))
    assert preds == [("p1", "q1", 0.8)]  # NEW-dominated and unalignable rows drop
    point = precision_recall(AlignmentMatrix(rows), TRUTH, [0.5]).points[0]
    assert point.precision == 1.0 and point.recall == 0.25


def test_report_csv_shape():
    report = precision_recall_pairs([("p1", "q1", 0.9)], TRUTH, [0.5])
    csv = report.to_csv()
    lines = csv.strip().split("\n")
    assert lines[0] == "threshold,precision,recall,n_predicted,n_correct"
    assert lines[1].split(",") == ["0.5", "1.0", "0.25", "1", "1"]


def test_default_thresholds():
    values = default_thresholds()
    assert len(values) == 19
    assert values[0] == 0.05 and values[-1] == 0.95
    assert values == sorted(set(values))
