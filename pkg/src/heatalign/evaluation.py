"""Precision/recall harness over alignment matrices, merge logs, or raw pairs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .engine import AlignmentMatrix
from .errors import EvalError
from .ingest import GroundTruth


@dataclass(frozen=True)
class EvalPoint:
    threshold: float
    precision: float
    recall: float
    n_predicted: int
    n_correct: int
    precision_defaulted: bool = False  # no predictions; precision set to 1.0


@dataclass
class EvalReport:
    points: List[EvalPoint]

    def to_csv(self) -> str:
        lines = ["threshold,precision,recall,n_predicted,n_correct"]
        for p in self.points:
            lines.append(
                f"{p.threshold!r},{p.precision!r},{p.recall!r},"
                f"{p.n_predicted},{p.n_correct}"
            )
        return "\n".join(lines) + "\n"


Prediction = Tuple[str, str, float]  # (ambiguous id, candidate id, probability)


def matrix_predictions(matrix: AlignmentMatrix) -> List[Prediction]:
    """One prediction per row: the mergeable argmax candidate, if any."""
    preds = []
    for node_id in sorted(matrix.rows):
        best = matrix.rows[node_id].best_real()
        if best is not None:
            preds.append((node_id, best.candidate, best.probability))
    return preds


def precision_recall_pairs(
    predictions: Sequence[Prediction],
    truth: GroundTruth,
    thresholds: Sequence[float],
) -> EvalReport:
    """Score predictions against ground truth at each threshold.

    A prediction is correct when its pair appears in the truth in either
    orientation (self-alignment stages emit rows for both sides of a pair).
    Recall counts distinct truth pairs covered; precision counts correct
    predictions, so a pair predicted from both sides is not penalized.
    """
    if not truth.pairs:
        raise EvalError("ground truth is empty; recall is undefined")
    if list(thresholds) != sorted(set(thresholds)):
        raise EvalError("thresholds must be strictly increasing")
    truth_pairs = set(truth.pairs)
    points = []
    for tau in thresholds:
        n_predicted = 0
        n_correct = 0
        covered = set()
        for amb, cand, prob in predictions:
            if prob <= tau:
                continue
            n_predicted += 1
            if (amb, cand) in truth_pairs:
                n_correct += 1
                covered.add((amb, cand))
            elif (cand, amb) in truth_pairs:
                n_correct += 1
                covered.add((cand, amb))
        if n_predicted:
            precision = n_correct / n_predicted
            defaulted = False
        else:
            precision = 1.0  # plottable-curve convention, flagged
            defaulted = True
        recall = len(covered) / len(truth_pairs)
        points.append(
            EvalPoint(tau, precision, recall, n_predicted, n_correct, defaulted)
        )
    return EvalReport(points)


def precision_recall(
    matrix: AlignmentMatrix, truth: GroundTruth, thresholds: Sequence[float]
) -> EvalReport:
    """Precision/recall of a matrix's argmax predictions across thresholds."""
    return precision_recall_pairs(matrix_predictions(matrix), truth, thresholds)


def default_thresholds() -> List[float]:
    """0.05 through 0.95 in steps of 0.05."""
    return [round(0.05 * i, 2) for i in range(1, 20)]
