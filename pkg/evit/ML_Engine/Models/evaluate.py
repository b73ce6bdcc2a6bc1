from dataclasses import dataclass

import numpy as np
from sklearn.metrics import accuracy_score, confusion_matrix

from evit.errors import ValidationError

QUALITY_COMPONENTS = ("accuracy", "type1", "type2")


@dataclass(frozen=True)
class QualityMeasures:
    """
    Post-transfer prediction quality on a target domain.

    Attributes
    ----------
    accuracy : float
        Fraction of exactly-correct class predictions.
    type1_rate : float
        P(damage declared | truly undamaged), false positives.
    type2_rate : float
        P(undamaged declared | truly damaged), false negatives.
    type1_degenerate, type2_degenerate : bool
        Set when the conditioning class is absent from the truth; the rate
        is then reported as 0.
    """

    accuracy: float
    type1_rate: float
    type2_rate: float
    type1_degenerate: bool = False
    type2_degenerate: bool = False

    def __post_init__(self):
        for name in ("accuracy", "type1_rate", "type2_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {value}")

    @property
    def misclassification_rate(self) -> float:
        return 1.0 - self.accuracy

    def component(self, name: str) -> float:
        return {
            "accuracy": self.accuracy,
            "type1": self.type1_rate,
            "type2": self.type2_rate,
        }[name]

    @property
    def degenerate_flags(self) -> str:
        flags = [n for n, f in (("type1", self.type1_degenerate), ("type2", self.type2_degenerate)) if f]
        return ";".join(flags)


def evaluate_quality(y_pred: np.ndarray, y_true: np.ndarray) -> QualityMeasures:
    """
    Score predictions against true labels.

    Damage indicator d(y) = (y != 0): class 0 is the undamaged state and
    every other class counts as damage.

    Raises
    ------
    ValidationError
        If the vectors are empty or of different lengths.
    """
    y_pred = np.asarray(y_pred, dtype=np.int64)
    y_true = np.asarray(y_true, dtype=np.int64)
    if y_pred.shape != y_true.shape:
        raise ValidationError(
            f"Prediction/truth length mismatch: {y_pred.shape[0]} vs {y_true.shape[0]}"
        )
    if y_true.size == 0:
        raise ValidationError("Cannot evaluate quality on an empty target")

    accuracy = float(accuracy_score(y_true, y_pred))

    d_true = (y_true != 0).astype(int)
    d_pred = (y_pred != 0).astype(int)
    tn, fp, fn, tp = confusion_matrix(d_true, d_pred, labels=[0, 1]).ravel()

    negatives = tn + fp
    positives = fn + tp

    return QualityMeasures(
        accuracy=accuracy,
        type1_rate=float(fp / negatives) if negatives else 0.0,
        type2_rate=float(fn / positives) if positives else 0.0,
        type1_degenerate=bool(negatives == 0),
        type2_degenerate=bool(positives == 0),
    )
