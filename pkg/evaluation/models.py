"""
Evaluation results: confusion matrix, the five metrics, ROC curve
"""
from dataclasses import dataclass

from core.exceptions import EvaluationError

METRIC_NAMES = ('sensitivity', 'specificity', 'precision', 'accuracy', 'f1')

REPORT_DECIMALS = 4
RAW_SIGNIFICANT_DIGITS = 15


def raw_value(value):
    """Value carried with 15 significant digits, None stays None"""
    return None if value is None else float(f'{value:.{RAW_SIGNIFICANT_DIGITS}g}')


def rounded_value(value):
    return None if value is None else round(value, REPORT_DECIMALS)


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with Fraud as the positive class"""
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        for name in ('tp', 'fp', 'fn', 'tn'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise EvaluationError(f'{name} must be a non-negative integer, got {value!r}')

    @property
    def positives(self):
        return self.tp + self.fn

    @property
    def negatives(self):
        return self.fp + self.tn

    @property
    def total(self):
        return self.tp + self.fp + self.fn + self.tn

    def as_dict(self):
        return {'tp': self.tp, 'fp': self.fp, 'fn': self.fn, 'tn': self.tn}


@dataclass(frozen=True)
class MetricsReport:
    """The five metrics; a metric whose denominator is zero is None (undefined)"""
    sensitivity: float = None
    specificity: float = None
    precision: float = None
    accuracy: float = None
    f1: float = None

    def __post_init__(self):
        for name in METRIC_NAMES:
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise EvaluationError(f'{name} must lie in [0, 1], got {value}')

    def values(self):
        return {name: getattr(self, name) for name in METRIC_NAMES}

    def rounded(self):
        return {name: rounded_value(value) for name, value in self.values().items()}

    def as_dict(self):
        return {
            'raw': {name: raw_value(value) for name, value in self.values().items()},
            'rounded': self.rounded(),
        }


@dataclass(frozen=True)
class RocCurve:
    """
    Points ordered from (0, 0) to (1, 1). ``thresholds[i]`` is the cut whose
    rule ``score > threshold`` yields point i; the last threshold is -inf.
    """
    fpr: tuple
    tpr: tuple
    thresholds: tuple

    def __post_init__(self):
        if not len(self.fpr) == len(self.tpr) == len(self.thresholds) or len(self.fpr) < 2:
            raise EvaluationError('a ROC curve needs at least two points with matching coordinates')

    def __len__(self):
        return len(self.fpr)

    def points(self):
        return list(zip(self.fpr, self.tpr, self.thresholds))


@dataclass(frozen=True)
class EvaluationResult:
    model_name: str
    threshold: float
    confusion: ConfusionMatrix
    metrics: MetricsReport
    curve: RocCurve
    auc: float
    auc_mann_whitney: float
    extras: dict = None
