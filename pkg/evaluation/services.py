"""
Confusion matrices, metrics, ROC/AUC and report rendering
"""
import json
import logging

import numpy as np
import pandas as pd
from django.template.loader import render_to_string
from scipy.stats import rankdata

from claims.models import ClaimLabel
from core.exceptions import EvaluationError
from .models import (
    METRIC_NAMES, ConfusionMatrix, EvaluationResult, MetricsReport, RocCurve, raw_value, rounded_value,
)

logger = logging.getLogger(__name__)


def _as_indicator(values, name):
    """0/1 array from ClaimLabel strings, booleans or 0/1 integers (Fraud = 1)"""
    values = list(values)
    if values and all(isinstance(v, str) for v in values):
        unknown = set(values) - set(ClaimLabel.values)
        if unknown:
            raise EvaluationError(f'{name} contain unknown labels {sorted(unknown)}')
        return np.array([v == ClaimLabel.FRAUD for v in values], dtype=np.int8)
    array = np.asarray(values)
    if array.size and not np.isin(array, (0, 1)).all():
        raise EvaluationError(f'{name} must be Fraud/NotFraud labels or 0/1 indicators')
    return array.astype(np.int8)


def confusion(labels, predictions):
    y = _as_indicator(labels, 'labels')
    y_hat = _as_indicator(predictions, 'predictions')
    if y.size != y_hat.size:
        raise EvaluationError(f'{y.size} labels but {y_hat.size} predictions')
    if y.size == 0:
        raise EvaluationError('cannot build a confusion matrix from empty input')
    return ConfusionMatrix(
        tp=int(np.sum((y == 1) & (y_hat == 1))),
        fp=int(np.sum((y == 0) & (y_hat == 1))),
        fn=int(np.sum((y == 1) & (y_hat == 0))),
        tn=int(np.sum((y == 0) & (y_hat == 0))),
    )


def _ratio(numerator, denominator):
    return numerator / denominator if denominator > 0 else None


def metrics(cm):
    return MetricsReport(
        sensitivity=_ratio(cm.tp, cm.tp + cm.fn),
        specificity=_ratio(cm.tn, cm.fp + cm.tn),
        precision=_ratio(cm.tp, cm.tp + cm.fp),
        accuracy=_ratio(cm.tp + cm.tn, cm.total),
        f1=_ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn),
    )


def _check_scored(labels, scores):
    y = _as_indicator(labels, 'labels')
    s = np.asarray(scores, dtype=float)
    if y.shape != s.shape:
        raise EvaluationError(f'{y.size} labels but {s.size} scores')
    if not np.isfinite(s).all():
        raise EvaluationError('scores must be finite')
    if y.sum() == 0 or y.sum() == y.size:
        raise EvaluationError('ROC/AUC need at least one Fraud and one NotFraud label')
    return y, s


def roc(labels, scores):
    """
    One point per distinct score, taken in descending order, plus the -inf
    sentinel. Claims sharing a score enter the positive side together.
    """
    y, s = _check_scored(labels, scores)
    order = np.argsort(-s, kind='stable')
    s_sorted = s[order]
    y_sorted = y[order].astype(np.int64)
    group_ends = np.r_[np.flatnonzero(np.diff(s_sorted) != 0), s_sorted.size - 1]
    tp = np.cumsum(y_sorted)[group_ends]
    fp = np.cumsum(1 - y_sorted)[group_ends]
    positives, negatives = tp[-1], fp[-1]

    fpr = np.r_[0, fp] / negatives
    tpr = np.r_[0, tp] / positives
    thresholds = np.r_[s_sorted[group_ends], -np.inf]
    return RocCurve(
        fpr=tuple(float(v) for v in fpr),
        tpr=tuple(float(v) for v in tpr),
        thresholds=tuple(float(v) for v in thresholds),
    )


def auc(curve_or_labels, scores=None):
    """Trapezoidal area under a RocCurve, or under roc(labels, scores)"""
    curve = curve_or_labels if scores is None else roc(curve_or_labels, scores)
    if not isinstance(curve, RocCurve):
        raise EvaluationError('auc expects a RocCurve or labels together with scores')
    x = np.asarray(curve.fpr)
    y = np.asarray(curve.tpr)
    return float(np.sum(np.diff(x) * (y[1:] + y[:-1]) / 2.0))


def mann_whitney_auc(labels, scores):
    """P(score of a fraud > score of a non-fraud) + half the tie probability"""
    y, s = _check_scored(labels, scores)
    ranks = rankdata(s)
    n_pos = int(y.sum())
    n_neg = y.size - n_pos
    u = ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def predict_labels(scores, threshold=0.5):
    """Fraud (1) iff score > threshold"""
    return (np.asarray(scores, dtype=float) > threshold).astype(np.int8)


class EvaluationService:
    """Scores to a full EvaluationResult plus its file renderings"""

    def evaluate(self, labels, scores, threshold=0.5, model_name='model', extras=None):
        y = _as_indicator(labels, 'labels')
        predicted = predict_labels(scores, threshold)
        cm = confusion(y, predicted)
        report = metrics(cm)
        curve = roc(y, scores)
        area = auc(curve)
        area_mw = mann_whitney_auc(y, scores)
        if abs(area - area_mw) > 1e-9:
            logger.warning(f'{model_name}: trapezoid AUC {area} differs from Mann-Whitney AUC {area_mw}')
        logger.info(
            f'{model_name}: accuracy {rounded_value(report.accuracy)}, '
            f'F1 {rounded_value(report.f1)}, AUC {rounded_value(area)}'
        )
        return EvaluationResult(
            model_name=model_name,
            threshold=float(threshold),
            confusion=cm,
            metrics=report,
            curve=curve,
            auc=area,
            auc_mann_whitney=area_mw,
            extras=dict(extras or {}),
        )

    def report_dict(self, result):
        return {
            'model': result.model_name,
            'threshold': result.threshold,
            'confusion_matrix': result.confusion.as_dict(),
            'metrics': result.metrics.as_dict(),
            'auc': {'raw': raw_value(result.auc), 'rounded': rounded_value(result.auc)},
            'auc_mann_whitney': raw_value(result.auc_mann_whitney),
            'roc_points': len(result.curve),
            'extras': result.extras or {},
        }

    def render_text(self, result):
        return render_to_string('evaluation/metrics_report.txt', {
            'result': result,
            'rows': _metric_rows(result.metrics.values(), result.auc),
        })

    def compare_dict(self, markov_result, gbm_result):
        markov_values = dict(markov_result.metrics.values(), auc=markov_result.auc)
        gbm_values = dict(gbm_result.metrics.values(), auc=gbm_result.auc)
        return {
            'models': [markov_result.model_name, gbm_result.model_name],
            'threshold': [markov_result.threshold, gbm_result.threshold],
            'confusion_matrix': {
                markov_result.model_name: markov_result.confusion.as_dict(),
                gbm_result.model_name: gbm_result.confusion.as_dict(),
            },
            'metrics': {
                name: {
                    markov_result.model_name: _value_pair(markov_values[name]),
                    gbm_result.model_name: _value_pair(gbm_values[name]),
                    'delta': _value_pair(_delta(gbm_values[name], markov_values[name])),
                }
                for name in METRIC_NAMES + ('auc',)
            },
        }

    def render_compare_text(self, markov_result, gbm_result):
        markov_values = dict(markov_result.metrics.values(), auc=markov_result.auc)
        gbm_values = dict(gbm_result.metrics.values(), auc=gbm_result.auc)
        rows = []
        for name in METRIC_NAMES + ('auc',):
            delta = _delta(gbm_values[name], markov_values[name])
            rows.append({
                'name': name,
                'left': _fmt(markov_values[name]),
                'left_raw': _fmt_raw(markov_values[name]),
                'right': _fmt(gbm_values[name]),
                'right_raw': _fmt_raw(gbm_values[name]),
                'delta': _fmt(delta, signed=True),
                'delta_raw': _fmt_raw(delta),
            })
        return render_to_string('evaluation/compare_report.txt', {
            'left': markov_result,
            'right': gbm_result,
            'rows': rows,
        })

    def write_roc_points(self, curve, path):
        frame = pd.DataFrame({'fpr': curve.fpr, 'tpr': curve.tpr, 'threshold': curve.thresholds})
        frame.to_csv(path, index=False, lineterminator='\n', float_format='%.15g')

    def write_predictions(self, claim_ids, labels, scores, threshold, path):
        y = _as_indicator(labels, 'labels')
        predicted = predict_labels(scores, threshold)
        frame = pd.DataFrame({
            'claim_id': list(claim_ids),
            'label': np.where(y == 1, ClaimLabel.FRAUD.value, ClaimLabel.NOT_FRAUD.value),
            'score': np.asarray(scores, dtype=float),
            'prediction': np.where(predicted == 1, ClaimLabel.FRAUD.value, ClaimLabel.NOT_FRAUD.value),
        })
        frame.to_csv(path, index=False, lineterminator='\n', float_format='%.15g')


def _delta(right, left):
    if right is None or left is None:
        return None
    return right - left


def _value_pair(value):
    return {'raw': raw_value(value), 'rounded': rounded_value(value)}


def _fmt(value, signed=False):
    if value is None:
        return 'undefined'
    return f'{value:+.4f}' if signed else f'{value:.4f}'


def _fmt_raw(value):
    return 'undefined' if value is None else f'{value:.15g}'


def _metric_rows(values, area):
    rows = [{'name': name, 'rounded': _fmt(value), 'raw': _fmt_raw(value)} for name, value in values.items()]
    rows.append({'name': 'auc', 'rounded': _fmt(area), 'raw': _fmt_raw(area)})
    return rows


def dump_json(data):
    """Stable JSON text: sorted keys, 2-space indent, trailing newline"""
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + '\n'
