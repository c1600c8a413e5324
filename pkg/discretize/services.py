"""
Quantile binning of numeric claim features and state encoding
"""
import logging

import numpy as np

from claims.models import NUMERIC_FIELDS
from core.exceptions import ConfigurationError, DatasetValidationError
from .models import UNSEEN, BinningSpec, StateTable

logger = logging.getLogger(__name__)

DEFAULT_BIN_LABELS = {
    'days_stayed': ('short', 'medium', 'long'),
    'net_amount': ('low', 'medium', 'high'),
    'amount_paid_to_hospital': ('low', 'medium', 'high'),
}

DEFAULT_BIN_COUNT = 3


def default_labels(feature, k):
    if k == len(DEFAULT_BIN_LABELS.get(feature, ())):
        return DEFAULT_BIN_LABELS[feature]
    if k == 3:
        return ('low', 'medium', 'high')
    return tuple(f'q{j}' for j in range(1, k + 1))


class QuantileBinner:
    """Equal-count bins at type-1 empirical quantiles"""

    def fit_bins(self, values, k, labels=None, feature=''):
        if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
            raise ConfigurationError(f'{feature or "bins"}: bin count must be a positive integer, got {k!r}')
        labels = tuple(labels) if labels is not None else default_labels(feature, k)
        if len(labels) != k:
            raise ConfigurationError(f'{feature or "bins"}: expected {k} labels, got {len(labels)}')
        ordered = np.sort(np.asarray(values, dtype=float))
        n = ordered.size
        if n == 0:
            raise DatasetValidationError(f'{feature or "bins"}: cannot fit bins on an empty sample')
        if not np.all(np.isfinite(ordered)):
            raise DatasetValidationError(f'{feature or "bins"}: values must be finite')

        # j/k quantile = order statistic ceil(j*n/k) (1-based)
        candidates = [ordered[(j * n + k - 1) // k - 1] for j in range(1, k)]
        bounds = [-np.inf] + candidates + [np.inf]
        largest = ordered[-1]

        kept_labels, kept_uppers = [], []
        for j in range(k):
            lower, upper = bounds[j], bounds[j + 1]
            if lower < upper and lower < largest:
                kept_labels.append(labels[j])
                kept_uppers.append(upper)
        cut_points = tuple(float(c) for c in kept_uppers[:-1])

        if len(kept_labels) < k:
            logger.warning(
                f'{feature or "bins"}: duplicate quantiles collapsed {k} bins into {len(kept_labels)}'
            )
        return BinningSpec(feature=feature, cut_points=cut_points, labels=tuple(kept_labels))


class StateTableBuilder:
    """Numbers distinct category tuples 1..K in first-appearance order"""

    def build(self, tuples, feature_order):
        feature_order = tuple(feature_order)
        index = {}
        for position, state in enumerate(tuples):
            state = tuple(state)
            if len(state) != len(feature_order):
                raise DatasetValidationError(
                    f'category tuple {position} has {len(state)} values, expected {len(feature_order)}'
                )
            if state not in index:
                index[state] = len(index) + 1
        return StateTable(feature_order=feature_order, states=tuple(index))


class ClaimCategorizer:
    """
    Maps claims onto category tuples in ``feature_order``: numeric features go
    through their fitted BinningSpec, categorical features pass through as-is.
    """

    def __init__(self, feature_order, binning):
        self.feature_order = tuple(feature_order)
        self.binning = dict(binning)
        for feature in self.feature_order:
            if feature in NUMERIC_FIELDS and feature not in self.binning:
                raise ConfigurationError(f'numeric feature {feature!r} has no binning spec')

    @classmethod
    def fit(cls, dataset, feature_order, bin_counts=None):
        bin_counts = bin_counts or {}
        binner = QuantileBinner()
        binning = {}
        for feature in feature_order:
            if feature in NUMERIC_FIELDS:
                k = bin_counts.get(feature, DEFAULT_BIN_COUNT)
                binning[feature] = binner.fit_bins(dataset.column(feature), k, feature=feature)
                logger.debug(f'{feature}: cut points {binning[feature].cut_points}')
        return cls(feature_order, binning)

    def categorize_dataset(self, dataset):
        columns = []
        for feature in self.feature_order:
            values = dataset.column(feature)
            if feature in self.binning:
                columns.append(self.binning[feature].apply_many(values))
            else:
                columns.append([str(v) for v in values])
        return [tuple(str(c) for c in row) for row in zip(*columns)] if columns else []

    def categorize(self, record):
        return tuple(
            self.binning[feature].apply(record.value(feature)) if feature in self.binning
            else str(record.value(feature))
            for feature in self.feature_order
        )


def fit_bins(values, k, labels=None, feature=''):
    return QuantileBinner().fit_bins(values, k, labels=labels, feature=feature)


def apply_bins(value, spec):
    return spec.apply(value)


def build_state_table(tuples, feature_order):
    return StateTableBuilder().build(tuples, feature_order)


def encode_state(state, table):
    """Training-time state id, or UNSEEN"""
    return table.state_id(state)


__all__ = [
    'UNSEEN', 'ClaimCategorizer', 'QuantileBinner', 'StateTableBuilder',
    'apply_bins', 'build_state_table', 'encode_state', 'fit_bins',
]
