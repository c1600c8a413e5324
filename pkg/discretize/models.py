"""
Quantile bins and the category-tuple -> state id table
"""
from dataclasses import dataclass, field

import numpy as np

from core.exceptions import DatasetValidationError, ModelFormatError

# Marker returned for category tuples never seen in training; real ids start at 1
UNSEEN = 0


@dataclass(frozen=True)
class BinningSpec:
    """
    Half-open bins (cut[i-1], cut[i]]: a value equal to a cut point falls in the
    lower bin, values below the first cut get the first label and values above
    the last cut get the last label.
    """
    feature: str
    cut_points: tuple
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, 'cut_points', tuple(float(c) for c in self.cut_points))
        object.__setattr__(self, 'labels', tuple(str(label) for label in self.labels))
        if len(self.labels) != len(self.cut_points) + 1:
            raise ModelFormatError(
                f'{self.feature}: {len(self.labels)} labels for {len(self.cut_points)} cut points'
            )
        if any(b <= a for a, b in zip(self.cut_points, self.cut_points[1:])):
            raise ModelFormatError(f'{self.feature}: cut points must be strictly increasing')
        if len(set(self.labels)) != len(self.labels):
            raise ModelFormatError(f'{self.feature}: bin labels must be distinct')

    @property
    def n_bins(self):
        return len(self.labels)

    def apply(self, value):
        index = int(np.searchsorted(self.cut_points, value, side='left'))
        return self.labels[index]

    def apply_many(self, values):
        indices = np.searchsorted(np.asarray(self.cut_points, dtype=float), np.asarray(values, dtype=float), side='left')
        return np.asarray(self.labels, dtype=object)[indices]

    def as_dict(self):
        return {'feature': self.feature, 'cut_points': list(self.cut_points), 'labels': list(self.labels)}

    @classmethod
    def from_dict(cls, data):
        return cls(feature=data['feature'], cut_points=tuple(data['cut_points']), labels=tuple(data['labels']))


@dataclass(frozen=True)
class StateTable:
    """Bijection between category tuples and dense state ids 1..K"""
    feature_order: tuple
    states: tuple = ()
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'feature_order', tuple(self.feature_order))
        object.__setattr__(self, 'states', tuple(tuple(state) for state in self.states))
        index = {}
        for state_id, state in enumerate(self.states, start=1):
            self._check_arity(state)
            if state in index:
                raise ModelFormatError(f'state {state} listed twice (ids {index[state]} and {state_id})')
            index[state] = state_id
        object.__setattr__(self, '_index', index)

    def __len__(self):
        return len(self.states)

    def __contains__(self, state):
        return tuple(state) in self._index

    def _check_arity(self, state):
        if len(state) != len(self.feature_order):
            raise DatasetValidationError(
                f'category tuple {tuple(state)} has {len(state)} values, '
                f'expected {len(self.feature_order)} ({", ".join(self.feature_order)})'
            )

    @property
    def mapping(self):
        return dict(self._index)

    def state_id(self, state):
        state = tuple(state)
        self._check_arity(state)
        return self._index.get(state, UNSEEN)

    def state_tuple(self, state_id):
        if not 1 <= state_id <= len(self.states):
            raise KeyError(state_id)
        return self.states[state_id - 1]

    def as_dict(self):
        return {'feature_order': list(self.feature_order), 'states': [list(state) for state in self.states]}

    @classmethod
    def from_dict(cls, data):
        return cls(feature_order=tuple(data['feature_order']), states=tuple(tuple(s) for s in data['states']))
