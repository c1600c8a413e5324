"""
Gradient boosting types: hyperparameters, feature encoding, trees, model, CV report
"""
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from django.conf import settings
from scipy.special import expit

from claims.models import CATEGORICAL_FIELDS, Dataset
from core.exceptions import ConfigurationError, ModelFormatError
from core.rng import validate_seed
from markov.models import MARKOV_FEATURES

GBM_FEATURES = MARKOV_FEATURES + ('provider_id', 'hospital_district', 'amount_paid_to_hospital')

# Reserved ordinal code for categories not seen while fitting the encoding
UNSEEN_CODE = -1

# Probabilities are kept inside [PROB_EPS, 1 - PROB_EPS]
PROB_EPS = 1e-15


def _is_int(value):
    return isinstance(value, (int, np.integer)) and not isinstance(value, bool)


@dataclass(frozen=True)
class GbmHyperparams:
    n_trees: int = 300
    max_depth: int = 5
    learning_rate: float = 0.1
    cv_folds: int = 10
    min_leaf_count: int = 10
    seed: int = 7

    def __post_init__(self):
        if not _is_int(self.n_trees) or self.n_trees < 0:
            raise ConfigurationError(f'n_trees must be an integer >= 0, got {self.n_trees!r}')
        if not _is_int(self.max_depth) or self.max_depth < 1:
            raise ConfigurationError(f'max_depth must be an integer >= 1, got {self.max_depth!r}')
        if isinstance(self.learning_rate, bool) or not isinstance(self.learning_rate, (int, float)) \
                or not math.isfinite(self.learning_rate) or self.learning_rate < 0:
            raise ConfigurationError(f'learning_rate must be a finite number >= 0, got {self.learning_rate!r}')
        if not _is_int(self.cv_folds) or self.cv_folds == 1 or self.cv_folds < 0:
            raise ConfigurationError(f'cv_folds must be 0 (no CV) or >= 2, got {self.cv_folds!r}')
        if not _is_int(self.min_leaf_count) or self.min_leaf_count < 1:
            raise ConfigurationError(f'min_leaf_count must be an integer >= 1, got {self.min_leaf_count!r}')
        validate_seed(self.seed)

    @classmethod
    def from_settings(cls, **overrides):
        values = {
            'n_trees': getattr(settings, 'FRAUDLAB_GBM_TREES', 300),
            'max_depth': getattr(settings, 'FRAUDLAB_GBM_DEPTH', 5),
            'learning_rate': getattr(settings, 'FRAUDLAB_GBM_LEARNING_RATE', 0.1),
            'cv_folds': getattr(settings, 'FRAUDLAB_GBM_CV_FOLDS', 10),
            'min_leaf_count': getattr(settings, 'FRAUDLAB_GBM_MIN_LEAF', 10),
            'seed': getattr(settings, 'FRAUDLAB_SEED', 7),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class FeatureEncoding:
    """
    Numeric features pass through; categorical features become ordinal codes in
    first-appearance order (or indicator columns with ``one_hot``).
    """
    feature_names: tuple
    categories: dict
    one_hot: bool = False

    @classmethod
    def fit(cls, claims, feature_names, one_hot=False):
        dataset = claims if isinstance(claims, Dataset) else Dataset(records=tuple(claims))
        categories = {
            feature: tuple(dict.fromkeys(str(v) for v in dataset.column(feature)))
            for feature in feature_names if feature in CATEGORICAL_FIELDS
        }
        return cls(feature_names=tuple(feature_names), categories=categories, one_hot=one_hot)

    @property
    def columns(self):
        names = []
        for feature in self.feature_names:
            if feature in self.categories and self.one_hot:
                names.extend(f'{feature}={category}' for category in self.categories[feature])
            else:
                names.append(feature)
        return tuple(names)

    @property
    def column_features(self):
        """Raw feature behind every encoded column"""
        owners = []
        for feature in self.feature_names:
            if feature in self.categories and self.one_hot:
                owners.extend([feature] * len(self.categories[feature]))
            else:
                owners.append(feature)
        return tuple(owners)

    def encode(self, claims):
        dataset = claims if isinstance(claims, Dataset) else Dataset(records=tuple(claims))
        blocks = []
        for feature in self.feature_names:
            values = dataset.column(feature)
            if feature not in self.categories:
                blocks.append(np.asarray(values, dtype=float).reshape(-1, 1))
                continue
            lookup = {category: code for code, category in enumerate(self.categories[feature])}
            codes = np.fromiter((lookup.get(str(v), UNSEEN_CODE) for v in values), dtype=np.int64, count=len(values))
            if self.one_hot:
                indicator = np.zeros((len(values), len(lookup)), dtype=float)
                seen = codes != UNSEEN_CODE
                indicator[np.flatnonzero(seen), codes[seen]] = 1.0
                blocks.append(indicator)
            else:
                blocks.append(codes.astype(float).reshape(-1, 1))
        if not blocks:
            return np.empty((len(dataset), 0))
        return np.hstack(blocks)

    def as_dict(self):
        return {
            'feature_names': list(self.feature_names),
            'categories': {feature: list(values) for feature, values in self.categories.items()},
            'one_hot': self.one_hot,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            feature_names=tuple(data['feature_names']),
            categories={feature: tuple(values) for feature, values in data['categories'].items()},
            one_hot=bool(data['one_hot']),
        )


@dataclass(frozen=True)
class RegressionTree:
    """
    Flattened binary tree, nodes in preorder with the root at index 0.
    Internal nodes route ``x[feature] <= threshold`` to ``left``; leaves have
    feature -1 and carry ``value``.
    """
    feature: tuple
    threshold: tuple
    left: tuple
    right: tuple
    value: tuple
    gain: tuple
    _arrays: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ('feature', 'left', 'right'):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))
        for name in ('threshold', 'value', 'gain'):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        n_nodes = len(self.feature)
        if n_nodes == 0 or any(len(getattr(self, name)) != n_nodes
                               for name in ('threshold', 'left', 'right', 'value', 'gain')):
            raise ModelFormatError('tree arrays must be non-empty and of equal length')

        # every non-root node must be the child of exactly one internal node
        parents = [0] * n_nodes
        for node, f in enumerate(self.feature):
            if f >= 0:
                for child in (self.left[node], self.right[node]):
                    if not node < child < n_nodes:
                        raise ModelFormatError(f'node {node} has invalid child {child}')
                    parents[child] += 1
        if parents[0] != 0 or any(count != 1 for count in parents[1:]):
            raise ModelFormatError('tree nodes must form a single rooted tree')

        object.__setattr__(self, '_arrays', {
            'feature': np.asarray(self.feature, dtype=np.int64),
            'threshold': np.asarray(self.threshold, dtype=float),
            'left': np.asarray(self.left, dtype=np.int64),
            'right': np.asarray(self.right, dtype=np.int64),
            'value': np.asarray(self.value, dtype=float),
        })

    @property
    def n_nodes(self):
        return len(self.feature)

    @property
    def depth(self):
        depths = [0] * self.n_nodes
        for node, f in enumerate(self.feature):
            if f >= 0:
                depths[self.left[node]] = depths[self.right[node]] = depths[node] + 1
        return max(depths)

    def leaves(self):
        return [node for node, f in enumerate(self.feature) if f < 0]

    def apply(self, X):
        """Leaf index reached by every row of X"""
        arrays = self._arrays
        X = np.asarray(X, dtype=float)
        node = np.zeros(X.shape[0], dtype=np.int64)
        for _ in range(self.depth):
            features = arrays['feature'][node]
            active = np.flatnonzero(features >= 0)
            if active.size == 0:
                break
            current = node[active]
            go_left = X[active, features[active]] <= arrays['threshold'][current]
            node[active] = np.where(go_left, arrays['left'][current], arrays['right'][current])
        return node

    def predict(self, X):
        return self._arrays['value'][self.apply(X)]

    def as_dict(self):
        return {
            'feature': list(self.feature),
            'threshold': list(self.threshold),
            'left': list(self.left),
            'right': list(self.right),
            'value': list(self.value),
            'gain': list(self.gain),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(**{name: tuple(data[name]) for name in ('feature', 'threshold', 'left', 'right', 'value', 'gain')})


@dataclass(frozen=True)
class GbmModel:
    f0: float
    learning_rate: float
    trees: tuple
    encoding: FeatureEncoding
    best_iteration: int
    hyperparams: GbmHyperparams
    threshold: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, 'trees', tuple(self.trees))
        if not 0 <= self.best_iteration <= len(self.trees):
            raise ModelFormatError(
                f'best_iteration {self.best_iteration} outside [0, {len(self.trees)}]'
            )

    @property
    def n_trees(self):
        return len(self.trees)

    def raw_scores(self, X, n_iterations=None):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != len(self.encoding.columns):
            raise ModelFormatError(
                f'rows have {X.shape[1]} columns, the model expects {len(self.encoding.columns)}'
            )
        n_iterations = self.best_iteration if n_iterations is None else n_iterations
        total = np.zeros(X.shape[0])
        for tree in self.trees[:n_iterations]:
            total += tree.predict(X)
        return self.f0 + self.learning_rate * total

    def predict_proba(self, X, n_iterations=None):
        return np.clip(expit(self.raw_scores(X, n_iterations)), PROB_EPS, 1.0 - PROB_EPS)

    def relative_influence(self, n_iterations=None):
        """Summed split gain per raw feature over the used trees, scaled to sum to 100"""
        n_iterations = self.best_iteration if n_iterations is None else n_iterations
        owners = self.encoding.column_features
        totals = dict.fromkeys(self.encoding.feature_names, 0.0)
        for tree in self.trees[:n_iterations]:
            for f, gain in zip(tree.feature, tree.gain):
                if f >= 0:
                    totals[owners[f]] += gain
        grand_total = sum(totals.values())
        if grand_total <= 0:
            return totals
        return {feature: 100.0 * value / grand_total for feature, value in totals.items()}


@dataclass(frozen=True)
class CvReport:
    mean_deviance: tuple
    fold_deviance: tuple
    fold_sizes: tuple
    best_iteration: int

    @property
    def folds(self):
        return len(self.fold_sizes)

    def as_dict(self):
        return {
            'best_iteration': self.best_iteration,
            'fold_sizes': list(self.fold_sizes),
            'mean_deviance': list(self.mean_deviance),
            'fold_deviance': [list(curve) for curve in self.fold_deviance],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            mean_deviance=tuple(data['mean_deviance']),
            fold_deviance=tuple(tuple(curve) for curve in data['fold_deviance']),
            fold_sizes=tuple(data['fold_sizes']),
            best_iteration=data['best_iteration'],
        )
