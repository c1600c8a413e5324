"""
Gradient boosting on Bernoulli deviance, cross-validation and helpers
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from core.exceptions import ConfigurationError, TrainingError
from core.rng import make_rng
from .models import GBM_FEATURES, PROB_EPS, CvReport, FeatureEncoding, GbmHyperparams, GbmModel, RegressionTree
from .tree import ExactSplitFinder, TreeGrower

logger = logging.getLogger(__name__)

# Newton denominators below this are clamped
MIN_HESSIAN = 1e-12
MAX_STEP_HALVINGS = 30


def bernoulli_deviance(labels, probs):
    """Mean of -2[y ln p + (1 - y) ln(1 - p)] with p clamped to [1e-15, 1 - 1e-15]"""
    y = np.asarray(labels, dtype=float)
    p = np.asarray(probs, dtype=float)
    if y.shape != p.shape:
        raise TrainingError(f'{y.size} labels but {p.size} probabilities')
    if y.size == 0:
        raise TrainingError('deviance of an empty sample is undefined')
    return float(_deviance_terms(y, p).mean())


def _deviance_terms(y, p):
    p = np.clip(p, PROB_EPS, 1.0 - PROB_EPS)
    return -2.0 * (y * np.log(p) + (1.0 - y) * np.log1p(-p))


def negative_gradient(labels, raw_scores):
    """Negative gradient of the mean deviance with respect to each raw score: 2(y - p)/n"""
    y = np.asarray(labels, dtype=float)
    return 2.0 * (y - expit(np.asarray(raw_scores, dtype=float))) / y.size


def encode_features(claims, encoding):
    return encoding.encode(claims)


def _check_training_input(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.ndim != 2:
        raise TrainingError(f'feature matrix must be 2-dimensional, got shape {X.shape}')
    if X.shape[0] == 0:
        raise TrainingError('cannot fit a GBM on an empty training set')
    if y.shape != (X.shape[0],):
        raise TrainingError(f'{X.shape[0]} rows but {y.size} labels')
    if not np.isin(y, (0, 1)).all():
        raise TrainingError('labels must be 0 (not fraud) or 1 (fraud)')
    if not np.isfinite(X).all():
        bad_row, bad_col = np.argwhere(~np.isfinite(X))[0]
        raise TrainingError(f'non-finite feature value at row {bad_row}, column {bad_col}')
    base_rate = y.mean()
    if base_rate in (0.0, 1.0):
        raise TrainingError('labels are all identical; initial log-odds would be infinite')
    return X, y.astype(float)


@dataclass
class BoostingHistory:
    """Deviance after every boosting iteration (index m-1 holds the value after m trees)"""
    initial_deviance: float
    train_deviance: list = field(default_factory=list)
    eval_deviance: list = field(default_factory=list)


class GradientBoostingTrainer:
    """
    Friedman-style logistic boosting: every tree is a least-squares fit to the
    residuals y - p, and every leaf takes one Newton step sum(r)/sum(p(1-p)).
    A leaf step whose shrunken update would raise that leaf's deviance is halved
    (at most ``MAX_STEP_HALVINGS`` times, then set to 0), so the training
    deviance never increases.
    """

    def __init__(self, hyperparams=None):
        self.hyperparams = hyperparams or GbmHyperparams.from_settings()

    def fit(self, X, y, encoding=None, eval_set=None, threshold=0.5):
        hp = self.hyperparams
        X, y = _check_training_input(X, y)
        if encoding is None:
            encoding = FeatureEncoding(feature_names=tuple(f'x{i}' for i in range(X.shape[1])), categories={})
        if len(encoding.columns) != X.shape[1]:
            raise TrainingError(f'encoding has {len(encoding.columns)} columns but the matrix has {X.shape[1]}')

        base_rate = y.mean()
        f0 = math.log(base_rate / (1.0 - base_rate))
        nu = float(hp.learning_rate)
        raw = np.full(y.size, f0)
        history = BoostingHistory(initial_deviance=float(_deviance_terms(y, expit(raw)).mean()))

        if eval_set is not None:
            X_eval, y_eval = np.asarray(eval_set[0], dtype=float), np.asarray(eval_set[1], dtype=float)
            raw_eval = np.full(y_eval.size, f0)

        grower = TreeGrower(ExactSplitFinder(X), hp.max_depth, hp.min_leaf_count)
        trees = []
        for m in range(1, hp.n_trees + 1):
            p = expit(raw)
            residuals = y - p
            hessians = p * (1.0 - p)
            nodes, leaf_rows = grower.grow(residuals)

            values = [0.0] * len(nodes['feature'])
            for leaf, rows in leaf_rows.items():
                values[leaf] = self._leaf_value(rows, y, raw, residuals, hessians, nu)
                raw[rows] += nu * values[leaf]

            tree = RegressionTree(value=tuple(values), **{k: tuple(v) for k, v in nodes.items()})
            trees.append(tree)
            history.train_deviance.append(float(_deviance_terms(y, expit(raw)).mean()))
            if eval_set is not None:
                raw_eval += nu * tree.predict(X_eval)
                history.eval_deviance.append(float(_deviance_terms(y_eval, expit(raw_eval)).mean()))

            if m % 50 == 0:
                logger.debug(f'Iteration {m}/{hp.n_trees}: train deviance {history.train_deviance[-1]:.6f}')

        model = GbmModel(
            f0=f0,
            learning_rate=nu,
            trees=tuple(trees),
            encoding=encoding,
            best_iteration=len(trees),
            hyperparams=hp,
            threshold=threshold,
        )
        return model, history

    @staticmethod
    def _leaf_value(rows, y, raw, residuals, hessians, nu):
        gamma = residuals[rows].sum() / max(hessians[rows].sum(), MIN_HESSIAN)
        if nu == 0.0 or gamma == 0.0:
            return float(gamma)
        y_leaf, raw_leaf = y[rows], raw[rows]
        before = _deviance_terms(y_leaf, expit(raw_leaf)).sum()
        for _ in range(MAX_STEP_HALVINGS):
            if _deviance_terms(y_leaf, expit(raw_leaf + nu * gamma)).sum() <= before:
                return float(gamma)
            gamma /= 2.0
        return 0.0


class CrossValidator:
    """Seeded, unstratified k-fold CV over the boosting iterations"""

    def __init__(self, hyperparams=None):
        self.hyperparams = hyperparams or GbmHyperparams.from_settings()

    def folds(self, n):
        k = self.hyperparams.cv_folds
        permutation = make_rng(self.hyperparams.seed).permutation(n)
        return np.array_split(permutation, k)

    def run(self, X, y):
        hp = self.hyperparams
        X, y = _check_training_input(X, y)
        k = hp.cv_folds
        if k < 2:
            raise ConfigurationError(f'cross-validation needs cv_folds >= 2, got {k}')
        distinct_rows = np.unique(X, axis=0).shape[0]
        if k > distinct_rows:
            raise TrainingError(f'too few rows for {k}-fold CV: {distinct_rows} distinct rows')

        trainer = GradientBoostingTrainer(hp)
        folds = self.folds(y.size)
        curves = []
        for i, held_out in enumerate(folds):
            train_rows = np.concatenate([fold for j, fold in enumerate(folds) if j != i])
            y_train = y[train_rows]
            if y_train.min() == y_train.max():
                raise TrainingError(f'fold {i + 1}: training part has a single class')
            _, history = trainer.fit(X[train_rows], y_train, eval_set=(X[held_out], y[held_out]))
            curves.append(tuple(history.eval_deviance))
            logger.debug(f'CV fold {i + 1}/{k} done ({held_out.size} held-out rows)')

        if hp.n_trees == 0:
            mean_curve = ()
            best_iteration = 0
        else:
            mean_curve = tuple(float(v) for v in np.mean(np.asarray(curves), axis=0))
            best_iteration = int(np.argmin(mean_curve)) + 1
        return CvReport(
            mean_deviance=mean_curve,
            fold_deviance=tuple(curves),
            fold_sizes=tuple(int(fold.size) for fold in folds),
            best_iteration=best_iteration,
        )


class GbmTrainingService:
    """
    Encodes a claim dataset, runs CV (when cv_folds >= 2) and fits the final
    model on the whole training set. ``use_all_trees`` keeps every tree for
    scoring instead of cutting at the CV-selected iteration.
    """

    def __init__(self, hyperparams=None, feature_names=GBM_FEATURES, one_hot=False, threshold=0.5):
        self.hyperparams = hyperparams or GbmHyperparams.from_settings()
        self.feature_names = tuple(feature_names)
        self.one_hot = one_hot
        self.threshold = threshold

    def train(self, dataset, use_all_trees=False):
        hp = self.hyperparams
        if len(dataset) == 0:
            raise TrainingError('cannot fit a GBM on an empty training set')
        encoding = FeatureEncoding.fit(dataset, self.feature_names, one_hot=self.one_hot)
        X = encoding.encode(dataset)
        y = dataset.labels()
        logger.info(
            f'Training GBM on {X.shape[0]} rows x {X.shape[1]} columns '
            f'({hp.n_trees} trees, depth {hp.max_depth}, learning rate {hp.learning_rate})'
        )

        cv_report = None
        if hp.cv_folds >= 2:
            cv_report = CrossValidator(hp).run(X, y)
            logger.info(f'CV best iteration: {cv_report.best_iteration}')

        model, history = GradientBoostingTrainer(hp).fit(X, y, encoding=encoding, threshold=self.threshold)
        if cv_report is not None and not use_all_trees:
            model = GbmModel(
                f0=model.f0,
                learning_rate=model.learning_rate,
                trees=model.trees,
                encoding=model.encoding,
                best_iteration=cv_report.best_iteration,
                hyperparams=model.hyperparams,
                threshold=model.threshold,
            )
        logger.info(f'GBM trained: scoring with {model.best_iteration} of {model.n_trees} trees')
        return model, history, cv_report

    def score(self, model, dataset, n_iterations=None):
        return model.predict_proba(model.encoding.encode(dataset), n_iterations=n_iterations)


def fit_gbm(X, y, hp=None, encoding=None):
    model, _ = GradientBoostingTrainer(hp).fit(X, y, encoding=encoding)
    return model


def predict_proba(model, row):
    """Fraud probability for one encoded row"""
    row = np.asarray(row, dtype=float)
    if row.ndim != 1:
        raise TrainingError(f'expected a single encoded row, got shape {row.shape}')
    return float(model.predict_proba(row.reshape(1, -1))[0])


def cross_validate(X, y, hp=None):
    return CrossValidator(hp).run(X, y)
