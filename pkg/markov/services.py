"""
Fitting and scoring of the Markov fraud model
"""
import logging
import math
from collections import Counter, namedtuple

import numpy as np

from claims.models import ClaimLabel
from core.exceptions import ConfigurationError, TrainingError
from discretize.models import UNSEEN
from discretize.services import ClaimCategorizer, StateTableBuilder
from .models import MARKOV_FEATURES, MarkovFraudModel, StateFraudStats, TransitionTable

logger = logging.getLogger(__name__)

ChainScore = namedtuple('ChainScore', ['joint', 'normalized'])

SCORE_MODES = ('state', 'chain')


def validate_alpha(alpha):
    if isinstance(alpha, bool) or not isinstance(alpha, (int, float)) or not math.isfinite(alpha) or alpha < 0:
        raise ConfigurationError(f'smoothing alpha must be a finite number >= 0, got {alpha!r}')
    return float(alpha)


def validate_threshold(threshold):
    if isinstance(threshold, bool) or not isinstance(threshold, (int, float)) or not 0 <= threshold <= 1:
        raise ConfigurationError(f'threshold must lie in [0, 1], got {threshold!r}')
    return float(threshold)


class MarkovTrainer:
    """Smoothed relative frequencies over the feature chain and per state"""

    def __init__(self, alpha=1.0, threshold=0.5):
        self.alpha = validate_alpha(alpha)
        self.threshold = validate_threshold(threshold)

    def fit(self, tuples, labels, feature_order, binning=None):
        tuples = [tuple(t) for t in tuples]
        labels = np.asarray(labels, dtype=np.int64)
        feature_order = tuple(feature_order)
        n = len(tuples)
        if n == 0:
            raise TrainingError('cannot fit a Markov model on an empty training set')
        if labels.shape != (n,):
            raise TrainingError(f'{n} category tuples but {labels.size} labels')
        if not np.isin(labels, (0, 1)).all():
            raise TrainingError('labels must be 0 (not fraud) or 1 (fraud)')
        alpha = self.alpha

        table = StateTableBuilder().build(tuples, feature_order)
        categories = tuple(tuple(dict.fromkeys(t[i] for t in tuples)) for i in range(len(feature_order)))

        initial_counts = Counter(t[0] for t in tuples)
        initial = {
            v: (initial_counts[v] + alpha) / (n + alpha * len(categories[0]))
            for v in categories[0]
        }

        transitions = []
        for i in range(len(feature_order) - 1):
            pair_counts = Counter((t[i], t[i + 1]) for t in tuples)
            row_totals = Counter(t[i] for t in tuples)
            targets = categories[i + 1]
            probabilities = {
                a: {
                    b: (pair_counts[(a, b)] + alpha) / (row_totals[a] + alpha * len(targets))
                    for b in targets
                }
                for a in categories[i]
            }
            transitions.append(TransitionTable(
                from_feature=feature_order[i],
                to_feature=feature_order[i + 1],
                row_totals={a: row_totals[a] for a in categories[i]},
                probabilities=probabilities,
            ))

        state_ids = np.fromiter((table.state_id(t) for t in tuples), dtype=np.int64, count=n)
        totals = np.bincount(state_ids, minlength=len(table) + 1)[1:]
        frauds = np.bincount(state_ids, weights=labels, minlength=len(table) + 1)[1:]
        state_stats = tuple(
            StateFraudStats(
                fraud_count=int(f),
                total_count=int(t),
                probability=(int(f) + alpha) / (int(t) + 2 * alpha),
            )
            for f, t in zip(frauds, totals)
        )

        model = MarkovFraudModel(
            feature_order=feature_order,
            categories=categories,
            initial_counts={v: initial_counts[v] for v in categories[0]},
            initial=initial,
            transitions=tuple(transitions),
            state_table=table,
            state_stats=state_stats,
            binning=dict(binning or {}),
            alpha=alpha,
            prior=float(labels.sum()) / n,
            threshold=self.threshold,
            n_train=n,
        )
        logger.info(f'Fitted Markov model: {n} claims, {model.n_states} states, prior={model.prior:.4f}')
        return model

    def fit_dataset(self, dataset, feature_order=MARKOV_FEATURES, bin_counts=None):
        categorizer = ClaimCategorizer.fit(dataset, feature_order, bin_counts)
        tuples = categorizer.categorize_dataset(dataset)
        return self.fit(tuples, dataset.labels(), feature_order, binning=categorizer.binning)


class MarkovScorer:
    """Scores claims against a fitted MarkovFraudModel"""

    def __init__(self, model):
        self.model = model

    def score_state(self, state_id):
        return self.model.fraud_probability(state_id)

    def score_chain(self, state):
        model = self.model
        state = tuple(state)
        state_id = model.state_table.state_id(state)

        prefix = model.initial_probability(state[0])
        for i in range(len(state) - 1):
            prefix *= model.transition_probability(i, state[i], state[i + 1])

        fraud = self.score_state(state_id)
        joint = prefix * fraud
        complement = prefix * (1.0 - fraud)
        total = joint + complement
        normalized = joint / total if total > 0 else fraud
        return ChainScore(joint=joint, normalized=normalized)

    def state_ids(self, dataset):
        tuples = self.model.categorizer().categorize_dataset(dataset)
        return np.fromiter((self.model.state_table.state_id(t) for t in tuples), dtype=np.int64, count=len(tuples))

    def score_dataset(self, dataset, mode='state'):
        if mode not in SCORE_MODES:
            raise ConfigurationError(f'unknown Markov score mode {mode!r}, expected one of {SCORE_MODES}')
        if mode == 'state':
            lookup = np.array([self.model.prior] + [s.probability for s in self.model.state_stats])
            scores = lookup[self.state_ids(dataset)]
        else:
            tuples = self.model.categorizer().categorize_dataset(dataset)
            scores = np.array([self.score_chain(t).normalized for t in tuples], dtype=float)
        return scores

    def unseen_share(self, dataset):
        ids = self.state_ids(dataset)
        return float(np.mean(ids == UNSEEN)) if ids.size else 0.0


def fit_markov(tuples, labels, feature_order, alpha=1.0, binning=None, threshold=0.5):
    return MarkovTrainer(alpha=alpha, threshold=threshold).fit(tuples, labels, feature_order, binning=binning)


def score_state(model, state_id):
    return MarkovScorer(model).score_state(state_id)


def score_chain(model, state):
    return MarkovScorer(model).score_chain(state)


def classify(score, threshold=0.5):
    """Fraud iff score > threshold"""
    return ClaimLabel.FRAUD if score > threshold else ClaimLabel.NOT_FRAUD
