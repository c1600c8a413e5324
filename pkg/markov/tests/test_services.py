from collections import defaultdict

import numpy as np
from django.test import SimpleTestCase

from claims.models import ClaimLabel
from claims.tests.factories import random_dataset
from core.exceptions import ConfigurationError, TrainingError
from discretize.models import UNSEEN
from evaluation.services import confusion, roc
from markov.models import MARKOV_FEATURES
from markov.services import MarkovScorer, MarkovTrainer, classify, fit_markov, score_chain, score_state

FEATURES = ('f1', 'f2', 'f3')


def random_corpus(rng, n):
    tuples = [
        (f'a{rng.integers(3)}', f'b{rng.integers(4)}', f'c{rng.integers(2)}')
        for _ in range(n)
    ]
    labels = (rng.random(n) < 0.3).astype(int)
    return tuples, labels


class FitMarkovTests(SimpleTestCase):
    def setUp(self):
        # state ('A', 'x', 'p') has 3 claims, 2 of them fraud
        self.tuples = [('A', 'x', 'p'), ('A', 'x', 'p'), ('A', 'x', 'p'), ('B', 'y', 'q')]
        self.labels = [1, 1, 0, 0]

    def test_unsmoothed_state_probability(self):
        model = fit_markov(self.tuples, self.labels, FEATURES, alpha=0)
        self.assertEqual(score_state(model, 1), 2 / 3)

    def test_smoothed_state_probability(self):
        model = fit_markov(self.tuples, self.labels, FEATURES, alpha=1)
        self.assertAlmostEqual(score_state(model, 1), 0.6, places=15)

    def test_single_claim_corpus(self):
        for label in (0, 1):
            model = fit_markov([('A', 'x', 'p')], [label], FEATURES, alpha=0)
            self.assertEqual(score_state(model, 1), float(label))

    def test_unseen_scores_at_prior(self):
        model = fit_markov(self.tuples, self.labels, FEATURES, alpha=1)
        self.assertEqual(score_state(model, UNSEEN), 0.5)
        self.assertEqual(model.prior, 0.5)

    def test_complement(self):
        model = fit_markov(self.tuples, self.labels, FEATURES, alpha=1)
        for stats in model.state_stats:
            self.assertAlmostEqual(stats.probability + stats.not_fraud_probability, 1.0, places=15)

    def test_errors(self):
        with self.assertRaises(TrainingError):
            fit_markov([], [], FEATURES)
        with self.assertRaises(ConfigurationError):
            fit_markov(self.tuples, self.labels, FEATURES, alpha=-0.5)
        with self.assertRaises(TrainingError):
            fit_markov(self.tuples, [1, 0], FEATURES)

    def test_distribution_rows_sum_to_one(self):
        rng = np.random.default_rng(21)
        tuples, labels = random_corpus(rng, 300)
        for alpha in (0.0, 0.5, 1.0, 3.0):
            model = fit_markov(tuples, labels, FEATURES, alpha=alpha)
            self.assertAlmostEqual(sum(model.initial.values()), 1.0, delta=1e-12)
            for table in model.transitions:
                for row in table.probabilities.values():
                    self.assertAlmostEqual(sum(row.values()), 1.0, delta=1e-12)

    def test_alpha_zero_matches_frequency_oracle(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            tuples, labels = random_corpus(rng, int(rng.integers(1, 1001)))
            model = fit_markov(tuples, labels, FEATURES, alpha=0)
            frauds, totals = defaultdict(int), defaultdict(int)
            for state, label in zip(tuples, labels):
                frauds[state] += int(label)
                totals[state] += 1
            for state in totals:
                state_id = model.state_table.state_id(state)
                self.assertEqual(score_state(model, state_id), frauds[state] / totals[state])
                self.assertAlmostEqual(score_chain(model, state).normalized, score_state(model, state_id), delta=1e-12)

    def test_more_smoothing_moves_towards_half(self):
        rng = np.random.default_rng(3)
        tuples, labels = random_corpus(rng, 200)
        previous = None
        for alpha in (0.0, 0.5, 2.0, 10.0):
            current = [s.probability for s in fit_markov(tuples, labels, FEATURES, alpha=alpha).state_stats]
            if previous is not None:
                for before, after in zip(previous, current):
                    if before == 0.5:
                        self.assertEqual(after, 0.5)
                    else:
                        self.assertLess(abs(after - 0.5), abs(before - 0.5))
            previous = current


class ScoreChainTests(SimpleTestCase):
    def test_two_claim_chain(self):
        model = fit_markov([('A', 'x'), ('A', 'y')], [1, 0], ('f1', 'f2'), alpha=0)
        chain = score_chain(model, ('A', 'x'))
        self.assertEqual(chain.joint, 0.5)
        self.assertEqual(chain.normalized, 1.0)

    def test_seen_tuples_agree_with_state_score(self):
        rng = np.random.default_rng(4)
        tuples, labels = random_corpus(rng, 500)
        model = fit_markov(tuples, labels, FEATURES, alpha=1)
        for state in set(tuples):
            self.assertAlmostEqual(
                score_chain(model, state).normalized,
                score_state(model, model.state_table.state_id(state)),
                delta=1e-12,
            )

    def test_unseen_category_keeps_positive_joint(self):
        model = fit_markov([('A', 'x', 'p'), ('B', 'y', 'q')], [1, 0], FEATURES, alpha=1)
        chain = score_chain(model, ('C', 'x', 'z'))
        self.assertGreater(chain.joint, 0)
        self.assertEqual(chain.normalized, model.prior)


class ClassifyTests(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(classify(0.7, 0.5), ClaimLabel.FRAUD)
        self.assertEqual(classify(0.5, 0.5), ClaimLabel.NOT_FRAUD)
        self.assertEqual(classify(1.0, 1.0), ClaimLabel.NOT_FRAUD)

    def test_threshold_sweep_reproduces_roc_points(self):
        rng = np.random.default_rng(12)
        labels = (rng.random(60) < 0.4).astype(int)
        labels[:2] = (0, 1)
        scores = np.round(rng.random(60), 1)
        curve = roc(labels, scores)
        for fpr, tpr, threshold in curve.points():
            predictions = [classify(s, threshold) for s in scores]
            cm = confusion([ClaimLabel.FRAUD if y else ClaimLabel.NOT_FRAUD for y in labels], predictions)
            self.assertEqual((cm.fp / cm.negatives, cm.tp / cm.positives), (fpr, tpr))


class MarkovScorerTests(SimpleTestCase):
    def setUp(self):
        self.train = random_dataset(600, seed=1)
        self.test = random_dataset(200, seed=2)
        self.model = MarkovTrainer(alpha=1).fit_dataset(self.train)
        self.scorer = MarkovScorer(self.model)

    def test_default_chain_order(self):
        self.assertEqual(self.model.feature_order, MARKOV_FEATURES)

    def test_state_and_chain_modes(self):
        state_scores = self.scorer.score_dataset(self.test, mode='state')
        chain_scores = self.scorer.score_dataset(self.test, mode='chain')
        self.assertEqual(state_scores.shape, (200,))
        self.assertTrue(np.all((state_scores >= 0) & (state_scores <= 1)))
        np.testing.assert_allclose(chain_scores, state_scores, atol=1e-12)

    def test_training_claims_are_never_unseen(self):
        self.assertEqual(self.scorer.unseen_share(self.train), 0.0)
        self.assertGreaterEqual(self.scorer.unseen_share(self.test), 0.0)

    def test_unknown_mode(self):
        with self.assertRaises(ConfigurationError):
            self.scorer.score_dataset(self.test, mode='product')

    def test_state_summary_in_id_order(self):
        summary = self.model.state_summary()
        self.assertEqual([row['state'] for row in summary], list(range(1, self.model.n_states + 1)))
        self.assertEqual(sum(row['total_count'] for row in summary), len(self.train))
