import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from claims.models import ClaimLabel
from core.exceptions import EvaluationError
from evaluation.models import ConfusionMatrix, MetricsReport
from evaluation.plots import plot_roc
from evaluation.services import EvaluationService, auc, confusion, mann_whitney_auc, metrics, roc

F, N = ClaimLabel.FRAUD.value, ClaimLabel.NOT_FRAUD.value

MARKOV_TABLE = ConfusionMatrix(tp=6857, fp=2120, fn=4687, tn=101113)
GBM_TABLE = ConfusionMatrix(tp=9796, fp=1586, fn=1748, tn=101647)


def expand(cm):
    """Label/prediction vectors reproducing a confusion matrix"""
    labels = [F] * cm.tp + [N] * cm.fp + [F] * cm.fn + [N] * cm.tn
    predictions = [F] * cm.tp + [F] * cm.fp + [N] * cm.fn + [N] * cm.tn
    return labels, predictions


class ConfusionTests(SimpleTestCase):
    def test_all_correct(self):
        self.assertEqual(confusion([F, N, F], [F, N, F]), ConfusionMatrix(tp=2, fp=0, fn=0, tn=1))

    def test_total_confusion(self):
        self.assertEqual(confusion([F, N], [N, F]), ConfusionMatrix(tp=0, fp=1, fn=1, tn=0))

    def test_marginals_match_brute_force(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            n = int(rng.integers(1, 300))
            labels = rng.integers(0, 2, size=n)
            predictions = rng.integers(0, 2, size=n)
            cm = confusion(labels, predictions)
            self.assertEqual(cm.positives, int(labels.sum()))
            self.assertEqual(cm.negatives, n - int(labels.sum()))
            self.assertEqual(cm.tp, sum(1 for y, p in zip(labels, predictions) if y == 1 and p == 1))

    def test_errors(self):
        with self.assertRaises(EvaluationError):
            confusion([F, N], [F])
        with self.assertRaises(EvaluationError):
            confusion([], [])
        with self.assertRaises(EvaluationError):
            confusion(['maybe'], [F])
        with self.assertRaises(EvaluationError):
            ConfusionMatrix(tp=-1, fp=0, fn=0, tn=0)


class MetricsTests(SimpleTestCase):
    def assertRoundedEqual(self, report, expected):
        values = report.values()
        for name, value in expected.items():
            self.assertAlmostEqual(values[name], value, delta=0.00005, msg=name)

    def test_markov_table(self):
        self.assertRoundedEqual(metrics(MARKOV_TABLE), {
            'sensitivity': 0.5940, 'specificity': 0.9795, 'precision': 0.7638, 'accuracy': 0.9407, 'f1': 0.6683,
        })
        self.assertEqual(metrics(MARKOV_TABLE).rounded()['accuracy'], 0.9407)

    def test_gbm_table(self):
        self.assertRoundedEqual(metrics(GBM_TABLE), {
            'sensitivity': 0.8486, 'specificity': 0.9846, 'precision': 0.8607, 'accuracy': 0.9710, 'f1': 0.8546,
        })
        self.assertLess(GBM_TABLE.fp, MARKOV_TABLE.fp)

    def test_tables_cover_the_test_set(self):
        self.assertEqual(MARKOV_TABLE.total, 114777)
        self.assertEqual(GBM_TABLE.total, 114777)

    def test_metrics_from_expanded_vectors(self):
        for table in (MARKOV_TABLE, GBM_TABLE):
            cm = confusion(*expand(table))
            self.assertEqual(cm, table)
            self.assertEqual(metrics(cm).rounded(), metrics(table).rounded())

    def test_perfect_classifier(self):
        self.assertEqual(set(metrics(ConfusionMatrix(1, 0, 0, 1)).values().values()), {1.0})

    def test_zero_denominators_are_undefined(self):
        report = metrics(ConfusionMatrix(tp=0, fp=0, fn=0, tn=5))
        self.assertIsNone(report.sensitivity)
        self.assertIsNone(report.precision)
        self.assertIsNone(report.f1)
        self.assertEqual(report.specificity, 1.0)
        self.assertEqual(report.as_dict()['raw']['precision'], None)

    def test_raw_and_rounded_values(self):
        data = metrics(MARKOV_TABLE).as_dict()
        self.assertEqual(data['rounded']['f1'], 0.6683)
        self.assertEqual(data['raw']['f1'], float(f'{2 * 6857 / (2 * 6857 + 2120 + 4687):.15g}'))

    def test_out_of_range_metric_rejected(self):
        with self.assertRaises(EvaluationError):
            MetricsReport(accuracy=1.5)


class RocTests(SimpleTestCase):
    def test_hand_enumerated_points(self):
        curve = roc([1, 0, 1, 0], [0.8, 0.7, 0.6, 0.2])
        points = list(zip(curve.fpr, curve.tpr))
        self.assertEqual(points, [(0.0, 0.0), (0.0, 0.5), (0.5, 0.5), (0.5, 1.0), (1.0, 1.0)])
        self.assertEqual(auc(curve), 0.75)
        self.assertEqual(curve.thresholds[-1], float('-inf'))

    def test_perfect_separation(self):
        curve = roc([1, 1, 0, 0], [0.9, 0.8, 0.3, 0.1])
        self.assertIn((0.0, 1.0), list(zip(curve.fpr, curve.tpr)))
        self.assertEqual(auc(curve), 1.0)

    def test_all_scores_equal(self):
        curve = roc([1, 0, 1, 0, 0], [0.4] * 5)
        self.assertEqual(list(zip(curve.fpr, curve.tpr)), [(0.0, 0.0), (1.0, 1.0)])
        self.assertEqual(auc([1, 0, 1, 0, 0], [0.4] * 5), 0.5)

    def test_endpoints_and_monotonicity(self):
        rng = np.random.default_rng(2)
        labels = rng.integers(0, 2, size=500)
        labels[:2] = (0, 1)
        curve = roc(labels, np.round(rng.random(500), 2))
        self.assertEqual((curve.fpr[0], curve.tpr[0]), (0.0, 0.0))
        self.assertEqual((curve.fpr[-1], curve.tpr[-1]), (1.0, 1.0))
        self.assertTrue(np.all(np.diff(curve.fpr) >= 0))
        self.assertTrue(np.all(np.diff(curve.tpr) >= 0))

    def test_single_class_rejected(self):
        with self.assertRaises(EvaluationError):
            roc([1, 1, 1], [0.1, 0.2, 0.3])
        with self.assertRaises(EvaluationError):
            mann_whitney_auc([0, 0], [0.1, 0.2])

    def test_trapezoid_equals_mann_whitney(self):
        rng = np.random.default_rng(3)
        for trial in range(200):
            n = int(rng.integers(10, 10001))
            labels = rng.integers(0, 2, size=n)
            labels[:2] = (0, 1)
            scores = rng.random(n)
            if trial % 2:
                scores = np.round(scores, int(rng.integers(1, 3)))
            self.assertAlmostEqual(auc(labels, scores), mann_whitney_auc(labels, scores), delta=1e-9)

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(4)
        labels = rng.integers(0, 2, size=400)
        labels[:2] = (0, 1)
        scores = np.round(rng.random(400), 2)
        base = roc(labels, scores)
        for transform in (lambda s: 3 * s + 1, np.exp, lambda s: s ** 3):
            moved = roc(labels, transform(scores))
            self.assertEqual(list(zip(moved.fpr, moved.tpr)), list(zip(base.fpr, base.tpr)))
            self.assertAlmostEqual(auc(moved), auc(base), delta=1e-12)


class EvaluationServiceTests(SimpleTestCase):
    def setUp(self):
        self.service = EvaluationService()
        rng = np.random.default_rng(5)
        self.labels = rng.integers(0, 2, size=300)
        self.labels[:2] = (0, 1)
        self.scores = np.clip(self.labels * 0.3 + rng.random(300) * 0.7, 0, 1)

    def test_predictions_equal_to_labels(self):
        result = self.service.evaluate(self.labels, self.labels.astype(float), threshold=0.5)
        self.assertEqual(result.metrics.accuracy, 1.0)
        self.assertEqual(result.auc, 1.0)

    def test_report_has_raw_and_rounded_values(self):
        result = self.service.evaluate(self.labels, self.scores, model_name='markov')
        report = self.service.report_dict(result)
        self.assertEqual(set(report['metrics']), {'raw', 'rounded'})
        self.assertEqual(report['auc']['rounded'], round(result.auc, 4))
        text = self.service.render_text(result)
        self.assertIn('markov', text)
        self.assertIn(f'{result.auc:.4f}', text)
        self.assertIn(f'{result.auc:.15g}', text)

    def test_same_model_twice_has_zero_deltas(self):
        result = self.service.evaluate(self.labels, self.scores, model_name='gbm')
        compared = self.service.compare_dict(result, result)
        for name, row in compared['metrics'].items():
            self.assertEqual(row['delta']['raw'], 0.0, msg=name)
        text = self.service.render_compare_text(result, result)
        self.assertIn('+0.0000', text)
        for name, value in result.metrics.values().items():
            cells = next(line for line in text.splitlines() if line.startswith(name + ' ')).split()
            self.assertEqual((cells[2], cells[4]), (f'{value:.15g}', f'{value:.15g}'), msg=name)

    def test_rendering_is_reproducible(self):
        a = self.service.evaluate(self.labels, self.scores)
        b = self.service.evaluate(self.labels, self.scores)
        self.assertEqual(self.service.render_text(a), self.service.render_text(b))

    def test_files_are_reproducible(self):
        result = self.service.evaluate(self.labels, self.scores, model_name='gbm')
        with tempfile.TemporaryDirectory() as tmp:
            tmp = Path(tmp)
            for name in ('a', 'b'):
                self.service.write_roc_points(result.curve, tmp / f'{name}.csv')
                plot_roc([('gbm', result.curve, result.auc)], tmp / f'{name}.svg')
            self.assertEqual((tmp / 'a.csv').read_bytes(), (tmp / 'b.csv').read_bytes())
            self.assertEqual((tmp / 'a.svg').read_bytes(), (tmp / 'b.svg').read_bytes())
            svg = (tmp / 'a.svg').read_text(encoding='utf-8')
            self.assertIn(f'AUC = {result.auc:.4f}', svg)
            points = (tmp / 'a.csv').read_text(encoding='utf-8').splitlines()
            self.assertEqual(points[0], 'fpr,tpr,threshold')
            self.assertEqual(len(points), len(result.curve) + 1)
