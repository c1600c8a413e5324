import math
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from claims.models import BenefitType, HospitalType
from claims.services import split_train_test, write_dataset
from core.exceptions import ConfigurationError
from evaluation.services import auc
from gbm.models import GbmHyperparams
from gbm.services import GbmTrainingService
from markov.services import MarkovScorer, MarkovTrainer
from synthgen.models import GenConfig
from synthgen.services import generate


class GenConfigTests(SimpleTestCase):
    def test_defaults(self):
        config = GenConfig(n_claims=10)
        self.assertEqual(config.fraud_rate, 0.0995)
        self.assertEqual((config.n_diagnosis_codes, config.n_providers, config.n_districts), (40, 300, 30))

    def test_invalid_fields(self):
        for kwargs in (
            {'n_claims': 0},
            {'n_claims': 10, 'fraud_rate': 0},
            {'n_claims': 10, 'fraud_rate': 1.5},
            {'n_claims': 10, 'signal_strength': -1},
            {'n_claims': 10, 'n_providers': 0},
            {'n_claims': 10, 'seed': -3},
            {'n_claims': 10, 'exact_counts': 'false'},
        ):
            with self.assertRaises(ConfigurationError):
                GenConfig(**kwargs)

    def test_expected_fraud_count_rounds_half_up(self):
        self.assertEqual(GenConfig(n_claims=382587).expected_fraud_count, 38067)
        self.assertEqual(GenConfig(n_claims=10, fraud_rate=0.25).expected_fraud_count, 3)


class GenerateTests(SimpleTestCase):
    def test_records_respect_schema_and_vocabularies(self):
        dataset = generate(GenConfig(n_claims=3000, n_diagnosis_codes=10, n_providers=25, n_districts=5, seed=3))
        self.assertEqual(len(dataset), 3000)
        self.assertEqual(len(set(dataset.claim_ids())), 3000)
        self.assertLessEqual(len(set(dataset.column('diagnosis_code'))), 10)
        self.assertLessEqual(len(set(dataset.column('provider_id'))), 25)
        self.assertLessEqual(len(set(dataset.column('hospital_district'))), 5)
        self.assertTrue(set(dataset.column('benefit_type')) <= set(BenefitType.values))
        self.assertTrue(set(dataset.column('hospital_type')) <= set(HospitalType.values))
        for record in dataset:
            self.assertTrue(0 <= record.days_stayed <= 60)
            self.assertLessEqual(record.amount_paid_to_hospital, record.net_amount)

    def test_exact_counts_population(self):
        dataset = generate(GenConfig(n_claims=382587, fraud_rate=0.0995, exact_counts=True, seed=7))
        self.assertEqual(dataset.fraud_count, 38067)
        self.assertAlmostEqual(dataset.fraud_share, 0.0995, places=4)

    def test_binomial_fraud_count(self):
        n, rate = 20000, 0.0995
        for strength in (0.0, 1.0, 2.0):
            dataset = generate(GenConfig(n_claims=n, fraud_rate=rate, signal_strength=strength, seed=11))
            sd = math.sqrt(n * rate * (1 - rate))
            self.assertLess(abs(dataset.fraud_count - n * rate), 4 * sd)

    def test_same_config_byte_identical_files(self):
        config = GenConfig(n_claims=500, signal_strength=1.5, seed=99)
        with tempfile.TemporaryDirectory() as tmp:
            a = write_dataset(generate(config), Path(tmp) / 'a.csv').read_bytes()
            b = write_dataset(generate(config), Path(tmp) / 'b.csv').read_bytes()
        self.assertEqual(a, b)

    def test_seed_changes_data(self):
        a = generate(GenConfig(n_claims=200, seed=1))
        b = generate(GenConfig(n_claims=200, seed=2))
        self.assertNotEqual(a.column('net_amount'), b.column('net_amount'))

    def test_no_signal_gives_chance_auc(self):
        dataset = generate(GenConfig(n_claims=50000, signal_strength=0.0, seed=5))
        split = split_train_test(dataset, 0.7, 5)
        model = MarkovTrainer().fit_dataset(split.train)
        scores = MarkovScorer(model).score_dataset(split.test)
        self.assertTrue(0.48 <= auc(split.test.labels(), scores) <= 0.52)

    def test_gbm_auc_grows_with_signal(self):
        medians = []
        for strength in (0.0, 1.0, 2.0):
            aucs = []
            for seed in (1, 2, 3):
                dataset = generate(GenConfig(n_claims=3000, signal_strength=strength, seed=seed))
                split = split_train_test(dataset, 0.7, seed)
                hp = GbmHyperparams(n_trees=30, max_depth=3, cv_folds=0, seed=seed)
                model, _, _ = GbmTrainingService(hyperparams=hp).train(split.train)
                scores = GbmTrainingService(hyperparams=hp).score(model, split.test)
                aucs.append(auc(split.test.labels(), scores))
            medians.append(float(np.median(aucs)))
        self.assertLessEqual(medians[0], medians[1])
        self.assertLessEqual(medians[1], medians[2])
