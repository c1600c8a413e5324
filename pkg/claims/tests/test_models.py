import math

from django.test import SimpleTestCase

from claims.models import ClaimLabel, Dataset
from claims.tests.factories import make_claim
from core.exceptions import DatasetValidationError


class ClaimRecordTests(SimpleTestCase):
    def test_valid_record(self):
        claim = make_claim(label=ClaimLabel.FRAUD.value)
        self.assertTrue(claim.is_fraud)
        self.assertEqual(claim.value('diagnosis_code'), 'M1')

    def test_negative_days_rejected(self):
        with self.assertRaisesMessage(DatasetValidationError, "column 'days_stayed'"):
            make_claim(days_stayed=-1)

    def test_non_finite_amount_rejected(self):
        for bad in (-0.01, math.inf, math.nan):
            with self.assertRaises(DatasetValidationError):
                make_claim(net_amount=bad)

    def test_unknown_vocabulary_rejected(self):
        for field, bad in (('benefit_type', 'DENTAL'), ('hospital_type', 'Army'), ('label', 'MAYBE')):
            with self.assertRaises(DatasetValidationError):
                make_claim(**{field: bad})

    def test_empty_claim_id_rejected(self):
        with self.assertRaises(DatasetValidationError):
            make_claim(claim_id='')


class DatasetTests(SimpleTestCase):
    def setUp(self):
        self.dataset = Dataset(records=(
            make_claim(1, label=ClaimLabel.FRAUD.value),
            make_claim(2),
            make_claim(3, label=ClaimLabel.FRAUD.value),
            make_claim(4),
        ))

    def test_counts_add_up(self):
        self.assertEqual(self.dataset.fraud_count, 2)
        self.assertEqual(self.dataset.notfraud_count, 2)
        self.assertEqual(self.dataset.fraud_count + self.dataset.notfraud_count, len(self.dataset))
        self.assertEqual(self.dataset.fraud_share, 0.5)

    def test_labels_are_fraud_indicators(self):
        self.assertEqual(self.dataset.labels().tolist(), [1, 0, 1, 0])

    def test_subset_keeps_order_of_indices(self):
        subset = self.dataset.subset([3, 0])
        self.assertEqual(subset.claim_ids(), ['C00004', 'C00001'])

    def test_empty_dataset(self):
        empty = Dataset()
        self.assertEqual(len(empty), 0)
        self.assertEqual(empty.fraud_share, 0.0)
