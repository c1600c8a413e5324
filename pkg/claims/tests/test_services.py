import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from claims.models import DATASET_COLUMNS, ClaimLabel, Dataset
from claims.services import read_dataset, split_train_test, write_dataset
from claims.tests.factories import make_claim, random_dataset
from core.exceptions import ConfigurationError, DatasetValidationError

HEADER = ','.join(DATASET_COLUMNS)


class DatasetFileTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, *lines, name='claims.csv'):
        path = self.dir / name
        path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
        return path

    def test_three_rows_in_file_order(self):
        path = self.write(
            HEADER,
            'C3,MEDICAL,2,M1,Private,1000.5,P001,D01,900,FRAUD',
            'C1,SURGICAL,0,S5,Public,200,P002,D02,150.25,NOT_FRAUD',
            'C2,MEDICAL,7,M3,Private,3000,P001,D01,2500,NOT_FRAUD',
        )
        dataset = read_dataset(path)
        self.assertEqual(dataset.claim_ids(), ['C3', 'C1', 'C2'])
        self.assertEqual(dataset.records[1].amount_paid_to_hospital, 150.25)
        self.assertEqual(dataset.records[0].days_stayed, 2)
        self.assertEqual(dataset.fraud_count, 1)

    def test_extra_columns_are_ignored(self):
        path = self.write(
            HEADER + ',treatment_date',
            'C1,MEDICAL,2,M1,Private,1000,P001,D01,900,FRAUD,2019-01-01',
        )
        self.assertEqual(len(read_dataset(path)), 1)

    def test_negative_days_names_row_and_column(self):
        path = self.write(
            HEADER,
            'C1,MEDICAL,2,M1,Private,1000,P001,D01,900,FRAUD',
            'C2,MEDICAL,-1,M1,Private,1000,P001,D01,900,FRAUD',
        )
        with self.assertRaisesMessage(DatasetValidationError, "row 3, column 'days_stayed'"):
            read_dataset(path)

    def test_unparsable_amount(self):
        path = self.write(HEADER, 'C1,MEDICAL,2,M1,Private,abc,P001,D01,900,FRAUD')
        with self.assertRaisesMessage(DatasetValidationError, "row 2, column 'net_amount'"):
            read_dataset(path)

    def test_negative_amount(self):
        path = self.write(HEADER, 'C1,MEDICAL,2,M1,Private,10,P001,D01,-5,FRAUD')
        with self.assertRaisesMessage(DatasetValidationError, "column 'amount_paid_to_hospital'"):
            read_dataset(path)

    def test_duplicate_claim_id(self):
        path = self.write(
            HEADER,
            'C1,MEDICAL,2,M1,Private,10,P001,D01,5,FRAUD',
            'C1,MEDICAL,2,M1,Private,10,P001,D01,5,FRAUD',
        )
        with self.assertRaisesMessage(DatasetValidationError, "row 3, column 'claim_id'"):
            read_dataset(path)

    def test_missing_header_column(self):
        path = self.write(HEADER.replace(',provider_id', ''), 'C1,MEDICAL,2,M1,Private,10,D01,5,FRAUD')
        with self.assertRaisesMessage(DatasetValidationError, "column 'provider_id'"):
            read_dataset(path)

    def test_duplicate_header_column(self):
        path = self.write(HEADER + ',label', 'C1,MEDICAL,2,M1,Private,10,P001,D01,5,FRAUD,FRAUD')
        with self.assertRaisesMessage(DatasetValidationError, 'duplicate header column'):
            read_dataset(path)

    def test_missing_file(self):
        with self.assertRaises(DatasetValidationError):
            read_dataset(self.dir / 'nope.csv')

    def test_empty_dataset_writes_header_only(self):
        path = write_dataset(Dataset(), self.dir / 'empty.csv')
        self.assertEqual(path.read_text(encoding='utf-8'), HEADER + '\n')
        self.assertEqual(len(read_dataset(path)), 0)

    def test_round_trip_is_identity(self):
        dataset = random_dataset(1000, seed=3)
        path = write_dataset(dataset, self.dir / 'a.csv')
        self.assertEqual(read_dataset(path).records, dataset.records)

    def test_two_writes_are_byte_identical(self):
        dataset = random_dataset(200, seed=4)
        a = write_dataset(dataset, self.dir / 'a.csv').read_bytes()
        b = write_dataset(dataset, self.dir / 'b.csv').read_bytes()
        self.assertEqual(a, b)

    def test_population_sized_file_keeps_fraud_share(self):
        n, frauds = 382587, 38082
        lines = [HEADER]
        for i in range(n):
            label = ClaimLabel.FRAUD.value if i < frauds else ClaimLabel.NOT_FRAUD.value
            lines.append(f'C{i},MEDICAL,2,M1,Private,10,P001,D01,5,{label}')
        dataset = read_dataset(self.write(*lines))
        self.assertEqual(len(dataset), n)
        self.assertAlmostEqual(dataset.fraud_share, 0.0995, delta=0.00005)


class SplitTests(SimpleTestCase):
    def test_population_split_sizes(self):
        dataset = Dataset(records=tuple(make_claim(i) for i in range(382587)))
        result = split_train_test(dataset, 0.70, 7)
        self.assertEqual(len(result.train), 267810)
        self.assertEqual(len(result.test), 114777)
        self.assertEqual(len(result.test), 6857 + 2120 + 4687 + 101113)

    def test_floor_arithmetic(self):
        dataset = random_dataset(10)
        result = split_train_test(dataset, 0.70, 1)
        self.assertEqual((len(result.train), len(result.test)), (7, 3))

    def test_partition_property(self):
        dataset = random_dataset(257, seed=2)
        for ratio in (0.1, 0.5, 0.7, 0.93):
            result = split_train_test(dataset, ratio, 11)
            train, test = set(result.train.claim_ids()), set(result.test.claim_ids())
            self.assertFalse(train & test)
            self.assertEqual(train | test, set(dataset.claim_ids()))
            self.assertEqual(len(result.test), 257 - int(ratio * 257))

    def test_deterministic_and_seed_sensitive(self):
        dataset = random_dataset(200, seed=5)
        a = split_train_test(dataset, 0.7, 42)
        b = split_train_test(dataset, 0.7, 42)
        c = split_train_test(dataset, 0.7, 43)
        self.assertEqual(a.train.claim_ids(), b.train.claim_ids())
        self.assertNotEqual(set(a.train.claim_ids()), set(c.train.claim_ids()))

    def test_invalid_arguments(self):
        dataset = random_dataset(5)
        for ratio in (0, 1, 1.5, -0.1):
            with self.assertRaises(ConfigurationError):
                split_train_test(dataset, ratio, 1)
        with self.assertRaises(DatasetValidationError):
            split_train_test(Dataset(), 0.7, 1)
