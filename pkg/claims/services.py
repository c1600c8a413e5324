"""
Dataset file ingestion/emission and the seeded train/test split
"""
import logging
import math
from pathlib import Path

import numpy as np
import pandas as pd

from core.exceptions import ConfigurationError, DatasetValidationError
from core.rng import make_rng, validate_seed
from .models import (
    DATASET_COLUMNS, MONEY_FIELDS, BenefitType, ClaimLabel, ClaimRecord, Dataset,
    HospitalType, SplitResult,
)

logger = logging.getLogger(__name__)

# Data rows start on file row 2, the header is row 1
FIRST_DATA_ROW = 2


class DatasetIOService:
    """Reads and writes the comma-separated claims file"""

    def __init__(self, encoding='utf-8'):
        self.encoding = encoding

    def read_dataset(self, path):
        path = Path(path)
        if not path.exists():
            raise DatasetValidationError(f'dataset file not found: {path}')

        try:
            raw = pd.read_csv(
                path,
                header=None,
                dtype=str,
                keep_default_na=False,
                na_filter=False,
                encoding=self.encoding,
            )
        except pd.errors.EmptyDataError:
            raise DatasetValidationError(f'{path} is empty, expected a header row', row=1)
        except pd.errors.ParserError as e:
            raise DatasetValidationError(f'malformed delimited text in {path}: {e}')
        except UnicodeDecodeError as e:
            raise DatasetValidationError(f'{path} is not valid {self.encoding}: {e}')

        header = [str(name).strip() for name in raw.iloc[0]]
        self._validate_header(header)

        frame = raw.iloc[1:, :len(DATASET_COLUMNS)].copy()
        frame.columns = list(DATASET_COLUMNS)
        frame = frame.reset_index(drop=True)

        days = self._parse_numeric(frame, 'days_stayed', integral=True)
        amounts = {name: self._parse_numeric(frame, name) for name in MONEY_FIELDS}
        self._validate_choice(frame, 'benefit_type', BenefitType.values)
        self._validate_choice(frame, 'hospital_type', HospitalType.values)
        self._validate_choice(frame, 'label', ClaimLabel.values)
        self._validate_claim_ids(frame)

        records = []
        for i, row in enumerate(frame.itertuples(index=False)):
            try:
                records.append(ClaimRecord(
                    claim_id=row.claim_id,
                    benefit_type=row.benefit_type,
                    days_stayed=int(days[i]),
                    diagnosis_code=row.diagnosis_code,
                    hospital_type=row.hospital_type,
                    net_amount=float(amounts['net_amount'][i]),
                    provider_id=row.provider_id,
                    hospital_district=row.hospital_district,
                    amount_paid_to_hospital=float(amounts['amount_paid_to_hospital'][i]),
                    label=row.label,
                ))
            except DatasetValidationError as e:
                raise DatasetValidationError(str(e), row=i + FIRST_DATA_ROW)

        dataset = Dataset(records=tuple(records), provenance=str(path))
        logger.info(f'Read {len(dataset)} claims from {path} ({dataset.fraud_count} fraud)')
        return dataset

    def write_dataset(self, dataset, path):
        path = Path(path)
        frame = pd.DataFrame(
            [self._row(record) for record in dataset.records],
            columns=list(DATASET_COLUMNS),
        )
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(path, index=False, encoding=self.encoding, lineterminator='\n')
        except OSError as e:
            raise DatasetValidationError(f'cannot write dataset to {path}: {e}')
        logger.info(f'Wrote {len(dataset)} claims to {path}')
        return path

    @staticmethod
    def _row(record):
        # repr keeps the shortest string that reads back to the same float
        return [
            record.claim_id,
            record.benefit_type,
            str(int(record.days_stayed)),
            record.diagnosis_code,
            record.hospital_type,
            repr(float(record.net_amount)),
            record.provider_id,
            record.hospital_district,
            repr(float(record.amount_paid_to_hospital)),
            record.label,
        ]

    @staticmethod
    def _validate_header(header):
        seen = set()
        for name in header:
            if name in seen and name in DATASET_COLUMNS:
                raise DatasetValidationError('duplicate header column', row=1, column=name)
            seen.add(name)
        for position, name in enumerate(DATASET_COLUMNS):
            if name not in seen:
                raise DatasetValidationError('missing header column', row=1, column=name)
            if position >= len(header) or header[position] != name:
                raise DatasetValidationError(
                    f'header column {position + 1} must be {name!r}', row=1, column=name,
                )

    @staticmethod
    def _parse_numeric(frame, column, integral=False):
        values = pd.to_numeric(frame[column].str.strip(), errors='coerce').to_numpy(dtype=float)
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            i = int(bad[0])
            raise DatasetValidationError(
                f'unparsable numeric value {frame[column].iloc[i]!r}',
                row=i + FIRST_DATA_ROW, column=column,
            )
        negative = np.flatnonzero(values < 0)
        if negative.size:
            i = int(negative[0])
            raise DatasetValidationError(
                f'negative value {frame[column].iloc[i]!r}',
                row=i + FIRST_DATA_ROW, column=column,
            )
        if integral:
            fractional = np.flatnonzero(values != np.floor(values))
            if fractional.size:
                i = int(fractional[0])
                raise DatasetValidationError(
                    f'expected an integer, got {frame[column].iloc[i]!r}',
                    row=i + FIRST_DATA_ROW, column=column,
                )
        return values

    @staticmethod
    def _validate_choice(frame, column, allowed):
        invalid = np.flatnonzero(~frame[column].isin(allowed).to_numpy())
        if invalid.size:
            i = int(invalid[0])
            raise DatasetValidationError(
                f'{frame[column].iloc[i]!r} is not one of {", ".join(allowed)}',
                row=i + FIRST_DATA_ROW, column=column,
            )

    @staticmethod
    def _validate_claim_ids(frame):
        ids = frame['claim_id']
        empty = np.flatnonzero((ids.str.strip() == '').to_numpy())
        if empty.size:
            raise DatasetValidationError('empty claim_id', row=int(empty[0]) + FIRST_DATA_ROW, column='claim_id')
        duplicated = np.flatnonzero(ids.duplicated().to_numpy())
        if duplicated.size:
            i = int(duplicated[0])
            raise DatasetValidationError(
                f'duplicate claim_id {ids.iloc[i]!r}', row=i + FIRST_DATA_ROW, column='claim_id',
            )


class TrainTestSplitter:
    """Plain (unstratified) seeded random split"""

    def split(self, dataset, ratio, seed):
        if isinstance(ratio, bool) or not isinstance(ratio, (int, float)) or not 0 < ratio < 1:
            raise ConfigurationError(f'split ratio must lie strictly between 0 and 1, got {ratio!r}')
        seed = validate_seed(seed)
        n = len(dataset)
        if n == 0:
            raise DatasetValidationError('cannot split an empty dataset')

        # Generator.permutation is a Fisher-Yates shuffle driven by PCG64
        permutation = make_rng(seed).permutation(n)
        n_train = math.floor(ratio * n)

        train = dataset.subset(permutation[:n_train], provenance=f'{dataset.provenance} [train seed={seed}]')
        test = dataset.subset(permutation[n_train:], provenance=f'{dataset.provenance} [test seed={seed}]')
        logger.info(f'Split {n} claims into {len(train)} train / {len(test)} test (ratio={ratio}, seed={seed})')
        return SplitResult(train=train, test=test, ratio=float(ratio), seed=seed)


def read_dataset(path):
    return DatasetIOService().read_dataset(path)


def write_dataset(dataset, path):
    return DatasetIOService().write_dataset(dataset, path)


def split_train_test(dataset, ratio, seed):
    return TrainTestSplitter().split(dataset, ratio, seed)
