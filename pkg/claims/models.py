"""
Claim record, dataset and split result types
"""
import math
from dataclasses import dataclass

import numpy as np
from django.db import models

from core.exceptions import DatasetValidationError


class ClaimLabel(models.TextChoices):
    FRAUD = 'FRAUD', 'Fraud'
    NOT_FRAUD = 'NOT_FRAUD', 'Not fraud'


class BenefitType(models.TextChoices):
    MEDICAL = 'MEDICAL', 'Medical'
    SURGICAL = 'SURGICAL', 'Surgical'


class HospitalType(models.TextChoices):
    PRIVATE = 'Private', 'Private'
    PUBLIC = 'Public', 'Public'


# Column order of the dataset file; extra columns may follow and are ignored
DATASET_COLUMNS = (
    'claim_id',
    'benefit_type',
    'days_stayed',
    'diagnosis_code',
    'hospital_type',
    'net_amount',
    'provider_id',
    'hospital_district',
    'amount_paid_to_hospital',
    'label',
)

MONEY_FIELDS = ('net_amount', 'amount_paid_to_hospital')
NUMERIC_FIELDS = ('days_stayed',) + MONEY_FIELDS
CATEGORICAL_FIELDS = ('benefit_type', 'diagnosis_code', 'hospital_type', 'provider_id', 'hospital_district')


@dataclass(frozen=True)
class ClaimRecord:
    """One health insurance claim with its fraud label"""
    claim_id: str
    benefit_type: str
    days_stayed: int
    diagnosis_code: str
    hospital_type: str
    net_amount: float
    provider_id: str
    hospital_district: str
    amount_paid_to_hospital: float
    label: str

    def __post_init__(self):
        if not self.claim_id:
            raise DatasetValidationError('claim_id must not be empty', column='claim_id')
        if self.benefit_type not in BenefitType.values:
            raise DatasetValidationError(f'unknown benefit type {self.benefit_type!r}', column='benefit_type')
        if self.hospital_type not in HospitalType.values:
            raise DatasetValidationError(f'unknown hospital type {self.hospital_type!r}', column='hospital_type')
        if self.label not in ClaimLabel.values:
            raise DatasetValidationError(f'unknown label {self.label!r}', column='label')
        if self.days_stayed < 0:
            raise DatasetValidationError(f'negative value {self.days_stayed}', column='days_stayed')
        for name in MONEY_FIELDS:
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise DatasetValidationError(f'amount must be finite and >= 0, got {value}', column=name)

    @property
    def is_fraud(self):
        return self.label == ClaimLabel.FRAUD

    def value(self, feature):
        return getattr(self, feature)


@dataclass(frozen=True)
class Dataset:
    """Ordered, immutable collection of claims"""
    records: tuple = ()
    provenance: str = ''

    def __post_init__(self):
        object.__setattr__(self, 'records', tuple(self.records))

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def fraud_count(self):
        return sum(1 for record in self.records if record.is_fraud)

    @property
    def notfraud_count(self):
        return len(self.records) - self.fraud_count

    @property
    def fraud_share(self):
        return self.fraud_count / len(self.records) if self.records else 0.0

    def claim_ids(self):
        return [record.claim_id for record in self.records]

    def column(self, feature):
        return [getattr(record, feature) for record in self.records]

    def labels(self):
        """Fraud indicator per record as a 0/1 integer array"""
        return np.fromiter((record.is_fraud for record in self.records), dtype=np.int8, count=len(self.records))

    def subset(self, indices, provenance=None):
        return Dataset(
            records=tuple(self.records[i] for i in indices),
            provenance=self.provenance if provenance is None else provenance,
        )


@dataclass(frozen=True)
class SplitResult:
    train: Dataset
    test: Dataset
    ratio: float
    seed: int
