"""
Helpers building claim records for tests
"""
import numpy as np

from claims.models import BenefitType, ClaimLabel, ClaimRecord, Dataset, HospitalType


def make_claim(index=1, **overrides):
    values = {
        'claim_id': f'C{index:05d}',
        'benefit_type': BenefitType.MEDICAL.value,
        'days_stayed': 3,
        'diagnosis_code': 'M1',
        'hospital_type': HospitalType.PRIVATE.value,
        'net_amount': 1500.0,
        'provider_id': 'P001',
        'hospital_district': 'D01',
        'amount_paid_to_hospital': 1200.0,
        'label': ClaimLabel.NOT_FRAUD.value,
    }
    values.update(overrides)
    return ClaimRecord(**values)


def random_dataset(n, seed=0, fraud_share=0.3):
    """Small random dataset over a few categories; labels loosely follow net_amount"""
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n):
        amount = float(np.round(rng.lognormal(7, 0.8), 2))
        fraud = rng.random() < fraud_share * (1.5 if amount > 1500 else 0.5)
        records.append(make_claim(
            i + 1,
            benefit_type=str(rng.choice(BenefitType.values)),
            days_stayed=int(rng.integers(0, 15)),
            diagnosis_code=f'M{int(rng.integers(1, 6))}',
            hospital_type=str(rng.choice(HospitalType.values)),
            net_amount=amount,
            provider_id=f'P{int(rng.integers(1, 9)):03d}',
            hospital_district=f'D{int(rng.integers(1, 4)):02d}',
            amount_paid_to_hospital=float(np.round(amount * rng.uniform(0.5, 1.0), 2)),
            label=ClaimLabel.FRAUD.value if fraud else ClaimLabel.NOT_FRAUD.value,
        ))
    return Dataset(records=tuple(records), provenance=f'random seed={seed}')
