"""
Seeded synthetic claims generator with a planted fraud signal.

Feature shapes
--------------
- benefit_type: SURGICAL with probability 0.3, otherwise MEDICAL.
- diagnosis_code: Zipf-like (weight 1/rank^1.1) over the whole vocabulary;
  medical claims rank the M-codes first, surgical claims the S-codes.
- hospital_type: Private with probability 0.6.
- days_stayed: geometric, mean 2.3 days for medical and 5.7 for surgical
  claims, capped at 60.
- net_amount: log-normal, log-mean 9.2 (+0.7 surgical, +0.04 per day up to
  30 days), log-sd 0.6; rounded to cents.
- provider_id: Zipf-like (1/rank^1.1) over the providers; every provider has a
  home district, 15% of claims are billed from a random other district.
- amount_paid_to_hospital: net_amount times a uniform(0.5, 1.0) share.

Fraud score
-----------
``s = 1.0*z(log(1 + net_amount)) + 1.5*[SURGICAL and days_stayed <= 1]
      + 2.5*[risky provider] + 1.0*[risky district] + 2.0*z(hospital share) - c``

where z() standardises over the generated claims (clipped to +-3), 10% of the
providers and 20% of the districts are drawn as risky, and ``c`` centres the
score so that the mean fraud propensity equals ``fraud_rate``.
A claim's fraud log-odds is ``logit(fraud_rate) + signal_strength * s``.
"""
import logging

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit, logit

from claims.models import BenefitType, ClaimLabel, ClaimRecord, Dataset, HospitalType
from core.rng import make_rng
from .models import GenConfig

logger = logging.getLogger(__name__)

SURGICAL_SHARE = 0.3
PRIVATE_SHARE = 0.6
ZIPF_EXPONENT = 1.1
MAX_DAYS = 60
DISTRICT_NOISE = 0.15
RISKY_PROVIDER_SHARE = 0.10
RISKY_DISTRICT_SHARE = 0.20

SIGNAL_WEIGHTS = {
    'net_amount': 1.0,
    'short_surgical_stay': 1.5,
    'risky_provider': 2.5,
    'risky_district': 1.0,
    'hospital_share': 2.0,
}


def zipf_weights(size):
    weights = 1.0 / np.arange(1, size + 1) ** ZIPF_EXPONENT
    return weights / weights.sum()


def standardise(values):
    std = values.std()
    if std == 0:
        return np.zeros_like(values)
    return np.clip((values - values.mean()) / std, -3.0, 3.0)


class ClaimGenerator:
    """Builds a Dataset from a GenConfig; a pure function of the config"""

    def __init__(self, config):
        self.config = config

    def generate(self):
        config = self.config
        rng = make_rng(config.seed)
        n = config.n_claims

        surgical = rng.random(n) < SURGICAL_SHARE
        diagnosis = self._diagnosis_codes(rng, surgical)
        private = rng.random(n) < PRIVATE_SHARE
        days = np.where(surgical, rng.geometric(0.15, n), rng.geometric(0.30, n)) - 1
        days = np.minimum(days, MAX_DAYS)
        log_mean = 9.2 + 0.7 * surgical + 0.04 * np.minimum(days, 30)
        net_amount = np.round(np.exp(rng.normal(log_mean, 0.6)), 2)

        providers = rng.choice(config.n_providers, size=n, p=zipf_weights(config.n_providers))
        home_district = rng.integers(0, config.n_districts, size=config.n_providers)
        districts = np.where(
            rng.random(n) < DISTRICT_NOISE,
            rng.integers(0, config.n_districts, size=n),
            home_district[providers],
        )
        share = rng.uniform(0.5, 1.0, n)
        amount_paid = np.round(net_amount * share, 2)

        risky_providers = rng.choice(
            config.n_providers, size=max(1, round(RISKY_PROVIDER_SHARE * config.n_providers)), replace=False,
        )
        risky_districts = rng.choice(
            config.n_districts, size=max(1, round(RISKY_DISTRICT_SHARE * config.n_districts)), replace=False,
        )

        raw_score = (
            SIGNAL_WEIGHTS['net_amount'] * standardise(np.log1p(net_amount))
            + SIGNAL_WEIGHTS['short_surgical_stay'] * (surgical & (days <= 1))
            + SIGNAL_WEIGHTS['risky_provider'] * np.isin(providers, risky_providers)
            + SIGNAL_WEIGHTS['risky_district'] * np.isin(districts, risky_districts)
            + SIGNAL_WEIGHTS['hospital_share'] * np.clip((share - 0.75) * np.sqrt(48.0), -3.0, 3.0)
        )
        log_odds = self._log_odds(raw_score)
        fraud = self._labels(rng, log_odds)

        width = max(7, len(str(n)))
        provider_width = len(str(config.n_providers))
        district_width = max(2, len(str(config.n_districts)))
        records = tuple(
            ClaimRecord(
                claim_id=f'CLM{i + 1:0{width}d}',
                benefit_type=BenefitType.SURGICAL.value if surgical[i] else BenefitType.MEDICAL.value,
                days_stayed=int(days[i]),
                diagnosis_code=str(diagnosis[i]),
                hospital_type=HospitalType.PRIVATE.value if private[i] else HospitalType.PUBLIC.value,
                net_amount=float(net_amount[i]),
                provider_id=f'P{providers[i] + 1:0{provider_width}d}',
                hospital_district=f'D{districts[i] + 1:0{district_width}d}',
                amount_paid_to_hospital=float(amount_paid[i]),
                label=ClaimLabel.FRAUD.value if fraud[i] else ClaimLabel.NOT_FRAUD.value,
            )
            for i in range(n)
        )
        dataset = Dataset(
            records=records,
            provenance=(
                f'synthgen seed={config.seed} n={n} fraud_rate={config.fraud_rate} '
                f'signal_strength={config.signal_strength} exact_counts={config.exact_counts}'
            ),
        )
        logger.info(
            f'Generated {n} claims, {dataset.fraud_count} fraud '
            f'({dataset.fraud_share:.4%}), signal_strength={config.signal_strength}'
        )
        return dataset

    def _diagnosis_codes(self, rng, surgical):
        size = self.config.n_diagnosis_codes
        medical_codes = [f'M{i}' for i in range(1, (size + 1) // 2 + 1)]
        surgical_codes = [f'S{i}' for i in range(1, size // 2 + 1)]
        weights = zipf_weights(size)
        medical_order = np.array(medical_codes + surgical_codes)
        surgical_order = np.array(surgical_codes + medical_codes)

        codes = np.empty(surgical.size, dtype=object)
        codes[~surgical] = medical_order[rng.choice(size, size=int((~surgical).sum()), p=weights)]
        codes[surgical] = surgical_order[rng.choice(size, size=int(surgical.sum()), p=weights)]
        return codes

    def _log_odds(self, raw_score):
        base = logit(self.config.fraud_rate)
        strength = float(self.config.signal_strength)
        if strength == 0:
            return np.full(raw_score.shape, base)

        target = self.config.fraud_rate

        def excess(offset):
            return expit(base + strength * (raw_score - offset)).mean() - target

        span = 60.0 / strength
        offset = brentq(excess, raw_score.min() - span, raw_score.max() + span, xtol=1e-12)
        return base + strength * (raw_score - offset)

    def _labels(self, rng, log_odds):
        n = log_odds.size
        uniform = rng.random(n)
        tiebreak = rng.random(n)
        if not self.config.exact_counts:
            return uniform < expit(log_odds)

        # Top-k by sampled propensity: log-odds plus logistic noise
        k = self.config.expected_fraud_count
        keys = log_odds + np.log(uniform) - np.log1p(-uniform)
        order = np.lexsort((tiebreak, -keys))
        fraud = np.zeros(n, dtype=bool)
        fraud[order[:k]] = True
        return fraud


def generate(config):
    if not isinstance(config, GenConfig):
        config = GenConfig(**config)
    return ClaimGenerator(config).generate()
