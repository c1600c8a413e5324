"""
Generator configuration
"""
import math
from dataclasses import asdict, dataclass

from core.exceptions import ConfigurationError
from core.rng import validate_seed

DEFAULT_FRAUD_RATE = 0.0995


@dataclass(frozen=True)
class GenConfig:
    n_claims: int
    fraud_rate: float = DEFAULT_FRAUD_RATE
    signal_strength: float = 1.0
    exact_counts: bool = False
    seed: int = 7
    n_diagnosis_codes: int = 40
    n_providers: int = 300
    n_districts: int = 30

    def __post_init__(self):
        if isinstance(self.n_claims, bool) or not isinstance(self.n_claims, int) or self.n_claims < 1:
            raise ConfigurationError(f'n_claims must be a positive integer, got {self.n_claims!r}')
        if not isinstance(self.fraud_rate, (int, float)) or not 0 < self.fraud_rate < 1:
            raise ConfigurationError(f'fraud_rate must lie strictly between 0 and 1, got {self.fraud_rate!r}')
        if not isinstance(self.signal_strength, (int, float)) or not math.isfinite(self.signal_strength) \
                or self.signal_strength < 0:
            raise ConfigurationError(f'signal_strength must be a finite non-negative number, got {self.signal_strength!r}')
        if not isinstance(self.exact_counts, bool):
            raise ConfigurationError(f'exact_counts must be true or false, got {self.exact_counts!r}')
        for name in ('n_diagnosis_codes', 'n_providers', 'n_districts'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigurationError(f'{name} must be a positive integer, got {value!r}')
        validate_seed(self.seed)

    @property
    def expected_fraud_count(self):
        """round(n * fraud_rate), halves rounded up"""
        return math.floor(self.n_claims * self.fraud_rate + 0.5)

    def as_dict(self):
        return asdict(self)
