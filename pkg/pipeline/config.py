"""
RunConfig: every tunable of the pipeline in one JSON document.

Resolution order is settings defaults < ``--config`` document < command-line
flags. Unknown keys are rejected at every level.
"""
import json
import logging
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from django.conf import settings

from claims.models import CATEGORICAL_FIELDS, NUMERIC_FIELDS
from core.exceptions import ConfigurationError
from core.rng import validate_seed
from discretize.services import DEFAULT_BIN_COUNT
from gbm.models import GBM_FEATURES, GbmHyperparams
from markov.models import MARKOV_FEATURES
from markov.services import SCORE_MODES, validate_alpha, validate_threshold
from synthgen.models import DEFAULT_FRAUD_RATE, GenConfig

logger = logging.getLogger(__name__)

RESOLVED_CONFIG_NAME = 'resolved_config.json'
GBM_TREE_MODES = ('best', 'all')


def _setting(name, default):
    return getattr(settings, name, default)


@dataclass(frozen=True)
class PathsConfig:
    dataset: str = None
    train: str = None
    test: str = None
    output_dir: str = field(default_factory=lambda: str(_setting('FRAUDLAB_OUTPUT_DIR', 'runs')))
    markov_model: str = None
    gbm_model: str = None


@dataclass(frozen=True)
class SplitSection:
    ratio: float = field(default_factory=lambda: _setting('FRAUDLAB_SPLIT_RATIO', 0.70))

    def __post_init__(self):
        if isinstance(self.ratio, bool) or not isinstance(self.ratio, (int, float)) or not 0 < self.ratio < 1:
            raise ConfigurationError(f'split.ratio must lie strictly between 0 and 1, got {self.ratio!r}')


@dataclass(frozen=True)
class GeneratorSection:
    n_claims: int = 382587
    fraud_rate: float = DEFAULT_FRAUD_RATE
    signal_strength: float = 1.0
    exact_counts: bool = False
    n_diagnosis_codes: int = 40
    n_providers: int = 300
    n_districts: int = 30

    def gen_config(self, seed):
        return GenConfig(seed=seed, **asdict(self))


@dataclass(frozen=True)
class BinningSection:
    days_stayed: int = DEFAULT_BIN_COUNT
    net_amount: int = DEFAULT_BIN_COUNT
    amount_paid_to_hospital: int = DEFAULT_BIN_COUNT

    def __post_init__(self):
        for name, value in asdict(self).items():
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigurationError(f'binning.{name} must be a positive integer, got {value!r}')

    def bin_counts(self):
        return asdict(self)


@dataclass(frozen=True)
class MarkovSection:
    features: tuple = MARKOV_FEATURES
    alpha: float = field(default_factory=lambda: _setting('FRAUDLAB_MARKOV_ALPHA', 1.0))
    threshold: float = field(default_factory=lambda: _setting('FRAUDLAB_THRESHOLD', 0.5))
    score: str = 'state'

    def __post_init__(self):
        object.__setattr__(self, 'features', tuple(self.features))
        _check_features('markov', self.features)
        validate_alpha(self.alpha)
        validate_threshold(self.threshold)
        if self.score not in SCORE_MODES:
            raise ConfigurationError(f'markov.score must be one of {SCORE_MODES}, got {self.score!r}')


@dataclass(frozen=True)
class GbmSection:
    features: tuple = GBM_FEATURES
    n_trees: int = field(default_factory=lambda: _setting('FRAUDLAB_GBM_TREES', 300))
    max_depth: int = field(default_factory=lambda: _setting('FRAUDLAB_GBM_DEPTH', 5))
    learning_rate: float = field(default_factory=lambda: _setting('FRAUDLAB_GBM_LEARNING_RATE', 0.1))
    cv_folds: int = field(default_factory=lambda: _setting('FRAUDLAB_GBM_CV_FOLDS', 10))
    min_leaf_count: int = field(default_factory=lambda: _setting('FRAUDLAB_GBM_MIN_LEAF', 10))
    one_hot: bool = False
    threshold: float = field(default_factory=lambda: _setting('FRAUDLAB_THRESHOLD', 0.5))
    trees: str = 'best'

    def __post_init__(self):
        object.__setattr__(self, 'features', tuple(self.features))
        _check_features('gbm', self.features)
        if not isinstance(self.one_hot, bool):
            raise ConfigurationError(f'gbm.one_hot must be true or false, got {self.one_hot!r}')
        validate_threshold(self.threshold)
        if self.trees not in GBM_TREE_MODES:
            raise ConfigurationError(f'gbm.trees must be one of {GBM_TREE_MODES}, got {self.trees!r}')

    def hyperparams(self, seed):
        return GbmHyperparams(
            n_trees=self.n_trees,
            max_depth=self.max_depth,
            learning_rate=self.learning_rate,
            cv_folds=self.cv_folds,
            min_leaf_count=self.min_leaf_count,
            seed=seed,
        )


def _check_features(section, features):
    known = set(CATEGORICAL_FIELDS) | set(NUMERIC_FIELDS)
    if not features:
        raise ConfigurationError(f'{section}.features must not be empty')
    unknown = [f for f in features if f not in known]
    if unknown:
        raise ConfigurationError(f'{section}.features: unknown feature(s) {unknown}')
    if len(set(features)) != len(features):
        raise ConfigurationError(f'{section}.features must not repeat a feature')


SECTIONS = {
    'paths': PathsConfig,
    'split': SplitSection,
    'generator': GeneratorSection,
    'binning': BinningSection,
    'markov': MarkovSection,
    'gbm': GbmSection,
}


@dataclass(frozen=True)
class RunConfig:
    paths: PathsConfig = field(default_factory=PathsConfig)
    seed: int = field(default_factory=lambda: _setting('FRAUDLAB_SEED', 7))
    split: SplitSection = field(default_factory=SplitSection)
    generator: GeneratorSection = field(default_factory=GeneratorSection)
    binning: BinningSection = field(default_factory=BinningSection)
    markov: MarkovSection = field(default_factory=MarkovSection)
    gbm: GbmSection = field(default_factory=GbmSection)

    def __post_init__(self):
        validate_seed(self.seed)
        # fail early on GBM hyperparameters
        self.gbm.hyperparams(self.seed)
        self.generator.gen_config(self.seed)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigurationError('run config must be a JSON object')
        unknown = set(data) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigurationError(f'unknown run config key(s): {sorted(unknown)}')
        values = {}
        for name, section_cls in SECTIONS.items():
            if name in data:
                values[name] = _section_from_dict(name, section_cls, data[name])
        if 'seed' in data:
            values['seed'] = data['seed']
        try:
            return cls(**values)
        except TypeError as e:
            raise ConfigurationError(f'invalid run config: {e}') from e

    @classmethod
    def load(cls, path):
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f'config file not found: {path}')
        try:
            data = json.loads(path.read_text(encoding='utf-8'))
        except json.JSONDecodeError as e:
            raise ConfigurationError(f'{path}: invalid JSON ({e})') from e
        logger.info(f'Loaded run config from {path}')
        return cls.from_dict(data)

    def with_overrides(self, seed=None, **sections):
        """
        Return a copy with flag values applied. ``sections`` maps a section name
        to a dict of keys; None values mean "flag not given".
        """
        values = {}
        for name, overrides in sections.items():
            if name not in SECTIONS:
                raise ConfigurationError(f'unknown run config section {name!r}')
            overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
            if overrides:
                values[name] = _section_from_dict(name, SECTIONS[name], {**asdict(getattr(self, name)), **overrides})
        if seed is not None:
            values['seed'] = seed
        return replace(self, **values) if values else self

    def as_dict(self):
        data = asdict(self)
        for name in ('markov', 'gbm'):
            data[name]['features'] = list(data[name]['features'])
        return data

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + '\n'

    def write_resolved(self, directory):
        path = Path(directory) / RESOLVED_CONFIG_NAME
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json(), encoding='utf-8')
        logger.debug(f'Resolved config written to {path}')
        return path


def _section_from_dict(name, section_cls, data):
    if not isinstance(data, dict):
        raise ConfigurationError(f'run config section {name!r} must be a JSON object')
    unknown = set(data) - {f.name for f in fields(section_cls)}
    if unknown:
        raise ConfigurationError(f'unknown key(s) in run config section {name!r}: {sorted(unknown)}')
    return section_cls(**data)


def resolve_config(config_path=None, seed=None, **sections):
    """Settings defaults, then the optional config file, then flags"""
    config = RunConfig.load(config_path) if config_path else RunConfig()
    return config.with_overrides(seed=seed, **sections)
