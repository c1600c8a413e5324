"""
JSON model files.

Every file carries ``format_version`` and ``kind``; loading rejects other
versions and the wrong kind. Output is deterministic: fixed key order, 2-space
indent, floats in shortest round-trip form, trailing newline.
"""
import json
import logging
from pathlib import Path

from django.conf import settings

from core.exceptions import ModelFormatError
from discretize.models import BinningSpec, StateTable
from gbm.models import CvReport, FeatureEncoding, GbmHyperparams, GbmModel, RegressionTree
from markov.models import MarkovFraudModel, StateFraudStats, TransitionTable

logger = logging.getLogger(__name__)

MARKOV_KIND = 'markov'
GBM_KIND = 'gbm'
MODEL_KINDS = (MARKOV_KIND, GBM_KIND)


def format_version():
    return getattr(settings, 'FRAUDLAB_MODEL_FORMAT_VERSION', 1)


def markov_to_dict(model):
    return {
        'format_version': format_version(),
        'kind': MARKOV_KIND,
        'feature_order': list(model.feature_order),
        'categories': [list(values) for values in model.categories],
        'alpha': model.alpha,
        'prior': model.prior,
        'threshold': model.threshold,
        'n_train': model.n_train,
        'binning': {feature: spec.as_dict() for feature, spec in model.binning.items()},
        'initial_counts': dict(model.initial_counts),
        'initial': dict(model.initial),
        'transitions': [
            {
                'from_feature': table.from_feature,
                'to_feature': table.to_feature,
                'row_totals': dict(table.row_totals),
                'probabilities': {a: dict(row) for a, row in table.probabilities.items()},
            }
            for table in model.transitions
        ],
        'state_table': model.state_table.as_dict(),
        'state_stats': [[s.fraud_count, s.total_count, s.probability] for s in model.state_stats],
    }


def markov_from_dict(data):
    _check_header(data, MARKOV_KIND)
    try:
        return MarkovFraudModel(
            feature_order=tuple(data['feature_order']),
            categories=tuple(tuple(values) for values in data['categories']),
            initial_counts=dict(data['initial_counts']),
            initial=dict(data['initial']),
            transitions=tuple(
                TransitionTable(
                    from_feature=table['from_feature'],
                    to_feature=table['to_feature'],
                    row_totals=dict(table['row_totals']),
                    probabilities={a: dict(row) for a, row in table['probabilities'].items()},
                )
                for table in data['transitions']
            ),
            state_table=StateTable.from_dict(data['state_table']),
            state_stats=tuple(
                StateFraudStats(fraud_count=f, total_count=t, probability=p) for f, t, p in data['state_stats']
            ),
            binning={feature: BinningSpec.from_dict(spec) for feature, spec in data['binning'].items()},
            alpha=data['alpha'],
            prior=data['prior'],
            threshold=data['threshold'],
            n_train=data['n_train'],
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ModelFormatError):
            raise
        raise ModelFormatError(f'malformed Markov model: {e!r}') from e


def gbm_to_dict(model, cv_report=None):
    return {
        'format_version': format_version(),
        'kind': GBM_KIND,
        'f0': model.f0,
        'learning_rate': model.learning_rate,
        'best_iteration': model.best_iteration,
        'threshold': model.threshold,
        'hyperparams': model.hyperparams.as_dict(),
        'encoding': model.encoding.as_dict(),
        'trees': [tree.as_dict() for tree in model.trees],
        'cv_report': cv_report.as_dict() if cv_report is not None else None,
    }


def gbm_from_dict(data):
    _check_header(data, GBM_KIND)
    try:
        model = GbmModel(
            f0=data['f0'],
            learning_rate=data['learning_rate'],
            trees=tuple(RegressionTree.from_dict(tree) for tree in data['trees']),
            encoding=FeatureEncoding.from_dict(data['encoding']),
            best_iteration=data['best_iteration'],
            hyperparams=GbmHyperparams(**data['hyperparams']),
            threshold=data['threshold'],
        )
        cv_report = CvReport.from_dict(data['cv_report']) if data.get('cv_report') else None
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ModelFormatError):
            raise
        raise ModelFormatError(f'malformed GBM model: {e!r}') from e
    return model, cv_report


def _check_header(data, kind):
    if not isinstance(data, dict):
        raise ModelFormatError('model file must contain a JSON object')
    version = data.get('format_version')
    if version != format_version():
        raise ModelFormatError(f'unsupported model format version {version!r}, expected {format_version()}')
    if data.get('kind') != kind:
        raise ModelFormatError(f'expected a {kind} model, found {data.get("kind")!r}')


def dumps(data):
    return json.dumps(data, indent=2, allow_nan=False) + '\n'


def save_markov(model, path):
    return _write(path, dumps(markov_to_dict(model)))


def save_gbm(model, path, cv_report=None):
    return _write(path, dumps(gbm_to_dict(model, cv_report)))


def _write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding='utf-8')
    logger.info(f'Model written to {path}')
    return path


def read_model_file(path):
    path = Path(path)
    if not path.exists():
        raise ModelFormatError(f'model file not found: {path}')
    try:
        data = json.loads(path.read_text(encoding='utf-8'))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ModelFormatError(f'{path}: not a model file ({e})') from e
    if not isinstance(data, dict) or data.get('kind') not in MODEL_KINDS:
        raise ModelFormatError(f'{path}: unknown model kind {data.get("kind") if isinstance(data, dict) else None!r}')
    return data


def load_markov(path):
    return markov_from_dict(read_model_file(path))


def load_gbm(path):
    """Returns (GbmModel, CvReport or None)"""
    return gbm_from_dict(read_model_file(path))


def load_model(path):
    """Returns (kind, model) for either model kind"""
    data = read_model_file(path)
    if data['kind'] == MARKOV_KIND:
        return MARKOV_KIND, markov_from_dict(data)
    return GBM_KIND, gbm_from_dict(data)[0]
