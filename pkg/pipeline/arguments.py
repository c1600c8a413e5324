"""
argparse types and flag groups shared by the management commands.

A value rejected here goes through ``parser.error`` and exits with the usage
code (1).
"""
import argparse
import math

from core.rng import MAX_SEED
from gbm.models import GBM_FEATURES
from markov.models import MARKOV_FEATURES
from markov.services import SCORE_MODES
from .config import GBM_TREE_MODES


def _number(text, cast):
    try:
        value = cast(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'invalid number: {text!r}')
    if isinstance(value, float) and not math.isfinite(value):
        raise argparse.ArgumentTypeError(f'value must be finite, got {text!r}')
    return value


def positive_int(text):
    value = _number(text, int)
    if value < 1:
        raise argparse.ArgumentTypeError(f'must be a positive integer, got {text!r}')
    return value


def non_negative_int(text):
    value = _number(text, int)
    if value < 0:
        raise argparse.ArgumentTypeError(f'must be an integer >= 0, got {text!r}')
    return value


def non_negative_float(text):
    value = _number(text, float)
    if value < 0:
        raise argparse.ArgumentTypeError(f'must be >= 0, got {text!r}')
    return value


def open_unit_float(text):
    """Strictly between 0 and 1 (fraud rate, split ratio)"""
    value = _number(text, float)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f'must lie strictly between 0 and 1, got {text!r}')
    return value


def unit_float(text):
    value = _number(text, float)
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f'must lie in [0, 1], got {text!r}')
    return value


def seed(text):
    value = _number(text, int)
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError(f'seed must be a 64-bit unsigned integer, got {text!r}')
    return value


def cv_folds(text):
    value = non_negative_int(text)
    if value == 1:
        raise argparse.ArgumentTypeError('cv folds must be 0 (no cross-validation) or >= 2')
    return value


def feature_list(text):
    return tuple(part.strip() for part in text.split(',') if part.strip())


def add_common_arguments(parser):
    parser.add_argument('--config', help='JSON run config; command-line flags override it')
    parser.add_argument('--seed', type=seed, help='Random seed (default: FRAUDLAB_SEED)')
    parser.add_argument('--output-dir', help='Directory for outputs (default: FRAUDLAB_OUTPUT_DIR)')


def add_generator_arguments(parser):
    parser.add_argument('--n', dest='n_claims', type=positive_int, help='Number of claims (default: 382587)')
    parser.add_argument('--fraud-rate', type=open_unit_float, help='Fraud share, strictly in (0, 1) (default: 0.0995)')
    parser.add_argument('--signal-strength', type=non_negative_float,
                        help='Scale of the planted fraud signal, 0 = labels independent of features')
    parser.add_argument('--exact-counts', action='store_const', const=True,
                        help='Label exactly round(n * fraud_rate) claims as fraud')
    parser.add_argument('--diagnosis-codes', type=positive_int, help='Diagnosis code vocabulary size')
    parser.add_argument('--providers', type=positive_int, help='Provider vocabulary size')
    parser.add_argument('--districts', type=positive_int, help='Hospital district vocabulary size')


def generator_overrides(options):
    return {
        'n_claims': options.get('n_claims'),
        'fraud_rate': options.get('fraud_rate'),
        'signal_strength': options.get('signal_strength'),
        'exact_counts': options.get('exact_counts'),
        'n_diagnosis_codes': options.get('diagnosis_codes'),
        'n_providers': options.get('providers'),
        'n_districts': options.get('districts'),
    }


def add_markov_arguments(parser):
    parser.add_argument('--alpha', type=non_negative_float, help='Markov smoothing (default: FRAUDLAB_MARKOV_ALPHA)')
    parser.add_argument('--markov-features', type=feature_list,
                        help=f'Comma-separated chain order (default: {",".join(MARKOV_FEATURES)})')
    parser.add_argument('--days-bins', type=positive_int, help='Quantile bins for days_stayed (default: 3)')
    parser.add_argument('--amount-bins', type=positive_int, help='Quantile bins for net_amount (default: 3)')
    parser.add_argument('--paid-bins', type=positive_int, help='Quantile bins for amount_paid_to_hospital (default: 3)')


def binning_overrides(options):
    return {
        'days_stayed': options.get('days_bins'),
        'net_amount': options.get('amount_bins'),
        'amount_paid_to_hospital': options.get('paid_bins'),
    }


def add_gbm_arguments(parser):
    parser.add_argument('--trees', type=non_negative_int, help='Number of boosting iterations (default: 300)')
    parser.add_argument('--depth', type=positive_int, help='Maximum tree depth (default: 5)')
    parser.add_argument('--learning-rate', type=non_negative_float, help='Shrinkage (default: 0.1)')
    parser.add_argument('--cv-folds', type=cv_folds, help='CV folds, 0 disables CV (default: 10)')
    parser.add_argument('--min-leaf', type=positive_int, help='Minimum rows per leaf (default: 10)')
    parser.add_argument('--one-hot', action='store_const', const=True, help='One-hot encode categorical features')
    parser.add_argument('--gbm-features', type=feature_list,
                        help=f'Comma-separated GBM features (default: {",".join(GBM_FEATURES)})')


def add_scoring_arguments(parser):
    parser.add_argument('--markov-score', choices=SCORE_MODES,
                        help='Markov score: per-state probability or normalised chain (default: state)')
    parser.add_argument('--gbm-trees', choices=GBM_TREE_MODES,
                        help='GBM scoring with the CV-selected iteration or every tree (default: best)')


def markov_overrides(options, threshold=None):
    return {
        'alpha': options.get('alpha'),
        'features': options.get('markov_features'),
        'threshold': threshold,
        'score': options.get('markov_score'),
    }


def gbm_overrides(options, threshold=None):
    return {
        'n_trees': options.get('trees'),
        'max_depth': options.get('depth'),
        'learning_rate': options.get('learning_rate'),
        'cv_folds': options.get('cv_folds'),
        'min_leaf_count': options.get('min_leaf'),
        'one_hot': options.get('one_hot'),
        'features': options.get('gbm_features'),
        'threshold': threshold,
        'trees': options.get('gbm_trees'),
    }
