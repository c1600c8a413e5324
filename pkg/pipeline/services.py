"""
Pipeline driver behind the management commands
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path

from claims.services import DatasetIOService, TrainTestSplitter
from core.exceptions import ConfigurationError, EvaluationError
from evaluation.plots import plot_cv_deviance, plot_roc
from evaluation.services import EvaluationService, dump_json
from gbm.services import GbmTrainingService
from markov.services import MarkovScorer, MarkovTrainer
from synthgen.services import ClaimGenerator
from .persistence import GBM_KIND, MARKOV_KIND, load_gbm, load_markov, read_model_file, save_gbm, save_markov

logger = logging.getLogger(__name__)

DATASET_NAME = 'claims.csv'
TRAIN_NAME = 'train.csv'
TEST_NAME = 'test.csv'
MODEL_NAMES = {MARKOV_KIND: 'markov_model.json', GBM_KIND: 'gbm_model.json'}
TRAINING_REPORT_NAMES = {MARKOV_KIND: 'markov_training_report.json', GBM_KIND: 'gbm_training_report.json'}
CV_PLOT_NAME = 'gbm_cv_deviance.svg'
COMPARE_JSON_NAME = 'compare_report.json'
COMPARE_TEXT_NAME = 'compare_report.txt'
COMPARE_PLOT_NAME = 'roc_compare.svg'
TOP_STATES = 20


def _required(path, name):
    if not path:
        raise ConfigurationError(f'no {name} given (flag or paths.{name} in the run config)')
    return Path(path)


def evaluation_file_names(kind):
    return {
        'report_json': f'{kind}_metrics.json',
        'report_text': f'{kind}_metrics.txt',
        'roc_points': f'{kind}_roc.csv',
        'roc_plot': f'{kind}_roc.svg',
        'predictions': f'{kind}_predictions.csv',
    }


@dataclass
class StepResult:
    """Files written by one pipeline step plus the in-memory result"""
    outputs: list = field(default_factory=list)
    value: object = None


class PipelineService:
    """Each method reads and writes files under ``output_dir``, which it creates"""

    def __init__(self, config):
        self.config = config
        self.io = DatasetIOService()
        self.evaluator = EvaluationService()

    # -- generate / split -------------------------------------------------

    def generate(self, output_path=None):
        config = self.config
        output_path = Path(output_path or config.paths.dataset or Path(config.paths.output_dir) / DATASET_NAME)
        dataset = ClaimGenerator(config.generator.gen_config(config.seed)).generate()
        self.io.write_dataset(dataset, output_path)
        logger.info(f'Generated {len(dataset)} claims ({dataset.fraud_count} fraud) into {output_path}')
        return StepResult(outputs=[output_path], value=dataset)

    def split(self, dataset_path=None, output_dir=None, dataset=None):
        config = self.config
        output_dir = Path(output_dir or config.paths.output_dir)
        if dataset is None:
            dataset = self.io.read_dataset(_required(dataset_path or config.paths.dataset, 'dataset'))
        result = TrainTestSplitter().split(dataset, config.split.ratio, config.seed)
        train_path = self.io.write_dataset(result.train, output_dir / TRAIN_NAME)
        test_path = self.io.write_dataset(result.test, output_dir / TEST_NAME)
        return StepResult(outputs=[train_path, test_path], value=result)

    # -- training ---------------------------------------------------------

    def train(self, kind, train_path=None, output_dir=None, dataset=None):
        if kind not in (MARKOV_KIND, GBM_KIND):
            raise ConfigurationError(f'unknown model kind {kind!r}, expected one of {MARKOV_KIND}, {GBM_KIND}')
        if dataset is None:
            dataset = self.io.read_dataset(_required(train_path or self.config.paths.train, 'train'))
        output_dir = Path(output_dir or self.config.paths.output_dir)
        if kind == MARKOV_KIND:
            return self.train_markov(dataset, output_dir)
        return self.train_gbm(dataset, output_dir)

    def train_markov(self, dataset, output_dir):
        section = self.config.markov
        model = MarkovTrainer(alpha=section.alpha, threshold=section.threshold).fit_dataset(
            dataset, feature_order=section.features, bin_counts=self.config.binning.bin_counts(),
        )
        model_path = save_markov(model, output_dir / MODEL_NAMES[MARKOV_KIND])

        summary = model.state_summary()
        top_states = sorted(summary, key=lambda row: (-row['total_count'], row['state']))[:TOP_STATES]
        report = {
            'kind': MARKOV_KIND,
            'n_train': model.n_train,
            'n_states': model.n_states,
            'prior': model.prior,
            'alpha': model.alpha,
            'feature_order': list(model.feature_order),
            'categories': {f: list(values) for f, values in zip(model.feature_order, model.categories)},
            'binning': {f: spec.as_dict() for f, spec in model.binning.items()},
            'top_states': top_states,
        }
        report_path = self._write_text(output_dir / TRAINING_REPORT_NAMES[MARKOV_KIND], dump_json(report))
        return StepResult(outputs=[model_path, report_path], value=model)

    def train_gbm(self, dataset, output_dir):
        section = self.config.gbm
        service = GbmTrainingService(
            hyperparams=section.hyperparams(self.config.seed),
            feature_names=section.features,
            one_hot=section.one_hot,
            threshold=section.threshold,
        )
        model, history, cv_report = service.train(dataset, use_all_trees=section.trees == 'all')
        model_path = save_gbm(model, output_dir / MODEL_NAMES[GBM_KIND], cv_report=cv_report)

        report = {
            'kind': GBM_KIND,
            'n_train': len(dataset),
            'hyperparams': model.hyperparams.as_dict(),
            'columns': list(model.encoding.columns),
            'f0': model.f0,
            'n_trees': model.n_trees,
            'best_iteration': model.best_iteration,
            'initial_deviance': history.initial_deviance,
            'train_deviance': history.train_deviance,
            'cv': cv_report.as_dict() if cv_report is not None else None,
            'relative_influence': model.relative_influence(),
        }
        report_path = self._write_text(output_dir / TRAINING_REPORT_NAMES[GBM_KIND], dump_json(report))
        plot_path = output_dir / CV_PLOT_NAME
        plot_cv_deviance(cv_report, history.train_deviance, plot_path)
        return StepResult(outputs=[model_path, report_path, plot_path], value=model)

    # -- evaluation -------------------------------------------------------

    def score(self, kind, model, dataset):
        """(scores, extras) of a dataset under a loaded model"""
        if kind == MARKOV_KIND:
            scorer = MarkovScorer(model)
            mode = self.config.markov.score
            extras = {'score_mode': mode, 'unseen_state_share': scorer.unseen_share(dataset)}
            if extras['unseen_state_share'] > 0:
                logger.warning(f'{extras["unseen_state_share"]:.2%} of the claims fall in states unseen in training')
            return scorer.score_dataset(dataset, mode=mode), extras
        n_iterations = model.n_trees if self.config.gbm.trees == 'all' else model.best_iteration
        extras = {'trees_used': n_iterations, 'n_trees': model.n_trees}
        return GbmTrainingService().score(model, dataset, n_iterations=n_iterations), extras

    def load(self, model_path):
        kind = read_model_file(model_path)['kind']
        model = load_markov(model_path) if kind == MARKOV_KIND else load_gbm(model_path)[0]
        return kind, model

    def evaluate(self, model_path, dataset_path=None, output_dir=None, threshold=None, dataset=None):
        kind, model = self.load(model_path)
        if dataset is None:
            dataset = self.io.read_dataset(_required(dataset_path or self.config.paths.test, 'test'))
        output_dir = Path(output_dir or self.config.paths.output_dir)
        threshold = model.threshold if threshold is None else threshold
        result, scores = self._evaluate_model(kind, model, dataset, threshold)

        names = evaluation_file_names(kind)
        outputs = [
            self._write_text(output_dir / names['report_json'], dump_json(self.evaluator.report_dict(result))),
            self._write_text(output_dir / names['report_text'], self.evaluator.render_text(result)),
        ]
        self.evaluator.write_roc_points(result.curve, output_dir / names['roc_points'])
        plot_roc([(kind, result.curve, result.auc)], output_dir / names['roc_plot'], title=f'ROC - {kind}')
        self.evaluator.write_predictions(
            dataset.claim_ids(), dataset.labels(), scores, result.threshold,
            output_dir / names['predictions'],
        )
        outputs += [output_dir / names[key] for key in ('roc_points', 'roc_plot', 'predictions')]
        return StepResult(outputs=outputs, value=result)

    def _evaluate_model(self, kind, model, dataset, threshold):
        if len(dataset) == 0:
            raise EvaluationError('cannot evaluate on an empty dataset')
        scores, extras = self.score(kind, model, dataset)
        result = self.evaluator.evaluate(dataset.labels(), scores, threshold=threshold, model_name=kind, extras=extras)
        return result, scores

    def compare(self, markov_path, gbm_path, dataset_path=None, output_dir=None, dataset=None):
        markov_kind, markov_model = self.load(_required(markov_path, 'markov_model'))
        gbm_kind, gbm_model = self.load(_required(gbm_path, 'gbm_model'))
        if (markov_kind, gbm_kind) != (MARKOV_KIND, GBM_KIND):
            raise EvaluationError(
                f'compare expects a markov and a gbm model, got {markov_kind} and {gbm_kind}'
            )
        if dataset is None:
            dataset = self.io.read_dataset(_required(dataset_path or self.config.paths.test, 'test'))
        output_dir = Path(output_dir or self.config.paths.output_dir)

        results = []
        for kind, model in ((MARKOV_KIND, markov_model), (GBM_KIND, gbm_model)):
            result, _ = self._evaluate_model(kind, model, dataset, model.threshold)
            results.append(result)
        markov_result, gbm_result = results

        outputs = [
            self._write_text(output_dir / COMPARE_JSON_NAME, dump_json(self.evaluator.compare_dict(markov_result, gbm_result))),
            self._write_text(output_dir / COMPARE_TEXT_NAME, self.evaluator.render_compare_text(markov_result, gbm_result)),
        ]
        plot_roc(
            [(r.model_name, r.curve, r.auc) for r in results],
            output_dir / COMPARE_PLOT_NAME,
            title='ROC - markov vs gbm',
        )
        outputs.append(output_dir / COMPARE_PLOT_NAME)
        return StepResult(outputs=outputs, value=(markov_result, gbm_result))

    # -- full run ---------------------------------------------------------

    def run_paper(self, output_dir=None):
        """generate -> split -> train both -> evaluate both -> compare"""
        output_dir = Path(output_dir or self.config.paths.output_dir)
        outputs = []

        generated = self.generate(output_dir / DATASET_NAME)
        split = self.split(output_dir=output_dir, dataset=generated.value)
        train, test = split.value.train, split.value.test
        outputs += generated.outputs + split.outputs

        model_paths = {}
        for kind in (MARKOV_KIND, GBM_KIND):
            trained = self.train(kind, output_dir=output_dir, dataset=train)
            model_paths[kind] = trained.outputs[0]
            outputs += trained.outputs
            outputs += self.evaluate(model_paths[kind], output_dir=output_dir, dataset=test).outputs

        compared = self.compare(model_paths[MARKOV_KIND], model_paths[GBM_KIND], output_dir=output_dir, dataset=test)
        outputs += compared.outputs
        return StepResult(outputs=outputs, value=compared.value)

    @staticmethod
    def _write_text(path, text):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8')
        return path
