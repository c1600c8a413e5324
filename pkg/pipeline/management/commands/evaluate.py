"""
Management command that evaluates a saved model on a claims file
"""
from core.commands import PipelineCommand
from pipeline.arguments import add_common_arguments, add_scoring_arguments, unit_float
from pipeline.config import resolve_config
from pipeline.services import PipelineService


class Command(PipelineCommand):
    help = 'Evaluate a saved model: confusion matrix, metrics, ROC points and plot, predictions'

    def add_arguments(self, parser):
        add_common_arguments(parser)
        parser.add_argument('--model', required=True, help='Model file written by the train command')
        parser.add_argument('--dataset', help='Claims file to score (default: paths.test of the config)')
        parser.add_argument('--threshold', type=unit_float, help='Decision threshold (default: the model\'s)')
        add_scoring_arguments(parser)

    def handle(self, *args, **options):
        config = resolve_config(
            options['config'],
            seed=options['seed'],
            paths={'output_dir': options['output_dir'], 'test': options['dataset']},
            markov={'score': options['markov_score']},
            gbm={'trees': options['gbm_trees']},
        )
        result = PipelineService(config).evaluate(options['model'], threshold=options['threshold'])
        config.write_resolved(config.paths.output_dir)

        evaluation = result.value
        rounded = evaluation.metrics.rounded()
        self.stdout.write(self.style.SUCCESS(f'Evaluated {evaluation.model_name} on {evaluation.confusion.total} claims'))
        for name, value in rounded.items():
            self.stdout.write(f'  {name:<12} {"undefined" if value is None else f"{value:.4f}"}')
        self.stdout.write(f'  {"auc":<12} {evaluation.auc:.4f}')
