"""
Management command comparing the Markov and the GBM model on one test set
"""
from core.commands import PipelineCommand
from pipeline.arguments import add_common_arguments, add_scoring_arguments
from pipeline.config import resolve_config
from pipeline.services import COMPARE_TEXT_NAME, PipelineService


class Command(PipelineCommand):
    help = 'Side-by-side metrics, AUCs and deltas of a markov and a gbm model'

    def add_arguments(self, parser):
        add_common_arguments(parser)
        parser.add_argument('--markov-model', help='Markov model file (default: paths.markov_model)')
        parser.add_argument('--gbm-model', help='GBM model file (default: paths.gbm_model)')
        parser.add_argument('--dataset', help='Test claims file (default: paths.test of the config)')
        add_scoring_arguments(parser)

    def handle(self, *args, **options):
        config = resolve_config(
            options['config'],
            seed=options['seed'],
            paths={
                'output_dir': options['output_dir'],
                'test': options['dataset'],
                'markov_model': options['markov_model'],
                'gbm_model': options['gbm_model'],
            },
            markov={'score': options['markov_score']},
            gbm={'trees': options['gbm_trees']},
        )
        service = PipelineService(config)
        result = service.compare(config.paths.markov_model, config.paths.gbm_model)
        config.write_resolved(config.paths.output_dir)

        report = [p for p in result.outputs if p.name == COMPARE_TEXT_NAME][0]
        self.stdout.write(report.read_text(encoding='utf-8'), ending='')
        self.stdout.write(self.style.SUCCESS(f'Comparison written to {report.parent}'))
