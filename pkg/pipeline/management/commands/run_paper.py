"""
Management command chaining generate -> split -> train both -> evaluate both -> compare
"""
from core.commands import PipelineCommand
from pipeline.arguments import (
    add_common_arguments, add_gbm_arguments, add_generator_arguments, add_markov_arguments, add_scoring_arguments,
    binning_overrides, gbm_overrides, generator_overrides, markov_overrides, open_unit_float, unit_float,
)
from pipeline.config import resolve_config
from pipeline.services import PipelineService


class Command(PipelineCommand):
    help = 'Run the whole pipeline with the default configuration (or --config / flags)'

    def add_arguments(self, parser):
        add_common_arguments(parser)
        add_generator_arguments(parser)
        parser.add_argument('--ratio', type=open_unit_float, help='Training share (default: 0.70)')
        parser.add_argument('--threshold', type=unit_float, help='Decision threshold for both models')
        add_markov_arguments(parser)
        add_gbm_arguments(parser)
        add_scoring_arguments(parser)

    def handle(self, *args, **options):
        threshold = options['threshold']
        config = resolve_config(
            options['config'],
            seed=options['seed'],
            paths={'output_dir': options['output_dir']},
            generator=generator_overrides(options),
            split={'ratio': options['ratio']},
            binning=binning_overrides(options),
            markov=markov_overrides(options, threshold),
            gbm=gbm_overrides(options, threshold),
        )
        self.stdout.write(
            f'Running pipeline: {config.generator.n_claims} claims, seed {config.seed}, '
            f'output {config.paths.output_dir}'
        )
        config.write_resolved(config.paths.output_dir)
        result = PipelineService(config).run_paper()

        markov_result, gbm_result = result.value
        for evaluation in (markov_result, gbm_result):
            rounded = evaluation.metrics.rounded()
            self.stdout.write(
                f'  {evaluation.model_name:<7} accuracy {_fmt(rounded["accuracy"])}  F1 {_fmt(rounded["f1"])}  AUC {evaluation.auc:.4f}'
            )
        self.stdout.write(self.style.SUCCESS(f'Pipeline finished: {len(result.outputs)} files written'))


def _fmt(value):
    return 'undefined' if value is None else f'{value:.4f}'
