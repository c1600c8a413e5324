"""
Management command that writes a synthetic claims dataset
"""
from pathlib import Path

from core.commands import PipelineCommand
from pipeline.arguments import add_common_arguments, add_generator_arguments, generator_overrides
from pipeline.config import resolve_config
from pipeline.services import PipelineService


class Command(PipelineCommand):
    help = 'Generate a synthetic health insurance claims dataset'

    def add_arguments(self, parser):
        add_common_arguments(parser)
        add_generator_arguments(parser)
        parser.add_argument(
            '--output',
            help='Dataset file to write (default: <output-dir>/claims.csv)',
        )

    def handle(self, *args, **options):
        config = resolve_config(
            options['config'],
            seed=options['seed'],
            paths={'output_dir': options['output_dir'], 'dataset': options['output']},
            generator=generator_overrides(options),
        )
        self.stdout.write(f'Generating {config.generator.n_claims} claims (seed={config.seed})...')

        result = PipelineService(config).generate()
        dataset_path = Path(result.outputs[0])
        config.write_resolved(dataset_path.parent)

        dataset = result.value
        self.stdout.write(self.style.SUCCESS(
            f'Wrote {len(dataset)} claims ({dataset.fraud_count} fraud, {dataset.fraud_share:.2%}) to {dataset_path}'
        ))
