"""
Management command for the seeded train/test split
"""
from pathlib import Path

from core.commands import PipelineCommand
from pipeline.arguments import add_common_arguments, open_unit_float
from pipeline.config import resolve_config
from pipeline.services import PipelineService


class Command(PipelineCommand):
    help = 'Split a claims dataset into train.csv and test.csv'

    def add_arguments(self, parser):
        add_common_arguments(parser)
        parser.add_argument('--dataset', help='Claims file to split')
        parser.add_argument('--ratio', type=open_unit_float, help='Training share (default: 0.70)')

    def handle(self, *args, **options):
        config = resolve_config(
            options['config'],
            seed=options['seed'],
            paths={'output_dir': options['output_dir'], 'dataset': options['dataset']},
            split={'ratio': options['ratio']},
        )
        result = PipelineService(config).split()
        config.write_resolved(config.paths.output_dir)

        split = result.value
        train_path, test_path = (Path(p) for p in result.outputs)
        self.stdout.write(self.style.SUCCESS(
            f'Split {len(split.train) + len(split.test)} claims: '
            f'{len(split.train)} train -> {train_path}, {len(split.test)} test -> {test_path}'
        ))
