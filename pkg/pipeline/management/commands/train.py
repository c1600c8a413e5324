"""
Management command that trains the Markov or the GBM fraud model
"""
from core.commands import PipelineCommand
from pipeline.arguments import (
    add_common_arguments, add_gbm_arguments, add_markov_arguments, binning_overrides, gbm_overrides,
    markov_overrides, unit_float,
)
from pipeline.config import GBM_TREE_MODES, resolve_config
from pipeline.persistence import GBM_KIND, MARKOV_KIND, MODEL_KINDS
from pipeline.services import PipelineService


class Command(PipelineCommand):
    help = 'Train a fraud model (markov or gbm) on a training claims file'

    def add_arguments(self, parser):
        add_common_arguments(parser)
        parser.add_argument('--kind', required=True, choices=MODEL_KINDS, help='Model to train')
        parser.add_argument('--train', help='Training claims file (default: paths.train of the config)')
        parser.add_argument('--threshold', type=unit_float, help='Decision threshold stored with the model')
        add_markov_arguments(parser)
        add_gbm_arguments(parser)
        parser.add_argument('--gbm-trees', choices=GBM_TREE_MODES,
                            help='Score with the CV-selected iteration or every tree (default: best)')

    def handle(self, *args, **options):
        kind = options['kind']
        threshold = options['threshold']
        config = resolve_config(
            options['config'],
            seed=options['seed'],
            paths={'output_dir': options['output_dir'], 'train': options['train']},
            binning=binning_overrides(options),
            markov=markov_overrides(options, threshold if kind == MARKOV_KIND else None),
            gbm=gbm_overrides(options, threshold if kind == GBM_KIND else None),
        )
        if kind == GBM_KIND:
            gbm = config.gbm
            self.stdout.write(
                f'Training GBM: {gbm.n_trees} trees, depth {gbm.max_depth}, '
                f'learning rate {gbm.learning_rate}, {gbm.cv_folds}-fold CV...'
            )
        else:
            self.stdout.write(f'Training Markov model over {", ".join(config.markov.features)}...')

        result = PipelineService(config).train(kind)
        config.write_resolved(config.paths.output_dir)

        model = result.value
        if kind == GBM_KIND:
            summary = f'{model.n_trees} trees, best iteration {model.best_iteration}'
        else:
            summary = f'{model.n_states} states, prior {model.prior:.4f}'
        self.stdout.write(self.style.SUCCESS(f'Trained {kind} model ({summary}) -> {result.outputs[0]}'))
