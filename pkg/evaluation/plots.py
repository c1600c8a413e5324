"""
SVG figures: ROC curves with the AUC in the legend, and the CV deviance curve.

Figures are drawn through the object API (no pyplot state) with a
fixed SVG hash salt and no date metadata, so identical inputs give identical
files.
"""
import logging

import matplotlib
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

logger = logging.getLogger(__name__)

SVG_RC = {
    'svg.hashsalt': 'fraudlab',
    'svg.fonttype': 'none',
    'font.family': 'DejaVu Sans',
    'axes.grid': True,
    'grid.alpha': 0.3,
}


def _save(figure, path):
    FigureCanvasSVG(figure)
    figure.savefig(path, format='svg', metadata={'Date': None})
    logger.debug(f'Figure written to {path}')


def plot_roc(curves, path, title='ROC'):
    """``curves`` is a sequence of (name, RocCurve, auc)"""
    with matplotlib.rc_context(SVG_RC):
        figure = Figure(figsize=(6, 6))
        ax = figure.add_subplot(1, 1, 1)
        for name, curve, area in curves:
            ax.plot(curve.fpr, curve.tpr, lw=1.5, label=f'{name} (AUC = {area:.4f})')
        ax.plot([0, 1], [0, 1], 'k--', lw=1, label='Random (AUC = 0.5000)')
        ax.set_xlim(0.0, 1.0)
        ax.set_ylim(0.0, 1.02)
        ax.set_xlabel('False positive rate (1 - specificity)')
        ax.set_ylabel('True positive rate (sensitivity)')
        ax.set_title(title)
        ax.legend(loc='lower right')
        figure.tight_layout()
        _save(figure, path)


def plot_cv_deviance(cv_report, train_deviance, path, title='Bernoulli deviance'):
    """Mean held-out deviance and training deviance per iteration; dotted line at the best iteration"""
    with matplotlib.rc_context(SVG_RC):
        figure = Figure(figsize=(7, 4.5))
        ax = figure.add_subplot(1, 1, 1)
        iterations = range(1, len(train_deviance) + 1)
        ax.plot(iterations, train_deviance, color='black', lw=1.2, label='training')
        if cv_report is not None and cv_report.mean_deviance:
            ax.plot(range(1, len(cv_report.mean_deviance) + 1), cv_report.mean_deviance,
                    color='green', lw=1.2, label=f'{cv_report.folds}-fold CV')
            ax.axvline(cv_report.best_iteration, color='blue', linestyle=':', lw=1.2,
                       label=f'best iteration = {cv_report.best_iteration}')
        ax.set_xlabel('Iteration')
        ax.set_ylabel('Bernoulli deviance')
        ax.set_title(title)
        ax.legend(loc='upper right')
        figure.tight_layout()
        _save(figure, path)
