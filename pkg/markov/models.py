"""
Markov fraud model: a first-order chain over the categorized features
X1 -> X2 -> ... -> Xn followed by P(Fraud | state).
"""
from dataclasses import dataclass, field

from discretize.models import UNSEEN, StateTable
from discretize.services import ClaimCategorizer

MARKOV_FEATURES = ('benefit_type', 'days_stayed', 'diagnosis_code', 'hospital_type', 'net_amount')


@dataclass(frozen=True)
class StateFraudStats:
    fraud_count: int
    total_count: int
    probability: float

    @property
    def not_fraud_probability(self):
        return 1.0 - self.probability


@dataclass(frozen=True)
class TransitionTable:
    """P(to = b | from = a) for one adjacent feature pair"""
    from_feature: str
    to_feature: str
    row_totals: dict
    probabilities: dict

    def probability(self, a, b, alpha, n_targets):
        row = self.probabilities.get(a)
        if row is None:
            # Unseen source category: uniform over the target categories
            return 1.0 / n_targets if n_targets else 0.0
        if b in row:
            return row[b]
        return alpha / (self.row_totals[a] + alpha * n_targets)


@dataclass(frozen=True)
class MarkovFraudModel:
    feature_order: tuple
    categories: tuple
    initial_counts: dict
    initial: dict
    transitions: tuple
    state_table: StateTable
    state_stats: tuple
    binning: dict = field(default_factory=dict)
    alpha: float = 1.0
    prior: float = 0.0
    threshold: float = 0.5
    n_train: int = 0

    @property
    def n_states(self):
        return len(self.state_table)

    def categorizer(self):
        return ClaimCategorizer(self.feature_order, self.binning)

    def initial_probability(self, value):
        if value in self.initial:
            return self.initial[value]
        return self.alpha / (self.n_train + self.alpha * len(self.categories[0]))

    def transition_probability(self, position, a, b):
        table = self.transitions[position]
        return table.probability(a, b, self.alpha, len(self.categories[position + 1]))

    def fraud_probability(self, state_id):
        if state_id == UNSEEN:
            return self.prior
        return self.state_stats[state_id - 1].probability

    def state_summary(self):
        """Per-state rows (id, tuple, fraud count, total, P(Fraud|state)) in id order"""
        return [
            {
                'state': state_id,
                'categories': dict(zip(self.feature_order, state)),
                'fraud_count': stats.fraud_count,
                'total_count': stats.total_count,
                'fraud_probability': stats.probability,
            }
            for state_id, (state, stats) in enumerate(zip(self.state_table.states, self.state_stats), start=1)
        ]
