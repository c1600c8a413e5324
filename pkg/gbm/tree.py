"""
Exact greedy regression-tree growth on boosting residuals.

Candidate thresholds are the distinct feature values present at a node (except
the largest); ``x <= threshold`` goes left. A split's gain is the squared-error
reduction ``S_L^2/n_L + S_R^2/n_R - S^2/n`` over the node's residuals. The
winning split is the first one, in (feature, threshold) order, whose gain is
within ``SPLIT_TIE_TOLERANCE`` (relative) of the best gain at the node. A node
splits only when that gain exceeds the same fraction of its residual sum of
squares.
"""
import logging

import numpy as np

logger = logging.getLogger(__name__)

SPLIT_TIE_TOLERANCE = 1e-10


class ExactSplitFinder:
    """Per-feature rank codes of the training matrix, computed once per fit"""

    def __init__(self, X):
        self.X = np.asarray(X, dtype=float)
        self.values = []
        self.codes = []
        for column in self.X.T:
            distinct, codes = np.unique(column, return_inverse=True)
            self.values.append(distinct)
            self.codes.append(codes.reshape(-1))

    @property
    def n_features(self):
        return self.X.shape[1]

    def best_split(self, rows, residuals, min_leaf_count):
        """
        Best (feature, threshold, gain) for the node holding ``rows``, or None
        when no admissible split has a positive gain.
        """
        n = rows.size
        if n < 2 * min_leaf_count:
            return None
        node_residuals = residuals[rows]
        total = node_residuals.sum()
        parent_score = total * total / n

        candidates = []
        best_gain = -np.inf
        for f in range(self.n_features):
            codes = self.codes[f][rows]
            width = self.values[f].size
            counts = np.bincount(codes, minlength=width)
            sums = np.bincount(codes, weights=node_residuals, minlength=width)
            present = np.flatnonzero(counts)
            if present.size < 2:
                continue
            n_left = np.cumsum(counts[present])[:-1]
            s_left = np.cumsum(sums[present])[:-1]
            n_right = n - n_left
            s_right = total - s_left
            gains = s_left * s_left / n_left + s_right * s_right / n_right - parent_score
            gains[(n_left < min_leaf_count) | (n_right < min_leaf_count)] = -np.inf
            candidates.append((f, present[:-1], gains))
            best_gain = max(best_gain, gains.max())

        # gains at float-noise level (e.g. a node with constant residuals) do not split
        if not best_gain > SPLIT_TIE_TOLERANCE * float(node_residuals @ node_residuals):
            return None
        floor = best_gain - SPLIT_TIE_TOLERANCE * best_gain
        for f, positions, gains in candidates:
            hits = np.flatnonzero(gains >= floor)
            if hits.size:
                i = hits[0]
                return f, float(self.values[f][positions[i]]), float(gains[i])
        return None


class TreeGrower:
    """
    Grows one depth-limited tree depth-first. Leaves are returned with their
    row sets; leaf values are assigned by the caller.
    """

    def __init__(self, finder, max_depth, min_leaf_count):
        self.finder = finder
        self.max_depth = max_depth
        self.min_leaf_count = min_leaf_count

    def grow(self, residuals, rows=None):
        if rows is None:
            rows = np.arange(self.finder.X.shape[0])
        nodes = {'feature': [], 'threshold': [], 'left': [], 'right': [], 'gain': []}
        leaf_rows = {}
        self._grow(rows, 0, residuals, nodes, leaf_rows)
        logger.debug(f"Tree grown: {len(nodes['feature'])} nodes, {len(leaf_rows)} leaves")
        return nodes, leaf_rows

    def _grow(self, rows, depth, residuals, nodes, leaf_rows):
        node = len(nodes['feature'])
        for name, placeholder in (('feature', -1), ('threshold', 0.0), ('left', -1), ('right', -1), ('gain', 0.0)):
            nodes[name].append(placeholder)

        split = None
        if depth < self.max_depth:
            split = self.finder.best_split(rows, residuals, self.min_leaf_count)
        if split is None:
            leaf_rows[node] = rows
            return node

        f, threshold, gain = split
        goes_left = self.finder.X[rows, f] <= threshold
        left = self._grow(rows[goes_left], depth + 1, residuals, nodes, leaf_rows)
        right = self._grow(rows[~goes_left], depth + 1, residuals, nodes, leaf_rows)
        nodes['feature'][node] = f
        nodes['threshold'][node] = threshold
        nodes['left'][node] = left
        nodes['right'][node] = right
        nodes['gain'][node] = gain
        return node
