"""Sampled functions on a sorted node set in [0,1].

Values between nodes come from cubic interpolation through the four
nearest nodes; every quadrature that consumes a GridFunction inherits
that interpolation as part of its error budget.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class GridFunction:
    nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if nodes.ndim != 1 or nodes.shape != values.shape:
            raise ValueError("nodes and values must be equal-length 1-d arrays")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    def __call__(self, x):
        """Cubic 4-point interpolation (linear when fewer nodes exist)."""
        x_arr = np.asarray(x, dtype=float)
        scalar = (x_arr.ndim == 0)
        xq = np.atleast_1d(x_arr).ravel()
        n = len(self.nodes)
        if n < 4:
            out = np.interp(xq, self.nodes, self.values)
            return float(out[0]) if scalar else out.reshape(x_arr.shape)
        # window of 4 nodes starting at k, clipped to the grid
        k = np.searchsorted(self.nodes, xq, side="right") - 2
        np.clip(k, 0, n - 4, out=k)
        idx = k[:, None] + np.arange(4)[None, :]
        xs = self.nodes[idx]
        ys = self.values[idx]
        out = np.zeros_like(xq)
        for j in range(4):
            lj = np.ones_like(xq)
            for m in range(4):
                if m != j:
                    lj *= (xq - xs[:, m]) / (xs[:, j] - xs[:, m])
            out += ys[:, j] * lj
        return float(out[0]) if scalar else out.reshape(x_arr.shape)

    def with_values(self, values):
        return GridFunction(self.nodes, np.asarray(values, dtype=float))


def uniform_grid(n):
    """n nodes covering [0,1] inclusive."""
    if n < 2:
        raise ValueError("need at least two nodes")
    return np.linspace(0.0, 1.0, n)
