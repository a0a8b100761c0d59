"""Dense layers with hand-derived backward passes.

Everything runs in float64.  Each layer keeps its forward cache from the most
recent call, so a layer instance serves one position in one network.  Gradients
are written on ``backward`` and read off by the optimizer.
"""

from __future__ import annotations

import numpy as np

from octal._accel import edge_aggregate


def glorot(rng: np.random.Generator, n_in: int, n_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (n_in + n_out))
    return rng.uniform(-limit, limit, size=(n_in, n_out))


class Linear:
    def __init__(self, n_in: int, n_out: int, rng: np.random.Generator):
        self.w = glorot(rng, n_in, n_out)
        self.b = np.zeros(n_out)
        self.gw = np.zeros_like(self.w)
        self.gb = np.zeros_like(self.b)
        self._x: np.ndarray | None = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._x = x
        return x @ self.w + self.b

    def backward(self, g: np.ndarray) -> np.ndarray:
        self._x_check()
        self.gw = self._x.T @ g
        self.gb = g.sum(axis=0)
        return g @ self.w.T

    def _x_check(self) -> None:
        if self._x is None:
            raise RuntimeError("backward before forward")

    def params(self) -> dict[str, np.ndarray]:
        return {"w": self.w, "b": self.b}

    def grads(self) -> dict[str, np.ndarray]:
        return {"w": self.gw, "b": self.gb}

    def arrays(self) -> dict[str, np.ndarray]:
        return self.params()


class ReLU:
    def __init__(self):
        self._mask: np.ndarray | None = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._mask = x > 0
        return x * self._mask

    def backward(self, g: np.ndarray) -> np.ndarray:
        return g * self._mask


class BatchNorm1d:
    """Per-feature normalization over the row dimension with running statistics.

    Training normalizes by the biased batch variance and pushes the unbiased
    variance into the running estimate; evaluation uses the running statistics
    only, which keeps eval-mode forwards pure.
    """

    def __init__(self, dim: int, momentum: float = 0.1, eps: float = 1e-5):
        self.gamma = np.ones(dim)
        self.beta = np.zeros(dim)
        self.running_mean = np.zeros(dim)
        self.running_var = np.ones(dim)
        self.momentum = momentum
        self.eps = eps
        self.ggamma = np.zeros_like(self.gamma)
        self.gbeta = np.zeros_like(self.beta)
        self._cache: tuple | None = None

    def forward(self, x: np.ndarray, train: bool, update_stats: bool = True) -> np.ndarray:
        if train:
            n = len(x)
            mean = x.mean(axis=0)
            var = x.var(axis=0)
            istd = 1.0 / np.sqrt(var + self.eps)
            xhat = (x - mean) * istd
            self._cache = (xhat, istd, x - mean, n)
            if update_stats:
                unbiased = var * (n / (n - 1)) if n > 1 else var
                self.running_mean = (1 - self.momentum) * self.running_mean + self.momentum * mean
                self.running_var = (1 - self.momentum) * self.running_var + self.momentum * unbiased
            return self.gamma * xhat + self.beta
        istd = 1.0 / np.sqrt(self.running_var + self.eps)
        return self.gamma * (x - self.running_mean) * istd + self.beta

    def backward(self, g: np.ndarray) -> np.ndarray:
        if self._cache is None:
            raise RuntimeError("backward before a training-mode forward")
        xhat, istd, centered, n = self._cache
        self.ggamma = (g * xhat).sum(axis=0)
        self.gbeta = g.sum(axis=0)
        gxhat = g * self.gamma
        gvar = (gxhat * centered * -0.5 * istd**3).sum(axis=0)
        gmean = (-gxhat * istd).sum(axis=0) + gvar * (-2.0 / n) * centered.sum(axis=0)
        return gxhat * istd + gvar * 2.0 * centered / n + gmean / n

    def params(self) -> dict[str, np.ndarray]:
        return {"gamma": self.gamma, "beta": self.beta}

    def grads(self) -> dict[str, np.ndarray]:
        return {"gamma": self.ggamma, "beta": self.gbeta}

    def arrays(self) -> dict[str, np.ndarray]:
        return {
            "gamma": self.gamma,
            "beta": self.beta,
            "running_mean": self.running_mean,
            "running_var": self.running_var,
        }


class Dropout:
    def __init__(self, rate: float):
        self.rate = rate
        self._mask: np.ndarray | None = None

    def forward(self, x: np.ndarray, train: bool, rng: np.random.Generator | None) -> np.ndarray:
        if not train or rng is None or self.rate <= 0:
            self._mask = None
            return x
        keep = (rng.random(x.shape) >= self.rate) / (1.0 - self.rate)
        self._mask = keep
        return x * keep

    def backward(self, g: np.ndarray) -> np.ndarray:
        return g if self._mask is None else g * self._mask


class GINConv:
    """Sum-aggregation message passing: MLP((1 + eps) h_v + sum of neighbors),
    then batch normalization, then ReLU.  The per-layer MLP is two linear maps
    with a ReLU between."""

    def __init__(self, n_in: int, n_out: int, rng: np.random.Generator, eps: float = 0.0):
        self.eps = eps
        self.lin1 = Linear(n_in, n_out, rng)
        self.relu1 = ReLU()
        self.lin2 = Linear(n_out, n_out, rng)
        self.bn = BatchNorm1d(n_out)
        self.relu2 = ReLU()
        self._edges: tuple[np.ndarray, np.ndarray] | None = None
        self._n: int = 0

    def forward(
        self,
        x: np.ndarray,
        src: np.ndarray,
        dst: np.ndarray,
        train: bool,
        update_stats: bool = True,
    ) -> np.ndarray:
        self._edges = (src, dst)
        self._n = len(x)
        z = (1.0 + self.eps) * x + edge_aggregate(x, src, dst, None, len(x))
        h = self.lin2.forward(self.relu1.forward(self.lin1.forward(z)))
        return self.relu2.forward(self.bn.forward(h, train, update_stats))

    def backward(self, g: np.ndarray) -> np.ndarray:
        g = self.bn.backward(self.relu2.backward(g))
        g = self.lin1.backward(self.relu1.backward(self.lin2.backward(g)))
        src, dst = self._edges
        return (1.0 + self.eps) * g + edge_aggregate(g, dst, src, None, self._n)

    def _subs(self) -> dict[str, object]:
        return {"lin1": self.lin1, "lin2": self.lin2, "bn": self.bn}

    def params(self):
        return _flatten(self._subs(), "params")

    def grads(self):
        return _flatten(self._subs(), "grads")

    def arrays(self):
        return _flatten(self._subs(), "arrays")


class GCNConv:
    """Symmetric-normalized convolution with self-loops, then batch
    normalization and ReLU: relu(bn(D^-1/2 (A + I) D^-1/2 X W + b))."""

    def __init__(self, n_in: int, n_out: int, rng: np.random.Generator):
        self.lin = Linear(n_in, n_out, rng)
        self.bn = BatchNorm1d(n_out)
        self.relu = ReLU()
        self._cache: tuple | None = None

    def forward(
        self,
        x: np.ndarray,
        src: np.ndarray,
        dst: np.ndarray,
        train: bool,
        update_stats: bool = True,
    ) -> np.ndarray:
        n = len(x)
        deg = np.bincount(dst, minlength=n).astype(np.float64) + 1.0
        coef = 1.0 / np.sqrt(deg[src] * deg[dst])
        self_coef = (1.0 / deg)[:, None]
        xw = x @ self.lin.w
        agg = edge_aggregate(xw, src, dst, coef, n) + xw * self_coef
        self._cache = (x, src, dst, coef, self_coef, n)
        return self.relu.forward(self.bn.forward(agg + self.lin.b, train, update_stats))

    def backward(self, g: np.ndarray) -> np.ndarray:
        x, src, dst, coef, self_coef, n = self._cache
        g = self.bn.backward(self.relu.backward(g))
        self.lin.gb = g.sum(axis=0)
        gxw = edge_aggregate(g, dst, src, coef, n) + g * self_coef
        self.lin.gw = x.T @ gxw
        return gxw @ self.lin.w.T

    def _subs(self):
        return {"lin": self.lin, "bn": self.bn}

    def params(self):
        return _flatten(self._subs(), "params")

    def grads(self):
        return _flatten(self._subs(), "grads")

    def arrays(self):
        return _flatten(self._subs(), "arrays")


def _flatten(subs: dict[str, object], what: str) -> dict[str, np.ndarray]:
    out: dict[str, np.ndarray] = {}
    for prefix, layer in subs.items():
        for name, arr in getattr(layer, what)().items():
            out[f"{prefix}.{name}"] = arr
    return out
