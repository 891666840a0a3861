"""Small fully connected networks with hand-written backprop, and Adam."""
import numpy as np


class Mlp:
    """ReLU multilayer perceptron with a linear output layer.

    Parameters are kept in ``self.params`` as ``[W0, b0, W1, b1, ...]`` with
    ``W_i`` of shape ``(fan_in, fan_out)``.
    """

    def __init__(self, sizes, rng):
        self.sizes = tuple(int(s) for s in sizes)
        self.params = []
        for fan_in, fan_out in zip(self.sizes[:-1], self.sizes[1:]):
            bound = 1.0 / np.sqrt(fan_in)
            self.params.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            self.params.append(rng.uniform(-bound, bound, size=fan_out))

    @property
    def num_layers(self):
        return len(self.params) // 2

    def forward(self, x):
        """Return ``(output, cache)``; the cache feeds ``backward``."""
        acts = [np.asarray(x, dtype=float)]
        h = acts[0]
        for i in range(self.num_layers):
            w, b = self.params[2 * i], self.params[2 * i + 1]
            h = h @ w + b
            if i < self.num_layers - 1:
                h = np.maximum(h, 0.0)
            acts.append(h)
        return h, acts

    def __call__(self, x):
        return self.forward(x)[0]

    def backward(self, cache, dout):
        """Gradients of ``sum(dout * output)`` w.r.t. params and input."""
        grads = [None] * len(self.params)
        g = dout
        for i in reversed(range(self.num_layers)):
            if i < self.num_layers - 1:
                g = g * (cache[i + 1] > 0.0)
            grads[2 * i] = cache[i].T @ g
            grads[2 * i + 1] = g.sum(axis=0)
            g = g @ self.params[2 * i].T
        return grads, g

    def copy(self):
        other = Mlp.__new__(Mlp)
        other.sizes = self.sizes
        other.params = [p.copy() for p in self.params]
        return other

    def flat(self):
        return np.concatenate([p.ravel() for p in self.params])

    def set_flat(self, vec):
        vec = np.asarray(vec, dtype=float)
        total = sum(p.size for p in self.params)
        if vec.size != total:
            raise ValueError(f"expected {total} parameters, got {vec.size}")
        o = 0
        for i, p in enumerate(self.params):
            self.params[i] = vec[o:o + p.size].reshape(p.shape).copy()
            o += p.size


def soft_update(target, source, tau):
    """``target <- tau * source + (1 - tau) * target`` in place."""
    if len(target.params) != len(source.params):
        raise ValueError("networks have different layouts")
    for i, (t, s) in enumerate(zip(target.params, source.params)):
        if t.shape != s.shape:
            raise ValueError(f"shape mismatch {t.shape} vs {s.shape}")
        target.params[i] = tau * s + (1.0 - tau) * t


class Adam:
    def __init__(self, params, lr=3e-4, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, params, grads):
        """Update ``params`` (a list of arrays) in place."""
        if len(params) != len(grads):
            raise ValueError("parameter and gradient lists differ in length")
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        corr = np.sqrt(1.0 - b2**self.t) / (1.0 - b1**self.t)
        for i, (p, g) in enumerate(zip(params, grads)):
            if p.shape != np.shape(g):
                raise ValueError(f"gradient shape {np.shape(g)} does not match {p.shape}")
            self.m[i] = b1 * self.m[i] + (1.0 - b1) * g
            self.v[i] = b2 * self.v[i] + (1.0 - b2) * g * g
            p -= self.lr * corr * self.m[i] / (np.sqrt(self.v[i]) + self.eps)

    def state_dict(self):
        return {"t": self.t, "m": [m.tolist() for m in self.m], "v": [v.tolist() for v in self.v]}

    def load_state_dict(self, data):
        self.t = int(data["t"])
        self.m = [np.array(m, dtype=float).reshape(old.shape) for m, old in zip(data["m"], self.m)]
        self.v = [np.array(v, dtype=float).reshape(old.shape) for v, old in zip(data["v"], self.v)]
