import numpy as np


class StubRng:
    """Scripted stand-in for a numpy Generator.

    ``randoms`` feeds random(); ``ints`` feeds integers(); both fall back to
    a real seeded generator when exhausted, so tests can force just the first
    few branches of an operation.
    """

    def __init__(self, randoms=(), ints=(), seed=0):
        self._randoms = list(randoms)
        self._ints = list(ints)
        self._fallback = np.random.default_rng(seed)

    def random(self):
        if self._randoms:
            return self._randoms.pop(0)
        return self._fallback.random()

    def integers(self, low, high=None, size=None):
        if size is None:
            if self._ints:
                return self._ints.pop(0)
            return self._fallback.integers(low, high)
        out = []
        for _ in range(int(size)):
            out.append(self._ints.pop(0) if self._ints else int(self._fallback.integers(low, high)))
        return np.array(out)

    def permutation(self, k):
        return self._fallback.permutation(k)

    def choice(self, *args, **kwargs):
        return self._fallback.choice(*args, **kwargs)
