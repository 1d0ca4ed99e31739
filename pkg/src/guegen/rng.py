"""Deterministic seeded variate generation.

Every sampler in this package draws its randomness through a
:class:`RandomStream`.  The stream wraps a PCG64 bit generator (period
2^128) and exposes uniforms plus the derived variates the samplers
need: standard normals (Marsaglia polar method), fair signs, and exact
gamma variates (Marsaglia-Tsang rejection with the shape-boost identity
for shape < 1).  All derived variates are built from the uniform stream,
so a (seed, call sequence) pair fully determines the output.

Child streams for parallel batches come from ``spawn``, which derives
independent states via numpy's SeedSequence spawn keys.
"""

import math

import numpy as np

from .errors import ParameterError

_SQRT2 = math.sqrt(2.0)


class RandomStream:
    """Single-owner source of variates; not thread-safe by design.

    Parameters
    ----------
    seed : int
        Master seed, any integer in [0, 2^64).
    spawn_key : tuple of int, optional
        Derivation path for child streams; leave empty for a root stream.
    """

    def __init__(self, seed, spawn_key=()):
        seed = int(seed)
        if seed < 0 or seed >= 2**64:
            raise ParameterError(f"seed must be in [0, 2^64), got {seed}")
        self.seed = seed
        self.spawn_key = tuple(int(k) for k in spawn_key)
        ss = np.random.SeedSequence(seed, spawn_key=self.spawn_key)
        self._gen = np.random.Generator(np.random.PCG64(ss))
        self.draw_count = 0
        self._spare_normal = None

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, spawn_key={self.spawn_key})"

    def spawn(self, count):
        """Derive ``count`` independent child streams from this stream's seed."""
        return [
            RandomStream(self.seed, self.spawn_key + (i,)) for i in range(count)
        ]

    # ------------------------------------------------------------------
    # uniforms
    # ------------------------------------------------------------------

    def uniform(self):
        """One uniform double in [0, 1); never returns 1.0.

        Advances the underlying bit generator by exactly one 64-bit word.
        """
        self.draw_count += 1
        return float(self._gen.random())

    def uniforms(self, size):
        """Array of ``size`` uniforms in [0, 1)."""
        size = int(size)
        self.draw_count += size
        return self._gen.random(size)

    # ------------------------------------------------------------------
    # signs and indices
    # ------------------------------------------------------------------

    def rademacher(self):
        """Fair sign: +1.0 or -1.0 with probability 1/2 each (one uniform)."""
        return 1.0 if self.uniform() < 0.5 else -1.0

    def rademachers(self, size):
        return np.where(self.uniforms(size) < 0.5, 1.0, -1.0)

    def index(self, n):
        """Uniform integer in {0, ..., n-1} (one uniform)."""
        if n < 1:
            raise ParameterError(f"index range must be >= 1, got {n}")
        return min(int(self.uniform() * n), n - 1)

    def indices(self, n, size):
        if n < 1:
            raise ParameterError(f"index range must be >= 1, got {n}")
        k = (self.uniforms(size) * n).astype(np.int64)
        return np.minimum(k, n - 1)

    # ------------------------------------------------------------------
    # normals (Marsaglia polar method)
    # ------------------------------------------------------------------

    def standard_normal(self):
        """One N(0,1) variate.

        The polar method yields pairs; the unused partner is cached and
        returned by the next scalar call, so consumption alternates
        between ~2.55 uniforms and zero.
        """
        if self._spare_normal is not None:
            z, self._spare_normal = self._spare_normal, None
            return z
        while True:
            u = 2.0 * self.uniform() - 1.0
            v = 2.0 * self.uniform() - 1.0
            s = u * u + v * v
            if 0.0 < s < 1.0:
                break
        scale = math.sqrt(-2.0 * math.log(s) / s)
        self._spare_normal = v * scale
        return u * scale

    def standard_normals(self, size):
        """Array of ``size`` N(0,1) variates (does not touch the scalar cache)."""
        size = int(size)
        out = np.empty(size)
        have = 0
        while have < size:
            # polar acceptance is pi/4; each accepted pair gives 2 normals
            pairs = int((size - have) * 0.7) + 8
            u = 2.0 * self.uniforms(pairs) - 1.0
            v = 2.0 * self.uniforms(pairs) - 1.0
            s = u * u + v * v
            ok = (s > 0.0) & (s < 1.0)
            s = s[ok]
            scale = np.sqrt(-2.0 * np.log(s) / s)
            z = np.concatenate([u[ok] * scale, v[ok] * scale])
            take = min(z.size, size - have)
            out[have : have + take] = z[:take]
            have += take
        return out

    # ------------------------------------------------------------------
    # gamma (Marsaglia-Tsang, exact rejection)
    # ------------------------------------------------------------------

    def gamma(self, shape):
        """One Gamma(shape, scale=1) variate; shape must be > 0.

        Shapes below 1 use the boost identity
        Gamma(a) = Gamma(a+1) * U^(1/a).
        """
        shape = float(shape)
        if not shape > 0.0:
            raise ParameterError(f"gamma shape must be > 0, got {shape}")
        if shape < 1.0:
            g = self._gamma_mt(shape + 1.0)
            u = self.uniform()
            return g * u ** (1.0 / shape)
        return self._gamma_mt(shape)

    def _gamma_mt(self, shape):
        d = shape - 1.0 / 3.0
        c = 1.0 / math.sqrt(9.0 * d)
        while True:
            x = self.standard_normal()
            v = 1.0 + c * x
            if v <= 0.0:
                continue
            v = v * v * v
            u = self.uniform()
            if u < 1.0 - 0.0331 * x * x * x * x:
                return d * v
            # u == 0 always accepts (log 0 = -inf beats any finite bound)
            if u == 0.0 or math.log(u) < 0.5 * x * x + d * (1.0 - v + math.log(v)):
                return d * v

    def gammas(self, shape, size):
        """Array of ``size`` Gamma(shape, 1) variates."""
        shape = float(shape)
        if not shape > 0.0:
            raise ParameterError(f"gamma shape must be > 0, got {shape}")
        size = int(size)
        if shape < 1.0:
            g = self._gammas_mt(shape + 1.0, size)
            u = self.uniforms(size)
            return g * u ** (1.0 / shape)
        return self._gammas_mt(shape, size)

    def _gammas_mt(self, shape, size):
        d = shape - 1.0 / 3.0
        c = 1.0 / math.sqrt(9.0 * d)
        out = np.empty(size)
        have = 0
        while have < size:
            m = int((size - have) * 1.1) + 16
            x = self.standard_normals(m)
            u = self.uniforms(m)
            v = 1.0 + c * x
            pos = v > 0.0
            v = v * v * v
            x2 = x * x
            with np.errstate(divide="ignore", invalid="ignore"):
                squeeze = u < 1.0 - 0.0331 * x2 * x2
                main = np.log(u) < 0.5 * x2 + d * (1.0 - v + np.log(v))
            ok = pos & (squeeze | main)
            z = d * v[ok]
            take = min(z.size, size - have)
            out[have : have + take] = z[:take]
            have += take
        return out
