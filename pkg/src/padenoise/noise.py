"""Seeded, reproducible coefficient noise.

Draws come from numpy's counter-based Philox generator keyed by
``(seed, realization index)``; the k-th 64-bit output is the draw for
coefficient k, so a value never depends on how work was scheduled.  Each
draw ``u`` maps to the dyadic rational ``(2u + 1 - 2**64) / 2**64`` in
(-1, 1), which keeps noisy series exactly representable.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from gmpy2 import mpq, mpz

from .numeric import as_rational

MODES = ("additive", "truncation", "none")
_TWO64 = mpz(1) << 64
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class NoiseSpec:
    mode: str = "none"
    epsilon: mpq | None = None
    digits: int | None = None
    seed: int = 0
    realizations: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown noise mode {self.mode!r}")
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        if self.mode == "additive":
            if self.epsilon is None:
                raise ValueError("additive noise needs epsilon")
            eps = as_rational(self.epsilon)
            object.__setattr__(self, "epsilon", eps)
            if not (0 < eps < 1):
                raise ValueError("epsilon must satisfy 0 < epsilon < 1")
        elif self.mode == "truncation":
            if self.digits is None or int(self.digits) < 1:
                raise ValueError("truncation noise needs digits >= 1")
            object.__setattr__(self, "digits", int(self.digits))

    @classmethod
    def additive(cls, epsilon, seed: int = 0, realizations: int = 1) -> "NoiseSpec":
        return cls("additive", epsilon=as_rational(epsilon), seed=seed, realizations=realizations)

    @classmethod
    def truncation(cls, digits: int, seed: int = 0) -> "NoiseSpec":
        return cls("truncation", digits=digits, seed=seed)

    @classmethod
    def none(cls) -> "NoiseSpec":
        return cls("none")

    @property
    def noise_digits(self) -> int:
        """Decimal digits of coefficient information the noise preserves."""
        if self.mode == "truncation":
            return self.digits
        if self.mode == "additive":
            e = self.epsilon
            return max(0, len(str(e.denominator)) - len(str(e.numerator)))
        return 0

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "epsilon": None if self.epsilon is None else str(self.epsilon),
            "digits": self.digits,
            "seed": self.seed,
            "realizations": self.realizations,
        }


@dataclass(frozen=True)
class NoiseRealization:
    spec: NoiseSpec
    index: int
    r_values: tuple = field(default=())
    derived_seed: int = 0


def _key(seed: int, index: int) -> np.ndarray:
    return np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)


def derived_seed(seed: int, index: int) -> int:
    k = _key(seed, index)
    return int(k[1]) << 64 | int(k[0])


def raw_draws(seed: int, index: int, count: int) -> np.ndarray:
    """The first ``count`` 64-bit Philox outputs for ``(seed, index)``."""
    bg = np.random.Philox(key=_key(seed, index))
    return bg.random_raw(count).astype(np.uint64)


def draw_realization(spec: NoiseSpec, index: int, count: int) -> NoiseRealization:
    """``count`` iid uniform[-1, 1] draws for realization ``index``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    ds = derived_seed(spec.seed, index)
    if spec.mode != "additive":
        return NoiseRealization(spec, index, (), ds)
    u = raw_draws(spec.seed, index, count)
    r = tuple(mpq(2 * mpz(int(x)) + 1 - _TWO64, _TWO64) for x in u)
    return NoiseRealization(spec, index, r, ds)


def draw_matrix(seed: int, indices, count: int) -> np.ndarray:
    """Float64 draws, one row per realization index (Monte Carlo use).

    Row ``i`` equals ``draw_realization`` values for ``indices[i]`` rounded
    to double precision.
    """
    rows = []
    for idx in indices:
        u = raw_draws(seed, int(idx), count)
        # (2u + 1 - 2^64) / 2^64 in double: top 53 bits carry the value
        rows.append(((u >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -52 - 1.0)
    return np.array(rows, dtype=np.float64)


def reference_spec(spec: NoiseSpec, factor_exponent: int = 100) -> NoiseSpec:
    """Companion spec with ``epsilon * 10**-factor_exponent``, same seeds."""
    if spec.mode != "additive":
        raise ValueError("reference_spec requires additive noise")
    return replace(spec, epsilon=spec.epsilon / mpq(mpz(10) ** factor_exponent))
