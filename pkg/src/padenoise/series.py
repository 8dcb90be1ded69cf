"""Truncated power series and coefficient providers."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

from gmpy2 import mpfr, mpq, mpz

from .errors import BFileError, SequenceGapError
from .noise import NoiseRealization, NoiseSpec, draw_realization
from .numeric import as_rational, is_exact, truncate_digits

PROVENANCES = ("model", "painleve1", "phi36", "file", "composed", "noisy")


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients ``f_0 .. f_m`` of ``sum f_j w**j``.

    ``noise_mode`` is ``None`` for clean series, otherwise the mode of the
    noise that produced it ("additive" or "truncation").
    """

    coeffs: tuple
    label: str = ""
    provenance: str = "model"
    noise_mode: str | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs:
            raise ValueError("a series needs at least one coefficient")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.provenance in ("model", "painleve1") and not self.exact:
            raise ValueError(f"{self.provenance} series must have exact coefficients")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def truncated(self, m: int) -> "TruncatedSeries":
        if m > self.order:
            raise ValueError(f"cannot truncate order {self.order} series to order {m}")
        return TruncatedSeries(self.coeffs[: m + 1], self.label, self.provenance, self.noise_mode, dict(self.meta))

    def floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]


def binomial_series(alpha, M: int, m: int) -> TruncatedSeries:
    """Exact coefficients of ``(1 + w**M)**alpha`` through order ``m``."""
    if m < 0:
        raise ValueError("order must be >= 0")
    if M < 1:
        raise ValueError("M must be >= 1")
    a = as_rational(alpha)
    if a >= 0 and a.denominator == 1:
        warnings.warn(f"alpha={a} is a non-negative integer: (1+w^M)^alpha has no branch point", stacklevel=2)
    coeffs = [mpq(0)] * (m + 1)
    b = mpq(1)
    k = 0
    while M * k <= m:
        coeffs[M * k] = b
        b = b * (a - k) / (k + 1)
        k += 1
    return TruncatedSeries(coeffs, f"(1+w^{M})^({a})", "model", meta={"alpha": str(a), "M": M})


def painleve1_coefficients(n_max: int) -> list:
    """``[a_1, ..., a_n_max]`` from the tritronquée recursion (exact)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    a = [None, mpq(4, 25), mpq(-392, 625)]
    for n in range(3, n_max + 1):
        s = mpq(0)
        for k in range(2, n - 1):
            s += a[k] * a[n - k]
        a.append(-4 * (n - 1) ** 2 * a[n - 1] - s / 2)
    return a[1 : n_max + 1]


def painleve1_series(n_max: int) -> TruncatedSeries:
    """Borel transform ``sum a_n w**(2n-1) / (2n-1)!`` through ``w**(2 n_max - 1)``."""
    a = painleve1_coefficients(n_max)
    coeffs = [mpq(0)] * (2 * n_max)
    fact = mpz(1)
    for n in range(1, n_max + 1):
        j = 2 * n - 1
        fact *= j * (j - 1) if j > 1 else 1
        coeffs[j] = a[n - 1] / fact
    return TruncatedSeries(coeffs, "painleve1-borel", "painleve1", meta={"n_max": n_max})


def phi36_series(A_values: dict, n_max: int) -> TruncatedSeries:
    """``6 (-1)**n A_n / (12**n n!)`` for the ingested integer sequence.

    Indices below the smallest one present in ``A_values`` are treated as
    zero coefficients; every index from there to ``n_max`` must be present.
    """
    if not A_values:
        raise SequenceGapError(0)
    start = 0 if 0 in A_values else min(A_values)
    coeffs = [mpq(0)] * (n_max + 1)
    fact = mpz(1)
    for n in range(0, n_max + 1):
        if n > 0:
            fact *= n
        if n < start:
            continue
        if n not in A_values:
            raise SequenceGapError(n)
        sign = -1 if n % 2 else 1
        coeffs[n] = mpq(6 * sign * mpz(A_values[n]), mpz(12) ** n * fact)
    return TruncatedSeries(coeffs, "phi36-borel", "phi36", meta={"n_max": n_max, "start_index": start})


def parse_bfile(path) -> dict[int, int]:
    """Read an OEIS-style b-file of ``n a(n)`` lines."""
    values: dict[int, int] = {}
    text = Path(path).read_text(encoding="ascii", errors="strict")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise BFileError(f"expected 'index value', got {raw!r}", lineno)
        try:
            n, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise BFileError(f"non-integer field in {raw!r}", lineno) from None
        if n in values:
            raise BFileError(f"duplicate index {n}", lineno)
        values[n] = v
    return values


def series_from_file(path, label: str | None = None) -> TruncatedSeries:
    """Generic user series: one coefficient per line, or ``k value`` pairs.

    Values are parsed exactly (integers, fractions ``p/q`` or decimals).
    """
    entries: dict[int, mpq] = {}
    text = Path(path).read_text()
    implicit = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        try:
            if len(parts) == 1:
                k, v = implicit, as_rational(parts[0])
            elif len(parts) == 2:
                k, v = int(parts[0]), as_rational(parts[1])
            else:
                raise ValueError
        except ValueError:
            raise BFileError(f"cannot parse {raw!r}", lineno) from None
        if k in entries:
            raise BFileError(f"duplicate index {k}", lineno)
        entries[k] = v
        implicit = k + 1
    if not entries:
        raise BFileError("empty series file")
    m = max(entries)
    coeffs = [entries.get(k, mpq(0)) for k in range(m + 1)]
    return TruncatedSeries(coeffs, label or Path(path).stem, "file")


def add_noise(f: TruncatedSeries, spec: NoiseSpec, index: int = 0) -> tuple[TruncatedSeries, NoiseRealization]:
    """Noisy copy of ``f`` for realization ``index`` of ``spec``.

    Additive mode keeps exact inputs exact (dyadic draws times rational
    epsilon); truncation mode rounds every coefficient to ``spec.digits``
    significant digits.
    """
    real = draw_realization(spec, index, len(f))
    if spec.mode == "none":
        return f, real
    if spec.mode == "truncation":
        coeffs = [truncate_digits(c, spec.digits) for c in f.coeffs]
        label = f"{f.label}|trunc{spec.digits}"
    else:
        eps = spec.epsilon
        if f.exact:
            coeffs = [as_rational(c) + eps * r for c, r in zip(f.coeffs, real.r_values)]
        else:
            coeffs = [c + mpfr(eps) * mpfr(r) for c, r in zip(f.coeffs, real.r_values)]
        label = f"{f.label}|eps={eps}#{index}"
    meta = dict(f.meta, source_provenance=f.provenance, noise=spec.as_dict(), realization=index)
    return TruncatedSeries(coeffs, label, "noisy", spec.mode, meta), real
