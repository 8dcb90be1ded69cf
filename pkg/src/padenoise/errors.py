"""Exception hierarchy shared by all modules."""


class PadeNoiseError(Exception):
    """Base class for every error raised by :mod:`padenoise`."""


class CapacityUnavailable(PadeNoiseError, ValueError):
    def __init__(self, capacity=None):
        super().__init__("capacity unavailable" + ("" if capacity is None else f" (c={capacity})"))
        self.capacity = capacity


class DegeneratePadeError(PadeNoiseError):
    """The Taylor-match system for [L, N] is (numerically) singular."""

    def __init__(self, L: int, N: int, rank_deficiency: int):
        super().__init__(f"degenerate table at ({L},{N}): rank deficiency {rank_deficiency}")
        self.L = L
        self.N = N
        self.rank_deficiency = rank_deficiency


class RootFindingError(PadeNoiseError):
    def __init__(self, unconverged):
        self.unconverged = list(unconverged)
        preview = ", ".join(repr(complex(z)) for z in self.unconverged[:5])
        super().__init__(f"{len(self.unconverged)} unconverged roots: {preview}")


class DegeneratePolePair(PadeNoiseError):
    def __init__(self, i: int, j: int):
        super().__init__(f"degenerate pole pair ({i}, {j})")
        self.pair = (i, j)


class SequenceGapError(PadeNoiseError, KeyError):
    def __init__(self, n: int):
        super().__init__(f"sequence gap at n={n}")
        self.n = n

    def __str__(self):
        return self.args[0]


class BFileError(PadeNoiseError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


class AlphaUndefined(PadeNoiseError, ValueError):
    def __init__(self):
        super().__init__("alpha undefined at zero of psi")


class NonGenericMinimum(PadeNoiseError, ValueError):
    def __init__(self, value=None):
        super().__init__("non-generic minimum, saddle-point asymptotics inapplicable" + ("" if value is None else f" (Re alpha={value})"))


class NoiseInsensitiveRegion(PadeNoiseError, ValueError):
    def __init__(self):
        super().__init__("inside noise-insensitive region")
