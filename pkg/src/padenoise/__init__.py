"""Noise-induced breakdown of Padé and conformal-Padé approximants."""

from __future__ import annotations

__version__ = "0.1.0"

from .breakdown import (BreakdownResult, CapacityEntry, CapacityTrace, DeltaPoint, SlopeFit, capacity_estimate,
                        capacity_trace, delta_trace, detect_Nc_kink, detect_Nc_spurious, deviation_delta,
                        ensemble_Nc, pade_block, richardson2, slope_fit)
from .conformal import (ConformalMap, compose_with_map, find_z_inf, map_derivatives, mcut_map, parse_map,
                        user_map)
from .errors import (AlphaUndefined, BFileError, CapacityUnavailable, DegeneratePadeError, DegeneratePolePair,
                     NoiseInsensitiveRegion, NonGenericMinimum, PadeNoiseError, RootFindingError, SequenceGapError)
from .noise import NoiseRealization, NoiseSpec, draw_realization
from .numeric import PrecisionContext, as_rational, required_precision, truncate_digits
from .pade import (PadeApproximant, PoleSet, RayLocus, SpuriousPartition, build_pade, find_poles, flag_spurious,
                   mcut_locus, pade_with_fallback, psi_from_pade_diff)
from .series import (TruncatedSeries, add_noise, binomial_series, painleve1_series, parse_bfile, phi36_series,
                     series_from_file)
from .theory import (TheoryPrediction, amplitude, breakdown_coeff_condition, breakdown_point_condition,
                     predict_Nc, sigma_nk, variance_asymptotic, variance_exact)
