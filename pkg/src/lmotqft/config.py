"""Global configuration: degree caps, associator choice, cache location.

A single Config object is threaded through the expensive entry points.  The
default cap of 3 keeps every quotient-space computation in the range of a few
seconds; caps above 5 are refused because the brute-force bases explode
(the number of uni-trivalent graphs grows like (2d)!! in the degree).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field


MAX_DEGREE_CAP = 5


class ConsistencyError(RuntimeError):
    """An internal invariant failed: a solve that theory says must succeed
    did not, or two routes to the same value disagreed.  Callers treat this
    as 'the computation cannot be trusted', never as bad user input."""


@dataclass(frozen=True)
class Config:
    """Knobs shared by the diagram-space and integral computations.

    degree_cap      truncation degree D: all series live in degrees 0..D
    assoc_deg4      optional degree-4 term of the associator, as a dict
                    mapping 4-chord ascii words to Fraction coefficients
                    on three strands (None means truncate after degree 2;
                    the degree-2 term is always the commutator term and is
                    computed, not configurable)
    cache_dir       where to memoize quotient tables on disk ('' disables)
    progress        print coarse progress lines for long enumerations
    """

    degree_cap: int = 3
    assoc_deg4: tuple | None = None
    cache_dir: str = field(
        default_factory=lambda: os.environ.get("LMOTQFT_CACHE", "")
    )
    progress: bool = False

    def __post_init__(self):
        if not (0 <= self.degree_cap <= MAX_DEGREE_CAP):
            raise ValueError(
                "degree_cap must be between 0 and %d, got %r"
                % (MAX_DEGREE_CAP, self.degree_cap)
            )


DEFAULT_CONFIG = Config()


def with_cap(cap: int, base: Config = DEFAULT_CONFIG) -> Config:
    """Copy of base with a different degree cap."""
    return Config(
        degree_cap=cap,
        assoc_deg4=base.assoc_deg4,
        cache_dir=base.cache_dir,
        progress=base.progress,
    )
