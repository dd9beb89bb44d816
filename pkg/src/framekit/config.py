"""Tolerance and resource settings shared by the library and the CLI."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    norm: float = 1e-12
    flat: float = 1e-12
    tight: float = 1e-9
    # absolute tolerance on squared magnitudes compared against exact rationals
    magnitude: float = 1e-9
    design: float = 1e-9
    # Frobenius residual of the t=2 projector sum, and the Fourier identity defects
    projector: float = 1e-8
    fourier: float = 1e-8
    weight: float = 1e-12

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise ValueError(f"tolerance {name} must be positive, got {value}")


DEFAULT_TOLERANCES = Tolerances()

# largest field order p**m the gf module will build
MAX_FIELD_SIZE = 2**20

# pruned-node visits allowed per search before giving up as inconclusive
DEFAULT_SEARCH_BUDGET = 10**9

# K**2 x K**2 tensor matrices for t=2 projector checks
MAX_PROJECTOR_DIM = 16
