"""Magnitude data of quantum states in several bases and the states it fails to determine."""

__version__ = "0.1.0"

from .statespace import (  # noqa: E402
    BasisFrame,
    CharacterFrame,
    GridFunction,
    MomentumFrame,
    canonical_phase,
    cyclic_dft,
    grid_fourier,
    inner,
    projective_distance,
    standard_frame,
)
from .measurement import (  # noqa: E402
    FrameSet,
    MagnitudeProfile,
    binary_ones,
    embedding_obstruction,
    forward,
    is_member,
    residual,
)
