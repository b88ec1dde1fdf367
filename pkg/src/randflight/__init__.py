"""Simulation and verification toolkit for continuous-time conservative random
walks (orthogonal directions) and random flights (uniform spherical directions)
whose turn times follow an inhomogeneous Poisson process."""

from .analysis import (
    ConcentrationEstimate,
    RecurrenceReport,
    concentration_function,
    detect_hits,
    envelope_violation_rate,
    gap_statistics,
    ring_occupancy,
)
from .config import ExperimentConfig, load_config
from .directions import DirectionModel, projection_length, sample_direction, sample_directions
from .ppp import ByCount, ByTime, PointProcessSample, sample_by_inversion, sample_by_thinning
from .rates import RateFunction, cumulative_intensity, envelope_constants, inverse_cumulative_intensity
from .rng import substream
from .walk import Trajectory, build_trajectory, position_at, project_plane, trajectory_from_arrays

__version__ = "0.1.0"
