"""Certified ergodic optimization and zero-temperature limits for locally constant potentials on SFTs."""
from .ergodic import (
    Classification,
    CriticalGraph,
    MaxOrbitSet,
    WeightedBlockGraph,
    classify,
    critical_graph,
    enumerate_elementary_cycles,
    extreme_means,
    max_orbit_set,
    residual_entropy_zero_temp,
    zero_temperature_measure,
)
from .intervals import Interval
from .measures import ErgodicComponents, MarkovMeasure, PeriodicOrbitMeasure, measure_integral, w1_distance
from .potential import LocallyConstantPotential, PotentialApproximant, integral_on_orbit
from .sft import PeriodicOrbit, Sft, higher_block_recode, nonempty_cylinders, orbit_of, topological_entropy
from .thermo import (
    entropy_at_beta,
    entropy_sandwich,
    equilibrium_measure,
    pressure,
    pressure_derivative,
    residual_entropy_upper,
)

__all__ = [name for name in dir() if not name.startswith("_")]
