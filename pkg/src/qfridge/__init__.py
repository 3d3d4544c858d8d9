"""Quantum absorption refrigerators driven by Markovian baths."""
from .baths import Bath, DomainError, WeakCouplingViolation
from .lindblad import DegenerateKernel, NotSteady, SolverError, steady_state
from .models import Design, FridgeSpec, InvalidSpec, diagram_currents, population_currents, solve_fridge
from .optimize import NoCoolingRegion, maximize_cooling_power, performance_characteristic, survey
from .thermo import LawViolation, carnot_efficiency, cooling_window_max, performance_bound, report

__version__ = "0.1.0"
