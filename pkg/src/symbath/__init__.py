"""Open dynamics of qubits coupled to a permutation-symmetric bath."""

from .errors import ConvergenceError, DegenerateParametersError, ValidationError
from .generator import EnvironmentParams, build_generator
from .dynamics import Superoperator, asymptotic_state, evolve, time_average, vectorize
from .entanglement import concurrence, critical_r
from .protocol import run_protocol_point, sweep
from .verification import verify_all

__version__ = "0.1.0"
