# -*- coding: utf-8 -*-
"""Some default configuration parameters for subspace tracking components.

Tolerances below are the defaults of the keyword arguments that consume them; experiments may override them.

"""
import subtrack.tracking.optimization as optimization

# Multithreading constants
#: Default number of threads used to run independent experiments
DEFAULT_MAX_NUM_THREADS = 4
#: Maximum number of threads that a user can specify
MAX_ALLOWED_NUM_THREADS = 256

# Grassmann tolerances
#: Max Frobenius norm of ``basis^T basis - I`` for a valid Subspace
ORTHONORMALITY_TOLERANCE = 1.0e-10
#: Max Frobenius norm of ``base^T direction`` for a valid TangentVector
TANGENCY_TOLERANCE = 1.0e-10
#: A matrix has full column rank when its smallest singular value exceeds this multiple of its largest
DEFAULT_RANK_TOLERANCE = 1.0e-10
#: Slack allowed at the endpoints of ``[0, pi/2]`` for principal angles
PRINCIPAL_ANGLE_SLACK = 1.0e-12
#: Gradient steps with a smaller gradient Frobenius norm are skipped
GRADIENT_NORM_FLOOR = 1.0e-14

# Certificate constants
#: Relative slack on squared distances when checking that an estimate lies inside a ball (estimates placed on the
#: boundary by bisection land within this)
TUBE_RELATIVE_TOLERANCE = 1.0e-9
#: Squared distances below this are at rounding level and never count as leaving the tube
TUBE_SQUARED_DISTANCE_FLOOR = 1.0e-24

# Window constants
#: Number of pushes between recomputations of the windowed covariance from raw samples
DEFAULT_REFRESH_INTERVAL = 10000

SLIDING_WINDOW = 'sliding'
DISCOUNTED_WINDOW = 'discounted'

#: Window modes supported by the GREAT tracker
WINDOW_MODES = [
        SLIDING_WINDOW,
        DISCOUNTED_WINDOW,
        ]

# Behavior constants
#: Observability check: ``sigma_k(O) > OBSERVABILITY_TOLERANCE * sigma_1(O)``
OBSERVABILITY_TOLERANCE = 1.0e-8
#: Relative cutoff of singular values in the predictor pseudoinverse
PSEUDOINVERSE_RELATIVE_TOLERANCE = 1.0e-10

# Generator constants
#: Absolute tolerance of the scalar root-finds placing subspaces at a prescribed distance
BISECTION_TOLERANCE = 1.0e-12

GAUSSIAN_EXCITATION = 'gaussian'
BALANCED_EXCITATION = 'balanced'

#: Coefficient designs for synthetic samples
EXCITATION_TYPES = [
        GAUSSIAN_EXCITATION,
        BALANCED_EXCITATION,
        ]

# Tracker type names
GREAT_TRACKER = 'great'
GROUSE_TRACKER = 'grouse'
PAST_TRACKER = 'past'

#: Tracker types supported by :mod:`subtrack`
TRACKER_TYPES = [
        GREAT_TRACKER,
        GROUSE_TRACKER,
        PAST_TRACKER,
        ]

#: Initial inverse-correlation matrix of PAST is this multiple of the identity
DEFAULT_PAST_INITIAL_SCALE = 1.0e3
DEFAULT_PAST_FORGETTING_FACTOR = 0.985

# Step-size objectives
MAX_RATE = 'max_rate'
MIN_ULTIMATE = 'min_ultimate'

#: Step-size tuning objectives supported by :func:`subtrack.tracking.certs.optimize_step_size`
STEP_SIZE_OBJECTIVES = [
        MAX_RATE,
        MIN_ULTIMATE,
        ]

#: Number of log-spaced grid points used to locate a feasible step size before refining its boundaries
DEFAULT_FEASIBILITY_GRID_POINTS = 400

DEFAULT_ARMIJO_PARAMETERS = optimization.ArmijoParameters(
        sufficient_decrease=1.0e-4,
        shrink=0.5,
        max_backtracks=20,
        )

DEFAULT_GOLDEN_SECTION_PARAMETERS = optimization.GoldenSectionParameters(
        relative_width=1.0e-8,
        max_num_steps=100,
        )

# Experiment modes
SYNTHETIC_GEODESIC_MODE = 'synthetic_geodesic'
SYSID_MODE = 'sysid'

#: Experiment modes understood by the CLI
EXPERIMENT_MODES = [
        SYNTHETIC_GEODESIC_MODE,
        SYSID_MODE,
        ]

#: Named step sizes for synthetic runs
STEP_SIZE_CONVERGENCE = 'cvg'
STEP_SIZE_MIDPOINT = 'mid'
STEP_SIZE_ULTIMATE = 'ub'

DEFAULT_TEST_REPETITIONS = 20

#: printf-style format for every float written to CSV artifacts
CSV_FLOAT_FORMAT = '%.17g'
