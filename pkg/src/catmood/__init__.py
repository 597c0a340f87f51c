"""CAT2P finite-difference schemes with a posteriori MOOD limiting in 1D."""
from .cat import cat_flux_at_face, cat_update_sweep
from .driver import (RunReport, TestCase, advection_case, burgers_case, convergence_study,
                     emit_outputs, run_solver, sod_case)
from .kernels import BACKEND, available_backends, set_backend
from .mesh import (CAT2, CAT4, CAT6, HLL, RUSANOV, BoundaryCondition, Grid1D, SchemeLevel,
                   SolverConfig, compute_dt, fill_ghosts)
from .mood import DetectionReport, detect_cad, detect_nad, detect_pad, mood_step
from .systems import Burgers, Euler, LinearAdvection, ScalarBounds
from .weights import make_face_weights, make_weights

__version__ = "0.1.0"
