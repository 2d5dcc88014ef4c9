__version__ = '0.3'

from nkgspline.basis import BasisConfig, nodal_constants
from nkgspline.problems import ProblemSpec, get_problem, list_problems, traveling_wave, solitary_wave
from nkgspline.timestepper import CoefficientState, initialize, step, run
from nkgspline.diagnostics import DiagnosticsReport, linf_error, energy, momentum, relative_change
from nkgspline.scan import ScanConfig, ScanResult
from nkgspline.iterview import iterview
from nkgspline.timer import Timer, timeit
