"""Random walks on dynamic particle environments.

Simulation kernels (compiled with a pure-Python fallback), exact
small-system solvers, closed-form reference curves, Monte Carlo
estimators with confidence intervals, and a config-driven runner.
"""

__version__ = "0.1.0"
