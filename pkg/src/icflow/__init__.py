"""Inverse curvature flows of starshaped hypersurfaces: simulation and roundness diagnostics."""

from .curvature import CurvatureSpec, evaluate, gradient, in_cone
from .flow import (FlowConfig, FlowState, inverse_reference, reference_radius, run,
                   stable_dt, step)
from .grid import make_grid
from .roundness import (circumradius_inradius, fit_decay_exponent, osc_minimizing_center,
                        pinching, sphere_fit, support_function)
from .shapes import ellipsoid, perturbed_sphere, sphere
from .surface import GraphSurface, admissible, embed, extrinsic

__version__ = "0.1.0"
