"""
tractorholonomy.spacetimes
~~~~~~~~~~~~~~~~~~~~~~~~~~

Metric families, ambient constructions, recurrent structure recognizers and
plane wave parallel tractors.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""

from .spec import Family, SpacetimeSpec, catalog, parameter_catalog
from .families import Spacetime, build
from .recognizers import (RecurrentStructure, pp_trace_condition, pr_condition, ricci_isotropy,
                          pr_is_pp_when_isotropic, invariant_tractor_subbundle_check, pp_equivalence_battery,
                          verify_family)
from .ambient import (ambient_einstein, ambient_ricci_flat, cone, ambient_christoffel_residual,
                      ambient_curvature_residual, parallel_field_check, ambient_higher_derivative_samples,
                      einstein_scalar)
from .planewave import plane_wave_parallel_tractors, PlaneWaveSections
