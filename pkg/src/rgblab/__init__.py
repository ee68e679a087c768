"""rgblab: numerical laboratory for renormalized Gauss-Bonnet identities.

Computes curvature, Pfaffian, and transgression integrands for complete
metrics with collar boundary structure dx^2/(alpha^2 x^(2 eta)) + h_x/x^(2 beta),
extracts finite parts of divergent integrals by two renormalization schemes,
and verifies the renormalized Gauss-Bonnet identity against known Euler
characteristics on a catalog of model geometries.
"""

from .double_forms import (DoubleForm, df_eval, df_power, df_product,
                           metric_form, permutation_contraction, unit_form)
from .metric_models import (BoundaryDescriptor, CatalogEntry, ChartMetric,
                            CollarMetric, catalog, catalog_names,
                            collar_to_chart, evenness_check, special_bdf_check)
from .curvature import (GeometrySample, christoffel, geometry_sample, riemann,
                        sff_level_set, sff_model, curvature_model)
from .gb_integrands import (pfaffian_density, sphere_volume,
                            transgression_density, tube_invariant_P)
from .renorm import (IndexSet, PhgSeries, RenormResult, finite_part_eps,
                     finite_part_zeta, fit_phg, renormalized_integral,
                     sweep_boundary, sweep_bulk)
from .verify import VerificationReport, run_catalog, run_entry, soft_gb

__version__ = "0.1.0"
