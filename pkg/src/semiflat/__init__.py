"""Semi-flat Calabi-Yau metric ansatze on torus fibrations.

Construction of the local models around Kodaira singular fibers and their
fiber products, pointwise evaluation of the semi-flat ansatz, and numeric
verification of its closed-form identities (Monge-Ampere, closedness,
flatness of the isotrivial quotients) and asymptotics (decay exponents,
volume growth, tangent cones).
"""

from .asymptotics import (AsymptoticChart, BaseProfile, ConeDescription, DecayFit,
                          base_profile, cone_limit_coefficient, curvature_decay_fit,
                          error_decay_fit, euclidean_profile, ray_limit_coefficient,
                          sob_check, tangent_cone, to_chart, volume_growth_fit)
from .diffgeo import (FDScheme, chern_curvature_norm, closedness_residual,
                      positivity, ricci_form_base, ricci_scalar_residual)
from .eguchi_hanson import (EHConfig, a_max, cutoff, eh_metric, eh_potential,
                            glued_potential, gluing_report)
from .errors import (BranchPoint, DegenerateLattice, FitRejected, NoConvergence,
                     NotConvergent, NotPositive, OriginSingular, PolePoint,
                     ScenarioError, SemiflatError, SingularPeriods,
                     SingularPolarization, StepTooSmall, Unsupported,
                     UnsupportedPair, UnsupportedType)
from .kodaira import (Classification, FiberKind, FiberType, LocalModel,
                      ProductModel, PuncturedPoint, canonical_coefficient,
                      classify_asymptotics, fiber_product, finite_kinds,
                      isotrivial_case13, isotrivial_coefficient, local_model,
                      monodromy_order)
from .lattice import (HermitianForm, PolarizedFamily, SiegelData, hermitian_h,
                      product_family, reduce_mod_lattice, scaled_h,
                      siegel_normalize, siegel_residual, stacked_inverse_block,
                      type_one_one_residual)
from .metric import (MetricSample, VolumeFormSpec, christoffel_closed,
                     christoffel_general, elliptic_metric_at, fiber_factor_areas,
                     fiber_volume, ma_residual, metric_at)
from .rng import SplitMix64
from .weierstrass import (EllipticData, cubic_residual, eisenstein_g4_g6,
                          g2_series, g3_series, volume_pullback_ratio, wp,
                          wp_lattice, wp_prime, wp_prime_lattice)

__version__ = "0.1.0"
