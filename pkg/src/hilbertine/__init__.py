"""Hilbert geometry on properly convex open subsets of the projective plane.

Distances and Finsler norms, Busemann volumes, dynamical classification of
projective automorphisms, characteristic functions of convex cones,
Dirichlet-style fundamental domains, duality, and a finite-volume decision
procedure for holonomies of punctured surfaces.
"""

from .busemann import (PolygonRegion, TriangleRegion, TruncatedPic, Verdict,
                       VolumeProfile, busemann_density, ideal_triangle_area,
                       pic_volume_profile, region_volume)
from .cones import (DirichletDomain, LorentzCone, PolyhedralCone, PsiForm,
                    SimplicialCone, bisector, char_gradient,
                    characteristic_function, cone_contains, cone_from_dict,
                    cone_from_domain, cone_to_dict, dirichlet_lee_domain,
                    domain_from_cone, dual_cone, dual_map_theta, psi_form,
                    sigma_lift)
from .domains import (Chords, ConicDomain, ConvexDomain, HalfplaneDomain,
                      Membership, PolygonDomain, boundary_deviation,
                      domain_from_dict, dual_domain, simplex_domain, unit_disk)
from .dynamics import (Axis, AxisKind, DynClass, Family, OrbitCurve,
                       ParabolicPencil, ProjTransform, SectorRegion, axes,
                       classify, geometric_characteristics, one_param_power,
                       parabolic_invariant_pencil, preserves_domain,
                       quasi_hyperbolic_orbit, same_geometric_characteristics,
                       sector)
from .errors import (BadPic, CoincidentEndpoints, CoincidentLines,
                     CoincidentPoints, ConfigError, DegenerateConic,
                     DegenerateInput, DegenerateTriangle, DomainNotPreserved,
                     FixedBasePoint, HilbertineError, NoRealLogarithm,
                     NonCollinear, NonConvergent, NonIntegrable,
                     NotConvexCompatible, NotInterior, NotOnSigma, NotProper,
                     StabilizedBasePoint, WrongFamily)
from .groups import (GroupPresentation, LimitSetCloud, VolumeKind,
                     VolumeVerdict, disc_conic, enumerate_words,
                     finite_volume_criterion, irreducibility_check,
                     limit_set_approx, sym_square)
from .projective import (AffineChart, Conic, ProjLine, ProjPoint, cross_ratio,
                         join, line_conic_intersection, meet)

__version__ = "0.1.0"
