"""Oriented regular parallelisms of P3 via the Klein model."""

from .forms import (BilinearForm, DegenerateFrame, DegenerateRestriction,
                    KLEIN_FORM, OrientedSubspace, ProjPoint, RULER_FORM,
                    Subspace, gram_signature, join, manifold_orientation_sign,
                    meet, oriented_polar, polar)
from .klein import (DependentVectors, NotNull, OrientedLine, from_diagonal,
                    klein_to_oriented_line, lines_intersect,
                    oriented_line_to_klein, pluecker, pluecker_quadratic,
                    point_star, tangent_hyperplane, to_diagonal)
from .spreads import (AffineLine, CenterOnLine, DegenerateDerivative,
                      DegenerateMeet, EmptySet, FiniteLineSample,
                      OrientedRegularSpread, RegularSpread, WrongSignature,
                      hausdorff_distance, line_through, oriented_line_through,
                      perspectivity_transfer, quadric_orientation_sign,
                      spread_from_space, spread_sample)

__version__ = "0.1.0"
