"""Exact algebra for nilpotent cuspidal foliation germs.

Polynomials, differential forms, Newton polyhedra and the two
classification criteria (weighted order and polyhedron coincidence) for
the family ``d(z^2 - f^s) + g(f, z)(s z df -+ 2 f dz)``.
"""

from .errors import (ContextMismatchError, DegreeError, NilfolError, NotClosedError,
                     ShapeError, ValidationError)
from .forms import (KForm, PolyMap, eval_coefficients, exterior_derivative,
                    integrate_closed_1form, is_integrable, is_invariant_hypersurface, pullback,
                    support_of_1form, wedge)
from .newton import (HullCertificate, NewtonPolyhedron, SupportSet, hull_certificate,
                     hull_contains, newton_of_1form, newton_of_polynomial, polyhedra_equal,
                     vertices)
from .offmesh import export_off
from .poly import Polynomial, VarContext
from .sigma import (ClassificationReport, GeneralCuspidalModel, QuasiOrdinaryModel, Signs,
                    Verdict, build_omega, classify, separatrix)
from .textio import (ParseError, parse_form, parse_model, parse_polynomial, print_form,
                     print_polynomial, report_to_json)

__all__ = [
    "build_omega",
    "ClassificationReport",
    "classify",
    "ContextMismatchError",
    "DegreeError",
    "eval_coefficients",
    "export_off",
    "exterior_derivative",
    "GeneralCuspidalModel",
    "hull_certificate",
    "hull_contains",
    "HullCertificate",
    "integrate_closed_1form",
    "is_integrable",
    "is_invariant_hypersurface",
    "KForm",
    "newton_of_1form",
    "newton_of_polynomial",
    "NewtonPolyhedron",
    "NilfolError",
    "NotClosedError",
    "parse_form",
    "parse_model",
    "parse_polynomial",
    "ParseError",
    "polyhedra_equal",
    "PolyMap",
    "Polynomial",
    "print_form",
    "print_polynomial",
    "pullback",
    "QuasiOrdinaryModel",
    "report_to_json",
    "separatrix",
    "ShapeError",
    "Signs",
    "support_of_1form",
    "SupportSet",
    "ValidationError",
    "VarContext",
    "Verdict",
    "vertices",
    "wedge",
]

__version__ = "0.1.0"
