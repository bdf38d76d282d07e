"""Exact verification of fixed-point freeness, smoothness and real pointlessness for explicit varieties."""
from .cyclotomic import CyclotomicField, CyclotomicNumber
from .poly import MultiPoly, Ring, parse_poly, multidegree, pullback
from .groebner import Budget, Ideal, ResourceCapExceeded, groebner_basis, normal_form, radical_membership
from .geometry import Ambient, Variety, is_empty_valid, is_invariant, is_smooth, dimension_of
from .autgroup import AutElement, FiniteGroup, abelian_type, canonicalize, close_group
from .fixlocus import verify_no_fixed_points, verify_fixed_point_witness, eigenspace_components
from .realcert import PositivityCertificate, check_certificate
from .manifest import Manifest, ManifestError, load_manifest
from .jobs import JobOptions, Report, run_job

__version__ = "0.1.0"
