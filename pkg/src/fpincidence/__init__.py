"""Exact incidence geometry over prime fields: points, lines, conics, Moebius
graphs, spheres and hyperplanes, with incidence counting, bound evaluation
and distance-set applications."""

from .errors import DegenerateInputError, DomainError, FpIncidenceError, UsageError
from .field import FieldElem, MatrixModP, PrimeField
from .projective import Hyperplane, LineFp2, ProjPoint2, ProjTransform
from .curves import CircleSpec, Conic, ConicType, HyperbolaSpec, Mobius, ParabolaSpec, Sphere
from .incidence import CurveFamily, CurveKind, PointSet, count_incidences, incidence_histogram, rich_curves
from .bounds import BoundId, BoundParams, applicability, evaluate, improvement_range

__version__ = "0.1.0"
