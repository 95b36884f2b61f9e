"""Python bindings for newton-critic.

Every function returns plain dicts and lists in the same shape as the
``result`` field of the command line JSON report.
"""

import json
from fractions import Fraction

from . import _core
from ._core import SCHEMA, NewtonCriticError

__all__ = [
    "SCHEMA",
    "NewtonCriticError",
    "exact",
    "classify",
    "critical",
    "diagram",
    "resolve",
    "verify_resolution",
    "knapp_probe",
    "blowup_probe",
]

NewtonCriticError.code = property(lambda self: self.args[0])
NewtonCriticError.message = property(lambda self: self.args[1])
NewtonCriticError.offset = property(lambda self: self.args[2])
NewtonCriticError.partial_trace = property(lambda self: json.loads(self.args[3]))


def exact(number):
    """Fraction from an {"exact", "decimal"} object; None for infinity."""
    text = number["exact"]
    return None if text in ("inf", "-inf", "nan") else Fraction(text)


def classify(expression, order=12):
    return json.loads(_core.classify(expression, order))


def critical(expression, order=12, max_depth=32, trace=False):
    return json.loads(_core.critical(expression, order, max_depth, trace))


def diagram(expression, order=12):
    return json.loads(_core.diagram(expression, order))


def resolve(expression, order=16, all_quadrants=False, seed=1):
    return json.loads(_core.resolve(expression, order, all_quadrants, seed))


def verify_resolution(expression, order=16, all_quadrants=False, samples=10000, seed=1):
    return json.loads(_core.verify_resolution(expression, order, all_quadrants, samples, seed))


def knapp_probe(expression, p, grid_level=9, v_samples=256, theta_samples=512, workers=0):
    return json.loads(_core.knapp_probe(expression, p, grid_level, v_samples, theta_samples, workers))


def blowup_probe(expression, family="auto", refinements=3, first=3, p=3.0, workers=0):
    return json.loads(_core.blowup_probe(expression, family, refinements, first, p, workers))
