"""Exact parametric solutions of underdetermined linear ODEs."""

import json as _json

from ._uode import (  # noqa: F401
    InconsistentError,
    OdeParseError,
    decouple_json,
    solve_json,
    solve_subs,
    verify,
)

__version__ = "0.1.0"


def solve(text, method="new", absorb_gcd=False, avoid_denominators=False,
          integration_constant=True):
    """Solve one underdetermined ODE; returns the result as a dict."""
    return _json.loads(
        solve_json(text, method, absorb_gcd, avoid_denominators,
                   integration_constant))


def decouple(text, method="new"):
    """Decouple an ODE system; returns the result as a dict."""
    return _json.loads(decouple_json(text, method))
