"""Deck groups, critical-point detection and dynamics of bicritical rational maps."""

import json

from . import _deckmap
from ._deckmap import DeckmapError, SCHEMA, compose, iterate, maps_equal, mobius_factor, parse_map

__all__ = [
    "DeckmapError",
    "SCHEMA",
    "analyze",
    "compose",
    "cross_ratio",
    "deck",
    "detect",
    "iterate",
    "maps_equal",
    "mobius_factor",
    "parse_map",
    "render",
    "shared",
]


def _params(params):
    return {name: str(value) for name, value in (params or {}).items()}


def analyze(expr, params=None):
    return json.loads(_deckmap.analyze(expr, _params(params)))


def deck(expr, k=1, params=None, precision=53, workers=0):
    return json.loads(_deckmap.deck(expr, k, _params(params), precision, workers))


def detect(expr, k, degree=2, params=None):
    return json.loads(_deckmap.detect(expr, k, degree, _params(params)))


def shared(f, g, max_k=4, params=None):
    return json.loads(_deckmap.shared(f, g, max_k, _params(params)))


def cross_ratio(v1, v2, a, b):
    return json.loads(_deckmap.cross_ratio(str(v1), str(v2), str(a), str(b)))


def render(target, expr="", width=64, height=64, max_iter=200, workers=0, params=None):
    """Returns (ppm_bytes, metadata_dict)."""
    ppm, meta = _deckmap.render(target, expr, width, height, max_iter, workers, _params(params))
    return ppm, json.loads(meta)
