"""Text and JSON forms of series.

Text grammar (canonical output shown on the right)::

    series := "t" (ws sign ws term)*          t + 2*t^4 + t^7
    term   := [coeff "*"] "t^" exponent
    sign   := "+" | "-"

Formal (non-group) series are printed with the same term syntax, starting
with their lowest term, e.g. ``2*t^2``; the zero series is ``0``. The parser
accepts a leading sign, a bare ``t`` term anywhere, and repeated exponents
(which are summed).
"""

from __future__ import annotations

import json
import re

from .errors import PrecisionError, SeriesSyntaxError
from .series import FormalSeries, GroupSeries

_TOKEN = re.compile(
    r"\s*(?:(?P<sign>[+-])\s*)?(?:(?P<coeff>\d+)\s*\*\s*)?(?P<var>t)(?:\s*\^\s*(?P<exp>\d+))?\s*"
)


def _scan(text: str) -> list[tuple[int, int, int]]:
    """(exponent, signed coefficient, position) for each term."""
    stripped = text.strip()
    if not stripped:
        raise SeriesSyntaxError("empty series", text, 0)
    if stripped == "0":
        return []
    terms, pos, first = [], 0, True
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SeriesSyntaxError("expected a term like 'c*t^k'", text, _skip_ws(text, pos))
        if not first and not m.group("sign"):
            raise SeriesSyntaxError("expected '+' or '-' between terms", text, _skip_ws(text, pos))
        sign = -1 if m.group("sign") == "-" else 1
        coeff = int(m.group("coeff")) if m.group("coeff") else 1
        exp = int(m.group("exp")) if m.group("exp") else 1
        if exp < 1:
            raise SeriesSyntaxError("exponents start at 1", text, m.start("exp"))
        terms.append((exp, sign * coeff, m.start("var")))
        pos, first = m.end(), False
    return terms


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def parse_series(text: str, p: int, precision: int, *, truncate: bool = False, kind: str | None = None):
    """Parse series text at (p, N).

    The result is a ``GroupSeries`` when the t-coefficient is 1 (or when
    ``kind="group"``), else a ``FormalSeries``. Exponents above ``precision``
    raise ``PrecisionError`` unless ``truncate`` is set.
    """
    terms = _scan(text)
    coeffs: dict[int, int] = {}
    for exp, c, pos in terms:
        if exp > precision:
            if truncate:
                continue
            raise PrecisionError(f"exponent {exp} at position {pos} exceeds precision N={precision}")
        coeffs[exp] = (coeffs.get(exp, 0) + c) % p
    if kind is None:
        kind = "group" if coeffs.get(1, 0) == 1 else "formal"
    if kind == "group":
        if coeffs.get(1, 0) != 1:
            raise SeriesSyntaxError("group elements must start with 't'", text, 0)
        return GroupSeries.from_terms(p, precision, coeffs)
    if kind == "formal":
        return FormalSeries.from_terms(p, precision, coeffs)
    raise ValueError(f"unknown kind {kind!r}")


def _term(k: int, c: int) -> str:
    var = "t" if k == 1 else f"t^{k}"
    return var if c == 1 else f"{c}*{var}"


def print_series(s: FormalSeries) -> str:
    """Canonical text: ascending exponents, coefficients in [1, p-1]."""
    terms = s.terms()
    if not terms:
        return "0"
    return " + ".join(_term(k, c) for k, c in terms)


def series_to_json(s: FormalSeries) -> dict:
    kind = "group" if isinstance(s, GroupSeries) else "formal"
    pairs = [[k, c] for k, c in s.terms() if not (kind == "group" and k == 1)]
    return {"p": s.p, "precision": s.precision, "kind": kind, "coefficients": pairs}


def series_from_json(obj: dict | str) -> FormalSeries:
    if isinstance(obj, str):
        obj = json.loads(obj)
    p, n, kind = obj["p"], obj["precision"], obj["kind"]
    pairs = [tuple(pair) for pair in obj["coefficients"]]
    exps = [k for k, _ in pairs]
    if exps != sorted(set(exps)):
        raise ValueError("coefficient pairs must be strictly ascending")
    lowest = 2 if kind == "group" else 1
    for k, c in pairs:
        if k < lowest or k > n:
            raise ValueError(f"exponent {k} out of range for kind {kind!r}")
        if not 1 <= c < p:
            raise ValueError(f"coefficient {c} not in [1, p-1]")
    if kind == "group":
        return GroupSeries.from_terms(p, n, pairs)
    if kind == "formal":
        return FormalSeries.from_terms(p, n, pairs)
    raise ValueError(f"unknown kind {kind!r}")
