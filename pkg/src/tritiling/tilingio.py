"""Plain-text tiling files.

Line 1: ``TILING/1 <exact|float> eps=<decimal>``
Line 2: ``WINDOW <xmin> <xmax> <ymin> <ymax>``
then one triangle per line as six coordinate tokens v0x v0y v1x v1y v2x v2y.

An exact token ``p/q:r/s`` denotes p/q + (r/s)*sqrt(3) with q, s > 0 in
lowest terms; a float token is a decimal with 17 significant digits.
Blank lines and lines starting with ``#`` are ignored.

``load(save(patch))`` reproduces the patch bit-exactly in both backends
(floats are written round-trip safe).  Files are untrusted input: loading
re-runs the full overlap check, and interiority is recomputed from the
default margin rule, since the format carries geometry only.
"""

from __future__ import annotations

import io
from fractions import Fraction
from pathlib import Path
from typing import TextIO

from .errors import BackendMismatch, ParseError
from .geometry import ExactScalar, FloatScalar, Point, Scalar, TrianglePlacement
from .model import TilingPatch, Window, build_patch

MAGIC = "TILING/1"


def _format_scalar(s: Scalar) -> str:
    if s.is_exact:
        u, v = s.u, s.v
        return f"{u.numerator}/{u.denominator}:{v.numerator}/{v.denominator}"
    return f"{s.x:.17g}"


def _parse_fraction(text: str, line_no: int) -> Fraction:
    num, sep, den = text.partition("/")
    if not sep:
        raise ParseError(line_no, f"rational {text!r} lacks a denominator")
    try:
        n, d = int(num), int(den)
    except ValueError:
        raise ParseError(line_no, f"bad rational token {text!r}") from None
    if d <= 0:
        raise ParseError(line_no, f"denominator must be positive in {text!r}")
    return Fraction(n, d)


def _parse_scalar(token: str, backend: str, eps: float, line_no: int) -> Scalar:
    if backend == "exact":
        if ":" not in token:
            raise BackendMismatch(
                f"line {line_no}: float-style token {token!r} in an exact file")
        left, _, right = token.partition(":")
        return ExactScalar(_parse_fraction(left, line_no),
                           _parse_fraction(right, line_no))
    if ":" in token:
        raise BackendMismatch(
            f"line {line_no}: exact-style token {token!r} in a float file")
    try:
        return FloatScalar(float(token), eps)
    except ValueError:
        raise ParseError(line_no, f"bad float token {token!r}") from None


def dumps(patch: TilingPatch) -> str:
    eps_txt = "0" if patch.backend == "exact" else f"{patch.eps:.17g}"
    lines = [f"{MAGIC} {patch.backend} eps={eps_txt}"]
    w = patch.window
    lines.append("WINDOW " + " ".join(_format_scalar(s)
                                      for s in (w.xmin, w.xmax, w.ymin, w.ymax)))
    for t in patch.triangles:
        lines.append(" ".join(_format_scalar(c)
                              for v in t.vertices for c in (v.x, v.y)))
    return "\n".join(lines) + "\n"


def save(patch: TilingPatch, destination) -> None:
    text = dumps(patch)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")


def loads(text: str) -> TilingPatch:
    return _load_lines(io.StringIO(text))


def load(source) -> TilingPatch:
    if hasattr(source, "read"):
        return _load_lines(source)
    with open(source, "r", encoding="utf-8") as fh:
        return _load_lines(fh)


def _load_lines(fh: TextIO) -> TilingPatch:
    backend = None
    eps = 0.0
    window = None
    triangles = []
    stage = 0  # 0: header, 1: window, 2: triangles
    for line_no, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if stage == 0:
            parts = line.split()
            if len(parts) != 3 or parts[0] != MAGIC:
                raise ParseError(line_no, f"expected '{MAGIC} <backend> eps=..'")
            backend = parts[1]
            if backend not in ("exact", "float"):
                raise ParseError(line_no, f"unknown backend {backend!r}")
            if not parts[2].startswith("eps="):
                raise ParseError(line_no, "third header field must be eps=..")
            try:
                eps = float(parts[2][4:])
            except ValueError:
                raise ParseError(line_no, f"bad eps value {parts[2]!r}") from None
            if backend == "float" and eps <= 0:
                raise ParseError(line_no, "float files need a positive eps")
            stage = 1
            continue
        if stage == 1:
            parts = line.split()
            if len(parts) != 5 or parts[0] != "WINDOW":
                raise ParseError(line_no, "expected 'WINDOW xmin xmax ymin ymax'")
            vals = [_parse_scalar(p, backend, eps, line_no) for p in parts[1:]]
            try:
                window = Window(*vals)
            except ValueError as exc:
                raise ParseError(line_no, str(exc)) from None
            stage = 2
            continue
        parts = line.split()
        if len(parts) != 6:
            raise ParseError(line_no, f"triangle line needs 6 tokens, got {len(parts)}")
        vals = [_parse_scalar(p, backend, eps, line_no) for p in parts]
        try:
            triangles.append(TrianglePlacement(
                Point(vals[0], vals[1]),
                Point(vals[2], vals[3]),
                Point(vals[4], vals[5])))
        except Exception as exc:
            raise ParseError(line_no, f"bad triangle: {exc}") from None
    if stage == 0:
        raise ParseError(0, "empty file")
    if window is None:
        raise ParseError(0, "missing WINDOW line")
    return build_patch(triangles, window)
