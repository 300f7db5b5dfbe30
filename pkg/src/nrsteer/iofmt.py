"""File formats: matrix JSON, CSV series, standalone SVG figures.

All numeric output is decimal with 17 significant digits, which round-trips
binary64 exactly; identical inputs therefore produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .numrange import SupportProfile
from .perturb import TrajectoryRecord

__all__ = [
    "MatrixFileError",
    "format_float",
    "read_matrix",
    "write_matrix",
    "write_range_csv",
    "write_trajectory_csv",
    "render_range_svg",
]


class MatrixFileError(ValueError):
    """A matrix file failed to parse or violates the schema."""


def format_float(x) -> str:
    return format(float(x), ".17g")


def write_matrix(path, matrix: np.ndarray, label: str | None = None, source: str | None = None) -> None:
    """Write a matrix file: dim + row-major [re, im] pairs + optional metadata."""
    m = np.asarray(matrix, dtype=np.complex128)
    doc: dict = {
        "dim": int(m.shape[0]),
        "entries": [[z.real, z.imag] for z in m.ravel()],
    }
    if label is not None:
        doc["label"] = label
    if source is not None:
        doc["source"] = source
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_matrix(path) -> tuple[np.ndarray, dict]:
    """Read a matrix file; returns (matrix, metadata)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(
            f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    except OSError as exc:
        raise MatrixFileError(f"{path}: {exc}") from exc

    if not isinstance(doc, dict):
        raise MatrixFileError(f"{path}: expected a JSON object at top level")
    try:
        dim = int(doc["dim"])
        entries = doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFileError(f"{path}: missing or invalid 'dim'/'entries' fields") from exc
    if dim < 1:
        raise MatrixFileError(f"{path}: dim must be positive, got {dim}")
    if not isinstance(entries, list) or len(entries) != dim * dim:
        raise MatrixFileError(
            f"{path}: expected {dim * dim} entries for dim {dim}, got {len(entries) if isinstance(entries, list) else type(entries).__name__}"
        )
    flat = []
    for k, pair in enumerate(entries):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise MatrixFileError(f"{path}: entry {k} is not a [re, im] pair")
        re_part, im_part = pair
        z = complex(float(re_part), float(im_part))
        if not (np.isfinite(z.real) and np.isfinite(z.imag)):
            raise MatrixFileError(f"{path}: entry {k} is not finite")
        flat.append(z)
    matrix = np.array(flat, dtype=np.complex128).reshape(dim, dim)
    meta = {k: doc[k] for k in ("label", "source") if k in doc}
    return matrix, meta


def write_range_csv(path, profile: SupportProfile) -> None:
    """Boundary sweep CSV: theta, h, re(z), im(z)."""
    lines = ["theta,h,re_z,im_z"]
    for theta, h, z in zip(profile.angles, profile.support_values, profile.boundary_points):
        lines.append(
            f"{format_float(theta)},{format_float(h)},{format_float(z.real)},{format_float(z.imag)}"
        )
    _write_text(path, "\n".join(lines) + "\n")


def write_trajectory_csv(path, record: TrajectoryRecord) -> None:
    """Tracked-path CSV: t, path index, re/im of the eigenvalue, speed."""
    lines = ["t,j,re_lambda,im_lambda,speed"]
    speeds = record.speeds()
    for k, t in enumerate(record.t_grid):
        for j in range(record.paths.shape[0]):
            z = record.paths[j, k]
            lines.append(
                f"{format_float(t)},{j},{format_float(z.real)},{format_float(z.imag)},{format_float(speeds[j, k])}"
            )
    _write_text(path, "\n".join(lines) + "\n")


def _write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# --- SVG -------------------------------------------------------------------

_SVG_SIZE = 640
_SVG_REACH = 1.45  # complex-plane half-width shown


def _pix(z: complex) -> tuple[float, float]:
    x = (z.real + _SVG_REACH) / (2 * _SVG_REACH) * _SVG_SIZE
    y = (_SVG_REACH - z.imag) / (2 * _SVG_REACH) * _SVG_SIZE
    return x, y


def render_range_svg(
    path,
    profile: SupportProfile,
    eigenvalues: np.ndarray | None = None,
    title: str = "numerical range",
) -> None:
    """Self-contained SVG: unit circle, boundary polygon, eigenvalue markers,
    origin crosshair."""
    s = _SVG_SIZE
    cx, cy = _pix(0j)
    r_unit = 1.0 / (2 * _SVG_REACH) * s
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" '
        f'viewBox="0 0 {s} {s}">',
        f'<rect width="{s}" height="{s}" fill="white"/>',
        f'<text x="12" y="24" font-family="monospace" font-size="16">{title}</text>',
        # axes through the origin
        f'<line x1="0" y1="{cy:.2f}" x2="{s}" y2="{cy:.2f}" stroke="#cccccc" stroke-width="1"/>',
        f'<line x1="{cx:.2f}" y1="0" x2="{cx:.2f}" y2="{s}" stroke="#cccccc" stroke-width="1"/>',
        f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r_unit:.2f}" fill="none" stroke="#999999" '
        'stroke-width="1" stroke-dasharray="4 3"/>',
    ]

    points = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(_pix, profile.boundary_points))
    parts.append(
        f'<polygon points="{points}" fill="#4477aa" fill-opacity="0.25" '
        'stroke="#4477aa" stroke-width="1.5"/>'
    )

    if eigenvalues is not None:
        for z in eigenvalues:
            ex, ey = _pix(complex(z))
            parts.append(f'<circle cx="{ex:.2f}" cy="{ey:.2f}" r="5" fill="#cc3311"/>')

    # origin crosshair
    parts.append(
        f'<path d="M {cx - 8:.2f} {cy:.2f} L {cx + 8:.2f} {cy:.2f} '
        f'M {cx:.2f} {cy - 8:.2f} L {cx:.2f} {cy + 8:.2f}" '
        'stroke="black" stroke-width="1.5"/>'
    )
    parts.append("</svg>")
    _write_text(path, "\n".join(parts) + "\n")
