"""File formats: coefficient tables (JSON), ND perturbations, blocks and samples (CSV).

Floats are written with 17 significant digits so doubles round-trip exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .frechet import NDPerturbation, TriangularBlock, diagonal_positions
from .zernike import DiskGrid, SpectralPerturbation, disk_grid

ND_HEADER = ["j", "m", "n", "re", "im"]
BLOCK_HEADER = ["m", "k", "value"]
SAMPLE_HEADER = ["r", "theta", "re", "im"]
FIGURE1_HEADER = ["j", "m", "k", "absF", "xi"]


class FormatError(ValueError):
    """Malformed input file; the message names the line and field."""


def fmt(x: float) -> str:
    return format(float(x), ".17g")


# -- SpectralPerturbation ---------------------------------------------------

def spectral_to_dict(sp: SpectralPerturbation) -> dict:
    return {
        "jmax": sp.jmax,
        "kmax": sp.kmax,
        "blocks": [{"j": j, "re": sp.blocks[j].real.tolist(), "im": sp.blocks[j].imag.tolist()}
                   for j in range(-sp.jmax, sp.jmax + 1)],
    }


def spectral_from_dict(data: dict, source: str = "<json>") -> SpectralPerturbation:
    try:
        jmax = int(data["jmax"])
        kmax = int(data["kmax"])
        raw = data["blocks"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{source}: missing or invalid top-level field ({exc})") from None
    if jmax < 0 or kmax < 0:
        raise FormatError(f"{source}: jmax and kmax must be nonnegative")
    blocks = {j: np.zeros(kmax + 1, complex) for j in range(-jmax, jmax + 1)}
    for pos, entry in enumerate(raw):
        where = f"{source}: blocks[{pos}]"
        try:
            j = int(entry["j"])
            re = np.asarray(entry["re"], dtype=float)
            im = np.asarray(entry.get("im", [0.0] * len(entry["re"])), dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"{where}: invalid block ({exc})") from None
        if j not in blocks:
            raise FormatError(f"{where}: field 'j'={j} outside [-{jmax}, {jmax}]")
        for name, vec in (("re", re), ("im", im)):
            if vec.shape != (kmax + 1,):
                raise FormatError(f"{where}: field '{name}' has {vec.size} entries, expected {kmax + 1}")
            if not np.all(np.isfinite(vec)):
                raise FormatError(f"{where}: field '{name}' has non-finite entries")
        blocks[j] = re + 1j * im
    return SpectralPerturbation(jmax, kmax, blocks)


def write_spectral(sp: SpectralPerturbation, path) -> None:
    Path(path).write_text(json.dumps(spectral_to_dict(sp), indent=1) + "\n")


def read_spectral(path) -> SpectralPerturbation:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    return spectral_from_dict(data, str(path))


# -- CSV helpers --------------------------------------------------------------

def _write_rows(out, header, rows) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _read_rows(text: str, header: list[str], source: str):
    reader = csv.reader(io.StringIO(text))
    try:
        first = next(reader)
    except StopIteration:
        raise FormatError(f"{source}:1: empty file") from None
    if [h.strip() for h in first] != header:
        raise FormatError(f"{source}:1: expected header {','.join(header)}, got {','.join(first)}")
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise FormatError(f"{source}:{lineno}: expected {len(header)} fields, got {len(row)}")
        yield lineno, row


def _parse(value: str, kind, name: str, source: str, lineno: int):
    try:
        out = kind(value)
    except ValueError:
        raise FormatError(f"{source}:{lineno}: field '{name}': cannot parse {value!r}") from None
    if kind is float and not math.isfinite(out):
        raise FormatError(f"{source}:{lineno}: field '{name}': non-finite value")
    return out


# -- NDPerturbation -----------------------------------------------------------

def nd_rows(nd: NDPerturbation):
    for j in sorted(nd.diagonals):
        for m, v in zip(nd.rows(j), nd.diagonals[j]):
            yield [str(j), str(int(m)), str(int(m + j)), fmt(v.real), fmt(v.imag)]


def nd_to_csv(nd: NDPerturbation) -> str:
    buf = io.StringIO()
    _write_rows(buf, ND_HEADER, nd_rows(nd))
    return buf.getvalue()


def write_nd(nd: NDPerturbation, path) -> None:
    Path(path).write_text(nd_to_csv(nd))


def nd_from_csv(text: str, source: str = "<csv>", mmax: int | None = None) -> NDPerturbation:
    """Parse rows j,m,n,re,im; the window defaults to the largest |m|, |n| present."""
    entries = []
    for lineno, row in _read_rows(text, ND_HEADER, source):
        j, m, n = (_parse(row[i], int, ND_HEADER[i], source, lineno) for i in range(3))
        re, im = (_parse(row[i], float, ND_HEADER[i], source, lineno) for i in (3, 4))
        if n != m + j:
            raise FormatError(f"{source}:{lineno}: field 'n': expected n = m + j = {m + j}, got {n}")
        if m == 0 or n == 0:
            raise FormatError(f"{source}:{lineno}: field 'm': Fourier modes must be nonzero")
        entries.append((lineno, j, m, complex(re, im)))
    window = mmax if mmax is not None else max((max(abs(m), abs(m + j)) for _, j, m, _ in entries),
                                               default=1)
    nd = NDPerturbation(window)
    for lineno, j, m, v in entries:
        if max(abs(m), abs(m + j)) > window:
            continue
        if j not in nd.diagonals:
            nd.diagonals[j] = np.zeros(diagonal_positions(j, window).size, complex)
        idx = int(np.searchsorted(nd.rows(j), m))
        nd.diagonals[j][idx] = v
    return nd


def read_nd(path, mmax: int | None = None) -> NDPerturbation:
    return nd_from_csv(Path(path).read_text(), str(path), mmax)


# -- TriangularBlock ----------------------------------------------------------

def block_rows(block: TriangularBlock):
    for m in range(1, block.M + 1):
        for k in range(1, min(m, block.K) + 1):
            yield [str(m), str(k), fmt(block.entries[m - 1, k - 1])]


def block_to_csv(block: TriangularBlock) -> str:
    buf = io.StringIO()
    _write_rows(buf, BLOCK_HEADER, block_rows(block))
    return buf.getvalue()


# -- samples on a disk grid ---------------------------------------------------

def samples_to_csv(grid: DiskGrid, values: np.ndarray) -> str:
    rr, tt = grid.mesh()
    buf = io.StringIO()
    _write_rows(buf, SAMPLE_HEADER,
                ([fmt(r), fmt(t), fmt(v.real), fmt(v.imag)]
                 for r, t, v in zip(rr.ravel(), tt.ravel(), np.asarray(values).ravel())))
    return buf.getvalue()


def samples_from_csv(text: str, source: str = "<csv>") -> tuple[DiskGrid, np.ndarray]:
    """Read r,theta,re,im rows that must form a complete tensor DiskGrid."""
    pts = []
    for lineno, row in _read_rows(text, SAMPLE_HEADER, source):
        pts.append(tuple(_parse(row[i], float, SAMPLE_HEADER[i], source, lineno) for i in range(4)))
    if not pts:
        raise FormatError(f"{source}: no samples")
    arr = np.array(pts)
    r_vals = np.unique(arr[:, 0])
    t_vals = np.unique(arr[:, 1])
    grid = disk_grid(r_vals.size, t_vals.size)
    if (arr.shape[0] != r_vals.size * t_vals.size
            or not np.allclose(r_vals, grid.r, rtol=0, atol=1e-12)
            or not np.allclose(t_vals, grid.theta, rtol=0, atol=1e-12)):
        raise FormatError(f"{source}: samples do not form a Gauss x trapezoid disk grid "
                          f"({r_vals.size} radii, {t_vals.size} angles)")
    values = np.zeros((grid.n_r, grid.n_theta), complex)
    ri = np.searchsorted(r_vals, arr[:, 0])
    ti = np.searchsorted(t_vals, arr[:, 1])
    if np.unique(ri * t_vals.size + ti).size != arr.shape[0]:
        raise FormatError(f"{source}: duplicate sample points")
    values[ri, ti] = arr[:, 2] + 1j * arr[:, 3]
    return grid, values


# -- figure data ----------------------------------------------------------------

def figure1_to_csv(rows) -> str:
    buf = io.StringIO()
    _write_rows(buf, FIGURE1_HEADER,
                ([str(r["j"]), str(r["m"]), str(r["k"]), fmt(r["absF"]), fmt(r["xi"])] for r in rows))
    return buf.getvalue()
