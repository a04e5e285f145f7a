"""ESRI ASCII grid elevation rasters and bilinear sampling.

Grid values are treated as cell-center samples even though the .asc header is
corner-registered; this makes bilinear interpolation well defined. Sampling
outside the outermost cell centers, or with any nodata neighbour, yields a
miss (None) rather than an extrapolated value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geo import LatLon
from .osmio import OsmDocument

_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "NODATA_value")


@dataclass(frozen=True)
class ElevationRaster:
    ncols: int
    nrows: int
    xll: float
    yll: float
    cellsize: float
    nodata: float
    values: tuple[float, ...]  # row-major, row 0 = northernmost

    def __post_init__(self) -> None:
        if self.ncols <= 0 or self.nrows <= 0:
            raise ValueError("raster dimensions must be positive")
        if self.cellsize <= 0:
            raise ValueError("cellsize must be positive")
        if len(self.values) != self.ncols * self.nrows:
            raise ValueError(
                f"expected {self.ncols * self.nrows} values, got {len(self.values)}"
            )

    def value_at(self, row: int, col: int) -> float:
        return self.values[row * self.ncols + col]


def load_ascii_grid(data: bytes | str) -> ElevationRaster:
    """Parse an ESRI ASCII grid (.asc) file."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = [ln.strip() for ln in data.replace("\r\n", "\n").split("\n")]
    lines = [ln for ln in lines if ln]
    if len(lines) < len(_HEADER_KEYS):
        raise ValueError("truncated file: incomplete header")

    header: dict[str, float] = {}
    for i, key in enumerate(_HEADER_KEYS):
        parts = lines[i].split()
        if len(parts) != 2 or parts[0].lower() != key.lower():
            raise ValueError(f"header line {i + 1}: expected key '{key}'")
        try:
            header[key] = float(parts[1])
        except ValueError:
            raise ValueError(f"header line {i + 1}: bad value for '{key}'") from None

    ncols = int(header["ncols"])
    nrows = int(header["nrows"])
    body = lines[len(_HEADER_KEYS):]
    if len(body) != nrows:
        raise ValueError(f"expected {nrows} data rows, got {len(body)}")

    values: list[float] = []
    for r, line in enumerate(body):
        cells = line.split()
        if len(cells) != ncols:
            raise ValueError(f"row {r}: expected {ncols} values, got {len(cells)}")
        for c, cell in enumerate(cells):
            try:
                values.append(float(cell))
            except ValueError:
                raise ValueError(f"row {r}, col {c}: non-numeric cell '{cell}'") from None

    return ElevationRaster(
        ncols=ncols,
        nrows=nrows,
        xll=header["xllcorner"],
        yll=header["yllcorner"],
        cellsize=header["cellsize"],
        nodata=header["NODATA_value"],
        values=tuple(values),
    )


def render_ascii_grid(raster: ElevationRaster) -> str:
    """Serialize a raster back to .asc text."""
    lines = [
        f"ncols {raster.ncols}",
        f"nrows {raster.nrows}",
        f"xllcorner {raster.xll!r}",
        f"yllcorner {raster.yll!r}",
        f"cellsize {raster.cellsize!r}",
        f"NODATA_value {raster.nodata!r}",
    ]
    for r in range(raster.nrows):
        row = raster.values[r * raster.ncols:(r + 1) * raster.ncols]
        lines.append(" ".join(repr(v) for v in row))
    return "\n".join(lines) + "\n"


def sample(raster: ElevationRaster, p: LatLon) -> float | None:
    """Bilinear elevation at `p`, or None outside coverage / near nodata."""
    # Continuous cell-center coordinates: gx counts columns from the west,
    # gy counts rows from the south.
    gx = (p.lon - raster.xll) / raster.cellsize - 0.5
    gy = (p.lat - raster.yll) / raster.cellsize - 0.5
    c0 = math.floor(gx)
    s0 = math.floor(gy)
    fx = gx - c0
    fy = gy - s0
    # A probe exactly on the outermost cell-center line still has a
    # well-defined value (weight 0 on the missing neighbour).
    c1 = c0 if (c0 == raster.ncols - 1 and fx == 0.0) else c0 + 1
    s1 = s0 if (s0 == raster.nrows - 1 and fy == 0.0) else s0 + 1
    if c0 < 0 or c1 > raster.ncols - 1 or s0 < 0 or s1 > raster.nrows - 1:
        return None
    # Row index in file order (row 0 = north) for a south-counted index s.
    corners = [
        raster.value_at(raster.nrows - 1 - s0, c0),
        raster.value_at(raster.nrows - 1 - s0, c1),
        raster.value_at(raster.nrows - 1 - s1, c0),
        raster.value_at(raster.nrows - 1 - s1, c1),
    ]
    if any(v == raster.nodata for v in corners):
        return None
    v00, v10, v01, v11 = corners
    return (
        v00 * (1 - fx) * (1 - fy)
        + v10 * fx * (1 - fy)
        + v01 * (1 - fx) * fy
        + v11 * fx * fy
    )


def assign_elevations(doc: OsmDocument, raster: ElevationRaster) -> tuple[dict[int, float], int]:
    """Sample every node; return (node_id -> meters, miss_count)."""
    elevations: dict[int, float] = {}
    misses = 0
    for node_id, node in doc.nodes.items():
        value = sample(raster, node.pos)
        if value is None:
            misses += 1
        else:
            elevations[node_id] = value
    return elevations, misses
