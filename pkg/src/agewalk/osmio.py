"""Readers and writers for the OSM XML subset and the amenity CSV input."""

from __future__ import annotations

import csv
import io
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum

from .geo import BBox, LatLon

COORD_DECIMALS = 7


class AmenityKind(str, Enum):
    BENCH = "bench"
    TOILETS = "toilets"
    DRINKING_WATER = "drinking_water"
    HANDRAIL = "handrail"


# Kinds that feed the amenity factor; handrails feed the comfort factor.
ROUTE_AMENITY_KINDS = (AmenityKind.BENCH, AmenityKind.TOILETS, AmenityKind.DRINKING_WATER)

AMENITY_CSV_HEADER = ["id", "kind", "lat", "lon", "name"]

# Provenance tag written by the enrichment step and read back by the
# projection step.
ENRICHMENT_TAG = "ref:afrp"


@dataclass(frozen=True)
class OsmNode:
    id: int
    pos: LatLon
    tags: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class OsmWay:
    id: int
    node_refs: tuple[int, ...]
    tags: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class OsmDocument:
    nodes: dict[int, OsmNode]
    ways: dict[int, OsmWay]
    bounds: BBox | None = None


@dataclass(frozen=True)
class Amenity:
    id: str
    kind: AmenityKind
    pos: LatLon
    name: str | None = None


def _parse_tags(elem: ET.Element, label: str) -> dict[str, str]:
    tags: dict[str, str] = {}
    for tag in elem.findall("tag"):
        k = tag.get("k")
        v = tag.get("v")
        if k is None or v is None:
            raise ValueError(f"{label}: tag missing k or v attribute")
        if k in tags:
            raise ValueError(f"{label}: duplicate tag key '{k}'")
        tags[k] = v
    return tags


def parse_osm(xml_bytes: bytes | str) -> OsmDocument:
    """Parse nodes, ways and tags from an OSM XML document.

    Unknown elements (relations, metadata) are skipped. Duplicate ids and
    missing mandatory attributes are errors.
    """
    if isinstance(xml_bytes, str):
        xml_bytes = xml_bytes.encode("utf-8")
    try:
        root = ET.fromstring(xml_bytes)
    except ET.ParseError as exc:
        line, col = exc.position
        raise ValueError(f"malformed XML at line {line}, column {col}: {exc.msg}") from exc

    nodes: dict[int, OsmNode] = {}
    ways: dict[int, OsmWay] = {}
    bounds: BBox | None = None

    for elem in root:
        if elem.tag == "bounds":
            try:
                bounds = BBox(
                    min_lat=float(elem.get("minlat", "")),
                    min_lon=float(elem.get("minlon", "")),
                    max_lat=float(elem.get("maxlat", "")),
                    max_lon=float(elem.get("maxlon", "")),
                )
            except ValueError as exc:
                raise ValueError(f"bounds: {exc}") from exc
        elif elem.tag == "node":
            raw_id = elem.get("id")
            if raw_id is None:
                raise ValueError("node: missing id")
            node_id = int(raw_id)
            for attr in ("lat", "lon"):
                if elem.get(attr) is None:
                    raise ValueError(f"node {node_id}: missing {attr}")
            if node_id in nodes:
                raise ValueError(f"duplicate node id {node_id}")
            pos = LatLon(float(elem.get("lat")), float(elem.get("lon")))
            nodes[node_id] = OsmNode(node_id, pos, _parse_tags(elem, f"node {node_id}"))
        elif elem.tag == "way":
            raw_id = elem.get("id")
            if raw_id is None:
                raise ValueError("way: missing id")
            way_id = int(raw_id)
            if way_id in ways:
                raise ValueError(f"duplicate way id {way_id}")
            refs = []
            for nd in elem.findall("nd"):
                ref = nd.get("ref")
                if ref is None:
                    raise ValueError(f"way {way_id}: nd missing ref")
                refs.append(int(ref))
            ways[way_id] = OsmWay(way_id, tuple(refs), _parse_tags(elem, f"way {way_id}"))
        # anything else (relation, meta, note, ...) is intentionally skipped

    return OsmDocument(nodes=nodes, ways=ways, bounds=bounds)


def write_osm(doc: OsmDocument) -> bytes:
    """Serialize a document back to OSM XML, nodes before ways.

    Coordinates are written with 7 decimals (about 1 cm), so a parse of the
    output reproduces the document structurally.
    """
    root = ET.Element("osm", {"version": "0.6", "generator": "agewalk"})
    if doc.bounds is not None:
        ET.SubElement(
            root,
            "bounds",
            {
                "minlat": f"{doc.bounds.min_lat:.{COORD_DECIMALS}f}",
                "minlon": f"{doc.bounds.min_lon:.{COORD_DECIMALS}f}",
                "maxlat": f"{doc.bounds.max_lat:.{COORD_DECIMALS}f}",
                "maxlon": f"{doc.bounds.max_lon:.{COORD_DECIMALS}f}",
            },
        )
    for node in doc.nodes.values():
        el = ET.SubElement(
            root,
            "node",
            {
                "id": str(node.id),
                "lat": f"{node.pos.lat:.{COORD_DECIMALS}f}",
                "lon": f"{node.pos.lon:.{COORD_DECIMALS}f}",
            },
        )
        for k, v in node.tags.items():
            ET.SubElement(el, "tag", {"k": k, "v": v})
    for way in doc.ways.values():
        el = ET.SubElement(root, "way", {"id": str(way.id)})
        for ref in way.node_refs:
            ET.SubElement(el, "nd", {"ref": str(ref)})
        for k, v in way.tags.items():
            ET.SubElement(el, "tag", {"k": k, "v": v})
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


def parse_amenity_csv(csv_bytes: bytes | str) -> list[Amenity]:
    """Parse the amenity CSV (header id,kind,lat,lon,name; any column order)."""
    if isinstance(csv_bytes, bytes):
        text = csv_bytes.decode("utf-8")
    else:
        text = csv_bytes
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty CSV: missing header") from None
    header = [h.strip() for h in header]
    if sorted(header) != sorted(AMENITY_CSV_HEADER):
        raise ValueError(f"bad header {header!r}: expected columns {AMENITY_CSV_HEADER}")
    col = {name: header.index(name) for name in AMENITY_CSV_HEADER}

    amenities: list[Amenity] = []
    seen: set[str] = set()
    valid_kinds = {k.value for k in AmenityKind}
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ValueError(f"row {row_no}: expected {len(header)} columns, got {len(row)}")
        amenity_id = row[col["id"]].strip()
        kind = row[col["kind"]].strip()
        if not amenity_id:
            raise ValueError(f"row {row_no}: empty id")
        if amenity_id in seen:
            raise ValueError(f"row {row_no}: duplicate id '{amenity_id}'")
        if kind not in valid_kinds:
            raise ValueError(f"row {row_no}: unknown kind '{kind}'")
        try:
            pos = LatLon(float(row[col["lat"]]), float(row[col["lon"]]))
        except ValueError as exc:
            raise ValueError(f"row {row_no}: bad coordinate ({exc})") from exc
        name = row[col["name"]].strip() or None
        seen.add(amenity_id)
        amenities.append(Amenity(amenity_id, AmenityKind(kind), pos, name))
    return amenities


def write_amenity_csv(amenities: list[Amenity]) -> str:
    """Serialize amenities with the canonical header."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(AMENITY_CSV_HEADER)
    for a in amenities:
        writer.writerow([a.id, a.kind.value, f"{a.pos.lat:.{COORD_DECIMALS}f}", f"{a.pos.lon:.{COORD_DECIMALS}f}", a.name or ""])
    return out.getvalue()
