"""Merge a CSV amenity batch into an OSM document as new tagged nodes."""

from __future__ import annotations

from dataclasses import dataclass

from .osmio import ENRICHMENT_TAG, Amenity, AmenityKind, OsmDocument, OsmNode


@dataclass(frozen=True)
class EnrichmentReport:
    added_count: int
    id_range: tuple[int, int] | None
    per_kind_counts: dict[str, int]


def enrich(doc: OsmDocument, amenities: list[Amenity]) -> tuple[OsmDocument, EnrichmentReport]:
    """Return a copy of `doc` with one new node per amenity.

    New nodes get negative ids below every existing id, carry
    ``amenity=<kind>`` and a provenance tag holding the amenity id, and are
    not attached to any way. Re-enriching with an id already present in the
    document is rejected so a batch cannot be applied twice.
    """
    existing_refs = {
        node.tags[ENRICHMENT_TAG] for node in doc.nodes.values() if ENRICHMENT_TAG in node.tags
    }
    collisions = sorted(existing_refs & {a.id for a in amenities})
    if collisions:
        raise ValueError(
            f"amenities already enriched into this document: {', '.join(collisions)}"
        )

    next_id = min(-1, min(doc.nodes.keys(), default=0) - 1)
    nodes = dict(doc.nodes)
    per_kind = {kind.value: 0 for kind in AmenityKind}
    first_id = last_id = None
    for amenity in amenities:
        tags = {"amenity": amenity.kind.value, ENRICHMENT_TAG: amenity.id}
        if amenity.name:
            tags["name"] = amenity.name
        nodes[next_id] = OsmNode(next_id, amenity.pos, tags)
        if first_id is None:
            first_id = next_id
        last_id = next_id
        per_kind[amenity.kind.value] += 1
        next_id -= 1

    report = EnrichmentReport(
        added_count=len(amenities),
        id_range=(first_id, last_id) if first_id is not None else None,
        per_kind_counts={k: v for k, v in per_kind.items() if v},
    )
    return OsmDocument(nodes=nodes, ways=doc.ways, bounds=doc.bounds), report


def extract_amenities(doc: OsmDocument) -> list[Amenity]:
    """Recover the amenities materialized by :func:`enrich` from a document."""
    valid_kinds = {k.value for k in AmenityKind}
    out: list[Amenity] = []
    for node in doc.nodes.values():
        ref = node.tags.get(ENRICHMENT_TAG)
        if ref is None:
            continue
        kind = node.tags.get("amenity")
        if kind not in valid_kinds:
            raise ValueError(f"node {node.id}: enriched node has unknown kind '{kind}'")
        out.append(Amenity(ref, AmenityKind(kind), node.pos, node.tags.get("name")))
    out.sort(key=lambda a: a.id)
    return out
