"""Shared fixtures: the two paper-example knowledge bases and small helpers."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # oracles / generators modules

from sqe.kb_graph import build_graph

# Cable-car fixture: Cable_car and Funicular are doubly linked and share the
# single category of the input node, so the triangular motif admits exactly
# Funicular.  Gondola_lift is linked one way only and must stay out.
CABLE_NODES = [
    ("1", "A", "Cable_car"),
    ("2", "A", "Funicular"),
    ("3", "C", "Cable_transport"),
    ("4", "A", "Gondola_lift"),
]
CABLE_EDGES = [
    ("1", "2", "AA"),
    ("2", "1", "AA"),
    ("1", "3", "AC"),
    ("2", "3", "AC"),
    ("1", "4", "AA"),
    ("4", "3", "AC"),
]

# Graffiti fixture: two input articles (Graffiti, Street_art) and seven
# candidates, all doubly linked with both inputs.  Category memberships are
# arranged so the combined triangular+square weights come out as
# stencil 5, yarn bombing 5, above (artist) 4 and 3 for the rest.
GRAFFITI_NODES = [
    ("a1", "A", "Graffiti"),
    ("a2", "A", "Street_art"),
    ("a3", "A", "Stencil"),
    ("a4", "A", "Yarn_bombing"),
    ("a5", "A", "Above_(artist)"),
    ("a6", "A", "Banksy"),
    ("a7", "A", "John_Fekner"),
    ("a8", "A", "Urban_art"),
    ("a9", "A", "Public_art"),
    ("c1", "C", "Graffiti"),
    ("c2", "C", "Street_art"),
    ("c3", "C", "Graffiti_artists"),
    ("c4", "C", "Aerosol_paintings"),
    ("c5", "C", "Street_artists"),
    ("c6", "C", "Outdoor_sculptures"),
]

_AC = {
    "a1": ["c1"],
    "a2": ["c2"],
    "a3": ["c1", "c2", "c3", "c4", "c5"],
    "a4": ["c1", "c2", "c3", "c5", "c6"],
    "a5": ["c1", "c2", "c3", "c5"],
    "a6": ["c1", "c3", "c5"],
    "a7": ["c1", "c2", "c3"],
    "a8": ["c1", "c2", "c5"],
    "a9": ["c1", "c3", "c4"],
}

GRAFFITI_EDGES = (
    # both inputs doubly linked with every candidate (and with each other)
    [(a, b, "AA") for a in ("a1", "a2") for b in ("a3", "a4", "a5", "a6", "a7", "a8", "a9") ]
    + [(b, a, "AA") for a in ("a1", "a2") for b in ("a3", "a4", "a5", "a6", "a7", "a8", "a9")]
    + [("a1", "a2", "AA"), ("a2", "a1", "AA")]
    + [(a, c, "AC") for a, cs in _AC.items() for c in cs]
    + [("c3", "c1", "CC"), ("c4", "c1", "CC"), ("c5", "c2", "CC"), ("c6", "c2", "CC")]
)

# Combined (both motifs) expansion weights for inputs {Graffiti, Street_art};
# derived by hand from the membership table above, mirrored by the oracles.
GRAFFITI_BOTH_WEIGHTS = {
    "Stencil": 5,
    "Yarn_bombing": 5,
    "Above_(artist)": 4,
    "Banksy": 3,
    "John_Fekner": 3,
    "Urban_art": 3,
    "Public_art": 3,
}


@pytest.fixture(scope="session")
def cable_graph():
    return build_graph(CABLE_NODES, CABLE_EDGES)


@pytest.fixture(scope="session")
def graffiti_graph():
    return build_graph(GRAFFITI_NODES, GRAFFITI_EDGES)


def write_tsv(path, rows):
    path.write_text(
        "".join("\t".join(r) + "\n" for r in rows), encoding="utf-8"
    )
    return str(path)
