"""The structured query language: build, render, parse.

Queries are trees of four operators.  ``#combine`` averages children,
``#weight`` takes a normalized weighted sum, ``#N(...)`` matches tokens
in order with gaps below N, and a bare token matches a term.
"""

from sqe import (
    Combine,
    MotifKind,
    Term,
    Weight,
    Window,
    build_expanded_query,
    build_graph,
    expand,
    parse,
    render,
)

# Trees render to a single deterministic line ...
tree = Combine((
    Term("graffiti"),
    Window(1, ("street", "art")),
    Weight(((5.0, Window(1, ("stencil",))), (3.0, Term("banksy")))),
))
text = render(tree)
print(text)

# ... and parse back to the identical tree, whitespace aside.
assert parse(text) == tree
assert parse("#combine(graffiti  #1(street art))") == parse(
    "#combine( graffiti #1(street art) )"
)

# #N windows: #1 is an exact phrase, larger N allows gaps.
print(render(Window(3, ("new", "york"))), "-> ordered, up to 2 tokens between")

# Titles keep their display form inside a window while matching by tokens.
print(render(parse("#1(above (artist))")))

# An expanded query combines the user's keywords, the linked entity
# titles and the motif-weighted expansion features.
nodes = [
    ("g", "A", "Graffiti"),
    ("s", "A", "Stencil"),
    ("c", "C", "Graffiti"),
]
edges = [
    ("g", "s", "AA"),
    ("s", "g", "AA"),
    ("g", "c", "AC"),
    ("s", "c", "AC"),
]
g = build_graph(nodes, edges)
qg = expand(g, {g.article_by_title("Graffiti")}, MotifKind.TRIANGULAR)
eq = build_expanded_query(
    ["graffiti", "on", "walls"], ["Graffiti"], qg, g
)
print(render(eq.root))
# the three parts stay available individually
print("input part:   ", render(eq.input_part))
print("entity part:  ", render(eq.entity_part))
print("feature part: ", render(eq.feature_part))
