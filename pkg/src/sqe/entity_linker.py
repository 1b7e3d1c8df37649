"""Dictionary entity linking against article titles.

A deterministic stand-in for a learned linker: greedy left-to-right
longest match of token n-grams against tokenized article titles.  Known
disambiguation titles can be excluded through a stop-title list.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NoEntities
from .kb_graph import KBGraph, NodeId, NodeKind
from .text import normalize_title, tokenize


@dataclass(frozen=True)
class InputRequest:
    request_id: str
    text: str


@dataclass
class LinkedEntities:
    request_id: str
    input_nodes: list[NodeId] = field(default_factory=list)
    matched_spans: list[tuple[int, int]] = field(default_factory=list)


def load_stop_titles(path: str) -> set[str]:
    """One normalized title per line; blank lines ignored."""
    with open(path, encoding="utf-8") as fh:
        return {normalize_title(line) for line in fh if line.strip()}


class EntityLinker:
    """Phrase table over article titles, reusable across requests.

    Purely read-only over the graph; safe for concurrent use.
    """

    def __init__(self, g: KBGraph, max_ngram: int = 8, stop_titles: set[str] | None = None):
        if max_ngram < 1:
            raise ValueError("max_ngram must be >= 1")
        self.graph = g
        self.max_ngram = max_ngram
        stop = stop_titles or set()
        phrases: dict[tuple[str, ...], NodeId] = {}
        for node in g.nodes:
            if node.kind is not NodeKind.ARTICLE:
                continue
            if normalize_title(node.title) in stop:
                continue
            toks = tuple(tokenize(node.title))
            if not 1 <= len(toks) <= max_ngram:
                continue
            # token-identical titles are rare; keep the earliest node
            if toks not in phrases:
                phrases[toks] = node.id
        self._phrases = phrases

    def link(self, req: InputRequest) -> LinkedEntities:
        """Greedy longest-match linking; raises NoEntities on zero matches."""
        tokens = tokenize(req.text)
        result = LinkedEntities(req.request_id)
        seen: set[NodeId] = set()
        i = 0
        while i < len(tokens):
            for n in range(min(self.max_ngram, len(tokens) - i), 0, -1):
                node = self._phrases.get(tuple(tokens[i : i + n]))
                if node is not None:
                    if node not in seen:
                        seen.add(node)
                        result.input_nodes.append(node)
                        result.matched_spans.append((i, i + n))
                    i += n
                    break
            else:
                i += 1
        if not result.input_nodes:
            raise NoEntities(f"request {req.request_id!r}: no article title matches {req.text!r}")
        return result


def link(
    g: KBGraph,
    req: InputRequest,
    max_ngram: int = 8,
    stop_titles: set[str] | None = None,
) -> LinkedEntities:
    """One-shot linking; builds the phrase table for a single request."""
    return EntityLinker(g, max_ngram=max_ngram, stop_titles=stop_titles).link(req)
