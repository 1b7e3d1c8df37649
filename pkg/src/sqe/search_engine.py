"""Positional-index retrieval with query-likelihood scoring.

Documents are token lists over a shared tokenizer.  Every query node
evaluates to a log-belief per document: terms and ordered windows use
Dirichlet-smoothed language models (collection frequency floored at 0.5
when a pattern never occurs, so beliefs stay finite), ``#combine``
averages and ``#weight`` takes a weight-normalized sum.  Scoring is
exhaustive over the collection, which keeps the ranking contract exact.

Indexes are immutable after build; concurrent searches are safe.
"""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from importlib import resources
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import DuplicateDocId, EmptyCollection, FormatError
from .query_lang import Combine, QueryNode, Term, Weight, Window
from .text import tokenize

DEFAULT_MU = 2500.0
UNSEEN_CF = 0.5


@dataclass
class Document:
    doc_id: str
    tokens: list[str]

    @classmethod
    def from_text(cls, doc_id: str, text: str) -> "Document":
        return cls(doc_id, tokenize(text))


@dataclass
class RankedList:
    """Ordered retrieval output with TREC run semantics."""

    request_id: str
    entries: list[tuple[str, float]] = field(default_factory=list)
    tag: str = "sqe"

    def __post_init__(self):
        scores = [s for _d, s in self.entries]
        if any(a < b for a, b in zip(scores, scores[1:])):
            raise ValueError("ranked list scores must be non-increasing")
        ids = [d for d, _s in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("ranked list doc ids must be unique")

    def doc_ids(self) -> list[str]:
        return [d for d, _s in self.entries]


class Index:
    """Positional inverted index over a document collection."""

    __slots__ = (
        "doc_ids",
        "_ordinals",
        "doc_lengths",
        "collection_length",
        "postings",
        "collection_tf",
        "_window_cf",
    )

    def __init__(self, docs: Iterable[Document]):
        self.doc_ids: list[str] = []
        self._ordinals: dict[str, int] = {}
        lengths: list[int] = []
        positions: dict[str, list[tuple[int, list[int]]]] = {}
        for doc in docs:
            if doc.doc_id in self._ordinals:
                raise DuplicateDocId(f"document id {doc.doc_id!r} appears twice")
            ordinal = len(self.doc_ids)
            self._ordinals[doc.doc_id] = ordinal
            self.doc_ids.append(doc.doc_id)
            lengths.append(len(doc.tokens))
            per_token: dict[str, list[int]] = {}
            for pos, tok in enumerate(doc.tokens):
                per_token.setdefault(tok, []).append(pos)
            for tok, plist in per_token.items():
                positions.setdefault(tok, []).append((ordinal, plist))
        self.doc_lengths = np.array(lengths, dtype=np.int64)
        self.collection_length = int(self.doc_lengths.sum())
        self.postings = {
            tok: (
                np.array([o for o, _p in entries], dtype=np.int64),
                [np.array(p, dtype=np.int64) for _o, p in entries],
            )
            for tok, entries in positions.items()
        }
        self.collection_tf = {
            tok: int(sum(p.size for p in plists))
            for tok, (_o, plists) in self.postings.items()
        }
        self._window_cf: dict[tuple[int, tuple[str, ...]], int] = {}

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    def ordinal(self, doc: str | int) -> int:
        if isinstance(doc, str):
            return self._ordinals[doc]
        return doc

    def term_tf(self, token: str, ordinal: int) -> int:
        entry = self.postings.get(token)
        if entry is None:
            return 0
        ordinals, plists = entry
        pos = int(np.searchsorted(ordinals, ordinal))
        if pos < ordinals.size and ordinals[pos] == ordinal:
            return int(plists[pos].size)
        return 0

    def positions(self, token: str, ordinal: int) -> np.ndarray | None:
        entry = self.postings.get(token)
        if entry is None:
            return None
        ordinals, plists = entry
        pos = int(np.searchsorted(ordinals, ordinal))
        if pos < ordinals.size and ordinals[pos] == ordinal:
            return plists[pos]
        return None


def build_index(docs: Iterable[Document]) -> Index:
    return Index(docs)


def read_documents(path: str) -> Iterable[Document]:
    """JSON-lines: one object per line with fields ``id`` and ``text``."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                doc_id, text = obj["id"], obj["text"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise FormatError(lineno, f"{path}: bad document line ({exc})") from None
            yield Document.from_text(str(doc_id), str(text))


def _window_count(pos_lists: Sequence[np.ndarray], n: int) -> int:
    """Ordered tuples with each consecutive gap in [1, n]."""
    ways = [1] * int(pos_lists[0].size)
    prev = pos_lists[0]
    for plist in pos_lists[1:]:
        prefix = [0]
        for w in ways:
            prefix.append(prefix[-1] + w)
        prev_list = prev.tolist()
        new_ways = []
        for p in plist.tolist():
            lo = bisect_left(prev_list, p - n)
            hi = bisect_right(prev_list, p - 1)
            new_ways.append(prefix[hi] - prefix[lo])
        ways = new_ways
        prev = plist
    return sum(ways)


def window_tf(idx: Index, doc: str | int, n: int, tokens: Sequence[str]) -> int:
    """Window match count inside one document."""
    if n < 1:
        raise ValueError("window size must be >= 1")
    ordinal = idx.ordinal(doc)
    pos_lists = []
    for tok in tokens:
        plist = idx.positions(tok, ordinal)
        if plist is None or plist.size == 0:
            return 0
        pos_lists.append(plist)
    return _window_count(pos_lists, n)


def _window_collection_tf(idx: Index, n: int, tokens: tuple[str, ...]) -> int:
    key = (n, tokens)
    got = idx._window_cf.get(key)
    if got is not None:
        return got
    total = 0
    for ordinal in _candidate_ordinals(idx, tokens):
        total += window_tf(idx, ordinal, n, tokens)
    idx._window_cf[key] = total
    return total


def _candidate_ordinals(idx: Index, tokens: tuple[str, ...]) -> np.ndarray:
    """Ordinals of documents containing every token of the pattern."""
    arrays = []
    for tok in set(tokens):
        entry = idx.postings.get(tok)
        if entry is None:
            return np.empty(0, dtype=np.int64)
        arrays.append(entry[0])
    arrays.sort(key=lambda a: a.size)
    current = arrays[0]
    for arr in arrays[1:]:
        current = np.intersect1d(current, arr, assume_unique=True)
        if current.size == 0:
            break
    return current


def _dirichlet(tf, cf: float, doc_lengths, collection_length: int, mu: float):
    cf = cf if cf > 0 else UNSEEN_CF
    return np.log((tf + mu * cf / collection_length) / (doc_lengths + mu))


def _score_vector(idx: Index, q: QueryNode, mu: float) -> np.ndarray:
    if isinstance(q, Term):
        tf = np.zeros(idx.n_docs)
        entry = idx.postings.get(q.token)
        if entry is not None:
            ordinals, plists = entry
            tf[ordinals] = [p.size for p in plists]
        cf = idx.collection_tf.get(q.token, 0)
        return _dirichlet(tf, cf, idx.doc_lengths, idx.collection_length, mu)
    if isinstance(q, Window):
        tf = np.zeros(idx.n_docs)
        for ordinal in _candidate_ordinals(idx, q.tokens):
            tf[ordinal] = _window_count(
                [idx.positions(t, int(ordinal)) for t in q.tokens], q.n
            )
        cf = _window_collection_tf(idx, q.n, q.tokens)
        return _dirichlet(tf, cf, idx.doc_lengths, idx.collection_length, mu)
    if isinstance(q, Combine):
        parts = [_score_vector(idx, c, mu) for c in q.children]
        return np.mean(parts, axis=0)
    if isinstance(q, Weight):
        total = sum(w for w, _c in q.entries)
        return sum(w / total * _score_vector(idx, c, mu) for w, c in q.entries)
    raise TypeError(f"not a query node: {q!r}")


def score_node(idx: Index, q: QueryNode, doc: str | int, mu: float = DEFAULT_MU) -> float:
    """Log-belief of one document under one query node."""
    if idx.n_docs == 0 or idx.collection_length == 0:
        raise EmptyCollection("cannot score against an empty collection")
    ordinal = idx.ordinal(doc)
    dlen = int(idx.doc_lengths[ordinal])
    if isinstance(q, Term):
        tf = idx.term_tf(q.token, ordinal)
        cf = idx.collection_tf.get(q.token, 0)
        return float(_dirichlet(tf, cf, dlen, idx.collection_length, mu))
    if isinstance(q, Window):
        tf = window_tf(idx, ordinal, q.n, q.tokens)
        cf = _window_collection_tf(idx, q.n, q.tokens)
        return float(_dirichlet(tf, cf, dlen, idx.collection_length, mu))
    if isinstance(q, Combine):
        return sum(score_node(idx, c, ordinal, mu) for c in q.children) / len(q.children)
    if isinstance(q, Weight):
        total = sum(w for w, _c in q.entries)
        return sum(w / total * score_node(idx, c, ordinal, mu) for w, c in q.entries)
    raise TypeError(f"not a query node: {q!r}")


def search(
    idx: Index,
    q: QueryNode,
    k: int,
    request_id: str = "0",
    tag: str = "sqe",
    mu: float = DEFAULT_MU,
) -> RankedList:
    """Score every document; top-k by score descending, doc id ascending."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if idx.n_docs == 0:
        return RankedList(request_id, [], tag)
    if idx.collection_length == 0:
        raise EmptyCollection("collection has documents but no tokens; scores are undefined")
    scores = _score_vector(idx, q, mu)
    order = sorted(range(idx.n_docs), key=lambda i: (-scores[i], idx.doc_ids[i]))
    entries = [(idx.doc_ids[i], float(scores[i])) for i in order[:k]]
    return RankedList(request_id, entries, tag)


# -- pseudo-relevance feedback ------------------------------------------------


def default_stopwords() -> frozenset[str]:
    data = resources.files("sqe.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w for w in data.split() if w)


def load_stopwords(path: str) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(w for w in fh.read().split() if w)


def query_tokens(q: QueryNode) -> set[str]:
    if isinstance(q, Term):
        return {q.token}
    if isinstance(q, Window):
        return set(q.tokens)
    if isinstance(q, Combine):
        return set().union(*(query_tokens(c) for c in q.children))
    if isinstance(q, Weight):
        return set().union(*(query_tokens(c) for _w, c in q.entries))
    raise TypeError(f"not a query node: {q!r}")


def prf_expand(
    idx: Index,
    q: QueryNode,
    fb_docs: int = 10,
    fb_terms: int = 10,
    orig_weight: float = 0.5,
    stopwords: frozenset[str] | None = None,
    mu: float = DEFAULT_MU,
) -> QueryNode:
    """Relevance-model feedback over the top retrieved documents.

    Term weights are w(t) = sum over feedback docs of P(t|d) times the
    softmax-normalized document score.  Stopwords and the query's own
    tokens are dropped; the top ``fb_terms`` remainder re-weights the
    original query as (orig_weight, q) + (1 - orig_weight, feedback).
    With no retrievable documents or fb_terms <= 0 the query is returned
    unchanged.
    """
    if fb_terms <= 0 or fb_docs <= 0 or idx.n_docs == 0:
        return q
    top = search(idx, q, fb_docs, mu=mu).entries
    if not top:
        return q
    scores = np.array([s for _d, s in top])
    soft = np.exp(scores - scores.max())
    soft /= soft.sum()

    excluded = query_tokens(q) | (stopwords if stopwords is not None else default_stopwords())
    ordinals = [idx.ordinal(d) for d, _s in top]
    weights: dict[str, float] = {}
    for tok, (post_ordinals, plists) in idx.postings.items():
        if tok in excluded:
            continue
        for rank, ordinal in enumerate(ordinals):
            pos = int(np.searchsorted(post_ordinals, ordinal))
            if pos < post_ordinals.size and post_ordinals[pos] == ordinal:
                dlen = int(idx.doc_lengths[ordinal])
                if dlen:
                    weights[tok] = weights.get(tok, 0.0) + float(
                        soft[rank] * plists[pos].size / dlen
                    )
    if not weights:
        return q
    best = sorted(weights.items(), key=lambda e: (-e[1], e[0]))[:fb_terms]
    feedback = Weight(tuple((w, Term(t)) for t, w in best))
    return Weight(((orig_weight, q), (1.0 - orig_weight, feedback)))


# -- TREC run files ------------------------------------------------------------


def write_trec_run(runs: Iterable[RankedList], out: IO[str]) -> None:
    """``qid Q0 docid rank score tag`` lines, rank from 1, 6-decimal scores."""
    for run in runs:
        for rank, (doc_id, score) in enumerate(run.entries, start=1):
            out.write(f"{run.request_id} Q0 {doc_id} {rank} {score:.6f} {run.tag}\n")


def read_trec_run(path: str) -> list[RankedList]:
    """Parse a TREC run file back into per-request ranked lists."""
    per_qid: dict[str, list[tuple[int, str, float]]] = {}
    tags: dict[str, str] = {}
    order: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 6:
                raise FormatError(lineno, f"{path}: expected 6 fields, got {len(parts)}")
            qid, _q0, doc_id, rank, score, tag = parts
            try:
                entry = (int(rank), doc_id, float(score))
            except ValueError as exc:
                raise FormatError(lineno, f"{path}: {exc}") from None
            if qid not in per_qid:
                per_qid[qid] = []
                tags[qid] = tag
                order.append(qid)
            per_qid[qid].append(entry)
    runs = []
    for qid in order:
        rows = sorted(per_qid[qid])
        runs.append(RankedList(qid, [(d, s) for _r, d, s in rows], tags[qid]))
    return runs
