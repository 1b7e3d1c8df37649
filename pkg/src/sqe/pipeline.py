"""End-to-end request handling and multi-query-graph result merging.

Each request is linked to input nodes, expanded once per plan entry
(triangular, both, square by default), searched, and the ranked lists
are stitched range-wise: the first cutoff entries come from the first
list, the next quota of unseen documents from the second, and the final
list fills up to the total.  Merged scores are synthetic (total - rank
+ 1) so the output forms a valid run.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Sequence

from .entity_linker import EntityLinker, InputRequest, load_stop_titles
from .errors import FormatError, LengthMismatch, NoEntities
from .kb_graph import KBGraph
from .motif_expander import MotifKind, expand
from .query_lang import build_expanded_query
from .search_engine import DEFAULT_MU, Index, RankedList, load_stopwords, prf_expand, search
from .text import tokenize

DEFAULT_PLAN = (
    ("eq1", MotifKind.TRIANGULAR),
    ("eq2", MotifKind.BOTH),
    ("eq3", MotifKind.SQUARE),
)


@dataclass
class PipelineConfig:
    plan: tuple[tuple[str, MotifKind], ...] = DEFAULT_PLAN
    cutoffs: tuple[int, ...] = (5, 30)
    total: int = 1000
    prf: bool = False
    mu: float = DEFAULT_MU
    fb_docs: int = 10
    fb_terms: int = 10
    orig_weight: float = 0.5
    max_ngram: int = 8
    stop_titles_path: str | None = None
    stopwords_path: str | None = None
    tag: str = "sqe"

    def __post_init__(self):
        self.plan = tuple((str(l), MotifKind(k) if not isinstance(k, MotifKind) else k) for l, k in self.plan)
        self.cutoffs = tuple(int(c) for c in self.cutoffs)
        labels = [l for l, _k in self.plan]
        if len(set(labels)) != len(labels):
            raise ValueError(f"plan labels must be unique: {labels}")
        if len(self.plan) != len(self.cutoffs) + 1:
            raise ValueError(
                f"plan of {len(self.plan)} entries needs {len(self.plan) - 1} cutoffs, "
                f"got {len(self.cutoffs)}"
            )
        if any(c <= 0 for c in self.cutoffs):
            raise ValueError("cutoffs must be strictly positive")
        if sum(self.cutoffs) > self.total:
            raise ValueError("cutoffs must not exceed the total")

    @classmethod
    def from_file(cls, path: str) -> "PipelineConfig":
        """Flat ``key=value`` text; '#' starts a comment."""
        values: dict[str, str] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise FormatError(lineno, f"{path}: expected key=value, got {line!r}")
                key, value = (s.strip() for s in line.split("=", 1))
                values[key] = value
        kwargs: dict = {}
        if "plan" in values:
            plan = []
            for item in values.pop("plan").split(","):
                if ":" not in item:
                    raise FormatError(0, f"{path}: plan entry {item!r} is not label:kind")
                label, kind = item.split(":", 1)
                plan.append((label.strip(), MotifKind(kind.strip().lower())))
            kwargs["plan"] = tuple(plan)
        if "cutoffs" in values:
            kwargs["cutoffs"] = tuple(int(c) for c in values.pop("cutoffs").split(","))
        for key, conv in (
            ("total", int),
            ("mu", float),
            ("fb_docs", int),
            ("fb_terms", int),
            ("orig_weight", float),
            ("max_ngram", int),
            ("tag", str),
        ):
            if key in values:
                kwargs[key] = conv(values.pop(key))
        if "prf" in values:
            kwargs["prf"] = values.pop("prf").lower() in ("on", "true", "1", "yes")
        if "stop_titles" in values:
            kwargs["stop_titles_path"] = values.pop("stop_titles")
        if "stopwords" in values:
            kwargs["stopwords_path"] = values.pop("stopwords")
        if values:
            raise FormatError(0, f"{path}: unknown config keys {sorted(values)}")
        return cls(**kwargs)


@dataclass
class RequestReport:
    request_id: str
    entities: list[str] = field(default_factory=list)
    fallback: bool = False
    expansion_sizes: dict[str, int] = field(default_factory=dict)
    timings_ms: dict[str, float] = field(default_factory=dict)


def load_topics(path: str) -> list[InputRequest]:
    """``<qid>\\t<keyword text>`` per line."""
    topics = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if "\t" not in line:
                raise FormatError(lineno, f"{path}: expected <qid>\\t<text>")
            qid, text = line.split("\t", 1)
            if not text.strip():
                raise FormatError(lineno, f"{path}: empty request text")
            topics.append(InputRequest(qid.strip(), text))
    return topics


def merge_lists(
    lists: Sequence[RankedList], cutoffs: Sequence[int], total: int
) -> RankedList:
    """Range-stitch ranked lists with per-list quotas of unseen documents.

    The first list contributes its first cutoff entries, each following
    list appends up to its quota of documents not already taken
    (duplicates do not consume quota), and the final list fills up to
    ``total``.  Scores are replaced by total - rank + 1.
    """
    if len(lists) != len(cutoffs) + 1:
        raise LengthMismatch(f"{len(lists)} lists need {len(lists) - 1} cutoffs, got {len(cutoffs)}")
    qids = {r.request_id for r in lists}
    if len(qids) != 1:
        raise ValueError(f"merge_lists got lists for different requests: {sorted(qids)}")
    quotas = list(cutoffs) + [None]
    taken: list[str] = []
    seen: set[str] = set()
    for ranked, quota in zip(lists, quotas):
        appended = 0
        for doc_id, _score in ranked.entries:
            if len(taken) >= total:
                break
            if doc_id in seen:
                continue
            if quota is not None and appended >= quota:
                break
            taken.append(doc_id)
            seen.add(doc_id)
            appended += 1
    entries = [(doc_id, float(total - rank)) for rank, doc_id in enumerate(taken)]
    return RankedList(lists[0].request_id, entries, lists[0].tag)


def _linker_from_config(g: KBGraph, cfg: PipelineConfig) -> EntityLinker:
    stop = load_stop_titles(cfg.stop_titles_path) if cfg.stop_titles_path else None
    return EntityLinker(g, max_ngram=cfg.max_ngram, stop_titles=stop)


def run_request_detailed(
    g: KBGraph,
    idx: Index,
    req: InputRequest,
    cfg: PipelineConfig,
    linker: EntityLinker | None = None,
) -> tuple[RankedList, RequestReport]:
    """One request through link, per-plan expansion, search and merge."""
    report = RequestReport(req.request_id)
    if linker is None:
        linker = _linker_from_config(g, cfg)
    stopwords = load_stopwords(cfg.stopwords_path) if cfg.stopwords_path else None

    t0 = time.perf_counter()
    try:
        linked = linker.link(req)
        inputs = linked.input_nodes
        entity_titles = [g.title(n) for n in inputs]
    except NoEntities:
        inputs = []
        entity_titles = []
        report.fallback = True
    report.timings_ms["link"] = (time.perf_counter() - t0) * 1000
    report.entities = entity_titles
    input_tokens = tokenize(req.text)

    if report.fallback:
        # no input nodes, so every plan entry would issue the same
        # input-only query; a single search is the merged result
        t0 = time.perf_counter()
        query = build_expanded_query(input_tokens, [], None).root
        if cfg.prf:
            query = prf_expand(
                idx, query, cfg.fb_docs, cfg.fb_terms, cfg.orig_weight, stopwords, cfg.mu
            )
        merged = search(idx, query, cfg.total, req.request_id, cfg.tag, cfg.mu)
        report.timings_ms["query"] = (time.perf_counter() - t0) * 1000
        return merged, report

    results = []
    query_ms = 0.0
    for label, kind in cfg.plan:
        t0 = time.perf_counter()
        qg = expand(g, inputs, kind)
        report.expansion_sizes[label] = len(qg.expansion)
        report.timings_ms[f"expand_{label}"] = (time.perf_counter() - t0) * 1000

        t0 = time.perf_counter()
        query = build_expanded_query(input_tokens, entity_titles, qg, g).root
        if cfg.prf:
            query = prf_expand(
                idx, query, cfg.fb_docs, cfg.fb_terms, cfg.orig_weight, stopwords, cfg.mu
            )
        results.append(search(idx, query, cfg.total, req.request_id, label, cfg.mu))
        query_ms += (time.perf_counter() - t0) * 1000
    report.timings_ms["query"] = query_ms

    merged = merge_lists(results, cfg.cutoffs, cfg.total)
    merged.tag = cfg.tag
    return merged, report


def run_request(
    g: KBGraph, idx: Index, req: InputRequest, cfg: PipelineConfig
) -> RankedList:
    merged, _report = run_request_detailed(g, idx, req, cfg)
    return merged


def run_batch(
    g: KBGraph,
    idx: Index,
    topics: Sequence[InputRequest],
    cfg: PipelineConfig,
    jobs: int = 1,
) -> tuple[list[RankedList], list[RequestReport]]:
    """All topics, optionally in parallel; outputs stay in topic order."""
    linker = _linker_from_config(g, cfg)
    if jobs <= 1:
        pairs = [run_request_detailed(g, idx, req, cfg, linker) for req in topics]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            pairs = list(
                pool.map(lambda r: run_request_detailed(g, idx, r, cfg, linker), topics)
            )
    return [p[0] for p in pairs], [p[1] for p in pairs]


def write_report(reports: Sequence[RequestReport], cfg: PipelineConfig, out: IO[str]) -> None:
    """Per-request TSV: entities, fallback flag, expansion sizes, stage timings."""
    labels = [label for label, _k in cfg.plan]
    header = (
        ["qid", "entities", "fallback"]
        + [f"n_expansion_{l}" for l in labels]
        + ["link_ms"]
        + [f"expand_{l}_ms" for l in labels]
        + ["query_ms"]
    )
    out.write("\t".join(header) + "\n")
    for rep in reports:
        row = [
            rep.request_id,
            "|".join(rep.entities),
            "yes" if rep.fallback else "no",
        ]
        row += [str(rep.expansion_sizes.get(l, 0)) for l in labels]
        row.append(f"{rep.timings_ms.get('link', 0.0):.2f}")
        row += [f"{rep.timings_ms.get(f'expand_{l}', 0.0):.2f}" for l in labels]
        row.append(f"{rep.timings_ms.get('query', 0.0):.2f}")
        out.write("\t".join(row) + "\n")
