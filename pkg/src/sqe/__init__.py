"""Structural query expansion toolkit.

Keyword requests are linked to knowledge-base articles, expanded through
triangular and square graph motifs, rendered as weighted structured
queries, retrieved from a positional index and evaluated TREC-style.
"""

from .kb_graph import (
    EdgeKind,
    KBGraph,
    KBNode,
    NodeKind,
    ValidationReport,
    build_graph,
    load_graph,
    load_snapshot,
    save_snapshot,
)
from .entity_linker import EntityLinker, InputRequest, LinkedEntities, link
from .motif_expander import MotifKind, QueryGraph, expand, expand_square, expand_triangular
from .cycle_analysis import Cycle, category_ratio, cycle_length_stats, enumerate_cycles, extra_edge_density
from .query_lang import (
    Combine,
    ExpandedQuery,
    Term,
    Weight,
    Window,
    build_expanded_query,
    parse,
    render,
)
from .search_engine import (
    Document,
    Index,
    RankedList,
    build_index,
    prf_expand,
    read_trec_run,
    score_node,
    search,
    window_tf,
    write_trec_run,
)
from .pipeline import PipelineConfig, RequestReport, load_topics, merge_lists, run_batch, run_request
from .evaluation import (
    DEFAULT_KS,
    EvalReport,
    Qrels,
    TTestResult,
    evaluate,
    paired_t_test,
    precision_at_k,
)

__version__ = "0.1.0"
