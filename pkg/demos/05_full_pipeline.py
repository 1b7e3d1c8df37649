"""The full pipeline: link, expand three ways, search, merge, evaluate.

Each request runs once per plan entry (triangular, both, square); the
three rankings are stitched range-wise — top 5 from the first, the next
30 unseen documents from the second, the rest from the third — because
restrictive motifs help early precision and permissive ones help recall.
"""

import io

from sqe import (
    Document,
    InputRequest,
    PipelineConfig,
    Qrels,
    build_graph,
    build_index,
    evaluate,
    paired_t_test,
    run_batch,
    search,
    build_expanded_query,
    write_trec_run,
)
from sqe.pipeline import write_report
from sqe.text import tokenize

# A miniature corpus with a vocabulary gap: relevant documents call the
# concept "funicular" while the request says "cable car".
nodes = [
    ("1", "A", "Cable_car"),
    ("2", "A", "Funicular"),
    ("3", "C", "Cable_transport"),
]
edges = [
    ("1", "2", "AA"), ("2", "1", "AA"),
    ("1", "3", "AC"), ("2", "3", "AC"),
]
g = build_graph(nodes, edges)

# Every candidate mentions "cable car"; only the relevant ones also use
# the word "funicular" that the motif expansion contributes.  On the
# input alone the a* decoys tie with the r* documents and win on id
# order; the expansion feature breaks the tie the right way.
docs = [
    ("a1", "cable car brochure with opening hours"),
    ("a2", "cable car ticket prices and queues"),
    ("r1", "cable car funicular climbing the hill"),
    ("r2", "vintage funicular cable car on rails"),
    ("r3", "historic cable car funicular photo album"),
    ("f1", "cooking pasta with tomato sauce tonight"),
    ("f2", "garden tools and lawn care basics"),
]
idx = build_index(Document.from_text(d, t) for d, t in docs)

topics = [InputRequest("93", "cable car")]
qrels = Qrels({"93": {"r1": 1, "r2": 1, "r3": 1}})

cfg = PipelineConfig(cutoffs=(2, 2), total=7)
runs, reports = run_batch(g, idx, topics, cfg)

buf = io.StringIO()
write_trec_run(runs, buf)
print("merged run:")
print(buf.getvalue())

buf = io.StringIO()
write_report(reports, cfg, buf)
print("timing report:")
print(buf.getvalue())

# Compare against the input-only baseline at P@3.
baseline = [
    search(idx, build_expanded_query(tokenize(t.text), [], None).root, 7, t.request_id)
    for t in topics
]
exp_p = evaluate(runs, qrels, ks=(3,))
base_p = evaluate(baseline, qrels, ks=(3,))
print(f"P@3 input-only: {base_p.means[3]:.3f}   expanded: {exp_p.means[3]:.3f}")

# With many topics this is where the paired t-test decides significance;
# two identical runs illustrate the degenerate no-difference case.
t, p, significant = paired_t_test([0.1, 0.2, 0.4], [0.5, 0.6, 0.7])
print(f"paired t-test on a toy improvement: t={t:.2f} p={p:.4f} significant={significant}")
