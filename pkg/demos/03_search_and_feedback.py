"""Positional indexing, query-likelihood scoring, pseudo-relevance feedback.

Every document gets a Dirichlet-smoothed log-belief for any query tree;
ranking scores every document and sorts by score, breaking ties by
document id.
"""

import math

from sqe import Document, Term, Window, build_index, prf_expand, render, score_node, search

docs = [
    Document.from_text("d1", "banksy painted a stencil on the wall"),
    Document.from_text("d2", "yarn bombing is street art with wool"),
    Document.from_text("d3", "street art graffiti banksy stencil"),
    Document.from_text("d4", "the history of mural painting"),
    Document.from_text("d5", "new york city street photography"),
]
idx = build_index(docs)
print(f"{idx.n_docs} docs, {idx.collection_length} tokens, "
      f"{len(idx.collection_tf)} distinct terms")

# Ordered windows: #1 is an exact phrase; #2 tolerates one extra token.
from sqe import window_tf

print("#1(street art) in d2:", window_tf(idx, "d2", 1, ["street", "art"]))
print("#1(new york city) in d5:", window_tf(idx, "d5", 1, ["new", "york", "city"]))
print("#2(street photography) in d5:", window_tf(idx, "d5", 2, ["street", "photography"]))

# Scores are log-beliefs: negative, higher is better, and the smoothed
# term model is proper (beliefs over the vocabulary sum to one).
s = score_node(idx, Term("banksy"), "d1")
print(f"log-belief of 'banksy' in d1: {s:.4f}")
total = sum(math.exp(score_node(idx, Term(t), "d1")) for t in idx.collection_tf)
print(f"sum over vocabulary of exp(belief) = {total:.12f}")

ranked = search(idx, Window(1, ("street", "art")), k=3, request_id="demo")
for rank, (doc_id, score) in enumerate(ranked.entries, 1):
    print(f"  {rank}. {doc_id}  {score:.4f}")

# Pseudo-relevance feedback mines the top documents for extra weighted
# terms and folds them back into the query.
expanded = prf_expand(idx, Term("banksy"), fb_docs=2, fb_terms=3)
print("after feedback:", render(expanded))
