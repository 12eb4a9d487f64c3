"""
The full comparison grid
========================

Three features times four models, all trained on one stratified split. The
output mirrors the per-feature performance tables of the original study, with
its published numbers shown only as reference notes.
"""

from ideoclf import Hyperparams, run_grid, stratified_split, synthetic
from ideoclf.report import markdown_tables

corpus = synthetic.make_corpus(n_docs=200, seed=0)
split = stratified_split(corpus, test_fraction=0.2, seed=0)
grid = run_grid(corpus, split, hparams=Hyperparams(hidden_units=32, epochs=5, embed_dim=32, w2v_epochs=2))

print(markdown_tables(grid))

best = grid.best()
print("best:", best.feature, best.model, best.report.accuracy)
