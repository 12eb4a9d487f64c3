"""
Saving and loading a pipeline
=============================

A trained pipeline is written as a single human-readable ``.ideomodel`` file.
Reloading it gives bit-identical predictions.
"""

import tempfile
from pathlib import Path

from ideoclf import Hyperparams, Pipeline, persist, synthetic

corpus = synthetic.make_corpus(n_docs=80, seed=2)
pipe = Pipeline("embedding", "gru", hparams=Hyperparams(hidden_units=16, epochs=3, embed_dim=16, w2v_epochs=1))
pipe.fit(corpus.texts, corpus.labels)

path = Path(tempfile.mkdtemp()) / "embedding-gru.ideomodel"
persist.save(persist.state_from_pipeline(pipe, corpus.class_names, {"corpus_fingerprint": corpus.fingerprint()}), path)
print(path.read_text(encoding="utf-8")[:300], "...")

loaded = persist.pipeline_from_state(persist.load(path))
_, before = pipe.predict_with_scores(corpus.texts)
_, after = loaded.predict_with_scores(corpus.texts)
print("identical scores:", before.tobytes() == after.tobytes())
