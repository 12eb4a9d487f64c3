"""
Classifiers on one feature
==========================

Every pipeline is a feature extractor plus a model. The same call trains a
linear SVM, naive Bayes, or a recurrent network on top of any feature.
"""

from ideoclf import Hyperparams, Pipeline, score, stratified_split, synthetic

corpus = synthetic.make_corpus(n_docs=200, seed=5)
split = stratified_split(corpus, test_fraction=0.2, seed=0)
train = corpus.subset(split.train_indices)
test = corpus.subset(split.test_indices)

# a smaller network keeps the demo quick
hp = Hyperparams(hidden_units=32, epochs=5, embed_dim=32, w2v_epochs=2)

for model in ("svm", "nb", "lstm", "gru"):
    pipe = Pipeline("tfidf", model, hparams=hp, seed=0)
    pipe.fit([d.text for d in train], [d.label for d in train])
    report = score([d.label for d in test], pipe.predict([d.text for d in test]))
    print(f"tfidf + {model:4s} accuracy {report.accuracy:.3f} macro-F1 {report.macro_f1:.3f}")
    if pipe.history:
        print("   loss per epoch:", [round(h["train_loss"], 4) for h in pipe.history])

# scores: winning-class probability for NB and RNNs, signed margin for SVM
labels, scores = pipe.predict_with_scores(["", test[0].text])
print(labels, scores)
