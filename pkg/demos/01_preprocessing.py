"""
Preprocessing Bangla posts
==========================

The model-input path keeps only characters of the target script, splits on
whitespace and drops stopwords. Nothing is stemmed, so elongated words keep
their repeated letters.
"""

from ideoclf.preprocess import PreprocessConfig, filter_script, preprocess_text, tokenize

config = PreprocessConfig(stopwords=frozenset({"এই", "ও"}))

post = "এই সরকার ভালোওওও!!! কাজ করছে ও news 2024"

# Latin letters, ASCII digits and punctuation turn into spaces
print(repr(filter_script(post, config)))
print(tokenize(filter_script(post, config)))

# the elongated token survives untouched
print(preprocess_text(post, config))

# running the pipeline twice changes nothing
once = preprocess_text(post, config)
print(preprocess_text(" ".join(once), config) == once)

# other scripts: pass a different codepoint range
latin = PreprocessConfig(script_ranges=((0x41, 0x5A), (0x61, 0x7A)))
print(preprocess_text("hello, World!", latin))
