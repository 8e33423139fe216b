"""
Counting words, sentences and function words
============================================

Everything downstream works from three integers per text: W words,
S sentences and F function (closed-class) words.
"""

from paraselect import measure_text, load_lexicon

text = (
    "The cat sat on the mat which was by the door. "
    "It ate the cream ladled out by its owner. "
    "The owner, an eminent engineer, had a convertible used in a bank robbery."
)

doc, m = measure_text(text)
print(m.W, m.S, m.F)                  # 33 3 17
print(m.avg_sentence_length)          # 11, an exact Fraction
print(m.lexical_density_ratio)        # 17/33

# word classes, sentence by sentence (upper case = closed class)
for sent in doc.sentences:
    print(" ".join(t.surface.upper() if t.is_closed else t.surface for t in sent.words))

# "had" is open here (main verb) but closed as an auxiliary
_, aux = measure_text("It had been ladled out by its owner.")
_, main_verb = measure_text("It had a convertible.")
print(aux.F, main_verb.F)             # 6 2

# plain lookup, without the auxiliary rule
plain = load_lexicon(auxiliary_have=False)
print(measure_text("It had been ladled out by its owner.", plain)[1].F)   # 5
