#!/usr/bin/env python3
"""Generate the lemmatizer data files from the pattern3 (BSD-3) English resources.

usage: gen_lemma_data.py <pattern3/text/en dir> <output dir>

Base words come from the Brill lexicon, en-verbs and the WordNet 3 index files
bundled with pattern3 (wordnet/dict/index.{noun,verb,adj,adv}).

Writes:
  base_words.tsv   word<TAB>categories   (n = noun, v = verb, a = adjective/adverb)
  exceptions.tsv   form<TAB>category<TAB>lemma
"""
import os
import re
import sys

WORD = re.compile(r"^[a-z][a-z\-']*$")

NOUN_BASE = {"NN"}
VERB_BASE = {"VB", "VBP"}
ADJ_BASE = {"JJ", "RB"}

IRREGULAR_NOUNS = """
children child
men man
women woman
feet foot
teeth tooth
geese goose
mice mouse
people person
lice louse
oxen ox
criteria criterion
phenomena phenomenon
analyses analysis
hypotheses hypothesis
theses thesis
crises crisis
diagnoses diagnosis
syntheses synthesis
parentheses parenthesis
indices index
appendices appendix
matrices matrix
vertices vertex
leaves leaf
lives life
knives knife
wives wife
halves half
shelves shelf
selves self
thieves thief
wolves wolf
loaves loaf
calves calf
dice die
alumni alumnus
stimuli stimulus
radii radius
nuclei nucleus
fungi fungus
cacti cactus
curricula curriculum
media medium
""".split()

IRREGULAR_ADJS = """
better good
best good
worse bad
worst bad
further far
furthest far
farther far
farthest far
more more
most most
less less
least least
fewer few
fewest few
""".split()


IRREGULAR_VERBS = """
left leave
used use
uses use
using use
""".split()


def pairs(seq):
    it = iter(seq)
    return list(zip(it, it))


def main(src, out):
    cats = {}

    def add(word, cat):
        if WORD.match(word):
            cats.setdefault(word, set()).add(cat)

    with open(os.path.join(src, "en-lexicon.txt"), encoding="utf-8") as fh:
        for line in fh:
            if line.startswith(";;;"):
                continue
            parts = line.split()
            if len(parts) != 2:
                continue
            word, tag = parts
            if word != word.lower():
                continue
            if tag in NOUN_BASE:
                add(word, "n")
            elif tag in VERB_BASE:
                add(word, "v")
            elif tag in ADJ_BASE:
                add(word, "a")

    for fname, cat in (("index.noun", "n"), ("index.verb", "v"), ("index.adj", "a"), ("index.adv", "a")):
        with open(os.path.join(src, "wordnet", "dict", fname), encoding="utf-8") as fh:
            for line in fh:
                if line.startswith(" "):
                    continue
                add(line.split(" ", 1)[0], cat)

    exceptions = {}
    with open(os.path.join(src, "en-verbs.txt"), encoding="utf-8") as fh:
        for line in fh:
            if line.startswith(";;;"):
                continue
            fields = line.rstrip("\n").split(",")
            lemma = fields[0]
            if not WORD.match(lemma):
                continue
            add(lemma, "v")
            # present, progressive, past and past participle forms
            for idx in range(1, 12):
                if idx < len(fields):
                    form = fields[idx]
                    if form and form != lemma and WORD.match(form):
                        exceptions[(form, "v")] = lemma

    for form, lemma in pairs(IRREGULAR_VERBS):
        exceptions[(form, "v")] = lemma
    for form, lemma in pairs(IRREGULAR_NOUNS):
        exceptions[(form, "n")] = lemma
        add(lemma, "n")
    for form, lemma in pairs(IRREGULAR_ADJS):
        exceptions[(form, "a")] = lemma
        add(lemma, "a")

    # an exception target must itself be a base form of its category
    for (form, cat), lemma in exceptions.items():
        add(lemma, cat)

    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "base_words.tsv"), "w", encoding="utf-8") as fh:
        fh.write("# word\tcategories (n noun, v verb, a adjective/adverb)\n")
        for word in sorted(cats):
            fh.write(f"{word}\t{''.join(sorted(cats[word]))}\n")
    with open(os.path.join(out, "exceptions.tsv"), "w", encoding="utf-8") as fh:
        fh.write("# form\tcategory\tlemma\n")
        for (form, cat) in sorted(exceptions):
            fh.write(f"{form}\t{cat}\t{exceptions[(form, cat)]}\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
