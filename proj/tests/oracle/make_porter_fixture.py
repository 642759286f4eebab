#!/usr/bin/env python3
# Copyright 2026 The sumrefine Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes tests/fixtures/porter_stems.tsv (word<TAB>stem) using NLTK's
original-algorithm Porter stemmer.

Words of two letters or fewer are excluded: NLTK strips a trailing "s" from
some of them, the C++ stemmer returns them unchanged.
"""

import pathlib

from nltk.stem.porter import PorterStemmer

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "porter_stems.tsv"

CLASSIC = """caresses ponies ties caress cats feed agreed plastered bled motoring sing
conflated troubled sized hopping tanned falling hissing fizzed failing filing happy sky
relational conditional rational valenci hesitanci digitizer conformabli radicalli
differentli vileli analogousli vietnamization predication operator feudalism
decisiveness hopefulness callousness formaliti sensitiviti sensibiliti triplicate
formative formalize electriciti electrical hopeful goodness revival allowance inference
airliner gyroscopic adjustable defensible irritant replacement adjustment dependent
adoption homologou communism activate angulariti homologous effective bowdlerize probate
rate cease controll roll generalizations oscillators abli logi""".split()

BASES = """connect general relate condition rational digit conform radical different vile
analog predic operate feudal decide hope callous formal sensitive sense triple form
electric good revive allow infer airline gyroscope adjust defend irritate replace depend
adopt homolog commune active angular effect bowdler probe summary summarize evaluate judge
fluent natural coherent relevant read fact consist score threshold generate refine improve
concise run runner walk talk happy easy quick slow bridge repair official fund school
hospital rural senate pass expand news report market price trade nation govern elect
vote law court police city state power energy climate science research study student
teach learn write speak listen build design engine test measure count match token""".split()

SUFFIXES = ["", "s", "es", "ed", "ing", "er", "ers", "ly", "ness", "ful", "ive", "ize",
            "ization", "ation", "ational", "ement", "ment", "ent", "ism", "able", "ible",
            "ance", "ence", "ic", "ical", "ous", "ity", "iti", "al", "alli", "li", "ate",
            "ator", "ness", "less", "ist", "ion", "iveness", "fulness", "ousness", "aliti"]


def main():
    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    words = set(CLASSIC)
    for base in BASES:
        for suffix in SUFFIXES:
            words.add(base + suffix)
            if base.endswith("e"):
                words.add(base[:-1] + suffix)
    words = sorted(w for w in words if len(w) > 2)
    with OUT.open("w", encoding="utf-8") as f:
        for w in words:
            f.write(f"{w}\t{stemmer.stem(w)}\n")
    print(f"wrote {len(words)} words to {OUT}")


if __name__ == "__main__":
    main()
