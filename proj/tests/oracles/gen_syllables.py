"""Syllable counts from the CMU Pronouncing Dictionary for a word sample.

Writes tests/data/syllables.tsv: word, then every count the dictionary allows.
"""
import pathlib
import random

import pronouncing

ROOT = pathlib.Path(__file__).resolve().parent.parent.parent
FIXED = ["cat", "beautiful", "e", "table", "wanted", "boxes", "the", "every", "science",
         "people", "little", "created", "reading", "simple", "apple", "family", "business",
         "different", "interesting", "government", "national", "area", "idea", "hour",
         "fire", "going", "cities", "judged", "jumped", "stopped", "washes", "makes"]


def main():
    easy = [w.strip() for w in open(ROOT / "data/lexicons/easy_words.txt") if w.strip()]
    rng = random.Random(5)
    words = FIXED + rng.sample(sorted(set(easy) - set(FIXED)), 400)
    out = ROOT / "tests/data/syllables.tsv"
    with open(out, "w") as f:
        for w in words:
            phones = pronouncing.phones_for_word(w.lower())
            if not phones or not w.isalpha():
                continue
            counts = sorted({pronouncing.syllable_count(p) for p in phones})
            f.write(w + "\t" + ",".join(map(str, counts)) + "\n")


if __name__ == "__main__":
    main()
