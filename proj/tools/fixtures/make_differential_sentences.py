#!/usr/bin/env python3
"""Deterministically generates the 300-sentence differential corpus.

Sentences mix plain traffic chatter with constructs that exercise every
scoring rule: boosters at each distance, negation windows, contractions,
ALL-CAPS emphasis, but-clauses, idioms, "no"/"least" forms, emoticons,
punctuation runs, hashtags/mentions/URLs, and degenerate inputs.
"""

import random
import sys

POS = ["good", "great", "wonderful", "happy", "love", "nice", "smooth", "fine",
       "excellent", "amazing", "awesome", "perfect", "success", "win", "clear",
       "helpful", "fantastic", "relief", "super", "glad", "best", "easy",
       "improved", "safe", "free", "yes", "like", "better", "thanks", "enjoy"]
NEG = ["bad", "terrible", "awful", "horrible", "accident", "crash", "delay",
       "stuck", "jam", "blocked", "worst", "hate", "angry", "mess", "fail",
       "broken", "dangerous", "miserable", "gridlock", "nightmare", "avoid",
       "frustrated", "furious", "wreck", "slow", "pain", "sad", "annoying",
       "ugly", "dirty", "problem", "disaster", "chaos", "no", "stop", "lost"]
NEU = ["the", "road", "lane", "highway", "interstate", "downtown", "bridge",
       "exit", "ramp", "traffic", "commute", "morning", "evening", "car",
       "bus", "train", "street", "signal", "intersection", "construction",
       "westbound", "eastbound", "drivers", "city", "county", "mile", "route",
       "update", "alert", "report", "zone", "area", "crew", "project", "detour"]
BOOST_UP = ["very", "really", "so", "extremely", "absolutely", "totally",
            "incredibly", "major", "completely", "especially", "particularly"]
BOOST_DOWN = ["slightly", "somewhat", "barely", "hardly", "kinda", "marginally",
              "almost", "less", "little", "occasionally"]
NEGATORS = ["not", "never", "no", "isn't", "wasn't", "don't", "can't", "won't",
            "without", "rarely", "seldom", "neither", "nothing", "cannot",
            "couldn't", "shouldn't", "wouldn't", "doesn't", "didn't", "aint"]
EMOTICONS = [":)", ":(", ":D", ":-(", ":-)", ";)", ":/", ":P", "<3", ":'("]
TAILS = ["", "!", "!!", "!!!", "!!!!", "!!!!!", "?", "??", "???", "????",
         "?!", "!?", "...", ".", ","]
IDIOMS = ["the bomb", "the shit", "yeah right", "bad ass", "kiss of death",
          "to die for", "bus stop", "beating heart", "broken heart", "badass"]
URLS = ["https://traffic.example.com/map", "http://dot.example.gov/alerts",
        "www.roadwatch.example.org"]


def main():
    out_path = sys.argv[1] if len(sys.argv) > 1 else "differential_sentences.txt"
    rng = random.Random(52706)
    sentences = []

    def w(pool):
        return rng.choice(pool)

    def maybe_caps(word, p=0.12):
        return word.upper() if rng.random() < p else word

    # 1. plain domain sentences (90)
    for _ in range(90):
        n = rng.randint(3, 12)
        words = []
        for _ in range(n):
            r = rng.random()
            if r < 0.25:
                words.append(maybe_caps(w(POS if rng.random() < 0.45 else NEG)))
            elif r < 0.35:
                words.append(w(BOOST_UP + BOOST_DOWN))
            else:
                words.append(w(NEU))
        sentences.append(" ".join(words) + w(TAILS))

    # 2. negation window stress (45)
    for _ in range(45):
        target = w(POS + NEG)
        negator = w(NEGATORS)
        gap = rng.randint(0, 3)
        fillers = [w(NEU) for _ in range(gap)]
        lead = [w(NEU) for _ in range(rng.randint(0, 2))]
        sentences.append(" ".join(lead + [negator] + fillers + [target]) + w(TAILS))

    # 3. booster distance + caps stress (45)
    for _ in range(45):
        target = w(POS + NEG)
        booster = w(BOOST_UP + BOOST_DOWN)
        if rng.random() < 0.3:
            booster = booster.upper()
        if rng.random() < 0.2:
            target = target.upper()
        gap = rng.randint(0, 3)
        fillers = [w(NEU) for _ in range(gap)]
        sentences.append(" ".join([booster] + fillers + [target]) + w(TAILS))

    # 4. but-clauses (30)
    for _ in range(30):
        left = [w(NEU + POS + NEG) for _ in range(rng.randint(1, 4))]
        right = [w(NEU + POS + NEG) for _ in range(rng.randint(1, 4))]
        sentences.append(" ".join(left + ["but"] + right) + w(TAILS))

    # 5. idioms in context (25)
    for _ in range(25):
        idiom = w(IDIOMS)
        lead = [w(NEU) for _ in range(rng.randint(1, 4))]
        tail = [w(NEU) for _ in range(rng.randint(0, 2))]
        sentences.append(" ".join(lead + [idiom] + tail) + w(TAILS))

    # 6. special constructions (20)
    special = [
        "never so", "never this", "without doubt", "no", "least", "at least",
        "very least", "kind of", "sort of", "just enough",
    ]
    for _ in range(20):
        construct = w(special)
        target = w(POS + NEG)
        lead = [w(NEU) for _ in range(rng.randint(0, 2))]
        sentences.append(" ".join(lead + [construct, target]) + w(TAILS))

    # 7. social-media noise: mentions, hashtags, URLs, emoticons (25)
    for _ in range(25):
        parts = []
        if rng.random() < 0.5:
            parts.append("@user" + str(rng.randint(1, 99)))
        parts.extend(w(NEU + POS + NEG) for _ in range(rng.randint(2, 6)))
        if rng.random() < 0.5:
            parts.append("#" + w(NEU))
        if rng.random() < 0.4:
            parts.append(w(URLS))
        if rng.random() < 0.6:
            parts.append(w(EMOTICONS))
        sentences.append(" ".join(parts) + w(TAILS))

    # 8. degenerate and edge inputs (20)
    edge = [
        "ok", "OK", "meh", "-", "374", "!!!", "???", ":)", "a b c",
        "GREAT GREAT GREAT", "good good good good good", "I-40", "I-40 SUCKS",
        "the the the", "no no no no", "x", "yes", "NO", "so so so",
        "good bad good bad",
    ]
    sentences.extend(edge)

    assert len(sentences) == 300, len(sentences)
    for s in sentences:
        assert "\t" not in s and "\n" not in s
    with open(out_path, "w", encoding="utf-8") as f:
        for s in sentences:
            f.write(s + "\n")
    print(f"wrote {len(sentences)} sentences to {out_path}")


if __name__ == "__main__":
    main()
