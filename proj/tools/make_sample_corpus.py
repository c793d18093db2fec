#!/usr/bin/env python3
# Copyright 2026 The Nextword Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the synthetic Kurmanji-style sample corpus.

The text is produced by a small seeded phrase grammar with Zipf-weighted
word choices. It is not natural language data; it only gives the tools a
corpus of realistic size and skew to work on. Output is deterministic.

Usage: make_sample_corpus.py [--tokens N] [--seed S] > corpus.txt
"""

import argparse
import random

SUBJECTS = ["ez", "tu", "ew", "em", "hûn", "ewan", "bavê min", "diya min",
            "birayê te", "xwişka wî", "zarok", "mamoste", "cîranê me",
            "hevalê min", "xelk", "gundî", "keça wan", "kurê wê"]
OBJECTS = ["nan", "av", "çay", "pirtûk", "name", "sêv", "goşt", "şîr",
           "stran", "çîrok", "xanî", "erebe", "kinc", "dersê", "kar",
           "rojname", "nivîs", "deng", "dar", "gul"]
VERBS_TR = ["dixwe", "dixwînim", "dinivîse", "dibîne", "dikirin", "dibe",
            "tîne", "dide", "digire", "çêdike", "dixwaze", "hildigire",
            "diavêje", "dişo", "difroşe", "dibihîze"]
VERBS_IN = ["diçe", "tê", "dimîne", "radize", "dixebite", "dikeve",
            "direve", "rûdine", "dileyize", "distirê", "dipeyive", "vedigere"]
PLACES = ["bazar", "malê", "bajêr", "gund", "dibistanê", "çiyê", "zeviyê",
          "baxçe", "mizgeftê", "nexweşxaneyê", "zanîngehê", "çem", "rê",
          "seyran", "kargehê"]
PREPS = ["bo", "li", "ji", "ber bi", "heta", "di nav"]
TIMES = ["îro", "sibê", "duh", "êvarê", "şevê", "niha", "hertim", "carinan",
         "berê", "piştre"]
ADVERBS = ["zû", "hêdî", "baş", "pir", "bi kêfxweşî", "tenê", "jî", "dîsa"]
ADJ = ["mezin", "biçûk", "nû", "kevn", "xweş", "sar", "germ", "spî", "reş",
       "şîn", "sor", "zer", "bedew", "giran"]
CONJ = ["û", "lê", "ji ber ku", "dema ku", "ger"]
WEATHER = ["keş û hewa xweş e", "baran dibare", "berf dibare", "roj derket",
           "hewa sar e", "ba tê"]
TERMINATORS = [".", ".", ".", ".", "!", "?"]


def zipf_choice(rng, items, s=1.1):
  weights = [1.0 / (rank + 1) ** s for rank in range(len(items))]
  return rng.choices(items, weights=weights, k=1)[0]


def noun_phrase(rng, items):
  word = zipf_choice(rng, items)
  if rng.random() < 0.25:
    word += " " + zipf_choice(rng, ADJ)
  return word


def clause(rng):
  parts = []
  if rng.random() < 0.3:
    parts.append(zipf_choice(rng, TIMES))
  parts.append(zipf_choice(rng, SUBJECTS))
  if rng.random() < 0.5:
    if rng.random() < 0.15:
      parts.append(str(rng.randint(2, 12)))
    parts.append(noun_phrase(rng, OBJECTS))
    if rng.random() < 0.2:
      parts.append(zipf_choice(rng, ADVERBS))
    parts.append(zipf_choice(rng, VERBS_TR))
  else:
    parts.append(zipf_choice(rng, PREPS) + " " + noun_phrase(rng, PLACES))
    if rng.random() < 0.2:
      parts.append(zipf_choice(rng, ADVERBS))
    parts.append(zipf_choice(rng, VERBS_IN))
  return " ".join(parts)


def sentence(rng):
  if rng.random() < 0.05:
    text = zipf_choice(rng, WEATHER)
  else:
    text = clause(rng)
    if rng.random() < 0.3:
      text += ", " + zipf_choice(rng, CONJ) + " " + clause(rng)
  if rng.random() < 0.05:
    text = "«" + text + "»"
  if rng.random() < 0.04:
    text = "di sala " + str(rng.randint(1990, 2025)) + " de " + text
  text = text[0].upper() + text[1:]
  return text + zipf_choice(rng, TERMINATORS)


def main():
  parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
  parser.add_argument("--tokens", type=int, default=50000)
  parser.add_argument("--seed", type=int, default=2026)
  args = parser.parse_args()
  rng = random.Random(args.seed)
  tokens = 0
  line = []
  while tokens < args.tokens:
    s = sentence(rng)
    tokens += sum(1 for w in s.split() if any(c.isalpha() for c in w))
    line.append(s)
    if len(line) == 3 or rng.random() < 0.3:
      print(" ".join(line))
      line = []
  if line:
    print(" ".join(line))


if __name__ == "__main__":
  main()
