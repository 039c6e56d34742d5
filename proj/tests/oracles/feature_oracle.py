#!/usr/bin/env python3
"""Reference featurizer: word tokens -> FNV-1a 64 mod D -> counts -> L2.

Independent of the C++ path; freezes a golden sparse vector for the fixture
paragraph. Regenerate with: python3 tests/oracles/feature_oracle.py
"""

import json
import math
import pathlib

MASK = (1 << 64) - 1
SPACES = {0x09, 0x0A, 0x0B, 0x0C, 0x0D, 0x20, 0x85, 0xA0, 0x1680,
          0x2028, 0x2029, 0x202F, 0x205F, 0x3000} | set(range(0x2000, 0x200B))


def fnv1a64(data: bytes) -> int:
    h = 14695981039346656037
    for b in data:
        h ^= b
        h = (h * 1099511628211) & MASK
    return h


def word_tokens(text: str, lowercase: bool):
    tokens, cur = [], []
    for ch in text:
        cp = ord(ch)
        is_word = (cp < 0x80 and ch.isalnum()) or (cp >= 0x80 and cp not in SPACES)
        if is_word:
            cur.append(ch.lower() if (lowercase and cp < 0x80) else ch)
        elif cur:
            tokens.append("".join(cur))
            cur = []
    if cur:
        tokens.append("".join(cur))
    return tokens


def featurize(text: str, hash_dim: int, lowercase: bool = True):
    counts = {}
    for token in word_tokens(text, lowercase):
        bucket = fnv1a64(token.encode("utf-8")) % hash_dim
        counts[bucket] = counts.get(bucket, 0.0) + 1.0
    norm = math.sqrt(sum(v * v for v in counts.values()))
    return sorted((k, v / norm) for k, v in counts.items())


FIXTURE = ("The type of pet is Dog. The name of pet is Filo. "
           "Filo naps by the door, chases the hose, and knows the word "
           "walk in two languages — Malay and English. "
           "Tabby-cat neighbours ignore him; he FORGIVES them daily.")


def main():
    root = pathlib.Path(__file__).resolve().parents[2]
    golden = {
        "text": FIXTURE,
        "hash_dim": 1024,
        "lowercase": True,
        "entries": [[k, v] for k, v in featurize(FIXTURE, 1024)],
    }
    path = root / "tests" / "golden" / "featurize.json"
    path.write_text(json.dumps(golden, indent=2) + "\n")
    print("wrote", path)


if __name__ == "__main__":
    main()
