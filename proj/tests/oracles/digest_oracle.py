#!/usr/bin/env python3
"""Reference cache-key digest: canonical request JSON -> SHA-256 hex.

The canonical form is compact JSON with lexicographically sorted keys over
the exact field set {max_tokens, messages, model, provider_id, temperature}.
Regenerate with: python3 tests/oracles/digest_oracle.py
"""

import hashlib
import json
import pathlib

REQUEST = {
    "provider_id": "mock",
    "model": "mock-1",
    "temperature": 0.0,
    "max_tokens": 512,
    "messages": [
        {"role": "system", "content": "Task tag: SUMMARIZE"},
        {"role": "user", "content": "The type of pet is Dog.\n\nA brown dog."},
    ],
}


def canonical(request: dict) -> str:
    j = {
        "max_tokens": request["max_tokens"],
        "messages": [{"content": m["content"], "role": m["role"]}
                     for m in request["messages"]],
        "model": request["model"],
        "provider_id": request["provider_id"],
        "temperature": request["temperature"],
    }
    return json.dumps(j, sort_keys=True, separators=(",", ":"))


def main():
    root = pathlib.Path(__file__).resolve().parents[2]
    text = canonical(REQUEST)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    golden = {"request": REQUEST, "canonical": text, "digest": digest}
    path = root / "tests" / "golden" / "digest.json"
    path.write_text(json.dumps(golden, indent=2) + "\n")
    print("wrote", path)
    print("canonical:", text)
    print("digest:", digest)


if __name__ == "__main__":
    main()
