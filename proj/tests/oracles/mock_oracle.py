#!/usr/bin/env python3
# Copyright 2026 The ritual-decode Authors
# SPDX-License-Identifier: Apache-2.0
"""Independent reimplementation of the mock provider, used to freeze fixtures.

Regenerate with:
    python3 tests/oracles/mock_oracle.py tests/fixtures

Writes
  mock_oracle.json         reference distributions for selected requests
  protocol_golden.jsonl    request/response pairs for the wire protocol
"""

import base64
import hashlib
import json
import math
import struct
import sys
import zlib
from pathlib import Path

WORDS = [
    "</s>", "the", "a", "yes", "no", "there", "is", "dog", "cat", "car", "person",
    "frisbee", "table", "chair", "bus", "in", "image", "on", "and", "with", "of",
    "tree", "horizontal", "vertical", "flip", "rotate", "color", "jitter",
    "gaussian", "blur", "crop", ".",
]
VOCAB = 32
EOS = 0
MAX_CONTEXT = 2048
SCALE = 5.0


def pattern_pixels(width, height):
    """The fixture image: byte i is (31 i + 7) mod 256."""
    return bytes((31 * i + 7) % 256 for i in range(width * height * 3))


def pixel_digest(width, height, pixels):
    return hashlib.sha256(struct.pack("<II", width, height) + pixels).hexdigest()


def png_bytes(width, height, pixels):
    rows = b"".join(b"\x00" + pixels[y * width * 3:(y + 1) * width * 3] for y in range(height))

    def chunk(tag, data):
        return struct.pack(">I", len(data)) + tag + data + struct.pack(">I", zlib.crc32(tag + data) & 0xFFFFFFFF)

    ihdr = struct.pack(">IIBBBBB", width, height, 8, 2, 0, 0, 0)
    return b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", ihdr) + chunk(b"IDAT", zlib.compress(rows)) + chunk(b"IEND", b"")


def mock_log_probs(digest, prompt, generated, vocab=VOCAB, ignore_image=False):
    cond = "noimg" if digest is None or ignore_image else digest
    p = prompt.encode("utf-8")
    head = cond.encode("ascii") + struct.pack("<Q", len(p)) + p + struct.pack("<Q", len(generated))
    head += b"".join(struct.pack("<I", t) for t in generated)
    logits = []
    for i in range(vocab):
        h = hashlib.sha256(head + struct.pack("<I", i)).digest()
        u = (int.from_bytes(h[:8], "big") >> 11) * 2.0 ** -53
        logits.append(SCALE * u)
    top = max(logits)
    lse = top + math.log(sum(math.exp(x - top) for x in logits))
    return [x - lse for x in logits]


def detok(ids):
    return " ".join(WORDS[i] if i < len(WORDS) else "w%d" % i for i in ids)


def mock_cases():
    img = {"width": 4, "height": 3}
    digest = pixel_digest(4, 3, pattern_pixels(4, 3))
    cases = [
        ("text_only_empty_prefix", None, "Is there a dog in the image?", [], VOCAB, False),
        ("image_empty_prefix", img, "Is there a dog in the image?", [], VOCAB, False),
        ("image_prefix_3_7", img, "Is there a dog in the image?", [3, 7], VOCAB, False),
        ("image_prefix_3_8", img, "Is there a dog in the image?", [3, 8], VOCAB, False),
        ("image_ignored", img, "Describe this image", [1], VOCAB, True),
        ("vocab5_image", img, "q", [], 5, False),
        ("vocab5_image_prefix", img, "q", [4], 5, False),
        ("unicode_prompt", None, "café über", [0, 31], VOCAB, False),
    ]
    out = []
    for name, image, prompt, generated, vocab, ignore in cases:
        d = digest if image else None
        out.append({
            "name": name,
            "image": image,
            "digest": d,
            "prompt": prompt,
            "generated": generated,
            "vocab_size": vocab,
            "ignore_image": ignore,
            "log_probs": mock_log_probs(d, prompt, generated, vocab, ignore),
        })
    return out


def protocol_cases():
    w, h = 4, 3
    pixels = pattern_pixels(w, h)
    digest = pixel_digest(w, h, pixels)
    png = base64.b64encode(png_bytes(w, h, pixels)).decode("ascii")
    prompt = "Is there a dog in the image?"
    cases = [
        ("hello", {"op": "hello", "version": 1},
         {"ok": True, "vocab_size": VOCAB, "eos_id": EOS, "max_context": MAX_CONTEXT, "name": "mock"}),
        ("hello_stale_version", {"op": "hello", "version": 0},
         {"ok": False, "id": None, "error": "*", "version": 1}),
        ("dist_text_only", {"op": "dist", "id": 1, "image_png_b64": None, "image_digest": None,
                            "prompt": prompt, "generated": []},
         {"ok": True, "id": 1, "log_probs": mock_log_probs(None, prompt, [])}),
        ("dist_image_with_digest", {"op": "dist", "id": 2, "image_png_b64": png, "image_digest": digest,
                                    "prompt": prompt, "generated": [3]},
         {"ok": True, "id": 2, "log_probs": mock_log_probs(digest, prompt, [3])}),
        ("dist_image_png_only", {"op": "dist", "id": 3, "image_png_b64": png, "image_digest": None,
                                 "prompt": prompt, "generated": [3]},
         {"ok": True, "id": 3, "log_probs": mock_log_probs(digest, prompt, [3])}),
        ("dist_keys_reordered", {"generated": [5, 6], "prompt": "x", "image_digest": None, "image_png_b64": None,
                                 "id": 4, "op": "dist"},
         {"ok": True, "id": 4, "log_probs": mock_log_probs(None, "x", [5, 6])}),
        ("dist_id_out_of_range", {"op": "dist", "id": 5, "image_png_b64": None, "image_digest": None,
                                  "prompt": "x", "generated": [32]},
         {"ok": False, "id": 5, "error": "*"}),
        ("detok", {"op": "detok", "id": 6, "ids": [3, 7]}, {"ok": True, "id": 6, "text": detok([3, 7])}),
        ("detok_empty", {"op": "detok", "id": 7, "ids": []}, {"ok": True, "id": 7, "text": ""}),
        ("unknown_op", {"op": "teleport", "id": 8}, {"ok": False, "id": 8, "error": "*"}),
    ]
    lines = [{"name": n, "request": rq, "response": rs} for n, rq, rs in cases]
    lines.append({"name": "malformed_line", "raw_request": "{not json", "response": {"ok": False, "id": None,
                                                                                   "error": "*"}})
    return lines


def main():
    out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures")
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "mock_oracle.json").write_text(json.dumps(mock_cases(), indent=1) + "\n")
    with open(out_dir / "protocol_golden.jsonl", "w") as f:
        for line in protocol_cases():
            f.write(json.dumps(line) + "\n")


if __name__ == "__main__":
    main()
