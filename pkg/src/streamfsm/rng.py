"""Seedable substreams: independent generators derived from one run seed."""

from __future__ import annotations

import hashlib
import random


def substream(seed: int, label: str) -> random.Random:
    """A generator keyed by (seed, label), stable across runs and platforms."""
    digest = hashlib.blake2b(f"{seed}/{label}".encode(), digest_size=8).digest()
    return random.Random(int.from_bytes(digest, "big"))


def substream_seed(seed: int, label: str) -> int:
    digest = hashlib.blake2b(f"{seed}/{label}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")
