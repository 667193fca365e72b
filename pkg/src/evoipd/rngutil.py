"""Seed-derivation helpers.

One master seed per experiment; every match, sampling decision and Moran
step pulls from its own sub-stream derived from (master seed, purpose tag,
indices...). Derivation goes through numpy's SeedSequence so streams are
independent regardless of scheduling or worker count.
"""

import hashlib
import random

import numpy as np

# Purpose tags. Arbitrary but fixed: changing them changes every stream.
TAG_MATCH = 0x4D415443
TAG_SAMPLING = 0x53414D50
TAG_STEP = 0x53544550
TAG_RUN = 0x52554E53


def _as_int(key) -> int:
    if isinstance(key, int):
        return key & 0xFFFFFFFFFFFFFFFF
    if isinstance(key, str):
        digest = hashlib.blake2s(key.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "little")
    raise TypeError(f"unsupported stream key type: {type(key)!r}")


def derive_seed(*keys) -> int:
    """128-bit integer seed derived from the key tuple."""
    ss = np.random.SeedSequence([_as_int(k) for k in keys])
    words = ss.generate_state(4, np.uint32)
    out = 0
    for w in words:
        out = (out << 32) | int(w)
    return out


def substream(*keys) -> random.Random:
    """Independent random.Random stream for the given key tuple."""
    return random.Random(derive_seed(*keys))
