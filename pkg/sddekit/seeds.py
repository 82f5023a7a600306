"""Counter-based seed derivation.

Every random stream in the toolkit is addressed by ``(master seed, path index,
stream tag)``. Seeds are derived by hashing that triple, so the stream of path
``i`` is the same whether it is drawn alone, inside a chunk on a worker, or as
part of the full batch.
"""
import hashlib
import struct

import numpy as np


BASE_STREAM = 'base'
MASK64 = (1 << 64) - 1


def derive_seed(master, path_index, stream_tag=BASE_STREAM):
    """Return a 64-bit seed for ``(master, path_index, stream_tag)``.

    The mixing is SHA-256 over a fixed little-endian encoding, so it is
    identical on every platform and independent of Python's hash seed.
    """
    payload = struct.pack('<QQ', int(master) & MASK64, int(path_index) & MASK64)
    digest = hashlib.sha256(payload + str(stream_tag).encode('utf-8')).digest()
    return int.from_bytes(digest[:8], 'little')


def path_generator(master, path_index, stream_tag=BASE_STREAM):
    """A Philox generator for one path's stream."""
    return np.random.Generator(np.random.Philox(derive_seed(master, path_index, stream_tag)))
