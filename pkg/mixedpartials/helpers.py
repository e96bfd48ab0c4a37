import json
import math
import os
import tempfile
from contextlib import contextmanager

import numpy as np


def cantor_pair(a, b):
    """Map a pair of non-negative integers to a single non-negative integer.

    :param int a: first component.
    :param int b: second component.
    :return: (*int*) -- the Cantor pairing index of ``(a, b)``.
    """
    return (a + b) * (a + b + 1) // 2 + b


def cantor_unpair(z):
    """Invert :func:`cantor_pair`.

    :param int z: non-negative pairing index.
    :return: (*tuple*) -- pair ``(a, b)`` of non-negative integers.
    :raises ValueError: if ``z`` is negative.
    """
    if z < 0:
        raise ValueError(f"pairing index must be non-negative, got {z}")
    t = (math.isqrt(8 * z + 1) - 1) // 2
    b = z - t * (t + 1) // 2
    return t - b, b


def index_to_triple(n):
    """Bijection from positive integers to triples of positive integers, the
    inverse of the nested Cantor three-tupling ``pair(pair(k, m), l)``.

    :param int n: positive index.
    :return: (*tuple*) -- triple ``(k, m, l)`` of positive integers.
    :raises ValueError: if ``n`` is not positive.
    """
    if n < 1:
        raise ValueError(f"index must be positive, got {n}")
    w, c = cantor_unpair(n - 1)
    a, b = cantor_unpair(w)
    return a + 1, b + 1, c + 1


def triple_to_index(k, m, l):  # noqa: E741
    """Inverse of :func:`index_to_triple`.

    :param int k: first component, positive.
    :param int m: second component, positive.
    :param int l: third component, positive.
    :return: (*int*) -- positive index.
    """
    return cantor_pair(cantor_pair(k - 1, m - 1), l - 1) + 1


def check_finite(name, values):
    """Raise if an array holds NaN or infinite entries.

    :param str name: name used in the error message.
    :param numpy.ndarray values: array to check.
    :raises ValueError: if any entry is not finite.
    """
    values = np.asarray(values)
    if not np.all(np.isfinite(values)):
        bad = tuple(int(i) for i in np.argwhere(~np.isfinite(values))[0])
        raise ValueError(f"{name} has a non-finite entry at index {bad}")


def _reject_non_finite(obj, path="$"):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite number at {path}")
    elif isinstance(obj, dict):
        for k, v in obj.items():
            _reject_non_finite(v, f"{path}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _reject_non_finite(v, f"{path}[{i}]")


def to_json_bytes(obj):
    """Encode a JSON-compatible object deterministically.

    Keys are sorted, floats keep their shortest round-trip representation and the
    output ends with a newline.

    :param dict obj: object made of dicts, lists, str, int, float and bool.
    :return: (*bytes*) -- UTF-8 encoded JSON.
    :raises ValueError: if any float is NaN or infinite.
    """
    _reject_non_finite(obj)
    text = json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)
    return (text + "\n").encode("utf-8")


@contextmanager
def atomic_output(path):
    """Yield a temporary path next to ``path`` and move it into place on success.

    Nothing is left behind at ``path`` if the body raises.

    :param str path: final file location.
    :return: (*str*) -- temporary file location to write to.
    """
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=".part")
    os.close(fd)
    try:
        yield tmp_path
        os.replace(tmp_path, path)
    finally:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)


def write_bytes(path, data):
    """Atomically write bytes to a file.

    :param str path: file location.
    :param bytes data: content.
    """
    with atomic_output(path) as tmp_path:
        with open(tmp_path, "wb") as f:
            f.write(data)
