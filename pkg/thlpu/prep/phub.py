"""
Readers for the OR-Library hub location files (phub collection).

Layouts assumed, whitespace separated tokens:
    CAB  n, then the n x n flow matrix, then the n x n distance matrix
    AP   n, then n coordinate pairs (x, y), then the n x n flow matrix
Tokens after the blocks (collection, transfer and distribution factors, ...) are ignored.
"""

import logging

import numpy as np

from .instance import build_instance
from ..errors import InstanceError

logger = logging.getLogger(__name__)

KINDS = ('CAB', 'AP')


def load_raw_phub(path, kind, n=None):
    """
    Return (d, w) for CAB and (coords, w) for AP.
    With n the data is truncated to the first n nodes.
    """
    kind = kind.upper()
    if kind not in KINDS:
        raise InstanceError("unknown phub dataset kind {}, choose among {}".format(kind, KINDS))

    with open(path, 'r') as f:
        tokens = f.read().split()
    try:
        values = np.array(tokens, dtype=np.float64)
    except ValueError as exc:
        raise InstanceError("malformed phub file {}: non numeric token".format(path)) from exc
    if values.size == 0:
        raise InstanceError("empty phub file {}".format(path))

    size = int(values[0])
    if size < 2 or values[0] != size:
        raise InstanceError("malformed phub file {}: bad node count {}".format(path, values[0]))
    n = size if n is None else int(n)
    if n > size:
        raise InstanceError("requested n = {} but {} holds only {} nodes".format(n, path, size))

    if kind == 'CAB':
        blocks = _split(values[1:], (size * size, size * size), path)
        w = blocks[0].reshape(size, size)
        data = blocks[1].reshape(size, size)
        data = data[:n, :n]
    else:
        blocks = _split(values[1:], (2 * size, size * size), path)
        data = blocks[0].reshape(size, 2)[:n]
        w = blocks[1].reshape(size, size)

    logger.info("Loaded {} file {} with {} nodes, kept the first {}".format(kind, path, size, n))
    return data, w[:n, :n]


def instance_from_phub(path, kind, n, p, q, factors):
    data, w = load_raw_phub(path, kind, n)
    name = '{}{}'.format(kind.lower(), n)
    if kind.upper() == 'AP':
        return build_instance(w, p, q, factors, coords=data, name=name)
    return build_instance(w, p, q, factors, d=_zero_diagonal(data), name=name)


def _split(values, sizes, path):
    if values.size < sum(sizes):
        raise InstanceError("malformed phub file {}: expected at least {} values after the node count, got {}"
                            .format(path, sum(sizes), values.size))
    blocks = []
    start = 0
    for size in sizes:
        blocks.append(values[start:start + size])
        start += size
    return blocks


def _zero_diagonal(matrix):
    matrix = np.array(matrix, dtype=np.float64)
    np.fill_diagonal(matrix, 0.)
    return matrix
