"""Compiled depth-first enumeration kernels for the semigroup census.

A node of the search tree is a word, represented by the pair
``(qp, q) = (<D^->, <D>)`` of its last two continuants.  Appending a letter
``a`` gives ``(q, q*a + qp)``.  Letters are sorted, so once a child exceeds
the bound every later sibling does too.

Every kernel works on int64 and relies on the caller having checked
``bound * (max_letter + 1) < 2**63``.  ``stack`` must hold
``(max_depth + 2) * len(letters)`` pending nodes.
"""
from __future__ import annotations

import numpy as np
from numba import njit, prange


@njit(cache=True)
def count_from(letters, bound, qp0, q0, stack):
    """Number of nonempty extensions of node ``(qp0, q0)`` with continuant <= bound."""
    amin = letters[0]
    nl = letters.shape[0]
    sqp = np.empty(stack, np.int64)
    sq = np.empty(stack, np.int64)
    top = 0
    sqp[0] = qp0
    sq[0] = q0
    total = 0
    while top >= 0:
        qp = sqp[top]
        q = sq[top]
        top -= 1
        for i in range(nl):
            nq = q * letters[i] + qp
            if nq > bound:
                break
            total += 1
            # push only nodes that still have a child within the bound
            if amin * nq + q <= bound:
                top += 1
                sqp[top] = q
                sq[top] = nq
    return total


@njit(cache=True)
def histogram_from(letters, bound, qp0, q0, out, stack):
    """Add 1 to ``out[<W>]`` for every nonempty extension W of ``(qp0, q0)``."""
    amin = letters[0]
    nl = letters.shape[0]
    sqp = np.empty(stack, np.int64)
    sq = np.empty(stack, np.int64)
    top = 0
    sqp[0] = qp0
    sq[0] = q0
    while top >= 0:
        qp = sqp[top]
        q = sq[top]
        top -= 1
        for i in range(nl):
            nq = q * letters[i] + qp
            if nq > bound:
                break
            out[nq] += 1
            if amin * nq + q <= bound:
                top += 1
                sqp[top] = q
                sq[top] = nq


@njit(cache=True)
def mark_from(letters, bound, qp0, q0, out, stack):
    """Set ``out[<W>] = 1`` for every nonempty extension W of ``(qp0, q0)``."""
    amin = letters[0]
    nl = letters.shape[0]
    sqp = np.empty(stack, np.int64)
    sq = np.empty(stack, np.int64)
    top = 0
    sqp[0] = qp0
    sq[0] = q0
    while top >= 0:
        qp = sqp[top]
        q = sq[top]
        top -= 1
        for i in range(nl):
            nq = q * letters[i] + qp
            if nq > bound:
                break
            out[nq] = 1
            if amin * nq + q <= bound:
                top += 1
                sqp[top] = q
                sq[top] = nq


@njit(parallel=True, cache=True)
def count_tasks(letters, bound, qps, qs, stack):
    total = 0
    for i in prange(qps.shape[0]):
        total += count_from(letters, bound, qps[i], qs[i], stack)
    return total


@njit(parallel=True, cache=True)
def histogram_tasks(letters, bound, qps, qs, nchunks, stack):
    # one private row per chunk; rows are summed afterwards, so the result
    # does not depend on scheduling
    rows = np.zeros((nchunks, bound + 1), np.int64)
    n = qps.shape[0]
    for c in prange(nchunks):
        for i in range(c, n, nchunks):
            histogram_from(letters, bound, qps[i], qs[i], rows[c], stack)
    return rows


@njit(parallel=True, cache=True)
def mark_tasks(letters, bound, qps, qs, nchunks, stack):
    rows = np.zeros((nchunks, bound + 1), np.uint8)
    n = qps.shape[0]
    for c in prange(nchunks):
        for i in range(c, n, nchunks):
            mark_from(letters, bound, qps[i], qs[i], rows[c], stack)
    return rows
