"""Forbidden configurations that bound stack-sorting complexity.

An *obstruction of order k* in a word w is a triple (B, c, a): a set B of k
letters, all positioned before the letter c, which is positioned before the
letter a, with values a < b < c for every b in B.  (Each b forms a 231-shaped
occurrence b, c, a.)  The obstruction is *uninterrupted* when no letter
larger than c sits between two members of B.

These certify two-sided bounds: a word with no obstruction of order k needs
at most k sorting passes, and a word with an uninterrupted obstruction of
order k needs more than k.  :func:`complexity_bounds` packages both.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .words import Word

Witness = Tuple[Tuple[int, ...], int, int]  # (B values in position order, c, a)


@dataclass(frozen=True)
class ForbiddenReport:
    """Largest obstruction orders found in a word, with witnesses."""
    word: Word
    max_order: int
    max_uninterrupted_order: int
    witness: Optional[Witness]
    uninterrupted_witness: Optional[Witness]


def forbidden_report(w: Sequence[int]) -> ForbiddenReport:
    """Scan every (c, a) pair and collect the largest witness sets.

    For a fixed pair, the eligible B letters are those before c with values
    strictly between a and c; the plain order is their number, and the
    uninterrupted order is the longest run of them not broken by a letter
    larger than c.  Runs O(n^3) in the word length.

    >>> forbidden_report((2, 3, 5, 1, 4)).max_uninterrupted_order
    2
    """
    w = Word(w)
    n = len(w)
    best = 0
    best_wit: Optional[Witness] = None
    best_un = 0
    best_un_wit: Optional[Witness] = None
    for j in range(n):
        c = w[j]
        for l in range(j + 1, n):
            a = w[l]
            if a >= c:
                continue
            cands = [w[i] for i in range(j) if a < w[i] < c]
            if len(cands) > best:
                best = len(cands)
                best_wit = (tuple(cands), c, a)
            # Longest candidate run with no letter > c inside it.
            run: list = []
            top: list = []
            for i in range(j):
                if a < w[i] < c:
                    run.append(w[i])
                    if len(run) > len(top):
                        top = list(run)
                elif w[i] > c:
                    run = []
            if len(top) > best_un:
                best_un = len(top)
                best_un_wit = (tuple(top), c, a)
    return ForbiddenReport(w, best, best_un, best_wit, best_un_wit)


def complexity_bounds(w: Sequence[int]) -> tuple:
    """(lower, upper) bracket for the number of sorting passes needed.

    The upper bound is the least k admitting no obstruction of order k; the
    lower bound comes from the largest uninterrupted obstruction, or from a
    plain inversion when there is none.  Sorted words get (0, 0).

    >>> complexity_bounds((2, 3, 1))
    (2, 2)
    >>> complexity_bounds((1, 2, 3, 4))
    (0, 0)
    """
    w = Word(w)
    if all(a < b for a, b in zip(w, w[1:])):
        return (0, 0)
    rep = forbidden_report(w)
    lower = rep.max_uninterrupted_order + 1 if rep.max_uninterrupted_order else 1
    upper = rep.max_order + 1
    return (lower, upper)
