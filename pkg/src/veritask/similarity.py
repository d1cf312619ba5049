"""Gestalt string similarity used for scoring imperfect translations.

The score follows the classic Ratcliff-Obershelp recursion: find a longest
common contiguous block, credit its length, then recurse on the unmatched
left and right remainders. With M the total matched length the score is
2*M / (len(a) + len(b)). A perfect copy scores 1.0, disjoint strings 0.0,
and the score is defined on the ordered pair (it is not symmetric in
general because of how ties are broken).

Tie break for equal-length candidate blocks: the block starting earliest
in ``a`` wins, then earliest in ``b``.
"""

from __future__ import annotations

__all__ = ["ro_similarity", "longest_common_block"]


def longest_common_block(
    a: str,
    b: str,
    alo: int = 0,
    ahi: int | None = None,
    blo: int = 0,
    bhi: int | None = None,
) -> tuple[int, int, int]:
    """Return (i, j, size) of the longest common block in the given windows.

    Scans with a rolling length table so each window costs O(len_a * len_b)
    in the worst case. The first block to reach a given size in an ascending
    (i, j) scan is the one starting earliest in a, then earliest in b, which
    is exactly the tie break the score is defined with.
    """
    if ahi is None:
        ahi = len(a)
    if bhi is None:
        bhi = len(b)
    b2j: dict[str, list[int]] = {}
    for j in range(blo, bhi):
        b2j.setdefault(b[j], []).append(j)
    besti, bestj, bestsize = alo, blo, 0
    j2len: dict[int, int] = {}
    for i in range(alo, ahi):
        newj2len: dict[int, int] = {}
        for j in b2j.get(a[i], ()):
            k = j2len.get(j - 1, 0) + 1
            newj2len[j] = k
            if k > bestsize:
                besti, bestj, bestsize = i - k + 1, j - k + 1, k
        j2len = newj2len
    return besti, bestj, bestsize


def _matched_total(a: str, b: str) -> int:
    total = 0
    # Explicit work stack; degenerate inputs would otherwise recurse as deep
    # as the block count.
    stack = [(0, len(a), 0, len(b))]
    while stack:
        alo, ahi, blo, bhi = stack.pop()
        if alo >= ahi or blo >= bhi:
            continue
        i, j, size = longest_common_block(a, b, alo, ahi, blo, bhi)
        if size == 0:
            continue
        total += size
        stack.append((alo, i, blo, j))
        stack.append((i + size, ahi, j + size, bhi))
    return total


def ro_similarity(a: str, b: str) -> float:
    """Score the ordered pair (a, b) in [0, 1].

    Two empty strings are identical and score 1.0; an empty string against
    a non-empty one scores 0.0.
    """
    total = len(a) + len(b)
    if total == 0:
        return 1.0
    return 2.0 * _matched_total(a, b) / total
