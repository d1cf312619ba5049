"""Slow reference implementations used to pin down expected values.

These are deliberately naive and structurally unlike the shipped code so
that agreement between the two is meaningful. Keep them dumb.
"""

from __future__ import annotations

from fractions import Fraction


def brute_longest_block(a: str, b: str) -> tuple[int, int, int]:
    """Longest common contiguous block by direct slice comparison.

    Scans every (i, j) start pair and extends while characters agree, then
    picks the longest block, breaking ties by smallest i and then smallest j.
    """
    best = (0, 0, 0)
    for i in range(len(a)):
        for j in range(len(b)):
            k = 0
            while i + k < len(a) and j + k < len(b) and a[i + k] == b[j + k]:
                k += 1
            if k > best[2]:
                best = (i, j, k)
    return best


def brute_matched_total(a: str, b: str) -> int:
    if not a or not b:
        return 0
    i, j, k = brute_longest_block(a, b)
    if k == 0:
        return 0
    return k + brute_matched_total(a[:i], b[:j]) + brute_matched_total(a[i + k:], b[j + k:])


def brute_similarity(a: str, b: str) -> Fraction:
    """Exact rational gestalt score of the ordered pair (a, b)."""
    total = len(a) + len(b)
    if total == 0:
        return Fraction(1)
    return Fraction(2 * brute_matched_total(a, b), total)


def eval_expr(expr, env: dict[str, int]) -> int:
    """Evaluate an expression tree over 0/1 signal values."""
    from veritask.meta import BinOp, Not, Var

    if isinstance(expr, Var):
        return env[expr.name]
    if isinstance(expr, Not):
        return 1 - eval_expr(expr.operand, env)
    assert isinstance(expr, BinOp)
    left = eval_expr(expr.left, env)
    right = eval_expr(expr.right, env)
    table = {
        "and": left & right,
        "or": left | right,
        "xor": left ^ right,
        "nand": 1 - (left & right),
        "nor": 1 - (left | right),
        "xnor": 1 - (left ^ right),
        "ge": int(left >= right),
        "gt": int(left > right),
        "mod": left % right if right else 0,
    }
    return table[expr.op]


def scenario_truth(scenario, env: dict[str, int]) -> int:
    """The output value a scenario demands for one input assignment.

    Written straight from the definition: the output asserts exactly when
    the quantifier holds over inputs sitting at their asserted levels.
    """
    hits = [
        env[sig.name] == (1 if sig.level == "high" else 0) for sig in scenario.inputs
    ]
    condition = any(hits) if scenario.quantifier == "any" else all(hits)
    if scenario.output.level == "high":
        return int(condition)
    return int(not condition)
