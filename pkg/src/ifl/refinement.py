"""
Refinement and meet of IFL requirements
---------------------------------------
refines(R1, R2) searches for a derivation of R1 being a refinement of R2
(R1 admits no more flows than R2 asks for). Kinds are compared by aligning
their segments with a small dynamic program over local steps:

    1:1  a segment against a segment (node, op and arrow weakening)
    k:1  several segments absorbed by one multi-step segment
    2:2  the two arrow-swapping patterns for a single step next to a
         multi-step one, across a wildcard node

When no alignment exists the search weakens the refining kind with the same
steps (swaps and merges) and tries again, a bounded number of times. Running
out of budget gives UNKNOWN, never a silent False.

meet(R1, R2) enumerates candidate lower bounds from segment alignments, keeps
those that provably refine both operands and returns a maximal one.
"""

from enum import Enum
from itertools import chain

from src.ifl.kinds import (WILDCARD, Arrow, Constraint, Exists, Kind,
                           Prohibit, ops_join, ops_meet, ops_subset)
from src.utils.errors import RefinementError
from src.utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_SEARCH_BUDGET = 20000


class Derivability(Enum):
    DERIVABLE = 'derivable'
    NOT_DERIVABLE = 'not derivable'
    UNKNOWN = 'unknown'


def _both(first, second):
    if Derivability.NOT_DERIVABLE in (first, second):
        return Derivability.NOT_DERIVABLE
    if Derivability.UNKNOWN in (first, second):
        return Derivability.UNKNOWN
    return Derivability.DERIVABLE


def _node_le(finer, coarser):
    return coarser == WILDCARD or finer == coarser


def _segment_le(finer, coarser):
    if finer.multi and not coarser.multi:
        return False
    return ops_subset(finer.ops, coarser.ops)


def _aligns(p, q):
    """Direct alignment of kind p below kind q, without weakening p first."""
    pn, qn = p.nodes, q.nodes
    ps, qs = p.segments, q.segments
    if not _node_le(pn[0], qn[0]):
        return False
    memo = {}

    def reach(i, j):
        if (i, j) in memo:
            return memo[(i, j)]
        memo[(i, j)] = False
        result = _reach(i, j)
        memo[(i, j)] = result
        return result

    def _reach(i, j):
        if i == len(ps) or j == len(qs):
            return i == len(ps) and j == len(qs)
        if _segment_le(ps[i], qs[j]) and _node_le(pn[i + 1], qn[j + 1]) and reach(i + 1, j + 1):
            return True
        if qs[j].multi:
            for k in range(1, len(ps) - i + 1):
                if not ops_subset(ps[i + k - 1].ops, qs[j].ops):
                    break
                if k > 1 and _node_le(pn[i + k], qn[j + 1]) and reach(i + k, j + 1):
                    return True
        if (i + 1 < len(ps) and j + 1 < len(qs) and qn[j + 1] == WILDCARD
                and _node_le(pn[i + 2], qn[j + 2]) and _swap_le(ps[i], ps[i + 1], qs[j], qs[j + 1])):
            return reach(i + 2, j + 2)
        return False

    return reach(0, 0)


def _swap_le(a, b, c, d):
    """Two segments a b below c d where the arrows change places."""
    if a.multi and not b.multi and not c.multi and d.multi:
        return (ops_subset(a.ops, c.ops) and ops_subset(a.ops, d.ops)
                and ops_subset(b.ops, d.ops))
    if not a.multi and b.multi and c.multi and not d.multi:
        return (ops_subset(a.ops, c.ops) and ops_subset(b.ops, d.ops)
                and ops_subset(b.ops, c.ops))
    return False


def _weakenings(kind):
    """Kinds one step coarser than kind: arrow swaps and merges of neighbours."""
    nodes, steps = list(kind.nodes), list(kind.steps)
    for i in range(len(steps) - 1):
        (a_arrow, a_ops), (b_arrow, b_ops) = steps[i], steps[i + 1]
        joined = ops_join(a_ops, b_ops)
        merged_nodes = nodes[:i + 1] + nodes[i + 2:]
        yield Kind.chain(merged_nodes, steps[:i] + [(Arrow.MULTI, joined)] + steps[i + 2:])
        swapped_nodes = nodes[:i + 1] + [WILDCARD] + nodes[i + 2:]
        if a_arrow is Arrow.MULTI and b_arrow is Arrow.SINGLE:
            swap = [(Arrow.SINGLE, a_ops), (Arrow.MULTI, joined)]
        elif a_arrow is Arrow.SINGLE and b_arrow is Arrow.MULTI:
            swap = [(Arrow.MULTI, joined), (Arrow.SINGLE, b_ops)]
        else:
            continue
        yield Kind.chain(swapped_nodes, steps[:i] + swap + steps[i + 2:])


def kind_refines(p, q, budget=DEFAULT_SEARCH_BUDGET):
    """
    Decide whether kind p refines kind q.

    Args:
        p: Finer kind
        q: Coarser kind
        budget: Maximum number of kinds explored by the weakening search

    Returns:
        Derivability
    """
    if p == q or _aligns(p, q):
        return Derivability.DERIVABLE
    if not _node_le(p.nodes[0], q.nodes[0]) or not _node_le(p.nodes[-1], q.nodes[-1]):
        return Derivability.NOT_DERIVABLE

    depth_limit = len(p) + len(q) + 2
    frontier = [p]
    seen = {p}
    for _ in range(depth_limit):
        next_frontier = []
        for kind in frontier:
            for weaker in _weakenings(kind):
                if weaker in seen:
                    continue
                if _aligns(weaker, q):
                    return Derivability.DERIVABLE
                seen.add(weaker)
                if len(seen) > budget:
                    logger.warning(f"refinement search budget exhausted for '{p}' below '{q}'")
                    return Derivability.UNKNOWN
                next_frontier.append(weaker)
        if not next_frontier:
            break
        frontier = next_frontier
    return Derivability.NOT_DERIVABLE


def refines(finer, coarser, budget=DEFAULT_SEARCH_BUDGET):
    """
    Decide whether requirement finer refines requirement coarser.

    Existence refines along its kind, prohibition against it, and a
    constraint weakens its antecedent while strengthening its consequent.
    """
    if type(finer) is not type(coarser):
        return Derivability.NOT_DERIVABLE
    if isinstance(finer, Exists):
        return kind_refines(finer.kind, coarser.kind, budget)
    if isinstance(finer, Prohibit):
        return kind_refines(coarser.kind, finer.kind, budget)
    antecedents = kind_refines(coarser.antecedent, finer.antecedent, budget)
    if antecedents is Derivability.NOT_DERIVABLE:
        return antecedents
    return _both(antecedents, kind_refines(finer.consequent, coarser.consequent, budget))


# Meet

_FAIL = object()


def _node_meet(a, b):
    if a == WILDCARD:
        return b
    if b == WILDCARD or a == b:
        return a
    return _FAIL


def _node_join(a, b):
    return a if a == b else WILDCARD


def _arrow_meet(a, b):
    return Arrow.SINGLE if Arrow.SINGLE in (a, b) else Arrow.MULTI


def _arrow_join(a, b):
    return Arrow.MULTI if Arrow.MULTI in (a, b) else Arrow.SINGLE


def _alignments(a, b, split_any):
    """
    Ways to align the segments of a and b into groups.

    Each group is (i, m, j, n) with one of m, n equal to 1. A group with
    several segments on one side is admitted when the single segment on the
    other side is multi-step, or always when split_any is set.
    """
    la, lb = len(a), len(b)

    def walk(i, j):
        if i == la and j == lb:
            yield []
            return
        if i == la or j == lb:
            return
        for m, n in chain([(1, 1)], ((1, k) for k in range(2, lb - j + 1)),
                          ((k, 1) for k in range(2, la - i + 1))):
            if n > 1 and not (split_any or a.segments[i].multi):
                continue
            if m > 1 and not (split_any or b.segments[j].multi):
                continue
            for rest in walk(i + m, j + n):
                yield [(i, m, j, n)] + rest

    return walk(0, 0)


def _meet_candidate(a, b, groups):
    nodes = [_node_meet(a.nodes[0], b.nodes[0])]
    steps = []
    for i, m, j, n in groups:
        if m == 1 and n == 1:
            pairs = [(a.segments[i], b.segments[j])]
        elif m == 1:
            pairs = [(a.segments[i], b.segments[j + t]) for t in range(n)]
        else:
            pairs = [(a.segments[i + t], b.segments[j]) for t in range(m)]
        for index, (sa, sb) in enumerate(pairs):
            ops = ops_meet(sa.ops, sb.ops)
            if ops is not None and not ops:
                return None
            steps.append((_arrow_meet(sa.arrow, sb.arrow), ops))
            last = index == len(pairs) - 1
            if last:
                nodes.append(_node_meet(a.nodes[i + m], b.nodes[j + n]))
            elif m == 1:
                nodes.append(b.nodes[j + index + 1])
            else:
                nodes.append(a.nodes[i + index + 1])
    if _FAIL in nodes:
        return None
    return Kind.chain(nodes, steps)


def _join_candidate(a, b, groups):
    nodes = [_node_join(a.nodes[0], b.nodes[0])]
    steps = []
    for i, m, j, n in groups:
        if m == 1 and n == 1:
            sa, sb = a.segments[i], b.segments[j]
            steps.append((_arrow_join(sa.arrow, sb.arrow), ops_join(sa.ops, sb.ops)))
        else:
            ops = a.segments[i].ops
            for segment in chain(a.segments[i + 1:i + m], b.segments[j:j + n]):
                ops = ops_join(ops, segment.ops)
            steps.append((Arrow.MULTI, ops))
        nodes.append(_node_join(a.nodes[i + m], b.nodes[j + n]))
    return Kind.chain(nodes, steps)


def kind_meets(a, b):
    """Candidate kinds below both a and b, without duplicates."""
    found = {}
    for groups in _alignments(a, b, split_any=False):
        kind = _meet_candidate(a, b, groups)
        if kind is not None:
            found.setdefault(kind)
    return list(found)


def kind_joins(a, b):
    """Candidate kinds above both a and b, without duplicates."""
    found = {}
    for groups in _alignments(a, b, split_any=True):
        found.setdefault(_join_candidate(a, b, groups))
    return list(found)


def _candidates(first, second):
    if isinstance(first, Exists):
        return [Exists(k) for k in kind_meets(first.kind, second.kind)]
    if isinstance(first, Prohibit):
        return [Prohibit(k) for k in kind_joins(first.kind, second.kind)]
    return [Constraint(ant, cons)
            for ant in kind_joins(first.antecedent, second.antecedent)
            for cons in kind_meets(first.consequent, second.consequent)]


def _size(requirement):
    if isinstance(requirement, Constraint):
        return len(requirement.antecedent) + len(requirement.consequent)
    return len(requirement.kind)


def meet(first, second, budget=DEFAULT_SEARCH_BUDGET, warnings=None):
    """
    Greatest lower bound of two requirements found by alignment search.

    Args:
        first: Requirement
        second: Requirement of the same variant
        budget: Refinement search budget per check
        warnings: Optional list collecting diagnostics

    Returns:
        Requirement refining both operands, or None when no candidate survives

    Raises:
        RefinementError: no candidate could be verified because every
            remaining check ran out of budget
    """
    if type(first) is not type(second):
        return None
    if first == second:
        return first

    verified = []
    undecided = []
    for candidate in _candidates(first, second):
        outcome = _both(refines(candidate, first, budget), refines(candidate, second, budget))
        if outcome is Derivability.DERIVABLE:
            verified.append(candidate)
        elif outcome is Derivability.UNKNOWN:
            undecided.append(candidate)
            message = f"skipping meet candidate '{candidate}': refinement check undecided"
            logger.warning(message)
            if warnings is not None:
                warnings.append(message)

    if not verified:
        if undecided:
            raise RefinementError(
                f"cannot decide the meet of '{first}' and '{second}' within the search budget")
        return None

    def strictly_below(lower, upper):
        return (refines(lower, upper, budget) is Derivability.DERIVABLE
                and refines(upper, lower, budget) is not Derivability.DERIVABLE)

    maximal = [m for m in verified
               if not any(strictly_below(m, other) for other in verified if other is not m)]
    maximal.sort(key=lambda r: (_size(r), str(r)))
    return maximal[0]
