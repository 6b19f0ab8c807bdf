"""
Flow paths and the brute-force oracle
-------------------------------------
path_has_kind decides whether a path of the information-flow diagram has a
kind by applying the path-kind clauses one arc at a time: after an arc, what
is left to match is a set of residual kinds. oracle_holds explores every
path of the diagram the same way, merging prefixes that end at the same node
with the same residuals, and decides a requirement from the definition of
validity alone, without the KTS or any automaton.
"""

from collections import deque

from src.ifl.kinds import (WILDCARD, Constraint, Exists, Kind, Prohibit,
                           Segment, ops_overlap, segment_count)
from src.utils.logger import get_logger

logger = get_logger(__name__)


def _node_matches(ref, node, ta):
    return ref == WILDCARD or node in ta.get(ref, ())


def residuals(kind, arc, ta):
    """
    Match the first arc of a path against a kind.

    Args:
        kind: Kind the path should have
        arc: (node, ops, node') triple
        ta: Map from node to the set of types it stands for

    Returns:
        (done, rest): done is True if the arc alone has the kind, rest is the
        set of kinds the remainder of a longer path may have instead
    """
    node, ops, next_node = arc
    head, tail = kind.segments[0], kind.segments[1:]
    if not _node_matches(head.src, node, ta) or not ops_overlap(ops, head.ops):
        return False, frozenset()
    done = False
    rest = set()
    if _node_matches(head.dst, next_node, ta):
        if tail:
            rest.add(Kind(tail))
        else:
            done = True
    if head.multi:
        rest.add(Kind((Segment(WILDCARD, head.arrow, head.ops, head.dst),) + tail))
    return done, frozenset(rest)


def _advance(kinds, arc, ta):
    done = False
    rest = set()
    for kind in kinds:
        arc_done, arc_rest = residuals(kind, arc, ta)
        done = done or arc_done
        rest |= arc_rest
    return done, frozenset(rest)


def path_has_kind(path, kind, ifd):
    """
    Decide whether a path of ifd has the given kind.

    Args:
        path: Non-empty sequence of chained (node, ops, node') arcs
        kind: Kind
        ifd: IFD providing typeattribute membership

    Returns:
        bool
    """
    if not path:
        raise ValueError("a path has at least one arc")
    for (_, _, reached), (start, _, _) in zip(path, path[1:]):
        if reached != start:
            raise ValueError(f"arcs do not chain at {reached} / {start}")
    pending = frozenset([kind])
    done = False
    for arc in path:
        done, pending = _advance(pending, arc, ifd.ta)
    return done


def path_length_bound(ifd, requirement):
    """Number of types times one more than the longest kind's segment count."""
    return len(ifd.types) * (segment_count(requirement) + 1)


def _type_arcs(ifd):
    arcs = {}
    for src, dst, data in ifd.flows.edges(data=True):
        if src in ifd.types and dst in ifd.types:
            arcs.setdefault(src, []).append((src, data['ops'], dst))
    for listing in arcs.values():
        listing.sort(key=lambda arc: (arc[2], sorted(arc[1])))
    return arcs


def oracle_holds(ifd, requirement, max_length=None):
    """
    Decide I |= R by exploring the paths of ifd.

    Paths run over type nodes only. Without max_length the exploration
    continues until no new (node, residuals) combination appears, which
    covers every path.

    Args:
        ifd: IFD
        requirement: Exists, Prohibit or Constraint
        max_length: Optional cap on path length

    Returns:
        bool
    """
    if isinstance(requirement, Constraint):
        first, second = requirement.antecedent, requirement.consequent
    elif isinstance(requirement, (Exists, Prohibit)):
        first, second = requirement.kind, None
    else:
        raise TypeError(f"not a requirement: {requirement!r}")

    arcs = _type_arcs(ifd)
    start = (frozenset([first]), frozenset([second]) if second else frozenset())
    frontier = deque((src, start, 1) for src in sorted(arcs))
    seen = {(src, start) for src in sorted(arcs)}
    found = False

    while frontier and not found:
        node, (pending, pending_second), length = frontier.popleft()
        if max_length is not None and length > max_length:
            continue
        for arc in arcs.get(node, []):
            done, rest = _advance(pending, arc, ifd.ta)
            done_second, rest_second = False, frozenset()
            if second is not None:
                done_second, rest_second = _advance(pending_second, arc, ifd.ta)
            if done and (second is None or not done_second):
                found = True
                break
            if not rest:
                continue
            state = (arc[2], (rest, rest_second))
            if state not in seen:
                seen.add(state)
                frontier.append((arc[2], (rest, rest_second), length + 1))

    logger.debug(f"Oracle explored {len(seen)} states for {requirement}")
    if isinstance(requirement, Exists):
        return found
    return not found
