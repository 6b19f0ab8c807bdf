"""
Kind automata
-------------
A kind becomes a nondeterministic automaton over KTS steps (state, op,
state'). A configuration (i, inside) means segments 0..i-1 are matched and
the path sits at the start of segment i; inside marks a position strictly
within a multi-step segment, where the node is unconstrained.
"""

from dataclasses import dataclass

from src.ifl.kinds import WILDCARD


@dataclass(frozen=True)
class KindAutomaton:
    kind: object
    labels: dict

    @property
    def final(self):
        return (len(self.kind), False)

    def matches(self, ref, state):
        """Node constraint: the wildcard matches any type, a name its members."""
        names = self.labels.get(state)
        if names is None:
            return False
        return ref == WILDCARD or ref in names

    def initial(self, state):
        """Configurations a path starting at state begins in."""
        if self.matches(self.kind.segments[0].src, state):
            return frozenset([(0, False)])
        return frozenset()

    def advance(self, config, src, op, dst):
        """Configurations reachable from config by the step (src, op, dst)."""
        index, inside = config
        if index >= len(self.kind):
            return frozenset()
        segment = self.kind.segments[index]
        if segment.ops is not None and op not in segment.ops:
            return frozenset()
        reached = set()
        if self.matches(segment.dst, dst):
            reached.add((index + 1, False))
        if segment.multi and self.matches(WILDCARD, dst):
            reached.add((index, True))
        return frozenset(reached)

    def advance_set(self, configs, src, op, dst):
        reached = set()
        for config in configs:
            reached |= self.advance(config, src, op, dst)
        return frozenset(reached)

    def accepts(self, steps):
        """
        True if some choice of one operation per step is accepted.

        Args:
            steps: Chained (state, ops, state') triples
        """
        if not steps:
            return False
        current = self.initial(steps[0][0])
        for src, ops, dst in steps:
            current = frozenset().union(*(self.advance_set(current, src, op, dst)
                                          for op in sorted(ops)))
            if not current:
                return False
        return self.final in current


def kind_to_automaton(kind, kts):
    """Automaton accepting the KTS paths whose flow has the given kind."""
    return KindAutomaton(kind, kts.labels)
