"""
Kripke transition system
------------------------
States are the types of an information-flow diagram, transitions carry a
single operation each and every state is labelled with its own name plus
the typeattributes it belongs to.
"""

from dataclasses import dataclass, field
from functools import cached_property

from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class KTS:
    states: tuple = ()
    actions: tuple = ()
    transitions: frozenset = frozenset()
    attributes: frozenset = frozenset()
    labels: dict = field(default_factory=dict, hash=False, compare=False)

    @cached_property
    def _arc_ops(self):
        ops = {}
        for src, op, dst in self.transitions:
            ops.setdefault((src, dst), set()).add(op)
        return {arc: frozenset(found) for arc, found in ops.items()}

    @cached_property
    def _successors(self):
        succ = {s: [] for s in self.states}
        for src, op, dst in self.transitions:
            succ[src].append((op, dst))
        return {s: sorted(pairs) for s, pairs in succ.items()}

    def successors(self, state):
        """Outgoing (operation, state) pairs, sorted."""
        return self._successors.get(state, [])

    def operations(self, src, dst):
        """Every operation of the diagram arc src -> dst."""
        return self._arc_ops.get((src, dst), frozenset())

    def has_label(self, state, name):
        return name in self.labels.get(state, ())


def build_kts(ifd):
    """
    Encode an information-flow diagram as a KTS.

    Args:
        ifd: IFD from build_ifd

    Returns:
        KTS over the types of ifd
    """
    states = tuple(sorted(ifd.types))
    transitions = frozenset(
        (src, op, dst)
        for src, dst, data in ifd.flows.edges(data=True)
        if src in ifd.types and dst in ifd.types
        for op in data['ops']
    )
    labels = {}
    for state in states:
        names = {state}
        names.update(a for a in ifd.attributes if state in ifd.ta[a])
        labels[state] = frozenset(names)

    kts = KTS(states=states, actions=tuple(sorted(ifd.ops)), attributes=frozenset(ifd.attributes),
              transitions=transitions, labels=labels)
    logger.debug(f"KTS: {len(states)} states, {len(transitions)} transitions, "
                 f"{len(kts.actions)} operations")
    return kts
