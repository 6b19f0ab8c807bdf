"""
Information-flow diagram
------------------------
Each operation granted on an arc moves information forward (subject to
object), backward (object to subject), both ways or not at all. The flow
table records the direction per operation, optionally per class, and the
information-flow diagram (IFD) is the graph those directions induce.

Flow table files hold one entry per line:

    # comment
    read          backward
    file.append   forward
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import networkx as nx

from src.utils.errors import FlowTableError
from src.utils.logger import get_logger

logger = get_logger(__name__)


class FlowDirection(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"
    BOTH = "both"
    NONE = "none"

    @property
    def forward(self):
        return self in (FlowDirection.FORWARD, FlowDirection.BOTH)

    @property
    def backward(self):
        return self in (FlowDirection.BACKWARD, FlowDirection.BOTH)


DEFAULT_DIRECTIONS = {
    'read': FlowDirection.BACKWARD,
    'getattr': FlowDirection.BACKWARD,
    'write': FlowDirection.FORWARD,
    'append': FlowDirection.FORWARD,
    'setattr': FlowDirection.FORWARD,
    'ioctl': FlowDirection.BOTH,
}


class FlowTable:
    """Direction of information flow per operation."""

    def __init__(self, entries=None, strict=False, warnings=None):
        """
        Args:
            entries: Dict from 'op' or 'class.op' to FlowDirection
            strict: Raise on operations without an explicit entry
            warnings: Optional list collecting diagnostics
        """
        self.strict = strict
        self.warnings = warnings if warnings is not None else []
        if strict:
            self.entries = dict(entries or {})
        else:
            self.entries = dict(DEFAULT_DIRECTIONS)
            self.entries.update(entries or {})
        self._reported = set()

    @classmethod
    def defaults(cls, strict=False, warnings=None):
        return cls(DEFAULT_DIRECTIONS, strict=strict, warnings=warnings)

    @classmethod
    def parse(cls, text, strict=False, warnings=None, source='<flows>'):
        entries = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FlowTableError(f"{source}:{number}: expected '<op> <direction>', got '{raw.strip()}'")
            key, direction = parts
            try:
                entries[key] = FlowDirection(direction.lower())
            except ValueError:
                allowed = ', '.join(d.value for d in FlowDirection)
                raise FlowTableError(f"{source}:{number}: unknown direction '{direction}' "
                                     f"(expected one of {allowed})") from None
        return cls(entries, strict=strict, warnings=warnings)

    @classmethod
    def from_file(cls, path, strict=False, warnings=None):
        path = Path(path)
        try:
            text = path.read_text(encoding='utf-8')
        except OSError as e:
            raise FlowTableError(f"cannot read flow table {path}: {e}") from e
        table = cls.parse(text, strict=strict, warnings=warnings, source=str(path))
        logger.info(f"Loaded flow table {path} ({len(table.entries)} entries)")
        return table

    def lookup(self, cls, op):
        """
        Direction of op on cls, preferring a 'class.op' entry over 'op'.

        Raises:
            FlowTableError: In strict mode, when neither entry exists
        """
        for key in (f"{cls}.{op}", op):
            if key in self.entries:
                return self.entries[key]
        if self.strict:
            raise FlowTableError(f"no flow direction for operation '{op}' (class {cls})")
        if op not in self._reported:
            self._reported.add(op)
            message = f"no flow direction for operation '{op}'; treating it as carrying no flow"
            logger.warning(message)
            self.warnings.append(message)
        return FlowDirection.NONE


@dataclass
class IFD:
    """Information-flow diagram: arcs carry the operations that induce each flow."""

    types: set = field(default_factory=set)
    attributes: set = field(default_factory=set)
    ta: dict = field(default_factory=dict)
    flows: nx.DiGraph = field(default_factory=nx.DiGraph)

    @property
    def nodes(self):
        return self.types | self.attributes

    @property
    def ops(self):
        collected = set()
        for _, _, data in self.flows.edges(data=True):
            collected |= data['ops']
        return collected

    def add_flow(self, src, dst, ops):
        if not ops:
            return
        if self.flows.has_edge(src, dst):
            self.flows[src][dst]['ops'] = self.flows[src][dst]['ops'] | frozenset(ops)
        else:
            self.flows.add_edge(src, dst, ops=frozenset(ops))

    def arc_set(self):
        return {(u, d['ops'], v) for u, v, d in self.flows.edges(data=True)}

    def ops_between(self, src, dst):
        if self.flows.has_edge(src, dst):
            return self.flows[src][dst]['ops']
        return frozenset()


def build_ifd(graph, table):
    """
    Derive the information-flow diagram of a permission graph.

    Args:
        graph: Graph from build_graph
        table: FlowTable

    Returns:
        IFD over the same nodes
    """
    ifd = IFD(types=set(graph.types), attributes=set(graph.attributes), ta=dict(graph.ta))
    ifd.flows.add_nodes_from(sorted(graph.nodes))
    for src, dst, data in sorted(graph.arcs.edges(data=True), key=lambda e: (e[0], e[1])):
        forward, backward = set(), set()
        for op, classes in sorted(data['ops'].items()):
            for cls in sorted(classes):
                direction = table.lookup(cls, op)
                if direction.forward:
                    forward.add(op)
                if direction.backward:
                    backward.add(op)
        ifd.add_flow(src, dst, forward)
        ifd.add_flow(dst, src, backward)
    logger.info(f"IFD: {ifd.flows.number_of_edges()} flow arcs")
    return ifd
