"""
Shared fixtures for the verifier tests
--------------------------------------
Fixture configurations live in tests/fixtures. `pipeline` runs a
configuration text through every stage up to the KTS; the random_* helpers
build small information-flow diagrams and kinds for the differential tests.
"""

import random
from dataclasses import dataclass
from pathlib import Path

import networkx as nx
import pytest

from src.cil.names import QualifiedName
from src.cil.parser import parse_config
from src.controllers.normalizer import normalize
from src.ifl.kinds import WILDCARD, Arrow, Kind
from src.semantics.flows import IFD, FlowTable, build_ifd
from src.semantics.graph import build_graph, collect_requirements
from src.verifier.kts import build_kts

FIXTURES = Path(__file__).parent / 'fixtures'

OPS = ('read', 'write')


def fixture_path(name):
    return FIXTURES / name


def fixture_text(name):
    return fixture_path(name).read_text(encoding='utf-8')


def q(text):
    """Shorthand for QualifiedName.parse."""
    return QualifiedName.parse(text)


@dataclass
class Pipeline:
    normalized: object
    graph: object
    ifd: object
    kts: object
    requirements: list
    warnings: list

    def requirement(self, label):
        return next(r for r in self.requirements if r.label == label)


def run_pipeline(text, table=None):
    """Parse, normalize and build everything for a configuration text."""
    warnings = []
    normalized = normalize(parse_config(text, warnings), warnings)
    graph = build_graph(normalized, warnings)
    requirements = collect_requirements(normalized, graph)
    ifd = build_ifd(graph, table or FlowTable.defaults(warnings=warnings))
    return Pipeline(normalized, graph, ifd, build_kts(ifd), requirements, warnings)


@pytest.fixture
def pipeline():
    return run_pipeline


@pytest.fixture(scope='session')
def webapp_text():
    return fixture_text('webapp.cil')


@pytest.fixture
def webapp(webapp_text):
    return run_pipeline(webapp_text)


# Random instances

def random_ifd(rng, n_types=None, n_attributes=None, density=0.35):
    """Small IFD over types .t0.. and typeattributes .g0.. with random read/write flows."""
    n_types = n_types if n_types is not None else rng.randint(1, 4)
    n_attributes = n_attributes if n_attributes is not None else rng.randint(0, 2)
    types = [q(f'.t{i}') for i in range(n_types)]
    attributes = [q(f'.g{i}') for i in range(n_attributes)]

    ta = {t: frozenset([t]) for t in types}
    for attr in attributes:
        ta[attr] = frozenset(t for t in types if rng.random() < 0.5)

    flows = nx.DiGraph()
    flows.add_nodes_from(types + attributes)
    ifd = IFD(types=set(types), attributes=set(attributes), ta=ta, flows=flows)
    for src in types:
        for dst in types:
            if rng.random() < density:
                ops = frozenset(op for op in OPS if rng.random() < 0.6) or frozenset([rng.choice(OPS)])
                ifd.add_flow(src, dst, ops)
    return ifd


def random_node(rng, ifd, wildcard_weight=0.25):
    if rng.random() < wildcard_weight:
        return WILDCARD
    return rng.choice(sorted(ifd.nodes))


def random_ops(rng):
    roll = rng.random()
    if roll < 0.5:
        return None
    if roll < 0.8:
        return frozenset([rng.choice(OPS)])
    return frozenset(OPS)


def random_kind(rng, ifd, max_segments=3):
    length = rng.randint(1, max_segments)
    nodes = [random_node(rng, ifd) for _ in range(length + 1)]
    steps = [(Arrow.MULTI if rng.random() < 0.5 else Arrow.SINGLE, random_ops(rng))
             for _ in range(length)]
    return Kind.chain(nodes, steps)


def type_paths(ifd, max_length):
    """Every path over type nodes with 1..max_length arcs, as (node, ops, node') tuples."""
    arcs = [(u, d['ops'], v) for u, v, d in ifd.flows.edges(data=True)
            if u in ifd.types and v in ifd.types]
    paths = [[arc] for arc in arcs]
    frontier = list(paths)
    for _ in range(max_length - 1):
        frontier = [path + [arc] for path in frontier for arc in arcs if arc[0] == path[-1][2]]
        paths.extend(frontier)
    return paths


@pytest.fixture
def rng():
    return random.Random(20240501)
