#!/usr/bin/env python3
"""
Synthetic configurations
------------------------
Generates large random IFCIL configurations for scaling runs. Requirements
cycle through four common property patterns:

    TCB restriction       * +> tcb : trusted +> tcb
    assured pipeline      src +> dst : * +> stage1 +> stage2 +> *
    wrap untrustworthy    untrusted > * : * > wrapper
    augment only          a > b : a [append]> b
"""

import random

from src.utils.logger import get_logger

logger = get_logger(__name__)

OPERATIONS = ('read', 'write', 'append', 'getattr', 'setattr', 'open', 'ioctl')


def _tcb(rng, types, attributes):
    tcb = rng.choice(types)
    return f"* +> {tcb} : {rng.choice(attributes)} +> {tcb}"


def _pipeline(rng, types, attributes):
    src, dst, first, second = rng.sample(types, 4)
    return f"{src} +> {dst} : * +> {first} +> {second} +> *"


def _wrap(rng, types, attributes):
    untrusted, wrapper = rng.sample(types, 2)
    return f"{untrusted} > * : * > {wrapper}"


def _augment(rng, types, attributes):
    a, b = rng.sample(types, 2)
    return f"{a} > {b} : {a} [append]> {b}"


PATTERNS = (
    ('tcb', _tcb),
    ('pipeline', _pipeline),
    ('wrap', _wrap),
    ('augment', _augment),
)


def generate_config(types=500, attributes=50, allows=5000, requirements=16, seed=0):
    """
    Generate CIL text with IFL annotations.

    Args:
        types: Number of type declarations
        attributes: Number of typeattributes, each a union of 2 to 10 types
        allows: Number of allow rules; one in ten has a typeattribute endpoint
        requirements: Number of requirements, cycling through PATTERNS
        seed: Random seed

    Returns:
        Configuration text
    """
    rng = random.Random(seed)
    type_names = [f"t{i}" for i in range(types)]
    attr_names = [f"a{i}" for i in range(attributes)]
    lines = [f"(type {name})" for name in type_names]

    for name in attr_names:
        members = rng.sample(type_names, min(len(type_names), rng.randint(2, 10)))
        lines.append(f"(typeattribute {name})")
        lines.append(f"(typeattributeset {name} ({' '.join(members)}))")

    def endpoint():
        if attr_names and rng.random() < 0.1:
            return rng.choice(attr_names)
        return rng.choice(type_names)

    for _ in range(allows):
        ops = ' '.join(sorted(rng.sample(OPERATIONS, rng.randint(1, 2))))
        lines.append(f"(allow {endpoint()} {endpoint()} (file ({ops})))")

    pool = attr_names or type_names
    for index in range(requirements):
        prefix, pattern = PATTERNS[index % len(PATTERNS)]
        label = f"{prefix}{index // len(PATTERNS) + 1}"
        lines.append(f";IFL; ({label}) {pattern(rng, type_names, pool)} ;IFL;")

    logger.debug(f"Generated {types} types, {attributes} typeattributes, "
                 f"{allows} allows, {requirements} requirements")
    return '\n'.join(lines) + '\n'
