#!/usr/bin/env python3
"""
Normalizer
----------
Rewrites a parsed configuration into normal form: block inheritance and macro
calls are expanded, every name in a command outside macros is fully
qualified, and IFL requirements are copied, instantiated and refined along
the way.

The pipeline has six phases, each applied until nothing changes:

    1  resolve the block names of blockinherit rules
    2  copy inherited block bodies (refining copied requirements)
    3  resolve the macro names of call rules
    4  copy type and typeattribute declarations from macros to callers
    5  expand innermost calls (resolve macro-local names, copy commands and
       requirements with parameters bound, drop expanded calls), repeated
    6  resolve the remaining names in blocks and the global namespace

Within one iteration every rule fires against the same snapshot and the
results are merged in document order.
"""

from dataclasses import dataclass, field

from src.cil.model import (Allow, BlockDecl, BlockInherit, Call,
                           IflRequirement, LocatedRule, RuleSet,
                           TypeAttrDecl, TypeAttributeSet, TypeDecl,
                           map_command_names)
from src.cil.names import GLOBAL, QualifiedName
from src.cil.resolution import eval_bar, eval_name, eval_or
from src.ifl.kinds import substitute
from src.ifl.refinement import DEFAULT_SEARCH_BUDGET, meet
from src.utils.errors import (CyclicInheritanceError, MacroCallError,
                              RefinementError, UnresolvedNameError)
from src.utils.logger import get_logger

logger = get_logger(__name__)

NAMED_COMMANDS = (Allow, TypeAttributeSet, Call, IflRequirement)
BLOCK_COMMANDS = (Allow, TypeAttributeSet, IflRequirement)


@dataclass
class PipelineState:
    gamma: RuleSet
    phase: int = 0
    warnings: list = field(default_factory=list)


def _fixpoint(rules, step):
    while True:
        rewritten = step(rules)
        if rewritten == rules:
            return rewritten
        rules = rewritten


def _bind_names(binding):
    def bind(name):
        if not name.anchored and len(name.path) == 1 and name.last in binding:
            return binding[name.last]
        return name
    return bind


class Normalizer:
    """
    Runs the normalization pipeline.

    Phases are public methods so they can be exercised one at a time.
    """

    def __init__(self, search_budget=DEFAULT_SEARCH_BUDGET, warnings=None):
        self.search_budget = search_budget
        self.warnings = warnings if warnings is not None else []
        self._meets = {}

    def _warn(self, message):
        logger.warning(message)
        self.warnings.append(message)

    def run(self, rules):
        """
        Normalize rules.

        Args:
            rules: Parsed RuleSet

        Returns:
            PipelineState holding the normal form
        """
        state = PipelineState(rules, 0, self.warnings)
        phases = [
            self.phase1_resolve_inherit,
            self.phase2_expand_inherit,
            self.phase3_resolve_call,
            self.phase4_copy_decls,
            self.phase5_resolve_calls,
            self.phase6_resolve_block_names,
        ]
        for number, phase in enumerate(phases, start=1):
            state.gamma = phase(state.gamma)
            state.phase = number
            logger.debug(f"Phase {number} ({phase.__name__}) done: {len(state.gamma)} rules")
        return state

    def _meet(self, copied, refining, refinement, namespace):
        key = (copied, refining)
        if key not in self._meets:
            self._meets[key] = meet(copied, refining, self.search_budget, self.warnings)
        merged = self._meets[key]
        if merged is None:
            raise RefinementError(
                f"({refinement.new_label}:{refinement.target}) in {namespace.display()}: "
                f"no requirement refines both '{copied}' and '{refining}'")
        return merged

    # Phase 1

    def phase1_resolve_inherit(self, rules):
        def step(rules):
            out = []
            for located in rules:
                rule = located.rule
                if isinstance(rule, BlockInherit) and not rule.block.anchored:
                    target = eval_or(located.namespace, GLOBAL, 'block', rule.block, rules)
                    if target is None:
                        raise UnresolvedNameError(located.namespace.display(), 'block', rule.block)
                    located = LocatedRule(located.namespace, BlockInherit(target, rule.refinements))
                out.append(located)
            return RuleSet(out)
        return _fixpoint(rules, step)

    # Phase 2

    def phase2_expand_inherit(self, rules):
        """Copy inherited bodies until no rule is added, then drop the inherit rules."""
        limit = sum(1 for r in rules if isinstance(r.rule, BlockDecl)) + 1
        matched = set()
        for _ in range(limit + 1):
            expanded = rules.with_added(self._inherit_copies(rules, matched))
            if expanded == rules:
                break
            rules = expanded
        else:
            raise CyclicInheritanceError(
                f"block inheritance does not terminate after {limit} rounds; "
                "check for a block inheriting one of its ancestors")

        for located in rules:
            if isinstance(located.rule, BlockInherit):
                for index, refinement in enumerate(located.rule.refinements):
                    if (located, index) not in matched:
                        raise RefinementError(
                            f"({refinement.new_label}:{refinement.target}) in "
                            f"{located.namespace.display()} matches no requirement of "
                            f"{located.rule.block}")
        return rules.filter(lambda r: not isinstance(r.rule, BlockInherit))

    def _inherit_copies(self, rules, matched):
        copies = []
        for located in rules:
            inherit = located.rule
            if not isinstance(inherit, BlockInherit):
                continue
            block = inherit.block
            if not rules.declares(block, 'block'):
                raise UnresolvedNameError(located.namespace.display(), 'block', block)
            for inner in rules:
                if not inner.namespace.is_within(block):
                    continue
                rho = inner.namespace.relative_to(block)
                target = QualifiedName(True, located.namespace.path + rho)
                rule = inner.rule
                refining = []
                if isinstance(rule, IflRequirement):
                    label_path = '.'.join(rho + (rule.label,))
                    refining = [(i, r) for i, r in enumerate(inherit.refinements)
                                if r.target == label_path]
                if not refining:
                    copies.append(LocatedRule(target, rule))
                    continue
                for index, refinement in refining:
                    matched.add((located, index))
                    merged = self._meet(rule.requirement, refinement.requirement,
                                         refinement, target)
                    copies.append(LocatedRule(target, IflRequirement(refinement.new_label, merged)))
        return copies

    # Phase 3

    def phase3_resolve_call(self, rules):
        def step(rules):
            out = []
            for located in rules:
                rule = located.rule
                if isinstance(rule, Call) and not rule.macro.anchored:
                    target = eval_or(located.namespace, GLOBAL, 'macro', rule.macro, rules)
                    if target is None:
                        raise UnresolvedNameError(located.namespace.display(), 'macro', rule.macro)
                    located = LocatedRule(located.namespace,
                                          Call(target, rule.args, rule.refinements))
                out.append(located)
            return RuleSet(out)

        rules = _fixpoint(rules, step)
        for located in rules:
            if isinstance(located.rule, Call) and located.rule.macro not in rules.macros:
                raise UnresolvedNameError(located.namespace.display(), 'macro', located.rule.macro)
        return rules

    # Phase 4

    def phase4_copy_decls(self, rules):
        def step(rules):
            copies = []
            for located in rules:
                if isinstance(located.rule, Call):
                    copies.extend(LocatedRule(located.namespace, decl)
                                  for decl in rules.rules_at(located.rule.macro)
                                  if isinstance(decl, (TypeDecl, TypeAttrDecl)))
            return rules.with_added(copies)
        return _fixpoint(rules, step)

    # Phase 5

    def phase5_resolve_calls(self, rules):
        while True:
            start = rules
            rules = _fixpoint(rules, self.phase5a_resolve_macro_names)
            rules = _fixpoint(rules, self.phase5b_copy_innermost)
            rules = self.phase5c_drop_expanded(rules)
            if rules == start:
                break
        stuck = [r for r in rules if isinstance(r.rule, Call)]
        if stuck:
            names = ', '.join(sorted({str(r.rule.macro) for r in stuck}))
            raise MacroCallError(f"recursive macro calls cannot be expanded: {names}")
        return rules

    def phase5a_resolve_macro_names(self, rules):
        """Qualify names in macro bodies that resolve in an enclosing block but not locally."""
        out = []
        for located in rules:
            namespace, rule = located.namespace, located.rule
            macro = rules.macros.get(namespace)
            if macro is not None and isinstance(rule, NAMED_COMMANDS):
                params = set(macro.param_names)

                def resolve(name, namespace=namespace, params=params):
                    # parameters are substituted in 5b; the bound argument is anchored in phase 6
                    if name.anchored or (len(name.path) == 1 and name.last in params):
                        return name
                    if eval_name(namespace, 'type', name, rules) is not None:
                        return name
                    found = eval_bar(namespace, 'type', name, rules)
                    return found if found is not None else name

                rule = map_command_names(rule, resolve)
            out.append(LocatedRule(namespace, rule))
        return RuleSet(out)

    def phase5b_copy_innermost(self, rules):
        """Copy the body of every called macro that makes no calls itself."""
        copies = []
        labels = {}
        for located in rules:
            call = located.rule
            if not isinstance(call, Call) or rules.contains_call(call.macro):
                continue
            namespace = located.namespace
            macro = rules.macros[call.macro]
            if len(macro.params) != len(call.args):
                raise MacroCallError(
                    f"{call.macro} expects {len(macro.params)} arguments, "
                    f"got {len(call.args)} in {namespace.display()}")
            binding = dict(zip(macro.param_names, call.args))
            body = rules.rules_at(call.macro)
            known = {r.label for r in body if isinstance(r, IflRequirement)}
            for refinement in call.refinements:
                if refinement.target not in known:
                    raise RefinementError(
                        f"({refinement.new_label}:{refinement.target}) in {namespace.display()} "
                        f"matches no requirement of {call.macro}")

            for rule in body:
                if isinstance(rule, (Allow, TypeAttributeSet)):
                    copies.append(LocatedRule(namespace, map_command_names(rule, _bind_names(binding))))
                elif isinstance(rule, IflRequirement):
                    instance = substitute(rule.requirement, binding)
                    refining = [r for r in call.refinements if r.target == rule.label]
                    if not refining:
                        copies.append(self._place(rules, labels, namespace, rule.label, instance))
                    for refinement in refining:
                        merged = self._meet(self._canonical(instance, namespace, rules),
                                            self._canonical(refinement.requirement, namespace, rules),
                                            refinement, namespace)
                        copies.append(self._place(rules, labels, namespace,
                                                  refinement.new_label, merged))
        return rules.with_added(copies)

    def _canonical(self, requirement, namespace, rules):
        """Resolve names the way phase 6 will, so that meets compare declarations."""
        if rules.in_macro(namespace):
            return requirement

        def resolve(node):
            if not isinstance(node, QualifiedName):
                return node
            found = eval_or(namespace, GLOBAL, 'type', node, rules)
            return found if found is not None else node

        return requirement.map_nodes(resolve)

    def _place(self, rules, labels, namespace, label, requirement):
        """Locate a requirement, suffixing its label when another requirement holds it."""
        taken = labels.get(namespace)
        if taken is None:
            taken = {r.label: r.requirement for r in rules.rules_at(namespace)
                     if isinstance(r, IflRequirement)}
            labels[namespace] = taken
        candidate, ordinal = label, 1
        while candidate in taken and taken[candidate] != requirement:
            ordinal += 1
            candidate = f"{label}_{ordinal}"
        if candidate not in taken:
            if candidate != label:
                self._warn(f"label ({label}) already used in {namespace.display()}; "
                           f"the copy from another call site is labeled ({candidate})")
            taken[candidate] = requirement
        return LocatedRule(namespace, IflRequirement(candidate, requirement))

    def phase5c_drop_expanded(self, rules):
        return rules.filter(lambda r: not (isinstance(r.rule, Call)
                                           and not rules.contains_call(r.rule.macro)))

    # Phase 6

    def phase6_resolve_block_names(self, rules):
        def step(rules):
            out = []
            for located in rules:
                namespace, rule = located.namespace, located.rule
                if isinstance(rule, BLOCK_COMMANDS) and not rules.in_macro(namespace):

                    def resolve(name, namespace=namespace):
                        if name.anchored:
                            return name
                        found = eval_or(namespace, GLOBAL, 'type', name, rules)
                        if found is None:
                            raise UnresolvedNameError(namespace.display(), 'type', name)
                        return found

                    rule = map_command_names(rule, resolve)
                out.append(LocatedRule(namespace, rule))
            return RuleSet(out)
        return _fixpoint(rules, step)


def normalize(rules, warnings=None, search_budget=DEFAULT_SEARCH_BUDGET):
    """
    Normalize a parsed configuration.

    Args:
        rules: Parsed RuleSet
        warnings: Optional list collecting diagnostics
        search_budget: Refinement search budget used by meets

    Returns:
        RuleSet in normal form
    """
    return Normalizer(search_budget, warnings).run(rules).gamma


def strip_ifl(rules):
    """Drop every requirement and refinement, keeping all other rules."""
    out = []
    for located in rules:
        rule = located.rule
        if isinstance(rule, IflRequirement):
            continue
        if isinstance(rule, Call) and rule.refinements:
            rule = Call(rule.macro, rule.args, ())
        elif isinstance(rule, BlockInherit) and rule.refinements:
            rule = BlockInherit(rule.block, ())
        out.append(LocatedRule(located.namespace, rule))
    return RuleSet(out)
