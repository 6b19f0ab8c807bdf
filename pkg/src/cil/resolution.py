"""
Name resolution
---------------
eval_name looks a name up in one namespace, eval_bar walks outwards through
the enclosing blocks (stopping before the global namespace), and eval_or
tries a first namespace and then falls back to a second one, usually the
global namespace. None stands for an unresolvable name.
"""

from src.cil.names import QualifiedName

NAME_KINDS = ('type', 'typeattribute', 'block', 'macro')


def eval_name(sigma, kind, name, rules):
    """
    Resolve name in namespace sigma.

    Args:
        sigma: Anchored namespace
        kind: One of NAME_KINDS; 'type' also accepts typeattributes
        name: QualifiedName to resolve
        rules: RuleSet providing the declarations

    Returns:
        Anchored QualifiedName or None
    """
    if name.anchored:
        return name
    candidate = sigma.join(name)
    if rules.declares(candidate, kind):
        return candidate
    if kind == 'type' and rules.declares(candidate, 'typeattribute'):
        return candidate
    return None


def eval_bar(sigma, kind, name, rules):
    """Resolve name in sigma, then in each enclosing namespace below the global one."""
    found = eval_name(sigma, kind, name, rules)
    while found is None and len(sigma.path) > 1:
        sigma = sigma.parent
        found = eval_name(sigma, kind, name, rules)
    return found


def eval_or(sigma, fallback, kind, name, rules):
    """Resolve name around sigma, otherwise around fallback."""
    found = eval_bar(sigma, kind, name, rules)
    if found is None:
        found = eval_bar(fallback, kind, name, rules)
    return found
