"""
Check Registry
==============

Named verification checks that the harness can select and run. A check is
a function ``(config) -> CheckOutcome | None`` decorated with ``@check``;
returning ``None`` means the check does not apply to this configuration
(for example column swaps at rank 1).

Usage:
    from src.checks import CheckRegistry, check

    @check("lemma1", group="lemma", description="X_j X_i = q X_i X_j")
    def lemma1(config):
        return lemma1_check(config.rank, config.arith, config.evals, config.seed)

    registry = CheckRegistry()
    registry.add_check(lemma1)
    registry.names("lemma")     # ['lemma1']
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from src.protocol import CHECK_GROUPS


@dataclass
class CheckInfo:
    """Information about a check."""
    name: str
    function: Callable
    group: str
    description: str
    exact: bool = False


def check(name: str, group: str, description: str = None, exact: bool = False):
    """
    Decorator to mark a function as a verification check.

    Args:
        name: Check name, as used by ``--lemma`` and in reports
        group: One of theorem, lemma, classical, informational
        description: One-line description for ``main.py list``
        exact: True when the check never uses the arithmetic mode
    """
    if group not in CHECK_GROUPS:
        raise ValueError(f"unknown check group '{group}', expected one of {CHECK_GROUPS}")

    def decorator(func: Callable) -> Callable:
        func._check_name = name
        func._check_group = group
        func._check_description = description or (func.__doc__ or f"Run {name}").strip().splitlines()[0]
        func._check_exact = exact
        return func

    return decorator


class CheckRegistry:
    """Ordered registry of checks; registration order is execution order."""

    def __init__(self):
        self.checks: Dict[str, CheckInfo] = {}

    def add_check(self, func: Callable) -> None:
        if not hasattr(func, "_check_name"):
            raise ValueError("Function must be decorated with @check")
        if func._check_name in self.checks:
            raise ValueError(f"check '{func._check_name}' is already registered")
        self.checks[func._check_name] = CheckInfo(
            name=func._check_name,
            function=func,
            group=func._check_group,
            description=func._check_description,
            exact=func._check_exact,
        )

    def remove_check(self, name: str) -> bool:
        if name in self.checks:
            del self.checks[name]
            return True
        return False

    def get_check(self, name: str) -> Optional[CheckInfo]:
        return self.checks.get(name)

    def names(self, group: Optional[str] = None) -> List[str]:
        return [name for name, info in self.checks.items() if group is None or info.group == group]

    def select(self, groups: List[str], names: Optional[List[str]] = None) -> List[CheckInfo]:
        """Checks in the given groups, narrowed to ``names`` when that list is non-empty."""
        selected = [info for info in self.checks.values() if info.group in groups]
        if names:
            unknown = sorted(set(names) - set(self.checks))
            if unknown:
                raise ValueError(f"unknown checks: {', '.join(unknown)}")
            selected = [info for info in selected if info.name in names]
        return selected

    def help_text(self) -> str:
        lines = []
        for group in CHECK_GROUPS:
            infos = [info for info in self.checks.values() if info.group == group]
            if not infos:
                continue
            lines.append(f"{group}:")
            for info in infos:
                lines.append(f"  {info.name:<24} {info.description}")
        return "\n".join(lines)
