"""
Test Check Registry
===================
"""

import pytest

from src.checks import CheckRegistry, check
from src.protocol import CheckOutcome


@check("always", "lemma", "Always passes")
def always(config):
    return {}, CheckOutcome(True)


@check("documented", "informational")
def documented(config):
    """First docstring line.

    More detail.
    """
    return None


def test_decorator_records_metadata():
    assert always._check_name == "always"
    assert always._check_group == "lemma"
    assert always._check_description == "Always passes"
    assert not always._check_exact
    assert documented._check_description == "First docstring line."


def test_unknown_group_is_rejected():
    with pytest.raises(ValueError):
        check("x", "nonsense")


def test_registry_add_select_remove():
    registry = CheckRegistry()
    registry.add_check(always)
    registry.add_check(documented)
    assert registry.names() == ["always", "documented"]
    assert registry.names("lemma") == ["always"]
    assert [info.name for info in registry.select(["lemma", "informational"], ["always"])] == ["always"]
    assert registry.get_check("always").function is always
    assert "always" in registry.help_text()
    assert registry.remove_check("always")
    assert not registry.remove_check("always")
    assert registry.get_check("always") is None


def test_registry_rejects_undecorated_and_duplicates():
    registry = CheckRegistry()
    with pytest.raises(ValueError):
        registry.add_check(lambda config: None)
    registry.add_check(always)
    with pytest.raises(ValueError):
        registry.add_check(always)
    with pytest.raises(ValueError):
        registry.select(["lemma"], ["missing"])
