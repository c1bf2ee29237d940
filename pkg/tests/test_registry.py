"""
Tests for the registry.py module and the built-in registries.
"""

# mypy: ignore-errors

import pytest

from dtcover import FAMILIES, IDENTITIES, Registry, register
from dtcover.errors import ConfigurationError, DuplicateKeyError
from dtcover.families import family_graph
from dtcover.graph import ShapeKind, classify


class TestRegistry:
    """Tests for the Registry class."""

    def test_init(self) -> None:
        """
        Scenario: Initialization of a new registry

        Expected:
        - The name of the registry is correctly defined
        - The registry is empty
        """
        registry = Registry("checks")
        assert registry.name == "checks"
        assert len(registry) == 0
        assert registry.keys() == []

    def test_register_decorator_uses_function_name(self) -> None:
        """
        Scenario: Registration of a function with the method decorator and no key

        Expected:
        - The function is registered under its own name
        - The decorator returns the function unchanged
        """
        registry = Registry("checks")

        @registry.register()
        def always_pass(context):
            return []

        assert "always_pass" in registry
        assert registry.get("always_pass") is always_pass
        assert always_pass(None) == []

    def test_module_register_with_key(self) -> None:
        """
        Scenario: Registration through the module-level decorator with a key

        Expected:
        - The object is stored under the given key
        """
        registry = Registry("checks")

        @register(registry, "custom")
        def runner(context):
            return []

        assert registry.keys() == ["custom"]
        assert registry.get("custom") is runner

    def test_duplicate_key(self) -> None:
        """
        Scenario: The same key is registered twice

        Expected:
        - DuplicateKeyError is raised, which is also a ValueError
        - The first object is kept
        """
        registry = Registry("checks")
        registry.add("key", 1)
        with pytest.raises(DuplicateKeyError, match="already registered"):
            registry.add("key", 2)
        with pytest.raises(ValueError):
            registry.add("key", 3)
        assert registry.get("key") == 1

    def test_unknown_key_lists_choices(self) -> None:
        """
        Scenario: Retrieval of a key that does not exist

        Expected:
        - KeyError naming the known keys
        """
        registry = Registry("checks")
        registry.add("b", 1)
        registry.add("a", 2)
        with pytest.raises(KeyError, match="known: a, b"):
            registry.get("missing")

    def test_keys_are_sorted(self) -> None:
        registry = Registry("checks")
        for key in ("zeta", "alpha", "mu"):
            registry.add(key, key)
        assert registry.keys() == ["alpha", "mu", "zeta"]
        assert repr(registry) == "<Registry name=checks size=3>"


class TestBuiltinRegistries:
    """Tests for the families and identities shipped with the package."""

    def test_identity_names(self) -> None:
        """
        Scenario: The identity checks available to ``dtcover verify``

        Expected:
        - Every documented identity is registered
        """
        assert IDENTITIES.keys() == [
            "descent-dtpar",
            "descent-n1",
            "euler-counterexample",
            "log-form",
            "telescoping",
        ]

    def test_family_names(self) -> None:
        assert {"I", "A", "D", "E", "star", "theta", "two-node"} <= set(FAMILIES.keys())

    @pytest.mark.parametrize(
        "name, kind, label",
        [
            ("I3", ShapeKind.CYCLE, "I3"),
            ("A4", ShapeKind.CHAIN, "A4"),
            ("D4", ShapeKind.ADE_TREE, "D4"),
            ("D6", ShapeKind.ADE_TREE, "D6"),
            ("E6", ShapeKind.ADE_TREE, "E6"),
            ("E8", ShapeKind.ADE_TREE, "E8"),
            ("star", ShapeKind.GENERAL_TREE, "tree"),
            ("theta", ShapeKind.HIGHER_GENUS, "genus 2"),
            ("two-node", ShapeKind.HIGHER_GENUS, "genus 2"),
        ],
    )
    def test_family_shapes(self, name, kind, label) -> None:
        """
        Scenario: Build each family and classify its full support

        Expected:
        - The shape kind and label match the family
        """
        graph = family_graph(name)
        full = graph.class_from_vector([1] * graph.delta_c)
        shape = classify(graph, full)
        assert shape.kind is kind
        assert shape.label == label

    @pytest.mark.parametrize("name", ["X3", "I0", "E9", "D3", "3I", ""])
    def test_bad_family_names(self, name) -> None:
        """
        Scenario: Unknown family, bad size or malformed name

        Expected:
        - ConfigurationError
        """
        with pytest.raises(ConfigurationError):
            family_graph(name)
