"""
Named registries for dtcover.

A ``Registry`` is a thread-safe mapping from names to objects. dtcover uses
it for the pluggable parts of the engine: the identity checks driven by
``dtcover verify`` and the built-in curve families (``I3``, ``A4``, ...)
accepted by ``--family``. New entries can be added with the decorator form::

    >>> from dtcover.registry import Registry, register
    >>> checks = Registry("checks")
    >>> @register(checks, "always-pass")
    ... def always_pass(context):
    ...     return []
    >>> "always-pass" in checks
    True
"""

from threading import RLock
from typing import Callable, Dict, Generic, List, Optional, TypeVar

from .errors import DuplicateKeyError

T = TypeVar("T")


class Registry(Generic[T]):
    """Thread-safe name -> object registry."""

    def __init__(self, name: str):
        self.name = name
        self._registry_map: Dict[str, T] = {}
        self._lock = RLock()

    def _register(self, key: str, obj: T) -> None:
        with self._lock:
            if key in self._registry_map:
                raise DuplicateKeyError(f"{self.name}: '{key}' already registered.")
            self._registry_map[key] = obj

    def register(self, key: Optional[str] = None) -> Callable[[T], T]:
        """Decorator to register an object under ``key`` (default: its name)."""

        def wrapper(obj: T) -> T:
            self._register(key or getattr(obj, "__name__"), obj)
            return obj

        return wrapper

    def add(self, key: str, obj: T) -> None:
        """Explicit addition of an object to the registry."""
        self._register(key, obj)

    def get(self, key: str) -> T:
        """Get an object; unknown keys raise ``KeyError`` naming the choices."""
        with self._lock:
            try:
                return self._registry_map[key]
            except KeyError:
                known = ", ".join(sorted(self._registry_map))
                raise KeyError(f"{self.name}: unknown '{key}' (known: {known})")

    def keys(self) -> List[str]:
        """Registered names, sorted."""
        with self._lock:
            return sorted(self._registry_map)

    def __contains__(self, key: str) -> bool:
        with self._lock:
            return key in self._registry_map

    def __len__(self) -> int:
        with self._lock:
            return len(self._registry_map)

    def __repr__(self) -> str:
        return f"<Registry name={self.name} size={len(self)}>"


def register(registry: Registry[T], key: Optional[str] = None) -> Callable[[T], T]:
    """Universal decorator to register in any Registry."""

    def decorator(obj: T) -> T:
        registry.add(key or getattr(obj, "__name__"), obj)
        return obj

    return decorator
